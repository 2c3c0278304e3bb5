// Acceptance checks, one PASS/FAIL line per criterion. Exit status is nonzero
// when any criterion fails.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "soue/cli.hpp"
#include "soue/dtw.hpp"
#include "soue/evalharness.hpp"
#include "soue/pipeline.hpp"
#include "soue/topology.hpp"

using namespace soue;
namespace fs = std::filesystem;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

int failures = 0;

void report(int id, bool ok, const std::string& detail) {
  std::printf("%s criterion %d: %s\n", ok ? "PASS" : "FAIL", id, detail.c_str());
  std::fflush(stdout);
  if (!ok) ++failures;
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

void dtw_oracle() {
  const auto t0 = Clock::now();
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> val(-5, 5);
  std::size_t bad_d = 0, bad_s = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t u = 3 + rng() % 4;
    std::vector<double> wa(u), wb(u);
    for (auto& x : wa) x = val(rng);
    for (auto& x : wb) x = val(rng);
    const auto va = to_trend_vectors(std::span<const double>(wa), 1.0);
    const auto vb = to_trend_vectors(std::span<const double>(wb), 1.0);
    const auto da = oracle::deltas(wa);
    const auto db = oracle::deltas(wb);
    std::vector<std::vector<double>> cost(da.size(), std::vector<double>(db.size()));
    for (std::size_t i = 0; i < da.size(); ++i)
      for (std::size_t j = 0; j < db.size(); ++j) cost[i][j] = vector_angle(va[i], vb[j]);
    const auto best = oracle::enumerate_paths(cost);
    const auto r = dtw_align(va, vb);
    if (r.cumulative_distance != best.distance || !best.lengths.count(r.path_length)) ++bad_d;
    if (std::abs(r.similarity - oracle::similarity(best.distance, r.path_length)) > 1e-12) ++bad_s;
  }
  const double t = seconds_since(t0);
  report(1, bad_d == 0 && bad_s == 0 && t < 10.0,
         "1000 pairs, " + std::to_string(bad_d) + " distance mismatches, " + std::to_string(bad_s) +
             " similarity mismatches, " + fmt(t) + " s");
}

void invariances() {
  std::mt19937_64 rng(404);
  std::uniform_real_distribution<double> val(-50, 50), shift(-1000, 1000), scale(0.001, 1000);
  double worst_shift = 0, worst_scale = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t u = 2 + rng() % 23;
    std::vector<double> w(u), other(u);
    for (auto& x : w) x = val(rng);
    for (auto& x : other) x = val(rng);
    auto shifted = w;
    const double c = shift(rng);
    for (auto& x : shifted) x += c;
    worst_shift = std::max(worst_shift,
                           std::abs(1.0 - trend_similarity(std::span<const double>(w), std::span<const double>(shifted))));
    const double k = scale(rng);
    auto ws = w, os = other;
    for (auto& x : ws) x *= k;
    for (auto& x : os) x *= k;
    const double s1 = trend_similarity(std::span<const double>(w), std::span<const double>(other), 1.0);
    const double s2 = trend_similarity(std::span<const double>(ws), std::span<const double>(os), k);
    worst_scale = std::max(worst_scale, std::abs(s1 - s2));
  }
  report(2, worst_shift <= 1e-9 && worst_scale <= 1e-9,
         "max |1 - sim(w, w+c)| = " + fmt(worst_shift) + ", max rescale drift = " + fmt(worst_scale));
}

void geodesic() {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> lat(-90, 90), lon(-180, 180);
  double worst = 0;
  bool exact = true;
  for (int trial = 0; trial < 1000; ++trial) {
    const double a = lat(rng), b = lon(rng), c = lat(rng), d = lon(rng);
    worst = std::max(worst, std::abs(geo_distance(a, b, c, d) - oracle::haversine(a, b, c, d)));
    exact = exact && geo_distance(a, b, c, d) == geo_distance(c, d, a, b) && geo_distance(a, b, a, b) == 0.0;
  }
  report(3, worst <= 0.01 && exact,
         "max deviation " + fmt(worst) + " m, symmetry and self-distance " + (exact ? "exact" : "broken"));
}

void matrix_algebra() {
  std::mt19937_64 rng(77);
  std::size_t bad = 0, cases = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 1 + rng() % 50;
    std::vector<NodeRecord> nodes(n);
    for (std::size_t j = 0; j < n; ++j) {
      nodes[j].node_id = std::to_string(j);
      nodes[j].latitude = -28.23 + static_cast<double>(rng() % 2000) * 2e-6;
      nodes[j].longitude = 153.27 + static_cast<double>(rng() % 2000) * 2e-6;
    }
    const auto u = build_node_matrix(nodes, 100.0 + static_cast<double>(rng() % 300));
    std::vector<std::vector<int>> uu(n, std::vector<int>(n));
    std::vector<int> e(n);
    DeploymentVector dv{kAirTemperature, u.node_order, std::vector<std::uint8_t>(n)};
    for (std::size_t j = 0; j < n; ++j) {
      e[j] = static_cast<int>(rng() % 3 != 0);
      dv.entries[j] = static_cast<std::uint8_t>(e[j]);
      for (std::size_t k = 0; k < n; ++k) uu[j][k] = u.cells.at(j, k);
    }
    const auto a = build_sensor_matrix(dv, u);
    const auto want = oracle::sensor_matrix(e, uu);
    ++cases;
    bool ok = a.cells.symmetric();
    for (std::size_t j = 0; j < n; ++j) {
      ok = ok && a.cells.at(j, j) == 0;
      for (std::size_t k = 0; k < n; ++k) ok = ok && a.cells.at(j, k) == want[j][k] && a.cells.at(j, k) <= uu[j][k];
    }
    bad += !ok;
  }
  report(4, bad == 0, std::to_string(cases) + " random deployments, " + std::to_string(bad) + " mismatches");
}

// Counts windows whose verdict differs from the expected pattern.
std::size_t golden_mismatches(const fixture::Scenario& s, Verdict expected) {
  const auto r = run_detection(s.tables, s.rules, DetectionConfig{}, s.range);
  const auto touched = fixture::touched_windows(s);
  std::size_t bad = 0;
  for (std::size_t i = 0; i < r.properties.size(); ++i) {
    for (std::size_t j = 0; j < r.node_order.size(); ++j) {
      const bool altered = std::find(s.altered.begin(), s.altered.end(),
                                     std::pair{r.properties[i].name(), r.node_order[j]}) != s.altered.end();
      for (std::size_t l = 0; l < r.plan.count; ++l) {
        const Verdict want = altered && touched.count(l) ? expected : Verdict::Normal;
        bad += r.decisions[i].at(j, l).verdict != want;
      }
    }
  }
  return bad;
}

void golden() {
  const auto a = golden_mismatches(fixture::node1_error(), Verdict::ErroneousOutlier);
  const auto b = golden_mismatches(fixture::node10_event(), Verdict::UnusualEvent);
  report(5, a == 0 && b == 0,
         "node 1 error: " + std::to_string(a) + " mismatched windows, node 10 event: " + std::to_string(b));
}

struct SweepRun {
  std::vector<MetricsRow> rows;
  double seconds = 0;
};

const MetricsRow& at_beta(const std::vector<MetricsRow>& rows, double beta) {
  for (const auto& r : rows)
    if (std::abs(r.beta - beta) < 1e-9) return r;
  throw std::runtime_error("beta " + fmt(beta) + " missing from sweep");
}

SweepRun run_mode(const SyntheticDataset& clean, InjectionMode mode, Clock::time_point t0) {
  const auto inj = inject(clean, InjectionSpec::defaults(mode, 1));
  DetectionConfig cfg;
  cfg.active_predicates = predicates_for_mode(mode);
  const auto tables = inj.dataset.tables(false);
  const DetectionSession session(tables, inj.dataset.series(), rules_for_mode(mode), cfg, inj.dataset.range());
  SweepRun out;
  out.rows = sweep(session, inj.truth, 0.70, 0.98, 0.01, target_label(mode));
  out.seconds = seconds_since(t0);
  return out;
}

bool recall_at_least(const std::vector<MetricsRow>& rows, double lo, double hi, double floor, double& worst) {
  worst = 1.0;
  bool ok = true;
  for (const auto& r : rows) {
    if (r.beta < lo - 1e-9 || r.beta > hi + 1e-9) continue;
    const double rec = r.recall.value_or(0.0);
    worst = std::min(worst, rec);
    ok = ok && r.recall && rec >= floor;
  }
  return ok;
}

bool monotone_suspicious(const std::vector<MetricsRow>& rows) {
  for (std::size_t i = 1; i < rows.size(); ++i)
    if (rows[i].suspicious < rows[i - 1].suspicious) return false;
  return rows.size() == 29;
}

void detection_analogs() {
  auto t0 = Clock::now();
  const auto clean = generate_clean(CleanConfig{});
  const double gen_s = seconds_since(t0);

  const auto outl = run_mode(clean, InjectionMode::Outliers, t0);
  {
    double worst = 0;
    const bool rec = recall_at_least(outl.rows, 0.85, 0.92, 0.85, worst);
    const auto& p90 = at_beta(outl.rows, 0.90);
    const auto& p98 = at_beta(outl.rows, 0.98);
    const bool prec = p90.precision && p98.precision && *p98.precision < *p90.precision;
    report(6, rec && prec && outl.seconds < 120.0,
           "min recall over [0.85, 0.92] = " + fmt(worst) + ", precision " + fmt(p90.precision.value_or(-1)) +
               " at 0.90 vs " + fmt(p98.precision.value_or(-1)) + " at 0.98, " + fmt(outl.seconds) + " s");
  }

  std::vector<SweepRun> events;
  std::string detail;
  bool ok7 = true;
  for (const auto mode : {InjectionMode::EventsStrong, InjectionMode::EventsPositive}) {
    const auto t1 = Clock::now();
    auto run = run_mode(clean, mode, t1);
    run.seconds += gen_s;
    double worst = 0;
    const bool rec = recall_at_least(run.rows, 0.86, 0.90, 0.80, worst);
    const auto& p88 = at_beta(run.rows, 0.88);
    const auto& p98 = at_beta(run.rows, 0.98);
    const bool prec = p88.precision && p98.precision && *p98.precision < *p88.precision;
    ok7 = ok7 && rec && prec && run.seconds < 120.0;
    detail += std::string(to_string(mode)) + ": min recall " + fmt(worst) + ", precision " +
              fmt(p88.precision.value_or(-1)) + " at 0.88 vs " + fmt(p98.precision.value_or(-1)) + " at 0.98, " +
              fmt(run.seconds) + " s; ";
    events.push_back(std::move(run));
  }
  detail.resize(detail.size() - 2);
  report(7, ok7, detail);

  {
    const auto tables = clean.tables(false);
    DetectionConfig cfg;
    const DetectionSession session(tables, clean.series(), rules_for_mode(InjectionMode::Outliers), cfg,
                                   clean.range());
    const auto r = session.classify(0.90);
    std::size_t eo = 0, ue = 0;
    for (const auto& d : r.decisions) {
      eo += d.count(Verdict::ErroneousOutlier);
      ue += d.count(Verdict::UnusualEvent);
    }
    report(8, eo == 0 && ue == 0,
           std::to_string(eo) + " ErroneousOutlier and " + std::to_string(ue) + " UnusualEvent verdicts at 0.90");
  }

  const bool m = monotone_suspicious(outl.rows) && monotone_suspicious(events[0].rows) &&
                 monotone_suspicious(events[1].rows);
  report(9, m,
         "suspicious counts " + std::to_string(outl.rows.front().suspicious) + ".." +
             std::to_string(outl.rows.back().suspicious) + " (outliers), " +
             std::to_string(events[0].rows.front().suspicious) + ".." +
             std::to_string(events[0].rows.back().suspicious) + " (events-strong), " +
             std::to_string(events[1].rows.front().suspicious) + ".." +
             std::to_string(events[1].rows.back().suspicious) + " (events-positive)");
}

void scaling() {
  std::vector<double> medians;
  for (const std::size_t n : {18u, 36u, 72u}) {
    CleanConfig c;
    c.nodes = n;
    c.days = 10;
    const auto d = generate_clean(c);
    const auto tables = d.tables();
    std::vector<double> times;
    for (int rep = 0; rep < 3; ++rep) {
      const auto t0 = Clock::now();
      const auto r = run_detection(tables, rules_for_mode(InjectionMode::Outliers), DetectionConfig{}, d.range());
      times.push_back(seconds_since(t0));
    }
    std::sort(times.begin(), times.end());
    medians.push_back(times[1]);
  }
  const double r1 = medians[1] / medians[0];
  const double r2 = medians[2] / medians[1];
  report(10, r1 <= 4.5 && r2 <= 4.5,
         "median times " + fmt(medians[0]) + " / " + fmt(medians[1]) + " / " + fmt(medians[2]) + " s, ratios " +
             fmt(r1) + " and " + fmt(r2));
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

int cli(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = run_cli(args, out, err);
  if (code != 0) std::fprintf(stderr, "%s", err.str().c_str());
  return code;
}

void determinism() {
  const auto root = fs::temp_directory_path() / "soue_acceptance_determinism";
  fs::remove_all(root);
  std::vector<std::string> reports, metrics;
  bool ran = true;
  for (const char* tag : {"a", "b"}) {
    const auto dir = root / tag;
    fs::create_directories(dir);
    const auto p = [&](const char* f) { return (dir / f).string(); };
    ran = ran && cli({"gen", "--mode", "events-strong", "--seed", "11", "--out", dir.string()}) == 0;
    const std::vector<std::string> inputs{"--nodes", p("nodes.csv"), "--sensors", p("sensors.csv"),
                                          "--obs",   p("observations.csv"), "--rules", p("rules.txt")};
    auto det = inputs;
    det.insert(det.begin(), "detect");
    det.insert(det.end(), {"--out", p("report.json")});
    ran = ran && cli(det) == 0;
    auto sw = inputs;
    sw.insert(sw.begin(), "sweep");
    sw.insert(sw.end(), {"--truth", p("truth.csv"), "--label", "UnusualEvent", "--out", p("metrics.csv")});
    ran = ran && cli(sw) == 0;
    reports.push_back(slurp(dir / "report.json"));
    metrics.push_back(slurp(dir / "metrics.csv"));
  }
  const bool same = ran && !reports[0].empty() && reports[0] == reports[1] && metrics[0] == metrics[1];
  report(11, same,
         std::string(ran ? "runs completed" : "a run failed") + ", reports " +
             (reports[0] == reports[1] ? "identical" : "differ") + " (" + std::to_string(reports[0].size()) +
             " bytes), metrics " + (metrics[0] == metrics[1] ? "identical" : "differ"));
  fs::remove_all(root);
}

void guarded(int id, const std::function<void()>& f) {
  try {
    f();
  } catch (const std::exception& e) {
    report(id, false, std::string("exception: ") + e.what());
  }
}

}  // namespace

int main() {
  guarded(1, dtw_oracle);
  guarded(2, invariances);
  guarded(3, geodesic);
  guarded(4, matrix_algebra);
  guarded(5, golden);
  guarded(6, detection_analogs);
  guarded(10, scaling);
  guarded(11, determinism);
  std::printf("%d criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
