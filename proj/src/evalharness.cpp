#include "soue/evalharness.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <ostream>
#include <random>
#include <unordered_map>

#include "soue/csv.hpp"
#include "soue/errors.hpp"
#include "soue/topology.hpp"

namespace soue {
namespace {

// Distributions from <random> are implementation-defined, so draws are built
// directly on the engine output to keep datasets identical across toolchains.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  std::size_t below(std::size_t n) { return static_cast<std::size_t>(uniform() * static_cast<double>(n)); }

  double normal() {
    if (spare_) {
      const double v = *spare_;
      spare_.reset();
      return v;
    }
    double u = 0.0;
    while (u <= 0.0) u = uniform();
    const double r = std::sqrt(-2.0 * std::log(u));
    const double t = 2.0 * std::numbers::pi * uniform();
    spare_ = r * std::sin(t);
    return r * std::cos(t);
  }

 private:
  std::mt19937_64 engine_;
  std::optional<double> spare_;
};

std::uint64_t mix(std::uint64_t seed, std::uint64_t salt) {
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ull * (salt + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

double round4(double v) { return std::round(v * 1e4) / 1e4; }

std::size_t layout_columns(std::size_t n) {
  auto cols = static_cast<std::size_t>(std::ceil(std::sqrt(static_cast<double>(n))));
  // a lone node in the last row would have only two neighbors
  while (cols < n && n % cols == 1) ++cols;
  return std::max<std::size_t>(cols, 1);
}

std::vector<double> shared_signal(const SignalModel& m, std::size_t slots, EpochSeconds step, Rng& rng) {
  const double per_day = 86400.0 / static_cast<double>(step);
  constexpr double two_pi = 2.0 * std::numbers::pi;
  const double drift_phase_a = rng.uniform(0.0, two_pi);
  const double drift_phase_b = rng.uniform(0.0, two_pi);

  // Doubly smoothed AR(1) noise, normalized afterwards to the requested amplitude.
  std::vector<double> weather(slots, 0.0);
  double a = 0.0;
  double b = 0.0;
  for (std::size_t s = 0; s < slots; ++s) {
    a = 0.97 * a + rng.normal();
    b = 0.97 * b + 0.03 * a;
    weather[s] = b;
  }
  double sq = 0.0;
  for (const double w : weather) sq += w * w;
  const double rms = slots ? std::sqrt(sq / static_cast<double>(slots)) : 0.0;

  std::vector<double> out(slots);
  for (std::size_t s = 0; s < slots; ++s) {
    const double day = static_cast<double>(s) / per_day;
    double v = m.diurnal_amplitude * std::sin(two_pi * (day - m.diurnal_phase));
    v += m.semidiurnal_amplitude * std::sin(2.0 * two_pi * day);
    v += m.drift_amplitude * (0.6 * std::sin(two_pi * day / 3.7 + drift_phase_a) +
                              0.4 * std::sin(two_pi * day / 9.1 + drift_phase_b));
    if (rms > 0.0) v += m.weather_amplitude * weather[s] / rms;
    out[s] = v;
  }
  return out;
}

std::string sensor_id_for(const std::string& node_id, const PropertyKind& p) {
  return node_id + "-" + p.name();
}

struct Placement {
  std::size_t node = 0;
  std::size_t start = 0;
};

// Places `rounds` x `per_round` segments. Within a round no two segments overlap
// in time; any two segments on the same node or on nodes within `radius` keep
// at least `gap` slots apart.
std::vector<std::vector<Placement>> place_segments(const SyntheticDataset& d, const InjectionSpec& spec,
                                                   Rng& rng) {
  const std::size_t n = d.nodes.size();
  const std::size_t len = spec.segment_length;
  if (spec.rounds == 0 || spec.streams_per_round == 0) return {};
  if (len == 0) throw ConfigError("segment length must be positive");
  if (n == 0 || d.grid.slots < len) {
    throw ConfigError("cannot place non-overlapping segments: time range shorter than one segment");
  }
  if (spec.streams_per_round > n) {
    throw ConfigError("cannot place non-overlapping segments: more streams per round than nodes");
  }

  std::vector<std::vector<std::uint8_t>> close(n, std::vector<std::uint8_t>(n, 0));
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t k = 0; k < n; ++k) {
      close[j][k] = j == k || geo_distance(d.nodes[j].latitude, d.nodes[j].longitude, d.nodes[k].latitude,
                                           d.nodes[k].longitude) <= spec.exclusion_radius_m;
    }
  }

  std::vector<std::vector<std::size_t>> starts_by_node(n);
  const auto apart = [&](std::size_t a, std::size_t b, std::size_t gap) {
    return a >= b ? a - b >= len + gap : b - a >= len + gap;
  };

  constexpr std::size_t kAttempts = 20000;
  const std::size_t positions = d.grid.slots - len + 1;
  std::vector<std::vector<Placement>> rounds;
  for (std::size_t r = 0; r < spec.rounds; ++r) {
    std::vector<Placement> round;
    for (std::size_t c = 0; c < spec.streams_per_round; ++c) {
      bool placed = false;
      for (std::size_t attempt = 0; attempt < kAttempts && !placed; ++attempt) {
        const Placement p{rng.below(n), rng.below(positions)};
        const bool ok_round = std::all_of(round.begin(), round.end(), [&](const Placement& q) {
          return q.node != p.node && apart(p.start, q.start, 0);
        });
        if (!ok_round) continue;
        bool ok = true;
        for (std::size_t k = 0; k < n && ok; ++k) {
          if (!close[p.node][k]) continue;
          for (const std::size_t s : starts_by_node[k]) {
            if (!apart(p.start, s, spec.min_gap)) {
              ok = false;
              break;
            }
          }
        }
        if (!ok) continue;
        round.push_back(p);
        starts_by_node[p.node].push_back(p.start);
        placed = true;
      }
      if (!placed) {
        throw ConfigError("cannot place non-overlapping segments: injection spec too dense for the time range");
      }
    }
    rounds.push_back(std::move(round));
  }
  return rounds;
}

void sort_truth(GroundTruth& t) {
  std::sort(t.segments.begin(), t.segments.end(), [](const TruthSegment& a, const TruthSegment& b) {
    if (a.node_id != b.node_id) return natural_less(a.node_id, b.node_id);
    if (a.property != b.property) return a.property < b.property;
    return a.slot_start < b.slot_start;
  });
}

std::vector<double>& values_of(SyntheticDataset& d, const std::string& node_id, const PropertyKind& p) {
  const auto it = d.values.find(d.sensor(node_id, p).sensor_id);
  return it->second;
}

}  // namespace

std::map<std::string, SignalModel> CleanConfig::default_signals() {
  std::map<std::string, SignalModel> m;
  m["air_temperature"] = {.mean = 15.0,
                          .diurnal_amplitude = 5.0,
                          .diurnal_phase = 0.375,
                          .semidiurnal_amplitude = 0.6,
                          .drift_amplitude = 3.0,
                          .weather_amplitude = 1.0,
                          .node_offset = 0.8,
                          .node_gain = 0.08,
                          .noise = 0.20,
                          .clamp_lo = -20.0,
                          .clamp_hi = 50.0,
                          .unit = "C"};
  m["relative_humidity"] = {.mean = 72.0,
                            .diurnal_amplitude = -14.0,
                            .diurnal_phase = 0.375,
                            .semidiurnal_amplitude = 1.5,
                            .drift_amplitude = 6.0,
                            .weather_amplitude = 3.0,
                            .node_offset = 3.0,
                            .node_gain = 0.08,
                            .noise = 0.25,
                            .clamp_lo = 0.0,
                            .clamp_hi = 100.0,
                            .unit = "%"};
  m["air_pressure"] = {.mean = 1013.0,
                       .diurnal_amplitude = 0.4,
                       .diurnal_phase = 0.1,
                       .semidiurnal_amplitude = 0.8,
                       .drift_amplitude = 5.0,
                       .weather_amplitude = 1.5,
                       .node_offset = 1.5,
                       .node_gain = 0.03,
                       .noise = 0.20,
                       .clamp_lo = 900.0,
                       .clamp_hi = 1100.0,
                       .unit = "hPa"};
  return m;
}

const SensorRecord& SyntheticDataset::sensor(const std::string& node_id, const PropertyKind& property) const {
  for (const auto& s : sensors) {
    if (s.node_id == node_id && s.property == property) return s;
  }
  throw ReferenceError("sensor for node", node_id + "/" + property.name());
}

std::size_t SyntheticDataset::observation_count(const PropertyKind& property) const {
  std::size_t n = 0;
  for (const auto& s : sensors) {
    if (s.property == property) n += values.at(s.sensor_id).size();
  }
  return n;
}

std::vector<Observation> SyntheticDataset::observations() const {
  std::vector<Observation> out;
  for (const auto& s : sensors) {
    const auto& v = values.at(s.sensor_id);
    const auto unit = units.count(s.property.name()) ? units.at(s.property.name()) : std::string{};
    for (std::size_t i = 0; i < v.size(); ++i) {
      out.push_back({s.sensor_id, grid.slot_time(i), s.property, v[i], unit});
    }
  }
  return out;
}

NetworkTables SyntheticDataset::tables(bool with_observations) const {
  NetworkTables t{nodes, sensors, {}};
  if (with_observations) t.observations = observations();
  return t;
}

std::map<std::string, ObservationSeries> SyntheticDataset::series() const {
  std::map<std::string, ObservationSeries> out;
  for (const auto& s : sensors) {
    const auto& v = values.at(s.sensor_id);
    ObservationSeries o{s.sensor_id, s.property, grid, {v.begin(), v.end()}};
    out.emplace(s.sensor_id, std::move(o));
  }
  return out;
}

SyntheticDataset generate_clean(const CleanConfig& c) {
  if (c.nodes == 0) throw ConfigError("node count must be positive");
  if (c.days == 0) throw ConfigError("day count must be positive");
  if (c.grid_step <= 0 || 86400 % c.grid_step != 0) throw ConfigError("grid step must divide one day");

  Rng rng(c.seed);
  SyntheticDataset d;
  d.grid = {c.start, c.grid_step, static_cast<std::size_t>(c.days * 86400 / c.grid_step)};

  const std::size_t cols = layout_columns(c.nodes);
  const double lat0 = c.origin_latitude * std::numbers::pi / 180.0;
  constexpr double to_deg = 180.0 / std::numbers::pi;
  for (std::size_t j = 0; j < c.nodes; ++j) {
    const double x = static_cast<double>(j % cols) * c.spacing_m + rng.uniform(-c.jitter_m, c.jitter_m);
    const double y = static_cast<double>(j / cols) * c.spacing_m + rng.uniform(-c.jitter_m, c.jitter_m);
    NodeRecord node;
    node.node_id = std::to_string(j + 1);
    node.latitude = c.origin_latitude - y / kEarthRadiusMeters * to_deg;
    node.longitude = c.origin_longitude + x / (kEarthRadiusMeters * std::cos(lat0)) * to_deg;
    node.installed_at = c.start;
    d.nodes.push_back(node);
  }

  for (const auto& [name, model] : c.signals) {
    const PropertyKind p(name);
    d.properties.push_back(p);
    d.units[name] = model.unit;
    const auto base = shared_signal(model, d.grid.slots, c.grid_step, rng);
    for (const auto& node : d.nodes) {
      SensorRecord s;
      s.sensor_id = sensor_id_for(node.node_id, p);
      s.node_id = node.node_id;
      s.property = p;
      s.installed_at = c.start;
      d.sensors.push_back(s);

      const double offset = rng.uniform(-model.node_offset, model.node_offset);
      const double gain = 1.0 + rng.uniform(-model.node_gain, model.node_gain);
      std::vector<double> v(d.grid.slots);
      for (std::size_t i = 0; i < v.size(); ++i) {
        const double raw = model.mean + offset + gain * base[i] + model.noise * rng.normal();
        v[i] = round4(std::clamp(raw, model.clamp_lo, model.clamp_hi));
      }
      d.values.emplace(s.sensor_id, std::move(v));
    }
  }
  std::sort(d.sensors.begin(), d.sensors.end(), [](const SensorRecord& a, const SensorRecord& b) {
    if (a.node_id != b.node_id) return natural_less(a.node_id, b.node_id);
    return a.property < b.property;
  });
  return d;
}

std::string_view to_string(InjectionMode m) {
  switch (m) {
    case InjectionMode::Outliers: return "outliers";
    case InjectionMode::EventsStrong: return "events-strong";
    case InjectionMode::EventsPositive: return "events-positive";
  }
  return "?";
}

std::optional<InjectionMode> injection_mode_from_string(std::string_view text) {
  for (const auto m : {InjectionMode::Outliers, InjectionMode::EventsStrong, InjectionMode::EventsPositive}) {
    if (to_string(m) == text) return m;
  }
  return std::nullopt;
}

InjectionSpec InjectionSpec::defaults(InjectionMode mode, std::uint64_t seed) {
  InjectionSpec s;
  s.mode = mode;
  s.seed = seed;
  s.rounds = mode == InjectionMode::Outliers ? 15 : 30;
  return s;
}

std::size_t GroundTruth::count(Verdict label) const {
  return static_cast<std::size_t>(
      std::count_if(segments.begin(), segments.end(), [&](const TruthSegment& s) { return s.label == label; }));
}

std::size_t GroundTruth::replaced_observations() const {
  std::size_t n = 0;
  for (const auto& s : segments) n += s.slot_end - s.slot_start + 1;
  return n;
}

InjectedDataset inject_outliers(const SyntheticDataset& clean, const InjectionSpec& spec) {
  if (spec.mode != InjectionMode::Outliers) throw ConfigError("outlier injection needs mode outliers");
  InjectedDataset out{clean, {clean.grid, {}}};
  Rng rng(mix(spec.seed, 1));
  // Both properties share one placement pool so a temperature and a humidity
  // outlier never coincide at a node and masquerade as an event.
  InjectionSpec pooled = spec;
  pooled.rounds = spec.rounds * 2;
  const auto rounds = place_segments(clean, pooled, rng);
  for (std::size_t r = 0; r < rounds.size(); ++r) {
    const PropertyKind& p = r % 2 == 0 ? kAirTemperature : kRelativeHumidity;
    const auto range_it = spec.ranges.find(p.name());
    if (range_it == spec.ranges.end()) throw ConfigError("no outlier value range for " + p.name());
    const ValueRange vr = range_it->second;
    for (const auto& pl : rounds[r]) {
      const auto& node_id = clean.nodes[pl.node].node_id;
      auto& v = values_of(out.dataset, node_id, p);
      for (std::size_t s = pl.start; s < pl.start + spec.segment_length; ++s) v[s] = round4(rng.uniform(vr.lo, vr.hi));
      out.truth.segments.push_back(
          {p, node_id, pl.start, pl.start + spec.segment_length - 1, Verdict::ErroneousOutlier});
    }
  }
  sort_truth(out.truth);
  return out;
}

InjectedDataset inject_events(const SyntheticDataset& clean, const InjectionSpec& spec) {
  if (spec.mode == InjectionMode::Outliers) throw ConfigError("event injection needs an events mode");
  InjectedDataset out{clean, {clean.grid, {}}};
  Rng rng(mix(spec.seed, 2));
  const auto rounds = place_segments(clean, spec, rng);
  const auto t_it = spec.event_step.find(kAirTemperature.name());
  const auto h_it = spec.event_step.find(kRelativeHumidity.name());
  if (t_it == spec.event_step.end() || h_it == spec.event_step.end()) {
    throw ConfigError("event step ranges need air_temperature and relative_humidity");
  }
  const ValueRange ts = t_it->second;
  const ValueRange hs = h_it->second;
  const double coupling = spec.mode == InjectionMode::EventsStrong ? -1.0 : 1.0;
  const auto& hm = CleanConfig::default_signals().at(kRelativeHumidity.name());

  for (const auto& round : rounds) {
    for (const auto& pl : round) {
      const auto& node_id = clean.nodes[pl.node].node_id;
      auto& tv = values_of(out.dataset, node_id, kAirTemperature);
      auto& hv = values_of(out.dataset, node_id, kRelativeHumidity);
      // Humidity heads toward mid-range first so the walk rarely meets its bounds.
      double sign = hv[pl.start] > 50.0 ? -coupling : coupling;
      double dt = 0.0;
      double dh = 0.0;
      for (std::size_t s = pl.start; s < pl.start + spec.segment_length; ++s) {
        if (s > pl.start && rng.uniform() < 0.25) sign = -sign;
        const double u = rng.uniform();
        double step_t = sign * (ts.lo + u * (ts.hi - ts.lo));
        double step_h = coupling * sign * (hs.lo + u * (hs.hi - hs.lo));
        const double next_h = hv[s] + dh + step_h;
        if (next_h < hm.clamp_lo + 1.0 || next_h > hm.clamp_hi - 1.0) {
          sign = -sign;
          step_t = -step_t;
          step_h = -step_h;
        }
        dt += step_t;
        dh += step_h;
        tv[s] = round4(tv[s] + dt);
        hv[s] = round4(std::clamp(hv[s] + dh, hm.clamp_lo, hm.clamp_hi));
      }
      out.truth.segments.push_back(
          {kAirTemperature, node_id, pl.start, pl.start + spec.segment_length - 1, Verdict::UnusualEvent});
      out.truth.segments.push_back(
          {kRelativeHumidity, node_id, pl.start, pl.start + spec.segment_length - 1, Verdict::UnusualEvent});
    }
  }
  sort_truth(out.truth);
  return out;
}

InjectedDataset inject(const SyntheticDataset& clean, const InjectionSpec& spec) {
  return spec.mode == InjectionMode::Outliers ? inject_outliers(clean, spec) : inject_events(clean, spec);
}

RuleSet rules_for_mode(InjectionMode mode) {
  RuleSet r;
  if (mode == InjectionMode::EventsPositive) {
    r.add({kAirTemperature, CorrelationPredicate::Positive, kRelativeHumidity});
  } else {
    r.add({kAirTemperature, CorrelationPredicate::Strong, kRelativeHumidity});
    r.add({kAirTemperature, CorrelationPredicate::Negative, kRelativeHumidity});
  }
  return r;
}

PredicateSet predicates_for_mode(InjectionMode mode) {
  auto p = default_active_predicates();
  if (mode == InjectionMode::EventsPositive) p.insert(CorrelationPredicate::Positive);
  return p;
}

Verdict target_label(InjectionMode mode) {
  return mode == InjectionMode::Outliers ? Verdict::ErroneousOutlier : Verdict::UnusualEvent;
}

void write_truth_csv(std::ostream& out, const GroundTruth& truth) {
  out << "property,node_id,slot_start,slot_end,label\n";
  for (const auto& s : truth.segments) {
    out << s.property.name() << ',' << s.node_id << ',' << s.slot_start << ',' << s.slot_end << ','
        << to_string(s.label) << '\n';
  }
}

GroundTruth read_truth_csv(std::istream& in, const std::string& source) {
  CsvReader csv(in, source, {"property", "node_id", "slot_start", "slot_end", "label"});
  GroundTruth t;
  while (csv.next()) {
    const auto& name = csv.field("property");
    if (!PropertyKind::valid_name(name)) csv.fail("invalid property name '" + name + "'");
    const auto start = csv.field_as_integer("slot_start");
    const auto end = csv.field_as_integer("slot_end");
    if (start < 0 || end < start) csv.fail("slot range must satisfy 0 <= slot_start <= slot_end");
    const auto label = verdict_from_string(csv.field("label"));
    if (!label || (*label != Verdict::ErroneousOutlier && *label != Verdict::UnusualEvent)) {
      csv.fail("label must be ErroneousOutlier or UnusualEvent");
    }
    if (csv.field("node_id").empty()) csv.fail("empty node_id");
    t.segments.push_back({PropertyKind(name), csv.field("node_id"), static_cast<std::size_t>(start),
                          static_cast<std::size_t>(end), *label});
  }
  return t;
}

std::vector<PredictedWindow> anomalous_windows(const DetectionResult& result) {
  std::vector<PredictedWindow> out;
  for (const auto& table : result.decisions) {
    for (std::size_t j = 0; j < table.node_order.size(); ++j) {
      for (std::size_t l = 0; l < table.windows; ++l) {
        const Verdict v = table.at(j, l).verdict;
        if (v != Verdict::ErroneousOutlier && v != Verdict::UnusualEvent) continue;
        out.push_back({table.property, table.node_order[j], result.plan.first_slot(l), result.plan.last_slot(l), v});
      }
    }
  }
  return out;
}

MetricsRow score(const std::vector<PredictedWindow>& predicted, const GroundTruth& truth, Verdict target,
                 double beta) {
  MetricsRow row;
  row.beta = beta;

  using Key = std::pair<std::string, std::string>;  // property, node
  std::map<Key, std::vector<std::size_t>> by_stream;
  for (std::size_t i = 0; i < truth.segments.size(); ++i) {
    const auto& s = truth.segments[i];
    if (s.label == target) by_stream[{s.property.name(), s.node_id}].push_back(i);
  }
  std::vector<std::uint8_t> matched(truth.segments.size(), 0);

  std::vector<const PredictedWindow*> windows;
  for (const auto& w : predicted) {
    if (w.verdict == target) windows.push_back(&w);
  }
  // Earliest-ending first keeps the one-to-one matching maximal on intervals.
  std::sort(windows.begin(), windows.end(), [](const PredictedWindow* a, const PredictedWindow* b) {
    return std::tie(a->slot_end, a->slot_start) < std::tie(b->slot_end, b->slot_start);
  });
  for (const auto* w : windows) {
    const auto it = by_stream.find({w->property.name(), w->node_id});
    if (it == by_stream.end()) {
      ++row.fp;
      continue;
    }
    std::optional<std::size_t> best;
    bool overlaps_any = false;
    for (const std::size_t i : it->second) {
      const auto& s = truth.segments[i];
      if (s.slot_end < w->slot_start || s.slot_start > w->slot_end) continue;
      overlaps_any = true;
      if (!matched[i] && (!best || s.slot_end < truth.segments[*best].slot_end)) best = i;
    }
    if (best) {
      matched[*best] = 1;
      ++row.tp;
    } else if (overlaps_any) {
      ++row.duplicates;
    } else {
      ++row.fp;
    }
  }
  const std::size_t total = truth.count(target);
  row.fn = total - row.tp;
  if (row.tp + row.fp > 0) row.precision = static_cast<double>(row.tp) / static_cast<double>(row.tp + row.fp);
  if (total > 0) row.recall = static_cast<double>(row.tp) / static_cast<double>(total);
  return row;
}

MetricsRow score(const DetectionResult& result, const GroundTruth& truth, Verdict target) {
  if (truth.grid && *truth.grid != result.grid) {
    throw ConfigError("ground truth and detection use different grids");
  }
  for (const auto& s : truth.segments) {
    if (s.slot_end >= result.grid.slots) {
      throw ConfigError("truth segment " + s.property.name() + "@" + s.node_id + " lies outside the detection grid");
    }
  }
  auto row = score(anomalous_windows(result), truth, target, result.beta);
  for (const auto& t : result.suspicion) row.suspicious += t.count(Flag::Suspicious);
  return row;
}

std::vector<double> beta_values(double beta_from, double beta_to, double beta_step) {
  if (!(beta_from > 0.0 && beta_from <= beta_to && beta_to <= 1.0)) {
    throw ConfigError("threshold range must satisfy 0 < from <= to <= 1");
  }
  if (!(beta_step > 0.0)) throw ConfigError("threshold step must be positive");
  const auto count = static_cast<std::size_t>(std::llround(std::floor((beta_to - beta_from) / beta_step + 1e-9))) + 1;
  std::vector<double> out;
  for (std::size_t k = 0; k < count; ++k) {
    const double b = std::round((beta_from + static_cast<double>(k) * beta_step) * 1e9) / 1e9;
    if (b > beta_to + 1e-12) break;
    out.push_back(std::min(b, 1.0));
  }
  return out;
}

std::vector<MetricsRow> sweep(const DetectionSession& session, const GroundTruth& truth, double beta_from,
                              double beta_to, double beta_step, Verdict target) {
  std::vector<MetricsRow> rows;
  for (const double b : beta_values(beta_from, beta_to, beta_step)) {
    rows.push_back(score(session.classify(b), truth, target));
  }
  return rows;
}

void write_metrics_csv(std::ostream& out, const std::vector<MetricsRow>& rows) {
  out << "beta,tp,fp,fn,precision,recall\n";
  for (const auto& r : rows) {
    out << format_double(r.beta) << ',' << r.tp << ',' << r.fp << ',' << r.fn << ',';
    if (r.precision) out << format_double(*r.precision);
    out << ',';
    if (r.recall) out << format_double(*r.recall);
    out << '\n';
  }
}

}  // namespace soue
