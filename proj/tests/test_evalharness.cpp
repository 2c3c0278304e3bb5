#include <doctest.h>

#include <sstream>

#include "soue/errors.hpp"
#include "soue/evalharness.hpp"
#include "soue/pipeline.hpp"

using namespace soue;

namespace {

const SyntheticDataset& default_clean() {
  static const SyntheticDataset d = generate_clean(CleanConfig{});
  return d;
}

SyntheticDataset small_clean(std::uint64_t seed = 1) {
  CleanConfig c;
  c.seed = seed;
  c.nodes = 18;
  c.days = 5;
  return generate_clean(c);
}

TruthSegment seg(const std::string& node, std::size_t a, std::size_t b, Verdict v = Verdict::ErroneousOutlier) {
  return {kRelativeHumidity, node, a, b, v};
}

PredictedWindow win(const std::string& node, std::size_t l, Verdict v = Verdict::ErroneousOutlier) {
  return {kRelativeHumidity, node, l * 6, l * 6 + 11, v};
}

}  // namespace

TEST_CASE("clean dataset size and determinism") {
  const auto& d = default_clean();
  CHECK(d.nodes.size() == 36);
  CHECK(d.sensors.size() == 108);
  CHECK(d.grid.slots == 4320);
  for (const auto& p : {kAirTemperature, kRelativeHumidity, kAirPressure}) CHECK(d.observation_count(p) == 155520);
  CHECK(d.observations().size() == 3 * 155520);
  CHECK(generate_clean(CleanConfig{}) == d);
  CleanConfig other;
  other.seed = 2;
  CHECK(!(generate_clean(other) == d));
}

TEST_CASE("clean dataset round trips through tables") {
  const auto d = small_clean();
  const auto t = d.tables();
  CHECK(t.observations.size() == 3 * 18 * 720);
  const auto series = d.series();
  const auto& sid = d.sensor("7", kAirTemperature).sensor_id;
  CHECK(series.at(sid).filled() == 720);
  CHECK(*series.at(sid).slots[100] == d.values.at(sid)[100]);
  CHECK(d.tables(false).observations.empty());
}

TEST_CASE("outlier injection") {
  const auto& clean = default_clean();
  const auto spec = InjectionSpec::defaults(InjectionMode::Outliers, 1);
  CHECK(spec.rounds == 15);
  const auto inj = inject_outliers(clean, spec);
  CHECK(inj.truth.segments.size() == 240);
  CHECK(inj.truth.count(Verdict::ErroneousOutlier) == 240);
  CHECK(inj.truth.replaced_observations() == 2880);

  std::size_t temp = 0, hum = 0;
  std::map<std::string, std::vector<std::pair<std::size_t, std::size_t>>> spans;
  for (const auto& s : inj.truth.segments) {
    CHECK(s.slot_end - s.slot_start + 1 == 12);
    CHECK(s.slot_end < clean.grid.slots);
    (s.property == kAirTemperature ? temp : hum)++;
    const auto& r = spec.ranges.at(s.property.name());
    const auto& v = inj.dataset.values.at(clean.sensor(s.node_id, s.property).sensor_id);
    for (std::size_t i = s.slot_start; i <= s.slot_end; ++i) {
      CHECK(v[i] >= r.lo);
      CHECK(v[i] <= r.hi);
    }
    spans[s.property.name() + "/" + s.node_id].emplace_back(s.slot_start, s.slot_end);
  }
  CHECK(temp == 120);
  CHECK(hum == 120);
  for (auto& [k, v] : spans) {
    std::sort(v.begin(), v.end());
    for (std::size_t i = 1; i < v.size(); ++i) CHECK(v[i].first > v[i - 1].second);
  }

  // Only the listed slots changed.
  std::size_t changed = 0;
  for (const auto& [sid, vals] : clean.values) {
    const auto& after = inj.dataset.values.at(sid);
    for (std::size_t i = 0; i < vals.size(); ++i) changed += vals[i] != after[i];
  }
  CHECK(changed <= 2880);
  CHECK(changed > 2800);
  for (const auto& n : clean.nodes) {
    const auto& sid = clean.sensor(n.node_id, kAirPressure).sensor_id;
    CHECK(inj.dataset.values.at(sid) == clean.values.at(sid));
  }

  const auto again = inject_outliers(clean, spec);
  CHECK(again.truth.segments == inj.truth.segments);
  CHECK(again.dataset == inj.dataset);
}

TEST_CASE("event injection") {
  const auto& clean = default_clean();
  for (const auto mode : {InjectionMode::EventsStrong, InjectionMode::EventsPositive}) {
    const auto spec = InjectionSpec::defaults(mode, 3);
    CHECK(spec.rounds == 30);
    const auto inj = inject_events(clean, spec);
    CHECK(inj.truth.segments.size() == 480);
    CHECK(inj.truth.count(Verdict::UnusualEvent) == 480);
    CHECK(inj.truth.replaced_observations() == 5760);
    for (const auto& n : clean.nodes) {
      const auto& sid = clean.sensor(n.node_id, kAirPressure).sensor_id;
      CHECK(inj.dataset.values.at(sid) == clean.values.at(sid));
    }
    // Temperature and humidity share every segment; their deviations co-move
    // for the positive mode and oppose each other otherwise.
    std::size_t paired = 0, agreeing = 0;
    for (const auto& s : inj.truth.segments) {
      if (s.property != kAirTemperature) continue;
      const auto h = std::find_if(inj.truth.segments.begin(), inj.truth.segments.end(), [&](const TruthSegment& o) {
        return o.property == kRelativeHumidity && o.node_id == s.node_id && o.slot_start == s.slot_start;
      });
      REQUIRE(h != inj.truth.segments.end());
      CHECK(h->slot_end == s.slot_end);
      ++paired;
      const auto& ts = clean.sensor(s.node_id, kAirTemperature).sensor_id;
      const auto& hs = clean.sensor(s.node_id, kRelativeHumidity).sensor_id;
      double dot = 0;
      for (std::size_t i = s.slot_start + 1; i <= s.slot_end; ++i) {
        const double dt = (inj.dataset.values.at(ts)[i] - clean.values.at(ts)[i]) -
                          (inj.dataset.values.at(ts)[i - 1] - clean.values.at(ts)[i - 1]);
        const double dh = (inj.dataset.values.at(hs)[i] - clean.values.at(hs)[i]) -
                          (inj.dataset.values.at(hs)[i - 1] - clean.values.at(hs)[i - 1]);
        dot += dt * dh;
      }
      agreeing += (mode == InjectionMode::EventsPositive) == (dot > 0);
    }
    CHECK(paired == 240);
    CHECK(agreeing >= 235);  // humidity clamping can flatten a rare step
    CHECK(inject(clean, spec).truth.segments == inj.truth.segments);
  }
}

TEST_CASE("zero rounds leave the dataset unchanged") {
  const auto clean = small_clean();
  for (const auto mode : {InjectionMode::Outliers, InjectionMode::EventsStrong}) {
    auto spec = InjectionSpec::defaults(mode);
    spec.rounds = 0;
    const auto inj = inject(clean, spec);
    CHECK(inj.truth.segments.empty());
    CHECK(inj.dataset == clean);
  }
}

TEST_CASE("impossible placement is a configuration error") {
  CleanConfig c;
  c.nodes = 6;
  c.days = 1;
  auto spec = InjectionSpec::defaults(InjectionMode::Outliers);
  CHECK_THROWS_AS(inject(generate_clean(c), spec), ConfigError);
}

TEST_CASE("modes, rules and labels") {
  for (const auto m : {InjectionMode::Outliers, InjectionMode::EventsStrong, InjectionMode::EventsPositive}) {
    CHECK(injection_mode_from_string(to_string(m)) == m);
  }
  CHECK(!injection_mode_from_string("bogus"));
  CHECK(target_label(InjectionMode::Outliers) == Verdict::ErroneousOutlier);
  CHECK(target_label(InjectionMode::EventsPositive) == Verdict::UnusualEvent);
  CHECK(ask_correlated(rules_for_mode(InjectionMode::EventsStrong), kAirTemperature, kRelativeHumidity,
                       predicates_for_mode(InjectionMode::EventsStrong)));
  CHECK(ask_correlated(rules_for_mode(InjectionMode::EventsPositive), kAirTemperature, kRelativeHumidity,
                       predicates_for_mode(InjectionMode::EventsPositive)));
  CHECK(!ask_correlated(rules_for_mode(InjectionMode::EventsPositive), kAirTemperature, kRelativeHumidity,
                        default_active_predicates()));
}

TEST_CASE("truth csv round trip") {
  const auto inj = inject(small_clean(), [] {
    auto s = InjectionSpec::defaults(InjectionMode::Outliers);
    s.rounds = 2;
    return s;
  }());
  std::stringstream io;
  write_truth_csv(io, inj.truth);
  CHECK(io.str().rfind("property,node_id,slot_start,slot_end,label\n", 0) == 0);
  const auto back = read_truth_csv(io, "truth.csv");
  CHECK(back.segments == inj.truth.segments);

  std::istringstream bad("property,node_id,slot_start,slot_end,label\nair_temperature,1,5,3,ErroneousOutlier\n");
  CHECK_THROWS_AS(read_truth_csv(bad, "t"), InputError);
  std::istringstream lbl("property,node_id,slot_start,slot_end,label\nair_temperature,1,0,11,Friendly\n");
  CHECK_THROWS_AS(read_truth_csv(lbl, "t"), InputError);
}

TEST_CASE("scoring the five-window fixture") {
  GroundTruth truth;
  truth.segments = {seg("1", 0, 11), seg("2", 24, 35)};
  const std::vector<PredictedWindow> pred{win("1", 0), win("1", 4), win("2", 2, Verdict::UnusualEvent)};
  const auto m = score(pred, truth, Verdict::ErroneousOutlier);
  CHECK(m.tp == 1);
  CHECK(m.fp == 1);
  CHECK(m.fn == 1);
  CHECK(*m.precision == 0.5);
  CHECK(*m.recall == 0.5);
}

TEST_CASE("perfect, duplicate and empty predictions") {
  GroundTruth truth;
  truth.segments = {seg("1", 3, 14), seg("3", 30, 41)};
  // segment 3..14 overlaps windows 0, 1 and 2
  const std::vector<PredictedWindow> all{win("1", 0), win("1", 1), win("1", 2), win("3", 5)};
  const auto m = score(all, truth, Verdict::ErroneousOutlier);
  CHECK(m.tp == 2);
  CHECK(m.fp == 0);
  CHECK(m.fn == 0);
  CHECK(m.duplicates == 2);
  CHECK(*m.precision == 1.0);
  CHECK(*m.recall == 1.0);

  const auto none = score(std::vector<PredictedWindow>{}, truth, Verdict::ErroneousOutlier);
  CHECK(none.tp == 0);
  CHECK(none.fn == 2);
  CHECK(!none.precision);
  CHECK(*none.recall == 0.0);

  const auto nothing = score(std::vector<PredictedWindow>{}, GroundTruth{}, Verdict::ErroneousOutlier);
  CHECK(!nothing.recall);

  // two segments reachable from one window: each window claims at most one
  GroundTruth close;
  close.segments = {seg("1", 0, 5), seg("1", 6, 11)};
  const auto one = score({win("1", 0)}, close, Verdict::ErroneousOutlier);
  CHECK(one.tp == 1);
  CHECK(one.fn == 1);
}

TEST_CASE("metrics csv") {
  MetricsRow a{0.7, 3, 1, 0, 0.75, 1.0};
  MetricsRow b{0.71, 0, 0, 4, std::nullopt, 0.0};
  std::ostringstream out;
  write_metrics_csv(out, {a, b});
  CHECK(out.str() == "beta,tp,fp,fn,precision,recall\n0.7,3,1,0,0.75,1\n0.71,0,0,4,,0\n");
}

TEST_CASE("beta grid") {
  const auto b = beta_values(0.70, 0.98, 0.01);
  REQUIRE(b.size() == 29);
  CHECK(b.front() == 0.70);
  CHECK(b[17] == 0.87);
  CHECK(b.back() == 0.98);
  CHECK(beta_values(0.9, 0.9, 0.01).size() == 1);
}

TEST_CASE("sweep on a small injected dataset") {
  auto spec = InjectionSpec::defaults(InjectionMode::Outliers, 4);
  spec.rounds = 3;
  const auto inj = inject(small_clean(4), spec);
  DetectionConfig cfg;
  const auto tables = inj.dataset.tables(false);
  const DetectionSession session(tables, inj.dataset.series(), rules_for_mode(spec.mode), cfg, inj.dataset.range());
  const auto rows = sweep(session, inj.truth, 0.70, 0.98, 0.01, Verdict::ErroneousOutlier);
  REQUIRE(rows.size() == 29);
  for (std::size_t i = 1; i < rows.size(); ++i) {
    CHECK(rows[i].suspicious >= rows[i - 1].suspicious);
    CHECK(rows[i].tp + rows[i].fn == inj.truth.segments.size());
  }
  const auto at90 = score(session.classify(0.90), inj.truth, Verdict::ErroneousOutlier);
  CHECK(at90 == rows[20]);

  // At beta = 1 every evaluated window is suspicious. Temperature and humidity
  // then corroborate each other everywhere, so the flags surface as events.
  const auto all = session.classify(1.0);
  for (const auto& t : all.suspicion) CHECK(t.count(Flag::Normal) == 0);
  CHECK(score(all, inj.truth, Verdict::ErroneousOutlier).tp == 0);

  GroundTruth wrong = inj.truth;
  wrong.grid = GridSpec{0, 600, 10};
  CHECK_THROWS_AS(score(session.classify(0.9), wrong, Verdict::ErroneousOutlier), ConfigError);
}

TEST_CASE("beta = 1 on an event dataset flags nearly everything") {
  auto spec = InjectionSpec::defaults(InjectionMode::EventsStrong, 5);
  spec.rounds = 3;
  const auto inj = inject(small_clean(5), spec);
  DetectionConfig cfg;
  cfg.active_predicates = predicates_for_mode(spec.mode);
  const auto tables = inj.dataset.tables(false);
  const DetectionSession session(tables, inj.dataset.series(), rules_for_mode(spec.mode), cfg, inj.dataset.range());
  const auto limit = score(session.classify(1.0), inj.truth, Verdict::UnusualEvent);
  CHECK(*limit.recall >= 0.95);
  CHECK(*limit.precision < 0.1);
  const auto typical = score(session.classify(0.88), inj.truth, Verdict::UnusualEvent);
  CHECK(*typical.precision > *limit.precision);
}
