#include <doctest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "soue/errors.hpp"
#include "soue/screening.hpp"

using namespace soue;

namespace {

const PropertyKind kTemp("air_temperature");

SensorNeighborhoodMatrix complete_matrix(std::size_t n) {
  SensorNeighborhoodMatrix a;
  a.property = kTemp;
  for (std::size_t j = 0; j < n; ++j) a.node_order.push_back("n" + std::to_string(j));
  a.cells = BinaryMatrix(n);
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t k = 0; k < n; ++k)
      if (j != k) a.cells.set(j, k, 1);
  return a;
}

ObservationSeries series_of(const std::vector<double>& v) {
  ObservationSeries s;
  s.property = kTemp;
  s.grid = GridSpec{0, 600, v.size()};
  for (double x : v) s.slots.emplace_back(x);
  return s;
}

// True when `v` is the oracle similarity for some optimal warping path.
bool oracle_agrees(double v, const std::vector<double>& a, const std::vector<double>& b) {
  const auto va = oracle::deltas(a);
  const auto vb = oracle::deltas(b);
  std::vector<std::vector<double>> cost(va.size(), std::vector<double>(vb.size()));
  for (std::size_t i = 0; i < va.size(); ++i)
    for (std::size_t j = 0; j < vb.size(); ++j) cost[i][j] = oracle::angle(va[i], vb[j]);
  const auto best = oracle::enumerate_paths(cost);
  for (auto k : best.lengths)
    if (std::abs(v - oracle::similarity(best.distance, k)) < 1e-9) return true;
  return false;
}

// One central node 0 with neighbor similarities `values`; neighbors are not
// adjacent to each other.
SimilarityTensor star(const std::vector<double>& values) {
  std::vector<std::string> order{"c"};
  for (std::size_t k = 0; k < values.size(); ++k) order.push_back("n" + std::to_string(k));
  SimilarityTensor t(kTemp, order, 1);
  for (std::size_t j = 0; j < order.size(); ++j) t.set_evaluable(j, 0, true);
  for (std::size_t k = 0; k < values.size(); ++k) t.set(t.add_pair(0, k + 1), 0, values[k]);
  return t;
}

}  // namespace

TEST_CASE("window plans") {
  const auto p12 = plan_windows(12, 12);
  CHECK(p12.count == 1);
  CHECK(p12.first_slot(0) == 0);
  CHECK(p12.last_slot(0) == 11);

  const auto p24 = plan_windows(24, 12);
  REQUIRE(p24.count == 3);
  CHECK(p24.first_slot(1) == 6);
  CHECK(p24.last_slot(1) == 17);
  CHECK(p24.first_slot(2) == 12);
  CHECK(p24.last_slot(2) == 23);

  const auto p26 = plan_windows(26, 12);
  CHECK(p26.count == 3);
  CHECK(p26.last_slot(2) == 23);

  CHECK(plan_windows(11, 12).count == 0);
  CHECK(plan_windows(4320, 12).count == 719);
  CHECK_THROWS_AS(plan_windows(24, 7), ConfigError);
  CHECK_THROWS_AS(plan_windows(24, 0), ConfigError);

  for (std::size_t eta = 2; eta <= 24; eta += 2) {
    for (std::size_t g = eta; g < 200; g += eta / 2) {
      CHECK(plan_windows(g, eta).count == 2 * g / eta - 1);
    }
  }
}

TEST_CASE("similarity tensor construction") {
  std::vector<double> base(24);
  for (std::size_t i = 0; i < base.size(); ++i) base[i] = std::sin(0.4 * i);
  const auto plan = plan_windows(24, 12);

  SUBCASE("no neighbors") {
    auto a = complete_matrix(3);
    a.cells = BinaryMatrix(3);
    const auto s = series_of(base);
    const std::vector<const ObservationSeries*> ptrs{&s, &s, &s};
    const auto t = build_similarity_tensor(kTemp, ptrs, a, plan);
    CHECK(t.pairs().empty());
    CHECK(t.present_entries() == 0);
    const auto flags = vote_suspicious(t, 0.9);
    CHECK(flags.count(Flag::Unevaluated) == 9);
  }

  SUBCASE("identical series") {
    const auto s = series_of(base);
    const std::vector<const ObservationSeries*> ptrs{&s, &s, &s};
    const auto t = build_similarity_tensor(kTemp, ptrs, complete_matrix(3), plan);
    CHECK(t.present_entries() == 9);
    for (const auto& p : t.pairs())
      for (const auto& v : p.values) CHECK(*v == 1.0);
    CHECK(vote_suspicious(t, 1.0).count(Flag::Suspicious) == 0);
  }

  SUBCASE("one anti-trending stream among four") {
    const auto plan = plan_windows(24, 6);  // short windows keep the path enumeration small
    // steep ramp, so the mirrored stream meets it at more than a right angle
    std::vector<double> ramp(24);
    for (std::size_t i = 0; i < ramp.size(); ++i) ramp[i] = 3.0 * i + 0.3 * std::sin(0.9 * i);
    const auto& base = ramp;
    std::vector<std::vector<double>> raw(4, base);
    for (std::size_t i = 0; i < 24; ++i) {
      raw[1][i] += 0.01 * std::cos(1.3 * i);
      raw[2][i] = 2.0 + base[i] + 0.01 * std::sin(2.1 * i);
      raw[3][i] = -base[i];
    }
    std::vector<ObservationSeries> ss;
    for (const auto& r : raw) ss.push_back(series_of(r));
    const std::vector<const ObservationSeries*> ptrs{&ss[0], &ss[1], &ss[2], &ss[3]};
    const auto t = build_similarity_tensor(kTemp, ptrs, complete_matrix(4), plan);
    for (std::size_t j = 0; j < 4; ++j) {
      for (std::size_t k = j + 1; k < 4; ++k) {
        for (std::size_t l = 0; l < plan.count; ++l) {
          const std::vector<double> wa(raw[j].begin() + plan.first_slot(l), raw[j].begin() + plan.last_slot(l) + 1);
          const std::vector<double> wb(raw[k].begin() + plan.first_slot(l), raw[k].begin() + plan.last_slot(l) + 1);
          const auto v = t.at(j, k, l);
          REQUIRE(v);
          CHECK(oracle_agrees(*v, wa, wb));
          CHECK(t.at(k, j, l) == v);
          if (k == 3) {
            CHECK(*v < 0.3);
          } else {
            CHECK(*v > 0.95);
          }
        }
      }
    }
    const auto flags = vote_suspicious(t, 0.9);
    for (std::size_t l = 0; l < plan.count; ++l) {
      CHECK(flags.at(3, l) == Flag::Suspicious);
      for (std::size_t j = 0; j < 3; ++j) CHECK(flags.at(j, l) == Flag::Normal);
    }
  }

  SUBCASE("missing slots and absent sensors") {
    auto s0 = series_of(base);
    auto s1 = series_of(base);
    s1.slots[3].reset();  // only window 0 touches slot 3
    const std::vector<const ObservationSeries*> ptrs{&s0, &s1, nullptr};
    const auto t = build_similarity_tensor(kTemp, ptrs, complete_matrix(3), plan);
    CHECK(!t.at(0, 1, 0));
    CHECK(t.at(0, 1, 1));
    CHECK(!t.at(0, 2, 1));
    CHECK(!t.evaluable(1, 0));
    CHECK(!t.evaluable(2, 1));
    const auto flags = vote_suspicious(t, 0.9);
    CHECK(flags.at(0, 0) == Flag::Unevaluated);
    CHECK(flags.at(1, 0) == Flag::Unevaluated);
    CHECK(flags.at(2, 2) == Flag::Unevaluated);
    CHECK(flags.at(0, 1) == Flag::Normal);
  }
}

TEST_CASE("suspicion voting") {
  CHECK(vote_suspicious(star({0.95, 0.95, 0.2}), 0.9).at(0, 0) == Flag::Normal);
  CHECK(vote_suspicious(star({0.95, 0.2, 0.2}), 0.9).at(0, 0) == Flag::Suspicious);
  CHECK(vote_suspicious(star({0.95, 0.2}), 0.9).at(0, 0) == Flag::Normal);  // exactly half
  CHECK(vote_suspicious(star({0.0, 0.0, 0.95}), 0.9).at(0, 0) == Flag::Suspicious);
  CHECK(vote_suspicious(star({0.9}), 0.9).at(0, 0) == Flag::Normal);

  SimilarityTensor lonely(kTemp, {"a"}, 1);
  lonely.set_evaluable(0, 0, true);
  CHECK(vote_suspicious(lonely, 0.9).at(0, 0) == Flag::Unevaluated);

  CHECK_THROWS_AS(vote_suspicious(lonely, 0.0), ConfigError);
  CHECK_THROWS_AS(vote_suspicious(lonely, 1.01), ConfigError);
}

TEST_CASE("raising beta never clears a suspicious flag") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u01(0, 1);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<double> v(1 + rng() % 8);
    for (auto& x : v) x = u01(rng);
    const auto t = star(v);
    bool was = false;
    for (double beta = 0.05; beta <= 1.0 + 1e-12; beta += 0.05) {
      const bool now = vote_suspicious(t, std::min(beta, 1.0)).at(0, 0) == Flag::Suspicious;
      CHECK((!was || now));
      was = now;
    }
  }
}
