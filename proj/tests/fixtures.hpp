#pragma once

// Hand-built five-node networks for the node-1 error and node-10 event scenarios.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "soue/ingest.hpp"
#include "soue/rules.hpp"

namespace fixture {

inline const std::vector<std::string> kNodeIds{"1", "10", "26", "143", "210"};

struct Scenario {
  soue::NetworkTables tables;
  soue::TimeRange range;
  soue::RuleSet rules;
  std::size_t slots = 0;
  // (property, node) streams that were altered and their slot span
  std::vector<std::pair<std::string, std::string>> altered;
  std::size_t altered_first = 0;
  std::size_t altered_last = 0;
};

// Small reproducible jitter in [-1, 1].
inline double jitter(std::uint32_t a, std::uint32_t b) {
  std::uint32_t h = a * 2654435761u ^ (b + 0x9E3779B9u) * 2246822519u;
  h ^= h >> 15;
  h *= 2246822519u;
  h ^= h >> 13;
  return static_cast<double>(h % 20001) / 10000.0 - 1.0;
}

inline Scenario make(soue::EpochSeconds start, std::size_t slots, std::size_t first, std::size_t last) {
  Scenario s;
  s.slots = slots;
  s.range = {start, start + static_cast<soue::EpochSeconds>(slots) * 600};
  s.altered_first = first;
  s.altered_last = last;
  const double lat0 = -28.2300;
  const double lon0 = 153.2700;
  const double north[] = {0, 40, 70, -60, -50};
  const double east[] = {0, 60, -50, 80, -70};
  const soue::EpochSeconds installed = start - 3 * 86400;
  for (std::size_t j = 0; j < kNodeIds.size(); ++j) {
    soue::NodeRecord n;
    n.node_id = kNodeIds[j];
    n.latitude = lat0 + north[j] / 111320.0;
    n.longitude = lon0 + east[j] / (111320.0 * std::cos(lat0 * std::numbers::pi / 180.0));
    n.installed_at = installed;
    s.tables.nodes.push_back(n);
  }
  struct Base {
    const char* name;
    double mean, amp, noise;
    const char* unit;
  };
  const Base bases[] = {{"air_temperature", 14.0, 4.0, 0.03, "C"},
                        {"relative_humidity", 75.0, -12.0, 0.1, "%"},
                        {"air_pressure", 1012.0, 0.8, 0.03, "hPa"}};
  for (std::uint32_t j = 0; j < kNodeIds.size(); ++j) {
    for (std::uint32_t p = 0; p < 3; ++p) {
      const auto& b = bases[p];
      soue::SensorRecord sr;
      sr.sensor_id = kNodeIds[j] + "-" + b.name;
      sr.node_id = kNodeIds[j];
      sr.property = soue::PropertyKind(b.name);
      sr.installed_at = installed;
      s.tables.sensors.push_back(sr);
      for (std::uint32_t i = 0; i < slots; ++i) {
        const double day = static_cast<double>(i) / 144.0;
        double v = b.mean + (1.0 + 0.03 * j) * b.amp * std::sin(2 * std::numbers::pi * (day - 0.3)) +
                   b.noise * jitter(j * 7 + p, i);
        s.tables.observations.push_back(
            {sr.sensor_id, start + static_cast<soue::EpochSeconds>(i) * 600, sr.property, v, b.unit});
      }
    }
  }
  return s;
}

// Alternating +/- deviation over [first, last] on one stream.
inline void zigzag(Scenario& s, const std::string& node, const std::string& prop, double amplitude) {
  const std::string sid = node + "-" + prop;
  for (auto& o : s.tables.observations) {
    if (o.sensor_id != sid) continue;
    const auto i = static_cast<std::size_t>((o.timestamp - s.range.from) / 600);
    if (i < s.altered_first || i > s.altered_last) continue;
    o.value += (i % 2 == 0 ? amplitude : -amplitude);
  }
  s.altered.emplace_back(prop, node);
}

inline soue::RuleSet temperature_humidity_rules() {
  soue::RuleSet r;
  r.add({soue::PropertyKind("air_temperature"), soue::CorrelationPredicate::Strong,
         soue::PropertyKind("relative_humidity")});
  r.add({soue::PropertyKind("air_temperature"), soue::CorrelationPredicate::Negative,
         soue::PropertyKind("relative_humidity")});
  return r;
}

// 2011-06-04 00:00 to 16:00, humidity at node 1 corrupted over slots 36..47.
inline Scenario node1_error() {
  auto s = make(1307145600, 96, 36, 47);
  zigzag(s, "1", "relative_humidity", 15.0);
  s.rules = temperature_humidity_rules();
  return s;
}

// 2011-06-25 00:00 to 10:00, temperature and humidity at node 10 deviate together over slots 24..35.
inline Scenario node10_event() {
  auto s = make(1308960000, 60, 24, 35);
  zigzag(s, "10", "air_temperature", 6.0);
  zigzag(s, "10", "relative_humidity", -15.0);
  s.rules = temperature_humidity_rules();
  return s;
}

// Windows of length eta (stride eta/2) that contain at least one trend vector
// touching an altered slot, i.e. whose slot span overlaps [first, last].
inline std::set<std::size_t> touched_windows(const Scenario& s, std::size_t eta = 12) {
  std::set<std::size_t> out;
  const std::size_t stride = eta / 2;
  for (std::size_t l = 0; l * stride + eta <= s.slots; ++l) {
    const std::size_t a = l * stride;
    const std::size_t b = a + eta - 1;
    if (b >= s.altered_first && a <= s.altered_last) out.insert(l);
  }
  return out;
}

}  // namespace fixture
