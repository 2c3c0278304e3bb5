#include "soue/ingest.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <ostream>
#include <stdexcept>
#include <unordered_map>

#include "soue/csv.hpp"
#include "soue/errors.hpp"

namespace soue {

PropertyKind::PropertyKind(std::string name) : name_(std::move(name)) {
  if (!valid_name(name_)) throw ConfigError("invalid property name '" + name_ + "'");
}

bool PropertyKind::valid_name(std::string_view name) {
  if (name.empty() || name.front() < 'a' || name.front() > 'z') return false;
  return std::all_of(name.begin(), name.end(), [](char c) {
    return (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '_';
  });
}

namespace {

EpochSeconds timestamp_field(const CsvReader& csv, std::string_view column) {
  try {
    return parse_iso8601(csv.field(column));
  } catch (const std::invalid_argument& e) {
    csv.fail(std::string(column) + ": " + e.what());
  }
}

std::optional<EpochSeconds> optional_timestamp_field(const CsvReader& csv, std::string_view column) {
  if (csv.field(column).empty()) return std::nullopt;
  return timestamp_field(csv, column);
}

PropertyKind property_field(const CsvReader& csv, std::string_view column) {
  const auto& text = csv.field(column);
  if (!PropertyKind::valid_name(text)) csv.fail("invalid property name '" + text + "'");
  return PropertyKind(text);
}

bool intervals_overlap(EpochSeconds a_from, std::optional<EpochSeconds> a_to, EpochSeconds b_from,
                       std::optional<EpochSeconds> b_to) {
  const bool a_before_b = a_to && *a_to <= b_from;
  const bool b_before_a = b_to && *b_to <= a_from;
  return !a_before_b && !b_before_a;
}

std::string optional_time_text(const std::optional<EpochSeconds>& t) {
  return t ? format_iso8601(*t) : std::string{};
}

std::ifstream open_input(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path.string());
  return in;
}

}  // namespace

std::vector<NodeRecord> read_nodes(std::istream& in, const std::string& source) {
  CsvReader csv(in, source, {"node_id", "latitude", "longitude", "installed_at", "removed_at"});
  std::vector<NodeRecord> nodes;
  std::unordered_map<std::string, std::size_t> seen;
  while (csv.next()) {
    NodeRecord n;
    n.node_id = csv.field("node_id");
    if (n.node_id.empty()) csv.fail("empty node_id");
    n.latitude = csv.field_as_double("latitude");
    n.longitude = csv.field_as_double("longitude");
    if (!(n.latitude >= -90.0 && n.latitude <= 90.0)) csv.fail("latitude out of range");
    if (!(n.longitude >= -180.0 && n.longitude <= 180.0)) csv.fail("longitude out of range");
    n.installed_at = timestamp_field(csv, "installed_at");
    n.removed_at = optional_timestamp_field(csv, "removed_at");
    if (n.removed_at && *n.removed_at <= n.installed_at) {
      csv.fail("removed_at must be after installed_at");
    }
    if (!seen.emplace(n.node_id, csv.line()).second) csv.fail("duplicate node_id '" + n.node_id + "'");
    nodes.push_back(std::move(n));
  }
  return nodes;
}

std::vector<SensorRecord> read_sensors(std::istream& in, const std::string& source,
                                       std::span<const NodeRecord> nodes) {
  CsvReader csv(in, source, {"sensor_id", "node_id", "property", "installed_at", "removed_at"});
  std::unordered_map<std::string, const NodeRecord*> node_by_id;
  for (const auto& n : nodes) node_by_id.emplace(n.node_id, &n);

  std::vector<SensorRecord> sensors;
  std::unordered_map<std::string, std::size_t> seen;
  std::map<std::pair<std::string, std::string>, std::vector<std::size_t>> by_slot;
  while (csv.next()) {
    SensorRecord s;
    s.sensor_id = csv.field("sensor_id");
    if (s.sensor_id.empty()) csv.fail("empty sensor_id");
    s.node_id = csv.field("node_id");
    s.property = property_field(csv, "property");
    s.installed_at = timestamp_field(csv, "installed_at");
    s.removed_at = optional_timestamp_field(csv, "removed_at");
    if (s.removed_at && *s.removed_at <= s.installed_at) {
      csv.fail("removed_at must be after installed_at");
    }
    if (!node_by_id.contains(s.node_id)) {
      throw ReferenceError("node_id", s.node_id, source + ":" + std::to_string(csv.line()));
    }
    if (!seen.emplace(s.sensor_id, csv.line()).second) {
      csv.fail("duplicate sensor_id '" + s.sensor_id + "'");
    }
    auto& peers = by_slot[{s.node_id, s.property.name()}];
    for (const std::size_t idx : peers) {
      const auto& other = sensors[idx];
      if (intervals_overlap(s.installed_at, s.removed_at, other.installed_at, other.removed_at)) {
        csv.fail("sensor '" + s.sensor_id + "' overlaps sensor '" + other.sensor_id +
                 "' for property " + s.property.name() + " on node " + s.node_id);
      }
    }
    peers.push_back(sensors.size());
    sensors.push_back(std::move(s));
  }
  return sensors;
}

std::vector<Observation> read_observations(std::istream& in, const std::string& source,
                                           std::span<const SensorRecord> sensors) {
  CsvReader csv(in, source, {"sensor_id", "timestamp", "property", "value", "unit"});
  std::unordered_map<std::string, const SensorRecord*> sensor_by_id;
  for (const auto& s : sensors) sensor_by_id.emplace(s.sensor_id, &s);

  std::vector<Observation> observations;
  while (csv.next()) {
    Observation o;
    o.sensor_id = csv.field("sensor_id");
    const auto it = sensor_by_id.find(o.sensor_id);
    if (it == sensor_by_id.end()) {
      throw ReferenceError("sensor_id", o.sensor_id, source + ":" + std::to_string(csv.line()));
    }
    o.timestamp = timestamp_field(csv, "timestamp");
    o.property = property_field(csv, "property");
    if (o.property != it->second->property) {
      csv.fail("property " + o.property.name() + " does not match sensor '" + o.sensor_id +
               "' (" + it->second->property.name() + ")");
    }
    o.value = csv.field_as_double("value");
    if (!std::isfinite(o.value)) csv.fail("non-finite value");
    o.unit = csv.field("unit");
    if (!it->second->active_at(o.timestamp)) {
      csv.fail("timestamp outside the installation interval of sensor '" + o.sensor_id + "'");
    }
    observations.push_back(std::move(o));
  }
  return observations;
}

NetworkTables load_tables(const std::filesystem::path& nodes_path,
                          const std::filesystem::path& sensors_path,
                          const std::filesystem::path& observations_path) {
  NetworkTables tables;
  {
    auto in = open_input(nodes_path);
    tables.nodes = read_nodes(in, nodes_path.string());
  }
  {
    auto in = open_input(sensors_path);
    tables.sensors = read_sensors(in, sensors_path.string(), tables.nodes);
  }
  {
    auto in = open_input(observations_path);
    tables.observations = read_observations(in, observations_path.string(), tables.sensors);
  }
  return tables;
}

void write_nodes(std::ostream& out, std::span<const NodeRecord> nodes) {
  out << "node_id,latitude,longitude,installed_at,removed_at\n";
  for (const auto& n : nodes) {
    out << n.node_id << ',' << format_double(n.latitude) << ',' << format_double(n.longitude) << ','
        << format_iso8601(n.installed_at) << ',' << optional_time_text(n.removed_at) << '\n';
  }
}

void write_sensors(std::ostream& out, std::span<const SensorRecord> sensors) {
  out << "sensor_id,node_id,property,installed_at,removed_at\n";
  for (const auto& s : sensors) {
    out << s.sensor_id << ',' << s.node_id << ',' << s.property.name() << ','
        << format_iso8601(s.installed_at) << ',' << optional_time_text(s.removed_at) << '\n';
  }
}

void write_observations(std::ostream& out, std::span<const Observation> observations) {
  out << "sensor_id,timestamp,property,value,unit\n";
  for (const auto& o : observations) {
    out << o.sensor_id << ',' << format_iso8601(o.timestamp) << ',' << o.property.name() << ','
        << format_double(o.value) << ',' << o.unit << '\n';
  }
}

GridSpec make_grid(const TimeRange& window, EpochSeconds step) {
  if (step <= 0) throw ConfigError("grid step must be positive");
  if (window.empty()) throw ConfigError("window of interest is empty");
  const auto slots = (window.length() + step - 1) / step;
  return {window.from, step, static_cast<std::size_t>(slots)};
}

std::size_t ObservationSeries::filled() const {
  return static_cast<std::size_t>(
      std::count_if(slots.begin(), slots.end(), [](const auto& v) { return v.has_value(); }));
}

bool ObservationSeries::complete(std::size_t first, std::size_t count) const {
  if (first + count > slots.size()) return false;
  for (std::size_t i = first; i < first + count; ++i) {
    if (!slots[i]) return false;
  }
  return true;
}

GriddedSeries to_grid(std::span<const Observation> observations, const SensorRecord& sensor,
                      const GridSpec& grid, AmbiguityPolicy policy) {
  if (grid.step <= 0) throw ConfigError("grid step must be positive");
  if (grid.slots == 0) throw ConfigError("window of interest is empty");

  GriddedSeries out;
  out.series.sensor_id = sensor.sensor_id;
  out.series.property = sensor.property;
  out.series.grid = grid;
  out.series.slots.assign(grid.slots, std::nullopt);

  // Slots hit by more than one observation: count of hits so far.
  std::vector<std::uint32_t> hits(grid.slots, 0);
  const EpochSeconds half = grid.step / 2;
  for (const auto& o : observations) {
    if (o.sensor_id != sensor.sensor_id) continue;
    const EpochSeconds offset = o.timestamp - grid.start;
    // Nearest slot; an exact half-step offset snaps to the earlier slot.
    EpochSeconds q = offset / grid.step;
    EpochSeconds r = offset % grid.step;
    if (r < 0) {
      r += grid.step;
      --q;
    }
    const EpochSeconds slot = r > half ? q + 1 : q;
    const EpochSeconds distance = std::abs(offset - slot * grid.step);
    if (slot < 0 || slot >= static_cast<EpochSeconds>(grid.slots) || distance > half) {
      ++out.stats.discarded;
      continue;
    }
    const auto idx = static_cast<std::size_t>(slot);
    if (hits[idx] > 0) {
      if (policy == AmbiguityPolicy::Throw) {
        throw InputError("sensor '" + sensor.sensor_id + "': two observations snap to slot " +
                         format_iso8601(grid.slot_time(idx)));
      }
      out.stats.ambiguous += hits[idx] == 1 ? 2 : 1;
      out.series.slots[idx].reset();
    } else {
      out.series.slots[idx] = o.value;
    }
    ++hits[idx];
  }
  out.stats.filled = out.series.filled();
  return out;
}

std::vector<Observation> to_observations(const ObservationSeries& series, const std::string& unit) {
  std::vector<Observation> rows;
  rows.reserve(series.slots.size());
  for (std::size_t i = 0; i < series.slots.size(); ++i) {
    if (!series.slots[i]) continue;
    rows.push_back({series.sensor_id, series.grid.slot_time(i), series.property, *series.slots[i], unit});
  }
  return rows;
}

}  // namespace soue
