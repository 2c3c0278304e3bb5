#pragma once

// Data model and CSV ingestion for node, sensor and observation tables.

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "soue/time.hpp"

namespace soue {

/// Controlled property token such as `air_temperature`. Matches `[a-z][a-z0-9_]*`.
class PropertyKind {
 public:
  explicit PropertyKind(std::string name);

  static bool valid_name(std::string_view name);

  const std::string& name() const { return name_; }

  friend auto operator<=>(const PropertyKind&, const PropertyKind&) = default;
  friend bool operator==(const PropertyKind&, const PropertyKind&) = default;

 private:
  std::string name_;
};

struct NodeRecord {
  std::string node_id;
  double latitude = 0.0;
  double longitude = 0.0;
  EpochSeconds installed_at = 0;
  std::optional<EpochSeconds> removed_at;

  bool active_at(EpochSeconds t) const {
    return t >= installed_at && (!removed_at || t < *removed_at);
  }
  bool active_throughout(const TimeRange& r) const {
    return installed_at <= r.from && (!removed_at || *removed_at >= r.to);
  }

  friend bool operator==(const NodeRecord&, const NodeRecord&) = default;
};

struct SensorRecord {
  std::string sensor_id;
  std::string node_id;
  PropertyKind property{"unset"};
  EpochSeconds installed_at = 0;
  std::optional<EpochSeconds> removed_at;

  bool active_at(EpochSeconds t) const {
    return t >= installed_at && (!removed_at || t < *removed_at);
  }
  bool active_throughout(const TimeRange& r) const {
    return installed_at <= r.from && (!removed_at || *removed_at >= r.to);
  }

  friend bool operator==(const SensorRecord&, const SensorRecord&) = default;
};

struct Observation {
  std::string sensor_id;
  EpochSeconds timestamp = 0;
  PropertyKind property{"unset"};
  double value = 0.0;
  std::string unit;
};

struct NetworkTables {
  std::vector<NodeRecord> nodes;
  std::vector<SensorRecord> sensors;
  std::vector<Observation> observations;
};

std::vector<NodeRecord> read_nodes(std::istream& in, const std::string& source);
std::vector<SensorRecord> read_sensors(std::istream& in, const std::string& source,
                                       std::span<const NodeRecord> nodes);
std::vector<Observation> read_observations(std::istream& in, const std::string& source,
                                           std::span<const SensorRecord> sensors);

/// Loads and cross-validates all three tables. Rows stay in file order.
NetworkTables load_tables(const std::filesystem::path& nodes_path,
                          const std::filesystem::path& sensors_path,
                          const std::filesystem::path& observations_path);

void write_nodes(std::ostream& out, std::span<const NodeRecord> nodes);
void write_sensors(std::ostream& out, std::span<const SensorRecord> sensors);
void write_observations(std::ostream& out, std::span<const Observation> observations);

/// Regular sampling grid: slot i sits at start + i * step.
struct GridSpec {
  EpochSeconds start = 0;
  EpochSeconds step = 600;
  std::size_t slots = 0;

  EpochSeconds slot_time(std::size_t i) const {
    return start + static_cast<EpochSeconds>(i) * step;
  }
  TimeRange range() const { return {start, slot_time(slots)}; }

  friend bool operator==(const GridSpec&, const GridSpec&) = default;
};

/// Grid covering every slot time inside `window` (half-open).
GridSpec make_grid(const TimeRange& window, EpochSeconds step);

/// Observations of one sensor aligned onto a grid; missing slots stay empty.
struct ObservationSeries {
  std::string sensor_id;
  PropertyKind property{"unset"};
  GridSpec grid;
  std::vector<std::optional<double>> slots;

  std::size_t filled() const;
  /// True when slots [first, first + count) all hold values.
  bool complete(std::size_t first, std::size_t count) const;
};

struct GridStats {
  std::size_t filled = 0;
  std::size_t discarded = 0;  ///< farther than step/2 from every slot
  std::size_t ambiguous = 0;  ///< collided with another observation on one slot

  GridStats& operator+=(const GridStats& o) {
    filled += o.filled;
    discarded += o.discarded;
    ambiguous += o.ambiguous;
    return *this;
  }
};

enum class AmbiguityPolicy {
  Throw,   ///< two observations on one slot raise InputError
  Reject,  ///< all colliding observations are dropped and counted
};

struct GriddedSeries {
  ObservationSeries series;
  GridStats stats;
};

/// Snaps the sensor's observations to the nearest slot within step/2.
/// Observations belonging to other sensors are ignored.
GriddedSeries to_grid(std::span<const Observation> observations, const SensorRecord& sensor,
                      const GridSpec& grid, AmbiguityPolicy policy = AmbiguityPolicy::Throw);

/// Inverse of to_grid for the filled slots.
std::vector<Observation> to_observations(const ObservationSeries& series, const std::string& unit);

}  // namespace soue
