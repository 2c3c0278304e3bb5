#pragma once

// Spatial neighborhood matrices over nodes and per-property sensors, versioned
// by network configuration changes.

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "soue/ingest.hpp"
#include "soue/matrix.hpp"
#include "soue/time.hpp"

namespace soue {

/// WGS84 equatorial radius in meters.
inline constexpr double kEarthRadiusMeters = 6378137.0;

/// Haversine great-circle distance in meters on a sphere of radius kEarthRadiusMeters.
double geo_distance(double lat_a, double lon_a, double lat_b, double lon_b);

struct NeighborhoodMatrix {
  EpochSeconds valid_from = 0;
  std::optional<EpochSeconds> valid_to;
  std::vector<std::string> node_order;
  BinaryMatrix cells;  // zero diagonal

  std::size_t size() const { return node_order.size(); }
  std::size_t neighbor_count(std::size_t j) const;
};

struct DeploymentVector {
  PropertyKind property{"unset"};
  std::vector<std::string> node_order;
  std::vector<std::uint8_t> entries;
};

struct SensorNeighborhoodMatrix {
  PropertyKind property{"unset"};
  EpochSeconds valid_from = 0;
  std::optional<EpochSeconds> valid_to;
  std::vector<std::string> node_order;
  BinaryMatrix cells;
};

/// u_jk = 1 iff j != k and geo_distance(j, k) <= delta_m. Rows follow input order.
/// The validity interval is the intersection of the nodes' active intervals.
NeighborhoodMatrix build_node_matrix(std::span<const NodeRecord> nodes, double delta_m);

/// Entry j is 1 iff node_order[j] hosts a sensor of `property` for the whole interval.
DeploymentVector build_deployment_vector(std::span<const SensorRecord> sensors,
                                         const PropertyKind& property, const TimeRange& interval,
                                         const std::vector<std::string>& node_order);

/// (a)_jk = e_j * e_k * u_jk.
SensorNeighborhoodMatrix build_sensor_matrix(const DeploymentVector& deployment,
                                             const NeighborhoodMatrix& node_matrix);

struct ConfigurationEvent {
  enum class Kind : std::uint8_t { NodeRemoved, SensorRemoved, NodeInstalled, SensorInstalled };

  EpochSeconds time = 0;
  Kind kind = Kind::NodeInstalled;
  std::string id;
};

/// Install/remove events from the tables, sorted by time (removals first on ties).
std::vector<ConfigurationEvent> configuration_events(std::span<const NodeRecord> nodes,
                                                     std::span<const SensorRecord> sensors);

/// One configuration epoch with its matrices.
struct TopologyVersion {
  TimeRange interval;
  NeighborhoodMatrix node_matrix;
  std::vector<DeploymentVector> deployments;             // one per property
  std::vector<SensorNeighborhoodMatrix> sensor_matrices;  // one per property
  /// sensor_ids[i][j]: sensor serving property i on node j, empty when none.
  std::vector<std::vector<std::string>> sensor_ids;
};

/// Splits `range` at every configuration event and builds the matrices of each piece.
/// Throws InputError when events are out of order or contradictory (an install
/// of something already installed, or a removal of something absent).
std::vector<TopologyVersion> version_matrices(std::span<const ConfigurationEvent> events,
                                              std::span<const NodeRecord> nodes,
                                              std::span<const SensorRecord> sensors,
                                              const TimeRange& range, double delta_m,
                                              std::span<const PropertyKind> properties);

/// Convenience: derives the events from the tables.
std::vector<TopologyVersion> version_matrices(const NetworkTables& tables, const TimeRange& range,
                                              double delta_m,
                                              std::span<const PropertyKind> properties);

/// CSV with a node_id header row and column.
void write_matrix_csv(std::ostream& out, const std::vector<std::string>& node_order,
                      const BinaryMatrix& cells);

}  // namespace soue
