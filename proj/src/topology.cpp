#include "soue/topology.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <ostream>
#include <set>
#include <unordered_map>
#include <unordered_set>

#include "soue/csv.hpp"
#include "soue/errors.hpp"

namespace soue {

double geo_distance(double lat_a, double lon_a, double lat_b, double lon_b) {
  constexpr double half_degree = std::numbers::pi / 360.0;
  constexpr double degree = std::numbers::pi / 180.0;
  const double s_lat = std::sin(half_degree * (lat_a - lat_b));
  const double s_lon = std::sin(half_degree * (lon_a - lon_b));
  double d = s_lat * s_lat + std::cos(degree * lat_a) * std::cos(degree * lat_b) * s_lon * s_lon;
  d = std::clamp(d, 0.0, 1.0);
  const double b = std::atan2(std::sqrt(d), std::sqrt(1.0 - d));
  return 2.0 * kEarthRadiusMeters * b;
}

std::size_t NeighborhoodMatrix::neighbor_count(std::size_t j) const {
  std::size_t c = 0;
  for (std::size_t k = 0; k < size(); ++k) c += cells.at(j, k);
  return c;
}

NeighborhoodMatrix build_node_matrix(std::span<const NodeRecord> nodes, double delta_m) {
  if (!(delta_m >= 0.0)) throw ConfigError("neighborhood threshold must be non-negative");
  NeighborhoodMatrix m;
  m.cells = BinaryMatrix(nodes.size());
  std::unordered_set<std::string> seen;
  for (const auto& n : nodes) {
    if (!seen.insert(n.node_id).second) throw InputError("duplicate node_id '" + n.node_id + "'");
    m.node_order.push_back(n.node_id);
    m.valid_from = m.node_order.size() == 1 ? n.installed_at : std::max(m.valid_from, n.installed_at);
    if (n.removed_at) m.valid_to = m.valid_to ? std::min(*m.valid_to, *n.removed_at) : *n.removed_at;
  }
  for (std::size_t j = 0; j < nodes.size(); ++j) {
    for (std::size_t k = j + 1; k < nodes.size(); ++k) {
      const double d = geo_distance(nodes[j].latitude, nodes[j].longitude, nodes[k].latitude,
                                    nodes[k].longitude);
      const std::uint8_t v = d <= delta_m ? 1 : 0;
      m.cells.set(j, k, v);
      m.cells.set(k, j, v);
    }
  }
  return m;
}

DeploymentVector build_deployment_vector(std::span<const SensorRecord> sensors,
                                         const PropertyKind& property, const TimeRange& interval,
                                         const std::vector<std::string>& node_order) {
  if (interval.empty()) throw ConfigError("deployment interval is empty");
  DeploymentVector e{property, node_order, std::vector<std::uint8_t>(node_order.size(), 0)};
  std::unordered_map<std::string, std::size_t> index;
  for (std::size_t j = 0; j < node_order.size(); ++j) index.emplace(node_order[j], j);
  for (const auto& s : sensors) {
    if (s.property != property || !s.active_throughout(interval)) continue;
    const auto it = index.find(s.node_id);
    if (it != index.end()) e.entries[it->second] = 1;
  }
  return e;
}

SensorNeighborhoodMatrix build_sensor_matrix(const DeploymentVector& deployment,
                                             const NeighborhoodMatrix& node_matrix) {
  if (deployment.node_order != node_matrix.node_order) {
    throw ConfigError("deployment vector and node matrix disagree on node order");
  }
  const std::size_t n = node_matrix.size();
  SensorNeighborhoodMatrix a{deployment.property, node_matrix.valid_from, node_matrix.valid_to,
                             node_matrix.node_order, BinaryMatrix(n)};
  for (std::size_t j = 0; j < n; ++j) {
    if (!deployment.entries[j]) continue;
    for (std::size_t k = 0; k < n; ++k) {
      a.cells.set(j, k, static_cast<std::uint8_t>(deployment.entries[k] & node_matrix.cells.at(j, k)));
    }
  }
  return a;
}

std::vector<ConfigurationEvent> configuration_events(std::span<const NodeRecord> nodes,
                                                     std::span<const SensorRecord> sensors) {
  using Kind = ConfigurationEvent::Kind;
  std::vector<ConfigurationEvent> events;
  for (const auto& n : nodes) {
    events.push_back({n.installed_at, Kind::NodeInstalled, n.node_id});
    if (n.removed_at) events.push_back({*n.removed_at, Kind::NodeRemoved, n.node_id});
  }
  for (const auto& s : sensors) {
    events.push_back({s.installed_at, Kind::SensorInstalled, s.sensor_id});
    if (s.removed_at) events.push_back({*s.removed_at, Kind::SensorRemoved, s.sensor_id});
  }
  const auto rank = [](Kind k) {
    switch (k) {
      case Kind::SensorRemoved: return 0;
      case Kind::NodeRemoved: return 1;
      case Kind::NodeInstalled: return 2;
      case Kind::SensorInstalled: return 3;
    }
    return 4;
  };
  std::stable_sort(events.begin(), events.end(), [&](const auto& a, const auto& b) {
    if (a.time != b.time) return a.time < b.time;
    if (rank(a.kind) != rank(b.kind)) return rank(a.kind) < rank(b.kind);
    return natural_less(a.id, b.id);
  });
  return events;
}

namespace {

void check_events(std::span<const ConfigurationEvent> events, std::span<const SensorRecord> sensors) {
  using Kind = ConfigurationEvent::Kind;
  std::unordered_map<std::string, const SensorRecord*> sensor_by_id;
  for (const auto& s : sensors) sensor_by_id.emplace(s.sensor_id, &s);

  std::unordered_set<std::string> live_nodes;
  std::unordered_set<std::string> live_sensors;
  std::unordered_map<std::string, std::size_t> sensors_on_node;
  std::set<std::pair<std::string, std::string>> occupied;  // (node, property)
  for (std::size_t i = 0; i < events.size(); ++i) {
    const auto& ev = events[i];
    if (i > 0 && ev.time < events[i - 1].time) {
      throw InputError("configuration events are not time-ordered");
    }
    const auto when = " at " + format_iso8601(ev.time);
    switch (ev.kind) {
      case Kind::NodeInstalled:
        if (!live_nodes.insert(ev.id).second) throw InputError("node " + ev.id + " installed twice" + when);
        break;
      case Kind::NodeRemoved:
        if (!live_nodes.erase(ev.id)) throw InputError("node " + ev.id + " removed while absent" + when);
        if (sensors_on_node[ev.id] > 0) {
          throw InputError("node " + ev.id + " removed while sensors remain installed" + when);
        }
        break;
      case Kind::SensorInstalled:
      case Kind::SensorRemoved: {
        const auto it = sensor_by_id.find(ev.id);
        if (it == sensor_by_id.end()) throw ReferenceError("sensor_id", ev.id);
        const auto& s = *it->second;
        const std::pair<std::string, std::string> key{s.node_id, s.property.name()};
        if (ev.kind == Kind::SensorInstalled) {
          if (!live_nodes.contains(s.node_id)) {
            throw InputError("sensor " + ev.id + " installed on absent node " + s.node_id + when);
          }
          if (!live_sensors.insert(ev.id).second) {
            throw InputError("sensor " + ev.id + " installed twice" + when);
          }
          if (!occupied.insert(key).second) {
            throw InputError("node " + s.node_id + " already hosts a " + s.property.name() +
                             " sensor" + when);
          }
          ++sensors_on_node[s.node_id];
        } else {
          if (!live_sensors.erase(ev.id)) throw InputError("sensor " + ev.id + " removed while absent" + when);
          occupied.erase(key);
          --sensors_on_node[s.node_id];
        }
        break;
      }
    }
  }
}

}  // namespace

std::vector<TopologyVersion> version_matrices(std::span<const ConfigurationEvent> events,
                                              std::span<const NodeRecord> nodes,
                                              std::span<const SensorRecord> sensors,
                                              const TimeRange& range, double delta_m,
                                              std::span<const PropertyKind> properties) {
  if (range.empty()) throw ConfigError("time range is empty");
  check_events(events, sensors);

  std::vector<EpochSeconds> cuts{range.from};
  for (const auto& ev : events) {
    if (ev.time > range.from && ev.time < range.to && ev.time != cuts.back()) cuts.push_back(ev.time);
  }
  cuts.push_back(range.to);

  std::vector<TopologyVersion> versions;
  for (std::size_t v = 0; v + 1 < cuts.size(); ++v) {
    TopologyVersion version;
    version.interval = {cuts[v], cuts[v + 1]};

    std::vector<NodeRecord> active;
    for (const auto& n : nodes) {
      if (n.active_throughout(version.interval)) active.push_back(n);
    }
    std::sort(active.begin(), active.end(),
              [](const auto& a, const auto& b) { return natural_less(a.node_id, b.node_id); });
    version.node_matrix = build_node_matrix(active, delta_m);
    version.node_matrix.valid_from = version.interval.from;
    version.node_matrix.valid_to = version.interval.to;

    const auto& order = version.node_matrix.node_order;
    std::unordered_map<std::string, std::size_t> index;
    for (std::size_t j = 0; j < order.size(); ++j) index.emplace(order[j], j);

    for (const auto& p : properties) {
      version.deployments.push_back(build_deployment_vector(sensors, p, version.interval, order));
      version.sensor_matrices.push_back(build_sensor_matrix(version.deployments.back(), version.node_matrix));
      std::vector<std::string> ids(order.size());
      for (const auto& s : sensors) {
        if (s.property != p || !s.active_throughout(version.interval)) continue;
        const auto it = index.find(s.node_id);
        if (it != index.end()) ids[it->second] = s.sensor_id;
      }
      version.sensor_ids.push_back(std::move(ids));
    }
    versions.push_back(std::move(version));
  }
  return versions;
}

std::vector<TopologyVersion> version_matrices(const NetworkTables& tables, const TimeRange& range,
                                              double delta_m,
                                              std::span<const PropertyKind> properties) {
  const auto events = configuration_events(tables.nodes, tables.sensors);
  return version_matrices(events, tables.nodes, tables.sensors, range, delta_m, properties);
}

void write_matrix_csv(std::ostream& out, const std::vector<std::string>& node_order,
                      const BinaryMatrix& cells) {
  out << "node_id";
  for (const auto& id : node_order) out << ',' << id;
  out << '\n';
  for (std::size_t j = 0; j < node_order.size(); ++j) {
    out << node_order[j];
    for (std::size_t k = 0; k < node_order.size(); ++k) out << ',' << int{cells.at(j, k)};
    out << '\n';
  }
}

}  // namespace soue
