#include "soue/pipeline.hpp"

#include <algorithm>
#include <set>
#include <unordered_map>

#include "soue/csv.hpp"
#include "soue/errors.hpp"

namespace soue {

void DetectionConfig::validate() const {
  if (!(delta_m > 0.0)) throw ConfigError("neighborhood threshold must be positive");
  if (eta < 2 || eta % 2 != 0) throw ConfigError("window length must be an even integer >= 2");
  if (!(beta > 0.0 && beta <= 1.0)) throw ConfigError("similarity threshold must lie in (0, 1]");
  if (grid_step <= 0) throw ConfigError("grid step must be positive");
  if (active_predicates.empty()) throw ConfigError("no active correlation predicates");
  for (const auto& [name, scale] : value_scale) {
    if (!(scale > 0.0)) throw ConfigError("value scale for " + name + " must be positive");
  }
}

double DetectionConfig::scale_for(const PropertyKind& p) const {
  const auto it = value_scale.find(p.name());
  return it == value_scale.end() ? 1.0 : it->second;
}

std::vector<PropertyKind> properties_of(const NetworkTables& tables) {
  std::set<PropertyKind> seen;
  for (const auto& s : tables.sensors) seen.insert(s.property);
  return {seen.begin(), seen.end()};
}

std::map<std::string, ObservationSeries> grid_all(const NetworkTables& tables, const GridSpec& grid,
                                                  GridStats* stats, AmbiguityPolicy policy) {
  std::unordered_map<std::string, std::vector<Observation>> by_sensor;
  const EpochSeconds half = grid.step / 2;
  const TimeRange reach{grid.start - half, grid.slot_time(grid.slots) + half};
  for (const auto& o : tables.observations) {
    if (o.timestamp < reach.from || o.timestamp > reach.to) continue;
    by_sensor[o.sensor_id].push_back(o);
  }
  std::map<std::string, ObservationSeries> out;
  for (const auto& s : tables.sensors) {
    const auto it = by_sensor.find(s.sensor_id);
    const std::span<const Observation> rows =
        it == by_sensor.end() ? std::span<const Observation>{} : std::span<const Observation>(it->second);
    auto gridded = to_grid(rows, s, grid, policy);
    if (stats) *stats += gridded.stats;
    out.emplace(s.sensor_id, std::move(gridded.series));
  }
  return out;
}

TimeRange observation_span(const NetworkTables& tables, EpochSeconds grid_step) {
  if (tables.observations.empty()) return {};
  const auto [lo, hi] = std::minmax_element(
      tables.observations.begin(), tables.observations.end(),
      [](const auto& a, const auto& b) { return a.timestamp < b.timestamp; });
  return {lo->timestamp, hi->timestamp + grid_step};
}

DetectionSession::DetectionSession(const NetworkTables& tables, const RuleSet& rules,
                                   DetectionConfig config, const TimeRange& range)
    : config_(std::move(config)) {
  config_.validate();
  if (range.empty()) throw ConfigError("time range is empty");
  grid_ = make_grid(range, config_.grid_step);
  const auto series = grid_all(tables, grid_, &grid_stats_, AmbiguityPolicy::Reject);
  if (grid_stats_.ambiguous > 0) {
    warnings_.push_back(std::to_string(grid_stats_.ambiguous) +
                        " observations rejected because they collide on one grid slot");
  }
  if (grid_stats_.discarded > 0) {
    warnings_.push_back(std::to_string(grid_stats_.discarded) +
                        " observations discarded for lying off the sampling grid");
  }
  prepare(tables, series, rules, range);
}

DetectionSession::DetectionSession(const NetworkTables& tables,
                                   const std::map<std::string, ObservationSeries>& series,
                                   const RuleSet& rules, DetectionConfig config, const TimeRange& range)
    : config_(std::move(config)) {
  config_.validate();
  if (range.empty()) throw ConfigError("time range is empty");
  grid_ = make_grid(range, config_.grid_step);
  for (const auto& [id, s] : series) {
    if (s.grid != grid_ || s.slots.size() != grid_.slots) {
      throw ConfigError("series for sensor " + id + " is not on the detection grid");
    }
    grid_stats_.filled += s.filled();
  }
  prepare(tables, series, rules, range);
}

void DetectionSession::prepare(const NetworkTables& tables,
                               const std::map<std::string, ObservationSeries>& series,
                               const RuleSet& rules, const TimeRange& range) {
  plan_ = plan_windows(grid_.slots, config_.eta);
  if (plan_.count == 0) warnings_.push_back("time range holds fewer slots than one window");
  if (grid_stats_.filled == 0) warnings_.push_back("no observations in the requested time range");

  properties_ = properties_of(tables);
  relationships_ = build_relationship_matrix(rules, properties_, config_.active_predicates);

  const auto versions = version_matrices(tables, range, config_.delta_m, properties_);

  std::set<std::string, NaturalLess> all_nodes;
  for (const auto& v : versions) all_nodes.insert(v.node_matrix.node_order.begin(), v.node_matrix.node_order.end());
  node_order_.assign(all_nodes.begin(), all_nodes.end());
  std::unordered_map<std::string, std::size_t> global_index;
  for (std::size_t j = 0; j < node_order_.size(); ++j) global_index.emplace(node_order_[j], j);

  std::vector<std::uint8_t> assigned(plan_.count, 0);
  std::size_t straddling = 0;
  for (const auto& v : versions) {
    auto audit = std::make_shared<VersionAudit>();
    audit->interval = v.interval;
    audit->node_matrix = v.node_matrix;
    audit->sensor_matrices = v.sensor_matrices;
    for (const auto& id : v.node_matrix.node_order) audit->global_node.push_back(global_index.at(id));

    std::vector<std::uint8_t> mask(plan_.count, 0);
    for (std::size_t l = 0; l < plan_.count; ++l) {
      const EpochSeconds first = grid_.slot_time(plan_.first_slot(l));
      const EpochSeconds last = grid_.slot_time(plan_.last_slot(l));
      if (!assigned[l] && first >= v.interval.from && last < v.interval.to) {
        mask[l] = 1;
        assigned[l] = 1;
        audit->windows.push_back(l);
      }
    }

    for (std::size_t i = 0; i < properties_.size(); ++i) {
      std::vector<const ObservationSeries*> local(v.node_matrix.size(), nullptr);
      for (std::size_t j = 0; j < local.size(); ++j) {
        const auto& sid = v.sensor_ids[i][j];
        if (sid.empty()) continue;
        if (const auto it = series.find(sid); it != series.end()) local[j] = &it->second;
      }
      audit->tensors.push_back(build_similarity_tensor(properties_[i], local, v.sensor_matrices[i], plan_,
                                                       config_.scale_for(properties_[i]), mask));
    }
    versions_.push_back(std::move(audit));
  }
  straddling = static_cast<std::size_t>(std::count(assigned.begin(), assigned.end(), 0));
  if (straddling > 0 && versions.size() > 1) {
    warnings_.push_back(std::to_string(straddling) +
                        " windows straddle a configuration change and stay unevaluated");
  }
}

DetectionResult DetectionSession::classify(double beta) const {
  if (!(beta > 0.0 && beta <= 1.0)) throw ConfigError("similarity threshold must lie in (0, 1]");
  DetectionResult r;
  r.config = config_;
  r.beta = beta;
  r.grid = grid_;
  r.plan = plan_;
  r.properties = properties_;
  r.node_order = node_order_;
  r.relationships = relationships_;
  r.versions = versions_;
  r.grid_stats = grid_stats_;
  r.warnings = warnings_;

  const std::size_t n = node_order_.size();
  for (const auto& p : properties_) {
    r.suspicion.push_back({p, node_order_, plan_.count,
                           std::vector<Flag>(n * plan_.count, Flag::Unevaluated)});
  }
  for (const auto& v : versions_) {
    for (std::size_t i = 0; i < properties_.size(); ++i) {
      const auto local = vote_suspicious(v->tensors[i], beta);
      for (std::size_t lj = 0; lj < v->global_node.size(); ++lj) {
        for (const std::size_t l : v->windows) {
          r.suspicion[i].at(v->global_node[lj], l) = local.at(lj, l);
        }
      }
    }
  }
  r.decisions = classify_all(r.suspicion, r.relationships);
  return r;
}

std::vector<double> DetectionResult::neighbor_similarities(std::size_t i, std::size_t j,
                                                           std::size_t l) const {
  for (const auto& v : versions) {
    if (!std::binary_search(v->windows.begin(), v->windows.end(), l)) continue;
    const auto it = std::find(v->global_node.begin(), v->global_node.end(), j);
    if (it == v->global_node.end()) return {};
    return v->tensors[i].neighbor_values(static_cast<std::size_t>(it - v->global_node.begin()), l);
  }
  return {};
}

DetectionResult run_detection(const NetworkTables& tables, const RuleSet& rules,
                              const DetectionConfig& config, const TimeRange& range) {
  return DetectionSession(tables, rules, config, range).classify();
}

}  // namespace soue
