#pragma once

// End-to-end detection over a queried time range, honoring topology versions.

#include <cstddef>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "soue/classify.hpp"
#include "soue/ingest.hpp"
#include "soue/rules.hpp"
#include "soue/screening.hpp"
#include "soue/topology.hpp"

namespace soue {

struct DetectionConfig {
  double delta_m = 300.0;
  std::size_t eta = 12;
  double beta = 0.90;
  std::map<std::string, double> value_scale;  ///< per property name; 1.0 when absent
  PredicateSet active_predicates = default_active_predicates();
  EpochSeconds grid_step = 600;

  /// Throws ConfigError on any out-of-range parameter.
  void validate() const;
  double scale_for(const PropertyKind& p) const;
};

/// Matrices and similarity tensors for one topology version.
struct VersionAudit {
  TimeRange interval;
  NeighborhoodMatrix node_matrix;
  std::vector<SensorNeighborhoodMatrix> sensor_matrices;  // per property
  std::vector<SimilarityTensor> tensors;                  // per property, local node order
  std::vector<std::size_t> global_node;                   // local -> global node index
  std::vector<std::size_t> windows;                       // global windows assigned here
};

struct DetectionResult {
  DetectionConfig config;
  double beta = 0.0;
  GridSpec grid;
  WindowPlan plan;
  std::vector<PropertyKind> properties;
  std::vector<std::string> node_order;  // every node seen in any version
  RelationshipMatrix relationships;
  std::vector<SuspicionTable> suspicion;  // per property, global node order
  std::vector<DecisionTable> decisions;   // per property, global node order
  std::vector<std::shared_ptr<const VersionAudit>> versions;
  GridStats grid_stats;
  std::vector<std::string> warnings;

  /// Present neighbor similarities behind (property i, global node j, window l).
  std::vector<double> neighbor_similarities(std::size_t i, std::size_t j, std::size_t l) const;
};

/// Everything up to the beta-dependent vote, computed once and re-thresholded.
class DetectionSession {
 public:
  /// Grids the raw observations (colliding observations are rejected with a warning).
  DetectionSession(const NetworkTables& tables, const RuleSet& rules, DetectionConfig config,
                   const TimeRange& range);

  /// Uses pre-gridded series keyed by sensor_id; observations in `tables` are ignored.
  /// Every series must share the grid implied by `range` and config.grid_step.
  DetectionSession(const NetworkTables& tables, const std::map<std::string, ObservationSeries>& series,
                   const RuleSet& rules, DetectionConfig config, const TimeRange& range);

  DetectionResult classify(double beta) const;
  DetectionResult classify() const { return classify(config_.beta); }

  const DetectionConfig& config() const { return config_; }
  const GridSpec& grid() const { return grid_; }
  const WindowPlan& plan() const { return plan_; }
  const std::vector<PropertyKind>& properties() const { return properties_; }
  const std::vector<std::string>& node_order() const { return node_order_; }
  const std::vector<std::shared_ptr<const VersionAudit>>& versions() const { return versions_; }

 private:
  void prepare(const NetworkTables& tables, const std::map<std::string, ObservationSeries>& series,
               const RuleSet& rules, const TimeRange& range);

  DetectionConfig config_;
  GridSpec grid_;
  WindowPlan plan_;
  std::vector<PropertyKind> properties_;
  std::vector<std::string> node_order_;
  RelationshipMatrix relationships_;
  std::vector<std::shared_ptr<const VersionAudit>> versions_;
  GridStats grid_stats_;
  std::vector<std::string> warnings_;
};

/// Sorted distinct properties of the sensor table.
std::vector<PropertyKind> properties_of(const NetworkTables& tables);

/// Grids every sensor's observations onto `grid`.
std::map<std::string, ObservationSeries> grid_all(const NetworkTables& tables, const GridSpec& grid,
                                                  GridStats* stats = nullptr,
                                                  AmbiguityPolicy policy = AmbiguityPolicy::Reject);

DetectionResult run_detection(const NetworkTables& tables, const RuleSet& rules,
                              const DetectionConfig& config, const TimeRange& range);

/// [earliest observation, latest observation + grid_step); empty range when there are none.
TimeRange observation_span(const NetworkTables& tables, EpochSeconds grid_step);

}  // namespace soue
