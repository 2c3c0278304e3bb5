#pragma once

// Synthetic datasets with injected segment outliers and unusual events, plus
// window-level precision/recall scoring and threshold sweeps.

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "soue/classify.hpp"
#include "soue/ingest.hpp"
#include "soue/pipeline.hpp"
#include "soue/rules.hpp"

namespace soue {

inline const PropertyKind kAirTemperature{"air_temperature"};
inline const PropertyKind kRelativeHumidity{"relative_humidity"};
inline const PropertyKind kAirPressure{"air_pressure"};

/// Parameters of the shared signal of one property.
struct SignalModel {
  double mean = 0.0;
  double diurnal_amplitude = 0.0;
  double diurnal_phase = 0.0;        ///< fraction of a day
  double semidiurnal_amplitude = 0.0;
  double drift_amplitude = 0.0;      ///< multi-day swings
  double weather_amplitude = 0.0;    ///< shared smoothed noise
  double node_offset = 0.0;          ///< per-node constant offset range (+/-)
  double node_gain = 0.0;            ///< per-node relative amplitude spread (+/-)
  double noise = 0.0;                ///< per-sensor white noise (std dev)
  double clamp_lo = -1e9;
  double clamp_hi = 1e9;
  std::string unit;
};

struct CleanConfig {
  std::uint64_t seed = 1;
  std::size_t nodes = 36;
  std::size_t days = 30;
  EpochSeconds grid_step = 600;
  EpochSeconds start = 1313625600;  // 2011-08-18T00:00:00Z
  double origin_latitude = -28.2300;
  double origin_longitude = 153.2700;
  double spacing_m = 170.0;
  double jitter_m = 20.0;
  std::map<std::string, SignalModel> signals = default_signals();

  static std::map<std::string, SignalModel> default_signals();
};

struct SyntheticDataset {
  std::vector<NodeRecord> nodes;
  std::vector<SensorRecord> sensors;
  std::vector<PropertyKind> properties;
  std::map<std::string, std::string> units;  ///< property name -> unit
  GridSpec grid;
  std::map<std::string, std::vector<double>> values;  ///< sensor_id -> one value per slot

  TimeRange range() const { return grid.range(); }
  const SensorRecord& sensor(const std::string& node_id, const PropertyKind& property) const;
  std::size_t observation_count(const PropertyKind& property) const;

  NetworkTables tables(bool with_observations = true) const;
  std::vector<Observation> observations() const;
  std::map<std::string, ObservationSeries> series() const;

  friend bool operator==(const SyntheticDataset&, const SyntheticDataset&) = default;
};

/// Spatially clustered nodes (every node has at least three neighbors within
/// 300 m for the default spacing) carrying temperature, humidity and pressure
/// sensors that follow one shared smooth signal per property.
SyntheticDataset generate_clean(const CleanConfig& config);

enum class InjectionMode : std::uint8_t { Outliers, EventsStrong, EventsPositive };

std::string_view to_string(InjectionMode m);
std::optional<InjectionMode> injection_mode_from_string(std::string_view text);

struct ValueRange {
  double lo = 0.0;
  double hi = 0.0;
};

struct InjectionSpec {
  InjectionMode mode = InjectionMode::Outliers;
  std::size_t streams_per_round = 8;
  std::size_t segment_length = 12;
  std::size_t rounds = 15;
  /// Outlier value ranges per property name.
  std::map<std::string, ValueRange> ranges{{"air_temperature", {0.0, 25.0}},
                                           {"relative_humidity", {40.0, 100.0}}};
  /// Per-step magnitude of injected event trends, per property name.
  std::map<std::string, ValueRange> event_step{{"air_temperature", {1.5, 3.0}},
                                               {"relative_humidity", {4.0, 8.0}}};
  /// Segments of one property closer than this many slots must not share a
  /// node or spatial neighborhood.
  std::size_t min_gap = 12;
  double exclusion_radius_m = 300.0;
  std::uint64_t seed = 1;

  /// 8 x 12 x 15 for outliers, 8 x 12 x 30 for events.
  static InjectionSpec defaults(InjectionMode mode, std::uint64_t seed = 1);
};

struct TruthSegment {
  PropertyKind property{"unset"};
  std::string node_id;
  std::size_t slot_start = 0;
  std::size_t slot_end = 0;  ///< inclusive
  Verdict label = Verdict::ErroneousOutlier;

  friend bool operator==(const TruthSegment&, const TruthSegment&) = default;
};

struct GroundTruth {
  std::optional<GridSpec> grid;
  std::vector<TruthSegment> segments;

  std::size_t count(Verdict label) const;
  std::size_t replaced_observations() const;
};

struct InjectedDataset {
  SyntheticDataset dataset;
  GroundTruth truth;
};

/// Replaces random temperature and humidity segments with uniform noise.
InjectedDataset inject_outliers(const SyntheticDataset& clean, const InjectionSpec& spec);
/// Replaces the same window of temperature and humidity at random nodes with
/// coherent deviations (inverse for EventsStrong, co-moving for EventsPositive).
InjectedDataset inject_events(const SyntheticDataset& clean, const InjectionSpec& spec);
/// Dispatches on spec.mode.
InjectedDataset inject(const SyntheticDataset& clean, const InjectionSpec& spec);

/// temperature <-> humidity rules matching the mode, and the predicates that activate them.
RuleSet rules_for_mode(InjectionMode mode);
PredicateSet predicates_for_mode(InjectionMode mode);
Verdict target_label(InjectionMode mode);

void write_truth_csv(std::ostream& out, const GroundTruth& truth);
GroundTruth read_truth_csv(std::istream& in, const std::string& source);

/// One detector output window, as scored.
struct PredictedWindow {
  PropertyKind property{"unset"};
  std::string node_id;
  std::size_t slot_start = 0;
  std::size_t slot_end = 0;  ///< inclusive
  Verdict verdict = Verdict::Normal;
};

/// Windows whose verdict is ErroneousOutlier or UnusualEvent.
std::vector<PredictedWindow> anomalous_windows(const DetectionResult& result);

struct MetricsRow {
  double beta = 0.0;
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t fn = 0;
  std::optional<double> precision;  ///< undefined when nothing was predicted
  std::optional<double> recall;     ///< undefined when there is no truth
  std::size_t duplicates = 0;       ///< extra windows on an already matched segment
  std::size_t suspicious = 0;       ///< suspicious flags behind the verdicts

  friend bool operator==(const MetricsRow&, const MetricsRow&) = default;
};

/// One-to-one matching of target-label windows to overlapping truth segments of
/// the same property, node and label.
MetricsRow score(const std::vector<PredictedWindow>& predicted, const GroundTruth& truth,
                 Verdict target, double beta = 0.0);
/// Throws ConfigError when the truth grid differs from the detection grid.
MetricsRow score(const DetectionResult& result, const GroundTruth& truth, Verdict target);

/// Metrics for beta_from, beta_from + step, ... <= beta_to from one session.
std::vector<MetricsRow> sweep(const DetectionSession& session, const GroundTruth& truth,
                              double beta_from, double beta_to, double beta_step, Verdict target);

/// Thresholds of a sweep, rounded to 1e-9 to avoid accumulated drift.
std::vector<double> beta_values(double beta_from, double beta_to, double beta_step);

void write_metrics_csv(std::ostream& out, const std::vector<MetricsRow>& rows);

}  // namespace soue
