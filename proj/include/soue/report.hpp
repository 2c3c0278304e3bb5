#pragma once

// JSON detection reports and CSV audit dumps.

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "soue/evalharness.hpp"
#include "soue/pipeline.hpp"

namespace soue {

struct ReportRecord {
  PropertyKind property{"unset"};
  std::string node_id;
  std::size_t window = 0;
  std::size_t slot_start = 0;
  std::size_t slot_end = 0;  // inclusive
  EpochSeconds start = 0;
  EpochSeconds end = 0;      // exclusive
  Verdict verdict = Verdict::Normal;
  std::size_t c1 = 0;
  std::size_t c2 = 0;
  std::optional<double> min_similarity;
  std::optional<double> median_similarity;
  std::size_t neighbors = 0;
};

/// The parts of a report the scorer needs.
struct ParsedReport {
  double beta = 0.0;
  GridSpec grid;
  WindowPlan plan;
  std::vector<ReportRecord> records;

  std::vector<PredictedWindow> windows() const;
};

/// Anomalous records sorted by (node, property, window).
std::vector<ReportRecord> report_records(const DetectionResult& result);

nlohmann::ordered_json build_report(const DetectionResult& result, const TimeRange& range);
/// Report for a range with nothing to evaluate.
nlohmann::ordered_json empty_report(const DetectionConfig& config, const TimeRange& range,
                                    const std::vector<std::string>& warnings);

/// Throws InputError when required members are missing or mistyped.
ParsedReport parse_report(const nlohmann::json& doc);
ParsedReport load_report(const std::filesystem::path& path);

std::string dump_report(const nlohmann::ordered_json& doc);

/// U_<from>_<to>.csv and A_<property>_<from>_<to>.csv per topology version.
void dump_matrices(const DetectionResult& result, const std::filesystem::path& dir);
/// SM_<property>.csv with node_j,node_k,window,similarity rows.
void dump_similarities(const DetectionResult& result, const std::filesystem::path& dir);

}  // namespace soue
