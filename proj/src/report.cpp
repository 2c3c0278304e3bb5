#include "soue/report.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include "soue/csv.hpp"
#include "soue/errors.hpp"

namespace soue {
namespace {

using ordered_json = nlohmann::ordered_json;

constexpr const char* kFormat = "soue-report";
constexpr int kFormatVersion = 1;

ordered_json config_json(const DetectionConfig& c, const TimeRange& range) {
  ordered_json scales = ordered_json::object();
  for (const auto& [name, s] : c.value_scale) scales[name] = s;
  ordered_json preds = ordered_json::array();
  for (const auto p : c.active_predicates) preds.push_back(std::string(short_name(p)));
  return {{"from", format_iso8601(range.from)},
          {"to", format_iso8601(range.to)},
          {"delta_m", c.delta_m},
          {"eta", c.eta},
          {"beta", c.beta},
          {"grid_step_s", c.grid_step},
          {"value_scale", scales},
          {"active_predicates", preds}};
}

ordered_json summary_counts(const std::vector<DecisionTable>& decisions) {
  ordered_json by_property = ordered_json::object();
  ordered_json total = {{"Normal", 0}, {"ErroneousOutlier", 0}, {"UnusualEvent", 0}, {"Unevaluated", 0}};
  for (const auto& t : decisions) {
    ordered_json counts = ordered_json::object();
    for (const auto v : {Verdict::Normal, Verdict::ErroneousOutlier, Verdict::UnusualEvent, Verdict::Unevaluated}) {
      const std::string key(to_string(v));
      counts[key] = t.count(v);
      total[key] = total[key].get<std::size_t>() + t.count(v);
    }
    by_property[t.property.name()] = counts;
  }
  return {{"total", total}, {"by_property", by_property}};
}

template <typename T>
T member(const nlohmann::json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw InputError(std::string("report lacks '") + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception&) {
    throw InputError(std::string("report member '") + key + "' has the wrong type");
  }
}

std::string slice_name(const TimeRange& r) { return format_compact(r.from) + "_" + format_compact(r.to); }

}  // namespace

std::vector<PredictedWindow> ParsedReport::windows() const {
  std::vector<PredictedWindow> out;
  for (const auto& r : records) out.push_back({r.property, r.node_id, r.slot_start, r.slot_end, r.verdict});
  return out;
}

std::vector<ReportRecord> report_records(const DetectionResult& result) {
  std::vector<ReportRecord> out;
  for (std::size_t i = 0; i < result.decisions.size(); ++i) {
    const auto& table = result.decisions[i];
    for (std::size_t j = 0; j < table.node_order.size(); ++j) {
      for (std::size_t l = 0; l < table.windows; ++l) {
        const auto& cell = table.at(j, l);
        if (cell.verdict != Verdict::ErroneousOutlier && cell.verdict != Verdict::UnusualEvent) continue;
        ReportRecord r;
        r.property = table.property;
        r.node_id = table.node_order[j];
        r.window = l;
        r.slot_start = result.plan.first_slot(l);
        r.slot_end = result.plan.last_slot(l);
        r.start = result.grid.slot_time(r.slot_start);
        r.end = result.grid.slot_time(r.slot_end + 1);
        r.verdict = cell.verdict;
        r.c1 = cell.c1;
        r.c2 = cell.c2;
        auto sims = result.neighbor_similarities(i, j, l);
        r.neighbors = sims.size();
        if (!sims.empty()) {
          std::sort(sims.begin(), sims.end());
          r.min_similarity = sims.front();
          const std::size_t h = sims.size() / 2;
          r.median_similarity = sims.size() % 2 ? sims[h] : 0.5 * (sims[h - 1] + sims[h]);
        }
        out.push_back(std::move(r));
      }
    }
  }
  std::sort(out.begin(), out.end(), [](const ReportRecord& a, const ReportRecord& b) {
    if (a.node_id != b.node_id) return natural_less(a.node_id, b.node_id);
    if (a.property != b.property) return a.property < b.property;
    return a.window < b.window;
  });
  return out;
}

ordered_json build_report(const DetectionResult& result, const TimeRange& range) {
  auto config = result.config;
  config.beta = result.beta;
  ordered_json records = ordered_json::array();
  std::set<std::pair<std::string, std::size_t>> event_keys;
  std::vector<std::pair<std::string, std::size_t>> events;
  for (const auto& r : report_records(result)) {
    ordered_json rec = {{"property", r.property.name()},
                        {"node_id", r.node_id},
                        {"window", r.window},
                        {"slot_start", r.slot_start},
                        {"slot_end", r.slot_end},
                        {"start", format_iso8601(r.start)},
                        {"end", format_iso8601(r.end)},
                        {"verdict", std::string(to_string(r.verdict))},
                        {"c1", r.c1},
                        {"c2", r.c2},
                        {"neighbors", r.neighbors}};
    rec["min_similarity"] = r.min_similarity ? ordered_json(*r.min_similarity) : ordered_json(nullptr);
    rec["median_similarity"] = r.median_similarity ? ordered_json(*r.median_similarity) : ordered_json(nullptr);
    records.push_back(std::move(rec));
    if (r.verdict == Verdict::UnusualEvent && event_keys.emplace(r.node_id, r.window).second) {
      events.emplace_back(r.node_id, r.window);
    }
  }
  std::sort(events.begin(), events.end(), [](const auto& a, const auto& b) {
    if (a.first != b.first) return natural_less(a.first, b.first);
    return a.second < b.second;
  });
  ordered_json event_windows = ordered_json::array();
  for (const auto& [node, l] : events) event_windows.push_back({{"node_id", node}, {"window", l}});

  ordered_json props = ordered_json::array();
  for (const auto& p : result.properties) props.push_back(p.name());
  ordered_json pairs = ordered_json::array();
  const auto& y = result.relationships;
  for (std::size_t i = 0; i < y.size(); ++i) {
    for (std::size_t k = i + 1; k < y.size(); ++k) {
      if (y.cells.at(i, k)) pairs.push_back({y.property_order[i].name(), y.property_order[k].name()});
    }
  }
  ordered_json versions = ordered_json::array();
  for (const auto& v : result.versions) {
    versions.push_back({{"from", format_iso8601(v->interval.from)},
                        {"to", format_iso8601(v->interval.to)},
                        {"nodes", v->node_matrix.size()},
                        {"windows", v->windows.size()}});
  }

  ordered_json doc;
  doc["format"] = kFormat;
  doc["format_version"] = kFormatVersion;
  doc["config"] = config_json(config, range);
  doc["grid"] = {{"start", format_iso8601(result.grid.start)},
                 {"step_s", result.grid.step},
                 {"slots", result.grid.slots}};
  doc["plan"] = {{"eta", result.plan.eta}, {"stride", result.plan.stride()}, {"windows", result.plan.count}};
  doc["properties"] = props;
  doc["nodes"] = result.node_order;
  doc["correlated_properties"] = pairs;
  doc["versions"] = versions;
  doc["records"] = records;
  doc["event_windows"] = event_windows;
  doc["summary"] = summary_counts(result.decisions);
  doc["warnings"] = result.warnings;
  return doc;
}

ordered_json empty_report(const DetectionConfig& config, const TimeRange& range,
                          const std::vector<std::string>& warnings) {
  const GridSpec grid{range.from, config.grid_step, 0};
  ordered_json doc;
  doc["format"] = kFormat;
  doc["format_version"] = kFormatVersion;
  doc["config"] = config_json(config, range);
  doc["grid"] = {{"start", format_iso8601(grid.start)}, {"step_s", grid.step}, {"slots", 0}};
  doc["plan"] = {{"eta", config.eta}, {"stride", config.eta / 2}, {"windows", 0}};
  doc["properties"] = ordered_json::array();
  doc["nodes"] = ordered_json::array();
  doc["correlated_properties"] = ordered_json::array();
  doc["versions"] = ordered_json::array();
  doc["records"] = ordered_json::array();
  doc["event_windows"] = ordered_json::array();
  doc["summary"] = summary_counts({});
  doc["warnings"] = warnings;
  return doc;
}

ParsedReport parse_report(const nlohmann::json& doc) {
  if (member<std::string>(doc, "format") != kFormat) throw InputError("not a detection report");
  ParsedReport r;
  const auto& config = doc.at("config");
  r.beta = member<double>(config, "beta");
  const auto& grid = doc.at("grid");
  try {
    r.grid.start = parse_iso8601(member<std::string>(grid, "start"));
  } catch (const std::invalid_argument& e) {
    throw InputError(std::string("report grid start: ") + e.what());
  }
  r.grid.step = member<EpochSeconds>(grid, "step_s");
  r.grid.slots = member<std::size_t>(grid, "slots");
  const auto& plan = doc.at("plan");
  r.plan.eta = member<std::size_t>(plan, "eta");
  r.plan.count = member<std::size_t>(plan, "windows");

  const auto& records = doc.at("records");
  if (!records.is_array()) throw InputError("report records must be an array");
  for (const auto& j : records) {
    ReportRecord rec;
    const auto name = member<std::string>(j, "property");
    if (!PropertyKind::valid_name(name)) throw InputError("report record has invalid property '" + name + "'");
    rec.property = PropertyKind(name);
    rec.node_id = member<std::string>(j, "node_id");
    rec.window = member<std::size_t>(j, "window");
    rec.slot_start = member<std::size_t>(j, "slot_start");
    rec.slot_end = member<std::size_t>(j, "slot_end");
    const auto v = verdict_from_string(member<std::string>(j, "verdict"));
    if (!v) throw InputError("report record has an unknown verdict");
    rec.verdict = *v;
    rec.c1 = member<std::size_t>(j, "c1");
    rec.c2 = member<std::size_t>(j, "c2");
    if (j.contains("min_similarity") && !j["min_similarity"].is_null()) rec.min_similarity = j["min_similarity"].get<double>();
    if (j.contains("median_similarity") && !j["median_similarity"].is_null()) {
      rec.median_similarity = j["median_similarity"].get<double>();
    }
    rec.start = r.grid.slot_time(rec.slot_start);
    rec.end = r.grid.slot_time(rec.slot_end + 1);
    r.records.push_back(std::move(rec));
  }
  return r;
}

ParsedReport load_report(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path.string());
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::parse_error& e) {
    throw InputError(path.string() + ": " + e.what());
  }
  return parse_report(doc);
}

std::string dump_report(const ordered_json& doc) { return doc.dump(2) + "\n"; }

void dump_matrices(const DetectionResult& result, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  for (const auto& v : result.versions) {
    const auto slice = slice_name(v->interval);
    std::ostringstream u;
    write_matrix_csv(u, v->node_matrix.node_order, v->node_matrix.cells);
    write_file_atomic(dir / ("U_" + slice + ".csv"), u.str());
    for (const auto& a : v->sensor_matrices) {
      std::ostringstream out;
      write_matrix_csv(out, a.node_order, a.cells);
      write_file_atomic(dir / ("A_" + a.property.name() + "_" + slice + ".csv"), out.str());
    }
  }
}

void dump_similarities(const DetectionResult& result, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  for (std::size_t i = 0; i < result.properties.size(); ++i) {
    std::ostringstream out;
    out << "node_j,node_k,window,similarity\n";
    for (const auto& v : result.versions) {
      const auto& t = v->tensors[i];
      for (const auto& pair : t.pairs()) {
        for (const std::size_t l : v->windows) {
          if (!pair.values[l]) continue;
          out << t.node_order()[pair.j] << ',' << t.node_order()[pair.k] << ',' << l << ','
              << format_double(*pair.values[l]) << '\n';
        }
      }
    }
    write_file_atomic(dir / ("SM_" + result.properties[i].name() + ".csv"), out.str());
  }
}

}  // namespace soue
