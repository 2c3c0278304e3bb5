#include "soue/cli.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "soue/csv.hpp"
#include "soue/errors.hpp"
#include "soue/evalharness.hpp"
#include "soue/report.hpp"

#ifndef SOUE_VERSION
#define SOUE_VERSION "0.0.0"
#endif

namespace soue {
namespace {

namespace fs = std::filesystem;

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct GenArgs {
  std::string mode;
  std::uint64_t seed = 1;
  std::string out;
  std::size_t nodes = 36;
  std::size_t days = 30;
};

struct DetectArgs {
  std::string nodes;
  std::string sensors;
  std::string obs;
  std::string rules;
  std::string from;
  std::string to;
  double beta = 0.90;
  double delta = 300.0;
  std::size_t eta = 12;
  std::string predicates = "strong,medium";
  std::vector<std::string> scales;
  std::string dump_matrices;
  std::string dump_similarity;
  std::string out;
};

struct ScoreArgs {
  std::string report;
  std::string truth;
  std::string label;
  std::string out;
};

struct SweepArgs {
  DetectArgs detect;
  std::string truth;
  std::string label;
  double beta_from = 0.70;
  double beta_to = 0.98;
  double beta_step = 0.01;
};

void require_file(const std::string& path, const char* what) {
  if (path.empty()) throw UsageError(std::string("missing --") + what);
  if (!fs::is_regular_file(path)) throw UsageError(std::string(what) + " file not found: " + path);
}

EpochSeconds parse_time_flag(const std::string& text, const char* flag) {
  try {
    return parse_iso8601(text);
  } catch (const std::invalid_argument& e) {
    throw UsageError(std::string("--") + flag + ": " + e.what());
  }
}

Verdict parse_label(const std::string& text) {
  const auto v = verdict_from_string(text);
  if (!v || (*v != Verdict::ErroneousOutlier && *v != Verdict::UnusualEvent)) {
    throw UsageError("unknown label '" + text + "' (expected ErroneousOutlier or UnusualEvent)");
  }
  return *v;
}

DetectionConfig make_config(const DetectArgs& a) {
  DetectionConfig c;
  c.beta = a.beta;
  c.delta_m = a.delta;
  c.eta = a.eta;
  c.active_predicates = parse_predicate_list(a.predicates);
  for (const auto& item : a.scales) {
    const auto eq = item.find('=');
    if (eq == std::string::npos) throw UsageError("--scale expects property=value, got '" + item + "'");
    const auto name = item.substr(0, eq);
    const auto v = parse_double(item.substr(eq + 1));
    if (!PropertyKind::valid_name(name) || !v) throw UsageError("--scale expects property=value, got '" + item + "'");
    c.value_scale[name] = *v;
  }
  c.validate();
  return c;
}

void emit(const std::string& path, const std::string& content, std::ostream& out) {
  if (path.empty() || path == "-") {
    out << content;
  } else {
    write_file_atomic(path, content);
  }
}

struct LoadedInputs {
  NetworkTables tables;
  RuleSet rules;
  TimeRange range;
  bool range_empty = false;
};

LoadedInputs load_inputs(const DetectArgs& a, const DetectionConfig& config) {
  require_file(a.nodes, "nodes");
  require_file(a.sensors, "sensors");
  require_file(a.obs, "obs");
  if (!a.rules.empty()) require_file(a.rules, "rules");
  LoadedInputs in;
  // Range flags are checked before the (slow) observation table is read.
  std::optional<EpochSeconds> from;
  std::optional<EpochSeconds> to;
  if (!a.from.empty()) from = parse_time_flag(a.from, "from");
  if (!a.to.empty()) to = parse_time_flag(a.to, "to");
  in.tables = load_tables(a.nodes, a.sensors, a.obs);
  const auto props = properties_of(in.tables);
  if (!a.rules.empty()) in.rules = load_rules(a.rules, props);
  const auto span = observation_span(in.tables, config.grid_step);
  in.range = {from.value_or(span.from), to.value_or(span.to)};
  in.range_empty = in.range.empty();
  return in;
}

int cmd_gen(const GenArgs& a, std::ostream& out) {
  std::optional<InjectionMode> mode;
  if (a.mode != "clean") {
    mode = injection_mode_from_string(a.mode);
    if (!mode) throw UsageError("unknown mode '" + a.mode + "'");
  }
  CleanConfig cc;
  cc.seed = a.seed;
  cc.nodes = a.nodes;
  cc.days = a.days;
  InjectedDataset data{generate_clean(cc), {}};
  data.truth.grid = data.dataset.grid;
  if (mode) data = inject(data.dataset, InjectionSpec::defaults(*mode, a.seed));

  const fs::path dir(a.out);
  fs::create_directories(dir);
  std::ostringstream nodes, sensors, obs, truth, rules;
  write_nodes(nodes, data.dataset.nodes);
  write_sensors(sensors, data.dataset.sensors);
  write_observations(obs, data.dataset.observations());
  write_truth_csv(truth, data.truth);
  const auto m = mode.value_or(InjectionMode::Outliers);
  write_rules(rules, rules_for_mode(m));

  nlohmann::ordered_json manifest = {{"mode", a.mode},
                                     {"seed", a.seed},
                                     {"nodes", a.nodes},
                                     {"days", a.days},
                                     {"grid",
                                      {{"start", format_iso8601(data.dataset.grid.start)},
                                       {"step_s", data.dataset.grid.step},
                                       {"slots", data.dataset.grid.slots}}},
                                     {"predicates", format_predicate_list(predicates_for_mode(m))},
                                     {"label", std::string(to_string(target_label(m)))},
                                     {"segments", data.truth.segments.size()}};
  write_file_atomic(dir / "nodes.csv", nodes.str());
  write_file_atomic(dir / "sensors.csv", sensors.str());
  write_file_atomic(dir / "observations.csv", obs.str());
  write_file_atomic(dir / "truth.csv", truth.str());
  write_file_atomic(dir / "rules.txt", rules.str());
  write_file_atomic(dir / "dataset.json", manifest.dump(2) + "\n");
  out << "wrote " << data.dataset.nodes.size() << " nodes, " << data.dataset.sensors.size() << " sensors, "
      << data.truth.segments.size() << " truth segments to " << dir.string() << "\n";
  return kExitOk;
}

int cmd_detect(const DetectArgs& a, std::ostream& out, std::ostream& err) {
  const auto config = make_config(a);
  const auto in = load_inputs(a, config);
  if (in.range_empty) {
    const std::string w = "time range is empty; nothing to evaluate";
    err << "warning: " << w << "\n";
    emit(a.out, dump_report(empty_report(config, in.range, {w})), out);
    return kExitOk;
  }
  const auto result = run_detection(in.tables, in.rules, config, in.range);
  for (const auto& w : result.warnings) err << "warning: " << w << "\n";
  emit(a.out, dump_report(build_report(result, in.range)), out);
  if (!a.dump_matrices.empty()) dump_matrices(result, a.dump_matrices);
  if (!a.dump_similarity.empty()) dump_similarities(result, a.dump_similarity);
  return kExitOk;
}

int cmd_score(const ScoreArgs& a, std::ostream& out) {
  const Verdict label = parse_label(a.label);
  require_file(a.report, "report");
  require_file(a.truth, "truth");
  const auto report = load_report(a.report);
  std::ifstream tin(a.truth);
  auto truth = read_truth_csv(tin, a.truth);
  for (const auto& s : truth.segments) {
    if (report.grid.slots > 0 && s.slot_end >= report.grid.slots) {
      throw ConfigError("truth segment at node " + s.node_id + " lies outside the report grid");
    }
  }
  const auto row = score(report.windows(), truth, label, report.beta);
  std::ostringstream csv;
  write_metrics_csv(csv, {row});
  emit(a.out, csv.str(), out);
  return kExitOk;
}

int cmd_sweep(const SweepArgs& a, std::ostream& out, std::ostream& err) {
  const Verdict label = parse_label(a.label);
  beta_values(a.beta_from, a.beta_to, a.beta_step);  // validates the range
  const auto config = make_config(a.detect);
  require_file(a.truth, "truth");
  const auto in = load_inputs(a.detect, config);
  std::ifstream tin(a.truth);
  const auto truth = read_truth_csv(tin, a.truth);
  std::vector<MetricsRow> rows;
  if (in.range_empty) {
    err << "warning: time range is empty; nothing to evaluate\n";
    for (const double b : beta_values(a.beta_from, a.beta_to, a.beta_step)) rows.push_back(score({}, truth, label, b));
  } else {
    const DetectionSession session(in.tables, in.rules, config, in.range);
    for (const auto& w : session.classify(a.beta_from).warnings) err << "warning: " << w << "\n";
    rows = sweep(session, truth, a.beta_from, a.beta_to, a.beta_step, label);
  }
  std::ostringstream csv;
  write_metrics_csv(csv, rows);
  emit(a.detect.out, csv.str(), out);
  return kExitOk;
}

void add_detect_flags(CLI::App* cmd, DetectArgs& a, bool with_beta) {
  cmd->add_option("--nodes", a.nodes, "Node table CSV")->required();
  cmd->add_option("--sensors", a.sensors, "Sensor table CSV")->required();
  cmd->add_option("--obs", a.obs, "Observation table CSV")->required();
  cmd->add_option("--rules", a.rules, "Correlation rule file");
  cmd->add_option("--from", a.from, "Range start, ISO-8601 with timezone (default: first observation)");
  cmd->add_option("--to", a.to, "Range end, exclusive (default: one step past the last observation)");
  if (with_beta) cmd->add_option("--beta", a.beta, "Similarity threshold in (0, 1]")->capture_default_str();
  cmd->add_option("--delta", a.delta, "Neighborhood distance in meters")->capture_default_str();
  cmd->add_option("--eta", a.eta, "Window length in slots (even)")->capture_default_str();
  cmd->add_option("--predicates", a.predicates, "Active correlation predicates, comma separated")
      ->capture_default_str();
  cmd->add_option("--scale", a.scales, "Per-property value scale, property=value (repeatable)");
}

}  // namespace

std::string version_string() { return SOUE_VERSION; }

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Segment outlier and unusual event detection for sensor networks", "soue"};
  app.set_version_flag("--version", version_string());
  app.require_subcommand(1);

  GenArgs gen;
  auto* gen_cmd = app.add_subcommand("gen", "Generate a synthetic dataset with ground truth");
  gen_cmd->add_option("--mode", gen.mode, "outliers, events-strong, events-positive or clean")->required();
  gen_cmd->add_option("--seed", gen.seed, "Random seed")->capture_default_str();
  gen_cmd->add_option("--out", gen.out, "Output directory")->required();
  gen_cmd->add_option("--nodes", gen.nodes, "Number of nodes")->capture_default_str();
  gen_cmd->add_option("--days", gen.days, "Number of days")->capture_default_str();

  DetectArgs detect;
  auto* detect_cmd = app.add_subcommand("detect", "Classify windows and write a JSON report");
  add_detect_flags(detect_cmd, detect, true);
  detect_cmd->add_option("--dump-matrices", detect.dump_matrices, "Directory for U and A matrix CSVs");
  detect_cmd->add_option("--dump-similarity", detect.dump_similarity, "Directory for similarity CSVs");
  detect_cmd->add_option("--out", detect.out, "Report path")->required();

  ScoreArgs sc;
  auto* score_cmd = app.add_subcommand("score", "Score a report against ground truth");
  score_cmd->add_option("--report", sc.report, "Report JSON")->required();
  score_cmd->add_option("--truth", sc.truth, "Ground truth CSV")->required();
  score_cmd->add_option("--label", sc.label, "ErroneousOutlier or UnusualEvent")->required();
  score_cmd->add_option("--out", sc.out, "Metrics CSV (default: standard output)");

  SweepArgs sw;
  auto* sweep_cmd = app.add_subcommand("sweep", "Score detection over a range of thresholds");
  add_detect_flags(sweep_cmd, sw.detect, false);
  sweep_cmd->add_option("--truth", sw.truth, "Ground truth CSV")->required();
  sweep_cmd->add_option("--label", sw.label, "ErroneousOutlier or UnusualEvent")->required();
  sweep_cmd->add_option("--beta-from", sw.beta_from)->capture_default_str();
  sweep_cmd->add_option("--beta-to", sw.beta_to)->capture_default_str();
  sweep_cmd->add_option("--beta-step", sw.beta_step)->capture_default_str();
  sweep_cmd->add_option("--out", sw.detect.out, "Metrics CSV (default: standard output)");

  const auto usage = [&](const std::string& message) {
    err << "error: " << message << "\n";
    const CLI::App* shown = &app;
    for (const auto* sub : {gen_cmd, detect_cmd, score_cmd, sweep_cmd}) {
      if (sub->parsed()) shown = sub;
    }
    err << shown->help();
    return kExitUsage;
  };

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForVersion&) {
    out << version_string() << "\n";
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      for (const auto* sub : {gen_cmd, detect_cmd, score_cmd, sweep_cmd}) {
        if (sub->parsed()) {
          out << sub->help();
          return kExitOk;
        }
      }
      out << app.help();
      return kExitOk;
    }
    return usage(e.what());
  }

  try {
    if (gen_cmd->parsed()) return cmd_gen(gen, out);
    if (detect_cmd->parsed()) return cmd_detect(detect, out, err);
    if (score_cmd->parsed()) return cmd_score(sc, out);
    if (sweep_cmd->parsed()) return cmd_sweep(sw, out, err);
  } catch (const UsageError& e) {
    return usage(e.what());
  } catch (const ConfigError& e) {
    return usage(e.what());
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
  return usage("no command given");
}

}  // namespace soue
