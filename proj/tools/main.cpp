// Copyright 2026 The Arca Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// arca: operator surface for the root-cause-analysis engine.
//
// Verbs: simulate, ingest, run, evaluate, inspect, verify-ledger.
// Exit codes: 0 success, 2 config error, 3 data error, 4 backend error.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "arca/config.hpp"
#include "arca/evaluation.hpp"
#include "arca/ingest.hpp"
#include "arca/pipeline.hpp"
#include "arca/simulator.hpp"
#include "arca/version.hpp"

namespace fs = std::filesystem;
using arca::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitData = 3;
constexpr int kExitBackend = 4;

json header() {
  return json{{"schema_version", arca::kDatasetSchemaVersion},
              {"tool_version", arca::kToolVersion}};
}

void write_json(const fs::path& file, const json& j) {
  std::ofstream out(file);
  if (!out) throw std::runtime_error("cannot write " + file.string());
  out << j.dump(2) << "\n";
}

json read_json(const fs::path& file) {
  std::ifstream in(file);
  if (!in) throw std::runtime_error("cannot open " + file.string());
  json j;
  in >> j;
  return j;
}

arca::RunConfig load_run_config(const std::string& config_path,
                                std::optional<std::uint64_t> seed) {
  arca::RunConfig rc;
  if (!config_path.empty())
    rc = arca::build_run_config(arca::parse_config_file(config_path));
  if (seed) {
    rc.sim.seed = *seed;
    rc.pipeline.voting.seed = *seed;
  }
  return rc;
}

int cmd_simulate(const std::string& config_path, std::optional<std::uint64_t> seed,
                 const fs::path& out) {
  arca::RunConfig rc = load_run_config(config_path, seed);
  json echo;
  arca::to_json(echo, rc.sim);
  arca::Dataset ds = arca::simulate(rc.sim);
  json manifest = arca::save_dataset(ds, out, echo);
  json summary = header();
  summary["dataset_dir"] = out.string();
  summary["alerts"] = ds.alerts.size();
  summary["spans"] = ds.spans.size();
  summary["nodes"] = ds.topology.nodes.size();
  summary["manifest"] = manifest;
  std::cout << summary.dump(2) << "\n";
  return kExitOk;
}

int cmd_ingest(const arca::IngestInput& input, const fs::path& out) {
  auto [ds, stats] = arca::ingest_dataset(input);
  json manifest = arca::save_dataset(ds, out, json{{"source", "ingest"}});
  json summary = header();
  summary["dataset_dir"] = out.string();
  summary["rows_read"] = stats.rows_read;
  summary["rows_skipped"] = stats.rows_skipped;
  summary["duplicate_spans"] = stats.duplicate_spans;
  summary["manifest"] = manifest;
  std::cout << summary.dump(2) << "\n";
  return kExitOk;
}

int cmd_run(const std::string& config_path, std::optional<std::uint64_t> seed,
            const fs::path& dataset_dir, const fs::path& out) {
  arca::RunConfig rc = load_run_config(config_path, seed);
  arca::Dataset ds = arca::load_dataset(dataset_dir);
  if (rc.pipeline.mode == arca::BackendMode::oracle && !ds.has_ground_truth())
    throw std::invalid_argument(
        "config error: oracle mode requires a dataset with ground truth");

  arca::PipelineResult result = arca::run_pipeline(ds, rc.pipeline);

  fs::create_directories(out / "reports");
  json index = header();
  index["dataset_dir"] = dataset_dir.string();
  index["backend"] = rc.pipeline.mode == arca::BackendMode::oracle ? "oracle"
                     : rc.pipeline.mode == arca::BackendMode::external
                         ? "external"
                         : "heuristic";
  index["reports"] = json::array();
  bool any_degraded = false;
  for (const auto& report : result.reports) {
    std::string name = "report_" + report.alert_id + ".json";
    json rj = report;
    write_json(out / "reports" / name, rj);
    index["reports"].push_back(name);
    any_degraded = any_degraded || report.degraded;
  }
  {
    std::ofstream tf(out / "trajectories.jsonl");
    for (const auto& t : result.trajectories) tf << json(t).dump() << "\n";
  }
  arca::Ledger::from_blocks(result.ledger).save(out / "ledger.jsonl");
  {
    json wj = json::object();
    for (const auto& [role, w] : result.weights) wj[arca::role_name(role)] = w;
    write_json(out / "weights.json", wj);
  }
  write_json(out / "run.json", index);
  std::cout << index.dump(2) << "\n";
  if (any_degraded) {
    std::cerr << "warning: one or more reports are degraded\n";
    return kExitBackend;
  }
  return kExitOk;
}

int cmd_evaluate(const std::string& config_path, const fs::path& dataset_dir,
                 const fs::path& run_dir, const fs::path& out) {
  arca::RunConfig rc = load_run_config(config_path, std::nullopt);
  arca::Dataset ds = arca::load_dataset(dataset_dir);
  if (!ds.has_ground_truth())
    throw std::runtime_error("data error: dataset has no ground truth");
  if (!fs::exists(run_dir / "run.json"))
    throw std::runtime_error("data error: run output not found at " +
                             run_dir.string());

  json index = read_json(run_dir / "run.json");
  arca::Predictions predicted;
  arca::PredictedPaths predicted_paths;
  std::vector<arca::RCAReport> reports;
  for (const auto& name : index.at("reports")) {
    arca::RCAReport r =
        read_json(run_dir / "reports" / name.get<std::string>()).get<arca::RCAReport>();
    auto causes = r.root_causes;
    if (static_cast<int>(causes.size()) > rc.eval.max_causes)
      causes.resize(static_cast<std::size_t>(rc.eval.max_causes));
    predicted[r.alert_id] = causes;
    predicted_paths[r.alert_id] = r.paths;
    reports.push_back(std::move(r));
  }

  std::vector<arca::Trajectory> trajectories;
  {
    std::ifstream tf(run_dir / "trajectories.jsonl");
    std::string line;
    while (std::getline(tf, line)) {
      if (!line.empty()) trajectories.push_back(json::parse(line).get<arca::Trajectory>());
    }
  }

  arca::TruthMap truth;
  for (const auto& gt : ds.ground_truth) truth[gt.alert_id] = gt;

  arca::EvalReport report;
  report.ra = arca::compute_ra(predicted, truth, rc.eval.sigma, &report.rows);
  report.pa = arca::compute_pa(predicted_paths, truth, rc.eval.tau, &report.rows);
  arca::PrApl pr = arca::compute_pr_apl(trajectories, rc.eval.theta);
  report.pr = pr.pr;
  report.apl = pr.apl;
  report.trajectories_total = pr.total;
  report.trajectories_completed = pr.completed;

  fs::create_directories(out);
  json rj = report;
  rj.update(header());
  write_json(out / "report.json", rj);
  {
    std::ofstream md(out / "report.md");
    md << arca::render_report_markdown(report);
  }
  std::cout << rj.dump(2) << "\n";
  return kExitOk;
}

void render_fault_web(std::ostream& os, const arca::FaultWeb& web) {
  os << "Fault web for alert node " << web.alert_node << " (revision "
     << web.revision << ")\n\n";
  os << "node                          probability\n";
  os << "----                          -----------\n";
  for (const auto& [node, p] : web.entries) {
    char line[80];
    std::snprintf(line, sizeof line, "%-30s%.4f", node.c_str(), p);
    os << line << "\n";
  }
  if (!web.edge_scores.empty()) {
    os << "\nedge                          score\n";
    os << "----                          -----\n";
    for (const auto& [edge, p] : web.edge_scores) {
      char line[80];
      std::snprintf(line, sizeof line, "%-30s%.4f", edge.c_str(), p);
      os << line << "\n";
    }
  }
}

void render_trajectory(std::ostream& os, const arca::Trajectory& t) {
  os << "Trajectory for question " << t.question_id << "\n";
  int i = 0;
  for (const auto& step : t.steps) {
    ++i;
    os << i << ". thought:     " << step.thought << "\n";
    os << "   action:      " << step.action_tool << " " << step.action_args.dump()
       << "\n";
    os << "   observation: " << step.observation << "\n";
  }
  if (!t.completed) os << "TIMEOUT\n";
}

int cmd_inspect(const fs::path& artifact) {
  if (artifact.extension() == ".jsonl") {
    std::ifstream in(artifact);
    if (!in) throw std::runtime_error("cannot open " + artifact.string());
    std::string line;
    std::vector<json> rows;
    while (std::getline(in, line))
      if (!line.empty()) rows.push_back(json::parse(line));
    if (rows.empty()) throw std::runtime_error("empty artifact " + artifact.string());
    if (rows.front().contains("prev_hash")) {  // ledger
      std::vector<arca::LedgerBlock> blocks;
      for (const auto& r : rows) blocks.push_back(r.get<arca::LedgerBlock>());
      auto v = arca::verify_ledger(blocks);
      std::cout << "Ledger: " << blocks.size() << " blocks\n";
      for (const auto& b : blocks)
        std::cout << "  block " << b.index << " " << b.hash.substr(0, 12) << " "
                  << b.payload.value("type", std::string("entry")) << "\n";
      if (v.ok) {
        std::cout << "VALID\n";
      } else {
        std::cout << "INVALID at block " << *v.first_bad_index << "\n";
        return kExitData;
      }
      return kExitOk;
    }
    if (rows.front().contains("steps")) {  // trajectory log
      for (const auto& r : rows) {
        render_trajectory(std::cout, r.get<arca::Trajectory>());
        std::cout << "\n";
      }
      return kExitOk;
    }
    throw std::runtime_error("unrecognized artifact " + artifact.string());
  }

  json j = read_json(artifact);
  if (j.contains("entries") && j.contains("alert_node")) {
    render_fault_web(std::cout, j.get<arca::FaultWeb>());
    return kExitOk;
  }
  if (j.contains("fault_web")) {  // full report
    arca::RCAReport r = j.get<arca::RCAReport>();
    std::cout << "Report for alert " << r.alert_id << (r.degraded ? " (DEGRADED)" : "")
              << "\n\nRoot causes:\n";
    for (const auto& c : r.root_causes)
      std::cout << "  " << c.node << (c.metric ? " [" + *c.metric + "]" : "") << "\n";
    std::cout << "\nPaths:\n";
    for (const auto& path : r.paths) {
      std::cout << "  ";
      for (std::size_t i = 0; i < path.size(); ++i)
        std::cout << (i ? " -> " : "") << path[i];
      std::cout << "\n";
    }
    std::cout << "\nDiagnosis: " << r.resolution.diagnosis << "\nActions:\n";
    for (const auto& a : r.resolution.actions) std::cout << "  - " << a << "\n";
    std::cout << "\n";
    render_fault_web(std::cout, r.fault_web);
    return kExitOk;
  }
  if (j.contains("steps")) {
    render_trajectory(std::cout, j.get<arca::Trajectory>());
    return kExitOk;
  }
  throw std::runtime_error("unrecognized artifact " + artifact.string());
}

int cmd_verify_ledger(const fs::path& file) {
  arca::Ledger ledger = arca::Ledger::load(file);
  auto v = arca::verify_ledger(ledger.blocks());
  json out = header();
  out["blocks"] = ledger.blocks().size();
  out["ok"] = v.ok;
  if (v.first_bad_index) out["first_bad_index"] = *v.first_bad_index;
  std::cout << out.dump(2) << "\n";
  if (!v.ok) {
    std::cerr << "INVALID at block " << *v.first_bad_index << "\n";
    return kExitData;
  }
  return kExitOk;
}

int classify_error(const std::exception& e, int fallback) {
  std::string what = e.what();
  if (what.find("config error") != std::string::npos) return kExitConfig;
  if (what.find("backend error") != std::string::npos) return kExitBackend;
  if (what.find("data error") != std::string::npos) return kExitData;
  return fallback;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Microservice root-cause-analysis engine"};
  app.require_subcommand(1);

  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::string out_dir = "out";

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--config", config_path, "Config file ([sim]/[agents]/[voting]/[eval]/[backend])");
    cmd->add_option("--seed", seed, "Override the RNG seed");
    cmd->add_option("--out", out_dir, "Output directory");
  };

  auto* sim = app.add_subcommand("simulate", "Generate a dataset from a preset");
  add_common(sim);

  auto* ing = app.add_subcommand("ingest", "Normalize external telemetry");
  add_common(ing);
  std::string spans_file, metrics_file, alerts_file, topology_file, mapping_file;
  ing->add_option("--spans", spans_file, "Span file (.jsonl or .csv)")->required();
  ing->add_option("--metrics", metrics_file, "Metric file (.jsonl or .csv)")->required();
  ing->add_option("--alerts", alerts_file, "Alert file (.jsonl or .csv)")->required();
  ing->add_option("--topology", topology_file, "Optional topology.json");
  ing->add_option("--mapping", mapping_file, "CSV column-mapping file");

  auto* run = app.add_subcommand("run", "Analyze every alert in a dataset");
  add_common(run);
  std::string dataset_dir;
  run->add_option("--dataset", dataset_dir, "Dataset directory")->required();

  auto* eval = app.add_subcommand("evaluate", "Score a run against ground truth");
  add_common(eval);
  std::string eval_dataset, eval_run;
  eval->add_option("--dataset", eval_dataset, "Dataset directory")->required();
  eval->add_option("--run", eval_run, "Run output directory")->required();

  auto* insp = app.add_subcommand("inspect", "Render an artifact as text");
  add_common(insp);
  std::string artifact;
  insp->add_option("artifact", artifact, "Artifact path")->required();

  auto* verify = app.add_subcommand("verify-ledger", "Check hash-chain integrity");
  add_common(verify);
  std::string ledger_file;
  verify->add_option("ledger", ledger_file, "Ledger .jsonl path")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : kExitConfig;
  }

  try {
    if (sim->parsed()) return cmd_simulate(config_path, seed, out_dir);
    if (ing->parsed()) {
      arca::IngestInput input;
      input.spans = spans_file;
      input.metrics = metrics_file;
      input.alerts = alerts_file;
      if (!topology_file.empty()) input.topology = topology_file;
      if (!mapping_file.empty()) input.mapping = mapping_file;
      try {
        return cmd_ingest(input, out_dir);
      } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitData;
      } catch (const std::runtime_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitData;
      }
    }
    if (run->parsed()) return cmd_run(config_path, seed, dataset_dir, out_dir);
    if (eval->parsed())
      return cmd_evaluate(config_path, eval_dataset, eval_run, out_dir);
    if (insp->parsed()) return cmd_inspect(artifact);
    if (verify->parsed()) return cmd_verify_ledger(ledger_file);
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return classify_error(e, kExitConfig);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return classify_error(e, kExitData);
  }
  return kExitConfig;
}
