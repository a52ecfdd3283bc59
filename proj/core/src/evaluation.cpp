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

#include "arca/evaluation.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace arca {

void to_json(json& j, const EvalRow& v) {
  j = json{{"alert_id", v.alert_id}, {"a_c", v.a_c}, {"a_i", v.a_i},
           {"a_t", v.a_t},           {"p_c", v.p_c}, {"p_i", v.p_i},
           {"p_t", v.p_t}};
}

void from_json(const json& j, EvalRow& v) {
  j.at("alert_id").get_to(v.alert_id);
  j.at("a_c").get_to(v.a_c);
  j.at("a_i").get_to(v.a_i);
  j.at("a_t").get_to(v.a_t);
  j.at("p_c").get_to(v.p_c);
  j.at("p_i").get_to(v.p_i);
  j.at("p_t").get_to(v.p_t);
}

void to_json(json& j, const EvalReport& v) {
  j = json{{"rows", v.rows},
           {"ra", v.ra},
           {"pa", v.pa},
           {"pr", v.pr},
           {"apl", v.apl ? json(*v.apl) : json(nullptr)},
           {"trajectories_total", v.trajectories_total},
           {"trajectories_completed", v.trajectories_completed},
           {"r_useful", nullptr}};  // reserved, needs human raters
}

void from_json(const json& j, EvalReport& v) {
  j.at("rows").get_to(v.rows);
  j.at("ra").get_to(v.ra);
  j.at("pa").get_to(v.pa);
  j.at("pr").get_to(v.pr);
  v.apl.reset();
  if (!j.at("apl").is_null()) v.apl = j.at("apl").get<double>();
  j.at("trajectories_total").get_to(v.trajectories_total);
  j.at("trajectories_completed").get_to(v.trajectories_completed);
}

double compute_ra(const Predictions& predicted, const TruthMap& truth, double sigma,
                  std::vector<EvalRow>* rows) {
  if (truth.empty()) throw std::invalid_argument("evaluation error: empty truth set");
  long a_c = 0, a_i = 0, a_t = 0;
  for (const auto& [alert_id, gt] : truth) {
    EvalRow row;
    row.alert_id = alert_id;
    row.a_t = static_cast<int>(gt.root_nodes.size());
    a_t += row.a_t;
    auto pit = predicted.find(alert_id);
    if (pit != predicted.end()) {
      std::set<std::string> roots(gt.root_nodes.begin(), gt.root_nodes.end());
      for (const auto& cause : pit->second) {
        bool node_ok = roots.count(cause.node) > 0;
        bool metric_ok = !gt.injected_fault.metric ||
                         (cause.metric && *cause.metric == *gt.injected_fault.metric);
        if (node_ok && metric_ok)
          ++row.a_c;
        else
          ++row.a_i;
      }
    }
    a_c += row.a_c;
    a_i += row.a_i;
    if (rows) rows->push_back(row);
  }
  return (static_cast<double>(a_c) - sigma * static_cast<double>(a_i)) /
         static_cast<double>(a_t);
}

double compute_pa(const PredictedPaths& predicted, const TruthMap& truth, double tau,
                  std::vector<EvalRow>* rows) {
  if (truth.empty()) throw std::invalid_argument("evaluation error: empty truth set");
  long p_c = 0, p_i = 0, p_t = 0;
  std::size_t row_idx = 0;
  for (const auto& [alert_id, gt] : truth) {
    EvalRow local;
    EvalRow* row = &local;
    if (rows) {
      // Pair with the RA row when present (same alert order).
      if (row_idx < rows->size() && (*rows)[row_idx].alert_id == alert_id)
        row = &(*rows)[row_idx];
      else
        rows->push_back(EvalRow{alert_id}), row = &rows->back();
      ++row_idx;
    }
    row->p_t = static_cast<int>(gt.propagation_paths.size());
    p_t += row->p_t;
    auto pit = predicted.find(alert_id);
    if (pit != predicted.end()) {
      for (const auto& path : pit->second) {
        bool exact = std::find(gt.propagation_paths.begin(),
                               gt.propagation_paths.end(),
                               path) != gt.propagation_paths.end();
        if (exact)
          ++row->p_c;
        else
          ++row->p_i;
      }
    }
    p_c += row->p_c;
    p_i += row->p_i;
  }
  return (static_cast<double>(p_c) - tau * static_cast<double>(p_i)) /
         static_cast<double>(p_t);
}

PrApl compute_pr_apl(const std::vector<Trajectory>& trajectories, int theta) {
  PrApl out;
  out.total = static_cast<int>(trajectories.size());
  long steps_sum = 0;
  for (const auto& t : trajectories) {
    if (t.completed && static_cast<int>(t.steps.size()) <= theta) {
      ++out.completed;
      steps_sum += static_cast<long>(t.steps.size());
    }
  }
  out.pr = out.total == 0 ? 0.0
                          : static_cast<double>(out.completed) /
                                static_cast<double>(out.total);
  if (out.completed > 0)
    out.apl = static_cast<double>(steps_sum) / static_cast<double>(out.completed);
  return out;
}

EvalReport benchmark(const Dataset& ds, const PipelineOptions& options,
                     const EvalConfig& eval) {
  if (!ds.has_ground_truth())
    throw std::invalid_argument(
        "benchmark refuses datasets without ground truth (use inference mode)");

  PipelineResult run = run_pipeline(ds, options);

  Predictions predicted;
  PredictedPaths predicted_paths;
  for (const auto& report : run.reports) {
    auto causes = report.root_causes;
    if (static_cast<int>(causes.size()) > eval.max_causes)
      causes.resize(static_cast<std::size_t>(eval.max_causes));
    predicted[report.alert_id] = causes;
    predicted_paths[report.alert_id] = report.paths;
  }

  TruthMap truth;
  for (const auto& gt : ds.ground_truth) truth[gt.alert_id] = gt;

  EvalReport report;
  report.ra = compute_ra(predicted, truth, eval.sigma, &report.rows);
  report.pa = compute_pa(predicted_paths, truth, eval.tau, &report.rows);
  PrApl pr = compute_pr_apl(run.trajectories, eval.theta);
  report.pr = pr.pr;
  report.apl = pr.apl;
  report.trajectories_total = pr.total;
  report.trajectories_completed = pr.completed;
  return report;
}

std::string render_report_markdown(const EvalReport& report) {
  std::ostringstream md;
  md << "# Evaluation Report\n\n";
  md << "| RA | PA | PR | APL |\n|---|---|---|---|\n";
  md << "| " << report.ra << " | " << report.pa << " | " << report.pr << " | ";
  if (report.apl)
    md << *report.apl;
  else
    md << "n/a";
  md << " |\n\n";
  md << "## Per-alert counts\n\n";
  md << "| alert | A_c | A_i | A_t | P_c | P_i | P_t |\n";
  md << "|---|---|---|---|---|---|---|\n";
  for (const auto& r : report.rows) {
    md << "| " << r.alert_id << " | " << r.a_c << " | " << r.a_i << " | " << r.a_t
       << " | " << r.p_c << " | " << r.p_i << " | " << r.p_t << " |\n";
  }
  return md.str();
}

json ablation_report(const std::vector<Dataset>& datasets,
                     const PipelineOptions& base, const EvalConfig& eval) {
  struct Variant {
    const char* name;
    PipelineOptions options;
  };
  std::vector<Variant> variants;
  variants.push_back({"full", base});
  {
    PipelineOptions v = base;
    v.voting_enabled = false;
    variants.push_back({"no_voting", v});
  }
  {
    PipelineOptions v = base;
    v.single_agent = true;
    variants.push_back({"single_agent", v});
  }
  {
    PipelineOptions v = base;
    v.direct_only = true;
    variants.push_back({"direct_only", v});
  }

  json out;
  out["variants"] = json::array();
  for (const auto& variant : variants) {
    double ra_sum = 0, pa_sum = 0;
    int n = 0;
    for (const auto& ds : datasets) {
      EvalReport r = benchmark(ds, variant.options, eval);
      ra_sum += r.ra;
      pa_sum += r.pa;
      ++n;
    }
    out["variants"].push_back(json{{"name", variant.name},
                                   {"ra", n ? ra_sum / n : 0.0},
                                   {"pa", n ? pa_sum / n : 0.0},
                                   {"datasets", n}});
  }
  return out;
}

}  // namespace arca
