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

#include "arca/pipeline.hpp"

#include <algorithm>
#include <stdexcept>

namespace arca {

AgentRole topic_owner(Topic t) {
  switch (t) {
    case Topic::priority: return AgentRole::AlertReceiver;
    case Topic::subtask: return AgentRole::ProcessScheduler;
    case Topic::data: return AgentRole::DataDetective;
    case Topic::dependency: return AgentRole::DependencyExplorer;
    case Topic::probability: return AgentRole::ProbabilityOracle;
    case Topic::faultweb: return AgentRole::FaultMapper;
    case Topic::rootcause: return AgentRole::SolutionEngineer;
  }
  throw std::invalid_argument("unknown topic");
}

Validator make_chain_validator(const Dataset& ds) {
  const Topology* topo = &ds.topology;
  return [topo](AgentRole role, const Proposal& proposal) -> ValidatorVerdict {
    ValidatorVerdict v;
    Topic topic = proposal.question.topic;
    v.can_judge = role == topic_owner(topic) || role == proposal.question.asker;

    // Schema violations are visible to every chain member.
    if (auto err = validate_answer_body(topic, proposal.answer.body)) {
      v.flag = *err;
      return v;
    }
    if (!v.can_judge) return v;

    const json& body = proposal.answer.body;
    if (topic == Topic::probability) {
      for (const auto& [node, p] : body.at("probabilities").items()) {
        if (!topo->has_node(node)) {
          v.flag = "probability for unknown node " + node;
          return v;
        }
      }
    }
    if (topic == Topic::rootcause) {
      std::string alert_node =
          proposal.question.payload.value("alert_node", std::string{});
      for (const auto& cause : body.at("root_causes")) {
        std::string node = cause.value("node", std::string{});
        if (!topo->has_node(node)) {
          v.flag = "root cause references unknown node " + node;
          return v;
        }
      }
      for (const auto& path : body.at("paths")) {
        if (!path.is_array() || path.empty()) continue;
        if (!alert_node.empty() &&
            path.back().get<std::string>() != alert_node) {
          v.flag = "path does not end at alert node " + alert_node;
          return v;
        }
      }
    }
    return v;
  };
}

namespace {

class Orchestrator {
 public:
  Orchestrator(const Dataset& ds, PolicyBackend& backend, const ToolRegistry& tools,
               VotingChain* chain, const PipelineOptions& options,
               std::vector<Trajectory>& trajectories)
      : ds_(ds), backend_(backend), tools_(tools), chain_(chain),
        options_(options), trajectories_(trajectories) {}

  // Ask, run the voting lifecycle, and return the accepted answer.
  Answer ask(Topic topic, json payload, bool& degraded,
             std::vector<std::string>& question_ids) {
    Question q;
    q.id = "q" + std::to_string(++question_counter_);
    q.topic = topic;
    q.asker = topic_owner(topic);
    q.payload = std::move(payload);
    question_ids.push_back(q.id);

    Answer answer = answer_once(q);
    if (!chain_) return answer;

    Proposal proposal;
    proposal.answerer = q.asker;
    proposal.question = q;
    proposal.answer = answer;
    auto result = chain_->run_vote_cycle(
        proposal, [&](const Proposal& p) -> std::optional<Answer> {
          try {
            return answer_once(p.question);
          } catch (const std::exception&) {
            return std::nullopt;
          }
        });
    degraded = degraded || result.degraded;
    return result.accepted;
  }

 private:
  Answer answer_once(const Question& q) {
    if (assess_complexity(q) == Route::direct) return direct_answer(q, backend_);
    ReactResult r = run_react(q, tools_, backend_, options_.theta);
    trajectories_.push_back(r.trajectory);
    if (!r.answer)
      throw std::runtime_error("react loop timed out for question " + q.id);
    return *r.answer;
  }

  const Dataset& ds_;
  PolicyBackend& backend_;
  const ToolRegistry& tools_;
  VotingChain* chain_;
  const PipelineOptions& options_;
  std::vector<Trajectory>& trajectories_;
  int question_counter_ = 0;
};

}  // namespace

RCAReport schedule_alert(const Dataset& ds, const AlertEvent& alert,
                         PolicyBackend& backend, const ToolRegistry& tools,
                         VotingChain* chain, const PipelineOptions& options,
                         std::vector<Trajectory>& trajectories_out) {
  Orchestrator orch(ds, backend, tools, chain, options, trajectories_out);
  const AgentConfig& cfg = options.agent;

  TimestampMs half = static_cast<TimestampMs>(cfg.window_ticks) * kTickMs;
  TimestampMs from = alert.raised_at - half;
  TimestampMs to = alert.raised_at + half;

  RCAReport report;
  report.alert_id = alert.id;
  bool degraded = false;
  std::vector<std::string> question_ids;

  FaultWeb web;
  web.alert_node = alert.node;
  std::map<std::string, NodeDataReport> node_data;

  if (options.direct_only) {
    // Ablation: no tool loop at all; the web holds only the alerted node.
    web = update_fault_web(web, {{alert.node, 1.0}}, ds.topology);
  } else if (options.single_agent) {
    // Ablation: a lone data probe on the alerted node.
    Answer data = orch.ask(Topic::data,
                           json{{"node", alert.node}, {"from", from}, {"to", to}},
                           degraded, question_ids);
    node_data[alert.node] = data.body.at("report").get<NodeDataReport>();
    web = update_fault_web(web, {{alert.node, 1.0}}, ds.topology);
  } else {
    std::set<std::string> explored{alert.node};
    std::vector<std::string> frontier{alert.node};

    for (int iter = 0; iter < cfg.max_iterations && !frontier.empty(); ++iter) {
      std::set<std::string> discovered;
      for (const auto& node : frontier) {
        Answer dep = orch.ask(Topic::dependency,
                              json{{"node", node}, {"from", from}, {"to", to}},
                              degraded, question_ids);
        for (const auto& d : dep.body.at("direct").get<std::vector<std::string>>()) {
          if (!explored.count(d)) discovered.insert(d);
        }
      }

      std::vector<std::string> to_probe(frontier.begin(), frontier.end());
      to_probe.insert(to_probe.end(), discovered.begin(), discovered.end());
      for (const auto& node : to_probe) {
        if (node_data.count(node)) continue;
        Answer data = orch.ask(Topic::data,
                               json{{"node", node}, {"from", from}, {"to", to}},
                               degraded, question_ids);
        node_data[node] = data.body.at("report").get<NodeDataReport>();
      }

      std::vector<std::string> known(explored.begin(), explored.end());
      known.insert(known.end(), discovered.begin(), discovered.end());
      std::sort(known.begin(), known.end());
      Answer prob = orch.ask(Topic::probability,
                             json{{"nodes", known},
                                  {"alert_node", alert.node},
                                  {"alert_id", alert.id},
                                  {"from", from},
                                  {"to", to}},
                             degraded, question_ids);

      Answer webbed = orch.ask(Topic::faultweb,
                               json{{"web", web},
                                    {"probabilities", prob.body.at("probabilities")}},
                               degraded, question_ids);
      web = webbed.body.at("web").get<FaultWeb>();

      explored.insert(discovered.begin(), discovered.end());

      // Terminate when the strongest suspect clears p_stop and none of its
      // own dependencies outranks it.
      if (!web.entries.empty()) {
        auto best = std::max_element(
            web.entries.begin(), web.entries.end(),
            [](const auto& a, const auto& b) {
              return a.second != b.second ? a.second < b.second : a.first > b.first;
            });
        if (best->second >= cfg.p_stop) {
          bool settled = true;
          for (const auto& callee : ds.topology.callees_of(best->first)) {
            auto it = web.entries.find(callee);
            if (it == web.entries.end() || it->second >= best->second) {
              settled = false;
              break;
            }
          }
          if (settled) break;
        }
      }

      frontier.assign(discovered.begin(), discovered.end());
    }
  }

  bool has_data = !node_data.empty();
  json node_data_json = json::object();
  for (const auto& [node, r] : node_data) node_data_json[node] = r;
  Answer rc = orch.ask(Topic::rootcause,
                       json{{"alert_id", alert.id},
                            {"alert_node", alert.node},
                            {"alert_kind", alert.kind},
                            {"web", web},
                            {"has_data", has_data},
                            {"node_data", node_data_json}},
                       degraded, question_ids);

  report.root_causes = rc.body.at("root_causes").get<std::vector<RootCause>>();
  report.paths = rc.body.at("paths").get<std::vector<std::vector<std::string>>>();
  report.resolution = rc.body.at("resolution").get<Resolution>();
  report.fault_web = web;
  report.trajectory_refs = question_ids;
  report.degraded = degraded;
  return report;
}

PipelineResult run_pipeline(const Dataset& ds, const PipelineOptions& options) {
  auto backend = make_backend(options.mode, ds, options.agent, seed_cases(),
                              options.external_endpoint);
  ToolRegistry tools = make_dataset_tools(ds, options.agent,
                                          options.mode == BackendMode::oracle);
  VotingChain chain(options.voting, make_chain_validator(ds));
  VotingChain* chain_ptr = options.voting_enabled ? &chain : nullptr;

  PipelineResult result;

  std::vector<AlertEvent> ordered = prioritize_alerts(ds.alerts);
  for (const auto& alert : ordered) {
    try {
      RCAReport report = schedule_alert(ds, alert, *backend, tools, chain_ptr,
                                        options, result.trajectories);
      result.reports.push_back(std::move(report));
    } catch (const std::exception& e) {
      // Degraded fallback: the alerted node itself, flagged for the operator.
      RCAReport report;
      report.alert_id = alert.id;
      report.root_causes = {{alert.node, std::nullopt}};
      report.paths = {{alert.node}};
      report.resolution.diagnosis = std::string("analysis degraded: ") + e.what();
      report.resolution.actions = {"re-run once the policy backend is reachable"};
      report.fault_web.alert_node = alert.node;
      report.fault_web.entries[alert.node] = 1.0;
      report.degraded = true;
      result.reports.push_back(std::move(report));
    }
  }

  result.ledger = chain.ledger().blocks();
  result.weights = chain.weights();
  return result;
}

}  // namespace arca
