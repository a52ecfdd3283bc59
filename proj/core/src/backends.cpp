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

#include "arca/backends.hpp"

#include <chrono>
#include <stdexcept>
#include <thread>

#include <httplib.h>

namespace arca {

ToolRegistry make_dataset_tools(const Dataset& ds, const AgentConfig& cfg,
                                bool with_ground_truth) {
  ToolRegistry reg;
  reg.register_tool(
      "data_collection",
      json{{"node", "string"}, {"from", "integer"}, {"to", "integer"}},
      [&ds, cfg](const json& args) {
        NodeDataReport r = collect_data(ds, args.at("node").get<std::string>(),
                                        args.at("from").get<TimestampMs>(),
                                        args.at("to").get<TimestampMs>(), cfg);
        return json{{"report", r}};
      });
  reg.register_tool(
      "dependency_query",
      json{{"node", "string"}, {"from", "integer"}, {"to", "integer"}},
      [&ds](const json& args) {
        DependencyReport r = explore_dependencies(
            ds, args.at("node").get<std::string>(),
            args.at("from").get<TimestampMs>(), args.at("to").get<TimestampMs>());
        return json{{"direct", r.direct}, {"indirect", r.indirect}};
      });
  reg.register_tool(
      "probability_model",
      json{{"nodes", "array"},
           {"alert_node", "string"},
           {"from", "integer"},
           {"to", "integer"}},
      [&ds, cfg](const json& args) {
        auto scores = score_probabilities(
            ds, args.at("nodes").get<std::vector<std::string>>(),
            args.at("alert_node").get<std::string>(),
            args.at("from").get<TimestampMs>(), args.at("to").get<TimestampMs>(),
            cfg);
        json probs = json::object();
        json detail = json::object();
        for (const auto& [node, s] : scores) {
          probs[node] = s.final_p;
          detail[node] = json{{"base", s.base},
                              {"correlation", s.correlation},
                              {"no_baseline", s.no_baseline}};
        }
        return json{{"probabilities", probs}, {"detail", detail}};
      });
  reg.register_tool(
      "fault_web_update", json{{"web", "object"}, {"probabilities", "object"}},
      [&ds](const json& args) {
        FaultWeb web = args.at("web").get<FaultWeb>();
        std::map<std::string, double> probs;
        for (const auto& [node, p] : args.at("probabilities").items())
          probs[node] = p.get<double>();
        return json{{"web", update_fault_web(web, probs, ds.topology)}};
      });
  if (with_ground_truth) {
    reg.register_tool("ground_truth_lookup", json{{"alert_id", "string"}},
                      [&ds](const json& args) {
                        const GroundTruth* gt =
                            ds.truth_for(args.at("alert_id").get<std::string>());
                        if (!gt)
                          return json{{"error", "no ground truth for alert"}};
                        return json{{"truth", *gt}};
                      });
  }
  return reg;
}

StepDecision HeuristicBackend::direct_topics(const Question& q) {
  StepDecision d;
  switch (q.topic) {
    case Topic::priority: {
      auto alerts = q.payload.at("alerts").get<std::vector<AlertEvent>>();
      if (alerts.empty())
        throw std::runtime_error("nothing to prioritize: empty alert list");
      auto ordered = prioritize_alerts(std::move(alerts));
      std::vector<std::string> ids;
      for (const auto& a : ordered) ids.push_back(a.id);
      d.thought = "rank by severity, scope, recency";
      d.final = FinalAnswer{json{{"ordered_alert_ids", ids}}, 1.0};
      return d;
    }
    case Topic::subtask: {
      d.thought = "next sub-task from the scheduling loop";
      d.final = FinalAnswer{
          json{{"subtask", "expand the fault web around the current frontier"}},
          1.0};
      return d;
    }
    case Topic::rootcause: {
      // Node-level analysis: no per-metric data, rank the fault web.
      FaultWeb web = q.payload.at("web").get<FaultWeb>();
      if (web.entries.empty())
        throw std::runtime_error("analysis error: empty fault web");
      auto best = std::max_element(
          web.entries.begin(), web.entries.end(), [](const auto& a, const auto& b) {
            return a.second != b.second ? a.second < b.second : a.first > b.first;
          });
      json causes = json::array({json{{"node", best->first}}});
      json paths = json::array({json::array({best->first})});
      if (best->first == web.alert_node)
        paths = json::array({json::array({web.alert_node})});
      Resolution res;
      res.diagnosis = "node-level suspicion on " + best->first;
      res.actions = {"Check " + best->first + " manually; no metric data was reachable."};
      d.thought = "node-level ranking over the fault web";
      d.final = FinalAnswer{
          json{{"root_causes", causes}, {"paths", paths}, {"resolution", res}},
          0.5};
      return d;
    }
    default:
      throw std::runtime_error("topic routed direct without a direct rule");
  }
}

StepDecision HeuristicBackend::react_step(const Question& q,
                                          const Trajectory& so_far) {
  StepDecision d;
  auto window_args = [&] {
    return json{{"node", q.payload.value("node", std::string{})},
                {"from", q.payload.at("from").get<TimestampMs>()},
                {"to", q.payload.at("to").get<TimestampMs>()}};
  };

  // First invocation issues the tool call; the second reads the observation
  // and finalizes.
  if (so_far.steps.empty()) {
    switch (q.topic) {
      case Topic::data:
        d.thought = "collect windowed metrics for " + q.payload.at("node").get<std::string>();
        d.action = ToolCall{"data_collection", window_args()};
        return d;
      case Topic::dependency:
        d.thought = "query direct and indirect dependencies";
        d.action = ToolCall{"dependency_query", window_args()};
        return d;
      case Topic::probability:
        d.thought = "score candidate nodes against the alerted node";
        d.action = ToolCall{"probability_model",
                            json{{"nodes", q.payload.at("nodes")},
                                 {"alert_node", q.payload.at("alert_node")},
                                 {"from", q.payload.at("from")},
                                 {"to", q.payload.at("to")}}};
        return d;
      case Topic::faultweb:
        d.thought = "merge new probabilities into the fault web";
        d.action = ToolCall{"fault_web_update",
                            json{{"web", q.payload.at("web")},
                                 {"probabilities", q.payload.at("probabilities")}}};
        return d;
      case Topic::rootcause: {
        // Metric-level analysis, computed locally from the payload.
        FaultWeb web = q.payload.at("web").get<FaultWeb>();
        std::map<std::string, NodeDataReport> node_data;
        if (q.payload.contains("node_data")) {
          for (const auto& [node, r] : q.payload.at("node_data").items())
            node_data[node] = r.get<NodeDataReport>();
        }
        AnalysisResult res = analyze_and_resolve(
            web, ds_->topology, q.payload.value("alert_kind", std::string{}),
            node_data, cases_, cfg_);
        d.thought = "metric-level analysis over the fault web";
        d.final = FinalAnswer{json{{"root_causes", res.root_causes},
                                   {"paths", res.paths},
                                   {"resolution", res.resolution}},
                              0.9};
        return d;
      }
      default:
        throw std::runtime_error("unexpected react topic");
    }
  }

  json obs = json::parse(so_far.steps.back().observation, nullptr, false);
  if (obs.is_discarded() || obs.contains("error"))
    throw std::runtime_error("tool observation unusable: " +
                             so_far.steps.back().observation);

  switch (q.topic) {
    case Topic::data:
      d.final = FinalAnswer{json{{"report", obs.at("report")}}, 1.0};
      return d;
    case Topic::dependency:
      d.final = FinalAnswer{
          json{{"direct", obs.at("direct")}, {"indirect", obs.at("indirect")}}, 1.0};
      return d;
    case Topic::probability:
      d.final = FinalAnswer{json{{"probabilities", obs.at("probabilities")}}, 0.8};
      return d;
    case Topic::faultweb:
      d.final = FinalAnswer{json{{"web", obs.at("web")}}, 1.0};
      return d;
    default:
      throw std::runtime_error("unexpected react continuation");
  }
}

StepDecision HeuristicBackend::step(const Question& q, const Trajectory& so_far,
                                    const ToolRegistry&) {
  if (assess_complexity(q) == Route::direct) return direct_topics(q);
  return react_step(q, so_far);
}

OracleBackend::OracleBackend(const Dataset& ds, AgentConfig cfg,
                             std::vector<CaseRecord> cases)
    : HeuristicBackend(ds, cfg, std::move(cases)) {
  if (!ds.has_ground_truth())
    throw std::invalid_argument("oracle backend requires ground truth");
}

StepDecision OracleBackend::react_step(const Question& q, const Trajectory& so_far) {
  if (q.topic != Topic::probability && q.topic != Topic::rootcause)
    return HeuristicBackend::react_step(q, so_far);

  StepDecision d;
  if (so_far.steps.empty()) {
    d.thought = "consult the injected-fault label";
    d.action = ToolCall{"ground_truth_lookup",
                        json{{"alert_id", q.payload.at("alert_id")}}};
    return d;
  }

  json obs = json::parse(so_far.steps.back().observation, nullptr, false);
  if (obs.is_discarded() || obs.contains("error"))
    throw std::runtime_error("ground truth unavailable: " +
                             so_far.steps.back().observation);
  GroundTruth gt = obs.at("truth").get<GroundTruth>();

  if (q.topic == Topic::probability) {
    std::set<std::string> roots(gt.root_nodes.begin(), gt.root_nodes.end());
    std::set<std::string> on_path;
    for (const auto& path : gt.propagation_paths)
      on_path.insert(path.begin(), path.end());
    json probs = json::object();
    for (const auto& node : q.payload.at("nodes").get<std::vector<std::string>>()) {
      double p = roots.count(node) ? 1.0 : on_path.count(node) ? 0.6 : 0.05;
      probs[node] = p;
    }
    d.final = FinalAnswer{json{{"probabilities", probs}}, 1.0};
    return d;
  }

  json causes = json::array();
  for (const auto& root : gt.root_nodes) {
    json c = json{{"node", root}};
    if (gt.injected_fault.metric) c["metric"] = *gt.injected_fault.metric;
    causes.push_back(c);
  }
  Resolution res;
  res.diagnosis = gt.injected_fault.category + " fault (" +
                  gt.injected_fault.fault_case + ") injected at " +
                  gt.injected_fault.target;
  res.actions = {"Revert or contain the injected fault at " + gt.injected_fault.target};
  d.final = FinalAnswer{json{{"root_causes", causes},
                             {"paths", gt.propagation_paths},
                             {"resolution", res}},
                        1.0};
  return d;
}

StepDecision ExternalBackend::step(const Question& q, const Trajectory& so_far,
                                   const ToolRegistry& tools) {
  json body;
  body["role"] = q.asker;
  body["question"] = q;
  body["context"] = q.context;
  body["tools"] = json::array();
  for (const auto& [name, schema] : tools.list())
    body["tools"].push_back(json{{"name", name}, {"schema", schema}});
  body["trajectory_so_far"] = so_far;

  std::string host = endpoint_;
  for (int attempt = 0; attempt <= retries_; ++attempt) {
    if (attempt > 0)
      std::this_thread::sleep_for(std::chrono::milliseconds(200 << attempt));
    httplib::Client client(host);
    client.set_read_timeout(timeout_seconds_, 0);
    client.set_connection_timeout(timeout_seconds_, 0);
    auto res = client.Post("/v1/agent-step", body.dump(), "application/json");
    if (!res || res->status != 200) continue;
    json reply = json::parse(res->body, nullptr, false);
    if (reply.is_discarded()) continue;
    StepDecision d;
    if (reply.contains("final_answer")) {
      d.final = FinalAnswer{reply["final_answer"].value("body", json::object()),
                            reply["final_answer"].value("confidence", 1.0)};
      return d;
    }
    if (reply.contains("action")) {
      d.action = ToolCall{reply["action"].value("tool", std::string{}),
                          reply["action"].value("args", json::object())};
      return d;
    }
  }
  throw std::runtime_error("backend error: external policy unreachable at " + host);
}

std::unique_ptr<PolicyBackend> make_backend(BackendMode mode, const Dataset& ds,
                                            const AgentConfig& cfg,
                                            std::vector<CaseRecord> cases,
                                            const std::string& endpoint) {
  switch (mode) {
    case BackendMode::heuristic:
      return std::make_unique<HeuristicBackend>(ds, cfg, std::move(cases));
    case BackendMode::oracle:
      return std::make_unique<OracleBackend>(ds, cfg, std::move(cases));
    case BackendMode::external:
      if (endpoint.empty())
        throw std::invalid_argument("external mode requires an endpoint");
      return std::make_unique<ExternalBackend>(endpoint);
  }
  throw std::invalid_argument("unknown backend mode");
}

}  // namespace arca
