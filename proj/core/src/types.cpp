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

#include "arca/types.hpp"

#include <algorithm>
#include <stdexcept>

namespace arca {

std::string metric_name(MetricKind m) {
  json j = m;
  return j.get<std::string>();
}

bool Topology::has_node(const std::string& id) const {
  return find_node(id) != nullptr;
}

const ServiceNode* Topology::find_node(const std::string& id) const {
  for (const auto& n : nodes) {
    if (n.id == id) return &n;
  }
  return nullptr;
}

std::set<std::string> Topology::callees_of(const std::string& id) const {
  std::set<std::string> out;
  for (const auto& [caller, callee] : edges) {
    if (caller == id) out.insert(callee);
  }
  return out;
}

std::set<std::string> Topology::callers_of(const std::string& id) const {
  std::set<std::string> out;
  for (const auto& [caller, callee] : edges) {
    if (callee == id) out.insert(caller);
  }
  return out;
}

std::vector<std::string> validate_topology(const Topology& t) {
  std::vector<std::string> violations;
  std::set<std::string> seen;
  for (const auto& n : t.nodes) {
    if (n.id.empty()) violations.push_back("node with empty id");
    if (!seen.insert(n.id).second)
      violations.push_back("duplicate node id " + n.id);
  }
  for (const auto& [caller, callee] : t.edges) {
    if (!seen.count(caller))
      violations.push_back("edge endpoint " + caller + " not in nodes");
    if (!seen.count(callee))
      violations.push_back("edge endpoint " + callee + " not in nodes");
  }
  return violations;
}

MetricSeries window(const MetricSeries& series, TimestampMs from, TimestampMs to) {
  if (from > to)
    throw std::invalid_argument("invalid window: from " + std::to_string(from) +
                                " > to " + std::to_string(to));
  MetricSeries out;
  out.node = series.node;
  out.metric = series.metric;
  for (const auto& p : series.points) {
    if (p.first >= from && p.first <= to) out.points.push_back(p);
  }
  return out;
}

void to_json(json& j, const ServiceNode& v) {
  j = json{{"id", v.id}, {"kind", v.kind}, {"accessible", v.accessible}};
}

void from_json(const json& j, ServiceNode& v) {
  j.at("id").get_to(v.id);
  j.at("kind").get_to(v.kind);
  v.accessible = j.value("accessible", true);
}

void to_json(json& j, const Topology& v) {
  j = json{{"nodes", v.nodes}, {"edges", json::array()}};
  for (const auto& [caller, callee] : v.edges)
    j["edges"].push_back(json{{"caller", caller}, {"callee", callee}});
}

void from_json(const json& j, Topology& v) {
  j.at("nodes").get_to(v.nodes);
  v.edges.clear();
  for (const auto& e : j.at("edges"))
    v.edges.emplace_back(e.at("caller").get<std::string>(),
                         e.at("callee").get<std::string>());
}

void to_json(json& j, const CallSpan& v) {
  j = json{{"trace_id", v.trace_id}, {"span_id", v.span_id},
           {"caller", v.caller},     {"callee", v.callee},
           {"start", v.start},       {"duration", v.duration},
           {"status", v.status}};
  if (v.parent_span_id) j["parent_span_id"] = *v.parent_span_id;
  if (v.http_code) j["http_code"] = *v.http_code;
}

void from_json(const json& j, CallSpan& v) {
  j.at("trace_id").get_to(v.trace_id);
  j.at("span_id").get_to(v.span_id);
  j.at("caller").get_to(v.caller);
  j.at("callee").get_to(v.callee);
  j.at("start").get_to(v.start);
  j.at("duration").get_to(v.duration);
  j.at("status").get_to(v.status);
  v.parent_span_id.reset();
  if (j.contains("parent_span_id"))
    v.parent_span_id = j.at("parent_span_id").get<std::string>();
  v.http_code.reset();
  if (j.contains("http_code")) v.http_code = j.at("http_code").get<int>();
}

void to_json(json& j, const MetricSeries& v) {
  j = json{{"node", v.node}, {"metric", v.metric}, {"points", json::array()}};
  for (const auto& [t, val] : v.points) j["points"].push_back(json::array({t, val}));
}

void from_json(const json& j, MetricSeries& v) {
  j.at("node").get_to(v.node);
  j.at("metric").get_to(v.metric);
  v.points.clear();
  for (const auto& p : j.at("points"))
    v.points.emplace_back(p.at(0).get<TimestampMs>(), p.at(1).get<double>());
}

void to_json(json& j, const AlertEvent& v) {
  j = json{{"id", v.id},
           {"node", v.node},
           {"kind", v.kind},
           {"raised_at", v.raised_at},
           {"severity", v.severity},
           {"scope", v.scope},
           {"description", v.description}};
}

void from_json(const json& j, AlertEvent& v) {
  j.at("id").get_to(v.id);
  j.at("node").get_to(v.node);
  j.at("kind").get_to(v.kind);
  j.at("raised_at").get_to(v.raised_at);
  j.at("severity").get_to(v.severity);
  j.at("scope").get_to(v.scope);
  j.at("description").get_to(v.description);
}

void to_json(json& j, const InjectedFaultRef& v) {
  j = json{{"category", v.category}, {"case", v.fault_case}, {"target", v.target}};
  if (v.metric) j["metric"] = *v.metric;
}

void from_json(const json& j, InjectedFaultRef& v) {
  j.at("category").get_to(v.category);
  j.at("case").get_to(v.fault_case);
  j.at("target").get_to(v.target);
  v.metric.reset();
  if (j.contains("metric")) v.metric = j.at("metric").get<std::string>();
}

void to_json(json& j, const GroundTruth& v) {
  j = json{{"alert_id", v.alert_id},
           {"root_nodes", v.root_nodes},
           {"propagation_paths", v.propagation_paths},
           {"injected_fault", v.injected_fault}};
}

void from_json(const json& j, GroundTruth& v) {
  j.at("alert_id").get_to(v.alert_id);
  j.at("root_nodes").get_to(v.root_nodes);
  j.at("propagation_paths").get_to(v.propagation_paths);
  j.at("injected_fault").get_to(v.injected_fault);
}

void to_json(json& j, const FaultWeb& v) {
  j = json{{"alert_node", v.alert_node},
           {"entries", v.entries},
           {"edge_scores", v.edge_scores},
           {"revision", v.revision}};
}

void from_json(const json& j, FaultWeb& v) {
  j.at("alert_node").get_to(v.alert_node);
  j.at("entries").get_to(v.entries);
  j.at("edge_scores").get_to(v.edge_scores);
  j.at("revision").get_to(v.revision);
}

void to_json(json& j, const Resolution& v) {
  j = json{{"diagnosis", v.diagnosis}, {"actions", v.actions}};
}

void from_json(const json& j, Resolution& v) {
  j.at("diagnosis").get_to(v.diagnosis);
  j.at("actions").get_to(v.actions);
}

void to_json(json& j, const RootCause& v) {
  j = json{{"node", v.node}};
  if (v.metric) j["metric"] = *v.metric;
}

void from_json(const json& j, RootCause& v) {
  j.at("node").get_to(v.node);
  v.metric.reset();
  if (j.contains("metric")) v.metric = j.at("metric").get<std::string>();
}

void to_json(json& j, const RCAReport& v) {
  j = json{{"alert_id", v.alert_id},
           {"root_causes", v.root_causes},
           {"paths", v.paths},
           {"resolution", v.resolution},
           {"fault_web", v.fault_web},
           {"trajectory_refs", v.trajectory_refs},
           {"degraded", v.degraded}};
}

void from_json(const json& j, RCAReport& v) {
  j.at("alert_id").get_to(v.alert_id);
  j.at("root_causes").get_to(v.root_causes);
  j.at("paths").get_to(v.paths);
  j.at("resolution").get_to(v.resolution);
  j.at("fault_web").get_to(v.fault_web);
  j.at("trajectory_refs").get_to(v.trajectory_refs);
  v.degraded = j.value("degraded", false);
}

}  // namespace arca
