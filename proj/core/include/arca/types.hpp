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

#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

namespace arca {

using json = nlohmann::json;

// All timestamps are integer milliseconds UTC; durations integer milliseconds.
using TimestampMs = std::int64_t;
using DurationMs = std::int64_t;

enum class NodeKind { service, database, host, container };
enum class SpanStatus { ok, error };
enum class MetricKind {
  latency_ms,
  traffic_rps,
  error_rate,
  cpu_util,
  mem_util,
  io_latency_ms,
  concurrent_users,
  saturation
};
enum class Severity { info, warning, critical };

NLOHMANN_JSON_SERIALIZE_ENUM(NodeKind, {{NodeKind::service, "service"},
                                        {NodeKind::database, "database"},
                                        {NodeKind::host, "host"},
                                        {NodeKind::container, "container"}})

NLOHMANN_JSON_SERIALIZE_ENUM(SpanStatus,
                             {{SpanStatus::ok, "ok"}, {SpanStatus::error, "error"}})

NLOHMANN_JSON_SERIALIZE_ENUM(MetricKind,
                             {{MetricKind::latency_ms, "latency_ms"},
                              {MetricKind::traffic_rps, "traffic_rps"},
                              {MetricKind::error_rate, "error_rate"},
                              {MetricKind::cpu_util, "cpu_util"},
                              {MetricKind::mem_util, "mem_util"},
                              {MetricKind::io_latency_ms, "io_latency_ms"},
                              {MetricKind::concurrent_users, "concurrent_users"},
                              {MetricKind::saturation, "saturation"}})

NLOHMANN_JSON_SERIALIZE_ENUM(Severity, {{Severity::info, "info"},
                                        {Severity::warning, "warning"},
                                        {Severity::critical, "critical"}})

std::string metric_name(MetricKind m);

struct ServiceNode {
  std::string id;
  NodeKind kind = NodeKind::service;
  bool accessible = true;

  bool operator==(const ServiceNode&) const = default;
};

struct Topology {
  std::vector<ServiceNode> nodes;
  // Directed (caller id, callee id) pairs.
  std::vector<std::pair<std::string, std::string>> edges;

  bool operator==(const Topology&) const = default;

  bool has_node(const std::string& id) const;
  const ServiceNode* find_node(const std::string& id) const;
  std::set<std::string> callees_of(const std::string& id) const;
  std::set<std::string> callers_of(const std::string& id) const;
};

struct CallSpan {
  std::string trace_id;
  std::string span_id;
  std::optional<std::string> parent_span_id;
  std::string caller;
  std::string callee;
  TimestampMs start = 0;
  DurationMs duration = 0;
  SpanStatus status = SpanStatus::ok;
  std::optional<int> http_code;

  bool operator==(const CallSpan&) const = default;
};

struct MetricSeries {
  std::string node;
  MetricKind metric = MetricKind::latency_ms;
  std::vector<std::pair<TimestampMs, double>> points;

  bool operator==(const MetricSeries&) const = default;
};

struct AlertEvent {
  std::string id;
  std::string node;
  std::string kind;
  TimestampMs raised_at = 0;
  Severity severity = Severity::warning;
  // Count of distinct downstream consumers affected.
  int scope = 0;
  std::string description;

  bool operator==(const AlertEvent&) const = default;
};

// Flattened reference to the fault the simulator injected; enough to
// evaluate metric-level cause matching without a simulator dependency.
struct InjectedFaultRef {
  std::string category;
  std::string fault_case;
  std::string target;
  std::optional<std::string> metric;

  bool operator==(const InjectedFaultRef&) const = default;
};

struct GroundTruth {
  std::string alert_id;
  std::vector<std::string> root_nodes;
  // Node-id sequences, root first, alerted node last.
  std::vector<std::vector<std::string>> propagation_paths;
  InjectedFaultRef injected_fault;

  bool operator==(const GroundTruth&) const = default;
};

struct FaultWeb {
  std::string alert_node;
  std::map<std::string, double> entries;
  // Keyed "caller->callee".
  std::map<std::string, double> edge_scores;
  std::int64_t revision = 0;

  bool operator==(const FaultWeb&) const = default;

  static std::string edge_key(const std::string& caller, const std::string& callee) {
    return caller + "->" + callee;
  }
};

struct Resolution {
  std::string diagnosis;
  std::vector<std::string> actions;

  bool operator==(const Resolution&) const = default;
};

struct RootCause {
  std::string node;
  std::optional<std::string> metric;  // absent = node-level analysis

  bool operator==(const RootCause&) const = default;
};

struct RCAReport {
  std::string alert_id;
  std::vector<RootCause> root_causes;  // 1..4, descending probability
  std::vector<std::vector<std::string>> paths;
  Resolution resolution;
  FaultWeb fault_web;
  std::vector<std::string> trajectory_refs;
  bool degraded = false;

  bool operator==(const RCAReport&) const = default;
};

// Validation never aborts; violations name the offending node/edge.
std::vector<std::string> validate_topology(const Topology& t);

// Points with from <= t <= to, order preserved. Throws std::invalid_argument
// when from > to.
MetricSeries window(const MetricSeries& series, TimestampMs from, TimestampMs to);

void to_json(json& j, const ServiceNode& v);
void from_json(const json& j, ServiceNode& v);
void to_json(json& j, const Topology& v);
void from_json(const json& j, Topology& v);
void to_json(json& j, const CallSpan& v);
void from_json(const json& j, CallSpan& v);
void to_json(json& j, const MetricSeries& v);
void from_json(const json& j, MetricSeries& v);
void to_json(json& j, const AlertEvent& v);
void from_json(const json& j, AlertEvent& v);
void to_json(json& j, const InjectedFaultRef& v);
void from_json(const json& j, InjectedFaultRef& v);
void to_json(json& j, const GroundTruth& v);
void from_json(const json& j, GroundTruth& v);
void to_json(json& j, const FaultWeb& v);
void from_json(const json& j, FaultWeb& v);
void to_json(json& j, const Resolution& v);
void from_json(const json& j, Resolution& v);
void to_json(json& j, const RootCause& v);
void from_json(const json& j, RootCause& v);
void to_json(json& j, const RCAReport& v);
void from_json(const json& j, RCAReport& v);

}  // namespace arca
