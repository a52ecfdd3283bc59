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

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "arca/dataset.hpp"
#include "arca/runtime.hpp"
#include "arca/simulator.hpp"
#include "arca/types.hpp"

namespace arca {

struct CaseRecord {
  std::string alert_kind;
  std::string symptom;
  std::string resolution;
  std::string outcome = "resolved";  // resolved | mitigated

  bool operator==(const CaseRecord&) const = default;
};

void to_json(json& j, const CaseRecord& v);
void from_json(const json& j, CaseRecord& v);

// The seed case base (tablespace, connectivity, CPU, memory, disk IO).
std::vector<CaseRecord> seed_cases();
std::vector<CaseRecord> load_cases(const std::filesystem::path& file);

struct AgentConfig {
  double p_stop = 0.8;
  int max_iterations = 10;       // scheduler loop bound K
  double gamma = 0.5;            // correlation blend weight
  double inaccessible_p = 0.9;
  double no_baseline_p = 0.5;
  int fuzzy_max_distance = 2;
  double case_jaccard_min = 0.3;
  // Analysis window half-width around the alert, in ticks; the baseline
  // window is the equal-length stretch immediately before it.
  int window_ticks = 5;
  Thresholds thresholds;
};

struct MetricSummary {
  double mean = 0;
  double max = 0;
  double p95 = 0;
  double slope = 0;
  double threshold = 0;
  std::vector<TimestampMs> breaches;
};

void to_json(json& j, const MetricSummary& v);
void from_json(const json& j, MetricSummary& v);

struct NodeDataReport {
  std::string node;
  std::optional<std::string> resolved_from;  // set when fuzzy matching fired
  bool accessible = true;
  TimestampMs from = 0;
  TimestampMs to = 0;
  std::map<std::string, MetricSummary> metrics;
};

void to_json(json& j, const NodeDataReport& v);
void from_json(const json& j, NodeDataReport& v);

struct DependencyReport {
  std::set<std::string> direct;
  std::set<std::string> indirect;
};

// --- Alert Receiver ---
// Total order: severity desc, scope desc, raised_at asc, id asc.
std::vector<AlertEvent> prioritize_alerts(std::vector<AlertEvent> events);

// --- Data Detective ---
// Fuzzy-resolves near-miss node ids (case-insensitive, edit distance <= 2,
// unique best match) and snaps the window to tick boundaries.
NodeDataReport collect_data(const Dataset& ds, const std::string& node,
                            TimestampMs from, TimestampMs to,
                            const AgentConfig& cfg = {});

// --- Dependency Explorer ---
// direct: static callees plus callees observed in spans inside the window;
// indirect: transitive closure minus direct minus the node itself.
DependencyReport explore_dependencies(const Dataset& ds, const std::string& node,
                                      TimestampMs from, TimestampMs to);

// Standard product-moment coefficient; zero variance on either side is 0.
double pearson(const std::vector<double>& x, const std::vector<double>& y);

// --- Probability Oracle ---
struct ProbabilityScore {
  double base = 0;
  double correlation = 0;
  double final_p = 0;
  bool no_baseline = false;
};

std::map<std::string, ProbabilityScore> score_probabilities(
    const Dataset& ds, const std::vector<std::string>& nodes,
    const std::string& alert_node, TimestampMs from, TimestampMs to,
    const AgentConfig& cfg = {});

// --- Fault Mapper ---
FaultWeb update_fault_web(const FaultWeb& web,
                          const std::map<std::string, double>& probabilities,
                          const Topology& topology);

// --- Solution Engineer ---
struct AnalysisResult {
  std::vector<RootCause> root_causes;
  std::vector<std::vector<std::string>> paths;
  Resolution resolution;
};

// node_data: per-node report, present where metric-level data was gathered.
AnalysisResult analyze_and_resolve(
    const FaultWeb& web, const Topology& topology, const std::string& alert_kind,
    const std::map<std::string, NodeDataReport>& node_data,
    const std::vector<CaseRecord>& cases, const AgentConfig& cfg = {});

// Highest-edge-score (max-min bottleneck) path root -> alert over reverse
// call edges; ties broken by fewer hops then lexicographic order.
std::optional<std::vector<std::string>> best_path(const FaultWeb& web,
                                                  const Topology& topology,
                                                  const std::string& root,
                                                  const std::string& alert_node);

}  // namespace arca
