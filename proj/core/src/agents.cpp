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

#include "arca/agents.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <fstream>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace arca {

void to_json(json& j, const CaseRecord& v) {
  j = json{{"alert_kind", v.alert_kind},
           {"symptom", v.symptom},
           {"resolution", v.resolution},
           {"outcome", v.outcome}};
}

void from_json(const json& j, CaseRecord& v) {
  j.at("alert_kind").get_to(v.alert_kind);
  j.at("symptom").get_to(v.symptom);
  j.at("resolution").get_to(v.resolution);
  v.outcome = j.value("outcome", "resolved");
}

std::vector<CaseRecord> seed_cases() {
  return {
      {"Database Local Method",
       "tablespace high utilization extensive data occupation degrading database "
       "performance",
       "Archive or purge stale rows on {node}, extend the tablespace datafiles, "
       "and enable autoextend with a growth cap.",
       "resolved"},
      {"Database Connectivity",
       "connection issues excessive connections impacting response and "
       "transactions",
       "Raise the connection limit on {node}, recycle idle sessions, and add "
       "client-side pooling with a backoff policy.",
       "resolved"},
      {"CPU",
       "high session average cpu time significant cpu occupation risking "
       "performance and stability",
       "Throttle the hot workload on {node}, profile the top consumers of "
       "{metric}, and scale out or pin noisy neighbours.",
       "resolved"},
      {"Memory",
       "memory usage exceeding safe limits risking performance degradation or "
       "crashes",
       "Increase heap headroom on {node}, tune GC pause targets, and fix the "
       "leak indicated by the {metric} trend.",
       "mitigated"},
      {"Disk IO",
       "abnormal increase in physical read rates indicating potential disk io "
       "issues",
       "Move hot files on {node} to faster volumes, add a read cache, and "
       "review query plans causing excess physical reads.",
       "resolved"},
  };
}

std::vector<CaseRecord> load_cases(const std::filesystem::path& file) {
  std::vector<CaseRecord> out;
  std::ifstream in(file);
  if (!in) throw std::runtime_error("cannot open case base " + file.string());
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    out.push_back(json::parse(line).get<CaseRecord>());
  }
  return out;
}

void to_json(json& j, const MetricSummary& v) {
  j = json{{"mean", v.mean},   {"max", v.max},
           {"p95", v.p95},     {"slope", v.slope},
           {"threshold", v.threshold}, {"breaches", v.breaches}};
}

void from_json(const json& j, MetricSummary& v) {
  j.at("mean").get_to(v.mean);
  j.at("max").get_to(v.max);
  j.at("p95").get_to(v.p95);
  j.at("slope").get_to(v.slope);
  j.at("threshold").get_to(v.threshold);
  j.at("breaches").get_to(v.breaches);
}

void to_json(json& j, const NodeDataReport& v) {
  j = json{{"node", v.node},
           {"accessible", v.accessible},
           {"from", v.from},
           {"to", v.to},
           {"metrics", v.metrics}};
  if (v.resolved_from) j["resolved_from"] = *v.resolved_from;
}

void from_json(const json& j, NodeDataReport& v) {
  j.at("node").get_to(v.node);
  j.at("accessible").get_to(v.accessible);
  j.at("from").get_to(v.from);
  j.at("to").get_to(v.to);
  j.at("metrics").get_to(v.metrics);
  v.resolved_from.reset();
  if (j.contains("resolved_from"))
    v.resolved_from = j.at("resolved_from").get<std::string>();
}

std::vector<AlertEvent> prioritize_alerts(std::vector<AlertEvent> events) {
  std::sort(events.begin(), events.end(),
            [](const AlertEvent& a, const AlertEvent& b) {
              auto sev = [](Severity s) {
                return s == Severity::critical ? 2 : s == Severity::warning ? 1 : 0;
              };
              if (sev(a.severity) != sev(b.severity))
                return sev(a.severity) > sev(b.severity);
              if (a.scope != b.scope) return a.scope > b.scope;
              if (a.raised_at != b.raised_at) return a.raised_at < b.raised_at;
              return a.id < b.id;
            });
  return events;
}

namespace {

int edit_distance(const std::string& a, const std::string& b) {
  std::vector<int> prev(b.size() + 1), cur(b.size() + 1);
  for (std::size_t j = 0; j <= b.size(); ++j) prev[j] = static_cast<int>(j);
  for (std::size_t i = 1; i <= a.size(); ++i) {
    cur[0] = static_cast<int>(i);
    for (std::size_t j = 1; j <= b.size(); ++j) {
      int cost = a[i - 1] == b[j - 1] ? 0 : 1;
      cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, prev[j - 1] + cost});
    }
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return s;
}

// Case-insensitive fuzzy match; nullopt when no unique best candidate is
// within the distance bound.
std::optional<std::string> resolve_node(const Topology& topo,
                                        const std::string& query, int max_dist) {
  if (topo.has_node(query)) return query;
  std::string lq = lower(query);
  int best = max_dist + 1;
  std::vector<std::string> best_ids;
  for (const auto& n : topo.nodes) {
    int d = edit_distance(lq, lower(n.id));
    if (d < best) {
      best = d;
      best_ids = {n.id};
    } else if (d == best) {
      best_ids.push_back(n.id);
    }
  }
  if (best > max_dist || best_ids.size() != 1) return std::nullopt;
  return best_ids.front();
}

double percentile(std::vector<double> vals, double q) {
  if (vals.empty()) return 0;
  std::sort(vals.begin(), vals.end());
  double idx = q * (vals.size() - 1);
  std::size_t lo = static_cast<std::size_t>(idx);
  std::size_t hi = std::min(lo + 1, vals.size() - 1);
  double frac = idx - static_cast<double>(lo);
  return vals[lo] * (1 - frac) + vals[hi] * frac;
}

double metric_threshold(MetricKind kind, double baseline_mean, const Thresholds& th) {
  switch (kind) {
    case MetricKind::latency_ms:
    case MetricKind::io_latency_ms:
      return th.latency_baseline_factor * baseline_mean;
    case MetricKind::error_rate:
      return th.error_rate;
    case MetricKind::cpu_util:
    case MetricKind::mem_util:
    case MetricKind::saturation:
      return th.utilization;
    default:
      return 0;  // traffic and user counts have no alert threshold
  }
}

}  // namespace

NodeDataReport collect_data(const Dataset& ds, const std::string& node,
                            TimestampMs from, TimestampMs to,
                            const AgentConfig& cfg) {
  auto resolved = resolve_node(ds.topology, node, cfg.fuzzy_max_distance);
  if (!resolved) throw std::invalid_argument("unknown node " + node);

  NodeDataReport report;
  report.node = *resolved;
  if (*resolved != node) report.resolved_from = node;

  // Snap to tick boundaries.
  report.from = (from / kTickMs) * kTickMs;
  report.to = ((to + kTickMs - 1) / kTickMs) * kTickMs;

  const ServiceNode* sn = ds.topology.find_node(*resolved);
  if (sn && !sn->accessible) {
    report.accessible = false;
    return report;
  }

  for (const MetricSeries* s : ds.series_of(*resolved)) {
    MetricSeries w = window(*s, report.from, report.to);
    if (w.points.empty()) continue;
    MetricSummary sum;
    std::vector<double> vals;
    for (const auto& [t, v] : w.points) vals.push_back(v);
    sum.mean = std::accumulate(vals.begin(), vals.end(), 0.0) / vals.size();
    sum.max = *std::max_element(vals.begin(), vals.end());
    sum.p95 = percentile(vals, 0.95);
    if (w.points.size() >= 2) {
      double dt = static_cast<double>(w.points.back().first - w.points.front().first);
      if (dt > 0) sum.slope = (w.points.back().second - w.points.front().second) / dt;
    }
    // Baseline for the relative thresholds: equal-length window before.
    TimestampMs len = report.to - report.from;
    MetricSeries base = window(*s, report.from - len, report.from - 1);
    double bmean = 0;
    if (!base.points.empty()) {
      for (const auto& [t, v] : base.points) bmean += v;
      bmean /= base.points.size();
    } else {
      bmean = sum.mean;
    }
    sum.threshold = metric_threshold(s->metric, bmean, cfg.thresholds);
    if (sum.threshold > 0) {
      for (const auto& [t, v] : w.points)
        if (v > sum.threshold) sum.breaches.push_back(t);
    }
    report.metrics[metric_name(s->metric)] = std::move(sum);
  }
  return report;
}

DependencyReport explore_dependencies(const Dataset& ds, const std::string& node,
                                      TimestampMs from, TimestampMs to) {
  if (!ds.topology.has_node(node))
    throw std::invalid_argument("unknown node " + node);

  DependencyReport report;
  report.direct = ds.topology.callees_of(node);
  for (const auto& s : ds.spans) {
    if (s.caller == node && s.start >= from && s.start <= to)
      report.direct.insert(s.callee);
  }
  report.direct.erase(node);

  // Transitive closure over static edges, bounded by the visited set so
  // cyclic graphs terminate.
  std::set<std::string> visited{node};
  std::deque<std::string> queue(report.direct.begin(), report.direct.end());
  for (const auto& d : report.direct) visited.insert(d);
  while (!queue.empty()) {
    std::string cur = queue.front();
    queue.pop_front();
    for (const auto& callee : ds.topology.callees_of(cur)) {
      if (visited.insert(callee).second) {
        report.indirect.insert(callee);
        queue.push_back(callee);
      }
    }
  }
  report.indirect.erase(node);
  for (const auto& d : report.direct) report.indirect.erase(d);
  return report;
}

double pearson(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size())
    throw std::invalid_argument("pearson: length mismatch");
  if (x.size() < 2) throw std::invalid_argument("pearson: need at least 2 points");
  double n = static_cast<double>(x.size());
  double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxy = 0, sxx = 0, syy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    double dx = x[i] - mx;
    double dy = y[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx == 0.0 || syy == 0.0) return 0.0;  // zero variance carries no evidence
  return sxy / std::sqrt(sxx * syy);
}

namespace {

const std::vector<MetricKind>& anomaly_metrics() {
  static const std::vector<MetricKind> kinds = {
      MetricKind::latency_ms, MetricKind::error_rate, MetricKind::cpu_util,
      MetricKind::mem_util};
  return kinds;
}

double metric_scale(MetricKind kind, double baseline_mean) {
  switch (kind) {
    case MetricKind::latency_ms:
    case MetricKind::io_latency_ms:
      return std::max(baseline_mean, 1e-9);
    case MetricKind::error_rate:
      return 0.05;
    default:
      return 0.1;
  }
}

std::vector<double> tick_values(const MetricSeries& s, TimestampMs from,
                                TimestampMs to) {
  std::vector<double> out;
  for (const auto& [t, v] : s.points)
    if (t >= from && t <= to) out.push_back(v);
  return out;
}

double logistic(double z) { return 1.0 / (1.0 + std::exp(-z)); }

}  // namespace

std::map<std::string, ProbabilityScore> score_probabilities(
    const Dataset& ds, const std::vector<std::string>& nodes,
    const std::string& alert_node, TimestampMs from, TimestampMs to,
    const AgentConfig& cfg) {
  if (nodes.empty()) throw std::invalid_argument("no nodes to score");
  if (ds.series_of(alert_node).empty())
    throw std::invalid_argument("alert node " + alert_node + " has no metrics");

  TimestampMs len = to - from;
  TimestampMs base_from = from - len;
  TimestampMs base_to = from - 1;

  std::map<std::string, ProbabilityScore> out;
  for (const auto& node : nodes) {
    ProbabilityScore score;
    const ServiceNode* sn = ds.topology.find_node(node);
    if (sn && !sn->accessible) {
      // Unreachable nodes default to high failure probability.
      score.base = cfg.inaccessible_p;
      score.final_p = cfg.inaccessible_p;
      out[node] = score;
      continue;
    }

    double max_z = 0;
    bool any_baseline = false;
    for (MetricKind kind : anomaly_metrics()) {
      const MetricSeries* s = ds.series_for(node, kind);
      if (!s) continue;
      auto wv = tick_values(*s, from, to);
      auto bv = tick_values(*s, base_from, base_to);
      if (wv.empty() || bv.empty()) continue;
      any_baseline = true;
      double wmean = std::accumulate(wv.begin(), wv.end(), 0.0) / wv.size();
      double bmean = std::accumulate(bv.begin(), bv.end(), 0.0) / bv.size();
      double bvar = 0;
      for (double v : bv) bvar += (v - bmean) * (v - bmean);
      double bstd = std::sqrt(bvar / bv.size());
      double scale = std::max(bstd, metric_scale(kind, bmean));
      max_z = std::max(max_z, (wmean - bmean) / scale);
    }
    if (!any_baseline) {
      score.base = cfg.no_baseline_p;
      score.no_baseline = true;
    } else {
      score.base = logistic(max_z);
    }

    // Correlation adjustment against the alert node's series, aligned on
    // window ticks.
    double r = 0;
    for (MetricKind ka : anomaly_metrics()) {
      const MetricSeries* sa = ds.series_for(alert_node, ka);
      if (!sa) continue;
      auto av = tick_values(*sa, from, to);
      if (av.size() < 2) continue;
      for (MetricKind kb : anomaly_metrics()) {
        const MetricSeries* sb = ds.series_for(node, kb);
        if (!sb) continue;
        auto bv2 = tick_values(*sb, from, to);
        if (bv2.size() != av.size()) continue;
        r = std::max(r, std::abs(pearson(av, bv2)));
      }
    }
    score.correlation = r;
    score.final_p = std::clamp(score.base * (1.0 - cfg.gamma) + cfg.gamma * r, 0.0, 1.0);
    out[node] = score;
  }
  return out;
}

FaultWeb update_fault_web(const FaultWeb& web,
                          const std::map<std::string, double>& probabilities,
                          const Topology& topology) {
  for (const auto& [node, p] : probabilities) {
    if (!topology.has_node(node))
      throw std::invalid_argument("update error: unknown node " + node);
  }
  FaultWeb out = web;
  out.revision = web.revision + 1;
  for (const auto& [node, p] : probabilities) out.entries[node] = p;
  for (const auto& [caller, callee] : topology.edges) {
    auto ci = out.entries.find(caller);
    auto ce = out.entries.find(callee);
    if (ci == out.entries.end() && ce == out.entries.end()) continue;
    double score = 0;
    if (ci != out.entries.end()) score = std::max(score, ci->second);
    if (ce != out.entries.end()) score = std::max(score, ce->second);
    out.edge_scores[FaultWeb::edge_key(caller, callee)] = score;
  }
  return out;
}

std::optional<std::vector<std::string>> best_path(const FaultWeb& web,
                                                  const Topology& topology,
                                                  const std::string& root,
                                                  const std::string& alert_node) {
  if (root == alert_node) return std::vector<std::string>{root};

  // Walk reverse call edges (callee -> caller) maximizing the minimum edge
  // score; ties prefer fewer hops, then lexicographically smaller nodes.
  struct State {
    double bottleneck = -1;
    int hops = 0;
    std::string prev;
  };
  std::map<std::string, State> states;
  states[root] = {2.0, 0, ""};
  std::set<std::string> done;

  auto better = [](double b, int h, const std::string& id, const State& s,
                   const std::string& prev_id) {
    if (b != s.bottleneck) return b > s.bottleneck;
    if (h != s.hops) return h < s.hops;
    return prev_id < s.prev;
  };

  while (true) {
    // Pick the best undone state.
    std::string cur;
    double best_b = -1;
    int best_h = 0;
    for (const auto& [id, s] : states) {
      if (done.count(id)) continue;
      if (s.bottleneck > best_b ||
          (s.bottleneck == best_b && (s.hops < best_h || (s.hops == best_h && id < cur)))) {
        cur = id;
        best_b = s.bottleneck;
        best_h = s.hops;
      }
    }
    if (cur.empty()) break;
    if (cur == alert_node) break;
    done.insert(cur);
    for (const auto& caller : topology.callers_of(cur)) {
      auto it = web.edge_scores.find(FaultWeb::edge_key(caller, cur));
      double es = it == web.edge_scores.end() ? 0.0 : it->second;
      double b = std::min(states[cur].bottleneck, es);
      int h = states[cur].hops + 1;
      auto st = states.find(caller);
      if (st == states.end() || better(b, h, caller, st->second, cur))
        states[caller] = {b, h, cur};
    }
  }

  if (!states.count(alert_node)) return std::nullopt;
  std::vector<std::string> path;
  std::string cur = alert_node;
  while (!cur.empty()) {
    path.push_back(cur);
    cur = states[cur].prev;
  }
  std::reverse(path.begin(), path.end());
  return path;
}

namespace {

std::set<std::string> tokenize(const std::string& text) {
  std::set<std::string> out;
  std::string tok;
  for (char c : text + " ") {
    if (std::isalnum(static_cast<unsigned char>(c))) {
      tok.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    } else if (!tok.empty()) {
      out.insert(tok);
      tok.clear();
    }
  }
  return out;
}

double jaccard(const std::set<std::string>& a, const std::set<std::string>& b) {
  if (a.empty() && b.empty()) return 0;
  std::size_t inter = 0;
  for (const auto& t : a)
    if (b.count(t)) ++inter;
  return static_cast<double>(inter) /
         static_cast<double>(a.size() + b.size() - inter);
}

std::string substitute(std::string text, const std::string& node,
                       const std::string& metric) {
  auto replace_all = [&](const std::string& from, const std::string& to) {
    std::size_t pos = 0;
    while ((pos = text.find(from, pos)) != std::string::npos) {
      text.replace(pos, from.size(), to);
      pos += to.size();
    }
  };
  replace_all("{node}", node);
  replace_all("{metric}", metric.empty() ? "the affected metric" : metric);
  return text;
}

}  // namespace

AnalysisResult analyze_and_resolve(
    const FaultWeb& web, const Topology& topology, const std::string& alert_kind,
    const std::map<std::string, NodeDataReport>& node_data,
    const std::vector<CaseRecord>& cases, const AgentConfig& cfg) {
  if (web.entries.empty()) throw std::invalid_argument("analysis error: empty fault web");

  std::vector<std::pair<std::string, double>> ranked(web.entries.begin(),
                                                     web.entries.end());
  std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });

  AnalysisResult result;
  for (const auto& [node, p] : ranked) {
    if (result.root_causes.size() >= 4) break;
    RootCause rc;
    rc.node = node;
    auto it = node_data.find(node);
    if (it != node_data.end() && !it->second.metrics.empty()) {
      // Metric-level analysis: worst-breaching metric by ratio to threshold.
      double worst = 0;
      for (const auto& [mname, sum] : it->second.metrics) {
        if (sum.breaches.empty() || sum.threshold <= 0) continue;
        double ratio = sum.max / sum.threshold;
        if (ratio > worst) {
          worst = ratio;
          rc.metric = mname;
        }
      }
    }
    result.root_causes.push_back(rc);
  }

  for (const auto& rc : result.root_causes) {
    auto p = best_path(web, topology, rc.node, web.alert_node);
    if (p) result.paths.push_back(*p);
  }

  // Case base: exact alert-kind match first, then symptom token overlap.
  const CaseRecord* chosen = nullptr;
  const std::string& top_node = result.root_causes.front().node;
  std::string top_metric = result.root_causes.front().metric.value_or("");
  for (const auto& c : cases) {
    if (c.alert_kind == alert_kind) {
      chosen = &c;
      break;
    }
  }
  if (!chosen) {
    auto kind_tokens = tokenize(alert_kind + " " + top_metric);
    double best = cfg.case_jaccard_min;
    for (const auto& c : cases) {
      double j = jaccard(kind_tokens, tokenize(c.symptom));
      if (j >= best) {
        best = j;
        chosen = &c;
      }
    }
  }

  if (chosen) {
    result.resolution.diagnosis = alert_kind + " fault rooted at " + top_node +
                                  (top_metric.empty() ? "" : " (" + top_metric + ")");
    result.resolution.actions = {substitute(chosen->resolution, top_node, top_metric)};
  } else {
    result.resolution.diagnosis =
        alert_kind + " fault rooted at " + top_node + "; no matching case on record";
    result.resolution.actions = {
        "Inspect " + top_node + " around the alert window and compare " +
            (top_metric.empty() ? "its key metrics" : top_metric) +
            " against the preceding baseline.",
        "Restart or scale " + top_node + " if the anomaly persists, then "
        "record the outcome as a new case."};
  }
  return result;
}

}  // namespace arca
