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

#include "arca/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <stdexcept>

namespace arca {

namespace {

// splitmix64; std distributions are avoided so outputs are stable across
// standard library implementations.
struct Rng {
  std::uint64_t state;

  explicit Rng(std::uint64_t seed) : state(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  double uniform01() { return (next() >> 11) * 0x1.0p-53; }

  std::uint64_t uniform_int(std::uint64_t n) { return next() % n; }

  double normal() {
    double u1 = uniform01();
    double u2 = uniform01();
    if (u1 < 1e-300) u1 = 1e-300;
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2);
  }
};

std::uint64_t mix(std::uint64_t a, std::uint64_t b) {
  Rng r(a ^ (b * 0xff51afd7ed558ccdULL));
  return r.next();
}

std::uint64_t hash_str(const std::string& s) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

struct Baseline {
  double latency_ms;
  double cpu_util;
  double mem_util;
  double io_latency_ms;
};

Baseline baseline_of(const std::string& node) {
  std::uint64_t h = hash_str(node);
  Baseline b;
  b.latency_ms = 40.0 + static_cast<double>(h % 81);
  b.cpu_util = 0.20 + static_cast<double>((h >> 8) % 16) / 100.0;
  b.mem_util = 0.30 + static_cast<double>((h >> 16) % 21) / 100.0;
  b.io_latency_ms = 2.0 + static_cast<double>((h >> 24) % 7);
  return b;
}

const std::vector<std::string>& full_service_names() {
  static const std::vector<std::string> names = {
      "ts-ui-dashboard",         "ts-auth-service",
      "ts-user-service",         "ts-verification-code-service",
      "ts-contacts-service",     "ts-order-service",
      "ts-order-other-service",  "ts-config-service",
      "ts-station-service",      "ts-train-service",
      "ts-travel-service",       "ts-travel2-service",
      "ts-preserve-service",     "ts-preserve-other-service",
      "ts-basic-service",        "ts-ticketinfo-service",
      "ts-price-service",        "ts-notification-service",
      "ts-security-service",     "ts-inside-payment-service",
      "ts-execute-service",      "ts-payment-service",
      "ts-rebook-service",       "ts-cancel-service",
      "ts-route-service",        "ts-assurance-service",
      "ts-seat-service",         "ts-travel-plan-service",
      "ts-route-plan-service",   "ts-food-service",
      "ts-food-map-service",     "ts-consign-service",
      "ts-consign-price-service","ts-admin-basic-info-service",
      "ts-admin-order-service",  "ts-admin-route-service",
      "ts-admin-travel-service", "ts-admin-user-service",
      "ts-news-service",         "ts-voucher-service",
      "ts-avatar-service"};
  return names;
}

void add_edge(Topology& t, const std::string& a, const std::string& b) {
  t.edges.emplace_back(a, b);
}

}  // namespace

FaultCategory category_of(FaultCase c) {
  switch (c) {
    case FaultCase::high_packet_loss:
    case FaultCase::high_retransmission:
    case FaultCase::dns_failure:
    case FaultCase::bandwidth_saturation:
    case FaultCase::tcp_setup_delay:
      return FaultCategory::Network;
    case FaultCase::high_io_latency:
      return FaultCategory::Storage;
    case FaultCase::code_cpu_high:
    case FaultCase::cpu_contention:
      return FaultCategory::CPU;
    case FaultCase::full_gc_storm:
    case FaultCase::memory_contention:
      return FaultCategory::Memory;
    case FaultCase::error_code_throw:
    case FaultCase::http_error_return:
      return FaultCategory::Code;
  }
  throw std::invalid_argument("unknown fault case");
}

MetricKind primary_metric(FaultCategory c) {
  switch (c) {
    case FaultCategory::Network: return MetricKind::latency_ms;
    case FaultCategory::Storage: return MetricKind::io_latency_ms;
    case FaultCategory::CPU: return MetricKind::cpu_util;
    case FaultCategory::Memory: return MetricKind::mem_util;
    case FaultCategory::Code: return MetricKind::error_rate;
  }
  throw std::invalid_argument("unknown fault category");
}

std::string alert_kind(FaultCategory c) {
  switch (c) {
    case FaultCategory::Network: return "Network";
    case FaultCategory::Storage: return "Disk IO";
    case FaultCategory::CPU: return "CPU";
    case FaultCategory::Memory: return "Memory";
    case FaultCategory::Code: return "Code";
  }
  throw std::invalid_argument("unknown fault category");
}

void to_json(json& j, const FaultSpec& v) {
  j = json{{"category", v.category},       {"case", v.fault_case},
           {"target", v.target},           {"window_start", v.window_start},
           {"window_end", v.window_end},   {"magnitude", v.magnitude}};
}

void from_json(const json& j, FaultSpec& v) {
  j.at("category").get_to(v.category);
  j.at("case").get_to(v.fault_case);
  j.at("target").get_to(v.target);
  j.at("window_start").get_to(v.window_start);
  j.at("window_end").get_to(v.window_end);
  j.at("magnitude").get_to(v.magnitude);
}

void to_json(json& j, const SimConfig& v) {
  j = json{{"preset", v.preset},           {"users", v.users},
           {"duration", v.duration},       {"seed", v.seed},
           {"noise_level", v.noise_level}, {"faults", v.faults}};
}

void from_json(const json& j, SimConfig& v) {
  j.at("preset").get_to(v.preset);
  j.at("users").get_to(v.users);
  j.at("duration").get_to(v.duration);
  j.at("seed").get_to(v.seed);
  j.at("noise_level").get_to(v.noise_level);
  v.faults.clear();
  if (j.contains("faults")) j.at("faults").get_to(v.faults);
}

Topology build_topology(Preset preset, std::uint64_t seed) {
  Topology t;
  switch (preset) {
    case Preset::figure1: {
      for (char c = 'A'; c <= 'I'; ++c)
        t.nodes.push_back({std::string(1, c), NodeKind::service, true});
      add_edge(t, "A", "B");
      add_edge(t, "A", "C");
      add_edge(t, "A", "D");
      add_edge(t, "B", "E");
      add_edge(t, "C", "F");
      add_edge(t, "D", "G");
      add_edge(t, "D", "H");
      add_edge(t, "G", "I");
      break;
    }
    case Preset::trainticket_small: {
      for (const char* n : {"ts-ui", "ts-auth", "ts-user", "ts-travel",
                            "ts-route", "ts-station", "ts-basic", "ts-order",
                            "ts-seat", "ts-price", "ts-payment", "ts-notify"})
        t.nodes.push_back({n, NodeKind::service, true});
      add_edge(t, "ts-ui", "ts-auth");
      add_edge(t, "ts-ui", "ts-user");
      add_edge(t, "ts-ui", "ts-travel");
      add_edge(t, "ts-ui", "ts-payment");
      add_edge(t, "ts-travel", "ts-route");
      add_edge(t, "ts-travel", "ts-basic");
      add_edge(t, "ts-basic", "ts-station");
      add_edge(t, "ts-basic", "ts-price");
      // the circular dependency: basic -> order -> seat -> basic
      add_edge(t, "ts-basic", "ts-order");
      add_edge(t, "ts-order", "ts-seat");
      add_edge(t, "ts-seat", "ts-basic");
      add_edge(t, "ts-payment", "ts-order");
      add_edge(t, "ts-order", "ts-notify");
      break;
    }
    case Preset::trainticket_full: {
      const auto& names = full_service_names();
      for (const auto& n : names)
        t.nodes.push_back({n, NodeKind::service, true});
      for (int i = 1; i <= 8; ++i) {
        char buf[16];
        std::snprintf(buf, sizeof buf, "host_%03d", i);
        t.nodes.push_back({buf, NodeKind::host, true});
      }
      for (int i = 1; i <= 4; ++i) {
        char buf[16];
        std::snprintf(buf, sizeof buf, "db_%03d", i);
        t.nodes.push_back({buf, NodeKind::database, true});
      }
      // Fixed backbone the workload processes walk.
      add_edge(t, "ts-ui-dashboard", "ts-auth-service");
      add_edge(t, "ts-ui-dashboard", "ts-user-service");
      add_edge(t, "ts-ui-dashboard", "ts-travel-service");
      add_edge(t, "ts-ui-dashboard", "ts-preserve-service");
      add_edge(t, "ts-ui-dashboard", "ts-inside-payment-service");
      add_edge(t, "ts-ui-dashboard", "ts-rebook-service");
      add_edge(t, "ts-ui-dashboard", "ts-consign-service");
      add_edge(t, "ts-ui-dashboard", "ts-admin-basic-info-service");
      add_edge(t, "ts-auth-service", "ts-verification-code-service");
      add_edge(t, "ts-user-service", "ts-contacts-service");
      add_edge(t, "ts-travel-service", "ts-route-service");
      add_edge(t, "ts-travel-service", "ts-train-service");
      add_edge(t, "ts-travel-service", "ts-ticketinfo-service");
      add_edge(t, "ts-ticketinfo-service", "ts-basic-service");
      add_edge(t, "ts-basic-service", "ts-station-service");
      add_edge(t, "ts-basic-service", "ts-price-service");
      // circular dependency analogue
      add_edge(t, "ts-basic-service", "ts-order-service");
      add_edge(t, "ts-order-service", "ts-seat-service");
      add_edge(t, "ts-seat-service", "ts-basic-service");
      add_edge(t, "ts-preserve-service", "ts-ticketinfo-service");
      add_edge(t, "ts-preserve-service", "ts-seat-service");
      add_edge(t, "ts-preserve-service", "ts-security-service");
      add_edge(t, "ts-preserve-service", "ts-assurance-service");
      add_edge(t, "ts-preserve-service", "ts-food-service");
      add_edge(t, "ts-food-service", "ts-food-map-service");
      add_edge(t, "ts-inside-payment-service", "ts-payment-service");
      add_edge(t, "ts-inside-payment-service", "ts-order-service");
      add_edge(t, "ts-payment-service", "ts-voucher-service");
      add_edge(t, "ts-rebook-service", "ts-order-service");
      add_edge(t, "ts-rebook-service", "ts-travel2-service");
      add_edge(t, "ts-rebook-service", "ts-cancel-service");
      add_edge(t, "ts-order-service", "ts-notification-service");
      add_edge(t, "ts-consign-service", "ts-consign-price-service");
      add_edge(t, "ts-admin-basic-info-service", "ts-admin-order-service");
      add_edge(t, "ts-admin-basic-info-service", "ts-admin-route-service");
      add_edge(t, "ts-admin-basic-info-service", "ts-admin-travel-service");
      add_edge(t, "ts-admin-basic-info-service", "ts-admin-user-service");
      add_edge(t, "ts-travel-plan-service", "ts-route-plan-service");
      add_edge(t, "ts-ui-dashboard", "ts-travel-plan-service");
      add_edge(t, "ts-ui-dashboard", "ts-news-service");
      add_edge(t, "ts-ui-dashboard", "ts-avatar-service");
      add_edge(t, "ts-preserve-other-service", "ts-order-other-service");
      add_edge(t, "ts-ui-dashboard", "ts-preserve-other-service");
      add_edge(t, "ts-execute-service", "ts-order-service");
      add_edge(t, "ts-ui-dashboard", "ts-execute-service");
      add_edge(t, "ts-ui-dashboard", "ts-config-service");
      // Seeded database attachments for a handful of stateful services.
      Rng rng(mix(seed, 0x7261696cULL));
      const std::vector<std::string> stateful = {
          "ts-order-service", "ts-user-service", "ts-station-service",
          "ts-price-service", "ts-consign-service", "ts-food-service",
          "ts-route-service", "ts-contacts-service"};
      for (const auto& s : stateful) {
        char buf[16];
        std::snprintf(buf, sizeof buf, "db_%03d",
                      static_cast<int>(rng.uniform_int(4)) + 1);
        add_edge(t, s, buf);
      }
      break;
    }
  }
  return t;
}

std::vector<WorkloadProcess> preset_processes(Preset preset) {
  switch (preset) {
    case Preset::figure1:
      return {
          {"proc-frontend", {{"A", {"A", "D", "G", "I"}}}},
          {"proc-browse", {{"A", {"A", "B", "E"}}}},
          {"proc-search", {{"A", {"A", "C", "F"}}, {"A", {"A", "D", "H"}}}},
      };
    case Preset::trainticket_small:
      return {
          {"admin_operations", {{"ts-ui", {"ts-ui", "ts-auth"}},
                                {"ts-ui", {"ts-ui", "ts-travel", "ts-route"}}}},
          {"normal_flow",
           {{"ts-ui", {"ts-ui", "ts-user"}},
            {"ts-ui", {"ts-ui", "ts-travel", "ts-basic", "ts-order", "ts-seat"}},
            {"ts-ui", {"ts-ui", "ts-payment", "ts-order", "ts-notify"}}}},
          {"rebook_flow",
           {{"ts-ui", {"ts-ui", "ts-travel", "ts-basic", "ts-price"}},
            {"ts-ui", {"ts-ui", "ts-payment", "ts-order", "ts-seat", "ts-basic"}}}},
          {"rebook_fail_flow",
           {{"ts-ui", {"ts-ui", "ts-payment", "ts-order", "ts-seat"}}}},
          {"search_fail_to_add",
           {{"ts-ui", {"ts-ui", "ts-travel", "ts-basic", "ts-station"}}}},
          {"consign_preserve",
           {{"ts-ui", {"ts-ui", "ts-user"}},
            {"ts-ui", {"ts-ui", "ts-travel", "ts-basic", "ts-order", "ts-notify"}}}},
          {"preserve_successfully",
           {{"ts-ui", {"ts-ui", "ts-travel", "ts-basic", "ts-order", "ts-seat",
                       "ts-basic", "ts-price"}}}},
      };
    case Preset::trainticket_full:
      return {
          {"admin_operations",
           {{"ts-ui-dashboard", {"ts-ui-dashboard", "ts-admin-basic-info-service",
                                 "ts-admin-route-service"}},
            {"ts-ui-dashboard", {"ts-ui-dashboard", "ts-admin-basic-info-service",
                                 "ts-admin-travel-service"}},
            {"ts-ui-dashboard", {"ts-ui-dashboard", "ts-admin-basic-info-service",
                                 "ts-admin-user-service"}}}},
          {"normal_flow",
           {{"ts-ui-dashboard", {"ts-ui-dashboard", "ts-auth-service",
                                 "ts-verification-code-service"}},
            {"ts-ui-dashboard",
             {"ts-ui-dashboard", "ts-travel-service", "ts-ticketinfo-service",
              "ts-basic-service", "ts-order-service", "ts-seat-service"}},
            {"ts-ui-dashboard", {"ts-ui-dashboard", "ts-inside-payment-service",
                                 "ts-payment-service"}}}},
          {"rebook_flow",
           {{"ts-ui-dashboard", {"ts-ui-dashboard", "ts-rebook-service",
                                 "ts-order-service", "ts-seat-service",
                                 "ts-basic-service", "ts-price-service"}},
            {"ts-ui-dashboard", {"ts-ui-dashboard", "ts-rebook-service",
                                 "ts-travel2-service"}}}},
          {"rebook_fail_flow",
           {{"ts-ui-dashboard", {"ts-ui-dashboard", "ts-rebook-service",
                                 "ts-cancel-service"}},
            {"ts-ui-dashboard", {"ts-ui-dashboard", "ts-rebook-service",
                                 "ts-order-service", "ts-notification-service"}}}},
          {"search_fail_to_add",
           {{"ts-ui-dashboard", {"ts-ui-dashboard", "ts-travel-service",
                                 "ts-route-service"}},
            {"ts-ui-dashboard", {"ts-ui-dashboard", "ts-admin-basic-info-service",
                                 "ts-admin-route-service"}},
            {"ts-ui-dashboard",
             {"ts-ui-dashboard", "ts-travel-service", "ts-ticketinfo-service",
              "ts-basic-service", "ts-station-service"}}}},
          {"consign_preserve",
           {{"ts-ui-dashboard", {"ts-ui-dashboard", "ts-consign-service",
                                 "ts-consign-price-service"}},
            {"ts-ui-dashboard", {"ts-ui-dashboard", "ts-preserve-service",
                                 "ts-food-service", "ts-food-map-service"}}}},
          {"preserve_successfully",
           {{"ts-ui-dashboard", {"ts-ui-dashboard", "ts-preserve-service",
                                 "ts-ticketinfo-service", "ts-basic-service",
                                 "ts-order-service", "ts-seat-service"}},
            {"ts-ui-dashboard", {"ts-ui-dashboard", "ts-preserve-service",
                                 "ts-security-service"}}}},
      };
  }
  throw std::invalid_argument("unknown preset");
}

std::pair<std::vector<CallSpan>, std::vector<MetricSeries>> run_workload(
    const SimConfig& config, const Topology& topology) {
  if (config.users < 1) throw std::invalid_argument("config error: users must be >= 1");
  if (config.duration <= 0)
    throw std::invalid_argument("config error: duration must be > 0");
  if (config.noise_level < 0)
    throw std::invalid_argument("config error: noise_level must be >= 0");

  auto processes = preset_processes(config.preset);
  std::set<std::pair<std::string, std::string>> edge_set(topology.edges.begin(),
                                                         topology.edges.end());
  for (const auto& p : processes) {
    for (const auto& step : p.steps) {
      if (!topology.has_node(step.entry))
        throw std::invalid_argument("config error: process " + p.name +
                                    " references unknown node " + step.entry);
      for (std::size_t i = 0; i + 1 < step.subpath.size(); ++i) {
        if (!edge_set.count({step.subpath[i], step.subpath[i + 1]}))
          throw std::invalid_argument("config error: process " + p.name +
                                      " walks missing edge " + step.subpath[i] +
                                      "->" + step.subpath[i + 1]);
      }
    }
  }

  const std::int64_t ticks = std::max<std::int64_t>(1, config.duration / kTickMs);
  std::vector<CallSpan> spans;

  for (int user = 0; user < config.users; ++user) {
    Rng rng(mix(config.seed, 0x75736572ULL + static_cast<std::uint64_t>(user)));
    for (std::int64_t tick = 0; tick < ticks; ++tick) {
      const auto& proc = processes[rng.uniform_int(processes.size())];
      TimestampMs t = tick * kTickMs + static_cast<TimestampMs>(rng.uniform_int(400));
      std::string trace_id = "t" + std::to_string(user) + "_" + std::to_string(tick);
      int span_seq = 0;
      for (const auto& step : proc.steps) {
        // Bottom-up durations so parents cover their children.
        const auto& path = step.subpath;
        if (path.size() < 2) continue;
        std::vector<DurationMs> durs(path.size() - 1, 0);
        for (std::size_t i = path.size() - 1; i-- > 0;) {
          double base = baseline_of(path[i + 1]).latency_ms;
          DurationMs own =
              static_cast<DurationMs>(base) + static_cast<DurationMs>(rng.uniform_int(10));
          durs[i] = own + (i + 1 < durs.size() ? durs[i + 1] : 0);
        }
        std::optional<std::string> parent;
        TimestampMs st = t;
        for (std::size_t i = 0; i + 1 < path.size(); ++i) {
          CallSpan s;
          s.trace_id = trace_id;
          s.span_id = "s" + std::to_string(span_seq++);
          s.parent_span_id = parent;
          s.caller = path[i];
          s.callee = path[i + 1];
          s.start = st;
          s.duration = durs[i];
          s.status = SpanStatus::ok;
          s.http_code = 200;
          parent = s.span_id;
          spans.push_back(std::move(s));
          st += 1;
        }
        t += durs[0] + 5;
      }
    }
  }

  std::sort(spans.begin(), spans.end(), [](const CallSpan& a, const CallSpan& b) {
    return std::tie(a.start, a.trace_id, a.span_id) <
           std::tie(b.start, b.trace_id, b.span_id);
  });

  // Per-node traffic counts per tick, from the spans just generated.
  std::map<std::string, std::vector<double>> traffic;
  std::vector<std::string> node_ids;
  for (const auto& n : topology.nodes) {
    node_ids.push_back(n.id);
    traffic[n.id].assign(static_cast<std::size_t>(ticks), 0.0);
  }
  for (const auto& s : spans) {
    std::int64_t tick = s.start / kTickMs;
    if (tick >= 0 && tick < ticks) traffic[s.callee][static_cast<std::size_t>(tick)] += 1.0;
  }

  std::vector<MetricSeries> metrics;
  std::sort(node_ids.begin(), node_ids.end());
  for (const auto& id : node_ids) {
    Baseline b = baseline_of(id);
    Rng noise(mix(config.seed, hash_str(id)));
    MetricSeries lat{id, MetricKind::latency_ms, {}};
    MetricSeries tra{id, MetricKind::traffic_rps, {}};
    MetricSeries err{id, MetricKind::error_rate, {}};
    MetricSeries cpu{id, MetricKind::cpu_util, {}};
    MetricSeries mem{id, MetricKind::mem_util, {}};
    MetricSeries io{id, MetricKind::io_latency_ms, {}};
    for (std::int64_t tick = 0; tick < ticks; ++tick) {
      TimestampMs ts = tick * kTickMs;
      double n1 = config.noise_level > 0 ? config.noise_level * noise.normal() : 0.0;
      double n2 = config.noise_level > 0 ? config.noise_level * noise.normal() : 0.0;
      lat.points.emplace_back(ts, b.latency_ms * (1.0 + 0.05 * n1));
      tra.points.emplace_back(ts, traffic[id][static_cast<std::size_t>(tick)]);
      err.points.emplace_back(ts, std::clamp(0.001 * std::abs(n2), 0.0, 1.0));
      cpu.points.emplace_back(ts, std::clamp(b.cpu_util * (1.0 + 0.05 * n1), 0.0, 1.0));
      mem.points.emplace_back(ts, std::clamp(b.mem_util * (1.0 + 0.05 * n2), 0.0, 1.0));
      io.points.emplace_back(ts, b.io_latency_ms * (1.0 + 0.05 * std::abs(n1)));
    }
    for (auto& m : {&lat, &tra, &err, &cpu, &mem, &io}) metrics.push_back(*m);
  }

  return {std::move(spans), std::move(metrics)};
}

namespace {

struct Propagated {
  double scale;                 // attenuation factor, 1.0 at the target
  std::vector<std::string> path;  // target first, this node last
};

// Reverse-edge BFS from the fault target: a fault in a callee degrades its
// callers. Each node is visited at most once per fault, so cyclic
// dependencies terminate.
std::map<std::string, Propagated> propagation_front(const Topology& topology,
                                                    const std::string& target,
                                                    double magnitude) {
  std::map<std::string, Propagated> out;
  out[target] = {1.0, {target}};
  std::deque<std::string> queue{target};
  while (!queue.empty()) {
    std::string node = queue.front();
    queue.pop_front();
    double child_scale = out[node].scale * kHopAttenuation;
    if (magnitude * child_scale < kPropagationFloor) continue;
    for (const auto& caller : topology.callers_of(node)) {
      if (out.count(caller)) continue;
      Propagated p;
      p.scale = child_scale;
      p.path = out[node].path;
      p.path.push_back(caller);
      out[caller] = std::move(p);
      queue.push_back(caller);
    }
  }
  return out;
}

double error_bump(FaultCategory cat) {
  switch (cat) {
    case FaultCategory::Code: return 0.5;
    case FaultCategory::Network: return 0.05;
    default: return 0.0;
  }
}

}  // namespace

InjectionResult inject_faults(const SimConfig& config, const Topology& topology,
                              std::vector<CallSpan> spans,
                              std::vector<MetricSeries> metrics,
                              const Thresholds& thresholds) {
  for (const auto& f : config.faults) {
    if (!topology.has_node(f.target))
      throw std::invalid_argument("injection error: unknown target node " + f.target);
    if (f.window_start >= f.window_end)
      throw std::invalid_argument("injection error: fault window start >= end");
    if (category_of(f.fault_case) != f.category)
      throw std::invalid_argument("injection error: fault case inconsistent with category");
  }

  // Baseline means before any disturbance, used for relative thresholds.
  std::map<std::pair<std::string, MetricKind>, double> baseline_mean;
  std::map<std::pair<std::string, MetricKind>, MetricSeries*> by_key;
  for (auto& m : metrics) {
    double sum = 0;
    for (const auto& [t, v] : m.points) sum += v;
    baseline_mean[{m.node, m.metric}] = m.points.empty() ? 0.0 : sum / m.points.size();
    by_key[{m.node, m.metric}] = &m;
  }

  InjectionResult result;
  int alert_counter = 0;

  for (std::size_t fi = 0; fi < config.faults.size(); ++fi) {
    const FaultSpec& f = config.faults[fi];
    if (f.magnitude == 0.0) continue;
    auto front = propagation_front(topology, f.target, f.magnitude);

    auto in_window = [&](TimestampMs t) {
      return t >= f.window_start && t < f.window_end;
    };

    for (const auto& [node, prop] : front) {
      bool at_target = node == f.target;
      double ms = f.magnitude * prop.scale;
      auto disturb = [&](MetricKind kind, auto&& fn) {
        auto it = by_key.find({node, kind});
        if (it == by_key.end()) return;
        for (auto& [t, v] : it->second->points) {
          if (in_window(t)) v = fn(t, v);
        }
      };

      double lat_factor = 2.0 * ms;
      if (at_target) {
        switch (f.category) {
          case FaultCategory::Network: lat_factor = 2.5 * f.magnitude; break;
          case FaultCategory::Storage:
          case FaultCategory::CPU: lat_factor = f.magnitude; break;
          case FaultCategory::Memory: lat_factor = 2.0 * f.magnitude; break;
          case FaultCategory::Code: lat_factor = 0.0; break;
        }
      }
      if (at_target && f.category == FaultCategory::Memory) {
        // full-GC pauses: latency spikes on alternating ticks
        disturb(MetricKind::latency_ms, [&](TimestampMs t, double v) {
          return (t / kTickMs) % 2 == 0 ? v * (1.0 + lat_factor) : v;
        });
      } else if (lat_factor > 0) {
        disturb(MetricKind::latency_ms,
                [&](TimestampMs, double v) { return v * (1.0 + lat_factor); });
      }

      double eb = error_bump(f.category) * ms;
      if (eb > 0)
        disturb(MetricKind::error_rate,
                [&](TimestampMs, double v) { return std::clamp(v + eb, 0.0, 1.0); });

      if (at_target) {
        switch (f.category) {
          case FaultCategory::Storage:
            disturb(MetricKind::io_latency_ms, [&](TimestampMs, double v) {
              return v * (1.0 + 3.0 * f.magnitude);
            });
            break;
          case FaultCategory::CPU:
            disturb(MetricKind::cpu_util, [&](TimestampMs, double v) {
              return std::clamp(v + 0.6 * f.magnitude, 0.0, 1.0);
            });
            break;
          case FaultCategory::Memory:
            disturb(MetricKind::mem_util, [&](TimestampMs, double v) {
              return std::clamp(v + 0.6 * f.magnitude, 0.0, 1.0);
            });
            break;
          default:
            break;
        }
      }
    }

    // Error-status spans at the target for code faults.
    if (f.category == FaultCategory::Code) {
      double frac = std::min(0.9, 0.5 * f.magnitude);
      for (auto& s : spans) {
        if (s.callee != f.target || !in_window(s.start)) continue;
        if (static_cast<double>(hash_str(s.span_id + s.trace_id) % 1000) <
            frac * 1000.0) {
          s.status = SpanStatus::error;
          s.http_code = 500;
        }
      }
    }

    // Threshold crossings on the disturbed front.
    struct Crossing {
      TimestampMs at;
      MetricKind metric;
      double ratio;  // crossing magnitude relative to its threshold
    };
    std::map<std::string, Crossing> crossed;
    for (const auto& [node, prop] : front) {
      std::optional<Crossing> best;
      for (MetricKind kind :
           {MetricKind::latency_ms, MetricKind::error_rate, MetricKind::cpu_util,
            MetricKind::mem_util, MetricKind::io_latency_ms}) {
        auto it = by_key.find({node, kind});
        if (it == by_key.end()) continue;
        double threshold;
        switch (kind) {
          case MetricKind::latency_ms:
          case MetricKind::io_latency_ms:
            threshold = thresholds.latency_baseline_factor * baseline_mean[{node, kind}];
            break;
          case MetricKind::error_rate:
            threshold = thresholds.error_rate;
            break;
          default:
            threshold = thresholds.utilization;
        }
        if (threshold <= 0) continue;
        for (const auto& [t, v] : it->second->points) {
          if (!in_window(t) || v <= threshold) continue;
          Crossing c{t, kind, v / threshold};
          if (!best || c.at < best->at || (c.at == best->at && c.ratio > best->ratio))
            best = c;
          break;  // first crossing per metric is enough
        }
      }
      if (best) crossed[node] = *best;
    }

    // scope: alerted nodes further up the propagation tree that pass
    // through this node.
    for (const auto& [node, crossing] : crossed) {
      int scope = 0;
      for (const auto& [other, oc] : crossed) {
        if (other == node) continue;
        const auto& path = front.at(other).path;
        if (std::find(path.begin(), path.end(), node) != path.end()) ++scope;
      }

      AlertEvent alert;
      char buf[16];
      std::snprintf(buf, sizeof buf, "alert_%04d", alert_counter++);
      alert.id = buf;
      alert.node = node;
      alert.kind = alert_kind(f.category);
      alert.raised_at = crossing.at;
      alert.severity = crossing.ratio >= 1.5 ? Severity::critical : Severity::warning;
      alert.scope = scope;
      alert.description = alert.kind + " anomaly on " + node + ": " +
                          metric_name(crossing.metric) + " crossed threshold";
      result.alerts.push_back(alert);

      GroundTruth gt;
      gt.alert_id = alert.id;
      gt.root_nodes = {f.target};
      gt.propagation_paths = {front.at(node).path};
      json catj = f.category;
      gt.injected_fault.category = catj.get<std::string>();
      json cj = f.fault_case;
      gt.injected_fault.fault_case = cj.get<std::string>();
      gt.injected_fault.target = f.target;
      gt.injected_fault.metric = metric_name(primary_metric(f.category));
      result.ground_truth.push_back(gt);
    }
  }

  result.spans = std::move(spans);
  result.metrics = std::move(metrics);
  return result;
}

Dataset simulate(const SimConfig& config, const Thresholds& thresholds) {
  Dataset ds;
  ds.topology = build_topology(config.preset, config.seed);
  auto [spans, metrics] = run_workload(config, ds.topology);
  auto injected =
      inject_faults(config, ds.topology, std::move(spans), std::move(metrics), thresholds);
  ds.spans = std::move(injected.spans);
  ds.metrics = std::move(injected.metrics);
  ds.alerts = std::move(injected.alerts);
  ds.ground_truth = std::move(injected.ground_truth);
  return ds;
}

}  // namespace arca
