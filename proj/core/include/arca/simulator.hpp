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
#include <string>
#include <vector>

#include "arca/dataset.hpp"
#include "arca/types.hpp"

namespace arca {

enum class FaultCategory { Network, Storage, CPU, Memory, Code };

enum class FaultCase {
  high_packet_loss,
  high_retransmission,
  dns_failure,
  bandwidth_saturation,
  tcp_setup_delay,
  high_io_latency,
  code_cpu_high,
  cpu_contention,
  full_gc_storm,
  memory_contention,
  error_code_throw,
  http_error_return
};

NLOHMANN_JSON_SERIALIZE_ENUM(FaultCategory, {{FaultCategory::Network, "Network"},
                                             {FaultCategory::Storage, "Storage"},
                                             {FaultCategory::CPU, "CPU"},
                                             {FaultCategory::Memory, "Memory"},
                                             {FaultCategory::Code, "Code"}})

NLOHMANN_JSON_SERIALIZE_ENUM(
    FaultCase, {{FaultCase::high_packet_loss, "high_packet_loss"},
                {FaultCase::high_retransmission, "high_retransmission"},
                {FaultCase::dns_failure, "dns_failure"},
                {FaultCase::bandwidth_saturation, "bandwidth_saturation"},
                {FaultCase::tcp_setup_delay, "tcp_setup_delay"},
                {FaultCase::high_io_latency, "high_io_latency"},
                {FaultCase::code_cpu_high, "code_cpu_high"},
                {FaultCase::cpu_contention, "cpu_contention"},
                {FaultCase::full_gc_storm, "full_gc_storm"},
                {FaultCase::memory_contention, "memory_contention"},
                {FaultCase::error_code_throw, "error_code_throw"},
                {FaultCase::http_error_return, "http_error_return"}})

FaultCategory category_of(FaultCase c);

// Metric the fault primarily disturbs at its target.
MetricKind primary_metric(FaultCategory c);

// Alert kind string a fault category surfaces as.
std::string alert_kind(FaultCategory c);

struct FaultSpec {
  FaultCategory category = FaultCategory::Code;
  FaultCase fault_case = FaultCase::error_code_throw;
  std::string target;
  TimestampMs window_start = 0;
  TimestampMs window_end = 0;
  // Multiplier on the baseline metric disturbance.
  double magnitude = 1.0;

  bool operator==(const FaultSpec&) const = default;
};

struct WorkloadStep {
  std::string entry;
  std::vector<std::string> subpath;  // starts at entry

  bool operator==(const WorkloadStep&) const = default;
};

struct WorkloadProcess {
  std::string name;
  std::vector<WorkloadStep> steps;

  bool operator==(const WorkloadProcess&) const = default;
};

enum class Preset { figure1, trainticket_small, trainticket_full };

NLOHMANN_JSON_SERIALIZE_ENUM(Preset,
                             {{Preset::figure1, "figure1"},
                              {Preset::trainticket_small, "trainticket_small"},
                              {Preset::trainticket_full, "trainticket_full"}})

struct SimConfig {
  Preset preset = Preset::figure1;
  int users = 100;
  DurationMs duration = 60'000;
  std::uint64_t seed = 0;
  double noise_level = 0.0;
  std::vector<FaultSpec> faults;

  bool operator==(const SimConfig&) const = default;
};

void to_json(json& j, const FaultSpec& v);
void from_json(const json& j, FaultSpec& v);
void to_json(json& j, const SimConfig& v);
void from_json(const json& j, SimConfig& v);

// Deterministic per (preset, seed).
Topology build_topology(Preset preset, std::uint64_t seed);

std::vector<WorkloadProcess> preset_processes(Preset preset);

// Alert thresholds. Latency and io-latency are relative to the node's
// baseline mean; rates and utilizations are absolute.
struct Thresholds {
  double latency_baseline_factor = 3.0;
  double error_rate = 0.05;
  double utilization = 0.9;
};

// Validates config and generates baseline traffic + metrics.
std::pair<std::vector<CallSpan>, std::vector<MetricSeries>> run_workload(
    const SimConfig& config, const Topology& topology);

struct InjectionResult {
  std::vector<CallSpan> spans;
  std::vector<MetricSeries> metrics;
  std::vector<GroundTruth> ground_truth;
  std::vector<AlertEvent> alerts;
};

// Applies every fault: disturbs the target's metrics per category,
// propagates the disturbance along reverse call edges with per-hop
// attenuation 0.6, fires alerts on threshold crossings, and labels each
// alert with the injected root and its propagation path.
InjectionResult inject_faults(const SimConfig& config, const Topology& topology,
                              std::vector<CallSpan> spans,
                              std::vector<MetricSeries> metrics,
                              const Thresholds& thresholds = {});

// Full pipeline: build, generate, inject. Deterministic per config.
Dataset simulate(const SimConfig& config, const Thresholds& thresholds = {});

inline constexpr DurationMs kTickMs = 1000;
inline constexpr double kHopAttenuation = 0.6;
inline constexpr double kPropagationFloor = 0.1;

}  // namespace arca
