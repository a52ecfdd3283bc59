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

#include <filesystem>
#include <string>
#include <vector>

#include "arca/types.hpp"

namespace arca {

// Canonical dataset directory layout:
//   topology.json, spans.jsonl, metrics.jsonl, alerts.jsonl, ground_truth.jsonl
struct Dataset {
  Topology topology;
  std::vector<CallSpan> spans;
  std::vector<MetricSeries> metrics;
  std::vector<AlertEvent> alerts;
  std::vector<GroundTruth> ground_truth;

  bool operator==(const Dataset&) const = default;

  bool has_ground_truth() const { return !ground_truth.empty(); }
  const GroundTruth* truth_for(const std::string& alert_id) const;
  const MetricSeries* series_for(const std::string& node, MetricKind metric) const;
  std::vector<const MetricSeries*> series_of(const std::string& node) const;
  std::pair<TimestampMs, TimestampMs> time_range() const;
};

std::string sha256_hex(const std::string& bytes);

// Writes the canonical layout plus manifest.json (tool version, config echo,
// per-file sha256). Returns the manifest.
json save_dataset(const Dataset& ds, const std::filesystem::path& dir,
                  const json& config_echo = json::object());

Dataset load_dataset(const std::filesystem::path& dir);

}  // namespace arca
