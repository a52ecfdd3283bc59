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

#include "arca/pipeline.hpp"

namespace arca {

struct EvalConfig {
  double sigma = 0.1;  // redundant-cause penalty
  double tau = 0.2;    // wrong-path penalty
  int theta = 15;      // trajectory step cap
  int max_causes = 4;
};

struct EvalRow {
  std::string alert_id;
  int a_c = 0, a_i = 0, a_t = 0;  // cause counts
  int p_c = 0, p_i = 0, p_t = 0;  // path counts
};

void to_json(json& j, const EvalRow& v);
void from_json(const json& j, EvalRow& v);

struct EvalReport {
  std::vector<EvalRow> rows;
  double ra = 0;
  double pa = 0;
  double pr = 0;
  std::optional<double> apl;  // undefined when no trajectory succeeds
  int trajectories_total = 0;
  int trajectories_completed = 0;
};

void to_json(json& j, const EvalReport& v);
void from_json(const json& j, EvalReport& v);

using Predictions = std::map<std::string, std::vector<RootCause>>;
using PredictedPaths = std::map<std::string, std::vector<std::vector<std::string>>>;
using TruthMap = std::map<std::string, GroundTruth>;

// RA = (A_c - sigma * A_i) / A_t over corpus-level totals; may be negative.
double compute_ra(const Predictions& predicted, const TruthMap& truth, double sigma,
                  std::vector<EvalRow>* rows = nullptr);

// PA = (P_c - tau * P_i) / P_t; a path is correct only on exact sequence match.
double compute_pa(const PredictedPaths& predicted, const TruthMap& truth, double tau,
                  std::vector<EvalRow>* rows = nullptr);

struct PrApl {
  double pr = 0;
  std::optional<double> apl;
  int total = 0;
  int completed = 0;
};

PrApl compute_pr_apl(const std::vector<Trajectory>& trajectories, int theta);

// Full pipeline per alert plus all four metrics; refuses datasets without
// ground truth.
EvalReport benchmark(const Dataset& ds, const PipelineOptions& options,
                     const EvalConfig& eval = {});

std::string render_report_markdown(const EvalReport& report);

// Ablation comparison: full system vs voting off, single agent, direct only.
json ablation_report(const std::vector<Dataset>& datasets,
                     const PipelineOptions& base, const EvalConfig& eval = {});

}  // namespace arca
