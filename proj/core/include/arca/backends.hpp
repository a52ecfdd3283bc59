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

#include <memory>

#include "arca/agents.hpp"
#include "arca/dataset.hpp"
#include "arca/runtime.hpp"

namespace arca {

// The shared tool surface over a loaded dataset. The ground-truth lookup is
// registered only for oracle runs.
ToolRegistry make_dataset_tools(const Dataset& ds, const AgentConfig& cfg,
                                bool with_ground_truth);

// Rule-based backend: every topic is answered by a deterministic per-agent
// procedure, so the whole system runs offline.
class HeuristicBackend : public PolicyBackend {
 public:
  HeuristicBackend(const Dataset& ds, AgentConfig cfg, std::vector<CaseRecord> cases)
      : ds_(&ds), cfg_(cfg), cases_(std::move(cases)) {}

  BackendMode mode() const override { return BackendMode::heuristic; }
  StepDecision step(const Question& q, const Trajectory& so_far,
                    const ToolRegistry& tools) override;

 protected:
  const Dataset* ds_;
  AgentConfig cfg_;
  std::vector<CaseRecord> cases_;

  StepDecision direct_topics(const Question& q);
  virtual StepDecision react_step(const Question& q, const Trajectory& so_far);
};

// Test-only policy that reads the dataset's ground truth; refuses to run
// without labels.
class OracleBackend : public HeuristicBackend {
 public:
  OracleBackend(const Dataset& ds, AgentConfig cfg, std::vector<CaseRecord> cases);

  BackendMode mode() const override { return BackendMode::oracle; }

 protected:
  StepDecision react_step(const Question& q, const Trajectory& so_far) override;
};

// Completion-service policy: POST /v1/agent-step per step, 30 s timeout,
// 2 retries with exponential backoff.
class ExternalBackend : public PolicyBackend {
 public:
  explicit ExternalBackend(std::string endpoint, int timeout_seconds = 30,
                           int retries = 2)
      : endpoint_(std::move(endpoint)), timeout_seconds_(timeout_seconds),
        retries_(retries) {}

  BackendMode mode() const override { return BackendMode::external; }
  StepDecision step(const Question& q, const Trajectory& so_far,
                    const ToolRegistry& tools) override;

 private:
  std::string endpoint_;
  int timeout_seconds_;
  int retries_;
};

std::unique_ptr<PolicyBackend> make_backend(BackendMode mode, const Dataset& ds,
                                            const AgentConfig& cfg,
                                            std::vector<CaseRecord> cases,
                                            const std::string& endpoint = "");

}  // namespace arca
