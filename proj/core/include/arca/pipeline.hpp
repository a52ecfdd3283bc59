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
#include "arca/backends.hpp"
#include "arca/voting.hpp"

namespace arca {

struct PipelineOptions {
  BackendMode mode = BackendMode::heuristic;
  std::string external_endpoint;
  AgentConfig agent;
  VotingConfig voting;
  int theta = 15;
  bool voting_enabled = true;
  // Ablation switches.
  bool single_agent = false;  // no chain, one data probe, alert node blamed
  bool direct_only = false;   // no tool loop at all, node-level answer
};

struct PipelineResult {
  std::vector<RCAReport> reports;  // priority order
  std::vector<Trajectory> trajectories;
  std::vector<LedgerBlock> ledger;
  WeightTable weights;
};

// Topic ownership on the agent chain.
AgentRole topic_owner(Topic t);

// Heuristic-mode answer inspection shared by challenge and ballot logic.
Validator make_chain_validator(const Dataset& ds);

// Processes every alert in priority order through the seven-agent loop.
PipelineResult run_pipeline(const Dataset& ds, const PipelineOptions& options);

// One alert end to end; exposed for targeted tests.
RCAReport schedule_alert(const Dataset& ds, const AlertEvent& alert,
                         PolicyBackend& backend, const ToolRegistry& tools,
                         VotingChain* chain, const PipelineOptions& options,
                         std::vector<Trajectory>& trajectories_out);

}  // namespace arca
