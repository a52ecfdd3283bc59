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

#include <array>
#include <string>

#include <json.hpp>

namespace arca {

// The seven members of the agent chain, one instance each per pipeline.
enum class AgentRole {
  AlertReceiver,
  ProcessScheduler,
  DataDetective,
  DependencyExplorer,
  ProbabilityOracle,
  FaultMapper,
  SolutionEngineer
};

NLOHMANN_JSON_SERIALIZE_ENUM(
    AgentRole, {{AgentRole::AlertReceiver, "AlertReceiver"},
                {AgentRole::ProcessScheduler, "ProcessScheduler"},
                {AgentRole::DataDetective, "DataDetective"},
                {AgentRole::DependencyExplorer, "DependencyExplorer"},
                {AgentRole::ProbabilityOracle, "ProbabilityOracle"},
                {AgentRole::FaultMapper, "FaultMapper"},
                {AgentRole::SolutionEngineer, "SolutionEngineer"}})

inline constexpr std::array<AgentRole, 7> kAllRoles = {
    AgentRole::AlertReceiver,     AgentRole::ProcessScheduler,
    AgentRole::DataDetective,     AgentRole::DependencyExplorer,
    AgentRole::ProbabilityOracle, AgentRole::FaultMapper,
    AgentRole::SolutionEngineer};

std::string role_name(AgentRole r);

}  // namespace arca
