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

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "arca/roles.hpp"
#include "arca/types.hpp"

namespace arca {

enum class Topic {
  priority,
  subtask,
  data,
  dependency,
  probability,
  faultweb,
  rootcause
};

NLOHMANN_JSON_SERIALIZE_ENUM(Topic, {{Topic::priority, "priority"},
                                     {Topic::subtask, "subtask"},
                                     {Topic::data, "data"},
                                     {Topic::dependency, "dependency"},
                                     {Topic::probability, "probability"},
                                     {Topic::faultweb, "faultweb"},
                                     {Topic::rootcause, "rootcause"}})

struct Question {
  std::string id;
  AgentRole asker = AgentRole::ProcessScheduler;
  Topic topic = Topic::data;
  json payload;
  std::vector<std::string> context;  // prior Q/A ids
};

void to_json(json& j, const Question& v);
void from_json(const json& j, Question& v);

struct Answer {
  std::string question_id;
  AgentRole responder = AgentRole::DataDetective;
  json body;
  double confidence = 1.0;

  bool operator==(const Answer&) const = default;
};

void to_json(json& j, const Answer& v);
void from_json(const json& j, Answer& v);

struct TrajectoryStep {
  std::string thought;
  std::string action_tool;
  json action_args;
  std::string observation;
};

void to_json(json& j, const TrajectoryStep& v);
void from_json(const json& j, TrajectoryStep& v);

struct Trajectory {
  std::string question_id;
  std::vector<TrajectoryStep> steps;
  bool completed = false;
  std::optional<Answer> final_answer;
};

void to_json(json& j, const Trajectory& v);
void from_json(const json& j, Trajectory& v);

// Missing payload fields make a Question invalid; returns a description of
// the first problem, or nullopt when well-formed.
std::optional<std::string> validate_question(const Question& q);

// Answer body must match its question topic's schema.
std::optional<std::string> validate_answer_body(Topic topic, const json& body);

enum class Route { direct, react };

// Static topic -> route table; topics that need tool data go through the
// bounded loop, pure ranking/formatting is answered directly.
Route assess_complexity(const Question& q);

class ToolRegistry {
 public:
  using Handler = std::function<json(const json& args)>;

  // schema: map of required argument name -> json type name
  // ("string"|"number"|"integer"|"array"|"object"|"boolean")
  void register_tool(const std::string& name, json schema, Handler handler);

  bool has(const std::string& name) const { return tools_.count(name) > 0; }
  std::vector<std::pair<std::string, json>> list() const;

  // Never throws: failures come back as {"error": ...} observations so the
  // loop can continue.
  json call(const std::string& name, const json& args) const;

 private:
  struct Tool {
    json schema;
    Handler handler;
  };
  std::map<std::string, Tool> tools_;
};

struct ToolCall {
  std::string tool;
  json args;
};

struct FinalAnswer {
  json body;
  double confidence = 1.0;
};

// One backend step: either take an action or finalize.
struct StepDecision {
  std::string thought;
  std::optional<ToolCall> action;
  std::optional<FinalAnswer> final;
};

enum class BackendMode { oracle, heuristic, external };

class PolicyBackend {
 public:
  virtual ~PolicyBackend() = default;
  virtual BackendMode mode() const = 0;
  virtual StepDecision step(const Question& q, const Trajectory& so_far,
                            const ToolRegistry& tools) = 0;
};

struct ReactResult {
  std::optional<Answer> answer;  // nullopt on step-budget timeout
  Trajectory trajectory;
};

// Bounded thought/action/observation loop; at most theta steps.
ReactResult run_react(const Question& q, const ToolRegistry& tools,
                      PolicyBackend& backend, int theta);

// Single backend invocation, no tool calls.
Answer direct_answer(const Question& q, PolicyBackend& backend);

}  // namespace arca
