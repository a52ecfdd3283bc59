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

#include "arca/runtime.hpp"

#include <stdexcept>

namespace arca {

std::string role_name(AgentRole r) {
  json j = r;
  return j.get<std::string>();
}

void to_json(json& j, const Question& v) {
  j = json{{"id", v.id},       {"asker", v.asker},     {"topic", v.topic},
           {"payload", v.payload}, {"context", v.context}};
}

void from_json(const json& j, Question& v) {
  j.at("id").get_to(v.id);
  j.at("asker").get_to(v.asker);
  j.at("topic").get_to(v.topic);
  v.payload = j.value("payload", json::object());
  v.context = j.value("context", std::vector<std::string>{});
}

void to_json(json& j, const Answer& v) {
  j = json{{"question_id", v.question_id},
           {"responder", v.responder},
           {"body", v.body},
           {"confidence", v.confidence}};
}

void from_json(const json& j, Answer& v) {
  j.at("question_id").get_to(v.question_id);
  j.at("responder").get_to(v.responder);
  v.body = j.at("body");
  j.at("confidence").get_to(v.confidence);
}

void to_json(json& j, const TrajectoryStep& v) {
  j = json{{"thought", v.thought},
           {"action", {{"tool", v.action_tool}, {"args", v.action_args}}},
           {"observation", v.observation}};
}

void from_json(const json& j, TrajectoryStep& v) {
  j.at("thought").get_to(v.thought);
  j.at("action").at("tool").get_to(v.action_tool);
  v.action_args = j.at("action").at("args");
  j.at("observation").get_to(v.observation);
}

void to_json(json& j, const Trajectory& v) {
  j = json{{"question_id", v.question_id},
           {"steps", v.steps},
           {"completed", v.completed}};
  if (v.final_answer) j["final_answer"] = *v.final_answer;
}

void from_json(const json& j, Trajectory& v) {
  j.at("question_id").get_to(v.question_id);
  j.at("steps").get_to(v.steps);
  j.at("completed").get_to(v.completed);
  v.final_answer.reset();
  if (j.contains("final_answer")) v.final_answer = j.at("final_answer").get<Answer>();
}

namespace {

const std::map<Topic, std::vector<std::string>>& required_payload_fields() {
  static const std::map<Topic, std::vector<std::string>> fields = {
      {Topic::priority, {"alerts"}},
      {Topic::subtask, {"alert_id"}},
      {Topic::data, {"node", "from", "to"}},
      {Topic::dependency, {"node", "from", "to"}},
      {Topic::probability, {"nodes", "alert_node", "from", "to"}},
      {Topic::faultweb, {"web", "probabilities"}},
      {Topic::rootcause, {"alert_id", "alert_node", "web", "has_data"}},
  };
  return fields;
}

}  // namespace

std::optional<std::string> validate_question(const Question& q) {
  auto it = required_payload_fields().find(q.topic);
  if (it == required_payload_fields().end()) return "unknown topic";
  for (const auto& field : it->second) {
    if (!q.payload.contains(field))
      return "topic " + json(q.topic).get<std::string>() +
             " requires payload field " + field;
  }
  return std::nullopt;
}

std::optional<std::string> validate_answer_body(Topic topic, const json& body) {
  if (!body.is_object()) return "answer body must be an object";
  auto need = [&](const char* field,
                  bool (json::*pred)() const) -> std::optional<std::string> {
    if (!body.contains(field) || !(body.at(field).*pred)())
      return std::string("missing or mistyped answer field ") + field;
    return std::nullopt;
  };
  switch (topic) {
    case Topic::priority:
      return need("ordered_alert_ids", &json::is_array);
    case Topic::subtask:
      return need("subtask", &json::is_string);
    case Topic::data:
      return need("report", &json::is_object);
    case Topic::dependency:
      if (auto e = need("direct", &json::is_array)) return e;
      return need("indirect", &json::is_array);
    case Topic::probability: {
      if (auto e = need("probabilities", &json::is_object)) return e;
      for (const auto& [node, p] : body.at("probabilities").items()) {
        if (!p.is_number() || p.get<double>() < 0.0 || p.get<double>() > 1.0)
          return "probability for " + node + " outside [0,1]";
      }
      return std::nullopt;
    }
    case Topic::faultweb:
      return need("web", &json::is_object);
    case Topic::rootcause: {
      if (auto e = need("root_causes", &json::is_array)) return e;
      if (auto e = need("paths", &json::is_array)) return e;
      auto n = body.at("root_causes").size();
      if (n < 1 || n > 4) return "root_causes must contain 1..4 entries";
      return std::nullopt;
    }
  }
  return "unknown topic";
}

Route assess_complexity(const Question& q) {
  switch (q.topic) {
    case Topic::priority:
    case Topic::subtask:
      return Route::direct;
    case Topic::data:
    case Topic::dependency:
    case Topic::probability:
    case Topic::faultweb:
      return Route::react;
    case Topic::rootcause:
      // Metric-level analysis needs tool data; node-level ranking does not.
      return q.payload.value("has_data", false) ? Route::react : Route::direct;
  }
  throw std::invalid_argument("routing error: unknown topic");
}

void ToolRegistry::register_tool(const std::string& name, json schema,
                                 Handler handler) {
  if (tools_.count(name))
    throw std::invalid_argument("registration error: duplicate tool " + name);
  tools_[name] = Tool{std::move(schema), std::move(handler)};
}

std::vector<std::pair<std::string, json>> ToolRegistry::list() const {
  std::vector<std::pair<std::string, json>> out;
  for (const auto& [name, tool] : tools_) out.emplace_back(name, tool.schema);
  return out;
}

json ToolRegistry::call(const std::string& name, const json& args) const {
  auto it = tools_.find(name);
  if (it == tools_.end()) return json{{"error", "unknown tool " + name}};
  for (const auto& [arg, type] : it->second.schema.items()) {
    if (!args.contains(arg))
      return json{{"error", "tool " + name + " missing argument " + arg}};
    const json& v = args.at(arg);
    const std::string t = type.get<std::string>();
    bool ok = (t == "string" && v.is_string()) || (t == "number" && v.is_number()) ||
              (t == "integer" && v.is_number_integer()) ||
              (t == "array" && v.is_array()) || (t == "object" && v.is_object()) ||
              (t == "boolean" && v.is_boolean());
    if (!ok)
      return json{{"error", "tool " + name + " argument " + arg + " must be " + t}};
  }
  try {
    return it->second.handler(args);
  } catch (const std::exception& e) {
    return json{{"error", std::string("tool ") + name + " failed: " + e.what()}};
  }
}

ReactResult run_react(const Question& q, const ToolRegistry& tools,
                      PolicyBackend& backend, int theta) {
  if (theta < 1) throw std::invalid_argument("theta must be >= 1");
  if (auto err = validate_question(q))
    throw std::invalid_argument("invalid question: " + *err);

  ReactResult result;
  result.trajectory.question_id = q.id;
  for (int step = 0; step < theta; ++step) {
    StepDecision d = backend.step(q, result.trajectory, tools);
    TrajectoryStep ts;
    ts.thought = d.thought;
    if (d.final) {
      // Finalization occupies a step of the budget.
      ts.action_tool = "final_answer";
      ts.action_args = json::object();
      ts.observation = "accepted";
      result.trajectory.steps.push_back(std::move(ts));
      Answer a;
      a.question_id = q.id;
      a.responder = q.asker;
      a.body = d.final->body;
      a.confidence = d.final->confidence;
      result.trajectory.completed = true;
      result.trajectory.final_answer = a;
      result.answer = a;
      return result;
    }
    if (d.action) {
      ts.action_tool = d.action->tool;
      ts.action_args = d.action->args;
      ts.observation = tools.call(d.action->tool, d.action->args).dump();
    } else {
      ts.action_tool = "noop";
      ts.action_args = json::object();
      ts.observation = "{}";
    }
    result.trajectory.steps.push_back(std::move(ts));
  }
  // Step budget exhausted.
  result.trajectory.completed = false;
  return result;
}

Answer direct_answer(const Question& q, PolicyBackend& backend) {
  if (auto err = validate_question(q))
    throw std::invalid_argument("invalid question: " + *err);
  Trajectory empty;
  empty.question_id = q.id;
  ToolRegistry none;
  StepDecision d = backend.step(q, empty, none);
  if (!d.final)
    throw std::runtime_error("backend error: direct question got no final answer");
  Answer a;
  a.question_id = q.id;
  a.responder = q.asker;
  a.body = d.final->body;
  a.confidence = d.final->confidence;
  return a;
}

}  // namespace arca
