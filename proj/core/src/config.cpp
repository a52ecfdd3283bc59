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

#include "arca/config.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace arca {

namespace {

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r");
  auto e = s.find_last_not_of(" \t\r");
  if (b == std::string::npos) return "";
  return s.substr(b, e - b + 1);
}

std::string unquote(std::string v) {
  if (v.size() >= 2 && ((v.front() == '"' && v.back() == '"') ||
                        (v.front() == '\'' && v.back() == '\'')))
    return v.substr(1, v.size() - 2);
  return v;
}

class Section {
 public:
  Section(const ConfigFile& file, const std::string& name) {
    auto it = file.find(name);
    if (it != file.end()) kv_ = &it->second;
  }

  std::string str(const std::string& key, const std::string& def) const {
    if (!kv_) return def;
    auto it = kv_->find(key);
    return it == kv_->end() ? def : it->second;
  }

  double num(const std::string& key, double def) const {
    std::string v = str(key, "");
    if (v.empty()) return def;
    try {
      return std::stod(v);
    } catch (const std::exception&) {
      throw std::invalid_argument("config error: " + key + " is not a number: " + v);
    }
  }

  std::int64_t integer(const std::string& key, std::int64_t def) const {
    std::string v = str(key, "");
    if (v.empty()) return def;
    try {
      return std::stoll(v);
    } catch (const std::exception&) {
      throw std::invalid_argument("config error: " + key + " is not an integer: " + v);
    }
  }

  bool boolean(const std::string& key, bool def) const {
    std::string v = str(key, "");
    if (v.empty()) return def;
    if (v == "true" || v == "1" || v == "yes") return true;
    if (v == "false" || v == "0" || v == "no") return false;
    throw std::invalid_argument("config error: " + key + " is not a boolean: " + v);
  }

 private:
  const std::map<std::string, std::string>* kv_ = nullptr;
};

}  // namespace

ConfigFile parse_config_text(const std::string& text) {
  ConfigFile out;
  std::string section = "";
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) {
      // keep '#' inside quoted values
      auto quote = line.find('"');
      if (quote == std::string::npos || hash < quote) line = line.substr(0, hash);
    }
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        throw std::invalid_argument("config error: bad section header at line " +
                                    std::to_string(lineno));
      section = trim(line.substr(1, line.size() - 2));
      out[section];
      continue;
    }
    auto eq = line.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("config error: expected key = value at line " +
                                  std::to_string(lineno));
    std::string key = trim(line.substr(0, eq));
    std::string value = unquote(trim(line.substr(eq + 1)));
    out[section][key] = value;
  }
  return out;
}

ConfigFile parse_config_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str());
}

RunConfig build_run_config(const ConfigFile& file) {
  RunConfig rc;

  Section sim(file, "sim");
  {
    std::string preset = sim.str("preset", "figure1");
    if (preset == "figure1")
      rc.sim.preset = Preset::figure1;
    else if (preset == "trainticket_small")
      rc.sim.preset = Preset::trainticket_small;
    else if (preset == "trainticket_full")
      rc.sim.preset = Preset::trainticket_full;
    else
      throw std::invalid_argument("config error: unknown preset " + preset);
    rc.sim.users = static_cast<int>(sim.integer("users", 100));
    rc.sim.duration = sim.integer("duration_ms", 60'000);
    rc.sim.seed = static_cast<std::uint64_t>(sim.integer("seed", 0));
    rc.sim.noise_level = sim.num("noise_level", 0.0);
    std::string faults = sim.str("faults_json", "");
    if (!faults.empty())
      rc.sim.faults = json::parse(faults).get<std::vector<FaultSpec>>();
  }

  Section agents(file, "agents");
  {
    AgentConfig& a = rc.pipeline.agent;
    a.p_stop = agents.num("p_stop", a.p_stop);
    a.max_iterations = static_cast<int>(agents.integer("max_iterations", a.max_iterations));
    a.gamma = agents.num("gamma", a.gamma);
    a.inaccessible_p = agents.num("inaccessible_p", a.inaccessible_p);
    a.no_baseline_p = agents.num("no_baseline_p", a.no_baseline_p);
    a.fuzzy_max_distance =
        static_cast<int>(agents.integer("fuzzy_max_distance", a.fuzzy_max_distance));
    a.case_jaccard_min = agents.num("case_jaccard_min", a.case_jaccard_min);
    a.window_ticks = static_cast<int>(agents.integer("window_ticks", a.window_ticks));
  }

  Section voting(file, "voting");
  {
    VotingConfig& v = rc.pipeline.voting;
    v.alpha = voting.num("alpha", v.alpha);
    v.beta = voting.num("beta", v.beta);
    v.delta_max = voting.num("delta_max", v.delta_max);
    v.dwc = voting.num("dwc", v.dwc);
    v.dwe = voting.num("dwe", v.dwe);
    v.cap = voting.num("cap", v.cap);
    v.floor = voting.num("floor", v.floor);
    v.max_reanswers = static_cast<int>(voting.integer("max_reanswers", v.max_reanswers));
    v.seed = static_cast<std::uint64_t>(voting.integer("seed", static_cast<std::int64_t>(v.seed)));
    rc.pipeline.voting_enabled = voting.boolean("enabled", true);
  }

  Section eval(file, "eval");
  {
    rc.eval.sigma = eval.num("sigma", rc.eval.sigma);
    rc.eval.tau = eval.num("tau", rc.eval.tau);
    rc.eval.theta = static_cast<int>(eval.integer("theta", rc.eval.theta));
    rc.eval.max_causes = static_cast<int>(eval.integer("max_causes", rc.eval.max_causes));
  }

  Section backend(file, "backend");
  {
    std::string mode = backend.str("mode", "heuristic");
    if (mode == "heuristic")
      rc.pipeline.mode = BackendMode::heuristic;
    else if (mode == "oracle")
      rc.pipeline.mode = BackendMode::oracle;
    else if (mode == "external")
      rc.pipeline.mode = BackendMode::external;
    else
      throw std::invalid_argument("config error: unknown backend mode " + mode);
    rc.pipeline.external_endpoint = backend.str("endpoint", "");
    rc.pipeline.theta = static_cast<int>(backend.integer("theta", rc.pipeline.theta));
    if (rc.pipeline.mode == BackendMode::external &&
        rc.pipeline.external_endpoint.empty())
      throw std::invalid_argument("config error: external mode requires endpoint");
  }

  return rc;
}

}  // namespace arca
