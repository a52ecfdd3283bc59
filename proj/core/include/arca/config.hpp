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
#include <map>
#include <string>

#include "arca/evaluation.hpp"
#include "arca/pipeline.hpp"
#include "arca/simulator.hpp"

namespace arca {

// Minimal TOML-style sections of key = value pairs; quotes optional,
// '#' starts a comment.
using ConfigFile = std::map<std::string, std::map<std::string, std::string>>;

ConfigFile parse_config_file(const std::filesystem::path& path);
ConfigFile parse_config_text(const std::string& text);

// Every tunable constant lives in one file: [sim], [agents], [voting],
// [eval], [backend]. Flags override file values in the CLI layer.
struct RunConfig {
  SimConfig sim;
  PipelineOptions pipeline;
  EvalConfig eval;
};

RunConfig build_run_config(const ConfigFile& file);

}  // namespace arca
