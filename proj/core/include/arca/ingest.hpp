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
#include <optional>

#include "arca/dataset.hpp"

namespace arca {

struct IngestStats {
  long rows_read = 0;
  long rows_skipped = 0;
  long duplicate_spans = 0;
};

struct IngestInput {
  std::filesystem::path spans;
  std::filesystem::path metrics;
  std::filesystem::path alerts;
  std::optional<std::filesystem::path> topology;
  // Optional column-mapping file for CSV inputs:
  //   {"spans": {field: column}, "metrics": {...}, "alerts": {...}}
  std::optional<std::filesystem::path> mapping;
};

// Normalizes external telemetry into the canonical layout. Unknown nodes
// are auto-added with a kind inferred from the id prefix (os_ -> host,
// docker_ -> container, db_ -> database). Unparseable rows are skipped and
// counted; a skip rate over 10% is a hard error. No ground truth is emitted.
std::pair<Dataset, IngestStats> ingest_dataset(const IngestInput& input);

}  // namespace arca
