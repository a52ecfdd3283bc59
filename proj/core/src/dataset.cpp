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

#include "arca/dataset.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "arca/version.hpp"

namespace arca {

namespace fs = std::filesystem;

const GroundTruth* Dataset::truth_for(const std::string& alert_id) const {
  for (const auto& gt : ground_truth) {
    if (gt.alert_id == alert_id) return &gt;
  }
  return nullptr;
}

const MetricSeries* Dataset::series_for(const std::string& node,
                                        MetricKind metric) const {
  for (const auto& s : metrics) {
    if (s.node == node && s.metric == metric) return &s;
  }
  return nullptr;
}

std::vector<const MetricSeries*> Dataset::series_of(const std::string& node) const {
  std::vector<const MetricSeries*> out;
  for (const auto& s : metrics) {
    if (s.node == node) out.push_back(&s);
  }
  return out;
}

std::pair<TimestampMs, TimestampMs> Dataset::time_range() const {
  TimestampMs lo = std::numeric_limits<TimestampMs>::max();
  TimestampMs hi = std::numeric_limits<TimestampMs>::min();
  for (const auto& s : metrics) {
    if (s.points.empty()) continue;
    lo = std::min(lo, s.points.front().first);
    hi = std::max(hi, s.points.back().first);
  }
  for (const auto& sp : spans) {
    lo = std::min(lo, sp.start);
    hi = std::max(hi, sp.start + sp.duration);
  }
  if (lo > hi) return {0, 0};
  return {lo, hi};
}

std::string sha256_hex(const std::string& bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (!EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr))
    throw std::runtime_error("sha256 digest failed");
  static const char* hex = "0123456789abcdef";
  std::string out;
  out.reserve(len * 2);
  for (unsigned int i = 0; i < len; ++i) {
    out.push_back(hex[digest[i] >> 4]);
    out.push_back(hex[digest[i] & 0xf]);
  }
  return out;
}

namespace {

template <typename T>
std::string to_jsonl(const std::vector<T>& records) {
  std::ostringstream out;
  for (const auto& r : records) {
    json j = r;
    out << j.dump() << "\n";
  }
  return out.str();
}

template <typename T>
std::vector<T> from_jsonl(const fs::path& file) {
  std::vector<T> out;
  std::ifstream in(file);
  if (!in) throw std::runtime_error("cannot open " + file.string());
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    out.push_back(json::parse(line).get<T>());
  }
  return out;
}

void write_file(const fs::path& p, const std::string& content) {
  std::ofstream out(p, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + p.string());
  out << content;
}

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + p.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

json save_dataset(const Dataset& ds, const fs::path& dir, const json& config_echo) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw std::runtime_error("cannot create " + dir.string() + ": " + ec.message());

  json topo = ds.topology;
  std::map<std::string, std::string> files = {
      {"topology.json", topo.dump(2) + "\n"},
      {"spans.jsonl", to_jsonl(ds.spans)},
      {"metrics.jsonl", to_jsonl(ds.metrics)},
      {"alerts.jsonl", to_jsonl(ds.alerts)},
      {"ground_truth.jsonl", to_jsonl(ds.ground_truth)},
  };

  json manifest;
  manifest["schema_version"] = kDatasetSchemaVersion;
  manifest["tool_version"] = kToolVersion;
  manifest["config"] = config_echo;
  json hashes = json::object();
  for (const auto& [name, content] : files) {
    write_file(dir / name, content);
    hashes[name] = sha256_hex(content);
  }
  manifest["hashes"] = hashes;
  write_file(dir / "manifest.json", manifest.dump(2) + "\n");
  return manifest;
}

Dataset load_dataset(const fs::path& dir) {
  Dataset ds;
  ds.topology = json::parse(read_file(dir / "topology.json")).get<Topology>();
  ds.spans = from_jsonl<CallSpan>(dir / "spans.jsonl");
  ds.metrics = from_jsonl<MetricSeries>(dir / "metrics.jsonl");
  ds.alerts = from_jsonl<AlertEvent>(dir / "alerts.jsonl");
  if (fs::exists(dir / "ground_truth.jsonl"))
    ds.ground_truth = from_jsonl<GroundTruth>(dir / "ground_truth.jsonl");
  return ds;
}

}  // namespace arca
