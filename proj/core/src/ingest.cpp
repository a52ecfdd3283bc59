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

#include "arca/ingest.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace arca {

namespace {

NodeKind kind_from_prefix(const std::string& id) {
  if (id.rfind("os_", 0) == 0) return NodeKind::host;
  if (id.rfind("docker_", 0) == 0) return NodeKind::container;
  if (id.rfind("db_", 0) == 0) return NodeKind::database;
  return NodeKind::service;
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream ss(line);
  while (std::getline(ss, field, ',')) out.push_back(field);
  return out;
}

// Turns a CSV file into json rows using a field->column mapping.
std::vector<json> read_csv_rows(const std::filesystem::path& file,
                                const json& field_to_column, IngestStats& stats) {
  std::ifstream in(file);
  if (!in) throw std::runtime_error("cannot open " + file.string());
  std::string header_line;
  if (!std::getline(in, header_line))
    throw std::runtime_error("empty csv file " + file.string());
  auto headers = split_csv(header_line);
  std::map<std::string, std::size_t> col_index;
  for (std::size_t i = 0; i < headers.size(); ++i) col_index[headers[i]] = i;

  std::vector<json> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    ++stats.rows_read;
    auto cells = split_csv(line);
    json row = json::object();
    bool ok = true;
    for (const auto& [field, column] : field_to_column.items()) {
      auto it = col_index.find(column.get<std::string>());
      if (it == col_index.end() || it->second >= cells.size()) {
        ok = false;
        break;
      }
      row[field] = cells[it->second];
    }
    if (!ok) {
      ++stats.rows_skipped;
      continue;
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<json> read_jsonl_rows(const std::filesystem::path& file,
                                  IngestStats& stats) {
  std::ifstream in(file);
  if (!in) throw std::runtime_error("cannot open " + file.string());
  std::vector<json> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    ++stats.rows_read;
    json j = json::parse(line, nullptr, false);
    if (j.is_discarded()) {
      ++stats.rows_skipped;
      continue;
    }
    rows.push_back(std::move(j));
  }
  return rows;
}

std::vector<json> read_rows(const std::filesystem::path& file, const json& mapping,
                            const std::string& kind, IngestStats& stats) {
  if (file.extension() == ".csv") {
    if (!mapping.contains(kind))
      throw std::runtime_error("csv input " + file.string() +
                               " requires a mapping entry for '" + kind + "'");
    return read_csv_rows(file, mapping.at(kind), stats);
  }
  return read_jsonl_rows(file, stats);
}

std::int64_t to_int(const json& v) {
  if (v.is_number()) return v.get<std::int64_t>();
  return std::stoll(v.get<std::string>());
}

double to_double(const json& v) {
  if (v.is_number()) return v.get<double>();
  return std::stod(v.get<std::string>());
}

}  // namespace

std::pair<Dataset, IngestStats> ingest_dataset(const IngestInput& input) {
  Dataset ds;
  IngestStats stats;

  json mapping = json::object();
  if (input.mapping) {
    std::ifstream in(*input.mapping);
    if (!in) throw std::runtime_error("cannot open mapping " + input.mapping->string());
    in >> mapping;
  }

  std::set<std::string> known_nodes;
  auto ensure_node = [&](const std::string& id) {
    if (id.empty() || known_nodes.count(id)) return;
    known_nodes.insert(id);
    if (!ds.topology.has_node(id))
      ds.topology.nodes.push_back({id, kind_from_prefix(id), true});
  };

  if (input.topology) {
    std::ifstream in(*input.topology);
    if (!in) throw std::runtime_error("cannot open topology " + input.topology->string());
    json j;
    in >> j;
    ds.topology = j.get<Topology>();
    for (const auto& n : ds.topology.nodes) known_nodes.insert(n.id);
  }

  // Spans: canonical records or mapped columns; duplicate ids deduplicate.
  std::set<std::pair<std::string, std::string>> span_ids;
  std::set<std::pair<std::string, std::string>> edge_set(ds.topology.edges.begin(),
                                                         ds.topology.edges.end());
  for (const auto& row : read_rows(input.spans, mapping, "spans", stats)) {
    try {
      CallSpan s;
      s.trace_id = row.at("trace_id").get<std::string>();
      s.span_id = row.at("span_id").get<std::string>();
      if (row.contains("parent_span_id") && !row.at("parent_span_id").is_null()) {
        std::string p = row.at("parent_span_id").get<std::string>();
        if (!p.empty()) s.parent_span_id = p;
      }
      s.caller = row.at("caller").get<std::string>();
      s.callee = row.at("callee").get<std::string>();
      s.start = to_int(row.at("start"));
      s.duration = to_int(row.at("duration"));
      std::string status = row.value("status", "ok");
      s.status = status == "error" ? SpanStatus::error : SpanStatus::ok;
      if (!span_ids.insert({s.trace_id, s.span_id}).second) {
        ++stats.duplicate_spans;
        continue;
      }
      ensure_node(s.caller);
      ensure_node(s.callee);
      if (edge_set.insert({s.caller, s.callee}).second)
        ds.topology.edges.emplace_back(s.caller, s.callee);
      ds.spans.push_back(std::move(s));
    } catch (const std::exception&) {
      ++stats.rows_skipped;
    }
  }

  // Metrics: point rows {node, metric, timestamp, value} or whole series.
  std::map<std::pair<std::string, MetricKind>,
           std::vector<std::pair<TimestampMs, double>>>
      points;
  for (const auto& row : read_rows(input.metrics, mapping, "metrics", stats)) {
    try {
      if (row.contains("points")) {
        MetricSeries s = row.get<MetricSeries>();
        ensure_node(s.node);
        auto& acc = points[{s.node, s.metric}];
        acc.insert(acc.end(), s.points.begin(), s.points.end());
        continue;
      }
      std::string node = row.at("node").get<std::string>();
      json mk = row.at("metric").get<std::string>();
      MetricKind metric = mk.get<MetricKind>();
      ensure_node(node);
      points[{node, metric}].emplace_back(to_int(row.at("timestamp")),
                                          to_double(row.at("value")));
    } catch (const std::exception&) {
      ++stats.rows_skipped;
    }
  }
  for (auto& [key, pts] : points) {
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end(),
                          [](const auto& a, const auto& b) { return a.first == b.first; }),
              pts.end());
    MetricSeries s;
    s.node = key.first;
    s.metric = key.second;
    s.points = std::move(pts);
    ds.metrics.push_back(std::move(s));
  }
  if (ds.metrics.empty()) throw std::runtime_error("no metric series");

  for (const auto& row : read_rows(input.alerts, mapping, "alerts", stats)) {
    try {
      AlertEvent a;
      a.id = row.at("id").get<std::string>();
      a.node = row.at("node").get<std::string>();
      a.kind = row.at("kind").get<std::string>();
      a.raised_at = to_int(row.at("raised_at"));
      std::string sev = row.value("severity", "warning");
      a.severity = sev == "critical" ? Severity::critical
                                     : sev == "info" ? Severity::info : Severity::warning;
      a.scope = row.contains("scope") ? static_cast<int>(to_int(row.at("scope"))) : 0;
      a.description = row.value("description", "");
      ensure_node(a.node);
      ds.alerts.push_back(std::move(a));
    } catch (const std::exception&) {
      ++stats.rows_skipped;
    }
  }

  if (stats.rows_read > 0 &&
      static_cast<double>(stats.rows_skipped) > 0.10 * static_cast<double>(stats.rows_read))
    throw std::runtime_error("ingest error: skip rate over 10% (" +
                             std::to_string(stats.rows_skipped) + "/" +
                             std::to_string(stats.rows_read) + " rows)");

  return {std::move(ds), stats};
}

}  // namespace arca
