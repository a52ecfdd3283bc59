#include <doctest.h>

#include <cmath>

#include "arca/agents.hpp"
#include "arca/simulator.hpp"

using namespace arca;

namespace {

Dataset figure1_code_fault() {
  SimConfig c;
  c.preset = Preset::figure1;
  c.users = 20;
  c.duration = 30'000;
  c.seed = 42;
  FaultSpec f;
  f.category = FaultCategory::Code;
  f.fault_case = FaultCase::error_code_throw;
  f.target = "I";
  f.window_start = 10'000;
  f.window_end = 25'000;
  f.magnitude = 1.0;
  c.faults = {f};
  return simulate(c);
}

const AlertEvent& alert_at(const Dataset& ds, const std::string& node) {
  for (const auto& a : ds.alerts)
    if (a.node == node) return a;
  throw std::runtime_error("no alert at " + node);
}

}  // namespace

TEST_CASE("alert prioritization: severity, scope, recency, id") {
  std::vector<AlertEvent> alerts = {
      {"a3", "n", "Code", 100, Severity::warning, 9, ""},
      {"a1", "n", "Code", 100, Severity::critical, 1, ""},
      {"a4", "n", "Code", 50, Severity::critical, 2, ""},
      {"a2", "n", "Code", 100, Severity::critical, 2, ""},
      {"a5", "n", "Code", 100, Severity::info, 99, ""},
      {"a0", "n", "Code", 100, Severity::critical, 2, ""},
  };
  auto ordered = prioritize_alerts(alerts);
  std::vector<std::string> ids;
  for (const auto& a : ordered) ids.push_back(a.id);
  CHECK(ids == std::vector<std::string>{"a4", "a0", "a2", "a1", "a3", "a5"});
}

TEST_CASE("collect_data summarizes windowed metrics with baselines") {
  Dataset ds = figure1_code_fault();
  const AlertEvent& alert = alert_at(ds, "I");
  NodeDataReport r = collect_data(ds, "I", alert.raised_at - 5000,
                                  alert.raised_at + 5000);
  CHECK(r.node == "I");
  CHECK_FALSE(r.resolved_from.has_value());
  CHECK(r.accessible);
  CHECK(r.from % kTickMs == 0);
  CHECK(r.to % kTickMs == 0);
  REQUIRE(r.metrics.count("error_rate"));
  const MetricSummary& er = r.metrics.at("error_rate");
  CHECK(er.max > 0.05);
  CHECK_FALSE(er.breaches.empty());
  CHECK(er.threshold == doctest::Approx(0.05));
}

TEST_CASE("collect_data fuzzy-resolves near-miss node ids") {
  SimConfig c;
  c.preset = Preset::trainticket_small;
  c.users = 5;
  c.duration = 10'000;
  c.seed = 1;
  Dataset ds = simulate(c);

  NodeDataReport r = collect_data(ds, "ts-ordr", 0, 10'000);
  CHECK(r.node == "ts-order");
  CHECK(r.resolved_from == "ts-ordr");

  NodeDataReport exact = collect_data(ds, "TS-SEAT", 0, 10'000);
  CHECK(exact.node == "ts-seat");

  CHECK_THROWS_AS(collect_data(ds, "completely-unknown", 0, 10'000),
                  std::invalid_argument);
}

TEST_CASE("collect_data marks inaccessible nodes") {
  Dataset ds = figure1_code_fault();
  for (auto& n : ds.topology.nodes)
    if (n.id == "I") n.accessible = false;
  NodeDataReport r = collect_data(ds, "I", 0, 10'000);
  CHECK_FALSE(r.accessible);
  CHECK(r.metrics.empty());
}

TEST_CASE("dependency exploration separates direct from transitive callees") {
  Dataset ds = figure1_code_fault();
  DependencyReport r = explore_dependencies(ds, "A", 0, 30'000);
  CHECK(r.direct == std::set<std::string>{"B", "C", "D"});
  CHECK(r.indirect == std::set<std::string>{"E", "F", "G", "H", "I"});

  DependencyReport leaf = explore_dependencies(ds, "I", 0, 30'000);
  CHECK(leaf.direct.empty());
  CHECK(leaf.indirect.empty());

  CHECK_THROWS_AS(explore_dependencies(ds, "ghost", 0, 1), std::invalid_argument);
}

TEST_CASE("dependency exploration terminates on the circular dependency") {
  SimConfig c;
  c.preset = Preset::trainticket_small;
  c.users = 5;
  c.duration = 10'000;
  c.seed = 1;
  Dataset ds = simulate(c);

  DependencyReport r = explore_dependencies(ds, "ts-basic", 0, 10'000);
  // The node itself never appears even though the cycle returns to it.
  CHECK(r.direct.count("ts-basic") == 0);
  CHECK(r.indirect.count("ts-basic") == 0);
  CHECK(r.direct ==
        std::set<std::string>{"ts-station", "ts-price", "ts-order"});
  CHECK(r.indirect == std::set<std::string>{"ts-seat", "ts-notify"});
}

TEST_CASE("pearson reference values") {
  std::vector<double> x = {1, 2, 3, 4};
  SUBCASE("perfect positive") {
    std::vector<double> y = {3, 5, 7, 9};  // 2x + 1
    CHECK(pearson(x, y) == doctest::Approx(1.0).epsilon(1e-12));
  }
  SUBCASE("perfect negative") {
    std::vector<double> y = {-1, -2, -3, -4};
    CHECK(pearson(x, y) == doctest::Approx(-1.0).epsilon(1e-12));
  }
  SUBCASE("zero variance carries no evidence") {
    std::vector<double> y = {5, 5, 5, 5};
    CHECK(pearson(x, y) == 0.0);
    CHECK(pearson(y, x) == 0.0);
  }
  SUBCASE("worked example 0.6") {
    std::vector<double> y = {2, 1, 4, 3};
    CHECK(pearson(x, y) == doctest::Approx(0.6).epsilon(1e-12));
  }
  SUBCASE("errors") {
    CHECK_THROWS_AS(pearson(x, {1, 2}), std::invalid_argument);
    CHECK_THROWS_AS(pearson({1.0}, {2.0}), std::invalid_argument);
  }
}

TEST_CASE("probability scoring blends anomaly evidence with correlation") {
  // Hand-built two-node dataset: alert node has a clean ramp, suspect is
  // flat (no anomaly, base 0.5) but correlates perfectly -> 0.75.
  Dataset ds;
  ds.topology.nodes = {{"alert", NodeKind::service, true},
                       {"flat", NodeKind::service, true},
                       {"dark", NodeKind::service, true},
                       {"down", NodeKind::service, false}};
  ds.topology.edges = {{"alert", "flat"}};
  auto mk = [](std::string node, MetricKind kind,
               std::vector<double> vals) {
    MetricSeries s;
    s.node = std::move(node);
    s.metric = kind;
    TimestampMs t = 0;
    for (double v : vals) s.points.emplace_back(t++, v);
    return s;
  };
  // Baseline ticks 0..4, window ticks 5..9.
  ds.metrics.push_back(mk("alert", MetricKind::latency_ms,
                          {40, 40, 40, 40, 40, 41, 42, 43, 44, 45}));
  ds.metrics.push_back(mk("flat", MetricKind::cpu_util,
                          {0.2, 0.2, 0.2, 0.2, 0.2, 0.21, 0.22, 0.23, 0.24, 0.25}));

  AgentConfig cfg;
  auto scores = score_probabilities(ds, {"flat", "dark", "down"}, "alert", 5, 9, cfg);

  // flat: window mean 0.23 vs baseline 0.2, scale max(std=0, 0.1) -> z = 0.3,
  // base = logistic(0.3); r = 1 from the shared ramp.
  const ProbabilityScore& flat = scores.at("flat");
  double base = 1.0 / (1.0 + std::exp(-0.3));
  CHECK(flat.base == doctest::Approx(base).epsilon(1e-9));
  CHECK(flat.correlation == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(flat.final_p == doctest::Approx(0.5 * base + 0.5).epsilon(1e-9));

  // dark: no series at all -> no-baseline fallback 0.5 blended with r=0.
  const ProbabilityScore& dark = scores.at("dark");
  CHECK(dark.no_baseline);
  CHECK(dark.base == doctest::Approx(0.5));
  CHECK(dark.final_p == doctest::Approx(0.25));

  // down: inaccessible -> 0.9 regardless of data.
  CHECK(scores.at("down").final_p == doctest::Approx(0.9));

  CHECK_THROWS_AS(score_probabilities(ds, {}, "alert", 5, 9, cfg),
                  std::invalid_argument);
  CHECK_THROWS_AS(score_probabilities(ds, {"flat"}, "dark", 5, 9, cfg),
                  std::invalid_argument);
}

TEST_CASE("fault web updates bump the revision and score touched edges") {
  Topology t;
  t.nodes = {{"A", NodeKind::service, true},
             {"B", NodeKind::service, true},
             {"C", NodeKind::service, true}};
  t.edges = {{"A", "B"}, {"B", "C"}};

  FaultWeb web;
  web.alert_node = "A";
  FaultWeb v1 = update_fault_web(web, {{"A", 0.3}, {"B", 0.8}}, t);
  CHECK(v1.revision == 1);
  CHECK(v1.entries.at("B") == doctest::Approx(0.8));
  CHECK(v1.edge_scores.at("A->B") == doctest::Approx(0.8));
  CHECK(v1.edge_scores.at("B->C") == doctest::Approx(0.8));

  FaultWeb v2 = update_fault_web(v1, {{"C", 0.9}}, t);
  CHECK(v2.revision == 2);
  CHECK(v2.edge_scores.at("B->C") == doctest::Approx(0.9));

  CHECK_THROWS_AS(update_fault_web(v2, {{"ghost", 0.5}}, t), std::invalid_argument);
}

TEST_CASE("best_path follows the strongest bottleneck from root to alert") {
  Dataset ds = figure1_code_fault();
  FaultWeb web;
  web.alert_node = "A";
  web = update_fault_web(web,
                         {{"A", 0.55}, {"B", 0.2}, {"C", 0.2}, {"D", 0.7},
                          {"G", 0.85}, {"H", 0.3}, {"I", 0.95}},
                         ds.topology);
  auto path = best_path(web, ds.topology, "I", "A");
  REQUIRE(path.has_value());
  CHECK(*path == std::vector<std::string>{"I", "G", "D", "A"});

  CHECK(best_path(web, ds.topology, "A", "A") ==
        std::vector<std::string>{"A"});
  // E only reaches A via B; I cannot be reached from E's callers.
  CHECK_FALSE(best_path(web, ds.topology, "E", "I").has_value());
}

TEST_CASE("analysis ranks causes, caps at four, and attaches metrics") {
  Dataset ds = figure1_code_fault();
  const AlertEvent& alert = alert_at(ds, "A");
  TimestampMs from = alert.raised_at - 5000, to = alert.raised_at + 5000;

  FaultWeb web;
  web.alert_node = "A";
  web = update_fault_web(web,
                         {{"A", 0.6}, {"B", 0.5}, {"C", 0.45}, {"D", 0.7},
                          {"G", 0.8}, {"I", 0.9}},
                         ds.topology);
  std::map<std::string, NodeDataReport> data;
  for (const auto& n : {"A", "D", "G", "I"})
    data[n] = collect_data(ds, n, from, to);

  AnalysisResult r = analyze_and_resolve(web, ds.topology, alert.kind, data,
                                         seed_cases());
  REQUIRE(r.root_causes.size() == 4);
  CHECK(r.root_causes[0].node == "I");
  CHECK(r.root_causes[0].metric == "error_rate");
  CHECK(r.root_causes[1].node == "G");
  REQUIRE_FALSE(r.paths.empty());
  CHECK(r.paths[0] == std::vector<std::string>{"I", "G", "D", "A"});
  CHECK(r.resolution.diagnosis.find("I") != std::string::npos);
  CHECK_FALSE(r.resolution.actions.empty());

  FaultWeb empty;
  CHECK_THROWS_AS(analyze_and_resolve(empty, ds.topology, "Code", {}, seed_cases()),
                  std::invalid_argument);
}

TEST_CASE("case base matching substitutes node and metric placeholders") {
  Topology t;
  t.nodes = {{"db-main", NodeKind::database, true}};
  FaultWeb web;
  web.alert_node = "db-main";
  web.entries = {{"db-main", 1.0}};

  NodeDataReport report;
  report.node = "db-main";
  MetricSummary io;
  io.max = 50;
  io.threshold = 10;
  io.breaches = {1000};
  report.metrics["io_latency_ms"] = io;

  AnalysisResult r = analyze_and_resolve(web, t, "Disk IO",
                                         {{"db-main", report}}, seed_cases());
  REQUIRE(r.root_causes.size() == 1);
  CHECK(r.root_causes[0].metric == "io_latency_ms");
  REQUIRE(r.resolution.actions.size() == 1);
  CHECK(r.resolution.actions[0].find("db-main") != std::string::npos);
  CHECK(r.resolution.actions[0].find("{node}") == std::string::npos);
}

TEST_CASE("seed case base covers the five recorded incident kinds") {
  auto cases = seed_cases();
  REQUIRE(cases.size() == 5);
  std::set<std::string> kinds;
  for (const auto& c : cases) kinds.insert(c.alert_kind);
  CHECK(kinds == std::set<std::string>{"Database Local Method",
                                       "Database Connectivity", "CPU", "Memory",
                                       "Disk IO"});
}
