// Acceptance gate: one pass/fail line per criterion, nonzero exit on any
// failure. Each check is self-contained and uses only public library APIs.

#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <set>
#include <functional>
#include <iostream>
#include <sstream>

#include "arca/backends.hpp"
#include "arca/evaluation.hpp"
#include "arca/pipeline.hpp"
#include "arca/simulator.hpp"

using namespace arca;

namespace {

int g_failures = 0;

void report(const std::string& name, bool ok, const std::string& detail = "") {
  std::cout << (ok ? "PASS" : "FAIL") << ": " << name;
  if (!ok && !detail.empty()) std::cout << " (" << detail << ")";
  std::cout << std::endl;
  if (!ok) ++g_failures;
}

double now_seconds() {
  using clock = std::chrono::steady_clock;
  static const clock::time_point start = clock::now();
  return std::chrono::duration<double>(clock::now() - start).count();
}

std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

bool close(double a, double b, double eps = 1e-12) { return std::fabs(a - b) < eps; }

// ---------------------------------------------------------------------------
// 1. Exhaustive vote tally: every ballot combination, several weight vectors,
//    checked against an independent recount.
void check_tally_exhaustive() {
  double t0 = now_seconds();
  const double grid[4] = {0.1, 0.5, 1.0, 1.5};
  const Ballot ballots3[3] = {Ballot::For, Ballot::Abstain, Ballot::Against};
  long combos = 0;
  bool ok = true;
  std::string detail;

  for (int wpat = 0; wpat < 16 && ok; ++wpat) {
    std::map<AgentRole, double> weights;
    for (int i = 0; i < 7; ++i)
      weights[kAllRoles[i]] = grid[(wpat + i * (1 + wpat % 3)) % 4];

    for (int combo = 0; combo < 2187 && ok; ++combo) {  // 3^7
      std::map<AgentRole, Ballot> ballots;
      int c = combo;
      for (int i = 0; i < 7; ++i) {
        ballots[kAllRoles[i]] = ballots3[c % 3];
        c /= 3;
      }
      TallyResult r = tally(ballots, weights, 0.5, 0.5);

      // Independent recount.
      double total = 0, support = 0, part = 0;
      for (int i = 0; i < 7; ++i) {
        double w = weights[kAllRoles[i]];
        total += w;
        Ballot b = ballots[kAllRoles[i]];
        if (b == Ballot::For) support += w;
        if (b != Ballot::Abstain) part += w;
      }
      double s = support / total;
      double p = part / total;
      bool passed = s >= 0.5 && p >= 0.5;
      if (!close(r.s, s) || !close(r.p, p) || r.passed != passed) {
        ok = false;
        detail = "mismatch at weight pattern " + std::to_string(wpat) +
                 " combo " + std::to_string(combo);
      }
      ++combos;
    }
  }
  double dt = now_seconds() - t0;
  if (ok && dt >= 10.0) {
    ok = false;
    detail = "took " + std::to_string(dt) + "s";
  }
  report("vote tally matches exhaustive recount (" + std::to_string(combos) +
             " combinations, " + std::to_string(dt).substr(0, 5) + "s)",
         ok, detail);
}

// ---------------------------------------------------------------------------
// 2. Weight dynamics: fuzzed update rounds never leave the bounds, and a
//    single decay-free update lands on the exact expected values.
void check_weight_bounds() {
  VotingConfig cfg;
  WeightTable weights = initial_weights();
  DecayRng rng(12345);
  std::uint64_t fuzz = 99;
  bool ok = true;
  std::string detail;

  for (int round = 0; round < 10'000 && ok; ++round) {
    VoteRound vr;
    vr.proposal.answerer = kAllRoles[splitmix64(fuzz) % 7];
    if (splitmix64(fuzz) % 3 == 0)
      vr.proposal.challenger = kAllRoles[splitmix64(fuzz) % 7];
    for (AgentRole r : kAllRoles) {
      switch (splitmix64(fuzz) % 4) {
        case 0: vr.ballots[r] = Ballot::For; break;
        case 1: vr.ballots[r] = Ballot::Against; break;
        case 2: vr.ballots[r] = Ballot::Abstain; break;
        default: break;  // absent
      }
    }
    bool passed = splitmix64(fuzz) % 2 == 0;
    apply_weight_updates(vr, passed, weights, rng, cfg);
    for (const auto& [role, w] : weights) {
      if (w.w_c < cfg.floor - 1e-12 || w.w_c > cfg.cap + 1e-12 ||
          w.w_e < cfg.floor - 1e-12 || w.w_e > cfg.cap + 1e-12 ||
          w.effective() < 0.01 - 1e-12 || w.effective() > 2.25 + 1e-12) {
        ok = false;
        detail = "bounds broken at round " + std::to_string(round);
      }
    }
  }

  if (ok) {
    // Decay-free single step from 1.0: a For voter on a passed round gains
    // the participation credit and the alignment step exactly.
    VotingConfig nf = cfg;
    nf.delta_max = 0.0;
    WeightTable w = initial_weights();
    DecayRng r2(1);
    VoteRound vr;
    vr.ballots[AgentRole::DataDetective] = Ballot::For;
    vr.ballots[AgentRole::FaultMapper] = Ballot::Against;
    apply_weight_updates(vr, true, w, r2, nf);
    ok = close(w[AgentRole::DataDetective].w_c, 1.1) &&
         close(w[AgentRole::DataDetective].w_e, 1.01) &&
         close(w[AgentRole::FaultMapper].w_c, 1.1) &&
         close(w[AgentRole::FaultMapper].w_e, 0.99) &&
         close(w[AgentRole::AlertReceiver].w_c, 1.0) &&
         close(w[AgentRole::AlertReceiver].w_e, 1.0);
    if (!ok) detail = "exact single-step values wrong";
  }
  report("weights stay inside bounds over 10000 fuzzed rounds", ok, detail);
}

// ---------------------------------------------------------------------------
// 3. Metric formulas: worked examples plus a brute-force recount on random
//    instances.
void check_metric_formulas() {
  bool ok = true;
  std::string detail;

  {
    TruthMap tm;
    GroundTruth g1;
    g1.alert_id = "a1";
    g1.root_nodes = {"n1"};
    tm["a1"] = g1;
    GroundTruth g2 = g1;
    g2.alert_id = "a2";
    g2.root_nodes = {"n2"};
    tm["a2"] = g2;
    GroundTruth g3 = g1;
    g3.alert_id = "a3";
    g3.root_nodes = {"n3"};
    tm["a3"] = g3;
    Predictions pred;
    pred["a1"] = {{"n1", std::nullopt}};
    pred["a2"] = {{"n2", std::nullopt}};
    pred["a3"] = {{"bad", std::nullopt}};
    if (!close(compute_ra(pred, tm, 0.1), (2.0 - 0.1) / 3.0)) {
      ok = false;
      detail = "RA worked example";
    }
  }

  std::uint64_t state = 777;
  for (int inst = 0; inst < 100 && ok; ++inst) {
    int alerts = 1 + static_cast<int>(splitmix64(state) % 8);
    TruthMap tm;
    Predictions pred;
    PredictedPaths paths;
    long a_c = 0, a_i = 0, a_t = 0, p_c = 0, p_i = 0, p_t = 0;
    for (int a = 0; a < alerts; ++a) {
      std::string id = "a" + std::to_string(a);
      std::string root = "n" + std::to_string(splitmix64(state) % 4);
      GroundTruth gt;
      gt.alert_id = id;
      gt.root_nodes = {root};
      gt.propagation_paths = {{root, "hop", id}};
      tm[id] = gt;
      ++a_t;
      ++p_t;
      int causes = 1 + static_cast<int>(splitmix64(state) % 4);
      for (int c = 0; c < causes; ++c) {
        std::string guess = "n" + std::to_string(splitmix64(state) % 4);
        pred[id].push_back({guess, std::nullopt});
        (guess == root ? a_c : a_i) += 1;
      }
      if (splitmix64(state) % 2 == 0) {
        paths[id] = {{root, "hop", id}};
        ++p_c;
      } else {
        paths[id] = {{root, id}};
        ++p_i;
      }
    }
    double ra = compute_ra(pred, tm, 0.1);
    double pa = compute_pa(paths, tm, 0.2);
    if (!close(ra, (a_c - 0.1 * a_i) / a_t) || !close(pa, (p_c - 0.2 * p_i) / p_t)) {
      ok = false;
      detail = "recount mismatch at instance " + std::to_string(inst);
    }
  }

  if (ok) {
    std::vector<Trajectory> ts;
    auto mk = [](int steps, bool done) {
      Trajectory t;
      t.steps.resize(steps);
      t.completed = done;
      return t;
    };
    ts = {mk(7, true), mk(8, true), mk(8, true), mk(9, false)};
    PrApl pr = compute_pr_apl(ts, 15);
    ok = close(pr.pr, 0.75) && pr.apl && close(*pr.apl, 23.0 / 3.0);
    if (!ok) detail = "PR/APL worked example";
  }
  report("evaluation formulas agree with brute-force recounts", ok, detail);
}

// ---------------------------------------------------------------------------
// 4. Oracle closure: 50 noise-free single-fault simulations across all three
//    presets score perfect RA and PA.
void check_oracle_closure() {
  double t0 = now_seconds();
  bool ok = true;
  std::string detail;
  const Preset presets[3] = {Preset::figure1, Preset::trainticket_small,
                             Preset::trainticket_full};
  const FaultCase cases[3] = {FaultCase::error_code_throw,
                              FaultCase::http_error_return,
                              FaultCase::dns_failure};

  for (int i = 0; i < 50 && ok; ++i) {
    SimConfig c;
    c.preset = presets[i % 3];
    c.users = 8;
    c.duration = 20'000;
    c.seed = 1000 + i;
    Topology topo = build_topology(c.preset, c.seed);
    std::vector<std::string> services;
    for (const auto& n : topo.nodes)
      if (n.kind == NodeKind::service) services.push_back(n.id);

    FaultSpec f;
    f.fault_case = cases[i % 3];
    f.category = category_of(f.fault_case);
    f.target = services[(i * 7 + 3) % services.size()];
    f.window_start = 5'000;
    f.window_end = 15'000;
    f.magnitude = 2.0;
    c.faults = {f};

    Dataset ds = simulate(c);
    if (ds.alerts.empty()) {
      ok = false;
      detail = "simulation " + std::to_string(i) + " raised no alerts";
      break;
    }
    PipelineOptions opt;
    opt.mode = BackendMode::oracle;
    EvalReport r = benchmark(ds, opt);
    if (!close(r.ra, 1.0) || !close(r.pa, 1.0)) {
      ok = false;
      detail = "simulation " + std::to_string(i) + " target " + f.target +
               " RA=" + std::to_string(r.ra) + " PA=" + std::to_string(r.pa);
    }
  }
  double dt = now_seconds() - t0;
  if (ok && dt >= 60.0) {
    ok = false;
    detail = "took " + std::to_string(dt) + "s";
  }
  report("oracle runs score RA=PA=1.0 on 50 seeded faults (" +
             std::to_string(dt).substr(0, 5) + "s)",
         ok, detail);
}

// ---------------------------------------------------------------------------
// 5. End-to-end scenario: an error fault at the leaf I is traced from the
//    top-level alert at A through the full call chain, under both backends.
void check_leaf_fault_scenario() {
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
  Dataset ds = simulate(c);

  bool ok = true;
  std::string detail;
  for (BackendMode mode : {BackendMode::oracle, BackendMode::heuristic}) {
    PipelineOptions opt;
    opt.mode = mode;
    PipelineResult result = run_pipeline(ds, opt);
    std::string alert_at_a;
    for (const auto& a : ds.alerts)
      if (a.node == "A") alert_at_a = a.id;
    const RCAReport* rep = nullptr;
    for (const auto& r : result.reports)
      if (r.alert_id == alert_at_a) rep = &r;
    std::string who = mode == BackendMode::oracle ? "oracle" : "heuristic";
    if (!rep || rep->root_causes.empty() || rep->root_causes[0].node != "I" ||
        rep->paths.empty() ||
        rep->paths[0] != std::vector<std::string>{"I", "G", "D", "A"}) {
      ok = false;
      detail = who + " backend missed the leaf cause or path";
      break;
    }
    if (!verify_ledger(result.ledger).ok) {
      ok = false;
      detail = who + " ledger failed verification";
      break;
    }
  }
  report("leaf fault at I is traced to the alert at A via I-G-D-A", ok, detail);
}

// ---------------------------------------------------------------------------
// 6. Cycle safety: the dependency cycle in the small topology never traps the
//    exploration loop.
void check_cycle_safety() {
  SimConfig c;
  c.preset = Preset::trainticket_small;
  c.users = 15;
  c.duration = 30'000;
  c.seed = 7;
  FaultSpec f;
  f.category = FaultCategory::Code;
  f.fault_case = FaultCase::http_error_return;
  f.target = "ts-seat";
  f.window_start = 10'000;
  f.window_end = 25'000;
  f.magnitude = 1.0;
  c.faults = {f};
  Dataset ds = simulate(c);

  bool ok = !ds.alerts.empty();
  std::string detail = ok ? "" : "no alerts raised";

  if (ok) {
    // Walking dependencies from inside the cycle lists every node once:
    // direct and indirect are duplicate-free, disjoint, and self-free.
    auto [from, to] = ds.time_range();
    DependencyReport dep = explore_dependencies(ds, "ts-basic", from, to);
    std::set<std::string> seen;
    for (const auto& n : dep.direct)
      if (n == "ts-basic" || !seen.insert(n).second) ok = false;
    for (const auto& n : dep.indirect)
      if (n == "ts-basic" || !seen.insert(n).second) ok = false;
    if (!ok) detail = "cycle node revisited during dependency exploration";
  }

  if (ok) {
    PipelineOptions opt;
    opt.agent.max_iterations = 10;
    PipelineResult result = run_pipeline(ds, opt);
    ok = result.reports.size() == ds.alerts.size();
    if (!ok) detail = "missing reports";
    for (const auto& r : result.reports)
      if (r.degraded) {
        ok = false;
        detail = "degraded report " + r.alert_id;
      }
    for (const auto& t : result.trajectories)
      if (static_cast<int>(t.steps.size()) > opt.theta) {
        ok = false;
        detail = "trajectory over budget";
      }
  }
  report("circular dependencies terminate within the iteration budget", ok,
         detail);
}

// ---------------------------------------------------------------------------
// 7. Correlation primitive: exact values on constructed series.
void check_pearson() {
  bool ok = true;
  std::string detail;
  auto expect = [&](const std::vector<double>& x, const std::vector<double>& y,
                    double want, const std::string& what) {
    if (!close(pearson(x, y), want, 1e-12)) {
      ok = false;
      detail = what;
    }
  };
  expect({1, 2, 3, 4}, {3, 5, 7, 9}, 1.0, "affine positive (y = 2x + 1)");
  expect({1, 2, 3, 4}, {-1, -2, -3, -4}, -1.0, "perfect negative (y = -x)");
  expect({1, 2, 3, 4}, {5, 5, 5, 5}, 0.0, "zero variance");
  // Hand-computed: cov sum 3 over sqrt(5 * 5).
  expect({1, 2, 3, 4}, {2, 1, 4, 3}, 0.6, "hand-computed 0.6");
  expect({1, 2, 3}, {1, 3, 2}, 0.5, "hand-computed 0.5");
  // r((1,2,3,4,5),(2,1,4,3,7)): cov sum 12, variance sums 10 and 21.2.
  expect({1, 2, 3, 4, 5}, {2, 1, 4, 3, 7}, 12.0 / std::sqrt(212.0), "hand case");
  report("correlation primitive matches hand-computed values", ok, detail);
}

// ---------------------------------------------------------------------------
// 8. Step budget: adversarial non-terminating backends are always cut at the
//    cap, and the completion rate reflects a hand count.
void check_step_budget() {
  bool ok = true;
  std::string detail;

  class NeverFinal : public PolicyBackend {
   public:
    explicit NeverFinal(std::uint64_t seed) : state_(seed) {}
    BackendMode mode() const override { return BackendMode::heuristic; }
    StepDecision step(const Question&, const Trajectory&,
                      const ToolRegistry&) override {
      StepDecision d;
      d.thought = "spin";
      d.action = ToolCall{"noop", json::object()};
      state_ = state_ * 6364136223846793005ULL + 1;
      return d;
    }

   private:
    std::uint64_t state_;
  };

  ToolRegistry reg;
  reg.register_tool("noop", json::object(), [](const json&) { return json{}; });
  std::vector<Trajectory> trajectories;
  for (int i = 0; i < 200 && ok; ++i) {
    NeverFinal backend(i);
    Question q;
    q.id = "q" + std::to_string(i);
    q.topic = Topic::data;
    q.asker = AgentRole::DataDetective;
    q.payload = {{"node", "A"}, {"from", 0}, {"to", 10}};
    ReactResult r = run_react(q, reg, backend, 15);
    if (r.answer || r.trajectory.completed || r.trajectory.steps.size() != 15) {
      ok = false;
      detail = "loop escaped the budget on attempt " + std::to_string(i);
    }
    trajectories.push_back(r.trajectory);
  }
  if (ok) {
    // Mix in 100 completed trajectories; PR must equal the hand count.
    for (int i = 0; i < 100; ++i) {
      Trajectory t;
      t.steps.resize(3);
      t.completed = true;
      trajectories.push_back(t);
    }
    PrApl r = compute_pr_apl(trajectories, 15);
    ok = close(r.pr, 100.0 / 300.0) && r.apl && close(*r.apl, 3.0);
    if (!ok) detail = "PR hand count mismatch";
  }
  report("adversarial agents never exceed the 15-step budget", ok, detail);
}

// ---------------------------------------------------------------------------
// 9. Reproducibility: identical runs are bit-identical, the committed golden
//    report still holds, and ablations do not beat the full system.
void check_reproducibility() {
  bool ok = true;
  std::string detail;

  SimConfig c;
  c.preset = Preset::trainticket_small;
  c.users = 15;
  c.duration = 30'000;
  c.seed = 7;
  FaultSpec f;
  f.category = FaultCategory::Code;
  f.fault_case = FaultCase::http_error_return;
  f.target = "ts-seat";
  f.window_start = 10'000;
  f.window_end = 25'000;
  f.magnitude = 1.0;
  c.faults = {f};

  Dataset d1 = simulate(c);
  Dataset d2 = simulate(c);
  if (!(d1 == d2)) {
    ok = false;
    detail = "simulation not deterministic";
  }

  PipelineOptions opt;
  if (ok) {
    PipelineResult r1 = run_pipeline(d1, opt);
    PipelineResult r2 = run_pipeline(d1, opt);
    json a = json::array(), b = json::array();
    for (const auto& r : r1.reports) a.push_back(r);
    for (const auto& r : r2.reports) b.push_back(r);
    if (a.dump() != b.dump() || r1.ledger.size() != r2.ledger.size()) {
      ok = false;
      detail = "pipeline not deterministic";
    }
  }

  if (ok) {
    EvalReport got = benchmark(d1, opt);
    std::ifstream in(std::string(ARCA_GOLDEN_DIR) +
                     "/trainticket_small_seed7_heuristic.json");
    if (!in) {
      ok = false;
      detail = "golden file missing";
    } else {
      json want;
      in >> want;
      if (json(got) != want) {
        ok = false;
        detail = "golden report drifted";
      }
    }
  }

  if (ok) {
    json cmp = ablation_report({d1}, opt);
    double full = 0;
    std::map<std::string, double> ra;
    for (const auto& v : cmp.at("variants"))
      ra[v.at("name").get<std::string>()] = v.at("ra").get<double>();
    full = ra.at("full");
    if (full + 1e-9 < ra.at("no_voting") || full + 1e-9 < ra.at("single_agent") ||
        full + 1e-9 < ra.at("direct_only")) {
      ok = false;
      detail = "an ablated variant beat the full system";
    }
  }
  report("runs are deterministic, match the golden report, and beat ablations",
         ok, detail);
}

// ---------------------------------------------------------------------------
// 10. Ledger integrity: every fuzzed tampering is caught at the right block.
void check_ledger_tamper() {
  bool ok = true;
  std::string detail;
  std::uint64_t state = 4242;

  Ledger ledger;
  for (int i = 0; i < 40; ++i)
    ledger.append(json{{"type", "vote_round"}, {"n", i}});
  if (!verify_ledger(ledger.blocks()).ok) {
    report("ledger tampering is detected at the first bad block", false,
           "clean chain failed verification");
    return;
  }

  for (int trial = 0; trial < 1000 && ok; ++trial) {
    std::vector<LedgerBlock> chain = ledger.blocks();
    int mode = static_cast<int>(splitmix64(state) % 5);
    std::int64_t expect = 0;
    switch (mode) {
      case 0: {  // payload edit
        std::size_t i = splitmix64(state) % chain.size();
        chain[i].payload["n"] = -1;
        expect = static_cast<std::int64_t>(i);
        break;
      }
      case 1: {  // stored hash edit
        std::size_t i = splitmix64(state) % chain.size();
        chain[i].hash[0] = chain[i].hash[0] == 'f' ? '0' : 'f';
        expect = static_cast<std::int64_t>(i);
        break;
      }
      case 2: {  // back-link edit
        std::size_t i = splitmix64(state) % chain.size();
        chain[i].prev_hash[3] = chain[i].prev_hash[3] == '9' ? '8' : '9';
        expect = static_cast<std::int64_t>(i);
        break;
      }
      case 3: {  // dropped interior block
        std::size_t i = splitmix64(state) % (chain.size() - 1);
        chain.erase(chain.begin() + static_cast<std::ptrdiff_t>(i));
        expect = static_cast<std::int64_t>(i);
        break;
      }
      default: {  // index edit
        std::size_t i = splitmix64(state) % chain.size();
        chain[i].index += 1 + static_cast<std::int64_t>(splitmix64(state) % 5);
        expect = static_cast<std::int64_t>(i);
        break;
      }
    }
    LedgerVerification v = verify_ledger(chain);
    if (v.ok || !v.first_bad_index || *v.first_bad_index != expect) {
      ok = false;
      detail = "trial " + std::to_string(trial) + " mode " + std::to_string(mode);
    }
  }
  report("ledger tampering is detected at the first bad block", ok, detail);
}

}  // namespace

int main() {
  check_tally_exhaustive();
  check_weight_bounds();
  check_metric_formulas();
  check_oracle_closure();
  check_leaf_fault_scenario();
  check_cycle_safety();
  check_pearson();
  check_step_budget();
  check_reproducibility();
  check_ledger_tamper();
  std::cout << (g_failures == 0 ? "ALL CRITERIA PASSED" : "FAILURES: ")
            << (g_failures == 0 ? "" : std::to_string(g_failures)) << std::endl;
  return g_failures == 0 ? 0 : 1;
}
