#include <benchmark/benchmark.h>

#include "arca/evaluation.hpp"
#include "arca/pipeline.hpp"
#include "arca/simulator.hpp"

using namespace arca;

namespace {

SimConfig small_faulty_config() {
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
  return c;
}

void BM_Simulate(benchmark::State& state) {
  SimConfig c = small_faulty_config();
  c.preset = state.range(0) == 0 ? Preset::figure1 : Preset::trainticket_small;
  if (c.preset == Preset::figure1) c.faults[0].target = "I";
  for (auto _ : state) {
    Dataset ds = simulate(c);
    benchmark::DoNotOptimize(ds.spans.data());
  }
}
BENCHMARK(BM_Simulate)->Arg(0)->Arg(1);

void BM_Pipeline(benchmark::State& state) {
  Dataset ds = simulate(small_faulty_config());
  PipelineOptions opt;
  opt.mode = state.range(0) == 0 ? BackendMode::oracle : BackendMode::heuristic;
  for (auto _ : state) {
    PipelineResult r = run_pipeline(ds, opt);
    benchmark::DoNotOptimize(r.reports.data());
  }
}
BENCHMARK(BM_Pipeline)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_Tally(benchmark::State& state) {
  std::map<AgentRole, Ballot> ballots;
  std::map<AgentRole, double> weights;
  for (std::size_t i = 0; i < kAllRoles.size(); ++i) {
    ballots[kAllRoles[i]] = static_cast<Ballot>(i % 3);
    weights[kAllRoles[i]] = 0.1 + 0.2 * static_cast<double>(i);
  }
  for (auto _ : state) {
    TallyResult r = tally(ballots, weights, 0.5, 0.5);
    benchmark::DoNotOptimize(r);
  }
}
BENCHMARK(BM_Tally);

void BM_VerifyLedger(benchmark::State& state) {
  Ledger ledger;
  for (int i = 0; i < static_cast<int>(state.range(0)); ++i)
    ledger.append(json{{"type", "vote_round"}, {"n", i}});
  for (auto _ : state) {
    LedgerVerification v = verify_ledger(ledger.blocks());
    benchmark::DoNotOptimize(v);
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_VerifyLedger)->Arg(64)->Arg(1024);

void BM_Evaluate(benchmark::State& state) {
  Dataset ds = simulate(small_faulty_config());
  PipelineOptions opt;
  opt.mode = BackendMode::oracle;
  for (auto _ : state) {
    EvalReport r = arca::benchmark(ds, opt);
    benchmark::DoNotOptimize(r.ra);
  }
}
BENCHMARK(BM_Evaluate)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
