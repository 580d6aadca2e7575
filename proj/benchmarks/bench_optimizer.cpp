#include <benchmark/benchmark.h>

#include "jscc/image.hpp"
#include "jscc/pipeline.hpp"

namespace {

const jscc::pipeline::SourcePlan& source() {
  static const jscc::pipeline::SourcePlan src = [] {
    jscc::pipeline::ExperimentConfig cfg;
    return jscc::pipeline::prepare_source(jscc::read_pgm(JSCC_TEST_IMAGE), cfg);
  }();
  return src;
}

// Arg: exact stage on (1) or off (0).
void BM_PlanUep(benchmark::State& state) {
  jscc::pipeline::ExperimentConfig cfg;
  cfg.ber = 1e-3;
  const auto& src = source();
  const auto layers = jscc::pipeline::make_layers(src, cfg);
  const auto model = jscc::pipeline::success_model(cfg);
  jscc::rateopt::OptimizerOptions opts;
  opts.exact = state.range(0) != 0;
  const auto budget = static_cast<std::int64_t>(cfg.budget_per_packet) * static_cast<std::int64_t>(src.profile.packet_count());
  for (auto _ : state) benchmark::DoNotOptimize(jscc::rateopt::optimize(src.profile, layers, model, budget, opts));
}
BENCHMARK(BM_PlanUep)->Arg(0)->Arg(1);

void BM_Trial(benchmark::State& state) {
  jscc::pipeline::ExperimentConfig cfg;
  cfg.ber = 1e-3;
  const auto& src = source();
  const auto plan = jscc::pipeline::plan_protection(src, cfg);
  std::size_t t = 0;
  for (auto _ : state) benchmark::DoNotOptimize(jscc::pipeline::run_trial(src, plan, cfg, t++));
}
BENCHMARK(BM_Trial)->Unit(benchmark::kMillisecond);

}  // namespace
