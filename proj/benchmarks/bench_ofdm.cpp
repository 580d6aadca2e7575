#include <benchmark/benchmark.h>

#include <random>

#include "jscc/channel.hpp"
#include "jscc/ofdm.hpp"

namespace {

std::vector<jscc::ofdm::cplx> qpsk_frame(std::uint64_t seed) {
  const jscc::channel::QamConstellation qam(2);
  std::mt19937_64 rng(seed);
  std::vector<jscc::ofdm::cplx> s(64);
  for (auto& x : s) x = qam.point(static_cast<unsigned>(rng() % 4));
  return s;
}

void BM_Idft64(benchmark::State& state) {
  const auto s = qpsk_frame(1);
  for (auto _ : state) benchmark::DoNotOptimize(jscc::ofdm::idft(s));
}
BENCHMARK(BM_Idft64);

void BM_ModulateCompanded(benchmark::State& state) {
  jscc::ofdm::OfdmConfig cfg;
  cfg.compander.kind = jscc::ofdm::CompanderKind::MuLaw;
  const jscc::ofdm::InterleaverBank bank(cfg);
  const auto s = qpsk_frame(2);
  for (auto _ : state) benchmark::DoNotOptimize(jscc::ofdm::modulate(s, cfg, bank, 0));
}
BENCHMARK(BM_ModulateCompanded);

// Arg: interleaver count K.
void BM_SelectInterleaver(benchmark::State& state) {
  jscc::ofdm::OfdmConfig cfg;
  cfg.interleaver_count = static_cast<int>(state.range(0));
  cfg.papr_threshold_db = 0.0;  // always search the whole bank
  const jscc::ofdm::InterleaverBank bank(cfg);
  const auto s = qpsk_frame(3);
  for (auto _ : state) benchmark::DoNotOptimize(jscc::ofdm::select_interleaver(s, cfg, bank));
}
BENCHMARK(BM_SelectInterleaver)->Arg(1)->Arg(4)->Arg(16);

}  // namespace
