#include <benchmark/benchmark.h>

#include <random>

#include "jscc/rs.hpp"

namespace {

std::vector<std::uint8_t> random_bytes(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<std::uint8_t> v(n);
  for (auto& b : v) b = static_cast<std::uint8_t>(rng());
  return v;
}

void BM_RsEncode(benchmark::State& state) {
  const jscc::rs::RsSpec spec{static_cast<int>(state.range(0)), static_cast<int>(state.range(1))};
  const auto data = random_bytes(static_cast<std::size_t>(spec.k), 1);
  for (auto _ : state) benchmark::DoNotOptimize(jscc::rs::encode(data, spec));
  state.SetBytesProcessed(state.iterations() * spec.k);
}
BENCHMARK(BM_RsEncode)->Args({18, 10})->Args({255, 223});

// Arg 2: symbol errors injected (at most the correction capacity).
void BM_RsDecode(benchmark::State& state) {
  const jscc::rs::RsSpec spec{static_cast<int>(state.range(0)), static_cast<int>(state.range(1))};
  auto rx = jscc::rs::encode(random_bytes(static_cast<std::size_t>(spec.k), 2), spec);
  for (int i = 0; i < state.range(2); ++i) rx[static_cast<std::size_t>(i * 3 % spec.n)] ^= 0x5A;
  for (auto _ : state) benchmark::DoNotOptimize(jscc::rs::decode(rx, spec));
  state.SetBytesProcessed(state.iterations() * spec.n);
}
BENCHMARK(BM_RsDecode)->Args({18, 10, 0})->Args({18, 10, 4})->Args({255, 223, 0})->Args({255, 223, 16});

void BM_ProductCode(benchmark::State& state) {
  const jscc::rs::RsSpec row{18, 10}, col{33, 25};
  const auto data = random_bytes(250, 3);
  auto grid = jscc::rs::product_encode(data, row, col);
  grid.symbols[7] ^= 1;
  grid.symbols[100] ^= 1;
  for (auto _ : state) {
    const auto g = jscc::rs::product_encode(data, row, col);
    benchmark::DoNotOptimize(jscc::rs::product_decode(grid.symbols, row, col));
    benchmark::DoNotOptimize(g);
  }
  state.SetBytesProcessed(state.iterations() * 250);
}
BENCHMARK(BM_ProductCode);

}  // namespace
