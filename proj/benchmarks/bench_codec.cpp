#include <benchmark/benchmark.h>

#include "jscc/image.hpp"
#include "jscc/spiht.hpp"
#include "jscc/wavelet.hpp"

namespace {

const jscc::GrayImage& image() {
  static const jscc::GrayImage img = jscc::read_pgm(JSCC_TEST_IMAGE);
  return img;
}

void BM_ForwardDwt(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(jscc::forward_dwt97(image()));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(image().size()));
}
BENCHMARK(BM_ForwardDwt);

void BM_InverseDwt(benchmark::State& state) {
  const auto pyr = jscc::forward_dwt97(image());
  for (auto _ : state) benchmark::DoNotOptimize(jscc::inverse_dwt97(pyr));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(image().size()));
}
BENCHMARK(BM_InverseDwt);

// Arg: bits per pixel times 8.
void BM_SpihtEncode(benchmark::State& state) {
  const auto budget = jscc::spiht::budget_for(256, 256, static_cast<double>(state.range(0)) / 8.0);
  for (auto _ : state) benchmark::DoNotOptimize(jscc::spiht::encode_image(image(), budget));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(budget));
}
BENCHMARK(BM_SpihtEncode)->Arg(1)->Arg(4)->Arg(8);

void BM_SpihtDecodeGrouped(benchmark::State& state) {
  const auto budget = jscc::spiht::budget_for(256, 256, static_cast<double>(state.range(0)) / 8.0);
  const auto g = jscc::spiht::regroup(jscc::spiht::encode_image(image(), budget));
  for (auto _ : state) benchmark::DoNotOptimize(jscc::spiht::decode_grouped(g));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(budget));
}
BENCHMARK(BM_SpihtDecodeGrouped)->Arg(1)->Arg(4)->Arg(8);

}  // namespace
