#include <benchmark/benchmark.h>

#include <random>

#include "scriptid/features.hpp"
#include "scriptid/morphology.hpp"
#include "scriptid/pipeline.hpp"
#include "scriptid/synth.hpp"

using namespace scriptid;

namespace {

BinaryImage noise(int side, double density, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::bernoulli_distribution ink(density);
  BinaryImage img(side, side);
  for (int r = 0; r < side; ++r)
    for (int c = 0; c < side; ++c) img.set(r, c, ink(rng));
  return img;
}

const std::vector<synth::GlyphSheet>& sheets() {
  static const auto s = synth::load_glyph_sheets(SCRIPTID_GLYPH_DIR);
  return s;
}

void BM_ErodeLine(benchmark::State& state) {
  const BinaryImage img = noise(static_cast<int>(state.range(0)), 0.7, 1);
  const auto se = line_se(45, static_cast<int>(state.range(1)));
  for (auto _ : state) benchmark::DoNotOptimize(erode(img, se));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(img.size()));
}
BENCHMARK(BM_ErodeLine)->Args({256, 9})->Args({256, 31})->Args({1024, 31});

void BM_Reconstruct(benchmark::State& state) {
  const BinaryImage mask = noise(static_cast<int>(state.range(0)), 0.6, 2);
  BinaryImage marker(mask.width(), mask.height());
  for (int c = 0; c < mask.width(); ++c)
    if (mask(0, c)) marker.set(0, c, 1);
  for (auto _ : state) benchmark::DoNotOptimize(reconstruct_by_dilation(marker, mask));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(mask.size()));
}
BENCHMARK(BM_Reconstruct)->Arg(64)->Arg(256)->Arg(1024);

void BM_FillHoles(benchmark::State& state) {
  const BinaryImage img = noise(static_cast<int>(state.range(0)), 0.5, 3);
  for (auto _ : state) benchmark::DoNotOptimize(fill_holes(img));
}
BENCHMARK(BM_FillHoles)->Arg(256);

void BM_ExtractFeatures(benchmark::State& state) {
  synth::CorpusParams p;
  p.per_class = 1;
  p.pt_min = p.pt_max = static_cast<double>(state.range(0));
  p.min_glyphs = p.max_glyphs = 4;
  const auto words = synth::generate_words(sheets(), p);
  for (auto _ : state)
    for (const auto& w : words) benchmark::DoNotOptimize(word_features(w.image, PipelineConfig{}));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(words.size()));
}
BENCHMARK(BM_ExtractFeatures)->Arg(12)->Arg(36);

void BM_PreprocessPage(benchmark::State& state) {
  synth::PageParams pp;
  pp.skew_deg = 4.0;
  const auto page = synth::generate_page(sheets(), pp, 5);
  const pnm::AnyImage gray = page.gray;
  for (auto _ : state) benchmark::DoNotOptimize(preprocess_page(gray, PipelineConfig{}));
}
BENCHMARK(BM_PreprocessPage)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
