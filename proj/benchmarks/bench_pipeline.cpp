#include <benchmark/benchmark.h>

#include <random>

#include "psd2code/codecheck/validate.hpp"
#include "psd2code/llm/client.hpp"
#include "psd2code/metrics/metrics.hpp"
#include "psd2code/pipeline/pipeline.hpp"
#include "psd2code/prompt/prompt.hpp"
#include "psd2code/psd/reader.hpp"
#include "psd2code/psd/writer.hpp"
#include "psd2code/run/fixtures.hpp"

using namespace psd2code;

namespace {

raster::RasterImage random_image(std::mt19937_64& rng, std::uint32_t w, std::uint32_t h) {
  raster::RasterImage img;
  img.width = w;
  img.height = h;
  img.pixels.resize(std::size_t(w) * h * 4);
  std::uniform_int_distribution<int> byte(0, 255);
  for (auto& p : img.pixels) p = std::uint8_t(byte(rng));
  return img;
}

codecheck::GeneratedCode fixture_code(std::mt19937_64& rng, pipeline::DesignDocument& doc_out) {
  pipeline::FilterConfig cfg;
  const auto tree = run::random_document_tree(rng);
  const auto normalized = pipeline::normalize_coordinates(pipeline::filter_layers(tree, cfg));
  doc_out = pipeline::build_document(normalized, cfg, {}, {});
  std::vector<assets::AssetRecord> records;
  pipeline::for_each_element(doc_out, [&](pipeline::ElementNode& e, int) {
    if (e.type == pipeline::ElementType::image)
      records.push_back({e.name + ".png", "", std::uint32_t(e.width), std::uint32_t(e.height),
                         assets::AssetFormat::png});
  });
  assets::align(doc_out, records);
  const auto bundle = prompt::build_prompt(doc_out, {});
  return codecheck::extract_blocks(llm::template_generate(bundle.constraint_echo)).code;
}

}  // namespace

static void BM_PsdParse(benchmark::State& state) {
  std::mt19937_64 rng(1);
  const auto bytes = psd::write_synthetic_psd_bytes(run::random_round_trip_tree(rng, 20));
  for (auto _ : state) {
    auto input = psd::read_psd_bytes(bytes, "bench");
    benchmark::DoNotOptimize(input);
  }
  state.SetBytesProcessed(std::int64_t(state.iterations()) * std::int64_t(bytes.size()));
}
BENCHMARK(BM_PsdParse);

static void BM_Ssim(benchmark::State& state) {
  std::mt19937_64 rng(2);
  const auto side = std::uint32_t(state.range(0));
  const auto a = random_image(rng, side, side);
  const auto b = random_image(rng, side, side);
  metrics::MetricConfig cfg;
  for (auto _ : state) benchmark::DoNotOptimize(metrics::ssim(a, b, cfg));
  state.SetItemsProcessed(std::int64_t(state.iterations()) * side * side);
}
BENCHMARK(BM_Ssim)->Arg(64)->Arg(256);

static void BM_CodeBleu(benchmark::State& state) {
  std::mt19937_64 rng(3);
  pipeline::DesignDocument doc;
  const auto code = fixture_code(rng, doc);
  metrics::MetricConfig cfg;
  for (auto _ : state) benchmark::DoNotOptimize(metrics::codebleu(code, code, cfg));
}
BENCHMARK(BM_CodeBleu);

static void BM_ValidateAndLayout(benchmark::State& state) {
  std::mt19937_64 rng(4);
  pipeline::DesignDocument doc;
  const auto code = fixture_code(rng, doc);
  for (auto _ : state) benchmark::DoNotOptimize(codecheck::validate(code, doc));
}
BENCHMARK(BM_ValidateAndLayout);

BENCHMARK_MAIN();
