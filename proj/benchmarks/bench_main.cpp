#include <benchmark/benchmark.h>

#include "netsom/clustering.hpp"
#include "netsom/graph.hpp"
#include "netsom/layout.hpp"
#include "netsom/rng.hpp"
#include "netsom/som.hpp"
#include "netsom/synth.hpp"

namespace {

netsom::DirectedGraph synth_graph(std::size_t n) {
  netsom::SynthConfig cfg;
  cfg.n_nodes = n;
  cfg.out_degree_max = 10;
  cfg.seed = 99;
  return netsom::generate(cfg);
}

netsom::FeatureMatrix random_matrix(std::size_t rows, std::size_t cols, std::uint64_t seed) {
  netsom::FeatureMatrix fm;
  fm.transforms.assign(cols, {{netsom::ColumnTransform::Kind::raw}});
  for (std::size_t c = 0; c < cols; ++c) fm.columns.push_back("f" + std::to_string(c));
  netsom::Rng rng(seed);
  for (std::size_t r = 0; r < rows; ++r) {
    fm.ids.push_back("r" + std::to_string(r));
    for (std::size_t c = 0; c < cols; ++c) fm.values.push_back(rng.normal());
  }
  return fm;
}

void SomTrain(benchmark::State& state) {
  const auto fm = random_matrix(static_cast<std::size_t>(state.range(0)), 7, 5);
  netsom::SomConfig cfg;
  cfg.epochs = 20;
  cfg.seed = 5;
  for (auto _ : state) {
    auto map = netsom::train(fm, cfg);
    benchmark::DoNotOptimize(map.prototypes.data());
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(SomTrain)->Range(128, 2048)->Complexity()->Unit(benchmark::kMillisecond);

void PageRank(benchmark::State& state) {
  const auto g = synth_graph(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    auto pr = netsom::pagerank(g);
    benchmark::DoNotOptimize(pr.scores.data());
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(PageRank)->Range(512, 8192)->Complexity()->Unit(benchmark::kMillisecond);

void SynthGenerate(benchmark::State& state) {
  for (auto _ : state) {
    auto g = synth_graph(static_cast<std::size_t>(state.range(0)));
    benchmark::DoNotOptimize(g.edge_count());
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(SynthGenerate)->Range(512, 4096)->Complexity()->Unit(benchmark::kMillisecond);

void KMeansCells(benchmark::State& state) {
  const auto fm = random_matrix(static_cast<std::size_t>(state.range(0)), 7, 6);
  std::vector<std::vector<double>> xs;
  for (std::size_t r = 0; r < fm.rows(); ++r) {
    const auto row = fm.row(r);
    xs.emplace_back(row.begin(), row.end());
  }
  for (auto _ : state) {
    auto km = netsom::kmeans(xs, 5, 3);
    benchmark::DoNotOptimize(km.inertia);
  }
}
BENCHMARK(KMeansCells)->Range(64, 1024)->Unit(benchmark::kMillisecond);

void LinLogLayout(benchmark::State& state) {
  const auto g = synth_graph(static_cast<std::size_t>(state.range(0)));
  netsom::LayoutConfig cfg;
  cfg.iterations = 25;
  cfg.seed = 4;
  for (auto _ : state) {
    auto layout = netsom::linlog_layout(g, cfg);
    benchmark::DoNotOptimize(layout.energy);
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(LinLogLayout)->Range(128, 1024)->Complexity()->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
