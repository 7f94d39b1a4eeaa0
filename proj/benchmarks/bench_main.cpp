#include <benchmark/benchmark.h>

#include "dpcheck/dirichlet_process.hpp"
#include "dpcheck/distributions.hpp"
#include "dpcheck/divergence.hpp"
#include "dpcheck/relative_belief.hpp"

namespace {

using namespace dpcheck;

void BM_StickBreak(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  Rng rng(42);
  for (auto _ : state) benchmark::DoNotOptimize(stick_break_weights(1.0, n, rng));
}
BENCHMARK(BM_StickBreak)->Arg(200)->Arg(2000);

void BM_PriorFastPath(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const std::size_t m = window_size(n);
  Rng rng(42);
  for (auto _ : state) benchmark::DoNotOptimize(prior_kl_uniform_fastpath(1.0, n, m, rng));
}
BENCHMARK(BM_PriorFastPath)->Arg(200)->Arg(2000);

void BM_PosteriorDraw(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const FittedModel model = make_model(Family::normal_location_unit_variance, {0.0});
  Rng data_rng(7);
  PosteriorBase pb{model, sample(model, 20, data_rng), 1.0};
  std::uint64_t i = 0;
  for (auto _ : state) {
    Rng rng = Rng::substream(42, {1, i++});
    const DiscreteMeasure merged = merge_atoms(sample_posterior_dp(pb, n, rng));
    benchmark::DoNotOptimize(kl_estimate(merged, model, window_size(merged.size())));
  }
}
BENCHMARK(BM_PosteriorDraw)->Arg(200);

void BM_GumbelFit(benchmark::State& state) {
  const FittedModel truth = make_model(Family::gumbel, {74.5, 32.4});
  Rng rng(7);
  const std::vector<double> data = sample(truth, 200, rng);
  for (auto _ : state) benchmark::DoNotOptimize(fit_mle(Family::gumbel, data));
}
BENCHMARK(BM_GumbelFit);

void BM_RbAnalysis(benchmark::State& state) {
  CheckConfig cfg;
  cfg.seed = 42;
  const FittedModel model = make_model(Family::normal_location_unit_variance, {0.0});
  Rng data_rng(7);
  const std::vector<double> data = sample(model, 20, data_rng);
  const DivergenceSample prior = generate_prior_sample(cfg);
  const DivergenceSample posterior = generate_posterior_sample(cfg, data, model);
  for (auto _ : state)
    benchmark::DoNotOptimize(rb_analysis(prior, posterior, cfg.M, cfg.i0));
}
BENCHMARK(BM_RbAnalysis);

}  // namespace

BENCHMARK_MAIN();
