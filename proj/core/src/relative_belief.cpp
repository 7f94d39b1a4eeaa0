#include "dpcheck/relative_belief.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <numeric>
#include <thread>

#include "dpcheck/dirichlet_process.hpp"
#include "dpcheck/errors.hpp"

namespace dpcheck {

namespace {

constexpr std::uint64_t kPriorStream = 1;
constexpr std::uint64_t kPosteriorStream = 2;
constexpr std::size_t kMaxAttempts = 64;

// Split [0, count) across workers; each worker writes out[j] by index, so the
// result is identical for any worker count.
template <typename PerDraw>
void run_draws(std::size_t count, std::size_t threads, PerDraw per_draw) {
  threads = std::max<std::size_t>(threads, 1);
  threads = std::min(threads, count);
  if (threads <= 1) {
    for (std::size_t j = 0; j < count; ++j) per_draw(j);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr first_error;
  std::mutex error_mutex;
  auto worker = [&] {
    for (;;) {
      const std::size_t j = next.fetch_add(1);
      if (j >= count) return;
      try {
        per_draw(j);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  if (first_error) std::rethrow_exception(first_error);
}

void check_rejections(std::size_t rejected, std::size_t total) {
  if (rejected * 1000 > total)
    throw estimator_error("more than 0.1% of divergence draws were non-finite (" +
                          std::to_string(rejected) + " of " + std::to_string(total) + ")");
}

// Right-continuous empirical quantile: order statistic at index ceil(n p).
double order_quantile(const std::vector<double>& sorted, double p) {
  const auto n = static_cast<double>(sorted.size());
  auto idx = static_cast<std::size_t>(std::ceil(n * p));
  idx = std::clamp<std::size_t>(idx, 1, sorted.size());
  return sorted[idx - 1];
}

}  // namespace

void CheckConfig::validate() const {
  if (!(a > 0.0)) throw input_error("concentration a must be positive");
  if (N < 4) throw input_error("truncation N must be at least 4");
  if (M < 2) throw input_error("bin count M must be at least 2");
  if (i0 < 1 || i0 >= M) throw input_error("i0 must satisfy 1 <= i0 < M");
  if (r1 < M || r2 < M) throw input_error("r1 and r2 must be at least M");
}

SampleSummary summarize(const std::vector<double>& draws) {
  if (draws.empty()) throw input_error("cannot summarize an empty sample");
  std::vector<double> sorted = draws;
  std::sort(sorted.begin(), sorted.end());
  SampleSummary s;
  s.mean = std::accumulate(sorted.begin(), sorted.end(), 0.0) /
           static_cast<double>(sorted.size());
  s.median = order_quantile(sorted, 0.5);
  s.q05 = order_quantile(sorted, 0.05);
  s.q95 = order_quantile(sorted, 0.95);
  return s;
}

DivergenceSample generate_prior_sample(const CheckConfig& cfg) {
  cfg.validate();
  const std::size_t m = window_size(cfg.N);
  DivergenceSample out;
  out.kind = SampleKind::prior;
  out.concentration = cfg.a;
  out.truncation = cfg.N;
  out.window = m;
  out.seed = cfg.seed;
  out.draws.resize(cfg.r1);
  std::atomic<std::size_t> rejected{0};
  run_draws(cfg.r1, cfg.threads, [&](std::size_t j) {
    for (std::size_t attempt = 0;; ++attempt) {
      if (attempt == kMaxAttempts)
        throw estimator_error("prior draw " + std::to_string(j) +
                              " stayed non-finite after regeneration");
      Rng rng = Rng::substream(cfg.seed, {kPriorStream, j, attempt});
      const double d = prior_kl_uniform_fastpath(cfg.a, cfg.N, m, rng);
      if (std::isfinite(d)) {
        out.draws[j] = d;
        if (attempt > 0) rejected.fetch_add(attempt);
        return;
      }
    }
  });
  out.rejected = rejected.load();
  check_rejections(out.rejected, cfg.r1);
  return out;
}

DivergenceSample generate_posterior_sample(const CheckConfig& cfg,
                                           std::span<const double> data,
                                           const FittedModel& model) {
  cfg.validate();
  if (data.empty()) throw input_error("posterior sample needs data");
  PosteriorBase pb{model, std::vector<double>(data.begin(), data.end()), cfg.a};
  DivergenceSample out;
  out.kind = SampleKind::posterior;
  out.concentration = cfg.a;
  out.truncation = cfg.N;
  out.window = 0;  // chosen per draw from the distinct-atom count
  out.seed = cfg.seed;
  out.draws.resize(cfg.r2);
  std::atomic<std::size_t> rejected{0};
  run_draws(cfg.r2, cfg.threads, [&](std::size_t j) {
    for (std::size_t attempt = 0;; ++attempt) {
      if (attempt == kMaxAttempts)
        throw estimator_error("posterior draw " + std::to_string(j) +
                              " stayed non-finite after regeneration");
      Rng rng = Rng::substream(cfg.seed, {kPosteriorStream, j, attempt});
      double d;
      try {
        const DiscreteMeasure merged = merge_atoms(sample_posterior_dp(pb, cfg.N, rng));
        d = kl_estimate(merged, model, window_size(merged.size()));
      } catch (const std::exception& e) {
        throw estimator_error("posterior draw " + std::to_string(j) + ": " + e.what());
      }
      if (std::isfinite(d)) {
        out.draws[j] = d;
        if (attempt > 0) rejected.fetch_add(attempt);
        return;
      }
    }
  });
  out.rejected = rejected.load();
  check_rejections(out.rejected, cfg.r2);
  return out;
}

RBReport rb_analysis(const DivergenceSample& prior, const DivergenceSample& posterior,
                     std::size_t n_bins, std::size_t i0) {
  const std::size_t M = n_bins;
  if (M < 2) throw input_error("need at least 2 bins");
  if (i0 < 1 || i0 >= M) throw input_error("i0 must satisfy 1 <= i0 < M");
  if (prior.draws.size() < M) throw input_error("prior sample smaller than bin count");
  if (posterior.draws.empty()) throw input_error("posterior sample is empty");

  std::vector<double> sorted_prior = prior.draws;
  std::sort(sorted_prior.begin(), sorted_prior.end());
  if (sorted_prior.front() == sorted_prior.back())
    throw estimator_error("all prior divergence draws are equal; binning is degenerate");

  RBReport rep;
  rep.bin_edges.resize(M + 1);
  rep.bin_edges[0] = 0.0;
  for (std::size_t i = 1; i < M; ++i)
    rep.bin_edges[i] = order_quantile(sorted_prior, static_cast<double>(i) /
                                                        static_cast<double>(M));
  rep.bin_edges[M] = std::numeric_limits<double>::infinity();
  rep.d_star = rep.bin_edges[i0];

  // Half-open bins [e_i, e_{i+1}); anything below e_1 (including negative
  // estimator bias) lands in bin 0, anything at or above the prior maximum in
  // the last bin.
  std::vector<double> content(M, 0.0);
  for (double d : posterior.draws) {
    const auto it =
        std::upper_bound(rep.bin_edges.begin() + 1, rep.bin_edges.begin() + M, d);
    const auto bin = static_cast<std::size_t>(it - (rep.bin_edges.begin() + 1));
    content[bin] += 1.0;
  }
  const auto r2 = static_cast<double>(posterior.draws.size());
  for (double& c : content) c /= r2;

  rep.bin_rb.resize(M);
  const auto md = static_cast<double>(M);
  for (std::size_t i = 0; i < M; ++i) rep.bin_rb[i] = md * content[i];

  double below = 0.0;
  for (std::size_t i = 0; i < i0; ++i) below += content[i];
  rep.rb0 = std::min(md * below, md);
  rep.at_resolution_limit = rep.rb0 == md;
  if (rep.at_resolution_limit)
    rep.warnings.push_back(
        "rb0 is at the resolution limit M; a finer M would be needed to distinguish "
        "stronger evidence");

  // Strength: posterior content of the small-distance region together with
  // every bin at least as implausible as it (bin RB not above rb0).
  double strength = 0.0;
  for (std::size_t i = i0 - 1; i < M; ++i)
    if (rep.bin_rb[i] <= rep.rb0) strength += content[i];
  rep.strength = std::min(strength, 1.0);

  rep.prior_summary = summarize(prior.draws);
  rep.posterior_summary = summarize(posterior.draws);
  return rep;
}

std::vector<RBReport> run_check(std::span<const double> data, Family family,
                                const std::vector<CheckConfig>& grid) {
  if (data.empty()) throw input_error("run_check needs data");
  if (grid.empty()) throw input_error("run_check needs at least one configuration");
  const FittedModel model = fit_mle(family, data);
  std::vector<RBReport> reports;
  reports.reserve(grid.size());
  for (const CheckConfig& cfg : grid) {
    cfg.validate();
    try {
      DivergenceSample prior = generate_prior_sample(cfg);
      DivergenceSample posterior = generate_posterior_sample(cfg, data, model);
      RBReport rep = rb_analysis(prior, posterior, cfg.M, cfg.i0);
      rep.config = cfg;
      rep.model = model;
      rep.prior_rejected = prior.rejected;
      rep.posterior_rejected = posterior.rejected;
      if (cfg.a > 0.5 * static_cast<double>(data.size()))
        rep.warnings.push_back("a exceeds half the sample size; the prior may dominate");
      reports.push_back(std::move(rep));
    } catch (const std::exception& e) {
      RBReport failed;
      failed.config = cfg;
      failed.model = model;
      failed.error = e.what();
      reports.push_back(std::move(failed));
    }
  }
  return reports;
}

}  // namespace dpcheck
