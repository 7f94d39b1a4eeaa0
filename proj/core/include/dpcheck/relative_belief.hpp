#ifndef DPCHECK_RELATIVE_BELIEF_HPP
#define DPCHECK_RELATIVE_BELIEF_HPP

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "dpcheck/distributions.hpp"
#include "dpcheck/divergence.hpp"

namespace dpcheck {

struct CheckConfig {
  double a = 1.0;           // DP concentration
  std::size_t N = 200;      // stick-breaking truncation
  std::size_t M = 20;       // quantile bins
  std::size_t i0 = 1;       // small-distance bin index
  std::size_t r1 = 2000;    // prior draws
  std::size_t r2 = 2000;    // posterior draws
  std::uint64_t seed = 0;
  std::size_t threads = 1;  // worker count; results are identical for any value

  void validate() const;  // throws input_error
};

struct SampleSummary {
  double mean = 0.0;
  double median = 0.0;
  double q05 = 0.0;
  double q95 = 0.0;
};

SampleSummary summarize(const std::vector<double>& draws);

struct RBReport {
  double d_star = 0.0;   // prior i0/M quantile
  double rb0 = 0.0;      // relative belief ratio at 0, in [0, M]
  double strength = 0.0;
  std::vector<double> bin_edges;  // length M+1, first 0, last +inf
  std::vector<double> bin_rb;     // length M
  SampleSummary prior_summary;
  SampleSummary posterior_summary;
  CheckConfig config;
  FittedModel model{Family::normal, {0.0, 1.0}};
  std::size_t prior_rejected = 0;      // non-finite draws regenerated
  std::size_t posterior_rejected = 0;
  bool at_resolution_limit = false;    // rb0 hit the cap M
  std::vector<std::string> warnings;
  std::string error;  // nonempty when this grid entry failed; numbers then unset
};

// r1 prior draws of D via the distribution-free uniform path, m = window_size(N).
// Draw j uses its own substream of cfg.seed, so order is schedule-independent.
DivergenceSample generate_prior_sample(const CheckConfig& cfg);

// r2 posterior draws: DP posterior realization, duplicate atoms merged, window
// from the distinct-atom count, then the spacing KL against the fitted model.
DivergenceSample generate_posterior_sample(const CheckConfig& cfg,
                                           std::span<const double> data,
                                           const FittedModel& model);

// Bin the posterior sample by empirical prior quantiles and compute the
// relative belief ratio at 0 plus its strength.
RBReport rb_analysis(const DivergenceSample& prior, const DivergenceSample& posterior,
                     std::size_t n_bins, std::size_t i0);

// Fit the family once, then run the full check at each configuration.
std::vector<RBReport> run_check(std::span<const double> data, Family family,
                                const std::vector<CheckConfig>& grid);

}  // namespace dpcheck

#endif
