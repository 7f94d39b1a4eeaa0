#ifndef DPCHECK_DIVERGENCE_HPP
#define DPCHECK_DIVERGENCE_HPP

#include <cstddef>
#include <cstdint>
#include <functional>
#include <vector>

#include "dpcheck/dirichlet_process.hpp"
#include "dpcheck/distributions.hpp"
#include "dpcheck/rng.hpp"

namespace dpcheck {

enum class SampleKind { prior, posterior };

// A batch of Monte Carlo draws of D = d_KL(P, F_theta(x)).
struct DivergenceSample {
  std::vector<double> draws;
  SampleKind kind;
  double concentration = 0.0;
  std::size_t truncation = 0;
  std::size_t window = 0;  // m used for the prior; 0 for per-draw posterior windows
  std::uint64_t seed = 0;
  std::size_t rejected = 0;  // non-finite draws regenerated on a fresh substream
};

// Spacing half-window rule m = floor(sqrt(N)+0.5), clamped to [1, (N-1)/2].
std::size_t window_size(std::size_t n_atoms);

// Window weights c_i: the measure's mass between the clamped order statistics
// Y_(i-m) and Y_(i+m) (first atom excluded at the left edge).
std::vector<double> c_weights(const std::vector<double>& weights, std::size_t m);

// Weighted log-spacing entropy estimate. Atoms must be strictly increasing
// (merge first) and the measure must have at least 4 atoms.
double entropy_estimate(const DiscreteMeasure& measure, std::size_t m);

// d_KL(P_N, model) = -H - sum_i J_i log f(Y_(i)).
double kl_estimate(const DiscreteMeasure& measure, const FittedModel& model, std::size_t m);
double kl_estimate(const DiscreteMeasure& measure,
                   const std::function<double(double)>& log_density, std::size_t m);

// Closed form for the unit-variance normal model fitted at xbar.
double kl_location_normal(const DiscreteMeasure& measure, double xbar, std::size_t m);

// One prior draw of D via uniform order statistics (distribution-free path).
double prior_kl_uniform_fastpath(double a, std::size_t n_sticks, std::size_t m, Rng& rng);

// Digamma, |error| <= 1e-10 for x > 0.
double digamma(double x);

// Closed-form E[d_KL(P_N, F_theta(x))] under the prior; rejects m = 1
// (the formula evaluates digamma at 0 there).
double expected_prior_kl(double a, std::size_t n_sticks, std::size_t m);

}  // namespace dpcheck

#endif
