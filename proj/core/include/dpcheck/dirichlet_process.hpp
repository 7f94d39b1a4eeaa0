#ifndef DPCHECK_DIRICHLET_PROCESS_HPP
#define DPCHECK_DIRICHLET_PROCESS_HPP

#include <cstddef>
#include <span>
#include <vector>

#include "dpcheck/distributions.hpp"
#include "dpcheck/rng.hpp"

namespace dpcheck {

// Truncated Dirichlet process realization: a finite weighted atom set, kept
// sorted by atom value with each weight bound to its atom.
struct DiscreteMeasure {
  std::vector<double> atoms;    // nondecreasing (strictly increasing after merge_atoms)
  std::vector<double> weights;  // aligned with atoms, nonnegative, sums to 1
  std::size_t truncation = 0;   // stick count N used to generate it
  double concentration = 0.0;

  std::size_t size() const { return atoms.size(); }
};

// Posterior base G_x = a/(a+n) G + n/(a+n) F_n.
struct PosteriorBase {
  FittedModel prior_model;   // G
  std::vector<double> data;  // x_1..x_n
  double prior_mass;         // a

  double data_mass() const { return static_cast<double>(data.size()); }
  // P(atom comes from the continuous base G).
  double base_fraction() const { return prior_mass / (prior_mass + data_mass()); }
  double cdf_at(double t) const;  // G_x((-inf, t])
};

// Truncated stick-breaking weights: beta_i ~ Beta(1,a) for i < N, beta_N = 1.
std::vector<double> stick_break_weights(double a, std::size_t n_sticks, Rng& rng);

// One realization of DP(a, base), truncated at N sticks. N >= 4.
DiscreteMeasure sample_prior_dp(double a, const FittedModel& base, std::size_t n_sticks, Rng& rng);

// One realization of the posterior DP(a+n, G_x), truncated at N sticks.
DiscreteMeasure sample_posterior_dp(const PosteriorBase& pb, std::size_t n_sticks, Rng& rng);

// Collapse exactly-equal atoms, summing their weights. Atoms come out
// strictly increasing; total weight is preserved exactly.
DiscreteMeasure merge_atoms(const DiscreteMeasure& measure);

}  // namespace dpcheck

#endif
