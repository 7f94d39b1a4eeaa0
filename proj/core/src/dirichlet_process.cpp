#include "dpcheck/dirichlet_process.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "dpcheck/errors.hpp"

namespace dpcheck {

namespace {

// Sort atoms ascending, carrying each weight with its atom.
void sort_pairs(std::vector<double>& atoms, std::vector<double>& weights) {
  const std::size_t n = atoms.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t i, std::size_t j) { return atoms[i] < atoms[j]; });
  std::vector<double> a(n), w(n);
  for (std::size_t k = 0; k < n; ++k) {
    a[k] = atoms[order[k]];
    w[k] = weights[order[k]];
  }
  atoms = std::move(a);
  weights = std::move(w);
}

}  // namespace

double PosteriorBase::cdf_at(double t) const {
  double below = 0.0;
  for (double x : data)
    if (x <= t) below += 1.0;
  const double n = data_mass();
  return base_fraction() * cdf(prior_model, t) + (1.0 - base_fraction()) * below / n;
}

std::vector<double> stick_break_weights(double a, std::size_t n_sticks, Rng& rng) {
  if (!(a > 0.0)) throw input_error("concentration must be positive");
  if (n_sticks == 0) throw input_error("stick count must be positive");
  std::vector<double> weights(n_sticks);
  double remaining = 1.0;
  for (std::size_t i = 0; i + 1 < n_sticks; ++i) {
    // Beta(1,a) by inverse CDF: 1 - (1-u)^(1/a).
    const double beta = 1.0 - std::pow(1.0 - rng.uniform(), 1.0 / a);
    weights[i] = beta * remaining;
    remaining = std::max(remaining - weights[i], 0.0);
  }
  weights[n_sticks - 1] = remaining;  // beta_N = 1
  return weights;
}

DiscreteMeasure sample_prior_dp(double a, const FittedModel& base, std::size_t n_sticks,
                                Rng& rng) {
  if (n_sticks < 4) throw input_error("truncation must be at least 4");
  DiscreteMeasure m;
  m.weights = stick_break_weights(a, n_sticks, rng);
  m.atoms.resize(n_sticks);
  for (double& y : m.atoms) y = quantile(base, rng.uniform());
  sort_pairs(m.atoms, m.weights);
  m.truncation = n_sticks;
  m.concentration = a;
  return m;
}

DiscreteMeasure sample_posterior_dp(const PosteriorBase& pb, std::size_t n_sticks, Rng& rng) {
  if (pb.data.empty()) throw input_error("posterior base needs data");
  if (n_sticks < 4) throw input_error("truncation must be at least 4");
  const double conc = pb.prior_mass + pb.data_mass();
  DiscreteMeasure m;
  m.weights = stick_break_weights(conc, n_sticks, rng);
  m.atoms.resize(n_sticks);
  const double p_base = pb.base_fraction();
  for (double& y : m.atoms) {
    if (rng.uniform() < p_base)
      y = quantile(pb.prior_model, rng.uniform());
    else
      y = pb.data[rng.below(pb.data.size())];
  }
  sort_pairs(m.atoms, m.weights);
  m.truncation = n_sticks;
  m.concentration = conc;
  return m;
}

DiscreteMeasure merge_atoms(const DiscreteMeasure& measure) {
  DiscreteMeasure out;
  out.truncation = measure.truncation;
  out.concentration = measure.concentration;
  out.atoms.reserve(measure.size());
  out.weights.reserve(measure.size());
  for (std::size_t i = 0; i < measure.size(); ++i) {
    if (!out.atoms.empty() && measure.atoms[i] == out.atoms.back())
      out.weights.back() += measure.weights[i];
    else {
      out.atoms.push_back(measure.atoms[i]);
      out.weights.push_back(measure.weights[i]);
    }
  }
  return out;
}

}  // namespace dpcheck
