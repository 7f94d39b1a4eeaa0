#include "dpcheck/divergence.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <string>

#include "dpcheck/errors.hpp"

namespace dpcheck {

namespace {

void check_window(std::size_t n, std::size_t m) {
  if (m < 1 || m > (n - 1) / 2)
    throw input_error("window m=" + std::to_string(m) + " invalid for N=" + std::to_string(n));
}

void check_measure(const DiscreteMeasure& measure, std::size_t m) {
  const std::size_t n = measure.size();
  if (n < 3) throw input_error("measure needs at least 3 atoms");
  if (measure.weights.size() != n) throw input_error("atom/weight length mismatch");
  check_window(n, m);
  for (std::size_t i = 1; i < n; ++i)
    if (!(measure.atoms[i] > measure.atoms[i - 1]))
      throw input_error("atoms must be strictly increasing (merge duplicates first)");
}

// Spacing Y_(i+m) - Y_(i-m) with order statistics clamped to [1, N], 1-based i.
double clamped_spacing(const std::vector<double>& atoms, std::size_t i, std::size_t m) {
  const std::size_t n = atoms.size();
  const std::size_t hi = std::min(i + m, n);
  const std::size_t lo = i > m ? i - m : std::size_t{1};
  return atoms[hi - 1] - atoms[lo - 1];
}

}  // namespace

std::size_t window_size(std::size_t n_atoms) {
  if (n_atoms < 4) throw input_error("window rule needs N >= 4");
  auto m = static_cast<std::size_t>(std::floor(std::sqrt(static_cast<double>(n_atoms)) + 0.5));
  return std::clamp<std::size_t>(m, 1, (n_atoms - 1) / 2);
}

std::vector<double> c_weights(const std::vector<double>& weights, std::size_t m) {
  const std::size_t n = weights.size();
  if (n < 3) throw input_error("need at least 3 weights");
  check_window(n, m);
  // Direct window sums on purpose: differencing a prefix-sum array cancels to
  // exact zero in the far tail of stick-breaking weights.
  std::vector<double> c(n);
  for (std::size_t i = 1; i <= n; ++i) {
    std::size_t lo, hi;  // 1-based inclusive summation range
    if (i <= m) {
      lo = 2;
      hi = i + m;
    } else if (i <= n - m) {
      lo = i - m + 1;
      hi = i + m;
    } else {
      lo = i - m + 1;
      hi = n;
    }
    double s = 0.0;
    for (std::size_t k = lo; k <= hi; ++k) s += weights[k - 1];
    if (!(s > 0.0))
      throw estimator_error("window weight c_" + std::to_string(i) + " is not positive");
    c[i - 1] = s;
  }
  return c;
}

double entropy_estimate(const DiscreteMeasure& measure, std::size_t m) {
  check_measure(measure, m);
  const std::size_t n = measure.size();
  const std::vector<double> c = c_weights(measure.weights, m);
  double h = 0.0;
  for (std::size_t i = 1; i <= n; ++i) {
    const double w = measure.weights[i - 1];
    if (w == 0.0) continue;
    h += w * std::log(clamped_spacing(measure.atoms, i, m) / c[i - 1]);
  }
  return h;
}

double kl_estimate(const DiscreteMeasure& measure,
                   const std::function<double(double)>& log_density, std::size_t m) {
  const double h = entropy_estimate(measure, m);
  double cross = 0.0;
  for (std::size_t i = 0; i < measure.size(); ++i) {
    const double w = measure.weights[i];
    if (w == 0.0) continue;
    const double lf = log_density(measure.atoms[i]);
    if (!std::isfinite(lf))
      throw estimator_error("model density vanishes at atom " +
                            std::to_string(measure.atoms[i]));
    cross += w * lf;
  }
  return -h - cross;
}

double kl_estimate(const DiscreteMeasure& measure, const FittedModel& model, std::size_t m) {
  return kl_estimate(
      measure, [&model](double y) { return log_pdf(model, y); }, m);
}

double kl_location_normal(const DiscreteMeasure& measure, double xbar, std::size_t m) {
  const double h = entropy_estimate(measure, m);
  double ss = 0.0;
  for (std::size_t i = 0; i < measure.size(); ++i) {
    const double d = measure.atoms[i] - xbar;
    ss += measure.weights[i] * d * d;
  }
  return -h + 0.5 * std::log(2.0 * std::numbers::pi) + 0.5 * ss;
}

double prior_kl_uniform_fastpath(double a, std::size_t n_sticks, std::size_t m, Rng& rng) {
  if (n_sticks < 4) throw input_error("fast path needs N >= 4");
  check_window(n_sticks, m);
  std::vector<double> weights = stick_break_weights(a, n_sticks, rng);
  std::vector<double> u(n_sticks);
  for (double& x : u) x = rng.uniform();

  std::vector<std::size_t> order(n_sticks);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&u](std::size_t i, std::size_t j) { return u[i] < u[j]; });
  std::vector<double> su(n_sticks), sw(n_sticks);
  for (std::size_t k = 0; k < n_sticks; ++k) {
    su[k] = u[order[k]];
    sw[k] = weights[order[k]];
  }

  const std::vector<double> c = c_weights(sw, m);
  double d = 0.0;
  for (std::size_t i = 1; i <= n_sticks; ++i) {
    const double w = sw[i - 1];
    if (w == 0.0) continue;
    d -= w * std::log(clamped_spacing(su, i, m) / c[i - 1]);
  }
  return d;
}

double digamma(double x) {
  if (!(x > 0.0)) throw input_error("digamma requires a positive argument");
  double result = 0.0;
  while (x < 10.0) {
    result -= 1.0 / x;
    x += 1.0;
  }
  const double inv = 1.0 / x;
  const double inv2 = inv * inv;
  // Asymptotic expansion; |error| < 1e-12 for x >= 10.
  result += std::log(x) - 0.5 * inv -
            inv2 * (1.0 / 12.0 -
                    inv2 * (1.0 / 120.0 -
                            inv2 * (1.0 / 252.0 -
                                    inv2 * (1.0 / 240.0 - inv2 * (1.0 / 132.0)))));
  return result;
}

double expected_prior_kl(double a, std::size_t n_sticks, std::size_t m) {
  if (!(a > 0.0)) throw input_error("concentration must be positive");
  if (n_sticks < 4) throw input_error("expected_prior_kl needs N >= 4");
  check_window(n_sticks, m);
  if (m == 1)
    throw input_error(
        "expected_prior_kl is undefined at m = 1 (the formula evaluates digamma at 0)");
  const double n = static_cast<double>(n_sticks);
  const double md = static_cast<double>(m);
  double sum = 0.0;
  for (std::size_t i = 1; i <= m; ++i) {
    const double k = md + static_cast<double>(i) - 1.0;
    sum += digamma(a * k / n + 1.0) - digamma(k);
  }
  return (2.0 / n) * sum +
         ((n - 2.0 * md) / n) * (digamma(2.0 * a * md / n + 1.0) - digamma(2.0 * md)) +
         digamma(n + 1.0) - digamma(a + 1.0);
}

}  // namespace dpcheck
