#include "dpcheck/distributions.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "dpcheck/errors.hpp"

namespace dpcheck {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kLogSqrt2Pi = 0.9189385332046727;  // log sqrt(2*pi)

void require_finite(double y) {
  if (!std::isfinite(y)) throw input_error("evaluation point must be finite");
}

double sq(double x) { return x * x; }

// Continued fraction for the incomplete beta (Lentz's method).
double betacf(double a, double b, double x) {
  const double tiny = 1e-300;
  const double qab = a + b, qap = a + 1.0, qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::fabs(d) < tiny) d = tiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= 300; ++m) {
    const int m2 = 2 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < tiny) d = tiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < tiny) c = tiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < tiny) d = tiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) < 1e-15) break;
  }
  return h;
}

// Peter Acklam's rational approximation, |relative error| < 1.15e-9,
// followed by one Halley step for full double precision.
double inv_normal_cdf(double p) {
  static const double A[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                             -2.759285104469687e+02, 1.383577518672690e+02,
                             -3.066479806614716e+01, 2.506628277459239e+00};
  static const double B[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                             -1.556989798598866e+02, 6.680131188771972e+01,
                             -1.328068155288572e+01};
  static const double C[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                             -2.400758277161838e+00, -2.549732539343734e+00,
                             4.374664141464968e+00,  2.938163982698783e+00};
  static const double D[] = {7.784695709041462e-03, 3.224671290700398e-01,
                             2.445134137142996e+00, 3.754408661907416e+00};
  const double plow = 0.02425, phigh = 1.0 - plow;
  double x;
  if (p < plow) {
    const double q = std::sqrt(-2.0 * std::log(p));
    x = (((((C[0] * q + C[1]) * q + C[2]) * q + C[3]) * q + C[4]) * q + C[5]) /
        ((((D[0] * q + D[1]) * q + D[2]) * q + D[3]) * q + 1.0);
  } else if (p <= phigh) {
    const double q = p - 0.5, r = q * q;
    x = (((((A[0] * r + A[1]) * r + A[2]) * r + A[3]) * r + A[4]) * r + A[5]) * q /
        (((((B[0] * r + B[1]) * r + B[2]) * r + B[3]) * r + B[4]) * r + 1.0);
  } else {
    const double q = std::sqrt(-2.0 * std::log(1.0 - p));
    x = -(((((C[0] * q + C[1]) * q + C[2]) * q + C[3]) * q + C[4]) * q + C[5]) /
        ((((D[0] * q + D[1]) * q + D[2]) * q + D[3]) * q + 1.0);
  }
  // Halley refinement against the exact CDF.
  const double e = 0.5 * std::erfc(-x / std::numbers::sqrt2) - p;
  const double u = e * std::sqrt(2.0 * kPi) * std::exp(x * x / 2.0);
  x = x - u / (1.0 + x * u / 2.0);
  return x;
}

struct GumbelParams {
  double xi, beta;
};

GumbelParams gumbel_params(const FittedModel& m) { return {m.params[0], m.params[1]}; }

std::size_t expected_param_count(Family f) {
  switch (f) {
    case Family::normal_location_unit_variance: return 1;
    case Family::normal: return 2;
    case Family::gumbel: return 2;
    case Family::student_t: return 1;
    case Family::cauchy: return 2;
    case Family::normal_mixture_2: return 5;
  }
  throw input_error("unknown family");
}

// Monotone root bracketing + bisection, then Newton polish with the pdf.
double invert_cdf(const FittedModel& model, double p, double lo, double hi) {
  while (cdf(model, lo) > p) {
    hi = lo;
    lo = lo >= 0 ? -1.0 : lo * 2.0;
    if (!std::isfinite(lo)) throw estimator_error("quantile bracket underflow");
  }
  while (cdf(model, hi) < p) {
    lo = hi;
    hi = hi <= 0 ? 1.0 : hi * 2.0;
    if (!std::isfinite(hi)) throw estimator_error("quantile bracket overflow");
  }
  for (int it = 0; it < 200 && hi - lo > 1e-15 * (1.0 + std::fabs(lo)); ++it) {
    const double mid = 0.5 * (lo + hi);
    (cdf(model, mid) < p ? lo : hi) = mid;
  }
  double x = 0.5 * (lo + hi);
  for (int it = 0; it < 3; ++it) {
    const double f = pdf(model, x);
    if (f <= 0.0) break;
    const double step = (cdf(model, x) - p) / f;
    const double next = x - step;
    if (next <= lo || next >= hi) break;
    x = next;
  }
  return x;
}

}  // namespace

std::string family_name(Family f) {
  switch (f) {
    case Family::normal_location_unit_variance: return "normal-location-unit-variance";
    case Family::normal: return "normal";
    case Family::gumbel: return "gumbel";
    case Family::student_t: return "student-t";
    case Family::cauchy: return "cauchy";
    case Family::normal_mixture_2: return "normal-mixture-2";
  }
  throw input_error("unknown family");
}

Family family_from_name(std::string_view name) {
  if (name == "normal-location-unit-variance") return Family::normal_location_unit_variance;
  if (name == "normal") return Family::normal;
  if (name == "gumbel") return Family::gumbel;
  if (name == "student-t") return Family::student_t;
  if (name == "cauchy") return Family::cauchy;
  if (name == "normal-mixture-2") return Family::normal_mixture_2;
  throw input_error("unknown family name: " + std::string(name));
}

FittedModel make_model(Family family, std::vector<double> params) {
  if (params.size() != expected_param_count(family))
    throw input_error(family_name(family) + " expects " +
                      std::to_string(expected_param_count(family)) + " parameters, got " +
                      std::to_string(params.size()));
  for (double p : params)
    if (!std::isfinite(p)) throw input_error("non-finite parameter");
  switch (family) {
    case Family::normal:
      if (params[1] <= 0.0) throw input_error("normal variance must be positive");
      break;
    case Family::gumbel:
      if (params[1] <= 0.0) throw input_error("gumbel scale must be positive");
      break;
    case Family::student_t:
      if (params[0] <= 0.0) throw input_error("student-t degrees of freedom must be positive");
      break;
    case Family::cauchy:
      if (params[1] <= 0.0) throw input_error("cauchy scale must be positive");
      break;
    case Family::normal_mixture_2:
      if (params[0] <= 0.0 || params[0] >= 1.0)
        throw input_error("mixture weight must be in (0,1)");
      if (params[2] <= 0.0 || params[4] <= 0.0)
        throw input_error("mixture component variances must be positive");
      break;
    default: break;
  }
  return FittedModel{family, std::move(params)};
}

FittedModel parse_model_spec(std::string_view spec) {
  const auto colon = spec.find(':');
  const Family family = family_from_name(spec.substr(0, colon));
  std::vector<double> params;
  if (colon != std::string_view::npos) {
    std::string rest(spec.substr(colon + 1));
    std::replace(rest.begin(), rest.end(), ',', ' ');
    std::istringstream in(rest);
    double v;
    while (in >> v) params.push_back(v);
    if (!in.eof()) throw input_error("bad parameter list in model spec: " + std::string(spec));
  }
  return make_model(family, std::move(params));
}

double log_pdf(const FittedModel& m, double y) {
  require_finite(y);
  switch (m.family) {
    case Family::normal_location_unit_variance:
      return -kLogSqrt2Pi - 0.5 * sq(y - m.params[0]);
    case Family::normal:
      return -kLogSqrt2Pi - 0.5 * std::log(m.params[1]) - sq(y - m.params[0]) / (2.0 * m.params[1]);
    case Family::gumbel: {
      const auto [xi, beta] = gumbel_params(m);
      const double z = (y - xi) / beta;
      return -std::log(beta) - z - std::exp(-z);
    }
    case Family::student_t: {
      const double nu = m.params[0];
      return std::lgamma((nu + 1.0) / 2.0) - std::lgamma(nu / 2.0) -
             0.5 * std::log(nu * kPi) - (nu + 1.0) / 2.0 * std::log1p(y * y / nu);
    }
    case Family::cauchy: {
      const double z = (y - m.params[0]) / m.params[1];
      return -std::log(kPi * m.params[1] * (1.0 + z * z));
    }
    case Family::normal_mixture_2: {
      const double w = m.params[0];
      const double l1 = -kLogSqrt2Pi - 0.5 * std::log(m.params[2]) -
                        sq(y - m.params[1]) / (2.0 * m.params[2]);
      const double l2 = -kLogSqrt2Pi - 0.5 * std::log(m.params[4]) -
                        sq(y - m.params[3]) / (2.0 * m.params[4]);
      const double hi = std::max(l1 + std::log(w), l2 + std::log1p(-w));
      const double lo = std::min(l1 + std::log(w), l2 + std::log1p(-w));
      return hi + std::log1p(std::exp(lo - hi));
    }
  }
  throw input_error("unknown family");
}

double pdf(const FittedModel& m, double y) { return std::exp(log_pdf(m, y)); }

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::numbers::sqrt2); }

double normal_quantile(double p) {
  if (!(p > 0.0 && p < 1.0)) throw input_error("quantile probability must be in (0,1)");
  return inv_normal_cdf(p);
}

double incomplete_beta(double a, double b, double x) {
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  const double ln_front = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                          a * std::log(x) + b * std::log1p(-x);
  const double front = std::exp(ln_front);
  if (x < (a + 1.0) / (a + b + 2.0)) return front * betacf(a, b, x) / a;
  return 1.0 - front * betacf(b, a, 1.0 - x) / b;
}

double cdf(const FittedModel& m, double y) {
  require_finite(y);
  switch (m.family) {
    case Family::normal_location_unit_variance:
      return normal_cdf(y - m.params[0]);
    case Family::normal:
      return normal_cdf((y - m.params[0]) / std::sqrt(m.params[1]));
    case Family::gumbel: {
      const auto [xi, beta] = gumbel_params(m);
      return std::exp(-std::exp(-(y - xi) / beta));
    }
    case Family::student_t: {
      const double nu = m.params[0];
      if (y == 0.0) return 0.5;
      const double x = nu / (nu + y * y);
      const double tail = 0.5 * incomplete_beta(nu / 2.0, 0.5, x);
      return y > 0.0 ? 1.0 - tail : tail;
    }
    case Family::cauchy:
      return 0.5 + std::atan((y - m.params[0]) / m.params[1]) / kPi;
    case Family::normal_mixture_2: {
      const double w = m.params[0];
      return w * normal_cdf((y - m.params[1]) / std::sqrt(m.params[2])) +
             (1.0 - w) * normal_cdf((y - m.params[3]) / std::sqrt(m.params[4]));
    }
  }
  throw input_error("unknown family");
}

double quantile(const FittedModel& m, double p) {
  if (!(p > 0.0 && p < 1.0)) throw input_error("quantile probability must be in (0,1)");
  switch (m.family) {
    case Family::normal_location_unit_variance:
      return m.params[0] + inv_normal_cdf(p);
    case Family::normal:
      return m.params[0] + std::sqrt(m.params[1]) * inv_normal_cdf(p);
    case Family::gumbel: {
      const auto [xi, beta] = gumbel_params(m);
      return xi - beta * std::log(-std::log(p));
    }
    case Family::cauchy:
      return m.params[0] + m.params[1] * std::tan(kPi * (p - 0.5));
    case Family::student_t:
    case Family::normal_mixture_2:
      return invert_cdf(m, p, -1.0, 1.0);
  }
  throw input_error("unknown family");
}

std::vector<double> sample(const FittedModel& m, std::size_t n, Rng& rng) {
  if (n == 0) throw input_error("sample size must be positive");
  std::vector<double> out(n);
  for (double& y : out) y = quantile(m, rng.uniform());
  return out;
}

FittedModel fit_mle(Family family, std::span<const double> data) {
  const std::size_t n = data.size();
  if (n < 2) throw input_error("fit_mle needs at least 2 observations");
  double mean = 0.0;
  for (double x : data) {
    if (!std::isfinite(x)) throw input_error("non-finite observation");
    mean += x;
  }
  mean /= static_cast<double>(n);
  double ssq = 0.0;
  for (double x : data) ssq += sq(x - mean);
  const double var = ssq / static_cast<double>(n);  // divisor n, not n-1

  switch (family) {
    case Family::normal_location_unit_variance:
      return make_model(family, {mean});
    case Family::normal:
      if (var <= 0.0) throw fit_error("degenerate data: zero variance");
      return make_model(family, {mean, var});
    case Family::gumbel: {
      if (var <= 0.0) throw fit_error("degenerate data: zero variance");
      // Profile equation in beta:  g(beta) = -sum s*w / sum w - beta = 0,
      // with s = x - mean, w = exp(-s/beta); g is strictly decreasing.
      std::vector<double> s(n);
      for (std::size_t i = 0; i < n; ++i) s[i] = data[i] - mean;
      const auto g = [&](double beta) {
        double sw = 0.0, sxw = 0.0;
        for (double si : s) {
          const double w = std::exp(-si / beta);
          sw += w;
          sxw += si * w;
        }
        return -sxw / sw - beta;
      };
      const auto gprime = [&](double beta) {
        double sw = 0.0, sxw = 0.0, sxxw = 0.0;
        for (double si : s) {
          const double w = std::exp(-si / beta);
          sw += w;
          sxw += si * w;
          sxxw += si * si * w;
        }
        const double ex = sxw / sw;
        return -(sxxw / sw - ex * ex) / (beta * beta) - 1.0;
      };
      double beta = std::sqrt(var) * std::sqrt(6.0) / kPi;
      double lo = beta, hi = beta;
      while (g(lo) < 0.0) lo /= 2.0;
      while (g(hi) > 0.0) hi *= 2.0;
      const int max_iter = 100;
      int it = 0;
      for (; it < max_iter; ++it) {
        const double gb = g(beta);
        if (std::fabs(gb) < 1e-12 * beta) break;
        (gb > 0.0 ? lo : hi) = beta;
        const double step = gb / gprime(beta);
        double next = beta - step;
        if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);  // bisection fallback
        if (std::fabs(next - beta) < 1e-14 * beta) {
          beta = next;
          break;
        }
        beta = next;
      }
      if (it == max_iter)
        throw fit_error("gumbel profile solve did not converge in " +
                        std::to_string(max_iter) + " iterations");
      double sw = 0.0;
      for (double si : s) sw += std::exp(-si / beta);
      const double xi = mean - beta * std::log(sw / static_cast<double>(n));
      return make_model(family, {xi, beta});
    }
    default:
      throw input_error("fit_mle not available for family " + family_name(family));
  }
}

}  // namespace dpcheck
