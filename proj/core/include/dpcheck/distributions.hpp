#ifndef DPCHECK_DISTRIBUTIONS_HPP
#define DPCHECK_DISTRIBUTIONS_HPP

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "dpcheck/rng.hpp"

namespace dpcheck {

enum class Family {
  normal_location_unit_variance,  // params: mu
  normal,                         // params: mu, sigma2
  gumbel,                         // params: location xi, scale beta
  student_t,                      // params: nu          (generator only)
  cauchy,                         // params: x0, gamma   (generator only)
  normal_mixture_2,               // params: w, mu1, sigma1^2, mu2, sigma2^2  (generator only)
};

std::string family_name(Family f);
Family family_from_name(std::string_view name);

// A parametric family plus a concrete parameter vector.
struct FittedModel {
  Family family;
  std::vector<double> params;
};

// Validates the family-specific parameter invariants (positive scales,
// mixture weight in (0,1)) and returns the model.
FittedModel make_model(Family family, std::vector<double> params);

// Parse "gumbel:0,1", "normal-mixture-2:0.5,-2,1,2,1", "student-t:3", ...
FittedModel parse_model_spec(std::string_view spec);

double pdf(const FittedModel& model, double y);
double log_pdf(const FittedModel& model, double y);
double cdf(const FittedModel& model, double y);
double quantile(const FittedModel& model, double p);

// n i.i.d. draws by inverse-CDF; deterministic given the generator state.
std::vector<double> sample(const FittedModel& model, std::size_t n, Rng& rng);

// Maximum-likelihood fit. Supported: normal-location-unit-variance, normal,
// gumbel. The Gumbel scale solves the profile equation by safeguarded Newton.
FittedModel fit_mle(Family family, std::span<const double> data);

// Standard-normal helpers used across the library.
double normal_cdf(double z);
double normal_quantile(double p);

// Regularized incomplete beta I_x(a, b).
double incomplete_beta(double a, double b, double x);

}  // namespace dpcheck

#endif
