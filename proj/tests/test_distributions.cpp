#include <doctest.h>

#include <cmath>
#include <vector>

#include "dpcheck/distributions.hpp"
#include "dpcheck/errors.hpp"
#include "dpcheck/rng.hpp"
#include "helpers.hpp"

using namespace dpcheck;

TEST_SUITE("distributions") {

TEST_CASE("family names round-trip") {
  for (Family f : {Family::normal_location_unit_variance, Family::normal, Family::gumbel,
                   Family::student_t, Family::cauchy, Family::normal_mixture_2})
    CHECK(family_from_name(family_name(f)) == f);
  CHECK_THROWS_AS(family_from_name("weibull"), input_error);
}

TEST_CASE("make_model validates parameter invariants") {
  CHECK_THROWS_AS(make_model(Family::normal, {0.0}), input_error);
  CHECK_THROWS_AS(make_model(Family::normal, {0.0, -1.0}), input_error);
  CHECK_THROWS_AS(make_model(Family::gumbel, {0.0, 0.0}), input_error);
  CHECK_THROWS_AS(make_model(Family::student_t, {-3.0}), input_error);
  CHECK_THROWS_AS(make_model(Family::cauchy, {0.0, -2.0}), input_error);
  CHECK_THROWS_AS(make_model(Family::normal_mixture_2, {1.5, 0.0, 1.0, 1.0, 1.0}),
                  input_error);
  CHECK_NOTHROW(make_model(Family::normal_mixture_2, {0.5, -2.0, 1.0, 2.0, 1.0}));
}

TEST_CASE("parse_model_spec") {
  const FittedModel g = parse_model_spec("gumbel:0,1");
  CHECK(g.family == Family::gumbel);
  CHECK(g.params == std::vector<double>{0.0, 1.0});
  const FittedModel mix = parse_model_spec("normal-mixture-2:0.5,-2,1,2,1");
  CHECK(mix.params.size() == 5);
  CHECK_THROWS_AS(parse_model_spec("gumbel:0"), input_error);
  CHECK_THROWS_AS(parse_model_spec("gumbel:0,abc"), input_error);
  CHECK_THROWS_AS(parse_model_spec("nope:1"), input_error);
}

TEST_CASE("reference cdf values") {
  CHECK(normal_cdf(0.0) == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(normal_cdf(1.0) == doctest::Approx(0.8413447460685429).epsilon(1e-12));
  CHECK(normal_cdf(1.96) == doctest::Approx(0.9750021048517795).epsilon(1e-12));
  CHECK(normal_quantile(0.975) == doctest::Approx(1.959963984540054).epsilon(1e-10));

  const FittedModel t3 = make_model(Family::student_t, {3.0});
  CHECK(cdf(t3, 1.0) == doctest::Approx(0.8044988905221148).epsilon(1e-10));
  CHECK(cdf(t3, 0.0) == doctest::Approx(0.5).epsilon(1e-14));

  const FittedModel cau = make_model(Family::cauchy, {0.0, 1.0});
  CHECK(cdf(cau, 1.0) == doctest::Approx(0.75).epsilon(1e-14));

  const FittedModel t1 = make_model(Family::student_t, {1.0});
  CHECK(cdf(t1, 1.0) == doctest::Approx(0.75).epsilon(1e-10));

  const FittedModel gum = make_model(Family::gumbel, {2.0, 3.0});
  CHECK(cdf(gum, 2.0) == doctest::Approx(std::exp(-1.0)).epsilon(1e-14));

  const FittedModel mix = make_model(Family::normal_mixture_2, {0.5, -2.0, 1.0, 2.0, 1.0});
  CHECK(cdf(mix, 0.0) == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("incomplete beta identities") {
  CHECK(incomplete_beta(1.0, 1.0, 0.3) == doctest::Approx(0.3).epsilon(1e-12));
  CHECK(incomplete_beta(0.5, 0.5, 0.5) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(incomplete_beta(2.0, 5.0, 0.0) == 0.0);
  CHECK(incomplete_beta(2.0, 5.0, 1.0) == 1.0);
}

TEST_CASE("quantile then cdf round-trips over the central 99%") {
  const std::vector<FittedModel> models = {
      make_model(Family::normal_location_unit_variance, {1.5}),
      make_model(Family::normal, {-2.0, 4.0}),
      make_model(Family::gumbel, {0.0, 1.0}),
      make_model(Family::student_t, {3.0}),
      make_model(Family::cauchy, {1.0, 2.0}),
      make_model(Family::normal_mixture_2, {0.5, -2.0, 1.0, 2.0, 1.0})};
  for (const FittedModel& m : models) {
    for (int k = 1; k <= 198; ++k) {
      const double p = 0.005 + 0.99 * (k - 1) / 197.0;
      CHECK(std::fabs(cdf(m, quantile(m, p)) - p) <= 1e-8);
    }
  }
}

TEST_CASE("quantile rejects probabilities outside (0,1)") {
  const FittedModel m = make_model(Family::normal, {0.0, 1.0});
  CHECK_THROWS_AS(quantile(m, 0.0), input_error);
  CHECK_THROWS_AS(quantile(m, 1.0), input_error);
  CHECK_THROWS_AS(normal_quantile(-0.5), input_error);
}

TEST_CASE("sampling is deterministic and hits the right moments") {
  const FittedModel m = make_model(Family::normal, {3.0, 4.0});
  Rng r1(11), r2(11);
  const auto s1 = sample(m, 5000, r1);
  const auto s2 = sample(m, 5000, r2);
  CHECK(s1 == s2);
  CHECK(testutil::mean(s1) == doctest::Approx(3.0).epsilon(0.05));
}

TEST_CASE("normal fits use the n divisor") {
  const std::vector<double> data = {1.0, 2.0, 3.0, 4.0};
  const FittedModel m = fit_mle(Family::normal, data);
  CHECK(m.params[0] == doctest::Approx(2.5).epsilon(1e-14));
  CHECK(m.params[1] == doctest::Approx(1.25).epsilon(1e-14));
  const FittedModel loc = fit_mle(Family::normal_location_unit_variance, data);
  CHECK(loc.params[0] == doctest::Approx(2.5).epsilon(1e-14));
}

TEST_CASE("gumbel fit solves the likelihood score equations") {
  const FittedModel m = fit_mle(Family::gumbel, testutil::rainfall);
  const double xi = m.params[0], beta = m.params[1];
  // Independently computed maximizer of the Gumbel likelihood on this series.
  CHECK(xi == doctest::Approx(74.54858351231803).epsilon(1e-8));
  CHECK(beta == doctest::Approx(32.43306580709962).epsilon(1e-8));
  // Score equations at the fit.
  double sw = 0.0, sxw = 0.0, sx = 0.0;
  for (double x : testutil::rainfall) {
    const double w = std::exp(-(x - xi) / beta);
    sw += w;
    sxw += (x - xi) * w;
    sx += x - xi;
  }
  const auto n = static_cast<double>(testutil::rainfall.size());
  CHECK(std::fabs(sw / n - 1.0) <= 1e-10);                   // location equation
  CHECK(std::fabs(beta - sx / n + sxw / sw) <= 1e-6);        // scale equation
}

TEST_CASE("gumbel fit is location-equivariant") {
  const FittedModel base = fit_mle(Family::gumbel, testutil::rainfall);
  std::vector<double> shifted = testutil::rainfall;
  for (double& x : shifted) x += 100.0;
  const FittedModel moved = fit_mle(Family::gumbel, shifted);
  CHECK(moved.params[0] == doctest::Approx(base.params[0] + 100.0).epsilon(1e-9));
  CHECK(moved.params[1] == doctest::Approx(base.params[1]).epsilon(1e-9));
}

TEST_CASE("fit_mle error paths") {
  const std::vector<double> constant = {2.0, 2.0, 2.0};
  CHECK_THROWS_AS(fit_mle(Family::normal, constant), fit_error);
  CHECK_THROWS_AS(fit_mle(Family::gumbel, constant), fit_error);
  const std::vector<double> one = {1.0};
  CHECK_THROWS_AS(fit_mle(Family::normal, one), input_error);
  const std::vector<double> ok = {1.0, 2.0, 3.0};
  CHECK_THROWS_AS(fit_mle(Family::cauchy, ok), input_error);
}

}  // TEST_SUITE
