#include <doctest.h>

#include <cmath>
#include <numeric>
#include <vector>

#include "dpcheck/errors.hpp"
#include "dpcheck/relative_belief.hpp"
#include "helpers.hpp"

using namespace dpcheck;

namespace {

CheckConfig base_config(double a, std::uint64_t seed) {
  CheckConfig cfg;
  cfg.a = a;
  cfg.seed = seed;
  return cfg;
}

DivergenceSample make_sample(std::vector<double> draws, SampleKind kind) {
  DivergenceSample s;
  s.draws = std::move(draws);
  s.kind = kind;
  return s;
}

std::vector<double> normal_data_20(std::uint64_t seed) {
  const FittedModel truth = make_model(Family::normal, {0.0, 1.0});
  Rng rng(seed);
  return sample(truth, 20, rng);
}

}  // namespace

TEST_SUITE("relative_belief") {

TEST_CASE("config validation") {
  CHECK_NOTHROW(base_config(1.0, 1).validate());
  auto bad = base_config(0.0, 1);
  CHECK_THROWS_AS(bad.validate(), input_error);
  bad = base_config(1.0, 1);
  bad.N = 3;
  CHECK_THROWS_AS(bad.validate(), input_error);
  bad = base_config(1.0, 1);
  bad.i0 = 0;
  CHECK_THROWS_AS(bad.validate(), input_error);
  bad = base_config(1.0, 1);
  bad.i0 = 20;
  CHECK_THROWS_AS(bad.validate(), input_error);
  bad = base_config(1.0, 1);
  bad.r1 = 10;
  CHECK_THROWS_AS(bad.validate(), input_error);
}

TEST_CASE("summarize on a known vector") {
  std::vector<double> v(100);
  std::iota(v.begin(), v.end(), 1.0);  // 1..100
  const SampleSummary s = summarize(v);
  CHECK(s.mean == doctest::Approx(50.5).epsilon(1e-14));
  CHECK(s.median == doctest::Approx(50.0).epsilon(1e-14));
  CHECK(s.q05 == doctest::Approx(5.0).epsilon(1e-14));
  CHECK(s.q95 == doctest::Approx(95.0).epsilon(1e-14));
  CHECK_THROWS_AS(summarize({}), input_error);
}

TEST_CASE("rb_analysis hand example") {
  std::vector<double> prior(20);
  std::iota(prior.begin(), prior.end(), 1.0);  // 1..20
  const auto ps = make_sample(prior, SampleKind::prior);
  const auto qs = make_sample({1.5, 2.5, 2.6, 19.5}, SampleKind::posterior);
  const RBReport rep = rb_analysis(ps, qs, 4, 1);
  REQUIRE(rep.bin_edges.size() == 5);
  CHECK(rep.bin_edges[0] == 0.0);
  CHECK(rep.bin_edges[1] == 5.0);
  CHECK(rep.bin_edges[2] == 10.0);
  CHECK(rep.bin_edges[3] == 15.0);
  CHECK(std::isinf(rep.bin_edges[4]));
  CHECK(rep.d_star == 5.0);
  CHECK(rep.bin_rb == std::vector<double>{3.0, 0.0, 0.0, 1.0});
  CHECK(rep.rb0 == doctest::Approx(3.0).epsilon(1e-14));
  CHECK(rep.strength == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("rb_analysis self-comparison is flat") {
  std::vector<double> draws(2000);
  for (std::size_t i = 0; i < draws.size(); ++i)
    draws[i] = 0.001 * static_cast<double>(i + 1);
  const auto ps = make_sample(draws, SampleKind::prior);
  const auto qs = make_sample(draws, SampleKind::posterior);
  const RBReport rep = rb_analysis(ps, qs, 20, 1);
  for (double rb : rep.bin_rb) CHECK(std::fabs(rb - 1.0) <= 0.05);
  CHECK(std::fabs(rep.rb0 - 1.0) <= 0.05);
}

TEST_CASE("rb_analysis saturates when the posterior sits below d_star") {
  std::vector<double> prior(100);
  std::iota(prior.begin(), prior.end(), 1.0);
  const auto ps = make_sample(prior, SampleKind::prior);
  const auto qs = make_sample(std::vector<double>(50, 0.5), SampleKind::posterior);
  const RBReport rep = rb_analysis(ps, qs, 20, 1);
  CHECK(rep.rb0 == 20.0);
  CHECK(rep.strength == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(rep.at_resolution_limit);
  REQUIRE(!rep.warnings.empty());
}

TEST_CASE("rb_analysis bin contents sum to one") {
  std::vector<double> prior(2000), post(1500);
  for (std::size_t i = 0; i < prior.size(); ++i) {
    Rng rng = Rng::substream(7, {i});
    prior[i] = rng.uniform() * 3.0;
  }
  for (std::size_t i = 0; i < post.size(); ++i) {
    Rng rng = Rng::substream(8, {i});
    post[i] = rng.uniform() * 5.0 - 0.5;  // includes negatives and overflow values
  }
  const RBReport rep = rb_analysis(make_sample(prior, SampleKind::prior),
                                   make_sample(post, SampleKind::posterior), 20, 1);
  const double total = std::accumulate(rep.bin_rb.begin(), rep.bin_rb.end(), 0.0) / 20.0;
  CHECK(std::fabs(total - 1.0) <= 1e-12);
}

TEST_CASE("rb_analysis rejects degenerate priors") {
  const auto ps = make_sample(std::vector<double>(100, 1.0), SampleKind::prior);
  const auto qs = make_sample({0.5}, SampleKind::posterior);
  CHECK_THROWS_AS(rb_analysis(ps, qs, 20, 1), estimator_error);
}

TEST_CASE("prior sample generation is deterministic and thread-invariant") {
  CheckConfig cfg = base_config(1.0, 31337);
  const DivergenceSample s1 = generate_prior_sample(cfg);
  const DivergenceSample s2 = generate_prior_sample(cfg);
  CHECK(s1.draws == s2.draws);
  REQUIRE(s1.draws.size() == cfg.r1);
  CHECK(s1.kind == SampleKind::prior);
  CHECK(s1.window == 14);
  cfg.threads = 4;
  const DivergenceSample s4 = generate_prior_sample(cfg);
  CHECK(s1.draws == s4.draws);
}

TEST_CASE("prior 5% quantile sits in the documented band for a = 1") {
  const CheckConfig cfg = base_config(1.0, 20231115);
  const DivergenceSample s = generate_prior_sample(cfg);
  const double q05 = summarize(s.draws).q05;
  CHECK(q05 >= 0.50);
  CHECK(q05 <= 0.62);
}

TEST_CASE("posterior sample is deterministic and concentrates for in-model data") {
  const std::vector<double> data = normal_data_20(404);
  const FittedModel model = fit_mle(Family::normal_location_unit_variance, data);
  CheckConfig cfg = base_config(1.0, 606);
  const DivergenceSample prior = generate_prior_sample(cfg);
  const DivergenceSample p1 = generate_posterior_sample(cfg, data, model);
  cfg.threads = 3;
  const DivergenceSample p2 = generate_posterior_sample(cfg, data, model);
  CHECK(p1.draws == p2.draws);
  REQUIRE(p1.draws.size() == cfg.r2);
  CHECK(p1.kind == SampleKind::posterior);
  CHECK(summarize(p1.draws).median < summarize(prior.draws).q05);
}

TEST_CASE("run_check fits once and reports per configuration") {
  const std::vector<double> data = normal_data_20(99);
  std::vector<CheckConfig> grid = {base_config(1.0, 12), base_config(15.0, 12)};
  const auto reports = run_check(data, Family::normal_location_unit_variance, grid);
  REQUIRE(reports.size() == 2);
  for (const RBReport& r : reports) {
    CHECK(r.error.empty());
    CHECK(r.rb0 >= 0.0);
    CHECK(r.rb0 <= 20.0);
    CHECK(r.strength >= 0.0);
    CHECK(r.strength <= 1.0);
    CHECK(r.model.family == Family::normal_location_unit_variance);
  }
  // In-model data with a = 1 should be strong evidence in favor.
  CHECK(reports[0].rb0 > 1.0);
  // a = 15 > n/2 = 10 must carry the dominance warning.
  bool warned = false;
  for (const auto& w : reports[1].warnings) warned |= w.find("half the sample size") != std::string::npos;
  CHECK(warned);
}

TEST_CASE("run_check input validation") {
  CHECK_THROWS_AS(run_check({}, Family::normal, {base_config(1.0, 1)}), input_error);
  const std::vector<double> data = normal_data_20(1);
  CHECK_THROWS_AS(run_check(data, Family::normal, {}), input_error);
}

TEST_CASE("rb0 is approximately scale-free") {
  const std::vector<double> data = normal_data_20(2024);
  std::vector<double> moved = data;
  for (double& x : moved) x = 2.0 * x + 3.0;
  const auto r1 = run_check(data, Family::normal, {base_config(5.0, 777)});
  const auto r2 = run_check(moved, Family::normal, {base_config(5.0, 777)});
  REQUIRE(r1.size() == 1);
  REQUIRE(r2.size() == 1);
  const double lo = std::min(r1[0].rb0, r2[0].rb0);
  const double hi = std::max(r1[0].rb0, r2[0].rb0);
  CHECK(hi - lo <= 0.15 * hi + 1e-12);
}

}  // TEST_SUITE
