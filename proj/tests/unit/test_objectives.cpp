#include <doctest.h>

#include <cmath>
#include <cstring>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "osc/objectives.hpp"

using namespace osc;

namespace {

std::vector<double> random_point(const Domain& domain, Rng& rng) {
  std::vector<double> x(domain.dim());
  for (std::size_t k = 0; k < x.size(); ++k) x[k] = rng.uniform(domain.lower()[k], domain.upper()[k]);
  return x;
}

}  // namespace

TEST_CASE("closed-form values") {
  const auto himmelblau = make_himmelblau();
  CHECK(himmelblau.raw(std::vector{3.0, 2.0}) == 0.0);
  CHECK(evaluate(himmelblau, std::vector{3.0, 2.0}) == 0.0);
  // Corner (5, 5) gives the normalising constant: 19^2 + 23^2 = 890.
  CHECK(evaluate(himmelblau, std::vector{5.0, 5.0}) == doctest::Approx(-1.0).epsilon(1e-15));

  for (std::size_t dim : {1u, 2u, 10u}) {
    const auto r = make_rastrigin(dim);
    CHECK(evaluate(r, std::vector<double>(dim, 0.0)) == 0.0);
  }

  const auto ce = make_counterexample();
  CHECK(evaluate(ce, std::vector{std::exp(-1.0)}) == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(evaluate(ce, std::vector{std::exp(-4.0)}) == doctest::Approx(0.75).epsilon(1e-15));
  CHECK(evaluate(ce, std::vector{0.0}) == 0.0);

  CHECK(evaluate(make_ackley2d(), std::vector{0.0, 0.0}) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(evaluate(make_doublesine(), std::vector{0.5}) == 0.0);
  CHECK(evaluate(make_doublesine(), std::vector{0.0}) == doctest::Approx(-1.0));
  CHECK(evaluate(make_tent(), std::vector{0.25}) == 0.5);
}

TEST_CASE("evaluate rejects points outside the domain") {
  CHECK_THROWS_AS(evaluate(make_garland(), std::vector{1.5}), std::domain_error);
  CHECK_THROWS_AS(evaluate(make_himmelblau(), std::vector{0.0, 5.5}), std::domain_error);
  CHECK_THROWS_AS(evaluate(make_rastrigin(2), std::vector{0.0}), std::domain_error);
  CHECK_THROWS_AS(make_objective("nonexistent"), std::out_of_range);
}

TEST_CASE("analytic f* values") {
  CHECK(f_star_oracle(make_rastrigin(10)) == 0.0);
  CHECK(f_star_oracle(make_himmelblau()) == 0.0);
  CHECK(f_star_oracle(make_counterexample()) == 1.0);
  CHECK(f_star_oracle(make_doublesine()) == 0.0);
  CHECK(f_star_oracle(make_ackley2d()) == 0.0);
}

TEST_CASE("garland f* from the grid oracle") {
  // The peak sits where sin(60x) vanishes closest to 1/2, at x = pi/6, so the
  // supremum is 4 (pi/6)(1 - pi/6) up to the cusp's floating-point resolution.
  const double analytic = 4.0 * (std::numbers::pi / 6.0) * (1.0 - std::numbers::pi / 6.0);
  const double f_star = f_star_oracle(make_garland());
  CHECK(f_star == doctest::Approx(analytic).epsilon(1e-7));
  CHECK(f_star == doctest::Approx(0.997772379).epsilon(1e-9));
  CHECK(f_star_oracle(make_garland()) == f_star);
}

TEST_CASE("every registered objective is bounded by one and dominated by f*") {
  Rng rng(2024, Stream::noise);
  for (const auto& name : objective_names()) {
    const auto spec = make_objective(name);
    INFO(name);
    const double f_star = f_star_oracle(spec);
    double worst_excess = -1.0;
    double worst_abs = 0.0;
    for (int k = 0; k < 100000; ++k) {
      const auto x = random_point(spec.domain, rng);
      const double v = evaluate(spec, x);
      worst_abs = std::max(worst_abs, std::fabs(v));
      worst_excess = std::max(worst_excess, v - f_star);
    }
    CHECK(worst_abs <= 1.0);
    CHECK(worst_excess <= 1e-9);
  }
}

TEST_CASE("evaluate is pure") {
  const auto spec = make_rastrigin(10);
  Rng rng(5, Stream::noise);
  const auto x = random_point(spec.domain, rng);
  const double a = evaluate(spec, x);
  const double b = evaluate(spec, x);
  CHECK(std::memcmp(&a, &b, sizeof a) == 0);
}

TEST_CASE("noise model validation") {
  CHECK_NOTHROW((NoiseModel{0.5, 1.0}.validate()));
  CHECK_THROWS_AS((NoiseModel{0.6, 1.0}.validate()), std::invalid_argument);
  CHECK_THROWS_AS((NoiseModel{-0.1, 1.0}.validate()), std::invalid_argument);
  CHECK_THROWS_AS((NoiseModel{0.0, 0.0}.validate()), std::invalid_argument);
}

TEST_CASE("sample_reward stays within the noise band") {
  const auto garland = make_garland();
  Rng rng(9, Stream::noise);
  const std::vector<double> x{0.3};
  const double f = evaluate(garland, x);
  CHECK(sample_reward(garland, {0.0, 1.0}, x, rng) == f);
  for (double a : {0.05, 0.5}) {
    for (int k = 0; k < 10000; ++k) {
      const double r = sample_reward(garland, {a, 1.0}, x, rng);
      REQUIRE(std::fabs(r - f) <= a);
    }
  }
}

TEST_CASE("noise is reproducible and centred") {
  Rng a(123, Stream::noise);
  Rng b(123, Stream::noise);
  Rng other(123, Stream::tie_break);
  const NoiseModel noise{0.5, 1.0};
  bool differs = false;
  for (int k = 0; k < 100; ++k) {
    const double x = noise_sample(noise, a);
    CHECK(x == noise_sample(noise, b));
    differs = differs || x != noise_sample(noise, other);
  }
  CHECK(differs);

  constexpr int kDraws = 1000000;
  Rng rng(77, Stream::noise);
  double sum = 0.0;
  for (int k = 0; k < kDraws; ++k) sum += noise_sample(noise, rng);
  const double sigma = 0.5 / std::sqrt(3.0);
  CHECK(std::fabs(sum / kDraws) <= 3.0 * sigma / std::sqrt(static_cast<double>(kDraws)));
}
