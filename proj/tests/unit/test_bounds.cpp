#include <cmath>

#include "doctest.h"
#include "hardyvl/bounds.hpp"
#include "hardyvl/error.hpp"
#include "support.hpp"

using namespace hardyvl;

TEST_SUITE("bounds") {
  TEST_CASE("factor values at s = (3/2, 3/2), p = 2") {
    CHECK(lower_factor(2.0, {1.5, 1.5}) == doctest::Approx(8.0 / 9.0).epsilon(1e-14));
    CHECK(upper_factor(2.0, {1.5, 1.5}) == doctest::Approx(2.0).epsilon(1e-14));
    const double r = 0.5 * std::exp(1.5);
    CHECK(pk_lower_factor(2.0, {1.5, 1.5}) == doctest::Approx(r / (r + 1.0)).epsilon(1e-14));
    CHECK(pk_lower_factor(2.0, {1.5, 1.5}) == doctest::Approx(0.691439).epsilon(1e-6));
    CHECK(lower_factor_1d(2.0, 1.5) * lower_factor_1d(2.0, 1.5) == doctest::Approx(lower_factor(2.0, {1.5, 1.5})));
    CHECK(upper_factor_1d(2.0, 1.5) == doctest::Approx(std::sqrt(2.0)));
  }

  TEST_CASE("factor limits and domains") {
    CHECK(lower_factor(2.0, {1.0 + 1e-9, 1.5}) < 1e-4);
    CHECK(std::isinf(upper_factor(2.0, {2.0, 1.5})));
    CHECK(upper_factor(2.0, {1.0 + 1e-9, 1.0 + 1e-9}) == doctest::Approx(1.0).epsilon(1e-8));
    CHECK(pk_lower_factor(2.0, {1.0 + 1e-9, 1.5}) < 1e-4);
    CHECK(pk_lower_factor(2.0, {60.0, 60.0}) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK_THROWS_AS(lower_factor(2.0, {0.9, 1.5}), DomainError);
    CHECK_THROWS_AS(lower_factor(2.0, {1.5, 2.5}), DomainError);
    CHECK_THROWS_AS(upper_factor(2.0, {0.9, 1.5}), DomainError);
    CHECK_THROWS_AS(pk_lower_factor(2.0, {1.0, 1.5}), DomainError);
  }

  TEST_CASE("theorem metadata") {
    for (Theorem t : {Theorem::hardy_thm1, Theorem::pk_thm2, Theorem::lemmaA, Theorem::lemma2, Theorem::lemma3,
                      Theorem::lemma4, Theorem::hardy_1d})
      CHECK(theorem_from_string(to_string(t)) == t);
    CHECK_THROWS_AS(theorem_from_string("nope"), DomainError);
    CHECK(multiplier(Theorem::hardy_thm1) == 4.0);
    CHECK(multiplier(Theorem::pk_thm2) == 4.0);
    CHECK(multiplier(Theorem::lemma2) == 1.0);
    CHECK(multiplier(Theorem::hardy_1d) == 2.0);
    CHECK(corner_theorem(CornerVariant::AWstar) == Theorem::lemma2);
  }

  TEST_CASE("constant functional") {
    const double K = 0.37;
    const ScaleFunctional constant = [K](const ScalePoint&) {
      CharacterizationValue v;
      v.value = K;
      return v;
    };
    const SandwichReport r = optimize_sandwich(constant, 2.0, Theorem::hardy_thm1);
    // sup of the per-axis lower factor over (1, 2), by dense scan
    double best = 0.0;
    for (int i = 1; i < 100000; ++i) best = std::max(best, lower_factor_1d(2.0, 1.0 + i / 100000.0));
    CHECK(r.lower_bound <= K * best * best * (1.0 + 1e-9));
    CHECK(r.lower_bound >= K * best * best * (1.0 - 1e-3));
    // min of the upper factor is approached at the low edge of the grid
    CHECK(r.upper_bound >= 4.0 * K);
    CHECK(r.upper_bound <= 4.0 * K * std::pow(upper_factor_1d(2.0, 1.025), 2) * (1.0 + 1e-12));
    CHECK(r.lower_bound <= r.upper_bound);
    CHECK_FALSE(r.unbounded);
  }

  TEST_CASE("zero and unbounded functionals") {
    const ScaleFunctional zero = [](const ScalePoint&) { return CharacterizationValue{}; };
    const SandwichReport z = optimize_sandwich(zero, 2.0, Theorem::hardy_thm1);
    CHECK(z.lower_bound == 0.0);
    CHECK(z.upper_bound == 0.0);
    const ScaleFunctional inf = [](const ScalePoint&) {
      CharacterizationValue v;
      v.value = INFINITY;
      v.infinite = true;
      return v;
    };
    const SandwichReport u = optimize_sandwich(inf, 2.0, Theorem::hardy_thm1);
    CHECK(u.unbounded);
    CHECK(std::isinf(u.upper_bound));
  }

  TEST_CASE("sandwich on the power-weight instance") {
    ProblemConfig c;
    c.u = Weight2D::power_pair(-2.0, -2.0);
    SandwichOptions opt;
    opt.s_grid = 5;
    const SandwichReport r = sandwich_hardy(Problem(c), opt);
    CHECK(std::isfinite(r.lower_bound));
    CHECK(std::isfinite(r.upper_bound));
    CHECK(r.lower_bound > 0.0);
    CHECK(r.lower_bound <= r.upper_bound);
    CHECK(r.theorem == Theorem::hardy_thm1);
    CHECK(r.functional_values.size() >= 25);
  }

  TEST_CASE("corner and one-variable sandwiches report their multipliers") {
    ProblemConfig c;
    c.u = Weight2D::unit();
    SandwichOptions opt;
    opt.s_grid = 3;
    const SandwichReport r = sandwich_corner(CornerVariant::AW, Rect{0, 1, 0, 1}, Problem(c), opt);
    CHECK(r.multiplier == 1.0);
    CHECK(r.lower_bound <= r.upper_bound);
    ProblemConfig1D c1;
    c1.u = Weight1D::power(-2.0);
    const SandwichReport r1 = sandwich_1d(Problem1D(c1), opt);
    CHECK(r1.multiplier == 2.0);
    CHECK(r1.lower_bound <= r1.upper_bound);
  }

  TEST_CASE("geometric-mean sandwich keeps the restricted lower bound below the full one") {
    PkConfig c;
    c.u = Weight2D::unit();
    c.v = Weight2D::unit();
    SandwichOptions opt;
    opt.s_grid = 3;
    const SandwichReport r = sandwich_pk(PkProblem(c), opt);
    CHECK(r.theorem == Theorem::pk_thm2);
    CHECK(r.lower_bound_restricted <= r.lower_bound * (1.0 + 1e-12));
    CHECK(r.lower_bound <= r.upper_bound);
  }
}
