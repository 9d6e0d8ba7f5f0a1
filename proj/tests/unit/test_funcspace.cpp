#include <cmath>

#include "doctest.h"
#include "hardyvl/error.hpp"
#include "hardyvl/funcspace.hpp"
#include "support.hpp"

using namespace hardyvl;

TEST_SUITE("funcspace") {
  TEST_CASE("window validation") {
    CHECK_NOTHROW(Window{1e-3, 1e3}.validate());
    CHECK_THROWS_AS(Window({0.0, 1.0}).validate(), DomainError);
    CHECK_THROWS_AS(Window({2.0, 1.0}).validate(), DomainError);
    CHECK(Window{1.0, 2.0}.contains(1.5));
    CHECK_FALSE(Window{1.0, 2.0}.contains(2.5));
  }

  TEST_CASE("one-variable weights") {
    CHECK(Weight1D::power(0.5)(4.0) == doctest::Approx(2.0));
    CHECK(Weight1D::unit().is_unit());
    CHECK(Weight1D::exp_scaled(1.0, -1.0)(2.0) == doctest::Approx(2.0 * std::exp(-2.0)));
    CHECK_THROWS_AS(Weight1D::power(NAN), DomainError);
  }

  TEST_CASE("sampled weight reproduces a power law between samples") {
    std::vector<double> x, v;
    for (int k = 0; k <= 20; ++k) {
      x.push_back(std::pow(10.0, -2.0 + 0.2 * k));
      v.push_back(std::pow(x.back(), 0.75));
    }
    const Weight1D w = Weight1D::sampled(x, v);
    CHECK(w(0.37) == doctest::Approx(std::pow(0.37, 0.75)).epsilon(1e-12));
    CHECK_THROWS_AS(w(1e3), DomainError);
    CHECK_THROWS_AS(Weight1D::sampled({1.0, 0.5}, {1.0, 1.0}), DomainError);
    CHECK_THROWS_AS(Weight1D::sampled({1.0, 2.0}, {1.0, -1.0}), DomainError);
  }

  TEST_CASE("two-variable weights") {
    const Weight2D u = Weight2D::power_pair(-2.0, 1.0);
    CHECK(u(2.0, 3.0) == doctest::Approx(0.25 * 3.0));
    REQUIRE(u.factors());
    CHECK(u.factors()->first(2.0) * u.factors()->second(3.0) == doctest::Approx(u(2.0, 3.0)));
    const Weight2D z = u.scaled(0.0);
    CHECK(z.is_zero());
    CHECK(z(1.0, 1.0) == 0.0);
    CHECK(u.scaled(3.0)(2.0, 3.0) == doctest::Approx(3.0 * u(2.0, 3.0)));
    CHECK_THROWS_AS(u.scaled(-1.0), DomainError);
    const Weight2D d = Weight2D::derived([](double a, double b) { return a + b; }, "sum");
    CHECK(d(1.0, 2.0) == 3.0);
    CHECK_FALSE(d.factors());
  }

  TEST_CASE("boundary maps and inverses") {
    const MonotoneMap lin = MonotoneMap::linear(0.5), pw = MonotoneMap::power(2.0, 1.5);
    CHECK(lin.inverse(lin(3.0)) == doctest::Approx(3.0));
    CHECK(pw.inverse(pw(0.3)) == doctest::Approx(0.3));
    CHECK(pw.derivative(2.0) == doctest::Approx(3.0 * std::sqrt(2.0)));
    CHECK(pw.inverse_derivative(pw(2.0)) == doctest::Approx(1.0 / pw.derivative(2.0)));
    CHECK_THROWS_AS(MonotoneMap::linear(0.0), DomainError);
    CHECK_THROWS_AS(MonotoneMap::power(1.0, -1.0), DomainError);

    const MonotoneMap tab = MonotoneMap::sampled({0.1, 1.0, 10.0}, {0.05, 0.5, 5.0});
    CHECK(invert_boundary(tab, 0.25) == doctest::Approx(0.5).epsilon(1e-9));
    CHECK_THROWS_AS(invert_boundary(tab, 100.0), RangeError);

    std::vector<double> xs, ys;
    for (int k = 0; k <= 120; ++k) {
      xs.push_back(std::pow(10.0, -6.0 + 0.1 * k));
      ys.push_back(0.5 * xs.back());
    }
    CHECK(invert_boundary(MonotoneMap::sampled(xs, ys), 3.0, 1e-12) == doctest::Approx(6.0).epsilon(1e-11));
  }

  TEST_CASE("bisection") {
    const double r = bisect_increasing([](double x) { return x * x * x; }, 8.0, 1e-3, 1e3);
    CHECK(r == doctest::Approx(2.0).epsilon(1e-10));
    CHECK_THROWS_AS(bisect_increasing([](double x) { return x; }, 5.0, 0.0, 1.0), RangeError);
  }

  TEST_CASE("boundary pair ordering and admissibility") {
    CHECK_THROWS_AS(BoundaryPair(MonotoneMap::linear(1.0), MonotoneMap::linear(0.5)), DomainError);
    const BoundaryPair pair(MonotoneMap::linear(0.5), MonotoneMap::linear(1.0));
    CHECK(pair.x_upper(3.0) == doctest::Approx(6.0));
    CHECK(admissible_axis(1.0, 1.9, pair));
    CHECK_FALSE(admissible_axis(1.0, 2.1, pair));
    CHECK_FALSE(admissible_axis(1.0, 0.9, pair));
    CHECK(admissible({1.0, 1.0, 1.5, 1.5}, pair, pair));
    CHECK_FALSE(admissible({1.0, 1.0, 1.5, 2.5}, pair, pair));
    CHECK(BoundaryPair(MonotoneMap::linear(0.9995), MonotoneMap::linear(1.0)).degenerate());
  }

  TEST_CASE("generated boundary pairs satisfy a < b and invert") {
    testing::Gen gen(11);
    for (int k = 0; k < 50; ++k) {
      const BoundaryPair pair = gen.boundary_pair();
      const double x = gen.log_uniform(1e-3, 1e3);
      CHECK(pair.a()(x) < pair.b()(x));
      CHECK(pair.a().inverse(pair.a()(x)) == doctest::Approx(x).epsilon(1e-10));
      CHECK(pair.x_upper(x) > x);
    }
  }
}
