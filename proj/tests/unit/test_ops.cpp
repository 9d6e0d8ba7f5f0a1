#include <cmath>

#include "doctest.h"
#include "hardyvl/bounds.hpp"
#include "hardyvl/error.hpp"
#include "hardyvl/ops.hpp"
#include "support.hpp"

using namespace hardyvl;

namespace {

GridFn indicator(double lo1, double hi1, double lo2, double hi2, double c = 1.0) {
  return GridFn::constant({lo1, hi1}, {lo2, hi2}, c);
}

}  // namespace

TEST_SUITE("ops") {
  TEST_CASE("grids") {
    const auto e = geometric_edges(1.0, 16.0, 4);
    REQUIRE(e.size() == 5);
    CHECK(e[2] == doctest::Approx(4.0));
    const auto r = refine_edges(e);
    CHECK(r.size() == 9);
    CHECK(r[1] == doctest::Approx(std::sqrt(2.0)));
    const auto ov = cell_overlaps(e, 1.5, 5.0);
    CHECK(ov[0] == doctest::Approx(0.5));
    CHECK(ov[1] == doctest::Approx(2.0));
    CHECK(ov[2] == doctest::Approx(1.0));
    CHECK(ov[3] == 0.0);
    GridFn bad = GridFn::constant({1.0, 2.0}, {1.0, 2.0}, 1.0);
    bad.values(0, 0) = -1.0;
    CHECK_THROWS_AS(bad.validate(), DomainError);
    CHECK_THROWS_AS(geometric_edges(0.0, 1.0, 4), DomainError);
  }

  TEST_CASE("box integral") {
    const BoundaryPair pair;
    const GridFn one = GridFn::constant(geometric_edges(0.01, 100.0, 8), geometric_edges(0.01, 100.0, 8), 1.0);
    CHECK(apply_H2(one, pair, pair, 2.0, 4.0) == doctest::Approx(2.0));
    CHECK(apply_H2(indicator(1, 2, 1, 2, 0.0), pair, pair, 1.5, 1.5) == 0.0);
    CHECK(apply_H2(indicator(1, 2, 1, 2), pair, pair, 3.0, 3.0) == doctest::Approx(0.25));
  }

  TEST_CASE("box geometric mean") {
    const BoundaryPair pair;
    CHECK(apply_G2(indicator(0.1, 10, 0.1, 10, 2.5), pair, pair, 2.0, 3.0) == doctest::Approx(2.5));
    // e on [1, 1.5) and 1/e on [1.5, 2) along axis 1; box [1, 2]^2 at x = (2, 2)
    GridFn half = GridFn::constant({1.0, 1.5, 2.0}, {1.0, 2.0}, 1.0);
    half.values(0, 0) = std::exp(1.0);
    half.values(1, 0) = std::exp(-1.0);
    CHECK(apply_G2(half, pair, pair, 2.0, 2.0) == doctest::Approx(1.0).epsilon(1e-12));
    // f = exp(t1 + t2) sampled at midpoints
    const int n = 400;
    GridFn ex = GridFn::constant(geometric_edges(0.5, 4.0, n), geometric_edges(0.5, 4.0, n), 0.0);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        ex.values(i, j) = std::exp(0.5 * (ex.edges1[i] + ex.edges1[i + 1]) + 0.5 * (ex.edges2[j] + ex.edges2[j + 1]));
    CHECK(apply_G2(ex, pair, pair, 2.0, 2.0) == doctest::Approx(std::exp(3.0)).epsilon(1e-4));
    // vanishing on part of the box
    CHECK(apply_G2(indicator(1, 2, 1, 2), pair, pair, 3.0, 3.0) == 0.0);
  }

  TEST_CASE("weighted norm") {
    CHECK(weighted_norm(indicator(0, 1, 0, 1), Weight2D::unit(), 2.0, Rect{0, 1, 0, 1}) == doctest::Approx(1.0));
    CHECK(weighted_norm(indicator(0, 1, 0, 1), Weight2D::power_pair(1.0, 1.0), 1.0, Rect{0, 1, 0, 1}) ==
          doctest::Approx(0.25));
    const GridFn f = indicator(0.5, 2, 0.5, 3, 1.7), g = indicator(0.5, 2, 0.5, 3, 3.4);
    CHECK(weighted_norm(g, Weight2D::power_pair(-0.5, 0.5), 3.0, Rect{0.5, 2, 0.5, 3}) ==
          doctest::Approx(2.0 * weighted_norm(f, Weight2D::power_pair(-0.5, 0.5), 3.0, Rect{0.5, 2, 0.5, 3})));
  }

  TEST_CASE("ratio of the unit cell") {
    // f = 1 on [1, 2]^2, unit weights, p = q = 2, x/2 .. x: the per-axis overlap is x - 1 on
    // [1, 2] and 2 - x/2 on [2, 4], so the squared numerator is (1/3 + 2/3)^2 and the ratio is 1.
    ProblemConfig c;
    c.u = Weight2D::unit();
    const Problem pb(c);
    // The outer rule runs in log coordinates, so the quadratic overlaps are not integrated exactly.
    CHECK(rayleigh_ratio(indicator(1, 2, 1, 2), pb) == doctest::Approx(1.0).epsilon(1e-5));
    CHECK_THROWS_AS(rayleigh_ratio(indicator(1, 2, 1, 2, 0.0), pb), DomainError);
  }

  TEST_CASE("operator gradient matches finite differences") {
    ProblemConfig c;
    c.u = Weight2D::power_pair(-2.0, -1.5);
    c.v2 = Weight1D::power(0.5);
    c.exps.q = 3.0;
    const Problem pb(c);
    const auto e = geometric_edges(0.2, 5.0, 6);
    const NormOperator op = NormOperator::hardy(pb, e, e);
    testing::Gen gen(3);
    Eigen::MatrixXd F(6, 6);
    for (int i = 0; i < 6; ++i)
      for (int j = 0; j < 6; ++j) F(i, j) = gen.uniform(0.2, 2.0);
    double n0 = 0.0;
    const Eigen::MatrixXd G = op.numerator_gradient(F, &n0);
    CHECK(n0 == doctest::Approx(op.numerator(F)));
    for (int k = 0; k < 6; ++k) {
      const int i = gen.integer(0, 5), j = gen.integer(0, 5);
      const double h = 1e-6 * F(i, j);
      Eigen::MatrixXd P = F, M = F;
      P(i, j) += h;
      M(i, j) -= h;
      CHECK(G(i, j) == doctest::Approx((op.numerator(P) - op.numerator(M)) / (2 * h)).epsilon(1e-5));
    }
    CHECK(op.ratio(3.0 * F) == doctest::Approx(op.ratio(F)).epsilon(1e-12));
  }

  TEST_CASE("norm estimate") {
    ProblemConfig c;
    c.u = Weight2D::power_pair(-2.0, -2.0);
    const Problem pb(c);
    NormOptions opt;
    opt.resolution = 12;
    const NormEstimate est = estimate_norm(pb, opt);
    CHECK(est.value > 0.0);
    CHECK(est.value == doctest::Approx(rayleigh_ratio(est.best_f, pb)).epsilon(1e-8));
    for (const auto& [name, v] : est.start_values) CHECK(v <= est.value);
    SandwichOptions so;
    so.s_grid = 5;
    CHECK(est.value <= sandwich_hardy(pb, so).upper_bound);
    // same seed, same answer
    CHECK(estimate_norm(pb, opt).value == est.value);

    ProblemConfig z = c;
    z.u = Weight2D::zero();
    CHECK(estimate_norm(Problem(z), opt).value == 0.0);
  }

  TEST_CASE("ascent does not decrease the ratio") {
    ProblemConfig c;
    c.u = Weight2D::power_pair(-2.0, -2.0);
    const Problem pb(c);
    const auto e = geometric_edges(0.1, 10.0, 8);
    const NormOperator op = NormOperator::hardy(pb, e, e);
    const Eigen::MatrixXd F0 = Eigen::MatrixXd::Ones(8, 8);
    NormOptions opt;
    const auto [F, r] = ascend(op, F0, opt);
    CHECK(r >= op.ratio(F0));
    CHECK(r == doctest::Approx(op.ratio(F)));
    CHECK((F.array() >= 0.0).all());
  }
}
