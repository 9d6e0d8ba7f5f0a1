#include <cmath>

#include "doctest.h"
#include "hardyvl/charf.hpp"
#include "hardyvl/error.hpp"
#include "support.hpp"

using namespace hardyvl;

namespace {

// Scale-reduced one-axis supremand of the power-weight instance (p = q = 2, unit v, x/2..x,
// u = y^-2, s = 3/2): 2^{1/4} (1 - (2 theta)^{-1/2})^{1/2} (1 - theta)^{1/4}, theta in (1/2, 1).
double reduced_axis_sup() {
  double best = 0.0, arg = 0.75;
  for (int i = 1; i < 200000; ++i) {
    const double th = 0.5 + 0.5 * i / 200000.0;
    const double v = std::pow(2.0, 0.25) * std::sqrt(1.0 - std::pow(2.0 * th, -0.5)) * std::pow(1.0 - th, 0.25);
    if (v > best) {
      best = v;
      arg = th;
    }
  }
  double lo = arg - 5e-6, hi = arg + 5e-6;
  auto f = [](double th) {
    return std::pow(2.0, 0.25) * std::sqrt(1.0 - std::pow(2.0 * th, -0.5)) * std::pow(1.0 - th, 0.25);
  };
  for (int k = 0; k < 100; ++k) {
    const double m1 = lo + (hi - lo) / 3, m2 = hi - (hi - lo) / 3;
    (f(m1) < f(m2) ? lo : hi) = f(m1) < f(m2) ? m1 : m2;
  }
  return f(0.5 * (lo + hi));
}

ProblemConfig power_config() {
  ProblemConfig c;
  c.u = Weight2D::power_pair(-2.0, -2.0);
  return c;
}

// Per-axis corner supremand with V(t) = t, c = 0, d = 1, u = 1, p = q = 2, s = 3/2.
double corner_axis_sup() {
  double best = 0.0;
  for (int i = 1; i < 400000; ++i) {
    const double t = i / 400000.0;
    best = std::max(best, std::sqrt(2.0 / 3.0 * (1.0 - std::pow(t, 1.5))) * std::pow(t, 0.25));
  }
  return best;
}

}  // namespace

TEST_SUITE("charf") {
  TEST_CASE("one-variable functional matches the scale-reduced maximization") {
    const double ref = reduced_axis_sup();
    CHECK(ref == doctest::Approx(0.364).epsilon(1e-3));
    ProblemConfig1D c;
    c.u = Weight1D::power(-2.0);
    const CharacterizationValue b1 = B1(Problem1D(c), 1.5);
    CHECK(b1.value == doctest::Approx(ref).epsilon(1e-6));
    CHECK(b1.converged);
  }

  TEST_CASE("two-variable functional on the power-weight instance") {
    const double ref = reduced_axis_sup();
    const CharacterizationValue b2 = B2(Problem(power_config()), {1.5, 1.5});
    CHECK(b2.value == doctest::Approx(ref * ref).epsilon(1e-6));
    CHECK(b2.value == doctest::Approx(0.1326).epsilon(1e-3));
    CHECK(admissible(b2.argmax, BoundaryPair(), BoundaryPair()));
  }

  TEST_CASE("zero weight gives zero") {
    ProblemConfig c = power_config();
    c.u = Weight2D::zero();
    CHECK(B2(Problem(c), {1.5, 1.5}).value == 0.0);
    ProblemConfig1D c1;
    c1.u = Weight1D::power(-2.0);
    CHECK(B1(Problem1D(c1), 1.5).value > 0.0);
  }

  TEST_CASE("supremand is invariant under joint scaling for balanced power weights") {
    const Problem pb(power_config());
    const SearchPoint pt{0.7, 1.3, 1.1, 2.0};
    const double base = B2_supremand(pb, {1.5, 1.25}, pt, 1e-11);
    for (double lam : {0.5, 2.0, 10.0}) {
      const SearchPoint sc{lam * pt.t1, lam * pt.t2, lam * pt.x1, lam * pt.x2};
      CHECK(B2_supremand(pb, {1.5, 1.25}, sc, 1e-11) == doctest::Approx(base).epsilon(1e-8));
    }
  }

  TEST_CASE("scale parameter outside (1, p) is rejected") {
    const Problem pb(power_config());
    CHECK_THROWS_AS(B2(pb, {1.0, 1.5}), DomainError);
    CHECK_THROWS_AS(B2(pb, {1.5, 2.0}), DomainError);
  }

  TEST_CASE("integrability errors propagate from the inner weights") {
    ProblemConfig c = power_config();
    c.v1 = Weight1D::power(1.0);
    CHECK_THROWS_AS(Problem{c}, IntegrabilityError);
    c.v1 = Weight1D::unit();
    c.exps.p = 1.0;
    CHECK_THROWS_AS(Problem{c}, DomainError);
  }

  TEST_CASE("limit extrapolation") {
    const LimitValue c = extrapolate_limit({0.1, 0.05, 0.025, 0.0125}, {3.0, 3.0, 3.0, 3.0});
    CHECK(c.value == doctest::Approx(3.0));
    // values = L - k delta: first-order extrapolation is exact.
    const LimitValue l = extrapolate_limit({0.1, 0.05, 0.025, 0.0125}, {1.9, 1.95, 1.975, 1.9875});
    CHECK(l.value == doctest::Approx(2.0).epsilon(1e-12));
    CHECK_THROWS_AS(extrapolate_limit({0.1, 0.05, 0.025, 0.0125}, {1.0, 4.0, 16.0, 64.0}), ExtrapolationError);
    ProblemConfig1D c1;
    c1.u = Weight1D::power(-2.0);
    const LimitValue a = A_limit(Problem1D(c1));
    CHECK(a.spread < 1e-3);
    CHECK(a.value > 0.0);
  }

  TEST_CASE("geometric-mean weight") {
    const BoundaryPair pair;
    const Weight2D u = Weight2D::power_pair(-2.0, -1.0);
    Exponents ex;
    const Weight2D w1 = pk_weight_w(u, Weight2D::unit(), ex, pair, pair);
    CHECK(w1(1.7, 0.3) == doctest::Approx(u(1.7, 0.3)));
    const Weight2D we = pk_weight_w(u, Weight2D::unit().scaled(std::exp(1.0)), ex, pair, pair);
    CHECK(we(1.7, 0.3) == doctest::Approx(std::exp(-1.0) * u(1.7, 0.3)));
    const Weight2D vexp = Weight2D::separable(Weight1D::exp_scaled(0.0, 1.0), Weight1D::exp_scaled(0.0, 1.0));
    const Weight2D wx = pk_weight_w(u, vexp, ex, pair, pair);
    CHECK(wx(2.0, 0.8) == doctest::Approx(std::exp(-(0.75 * 2.0 + 0.75 * 0.8)) * u(2.0, 0.8)).epsilon(1e-8));
  }

  TEST_CASE("geometric-mean functional equals the reduced two-variable functional") {
    PkConfig c;
    c.u = Weight2D::unit();
    c.v = Weight2D::unit();
    const PkProblem pk(c);
    const Problem reduced(pk_reduced_config(pk));
    for (const ScalePoint s : {ScalePoint{1.5, 1.5}, ScalePoint{1.2, 1.8}}) {
      const double d2 = D2(pk, s).value;
      CHECK(d2 > 0.0);
      CHECK(B2(reduced, s).value == doctest::Approx(d2).epsilon(1e-4));
    }
    c.u = Weight2D::zero();
    CHECK(D2(PkProblem(c), {1.5, 1.5}).value == 0.0);
  }

  TEST_CASE("corner functional on the unit square") {
    ProblemConfig c;
    c.u = Weight2D::unit();
    const Problem pb(c);
    const Rect sq{0, 1, 0, 1};
    const double axis = corner_axis_sup();
    const CharacterizationValue aw = rect_corner(CornerVariant::AW, sq, pb, {1.5, 1.5});
    CHECK(aw.value == doctest::Approx(axis * axis).epsilon(1e-6));
    // Axis-2 reflection maps the d-type factor onto the c-type one when u and v2 are symmetric.
    CHECK(rect_corner(CornerVariant::AWstar, sq, pb, {1.5, 1.5}).value == doctest::Approx(aw.value).epsilon(1e-6));
    CHECK(rect_corner(CornerVariant::AWtilde, sq, pb, {1.5, 1.5}).value == doctest::Approx(aw.value).epsilon(1e-6));
    ProblemConfig z = c;
    z.u = Weight2D::zero();
    CHECK(rect_corner(CornerVariant::AW, sq, Problem(z), {1.5, 1.5}).value == 0.0);
    CHECK(rect_corner(CornerVariant::AW, Rect{1, 1, 0, 1}, pb, {1.5, 1.5}).value == 0.0);
  }

  TEST_CASE("divergence detection") {
    CHECK(check_divergence([](int level) { return std::pow(2.0, level); }).divergent);
    CHECK_FALSE(check_divergence([](int level) { return 1.0 + 1e-3 * level; }).divergent);
    ProblemConfig c;
    c.u = Weight2D::power_pair(1.0, 1.0);  // grows without bound as the window widens
    CHECK(B2_divergence(c, {1.5, 1.5}).divergent);
    CHECK_FALSE(B2_divergence(power_config(), {1.5, 1.5}).divergent);
  }
}
