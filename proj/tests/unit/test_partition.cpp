#include <cmath>

#include "doctest.h"
#include "hardyvl/error.hpp"
#include "hardyvl/partition.hpp"
#include "support.hpp"

using namespace hardyvl;

TEST_SUITE("partition") {
  TEST_CASE("limit sequences of linear pairs") {
    const LimitSequence s = build_sequence(BoundaryPair(), 1.0, -10, 10, Window{1e-300, 1e300});
    for (int k = -10; k <= 10; ++k) CHECK(s.at(k) == doctest::Approx(std::ldexp(1.0, k)).epsilon(1e-14));
    CHECK(s.abutment_error() <= 1e-14);
    const BoundaryPair third(MonotoneMap::linear(1.0 / 3.0), MonotoneMap::linear(0.5));
    const LimitSequence t = build_sequence(third, 1.0, -6, 6, Window{1e-300, 1e300});
    for (int k = -6; k <= 6; ++k) CHECK(t.at(k) == doctest::Approx(std::pow(1.5, k)).epsilon(1e-13));
    CHECK(t.a(2) == doctest::Approx(t.at(2) / 3.0));
  }

  TEST_CASE("truncation at the window") {
    const LimitSequence s = build_sequence(BoundaryPair(), 1.0, -10, 10, Window{0.1, 100.0});
    CHECK(s.truncated_low);
    CHECK(s.truncated_high);
    const auto [lo, hi] = default_k_range(BoundaryPair(), 1.0, 0.1, 100.0);
    CHECK(std::ldexp(1.0, lo) <= 0.1);
    CHECK(std::ldexp(1.0, hi) >= 100.0);
  }

  TEST_CASE("generated pairs abut") {
    testing::Gen gen(17);
    for (int k = 0; k < 20; ++k) {
      const BoundaryPair pair = gen.boundary_pair();
      const LimitSequence s = build_sequence(pair, gen.log_uniform(0.1, 10.0), -5, 5, Window{1e-200, 1e200});
      CHECK(s.abutment_error() <= 1e-10);
    }
  }

  TEST_CASE("transformed weights") {
    const Weight2D u = Weight2D::power_pair(-2.0, 1.0);
    const BoundaryPair pair;
    CHECK(transformed_weight(u, pair, pair, Quadrant::aa, 0.3, 0.7) == doctest::Approx(4.0 * u(0.6, 1.4)));
    CHECK(transformed_weight(u, pair, pair, Quadrant::ab, 0.3, 0.7) == doctest::Approx(2.0 * u(0.6, 0.7)));
    CHECK(transformed_weight(u, pair, pair, Quadrant::bb, 0.3, 0.7) == doctest::Approx(u(0.3, 0.7)));
    const TransformedWeights tw = transformed_weights(u, pair, pair);
    CHECK(tw.u_ba(0.3, 0.7) == doctest::Approx(2.0 * u(0.3, 1.4)));
    CHECK(tw.u_aa.factors().has_value());
    CHECK(to_string(Quadrant::ab) == "ab");
  }

  TEST_CASE("single-cell bookkeeping") {
    // f = 1 on [1, 2]^2 = [a(m^1), b(m^1)]^2 with m^k = 2^k, unit weights, p = q = 2.
    // a-type per axis: int_1^2 2 (2 - y)^2 = 2/3; b-type per axis: int_1^2 (y - 1)^2 = 1/3.
    ProblemConfig c;
    c.u = Weight2D::unit();
    const Problem pb(c);
    const GridFn f = GridFn::constant({1.0, 2.0}, {1.0, 2.0}, 1.0);
    const LimitSequence s1 = covering_sequence(pb.boundary(1), 1.0, 1.0, 2.0, 1);
    const LimitSequence s2 = covering_sequence(pb.boundary(2), 1.0, 1.0, 2.0, 2);
    const QuadrantResult q = quadrant_decompose(f, pb, s1, s2);
    CHECK(q.II1 == doctest::Approx(2.0 / 3.0).epsilon(1e-6));
    CHECK(q.II2 == doctest::Approx(std::sqrt(2.0 / 9.0)).epsilon(1e-6));
    CHECK(q.II3 == doctest::Approx(std::sqrt(2.0 / 9.0)).epsilon(1e-6));
    CHECK(q.II4 == doctest::Approx(1.0 / 3.0).epsilon(1e-6));
    CHECK(q.total_lhs == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(q.holds());
  }

  TEST_CASE("zero function and coverage gaps") {
    ProblemConfig c;
    c.u = Weight2D::power_pair(-2.0, -2.0);
    const Problem pb(c);
    const auto e = geometric_edges(0.5, 4.0, 4);
    const LimitSequence s1 = covering_sequence(pb.boundary(1), 1.0, 0.5, 4.0, 1);
    const LimitSequence s2 = covering_sequence(pb.boundary(2), 1.0, 0.5, 4.0, 2);
    const QuadrantResult z = quadrant_decompose(GridFn::constant(e, e, 0.0), pb, s1, s2);
    CHECK(z.sum() == 0.0);
    CHECK(z.total_lhs == 0.0);
    const LimitSequence narrow = build_sequence(pb.boundary(1), 1.0, 0, 1, Window{1e-6, 1e6});
    CHECK_THROWS_AS(quadrant_decompose(GridFn::constant(e, e, 1.0), pb, narrow, s2), DomainError);
  }

  TEST_CASE("decomposition inequality on generated functions") {
    testing::Gen gen(23);
    for (const char* name : {"suite1", "suite4", "suite6"}) {
      const Problem pb(testing::load_config(name).hardy);
      for (int k = 0; k < 4; ++k) {
        const GridFn f = gen.grid_fn(8, 0.2, 5.0);
        const Rect sp = f.support();
        const LimitSequence s1 = covering_sequence(pb.boundary(1), 1.0, sp.lo1, sp.hi1, 1);
        const LimitSequence s2 = covering_sequence(pb.boundary(2), 1.0, sp.lo2, sp.hi2, 2);
        const QuadrantResult q = quadrant_decompose(f, pb, s1, s2);
        CHECK(q.total_lhs > 0.0);
        CHECK(q.holds(1e-3));
      }
    }
  }
}
