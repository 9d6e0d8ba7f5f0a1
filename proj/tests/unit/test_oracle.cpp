#include <cmath>
#include <fstream>

#include "doctest.h"
#include "hardyvl/bounds.hpp"
#include "hardyvl/charf.hpp"
#include "hardyvl/oracle.hpp"
#include "json.hpp"
#include "support.hpp"

using namespace hardyvl;

TEST_SUITE("oracle") {
  TEST_CASE("one-axis oracle agrees with the optimized functional") {
    ProblemConfig1D c;
    c.u = Weight1D::power(-2.0);
    c.window = Window{1e-2, 1e2};
    const double fast = B1(Problem1D(c), 1.5).value;
    CHECK(oracle::oracle_B1(c, 1.5) == doctest::Approx(fast).epsilon(1e-2));
  }

  TEST_CASE("zero weight") {
    ProblemConfig c;
    c.u = Weight2D::zero();
    CHECK(oracle::oracle_B2(c, {1.5, 1.5}) == 0.0);
    CHECK(oracle::oracle_ratio_search(c, 4) == 0.0);
  }

  TEST_CASE("factor path and two-variable path agree on a separable instance") {
    ProblemConfig c;
    c.u = Weight2D::power_pair(-2.0, -2.0);
    oracle::OracleConfig oc;
    oc.mesh = 256;
    const double fac = oracle::oracle_B2(c, {1.5, 1.25}, oc);
    oc.force_2d = true;
    CHECK(oracle::oracle_B2(c, {1.5, 1.25}, oc) == doctest::Approx(fac).epsilon(1e-2));
  }

  TEST_CASE("ratio search stays below the upper bound and the production estimate") {
    ProblemConfig c;
    c.u = Weight2D::power_pair(-2.0, -2.0);
    const Problem pb(c);
    const double naive = oracle::oracle_ratio_search(c, 8);
    NormOptions opt;
    opt.resolution = 8;
    CHECK(naive <= estimate_norm(pb, opt).value * 1.05);
    SandwichOptions so;
    so.s_grid = 5;
    CHECK(naive <= sandwich_hardy(pb, so).upper_bound);
  }

  TEST_CASE("golden files match the optimized functional") {
    for (const char* name : {"suite1", "suite5", "oracle_c"}) {
      std::ifstream in(std::string(HARDYVL_GOLDEN_DIR) + "/oracle_" + name + ".json");
      REQUIRE(in);
      const auto j = nlohmann::json::parse(in);
      ProblemConfig cfg = testing::load_config(name).hardy;
      cfg.window1 = cfg.window2 = Window{1e-2, 1e2};
      const Problem pb(cfg);
      for (const auto& e : j["results"]["B2"]) {
        const ScalePoint s{e["s1"].get<double>(), e["s2"].get<double>()};
        CHECK(B2(pb, s).value == doctest::Approx(e["value"].get<double>()).epsilon(1e-2));
      }
    }
  }
}
