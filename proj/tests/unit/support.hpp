#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "config.hpp"
#include "hardyvl/funcspace.hpp"
#include "hardyvl/ops.hpp"

namespace testing {

inline hardyvl::cli::RunConfig load_config(const std::string& name) {
  return hardyvl::cli::build_config(
      hardyvl::cli::read_key_values(std::string(HARDYVL_TEST_CONFIG_DIR) + "/" + name + ".cfg"));
}

inline double rel_diff(double a, double b) { return std::abs(a - b) / std::max(std::abs(a), std::abs(b)); }

// Hand-rolled generators for property tests; every case is reproducible from the seed.
class Gen {
 public:
  explicit Gen(std::uint64_t seed) : rng_(seed) {}

  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
  double log_uniform(double lo, double hi) { return std::exp(uniform(std::log(lo), std::log(hi))); }
  int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }
  bool coin() { return integer(0, 1) == 1; }

  // Linear a < b, or a power pair c1 x^r < c2 x^r.
  hardyvl::BoundaryPair boundary_pair() {
    const double ratio = uniform(1.2, 4.0);
    const double b = uniform(0.5, 2.0);
    if (coin()) return {hardyvl::MonotoneMap::linear(b / ratio), hardyvl::MonotoneMap::linear(b)};
    const double r = uniform(0.5, 2.0);
    return {hardyvl::MonotoneMap::power(b / ratio, r), hardyvl::MonotoneMap::power(b, r)};
  }

  hardyvl::Weight1D power_weight(double lo = -0.5, double hi = 0.5) {
    return hardyvl::Weight1D::power(uniform(lo, hi));
  }

  // Positive piecewise-constant function on a random geometric grid.
  hardyvl::GridFn grid_fn(int max_cells = 10, double lo = 0.1, double hi = 10.0) {
    hardyvl::GridFn f;
    const int n1 = integer(2, max_cells), n2 = integer(2, max_cells);
    f.edges1 = hardyvl::geometric_edges(lo * uniform(1.0, 2.0), hi * uniform(0.5, 1.0), n1);
    f.edges2 = hardyvl::geometric_edges(lo * uniform(1.0, 2.0), hi * uniform(0.5, 1.0), n2);
    f.values.resize(n1, n2);
    for (int i = 0; i < n1; ++i)
      for (int j = 0; j < n2; ++j) f.values(i, j) = std::exp(uniform(-2.0, 2.0));
    return f;
  }

  std::mt19937_64& engine() { return rng_; }

 private:
  std::mt19937_64 rng_;
};

}  // namespace testing
