#pragma once

#include <cstdint>

#include "hardyvl/charf.hpp"
#include "hardyvl/ops.hpp"

// Brute-force references for validating the optimized pipeline on small instances.
// Slow by design and single-threaded so regenerated values are reproducible.
namespace hardyvl::oracle {

struct OracleConfig {
  double lo = 1e-2;
  double hi = 1e2;
  /// Log-spaced trapezoid nodes per axis on [lo, hi].
  int mesh = 512;
  /// t and x candidates sit on every `stride`-th mesh node.
  int stride = 2;
  /// Nodes of the private cumulative-transform table.
  int v_mesh = 8192;
  /// Use the 2D path even when u factors.
  bool force_2d = false;

  // ratio search
  int restarts = 2;
  int max_sweeps = 40;
  std::uint64_t seed = 7;
};

/// Exhaustive grid supremum of the two-variable characterization functional over t, x on the
/// candidate mesh of [lo, hi]^2, with trapezoid quadrature and an independently tabulated V.
double oracle_B2(const ProblemConfig& cfg, const ScalePoint& s, const OracleConfig& oc = {});

/// Same construction for one axis of a factorable weight.
double oracle_B1(const ProblemConfig1D& cfg, double s, const OracleConfig& oc = {});

/// Random-restart hill climbing over piecewise-constant f on a resolution^2 geometric grid of
/// [lo, hi], trying each factor in {4, 2, 1.25, 0.8, 0.5, 0.25, 0} on every cell per sweep.
double oracle_ratio_search(const ProblemConfig& cfg, int resolution, const OracleConfig& oc = {});

}  // namespace hardyvl::oracle
