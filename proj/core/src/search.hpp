#pragma once

#include <functional>

#include "hardyvl/funcspace.hpp"

namespace hardyvl::detail {

/// One axis of a supremand (integral over [lo, hi])^{1/q} * prefactor at parameter theta.
struct AxisState {
  bool valid = false;
  double lo = 0.0, hi = 0.0;
  double pref = 0.0;
  double t = 0.0, x = 0.0;
};

/// Parameterized family of axis states; theta ranges over [0, 1]^dim.
struct AxisFamily {
  int dim = 2;
  std::function<AxisState(const double* theta)> state;
  /// Factor multiplying the weight inside the integral along this axis.
  std::function<double(double)> kernel;
  bool log_scale = true;
};

struct EngineOptions {
  int grid_first = 24;
  int grid_second = 16;
  int top_k = 5;
  int max_sweeps = 6;
  double golden_tol = 1e-6;
  double inner_tol = 1e-5;
  double final_tol = 1e-7;
  int cell_nodes = 6;
  bool exploit_separability = true;
};

struct EngineResult {
  double value = 0.0;
  AxisState first, second;
  long evaluations = 0;
  bool converged = true;
  bool empty = false;
  double error_estimate = 0.0;
};

/// sup over theta of (int_{lo}^{hi} weight * kernel)^{1/q} * pref.
EngineResult maximize_axis(const AxisFamily& fam, const std::function<double(double)>& weight, double q,
                           const EngineOptions& opt);

/// sup over (theta1, theta2) of (iint u * kernel1 * kernel2)^{1/q} * pref1 * pref2.
EngineResult maximize_pair(const AxisFamily& f1, const AxisFamily& f2, const Weight2D& u, double q,
                           const EngineOptions& opt);

}  // namespace hardyvl::detail
