#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <cstdint>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "hardyvl/charf.hpp"
#include "hardyvl/funcspace.hpp"
#include "hardyvl/quad.hpp"

namespace hardyvl {

/// Nonnegative piecewise-constant function on the cells of a tensor grid; zero outside.
/// values(i, j) is the value on [edges1[i], edges1[i+1]) x [edges2[j], edges2[j+1]).
struct GridFn {
  std::vector<double> edges1, edges2;
  Eigen::MatrixXd values;

  static GridFn constant(std::vector<double> edges1, std::vector<double> edges2, double c);

  int cells1() const { return static_cast<int>(edges1.size()) - 1; }
  int cells2() const { return static_cast<int>(edges2.size()) - 1; }
  Rect support() const { return {edges1.front(), edges1.back(), edges2.front(), edges2.back()}; }
  /// DomainError on unsorted edges, shape mismatch or negative values.
  void validate() const;
};

/// n + 1 geometric edges on [lo, hi], lo > 0.
std::vector<double> geometric_edges(double lo, double hi, int n);
/// Splits every cell in two (geometric midpoint when the cell starts above 0).
std::vector<double> refine_edges(const std::vector<double>& edges);
/// Same function on the refined grid.
GridFn refine(const GridFn& f);

/// Lengths of [lo, hi] intersected with each cell.
std::vector<double> cell_overlaps(const std::vector<double>& edges, double lo, double hi);

/// Integral of f over [a1(x1), b1(x1)] x [a2(x2), b2(x2)], exact for piecewise-constant f.
double apply_H2(const GridFn& f, const BoundaryPair& axis1, const BoundaryPair& axis2, double x1, double x2);
/// exp of the box mean of ln f. Returns 0 when f vanishes on part of the box of positive
/// measure (including the part outside the grid).
double apply_G2(const GridFn& f, const BoundaryPair& axis1, const BoundaryPair& axis2, double x1, double x2);

/// (iint_{domain} f^r w)^{1/r} with an 8-point Gauss rule per cell and axis.
double weighted_norm(const GridFn& f, const Weight2D& w, double r, const Rect& domain);

/// Tensor node set for the outer integral and the sparse matrix of overlaps between each
/// node's inner interval and the grid cells.
struct AxisQuadrature {
  std::vector<double> nodes;
  std::vector<double> weights;
  Eigen::SparseMatrix<double, Eigen::RowMajor> overlap;  // nodes x cells
};

/// Gauss nodes between consecutive breakpoints; `interval(node)` gives the node's inner interval.
AxisQuadrature interval_axis(std::vector<double> breaks, const std::vector<double>& edges, int gl,
                             const std::function<std::pair<double, double>(double)>& interval);
/// Inner interval [a(x), b(x)]; nodes cover every x whose interval meets the grid, with
/// `gl` Gauss points between consecutive breakpoints a^{-1}(e_k), b^{-1}(e_k).
AxisQuadrature moving_axis(const BoundaryPair& pair, const std::vector<double>& edges, int gl = 4);
/// Inner interval [c, x] (lower_tail) or [x, d] for x in the rectangle side [c, d].
AxisQuadrature corner_axis(const std::vector<double>& edges, double c, double d, bool lower_tail, int gl = 4);

/// Per-cell integrals of v1 (x) v2.
Eigen::MatrixXd cell_weight_integrals(const std::vector<double>& edges1, const std::vector<double>& edges2,
                                      const Weight1D& v1, const Weight1D& v2);

/// Discretized ratio ||T f||_{q,u} / ||f||_{p,v1 v2} for piecewise-constant f, where T
/// integrates f over the tensor intervals described by the two axis quadratures.
class NormOperator {
 public:
  NormOperator(AxisQuadrature ax1, AxisQuadrature ax2, const Weight2D& u, double q, Eigen::MatrixXd cell_weights,
               double p);

  /// Moving-box operator of a Hardy-side problem on the given grid.
  static NormOperator hardy(const Problem& pb, const std::vector<double>& edges1, const std::vector<double>& edges2);

  double numerator(const Eigen::MatrixXd& F) const;
  double denominator(const Eigen::MatrixXd& F) const;
  /// DomainError when the denominator vanishes.
  double ratio(const Eigen::MatrixXd& F) const;
  /// Gradient of the numerator with respect to the cell values.
  Eigen::MatrixXd numerator_gradient(const Eigen::MatrixXd& F, double* numerator_value = nullptr) const;
  const Eigen::MatrixXd& cell_weights() const noexcept { return wv_; }
  bool zero_weight() const noexcept { return zero_; }
  double p() const noexcept { return p_; }
  double q() const noexcept { return q_; }

 private:
  Eigen::MatrixXd image(const Eigen::MatrixXd& F) const;

  AxisQuadrature ax1_, ax2_;
  Eigen::MatrixXd U_;  // u at node pairs times quadrature weights
  Eigen::MatrixXd wv_;
  double p_, q_;
  bool zero_ = false;
};

/// ||H2 f||_{q,u} / ||f||_{p,v1 v2}; DomainError when the denominator is 0.
double rayleigh_ratio(const GridFn& f, const Problem& pb);

struct NormOptions {
  int resolution = 64;
  double grid_lo = 0.01;
  double grid_hi = 100.0;
  int random_restarts = 3;
  int max_iters = 500;
  std::uint64_t seed = 1;
  bool witness_starts = true;
  /// Relative improvement below which a step counts as stagnant.
  double tol = 1e-10;
  int stagnation_limit = 50;
};

struct NormEstimate {
  double value = 0.0;
  long iterations = 0;
  GridFn best_f;
  bool converged = true;
  std::string best_start;
  std::vector<std::pair<std::string, double>> start_values;
};

/// Best ratio found by damped nonlinear power iteration from several starts.
NormEstimate estimate_norm(const Problem& pb, const NormOptions& opt = {});

/// Same iteration on an arbitrary operator from one start; returns the improved F and its ratio.
std::pair<Eigen::MatrixXd, double> ascend(const NormOperator& op, Eigen::MatrixXd F, const NormOptions& opt,
                                          long* iterations = nullptr, bool* converged = nullptr);

}  // namespace hardyvl
