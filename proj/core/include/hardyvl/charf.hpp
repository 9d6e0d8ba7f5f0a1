#pragma once

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "hardyvl/funcspace.hpp"
#include "hardyvl/quad.hpp"

namespace hardyvl {

struct Exponents {
  double p = 2.0;
  double q = 2.0;

  /// p / (p - 1); only meaningful for p > 1.
  double pprime() const { return p / (p - 1.0); }
  /// Requires 1 < p <= q < inf.
  void validate_hardy() const;
  /// Requires 0 < p <= q < inf.
  void validate_pk() const;
};

struct ScalePoint {
  double s1 = 1.5;
  double s2 = 1.5;
};

struct Tolerances {
  double quad_1d = 1e-8;
  double quad_2d = 1e-6;
  /// Inner integrals evaluated during the supremum search.
  double search_inner = 1e-5;
  /// Re-evaluation of the final argmax.
  double search_final = 1e-7;
  double invert = 1e-12;
};

struct SearchOptions {
  int t_grid = 24;
  int x_grid = 16;
  int top_k = 5;
  int max_sweeps = 6;
  double golden_tol = 1e-6;
  /// Nodes per cell of the coarse-grid integral table.
  int cell_nodes = 6;
  /// Split separable weights into per-axis searches.
  bool exploit_separability = true;
};

/// Full Hardy-side instance on (0, inf)^2 truncated to per-axis windows.
struct ProblemConfig {
  Exponents exps;
  Weight2D u;
  Weight1D v1, v2;
  BoundaryPair axis1, axis2;
  Window window1, window2;
  Tolerances tols;
  SearchOptions search;
  int knot_count = 512;
};

/// Validated instance with the cumulative transforms built over the images of the windows
/// under the boundary maps.
class Problem {
 public:
  explicit Problem(ProblemConfig cfg);

  const ProblemConfig& config() const noexcept { return cfg_; }
  const Exponents& exps() const noexcept { return cfg_.exps; }
  const Weight2D& u() const noexcept { return cfg_.u; }
  const Weight1D& v(int axis) const { return axis == 1 ? cfg_.v1 : cfg_.v2; }
  const VFunction& V(int axis) const { return axis == 1 ? V1_ : V2_; }
  const BoundaryPair& boundary(int axis) const { return axis == 1 ? cfg_.axis1 : cfg_.axis2; }
  const Window& window(int axis) const { return axis == 1 ? cfg_.window1 : cfg_.window2; }

 private:
  ProblemConfig cfg_;
  VFunction V1_, V2_;
};

/// One-variable instance.
struct ProblemConfig1D {
  Exponents exps;
  Weight1D u;
  Weight1D v;
  BoundaryPair boundary;
  Window window;
  Tolerances tols;
  SearchOptions search;
  int knot_count = 512;
};

class Problem1D {
 public:
  explicit Problem1D(ProblemConfig1D cfg);

  const ProblemConfig1D& config() const noexcept { return cfg_; }
  const VFunction& V() const noexcept { return V_; }

 private:
  ProblemConfig1D cfg_;
  VFunction V_;
};

/// Restriction of a separable problem to one axis, with the given axis factor of u.
ProblemConfig1D restrict_to_axis(const ProblemConfig& cfg, int axis, const Weight1D& u_axis);

struct CharacterizationValue {
  double value = 0.0;
  SearchPoint argmax;
  long evaluations = 0;
  bool converged = true;
  /// Set when window doubling indicates divergence; value is then +inf.
  bool infinite = false;
  /// Set when no admissible point exists in the window.
  bool empty_region = false;
  /// Relative accuracy of `value` at the argmax.
  double error_estimate = 0.0;
  std::string note;
};

/// Window [eps, X] of the cumulative transform for one axis: covers a(eps) .. b(X).
Window V_window(const BoundaryPair& pair, const Window& w);

/// Supremand of the two-axis functional at an admissible point.
double B2_supremand(const Problem& pb, const ScalePoint& s, const SearchPoint& pt, double tol = 1e-8);
double B1_supremand(const Problem1D& pb, double s, double t, double x, double tol = 1e-9);

CharacterizationValue B2(const Problem& pb, const ScalePoint& s);
CharacterizationValue B1(const Problem1D& pb, double s);

/// Result of the limit extrapolation toward s = p.
struct LimitValue {
  double value = 0.0;
  double spread = 0.0;
  std::vector<double> deltas;
  std::vector<double> raw;
};

/// First-order Richardson extrapolation of a sequence sampled at deltas halving toward 0.
/// Throws ExtrapolationError on non-monotone or non-contracting sequences.
LimitValue extrapolate_limit(const std::vector<double>& deltas, const std::vector<double>& values);

/// Limit of B1(p - delta_k), delta_k = delta0 * 2^-k, k = 0..K-1.
LimitValue A_limit(const Problem1D& pb, double delta0 = 0.1, int count = 4);

// ---------------------------------------------------------------- geometric-mean side

/// Instance of the geometric-mean inequality with a two-variable weight v on the right.
struct PkConfig {
  Exponents exps;
  Weight2D u;
  Weight2D v;
  BoundaryPair axis1, axis2;
  Window window1, window2;
  Tolerances tols;
  SearchOptions search;
};

/// w(x) = exp(box mean of ln(1/v))^{q/p} * u(x) over [a1(x1), b1(x1)] x [a2(x2), b2(x2)].
/// Box means are memoized; separable v gives per-axis means and keeps w separable when u is.
Weight2D pk_weight_w(const Weight2D& u, const Weight2D& v, const Exponents& exps, const BoundaryPair& axis1,
                     const BoundaryPair& axis2);

class PkProblem {
 public:
  explicit PkProblem(PkConfig cfg);

  const PkConfig& config() const noexcept { return cfg_; }
  const Weight2D& w() const noexcept { return w_; }
  const BoundaryPair& boundary(int axis) const { return axis == 1 ? cfg_.axis1 : cfg_.axis2; }
  const Window& window(int axis) const { return axis == 1 ? cfg_.window1 : cfg_.window2; }

 private:
  PkConfig cfg_;
  Weight2D w_;
};

double D2_supremand(const PkProblem& pb, const ScalePoint& s, const SearchPoint& pt, double tol = 1e-8);
CharacterizationValue D2(const PkProblem& pb, const ScalePoint& s);

/// Hardy-side instance whose functional coincides with D2: unit v and
/// u' = w * prod (b_i - a_i)^{-q}. Requires p > 1.
ProblemConfig pk_reduced_config(const PkProblem& pb);

// ---------------------------------------------------------------- rectangle corners

enum class CornerVariant { AW, AWstar, AWtilde, AWtilde_star };

std::string to_string(CornerVariant v);

/// Corner functional over rect = [c1, d1] x [c2, d2]. Per axis, a "c-type" factor integrates
/// (V(x) - V(c))^{q(p-s)/p} over [t, d] with prefactor (V(t) - V(c))^{(s-1)/p}; a "d-type"
/// factor integrates (V(d) - V(x))^{q(p-s)/p} over [c, t] with prefactor (V(d) - V(t))^{(s-1)/p}.
/// AW = (c, c), AWstar = (c, d), AWtilde = (d, d), AWtilde_star = (d, c).
/// The argmax stores t in both the t and x fields.
CharacterizationValue rect_corner(CornerVariant variant, const Rect& rect, const Problem& pb, const ScalePoint& s);

double rect_corner_supremand(CornerVariant variant, const Rect& rect, const Problem& pb, const ScalePoint& s,
                             double t1, double t2, double tol = 1e-9);

// ---------------------------------------------------------------- divergence

struct DivergenceCheck {
  bool divergent = false;
  std::vector<double> values;  // functional on windows [eps/2^k, 2^k X], k = 0..2
  std::string detail;
};

/// Flags divergence when each window doubling raises the functional by more than 10%.
DivergenceCheck check_divergence(const std::function<double(int level)>& functional_at_level);

/// Window-doubling check for B2 at one scale point.
DivergenceCheck B2_divergence(const ProblemConfig& cfg, const ScalePoint& s);

}  // namespace hardyvl
