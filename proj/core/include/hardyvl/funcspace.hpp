#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace hardyvl {

/// Truncation window [eps, X] for one axis.
struct Window {
  double eps = 1e-6;
  double X = 1e6;

  void validate(const std::string& name = "window") const;
  bool contains(double x) const { return x >= eps && x <= X; }
};

/// Positive weight on (0, inf): power x^alpha, exp_scaled x^alpha * exp(beta x), or a sampled
/// table interpolated log-linearly.
class Weight1D {
 public:
  enum class Kind { power, exp_scaled, sampled };

  static Weight1D power(double alpha);
  static Weight1D exp_scaled(double alpha, double beta);
  static Weight1D sampled(std::vector<double> abscissas, std::vector<double> values);
  static Weight1D unit() { return power(0.0); }

  Weight1D() = default;

  double operator()(double x) const;

  Kind kind() const noexcept { return kind_; }
  double alpha() const noexcept { return alpha_; }
  double beta() const noexcept { return beta_; }
  bool is_unit() const noexcept { return kind_ == Kind::power && alpha_ == 0.0; }
  const std::vector<double>& abscissas() const noexcept { return xs_; }
  const std::vector<double>& values() const noexcept { return vs_; }

  /// Evaluation domain: (0, inf) for analytic kinds, the sampled range otherwise.
  double domain_lo() const noexcept;
  double domain_hi() const noexcept;

  std::string describe() const;

 private:
  Kind kind_ = Kind::power;
  double alpha_ = 0.0;
  double beta_ = 0.0;
  std::vector<double> xs_, vs_;
  std::vector<double> lx_, lv_;
};

/// Weight on (0, inf)^2. A scale factor of 0 is allowed and yields the zero weight.
class Weight2D {
 public:
  enum class Kind { separable, power_pair, sampled, derived };

  using Fn1 = std::function<double(double)>;
  using Fn2 = std::function<double(double, double)>;

  /// Per-axis factors with w(x1, x2) = first(x1) * second(x2). The scale is folded into first.
  struct Factors {
    Fn1 first;
    Fn1 second;
  };

  static Weight2D separable(Weight1D w1, Weight1D w2);
  static Weight2D power_pair(double beta, double gamma);
  /// values are row-major: values[i * x2.size() + j] is the weight at (x1[i], x2[j]).
  static Weight2D sampled(std::vector<double> x1, std::vector<double> x2, std::vector<double> values);
  static Weight2D derived(Fn2 fn, std::string label, std::optional<Factors> factors = std::nullopt);
  static Weight2D zero();
  static Weight2D unit() { return power_pair(0.0, 0.0); }

  /// The unit weight.
  Weight2D();

  double operator()(double x1, double x2) const;

  Weight2D scaled(double lambda) const;

  Kind kind() const noexcept;
  double scale() const noexcept { return scale_; }
  bool is_zero() const noexcept { return scale_ == 0.0; }
  std::optional<Factors> factors() const;
  std::string describe() const;

  const Weight1D* first() const noexcept;
  const Weight1D* second() const noexcept;
  double beta() const noexcept;
  double gamma() const noexcept;

 private:
  struct Impl;
  std::shared_ptr<const Impl> impl_;
  double scale_ = 1.0;
};

/// Strictly increasing map on (0, inf) vanishing at 0: linear c*x, power c*x^r, or a sampled
/// monotone table interpolated log-linearly.
class MonotoneMap {
 public:
  enum class Kind { linear, power, sampled };

  static MonotoneMap linear(double c);
  static MonotoneMap power(double c, double r);
  static MonotoneMap sampled(std::vector<double> x, std::vector<double> y);

  MonotoneMap() = default;

  double operator()(double x) const;
  /// Inverse; exact for analytic kinds, bisection for sampled tables.
  double inverse(double y, double tol = 1e-12) const;
  double derivative(double x) const;
  /// Derivative of the inverse at y. Analytic for linear/power, central difference otherwise.
  double inverse_derivative(double y) const;

  Kind kind() const noexcept { return kind_; }
  double coefficient() const noexcept { return c_; }
  double exponent() const noexcept { return r_; }
  double domain_lo() const noexcept;
  double domain_hi() const noexcept;
  double range_lo() const noexcept;
  double range_hi() const noexcept;
  const std::vector<double>& table_x() const noexcept { return xs_; }
  const std::vector<double>& table_y() const noexcept { return ys_; }

  std::string describe() const;

 private:
  Kind kind_ = Kind::linear;
  double c_ = 1.0;
  double r_ = 1.0;
  std::vector<double> xs_, ys_;
  std::vector<double> lx_, ly_;
};

double eval_boundary(const MonotoneMap& f, double x);
/// Inverse with |f(x) - y| <= tol * max(1, y). Sampled tables throw RangeError when y is
/// outside the table range.
double invert_boundary(const MonotoneMap& f, double y, double tol = 1e-12);

/// Bisection for f(x) = y with f increasing on [lo, hi]; geometric midpoints while hi/lo > 4.
double bisect_increasing(const std::function<double(double)>& f, double y, double lo, double hi,
                         double tol = 1e-12, int max_iter = 200);

/// Pair of boundary maps with a < b. Construction checks the ordering and monotonicity on a
/// probe sequence.
class BoundaryPair {
 public:
  BoundaryPair() : BoundaryPair(MonotoneMap::linear(0.5), MonotoneMap::linear(1.0)) {}
  BoundaryPair(MonotoneMap a, MonotoneMap b);

  const MonotoneMap& a() const noexcept { return a_; }
  const MonotoneMap& b() const noexcept { return b_; }

  /// a^{-1}(b(t)): the admissible x lie in (t, x_upper(t)).
  double x_upper(double t) const;
  /// True when a(x)/b(x) comes within 1e-3 of 1 on the probe sequence.
  bool degenerate() const noexcept { return degenerate_; }

  std::string describe() const;

 private:
  MonotoneMap a_, b_;
  bool degenerate_ = false;
};

struct SearchPoint {
  double t1 = 0, t2 = 0, x1 = 0, x2 = 0;
};

/// 0 < t_i < x_i and a_i(x_i) < b_i(t_i) for both axes.
bool admissible(const SearchPoint& pt, const BoundaryPair& axis1, const BoundaryPair& axis2);
bool admissible_axis(double t, double x, const BoundaryPair& pair);

/// Compact number formatting used in messages and descriptors.
std::string format_number(double v);

}  // namespace hardyvl
