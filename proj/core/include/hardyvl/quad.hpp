#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "hardyvl/error.hpp"
#include "hardyvl/funcspace.hpp"

namespace hardyvl {

struct QuadResult {
  double value = 0.0;
  double error_estimate = 0.0;
  long evaluations = 0;
};

struct QuadOptions {
  int max_subdivisions = 4000;
  /// Absolute error floor; the relative target is tol * |value|.
  double abs_floor = 1e-300;
};

/// Gauss-Legendre rule on [-1, 1].
struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// Cached rule with n points, 1 <= n <= 64.
const GaussRule& gauss_legendre(int n);

namespace detail {

inline constexpr double kXgk[8] = {0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
                                   0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
                                   0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
                                   0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr double kWgk[8] = {0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
                                   0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
                                   0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
                                   0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr double kWg[4] = {0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
                                  0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Segment {
  double a, b, value, error;
};

template <class F>
Segment gk15(F& g, double a, double b) {
  const double c = 0.5 * (a + b), h = 0.5 * (b - a);
  const double fc = g(c);
  double rk = fc * kWgk[7], rg = fc * kWg[3];
  for (int j = 0; j < 7; ++j) {
    const double dx = h * kXgk[j];
    const double s = g(c - dx) + g(c + dx);
    rk += kWgk[j] * s;
    if (j % 2 == 1) rg += kWg[j / 2] * s;
  }
  rk *= h;
  rg *= h;
  if (!std::isfinite(rk)) throw AccuracyError("non-finite integrand value on [" + format_number(a) + ", " +
                                                  format_number(b) + "]",
                                              rk, INFINITY);
  return {a, b, rk, std::abs(rk - rg)};
}

inline bool heap_less(const Segment& x, const Segment& y) { return x.error < y.error; }

}  // namespace detail

/// Adaptive Gauss-Kronrod 7/15 with priority bisection. Stops when the summed error estimate is
/// below max(tol * |value|, abs_floor). Integrable endpoint singularities x^s, s > -1, are
/// resolved by repeated bisection. Budget exhaustion throws AccuracyError with the best estimate.
template <class F>
QuadResult integrate_1d(F&& g, double lo, double hi, double tol = 1e-8, const QuadOptions& opt = {}) {
  if (!(lo < hi)) {
    if (lo == hi) return {};
    throw DomainError("integrate_1d requires lo < hi");
  }
  std::vector<detail::Segment> heap;
  heap.reserve(64);
  heap.push_back(detail::gk15(g, lo, hi));
  long evals = 15;
  long double total = heap.front().value, err = heap.front().error;
  for (int it = 0;; ++it) {
    const double target = std::max(tol * std::abs(static_cast<double>(total)), opt.abs_floor);
    if (static_cast<double>(err) <= target) break;
    if (it >= opt.max_subdivisions)
      throw AccuracyError("integration budget exhausted on [" + format_number(lo) + ", " + format_number(hi) +
                              "] (error " + format_number(static_cast<double>(err)) + ")",
                          static_cast<double>(total), static_cast<double>(err));
    std::pop_heap(heap.begin(), heap.end(), detail::heap_less);
    const detail::Segment s = heap.back();
    heap.pop_back();
    const double mid = 0.5 * (s.a + s.b);
    if (!(mid > s.a && mid < s.b))
      throw AccuracyError("interval underflow near " + format_number(s.a) + " (likely divergent integrand)",
                          static_cast<double>(total), static_cast<double>(err));
    const detail::Segment l = detail::gk15(g, s.a, mid);
    const detail::Segment r = detail::gk15(g, mid, s.b);
    evals += 30;
    total += static_cast<long double>(l.value) + r.value - s.value;
    err += static_cast<long double>(l.error) + r.error - s.error;
    if (err < 0) err = 0;
    heap.push_back(l);
    std::push_heap(heap.begin(), heap.end(), detail::heap_less);
    heap.push_back(r);
    std::push_heap(heap.begin(), heap.end(), detail::heap_less);
  }
  // Re-sum to remove drift from incremental updates.
  long double v = 0, e = 0;
  for (const auto& s : heap) {
    v += s.value;
    e += s.error;
  }
  return {static_cast<double>(v), static_cast<double>(e), evals};
}

/// integrate_1d after the substitution y = exp(s); requires lo > 0. Suited to integrands that
/// behave like powers over many decades.
template <class F>
QuadResult integrate_1d_log(F&& g, double lo, double hi, double tol = 1e-8, const QuadOptions& opt = {}) {
  if (!(lo > 0.0)) throw DomainError("integrate_1d_log requires lo > 0");
  auto h = [&g](double s) {
    const double y = std::exp(s);
    return g(y) * y;
  };
  return integrate_1d(h, std::log(lo), std::log(hi), tol, opt);
}

/// Picks log coordinates when the interval spans more than a factor 8 away from 0.
template <class F>
QuadResult integrate_1d_auto(F&& g, double lo, double hi, double tol = 1e-8, const QuadOptions& opt = {}) {
  if (lo > 0.0 && hi > 8.0 * lo) return integrate_1d_log(g, lo, hi, tol, opt);
  return integrate_1d(g, lo, hi, tol, opt);
}

struct Rect {
  double lo1 = 0, hi1 = 0, lo2 = 0, hi2 = 0;
};

/// Iterated adaptive rule over [lo1, hi1] x [lo2, hi2]. The error estimate adds the outer
/// estimate to the worst relative inner estimate scaled by the result.
template <class F>
QuadResult integrate_2d(F&& g, const Rect& r, double tol = 1e-6, const QuadOptions& opt = {}) {
  if (!(r.lo1 <= r.hi1) || !(r.lo2 <= r.hi2)) throw DomainError("integrate_2d requires an ordered rectangle");
  if (r.lo1 == r.hi1 || r.lo2 == r.hi2) return {};
  long evals = 0;
  double worst_inner = 0.0;
  const double inner_tol = 0.5 * tol;
  auto outer = [&](double x) {
    auto inner = [&](double y) { return g(x, y); };
    const QuadResult q = integrate_1d_auto(inner, r.lo2, r.hi2, inner_tol, opt);
    evals += q.evaluations;
    if (q.value != 0.0) worst_inner = std::max(worst_inner, q.error_estimate / std::abs(q.value));
    return q.value;
  };
  const QuadResult o = integrate_1d_auto(outer, r.lo1, r.hi1, 0.5 * tol, opt);
  return {o.value, o.error_estimate + worst_inner * std::abs(o.value), evals};
}

/// Cumulative transform V(t) = int_0^t v^{1-p'} on a geometric knot set, interpolated by a
/// monotone cubic in log-log coordinates (exact for power laws). Below the first knot V follows
/// the power law fitted at that knot, with V(0) = 0.
class VFunction {
 public:
  VFunction() = default;

  double operator()(double t) const;
  /// V(d) - V(c) >= 0 for 0 <= c <= d <= upper().
  double diff(double c, double d) const;

  double p() const noexcept { return p_; }
  double lower() const noexcept { return knots_.empty() ? 0.0 : knots_.front(); }
  double upper() const noexcept { return knots_.empty() ? 0.0 : knots_.back(); }
  const std::vector<double>& knots() const noexcept { return knots_; }
  const std::vector<double>& cumvals() const noexcept { return cum_; }
  const Weight1D& source() const noexcept { return source_; }

 private:
  friend VFunction build_V(const Weight1D&, double, const Window&, int, const std::string&);
  double p_ = 2.0;
  Weight1D source_;
  std::vector<double> knots_, cum_;
  std::vector<double> lk_, lv_, slope_;
  double dl_ = 1.0;
  double head_exponent_ = 1.0;  // d log V / d log t at the first knot
};

/// Builds V over the knot window. Throws IntegrabilityError naming `name` and p when the
/// integrand v^{1-p'} is not integrable at 0, DomainError when p <= 1.
VFunction build_V(const Weight1D& v, double p, const Window& window, int knot_count = 512,
                  const std::string& name = "v");

/// V(d) - V(c); DomainError outside [0, V.upper()] or when c > d.
double V_diff(const VFunction& V, double c, double d);

}  // namespace hardyvl
