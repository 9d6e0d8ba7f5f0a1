#include "hardyvl/funcspace.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <variant>

#include "hardyvl/error.hpp"

namespace hardyvl {

namespace {

bool strictly_increasing(const std::vector<double>& v) {
  for (std::size_t i = 1; i < v.size(); ++i)
    if (!(v[i] > v[i - 1])) return false;
  return true;
}

// Index k with xs[k] <= x <= xs[k+1], xs sorted, x inside the range.
std::size_t bracket(const std::vector<double>& xs, double x) {
  auto it = std::upper_bound(xs.begin(), xs.end(), x);
  std::size_t k = static_cast<std::size_t>(it - xs.begin());
  if (k == 0) return 0;
  return std::min(k - 1, xs.size() - 2);
}

double loglog_interp(const std::vector<double>& lx, const std::vector<double>& ly, double x) {
  const double l = std::log(x);
  const std::size_t k = bracket(lx, l);
  const double w = (l - lx[k]) / (lx[k + 1] - lx[k]);
  return std::exp(ly[k] + w * (ly[k + 1] - ly[k]));
}

std::vector<double> logs(const std::vector<double>& v) {
  std::vector<double> out(v.size());
  std::transform(v.begin(), v.end(), out.begin(), [](double x) { return std::log(x); });
  return out;
}

}  // namespace

std::string format_number(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

void Window::validate(const std::string& name) const {
  if (!(eps > 0.0) || !std::isfinite(eps)) throw DomainError(name + ".eps must be positive");
  if (!(X > eps) || !std::isfinite(X)) throw DomainError(name + ".X must exceed eps");
}

// ---------------------------------------------------------------- Weight1D

Weight1D Weight1D::power(double alpha) {
  if (!std::isfinite(alpha)) throw DomainError("power weight exponent must be finite");
  Weight1D w;
  w.kind_ = Kind::power;
  w.alpha_ = alpha;
  return w;
}

Weight1D Weight1D::exp_scaled(double alpha, double beta) {
  if (!std::isfinite(alpha) || !std::isfinite(beta))
    throw DomainError("exp_scaled weight parameters must be finite");
  Weight1D w;
  w.kind_ = Kind::exp_scaled;
  w.alpha_ = alpha;
  w.beta_ = beta;
  return w;
}

Weight1D Weight1D::sampled(std::vector<double> abscissas, std::vector<double> values) {
  if (abscissas.size() < 2 || abscissas.size() != values.size())
    throw DomainError("sampled weight needs at least two abscissa/value pairs of equal count");
  if (!strictly_increasing(abscissas)) throw DomainError("sampled weight abscissas must be strictly increasing");
  if (!(abscissas.front() > 0.0)) throw DomainError("sampled weight abscissas must be positive");
  for (double v : values)
    if (!(v > 0.0) || !std::isfinite(v)) throw DomainError("sampled weight values must be positive and finite");
  Weight1D w;
  w.kind_ = Kind::sampled;
  w.xs_ = std::move(abscissas);
  w.vs_ = std::move(values);
  w.lx_ = logs(w.xs_);
  w.lv_ = logs(w.vs_);
  return w;
}

double Weight1D::operator()(double x) const {
  switch (kind_) {
    case Kind::power:
      if (alpha_ == 0.0) return 1.0;
      return std::pow(x, alpha_);
    case Kind::exp_scaled:
      return std::pow(x, alpha_) * std::exp(beta_ * x);
    case Kind::sampled:
      if (!(x >= xs_.front() * (1 - 1e-12)) || !(x <= xs_.back() * (1 + 1e-12)))
        throw DomainError("sampled weight evaluated at " + format_number(x) + " outside [" +
                          format_number(xs_.front()) + ", " + format_number(xs_.back()) + "]");
      return loglog_interp(lx_, lv_, std::clamp(x, xs_.front(), xs_.back()));
  }
  return 0.0;
}

double Weight1D::domain_lo() const noexcept { return kind_ == Kind::sampled ? xs_.front() : 0.0; }
double Weight1D::domain_hi() const noexcept {
  return kind_ == Kind::sampled ? xs_.back() : std::numeric_limits<double>::infinity();
}

std::string Weight1D::describe() const {
  switch (kind_) {
    case Kind::power: return "power:" + format_number(alpha_);
    case Kind::exp_scaled: return "exp_scaled:" + format_number(alpha_) + "," + format_number(beta_);
    case Kind::sampled: return "sampled:" + std::to_string(xs_.size()) + " points";
  }
  return {};
}

// ---------------------------------------------------------------- Weight2D

struct Weight2D::Impl {
  struct Separable {
    Weight1D w1, w2;
  };
  struct PowerPair {
    double beta, gamma;
  };
  struct Sampled {
    std::vector<double> x1, x2, values, lx1, lx2, lv;
  };
  struct Derived {
    Fn2 fn;
    std::string label;
    std::optional<Factors> factors;
  };
  std::variant<Separable, PowerPair, Sampled, Derived> data;
};

Weight2D::Weight2D() : impl_(std::make_shared<const Impl>(Impl{Impl::PowerPair{0.0, 0.0}})) {}

Weight2D Weight2D::separable(Weight1D w1, Weight1D w2) {
  Weight2D w;
  w.impl_ = std::make_shared<const Impl>(Impl{Impl::Separable{std::move(w1), std::move(w2)}});
  return w;
}

Weight2D Weight2D::power_pair(double beta, double gamma) {
  if (!std::isfinite(beta) || !std::isfinite(gamma)) throw DomainError("power_pair exponents must be finite");
  Weight2D w;
  w.impl_ = std::make_shared<const Impl>(Impl{Impl::PowerPair{beta, gamma}});
  return w;
}

Weight2D Weight2D::sampled(std::vector<double> x1, std::vector<double> x2, std::vector<double> values) {
  if (x1.size() < 2 || x2.size() < 2) throw DomainError("sampled 2D weight needs at least 2x2 nodes");
  if (values.size() != x1.size() * x2.size()) throw DomainError("sampled 2D weight value count mismatch");
  if (!strictly_increasing(x1) || !strictly_increasing(x2) || !(x1.front() > 0) || !(x2.front() > 0))
    throw DomainError("sampled 2D weight grids must be positive and strictly increasing");
  for (double v : values)
    if (!(v > 0.0) || !std::isfinite(v)) throw DomainError("sampled 2D weight values must be positive and finite");
  Impl::Sampled s;
  s.lx1 = logs(x1);
  s.lx2 = logs(x2);
  s.lv = logs(values);
  s.x1 = std::move(x1);
  s.x2 = std::move(x2);
  s.values = std::move(values);
  Weight2D w;
  w.impl_ = std::make_shared<const Impl>(Impl{std::move(s)});
  return w;
}

Weight2D Weight2D::derived(Fn2 fn, std::string label, std::optional<Factors> factors) {
  Weight2D w;
  w.impl_ = std::make_shared<const Impl>(Impl{Impl::Derived{std::move(fn), std::move(label), std::move(factors)}});
  return w;
}

Weight2D Weight2D::zero() { return unit().scaled(0.0); }

Weight2D Weight2D::scaled(double lambda) const {
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) throw DomainError("weight scale must be finite and nonnegative");
  Weight2D w = *this;
  w.scale_ = scale_ * lambda;
  return w;
}

double Weight2D::operator()(double x1, double x2) const {
  if (scale_ == 0.0) return 0.0;
  const Impl& im = *impl_;
  double v = 0.0;
  if (auto* s = std::get_if<Impl::PowerPair>(&im.data)) {
    v = (s->beta == 0.0 ? 1.0 : std::pow(x1, s->beta)) * (s->gamma == 0.0 ? 1.0 : std::pow(x2, s->gamma));
  } else if (auto* s = std::get_if<Impl::Separable>(&im.data)) {
    v = s->w1(x1) * s->w2(x2);
  } else if (auto* s = std::get_if<Impl::Sampled>(&im.data)) {
    const auto in = [](const std::vector<double>& g, double x) {
      return x >= g.front() * (1 - 1e-12) && x <= g.back() * (1 + 1e-12);
    };
    if (!in(s->x1, x1) || !in(s->x2, x2))
      throw DomainError("sampled 2D weight evaluated outside its grid at (" + format_number(x1) + ", " +
                        format_number(x2) + ")");
    const double l1 = std::log(std::clamp(x1, s->x1.front(), s->x1.back()));
    const double l2 = std::log(std::clamp(x2, s->x2.front(), s->x2.back()));
    const std::size_t i = bracket(s->lx1, l1), j = bracket(s->lx2, l2);
    const double a = (l1 - s->lx1[i]) / (s->lx1[i + 1] - s->lx1[i]);
    const double b = (l2 - s->lx2[j]) / (s->lx2[j + 1] - s->lx2[j]);
    const std::size_t n2 = s->x2.size();
    const double v00 = s->lv[i * n2 + j], v01 = s->lv[i * n2 + j + 1];
    const double v10 = s->lv[(i + 1) * n2 + j], v11 = s->lv[(i + 1) * n2 + j + 1];
    v = std::exp((1 - a) * (1 - b) * v00 + (1 - a) * b * v01 + a * (1 - b) * v10 + a * b * v11);
  } else {
    v = std::get<Impl::Derived>(im.data).fn(x1, x2);
  }
  return scale_ * v;
}

Weight2D::Kind Weight2D::kind() const noexcept {
  switch (impl_->data.index()) {
    case 0: return Kind::separable;
    case 1: return Kind::power_pair;
    case 2: return Kind::sampled;
    default: return Kind::derived;
  }
}

std::optional<Weight2D::Factors> Weight2D::factors() const {
  const double sc = scale_;
  const Impl& im = *impl_;
  if (auto* s = std::get_if<Impl::PowerPair>(&im.data)) {
    const double be = s->beta, ga = s->gamma;
    return Factors{[sc, be](double x) { return sc * (be == 0.0 ? 1.0 : std::pow(x, be)); },
                   [ga](double x) { return ga == 0.0 ? 1.0 : std::pow(x, ga); }};
  }
  if (auto* s = std::get_if<Impl::Separable>(&im.data)) {
    Weight1D w1 = s->w1, w2 = s->w2;
    return Factors{[sc, w1](double x) { return sc * w1(x); }, [w2](double x) { return w2(x); }};
  }
  if (auto* s = std::get_if<Impl::Derived>(&im.data)) {
    if (!s->factors) return std::nullopt;
    Fn1 f1 = s->factors->first;
    return Factors{[sc, f1](double x) { return sc * f1(x); }, s->factors->second};
  }
  return std::nullopt;
}

std::string Weight2D::describe() const {
  std::string base;
  const Impl& im = *impl_;
  if (auto* s = std::get_if<Impl::PowerPair>(&im.data))
    base = "power_pair:" + format_number(s->beta) + "," + format_number(s->gamma);
  else if (auto* s = std::get_if<Impl::Separable>(&im.data))
    base = "separable(" + s->w1.describe() + ";" + s->w2.describe() + ")";
  else if (auto* s = std::get_if<Impl::Sampled>(&im.data))
    base = "sampled:" + std::to_string(s->x1.size()) + "x" + std::to_string(s->x2.size());
  else
    base = "derived:" + std::get<Impl::Derived>(im.data).label;
  if (scale_ != 1.0) base += "*" + format_number(scale_);
  return base;
}

const Weight1D* Weight2D::first() const noexcept {
  auto* s = std::get_if<Impl::Separable>(&impl_->data);
  return s ? &s->w1 : nullptr;
}
const Weight1D* Weight2D::second() const noexcept {
  auto* s = std::get_if<Impl::Separable>(&impl_->data);
  return s ? &s->w2 : nullptr;
}
double Weight2D::beta() const noexcept {
  auto* s = std::get_if<Impl::PowerPair>(&impl_->data);
  return s ? s->beta : 0.0;
}
double Weight2D::gamma() const noexcept {
  auto* s = std::get_if<Impl::PowerPair>(&impl_->data);
  return s ? s->gamma : 0.0;
}

// ---------------------------------------------------------------- MonotoneMap

MonotoneMap MonotoneMap::linear(double c) {
  if (!(c > 0.0) || !std::isfinite(c)) throw DomainError("linear boundary slope must be positive");
  MonotoneMap m;
  m.kind_ = Kind::linear;
  m.c_ = c;
  m.r_ = 1.0;
  return m;
}

MonotoneMap MonotoneMap::power(double c, double r) {
  if (!(c > 0.0) || !(r > 0.0) || !std::isfinite(c) || !std::isfinite(r))
    throw DomainError("power boundary needs c > 0 and r > 0");
  MonotoneMap m;
  m.kind_ = Kind::power;
  m.c_ = c;
  m.r_ = r;
  return m;
}

MonotoneMap MonotoneMap::sampled(std::vector<double> x, std::vector<double> y) {
  if (x.size() < 2 || x.size() != y.size()) throw DomainError("sampled boundary needs matching tables of size >= 2");
  if (!(x.front() > 0.0) || !(y.front() > 0.0)) throw DomainError("sampled boundary tables must be positive");
  if (!strictly_increasing(x) || !strictly_increasing(y))
    throw DomainError("sampled boundary must be strictly increasing");
  MonotoneMap m;
  m.kind_ = Kind::sampled;
  m.lx_ = logs(x);
  m.ly_ = logs(y);
  m.xs_ = std::move(x);
  m.ys_ = std::move(y);
  return m;
}

double MonotoneMap::operator()(double x) const {
  switch (kind_) {
    case Kind::linear: return c_ * x;
    case Kind::power: return c_ * std::pow(x, r_);
    case Kind::sampled:
      if (!(x >= xs_.front() * (1 - 1e-12)) || !(x <= xs_.back() * (1 + 1e-12)))
        throw DomainError("sampled boundary evaluated at " + format_number(x) + " outside its table window");
      return loglog_interp(lx_, ly_, std::clamp(x, xs_.front(), xs_.back()));
  }
  return 0.0;
}

double MonotoneMap::inverse(double y, double tol) const {
  if (!(y > 0.0)) throw DomainError("boundary inverse requires y > 0");
  switch (kind_) {
    case Kind::linear: return y / c_;
    case Kind::power: return std::pow(y / c_, 1.0 / r_);
    case Kind::sampled: {
      if (y < ys_.front() * (1 - 1e-12) || y > ys_.back() * (1 + 1e-12))
        throw RangeError("value " + format_number(y) + " outside the range [" + format_number(ys_.front()) + ", " +
                         format_number(ys_.back()) + "] of the sampled boundary");
      const double yc = std::clamp(y, ys_.front(), ys_.back());
      return bisect_increasing([this](double x) { return (*this)(x); }, yc, xs_.front(), xs_.back(), tol);
    }
  }
  return 0.0;
}

double MonotoneMap::derivative(double x) const {
  switch (kind_) {
    case Kind::linear: return c_;
    case Kind::power: return c_ * r_ * std::pow(x, r_ - 1.0);
    case Kind::sampled: {
      const double h = 1e-6 * std::max(1.0, x);
      const double lo = std::max(xs_.front(), x - h), hi = std::min(xs_.back(), x + h);
      return ((*this)(hi) - (*this)(lo)) / (hi - lo);
    }
  }
  return 0.0;
}

double MonotoneMap::inverse_derivative(double y) const {
  switch (kind_) {
    case Kind::linear: return 1.0 / c_;
    case Kind::power: return std::pow(y / c_, 1.0 / r_) / (r_ * y);
    case Kind::sampled: {
      const double h = 1e-6 * std::max(1.0, y);
      const double lo = std::max(ys_.front(), y - h), hi = std::min(ys_.back(), y + h);
      return (inverse(hi) - inverse(lo)) / (hi - lo);
    }
  }
  return 0.0;
}

double MonotoneMap::domain_lo() const noexcept { return kind_ == Kind::sampled ? xs_.front() : 0.0; }
double MonotoneMap::domain_hi() const noexcept {
  return kind_ == Kind::sampled ? xs_.back() : std::numeric_limits<double>::infinity();
}
double MonotoneMap::range_lo() const noexcept { return kind_ == Kind::sampled ? ys_.front() : 0.0; }
double MonotoneMap::range_hi() const noexcept {
  return kind_ == Kind::sampled ? ys_.back() : std::numeric_limits<double>::infinity();
}

std::string MonotoneMap::describe() const {
  switch (kind_) {
    case Kind::linear: return "linear:" + format_number(c_);
    case Kind::power: return "power:" + format_number(c_) + "," + format_number(r_);
    case Kind::sampled: return "sampled:" + std::to_string(xs_.size()) + " points";
  }
  return {};
}

double eval_boundary(const MonotoneMap& f, double x) {
  if (!(x > 0.0)) throw DomainError("boundary evaluation requires x > 0");
  return f(x);
}

double invert_boundary(const MonotoneMap& f, double y, double tol) { return f.inverse(y, tol); }

double bisect_increasing(const std::function<double(double)>& f, double y, double lo, double hi, double tol,
                         int max_iter) {
  if (!(lo < hi)) throw DomainError("bisection bracket must satisfy lo < hi");
  double flo = f(lo), fhi = f(hi);
  const double slack = tol * std::max(1.0, std::abs(y));
  if (y < flo - slack || y > fhi + slack)
    throw RangeError("value " + format_number(y) + " not bracketed by [" + format_number(flo) + ", " +
                     format_number(fhi) + "]");
  if (std::abs(flo - y) <= slack) return lo;
  if (std::abs(fhi - y) <= slack) return hi;
  double best = lo, best_err = std::abs(flo - y);
  for (int it = 0; it < max_iter; ++it) {
    const double mid = (lo > 0.0 && hi / lo > 4.0) ? std::sqrt(lo * hi) : 0.5 * (lo + hi);
    const double fm = f(mid);
    const double err = std::abs(fm - y);
    if (err < best_err) {
      best = mid;
      best_err = err;
    }
    if (err <= slack) return mid;
    if (mid <= lo || mid >= hi) break;  // bracket exhausted at double resolution
    if (fm < y)
      lo = mid;
    else
      hi = mid;
  }
  return best;
}

// ---------------------------------------------------------------- BoundaryPair

BoundaryPair::BoundaryPair(MonotoneMap a, MonotoneMap b) : a_(std::move(a)), b_(std::move(b)) {
  const double lo = std::max({a_.domain_lo(), b_.domain_lo(), 1e-6});
  const double hi = std::min({a_.domain_hi(), b_.domain_hi(), 1e6});
  if (!(hi > lo)) throw DomainError("boundary pair has an empty common domain");
  constexpr int n = 97;
  double prev_a = 0.0, prev_b = 0.0, max_ratio = 0.0;
  for (int k = 0; k < n; ++k) {
    const double x = lo * std::pow(hi / lo, static_cast<double>(k) / (n - 1));
    const double av = a_(x), bv = b_(x);
    if (!(av < bv))
      throw DomainError("boundary pair violates a(x) < b(x) at x=" + format_number(x) + " (" + a_.describe() +
                        " vs " + b_.describe() + ")");
    if (k > 0 && (!(av > prev_a) || !(bv > prev_b)))
      throw DomainError("boundary pair is not strictly increasing near x=" + format_number(x));
    prev_a = av;
    prev_b = bv;
    max_ratio = std::max(max_ratio, av / bv);
  }
  degenerate_ = max_ratio > 1.0 - 1e-3;
}

double BoundaryPair::x_upper(double t) const { return a_.inverse(b_(t)); }

std::string BoundaryPair::describe() const { return "a=" + a_.describe() + " b=" + b_.describe(); }

bool admissible_axis(double t, double x, const BoundaryPair& pair) {
  return t > 0.0 && t < x && pair.a()(x) < pair.b()(t);
}

bool admissible(const SearchPoint& pt, const BoundaryPair& axis1, const BoundaryPair& axis2) {
  return admissible_axis(pt.t1, pt.x1, axis1) && admissible_axis(pt.t2, pt.x2, axis2);
}

}  // namespace hardyvl
