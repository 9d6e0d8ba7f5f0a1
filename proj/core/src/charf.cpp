#include "hardyvl/charf.hpp"

#include <cmath>
#include <limits>
#include <mutex>
#include <unordered_map>
#include <utility>

#include "hardyvl/error.hpp"
#include "search.hpp"

namespace hardyvl {

namespace {

detail::EngineOptions engine_options(const SearchOptions& so, const Tolerances& tol) {
  detail::EngineOptions e;
  e.grid_first = so.t_grid;
  e.grid_second = so.x_grid;
  e.top_k = so.top_k;
  e.max_sweeps = so.max_sweeps;
  e.golden_tol = so.golden_tol;
  e.inner_tol = tol.search_inner;
  e.final_tol = tol.search_final;
  e.cell_nodes = so.cell_nodes;
  e.exploit_separability = so.exploit_separability;
  return e;
}

void check_scale(double s, double p, const char* what) {
  if (!(s > 1.0 && s < p))
    throw DomainError(std::string(what) + " requires 1 < s < p (got s=" + format_number(s) + ", p=" +
                      format_number(p) + ")");
}

// t log-uniform in the window, x log-uniform in (t, min(a^{-1}(b(t)), X)).
std::pair<double, double> tx_from_theta(const BoundaryPair& pair, const Window& w, const double* th, bool& ok) {
  const double t = w.eps * std::exp(th[0] * std::log(w.X / w.eps));
  double xmax = w.X;
  try {
    xmax = std::min(pair.x_upper(t), w.X);
  } catch (const RangeError&) {
    ok = false;
    return {t, t};
  }
  ok = xmax > t;
  return {t, ok ? t * std::pow(xmax / t, th[1]) : t};
}

// Axis family for kernels of the form K(y) with prefactor P(t, x) = D(t, x)^{(s-1)/p}.
template <class Kernel, class Gap>
detail::AxisFamily moving_family(const BoundaryPair& pair, const Window& w, double s, double p, Kernel kernel,
                                 Gap gap) {
  detail::AxisFamily f;
  f.dim = 2;
  const double e = (s - 1.0) / p;
  f.state = [pair, w, e, gap](const double* th) {
    detail::AxisState st;
    bool ok = true;
    const auto [t, x] = tx_from_theta(pair, w, th, ok);
    st.t = t;
    st.x = x;
    if (!ok || !(x > t)) return st;
    const double d = gap(t, x);
    if (!(d > 0.0)) return st;
    st.valid = true;
    st.lo = t;
    st.hi = x;
    st.pref = std::pow(d, e);
    return st;
  };
  f.kernel = std::move(kernel);
  return f;
}

detail::AxisFamily hardy_family(const Problem& pb, int axis, double s) {
  const double p = pb.exps().p, q = pb.exps().q;
  const BoundaryPair& pair = pb.boundary(axis);
  const VFunction& V = pb.V(axis);
  const double ke = q * (p - s) / p;
  auto kernel = [&V, pair, ke](double y) {
    const double d = V(pair.b()(y)) - V(pair.a()(y));
    return d > 0.0 ? std::pow(d, ke) : 0.0;
  };
  auto gap = [&V, pair](double t, double x) { return V(pair.b()(t)) - V(pair.a()(x)); };
  return moving_family(pair, pb.window(axis), s, p, kernel, gap);
}

detail::AxisFamily pk_family(const PkProblem& pb, int axis, double s) {
  const double p = pb.config().exps.p, q = pb.config().exps.q;
  const BoundaryPair& pair = pb.boundary(axis);
  const double ke = -q * s / p;
  auto kernel = [pair, ke](double y) { return std::pow(pair.b()(y) - pair.a()(y), ke); };
  auto gap = [pair](double t, double x) { return pair.b()(t) - pair.a()(x); };
  return moving_family(pair, pb.window(axis), s, p, kernel, gap);
}

CharacterizationValue from_engine(const detail::EngineResult& r, bool two_axes) {
  CharacterizationValue cv;
  cv.value = r.value;
  cv.evaluations = r.evaluations;
  cv.converged = r.converged;
  cv.empty_region = r.empty;
  cv.error_estimate = r.error_estimate;
  cv.argmax = SearchPoint{r.first.t, two_axes ? r.second.t : 0.0, r.first.x, two_axes ? r.second.x : 0.0};
  if (r.empty) cv.note = "no admissible point in the window";
  return cv;
}

double mean_log_1d(const std::function<double(double)>& f, double lo, double hi) {
  auto g = [&f](double y) { return std::log(f(y)); };
  return integrate_1d_auto(g, lo, hi, 1e-10).value / (hi - lo);
}

// Mean of ln y over [lo, hi].
double mean_log_identity(double lo, double hi) {
  const auto F = [](double y) { return y > 0.0 ? y * std::log(y) - y : 0.0; };
  return (F(hi) - F(lo)) / (hi - lo);
}

// Thread-safe memo of a one-variable function.
class Memo1 {
 public:
  explicit Memo1(std::function<double(double)> fn) : fn_(std::move(fn)) {}
  double operator()(double x) {
    {
      std::lock_guard<std::mutex> lk(mu_);
      auto it = cache_.find(x);
      if (it != cache_.end()) return it->second;
    }
    const double v = fn_(x);
    std::lock_guard<std::mutex> lk(mu_);
    cache_.emplace(x, v);
    return v;
  }

 private:
  std::function<double(double)> fn_;
  std::mutex mu_;
  std::unordered_map<double, double> cache_;
};

struct PairHash {
  std::size_t operator()(const std::pair<double, double>& k) const noexcept {
    const std::size_t h1 = std::hash<double>{}(k.first), h2 = std::hash<double>{}(k.second);
    return h1 ^ (h2 + 0x9e3779b97f4a7c15ULL + (h1 << 6) + (h1 >> 2));
  }
};

}  // namespace

// ---------------------------------------------------------------- exponents, problems

void Exponents::validate_hardy() const {
  if (!std::isfinite(p) || !std::isfinite(q)) throw DomainError("exponents must be finite");
  if (!(p > 1.0)) throw DomainError("p must exceed 1 (got p=" + format_number(p) + ")");
  if (!(q >= p)) throw DomainError("q must be at least p (got p=" + format_number(p) + ", q=" + format_number(q) + ")");
}

void Exponents::validate_pk() const {
  if (!std::isfinite(p) || !std::isfinite(q)) throw DomainError("exponents must be finite");
  if (!(p > 0.0)) throw DomainError("p must be positive (got p=" + format_number(p) + ")");
  if (!(q >= p)) throw DomainError("q must be at least p (got p=" + format_number(p) + ", q=" + format_number(q) + ")");
}

Window V_window(const BoundaryPair& pair, const Window& w) {
  w.validate();
  return Window{pair.a()(w.eps), pair.b()(w.X)};
}

Problem::Problem(ProblemConfig cfg) : cfg_(std::move(cfg)) {
  cfg_.exps.validate_hardy();
  cfg_.window1.validate("window1");
  cfg_.window2.validate("window2");
  V1_ = build_V(cfg_.v1, cfg_.exps.p, V_window(cfg_.axis1, cfg_.window1), cfg_.knot_count, "v1");
  V2_ = build_V(cfg_.v2, cfg_.exps.p, V_window(cfg_.axis2, cfg_.window2), cfg_.knot_count, "v2");
}

Problem1D::Problem1D(ProblemConfig1D cfg) : cfg_(std::move(cfg)) {
  cfg_.exps.validate_hardy();
  cfg_.window.validate();
  V_ = build_V(cfg_.v, cfg_.exps.p, V_window(cfg_.boundary, cfg_.window), cfg_.knot_count, "v");
}

ProblemConfig1D restrict_to_axis(const ProblemConfig& cfg, int axis, const Weight1D& u_axis) {
  if (axis != 1 && axis != 2) throw DomainError("axis must be 1 or 2");
  ProblemConfig1D c;
  c.exps = cfg.exps;
  c.u = u_axis;
  c.v = axis == 1 ? cfg.v1 : cfg.v2;
  c.boundary = axis == 1 ? cfg.axis1 : cfg.axis2;
  c.window = axis == 1 ? cfg.window1 : cfg.window2;
  c.tols = cfg.tols;
  c.search = cfg.search;
  c.knot_count = cfg.knot_count;
  return c;
}

// ---------------------------------------------------------------- Hardy-side functionals

double B2_supremand(const Problem& pb, const ScalePoint& s, const SearchPoint& pt, double tol) {
  const double p = pb.exps().p;
  check_scale(s.s1, p, "B2");
  check_scale(s.s2, p, "B2");
  if (!admissible(pt, pb.boundary(1), pb.boundary(2))) throw DomainError("B2 supremand at an inadmissible point");
  const auto f1 = hardy_family(pb, 1, s.s1), f2 = hardy_family(pb, 2, s.s2);
  const VFunction &V1 = pb.V(1), &V2 = pb.V(2);
  const auto &ax1 = pb.boundary(1), &ax2 = pb.boundary(2);
  const double d1 = V1(ax1.b()(pt.t1)) - V1(ax1.a()(pt.x1));
  const double d2 = V2(ax2.b()(pt.t2)) - V2(ax2.a()(pt.x2));
  if (pb.u().is_zero()) return 0.0;
  auto g = [&](double y1, double y2) { return pb.u()(y1, y2) * f1.kernel(y1) * f2.kernel(y2); };
  const double I = integrate_2d(g, Rect{pt.t1, pt.x1, pt.t2, pt.x2}, tol).value;
  return std::pow(std::max(I, 0.0), 1.0 / pb.exps().q) * std::pow(d1, (s.s1 - 1.0) / p) *
         std::pow(d2, (s.s2 - 1.0) / p);
}

double B1_supremand(const Problem1D& pb, double s, double t, double x, double tol) {
  const auto& cfg = pb.config();
  const double p = cfg.exps.p, q = cfg.exps.q;
  check_scale(s, p, "B1");
  if (!admissible_axis(t, x, cfg.boundary)) throw DomainError("B1 supremand at an inadmissible point");
  const VFunction& V = pb.V();
  const auto& pair = cfg.boundary;
  const double ke = q * (p - s) / p;
  auto g = [&](double y) {
    const double d = V(pair.b()(y)) - V(pair.a()(y));
    return cfg.u(y) * (d > 0.0 ? std::pow(d, ke) : 0.0);
  };
  const double I = integrate_1d_auto(g, t, x, tol).value;
  const double d = V(pair.b()(t)) - V(pair.a()(x));
  return std::pow(std::max(I, 0.0), 1.0 / q) * std::pow(d, (s - 1.0) / p);
}

CharacterizationValue B2(const Problem& pb, const ScalePoint& s) {
  const double p = pb.exps().p;
  check_scale(s.s1, p, "B2");
  check_scale(s.s2, p, "B2");
  const auto f1 = hardy_family(pb, 1, s.s1), f2 = hardy_family(pb, 2, s.s2);
  const auto r = detail::maximize_pair(f1, f2, pb.u(), pb.exps().q, engine_options(pb.config().search, pb.config().tols));
  return from_engine(r, true);
}

CharacterizationValue B1(const Problem1D& pb, double s) {
  const auto& cfg = pb.config();
  const double p = cfg.exps.p, q = cfg.exps.q;
  check_scale(s, p, "B1");
  const VFunction& V = pb.V();
  const BoundaryPair& pair = cfg.boundary;
  const double ke = q * (p - s) / p;
  auto kernel = [&V, pair, ke](double y) {
    const double d = V(pair.b()(y)) - V(pair.a()(y));
    return d > 0.0 ? std::pow(d, ke) : 0.0;
  };
  auto gap = [&V, pair](double t, double x) { return V(pair.b()(t)) - V(pair.a()(x)); };
  const auto fam = moving_family(pair, cfg.window, s, p, kernel, gap);
  const Weight1D u = cfg.u;
  const auto r = detail::maximize_axis(fam, [u](double y) { return u(y); }, q, engine_options(cfg.search, cfg.tols));
  return from_engine(r, false);
}

// ---------------------------------------------------------------- limit toward s = p

LimitValue extrapolate_limit(const std::vector<double>& deltas, const std::vector<double>& values) {
  if (deltas.size() != values.size() || values.size() < 2)
    throw ExtrapolationError("extrapolation needs at least two matching samples", values);
  for (double v : values)
    if (!std::isfinite(v)) throw ExtrapolationError("non-finite value in the extrapolation sequence", values);
  double scale = 0.0;
  for (double v : values) scale = std::max(scale, std::abs(v));
  const double noise = 1e-9 * std::max(scale, 1e-300);
  std::vector<double> d(values.size() - 1);
  for (std::size_t k = 0; k + 1 < values.size(); ++k) d[k] = values[k + 1] - values[k];
  int sign = 0;
  for (double dk : d) {
    if (std::abs(dk) <= noise) continue;
    const int sk = dk > 0 ? 1 : -1;
    if (sign != 0 && sk != sign) throw ExtrapolationError("non-monotone sequence toward the limit", values);
    sign = sk;
  }
  for (std::size_t k = 0; k + 1 < d.size(); ++k)
    if (std::abs(d[k + 1]) > noise && std::abs(d[k + 1]) > 0.75 * std::abs(d[k]))
      throw ExtrapolationError("differences do not contract: sequence diverging toward the limit", values);

  LimitValue lv;
  lv.deltas = deltas;
  lv.raw = values;
  const std::size_t K = values.size() - 1;
  // Order-1 Richardson for deltas halving: R = 2 v(delta/2) - v(delta).
  lv.value = 2.0 * values[K] - values[K - 1];
  lv.spread = K >= 2 ? std::abs(lv.value - (2.0 * values[K - 1] - values[K - 2])) : std::abs(d.back());
  return lv;
}

LimitValue A_limit(const Problem1D& pb, double delta0, int count) {
  const double p = pb.config().exps.p;
  if (!(delta0 > 0.0) || !(delta0 < p - 1.0)) throw DomainError("A_limit requires 0 < delta0 < p - 1");
  if (count < 2) throw DomainError("A_limit needs at least two samples");
  std::vector<double> deltas, values;
  for (int k = 0; k < count; ++k) {
    const double dk = delta0 * std::ldexp(1.0, -k);
    deltas.push_back(dk);
    values.push_back(B1(pb, p - dk).value);
  }
  return extrapolate_limit(deltas, values);
}

// ---------------------------------------------------------------- geometric-mean side

Weight2D pk_weight_w(const Weight2D& u, const Weight2D& v, const Exponents& exps, const BoundaryPair& axis1,
                     const BoundaryPair& axis2) {
  if (v.is_zero()) throw IntegrabilityError("ln(1/v) is not integrable: v vanishes identically");
  const double r = exps.q / exps.p;
  if (v.kind() == Weight2D::Kind::power_pair && v.beta() == 0.0 && v.gamma() == 0.0 && v.scale() == 1.0) return u;

  const std::string label = "pk_w(u=" + u.describe() + ", v=" + v.describe() + ")";
  if (v.kind() == Weight2D::Kind::power_pair) {
    // Closed-form box means of ln y along each axis.
    const double be = v.beta(), ga = v.gamma(), ls = std::log(v.scale());
    auto m1 = [axis1, be](double x) { return be == 0.0 ? 0.0 : be * mean_log_identity(axis1.a()(x), axis1.b()(x)); };
    auto m2 = [axis2, ga](double x) { return ga == 0.0 ? 0.0 : ga * mean_log_identity(axis2.a()(x), axis2.b()(x)); };
    auto fn = [u, r, m1, m2, ls](double x1, double x2) { return u(x1, x2) * std::exp(-r * (m1(x1) + m2(x2) + ls)); };
    std::optional<Weight2D::Factors> fac;
    if (auto uf = u.factors())
      fac = Weight2D::Factors{[f = uf->first, r, m1, ls](double x) { return f(x) * std::exp(-r * (m1(x) + ls)); },
                              [f = uf->second, r, m2](double x) { return f(x) * std::exp(-r * m2(x)); }};
    return Weight2D::derived(fn, label, fac);
  }

  if (auto vf = v.factors()) {
    auto c1 = std::make_shared<Memo1>([axis1, f = vf->first](double x) {
      return mean_log_1d(f, axis1.a()(x), axis1.b()(x));
    });
    auto c2 = std::make_shared<Memo1>([axis2, f = vf->second](double x) {
      return mean_log_1d(f, axis2.a()(x), axis2.b()(x));
    });
    auto fn = [u, r, c1, c2](double x1, double x2) { return u(x1, x2) * std::exp(-r * ((*c1)(x1) + (*c2)(x2))); };
    std::optional<Weight2D::Factors> fac;
    if (auto uf = u.factors())
      fac = Weight2D::Factors{[f = uf->first, r, c1](double x) { return f(x) * std::exp(-r * (*c1)(x)); },
                              [f = uf->second, r, c2](double x) { return f(x) * std::exp(-r * (*c2)(x)); }};
    return Weight2D::derived(fn, label, fac);
  }

  struct BoxCache {
    std::mutex mu;
    std::unordered_map<std::pair<double, double>, double, PairHash> map;
  };
  auto cache = std::make_shared<BoxCache>();
  auto mean = [v, axis1, axis2, cache](double x1, double x2) {
    const auto key = std::make_pair(x1, x2);
    {
      std::lock_guard<std::mutex> lk(cache->mu);
      auto it = cache->map.find(key);
      if (it != cache->map.end()) return it->second;
    }
    const Rect box{axis1.a()(x1), axis1.b()(x1), axis2.a()(x2), axis2.b()(x2)};
    double m = 0.0;
    try {
      auto g = [&v](double y1, double y2) { return std::log(v(y1, y2)); };
      m = integrate_2d(g, box, 1e-8).value / ((box.hi1 - box.lo1) * (box.hi2 - box.lo2));
    } catch (const AccuracyError& e) {
      throw IntegrabilityError("ln(1/v) not integrable on the box at (" + format_number(x1) + ", " +
                               format_number(x2) + "): " + e.what());
    }
    std::lock_guard<std::mutex> lk(cache->mu);
    cache->map.emplace(key, m);
    return m;
  };
  auto fn = [u, r, mean](double x1, double x2) { return u(x1, x2) * std::exp(-r * mean(x1, x2)); };
  return Weight2D::derived(fn, label);
}

PkProblem::PkProblem(PkConfig cfg) : cfg_(std::move(cfg)) {
  cfg_.exps.validate_pk();
  cfg_.window1.validate("window1");
  cfg_.window2.validate("window2");
  w_ = pk_weight_w(cfg_.u, cfg_.v, cfg_.exps, cfg_.axis1, cfg_.axis2);
}

double D2_supremand(const PkProblem& pb, const ScalePoint& s, const SearchPoint& pt, double tol) {
  const auto& c = pb.config();
  if (!(s.s1 > 1.0) || !(s.s2 > 1.0)) throw DomainError("D2 requires s_i > 1");
  if (!admissible(pt, c.axis1, c.axis2)) throw DomainError("D2 supremand at an inadmissible point");
  const double p = c.exps.p, q = c.exps.q;
  const auto f1 = pk_family(pb, 1, s.s1), f2 = pk_family(pb, 2, s.s2);
  const double d1 = c.axis1.b()(pt.t1) - c.axis1.a()(pt.x1);
  const double d2 = c.axis2.b()(pt.t2) - c.axis2.a()(pt.x2);
  if (pb.w().is_zero()) return 0.0;
  auto g = [&](double y1, double y2) { return pb.w()(y1, y2) * f1.kernel(y1) * f2.kernel(y2); };
  const double I = integrate_2d(g, Rect{pt.t1, pt.x1, pt.t2, pt.x2}, tol).value;
  return std::pow(std::max(I, 0.0), 1.0 / q) * std::pow(d1, (s.s1 - 1.0) / p) * std::pow(d2, (s.s2 - 1.0) / p);
}

CharacterizationValue D2(const PkProblem& pb, const ScalePoint& s) {
  if (!(s.s1 > 1.0) || !(s.s2 > 1.0)) throw DomainError("D2 requires s_i > 1");
  const auto& c = pb.config();
  const auto f1 = pk_family(pb, 1, s.s1), f2 = pk_family(pb, 2, s.s2);
  const auto r = detail::maximize_pair(f1, f2, pb.w(), c.exps.q, engine_options(c.search, c.tols));
  return from_engine(r, true);
}

ProblemConfig pk_reduced_config(const PkProblem& pb) {
  const auto& c = pb.config();
  if (!(c.exps.p > 1.0)) throw DomainError("the reduction to the Hardy side requires p > 1");
  ProblemConfig out;
  out.exps = c.exps;
  out.v1 = Weight1D::unit();
  out.v2 = Weight1D::unit();
  out.axis1 = c.axis1;
  out.axis2 = c.axis2;
  out.window1 = c.window1;
  out.window2 = c.window2;
  out.tols = c.tols;
  out.search = c.search;
  const Weight2D w = pb.w();
  const double q = c.exps.q;
  const BoundaryPair ax1 = c.axis1, ax2 = c.axis2;
  auto len1 = [ax1, q](double x) { return std::pow(ax1.b()(x) - ax1.a()(x), -q); };
  auto len2 = [ax2, q](double x) { return std::pow(ax2.b()(x) - ax2.a()(x), -q); };
  auto fn = [w, len1, len2](double x1, double x2) { return w(x1, x2) * len1(x1) * len2(x2); };
  std::optional<Weight2D::Factors> fac;
  if (auto wf = w.factors())
    fac = Weight2D::Factors{[f = wf->first, len1](double x) { return f(x) * len1(x); },
                            [f = wf->second, len2](double x) { return f(x) * len2(x); }};
  out.u = w.is_zero() ? Weight2D::zero() : Weight2D::derived(fn, "reduced(" + w.describe() + ")", fac);
  return out;
}

// ---------------------------------------------------------------- rectangle corners

std::string to_string(CornerVariant v) {
  switch (v) {
    case CornerVariant::AW: return "AW";
    case CornerVariant::AWstar: return "AWstar";
    case CornerVariant::AWtilde: return "AWtilde";
    case CornerVariant::AWtilde_star: return "AWtilde_star";
  }
  return "unknown";
}

namespace {

// c-type when true, d-type otherwise.
std::pair<bool, bool> corner_types(CornerVariant v) {
  switch (v) {
    case CornerVariant::AW: return {true, true};
    case CornerVariant::AWstar: return {true, false};
    case CornerVariant::AWtilde: return {false, false};
    case CornerVariant::AWtilde_star: return {false, true};
  }
  return {true, true};
}

detail::AxisState corner_state(const VFunction& V, double c, double d, bool c_type, double t, double e) {
  detail::AxisState st;
  st.t = st.x = t;
  if (!(t > c && t < d)) return st;
  const double gap = c_type ? V(t) - V(c) : V(d) - V(t);
  if (!(gap > 0.0)) return st;
  st.valid = true;
  st.lo = c_type ? t : c;
  st.hi = c_type ? d : t;
  st.pref = std::pow(gap, e);
  return st;
}

detail::AxisFamily corner_family(const VFunction& V, double c, double d, bool c_type, double s, double p, double q,
                                 double eps) {
  detail::AxisFamily f;
  f.dim = 1;
  const double e = (s - 1.0) / p, ke = q * (p - s) / p;
  const double Vc = V(c), Vd = V(d);
  // Log-uniform t when the rectangle side spans decades; near a zero corner, graded toward 0.
  const double lo = c > 0.0 ? c : std::min(eps, 1e-3 * d);
  const bool geometric = d / lo > 4.0;
  f.state = [&V, c, d, c_type, e, lo, geometric](const double* th) {
    const double t = geometric ? lo * std::pow(d / lo, th[0]) : c + th[0] * (d - c);
    return corner_state(V, c, d, c_type, t, e);
  };
  f.kernel = [&V, c_type, ke, Vc, Vd](double y) {
    const double g = c_type ? V(y) - Vc : Vd - V(y);
    return g > 0.0 ? std::pow(g, ke) : 0.0;
  };
  return f;
}

void check_rect(const Rect& rect, const Problem& pb) {
  if (rect.lo1 < 0.0 || rect.lo2 < 0.0) throw DomainError("corner rectangle must lie in the positive quadrant");
  if (rect.hi1 > pb.V(1).upper() * (1 + 1e-12) || rect.hi2 > pb.V(2).upper() * (1 + 1e-12))
    throw DomainError("corner rectangle extends beyond the V window");
}

}  // namespace

double rect_corner_supremand(CornerVariant variant, const Rect& rect, const Problem& pb, const ScalePoint& s,
                             double t1, double t2, double tol) {
  const double p = pb.exps().p, q = pb.exps().q;
  check_scale(s.s1, p, "corner functional");
  check_scale(s.s2, p, "corner functional");
  check_rect(rect, pb);
  if (!(rect.lo1 < rect.hi1) || !(rect.lo2 < rect.hi2) || pb.u().is_zero()) return 0.0;
  const auto [ct1, ct2] = corner_types(variant);
  const auto f1 = corner_family(pb.V(1), rect.lo1, rect.hi1, ct1, s.s1, p, q, pb.window(1).eps);
  const auto f2 = corner_family(pb.V(2), rect.lo2, rect.hi2, ct2, s.s2, p, q, pb.window(2).eps);
  const auto a = corner_state(pb.V(1), rect.lo1, rect.hi1, ct1, t1, (s.s1 - 1.0) / p);
  const auto b = corner_state(pb.V(2), rect.lo2, rect.hi2, ct2, t2, (s.s2 - 1.0) / p);
  if (!a.valid || !b.valid) return 0.0;
  auto g = [&](double y1, double y2) { return pb.u()(y1, y2) * f1.kernel(y1) * f2.kernel(y2); };
  const double I = integrate_2d(g, Rect{a.lo, a.hi, b.lo, b.hi}, tol).value;
  return std::pow(std::max(I, 0.0), 1.0 / q) * a.pref * b.pref;
}

CharacterizationValue rect_corner(CornerVariant variant, const Rect& rect, const Problem& pb, const ScalePoint& s) {
  const double p = pb.exps().p, q = pb.exps().q;
  check_scale(s.s1, p, "corner functional");
  check_scale(s.s2, p, "corner functional");
  check_rect(rect, pb);
  if (!(rect.lo1 < rect.hi1) || !(rect.lo2 < rect.hi2)) {
    CharacterizationValue cv;
    cv.empty_region = true;
    cv.note = "degenerate rectangle";
    return cv;
  }
  const auto [ct1, ct2] = corner_types(variant);
  const auto f1 = corner_family(pb.V(1), rect.lo1, rect.hi1, ct1, s.s1, p, q, pb.window(1).eps);
  const auto f2 = corner_family(pb.V(2), rect.lo2, rect.hi2, ct2, s.s2, p, q, pb.window(2).eps);
  auto opt = engine_options(pb.config().search, pb.config().tols);
  opt.grid_first = std::max(opt.grid_first, 48);
  const auto r = detail::maximize_pair(f1, f2, pb.u(), q, opt);
  auto cv = from_engine(r, true);
  if (variant == CornerVariant::AWtilde || variant == CornerVariant::AWtilde_star)
    cv.note = "d-type axes integrate (V(d) - V(x))^{q(p-s)/p}";
  return cv;
}

// ---------------------------------------------------------------- divergence

DivergenceCheck check_divergence(const std::function<double(int level)>& functional_at_level) {
  DivergenceCheck dc;
  for (int k = 0; k <= 2; ++k) dc.values.push_back(functional_at_level(k));
  const auto grew = [](double prev, double next) { return next > 1.1 * prev && next > 0.0; };
  dc.divergent = grew(dc.values[0], dc.values[1]) && grew(dc.values[1], dc.values[2]);
  dc.detail = "window doubling values " + format_number(dc.values[0]) + ", " + format_number(dc.values[1]) + ", " +
              format_number(dc.values[2]) + (dc.divergent ? " grow by more than 10% per doubling" : " are stable");
  return dc;
}

DivergenceCheck B2_divergence(const ProblemConfig& cfg, const ScalePoint& s) {
  return check_divergence([&](int level) {
    ProblemConfig c = cfg;
    const double f = std::ldexp(1.0, level);
    c.window1 = Window{cfg.window1.eps / f, cfg.window1.X * f};
    c.window2 = Window{cfg.window2.eps / f, cfg.window2.X * f};
    return B2(Problem(c), s).value;
  });
}

}  // namespace hardyvl
