#include "hardyvl/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include "hardyvl/error.hpp"

namespace hardyvl {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require_hardy_scale(double p, double s, const char* what) {
  if (!(s > 1.0 && s < p))
    throw DomainError(std::string(what) + " requires 1 < s < p (got s=" + format_number(s) + ", p=" +
                      format_number(p) + ")");
}

double lower_axis(double p, double s) {
  require_hardy_scale(p, s, "lower_factor");
  const double r = std::pow(p / (p - s), p);
  return std::pow(r / (r + 1.0 / (s - 1.0)), 1.0 / p);
}

double upper_axis(double p, double s) {
  if (!(p > 1.0)) throw DomainError("upper_factor requires p > 1");
  if (!(s >= 1.0) || s > p)
    throw DomainError("upper_factor requires 1 <= s <= p (got s=" + format_number(s) + ")");
  if (s == p) return kInf;
  return std::pow((p - 1.0) / (p - s), (p - 1.0) / p);
}

double pk_lower_axis(double p, double s) {
  if (!(p > 0.0)) throw DomainError("pk_lower_factor requires p > 0");
  if (!(s > 1.0)) throw DomainError("pk_lower_factor requires s > 1 (got s=" + format_number(s) + ")");
  // e^s (s-1) / (e^s (s-1) + 1) = 1 / (1 + e^{-s}/(s-1)), stable for large s.
  return std::pow(1.0 / (1.0 + std::exp(-s) / (s - 1.0)), 1.0 / p);
}

struct Range {
  double lo, hi;
};

Range open_range(double from, double to) {
  const double h = (to - from) / 40.0;
  return {from + h, to - h};
}

std::vector<double> grid_points(const Range& r, int n) {
  if (n < 2) return {0.5 * (r.lo + r.hi)};
  std::vector<double> g(n);
  for (int k = 0; k < n; ++k) g[k] = r.lo + (r.hi - r.lo) * k / (n - 1);
  return g;
}

// Memoized functional over s; 1D problems use s1 only.
class Evaluator {
 public:
  Evaluator(const ScaleFunctional& f, SandwichReport& rep, int dim) : f_(f), rep_(rep), dim_(dim) {}

  double operator()(const ScalePoint& s) {
    const auto key = std::make_pair(s.s1, dim_ == 2 ? s.s2 : 0.0);
    auto it = memo_.find(key);
    if (it != memo_.end()) return it->second;
    CharacterizationValue cv = f_(s);
    if (!cv.converged) rep_.converged = false;
    const double v = cv.infinite ? kInf : cv.value;
    rep_.functional_values.push_back({s, std::move(cv)});
    memo_.emplace(key, v);
    return v;
  }

 private:
  const ScaleFunctional& f_;
  SandwichReport& rep_;
  int dim_;
  std::map<std::pair<double, double>, double> memo_;
};

using Factor = std::function<double(const ScalePoint&)>;

struct Best {
  double value;
  ScalePoint s;
};

double product(double f, double factor) {
  if (f == 0.0) return 0.0;
  return f * factor;
}

// Grid extremum of f * factor; sense = +1 maximizes, -1 minimizes. Infinite f is skipped
// unless every value is infinite.
Best grid_extremum(Evaluator& ev, const std::vector<double>& g, int dim, const Factor& factor, int sense) {
  Best best{sense > 0 ? -kInf : kInf, {g.front(), g.front()}};
  bool any_finite = false;
  const std::size_t n2 = dim == 2 ? g.size() : 1;
  for (std::size_t i = 0; i < g.size(); ++i)
    for (std::size_t j = 0; j < n2; ++j) {
      const ScalePoint s{g[i], dim == 2 ? g[j] : g[i]};
      const double f = ev(s);
      if (!std::isfinite(f)) continue;
      any_finite = true;
      const double v = product(f, factor(s));
      if (sense * v > sense * best.value) best = {v, s};
    }
  if (!any_finite) best.value = kInf;
  return best;
}

void polish(Evaluator& ev, Best& best, const Range& r, double step, int dim, const Factor& factor, int sense,
            const SandwichOptions& opt) {
  if (!std::isfinite(best.value)) return;
  constexpr double gr = 0.6180339887498949;
  auto objective = [&](const ScalePoint& s) {
    const double f = ev(s);
    return std::isfinite(f) ? sense * product(f, factor(s)) : -kInf;
  };
  double width = step;
  for (int sweep = 0; sweep < opt.polish_sweeps; ++sweep) {
    for (int c = 0; c < dim; ++c) {
      double& coord = c == 0 ? best.s.s1 : best.s.s2;
      double a = std::max(r.lo, coord - width), b = std::min(r.hi, coord + width);
      ScalePoint trial = best.s;
      auto at = [&](double x) {
        (c == 0 ? trial.s1 : trial.s2) = x;
        if (dim == 1) trial.s2 = trial.s1;
        return objective(trial);
      };
      double x1 = b - gr * (b - a), x2 = a + gr * (b - a);
      double f1 = at(x1), f2 = at(x2);
      double bx = coord, bv = sense * best.value;
      while (b - a > opt.polish_tol) {
        if (f1 >= f2) {
          b = x2;
          x2 = x1;
          f2 = f1;
          x1 = b - gr * (b - a);
          f1 = at(x1);
        } else {
          a = x1;
          x1 = x2;
          f1 = f2;
          x2 = a + gr * (b - a);
          f2 = at(x2);
        }
        if (f1 > bv) bv = f1, bx = x1;
        if (f2 > bv) bv = f2, bx = x2;
      }
      if (bv > sense * best.value) {
        coord = bx;
        if (dim == 1) best.s.s2 = bx;
        best.value = sense * bv;
      }
    }
    width *= 0.5;
  }
}

SandwichReport run(const ScaleFunctional& functional, double p, Theorem theorem, const SandwichOptions& opt, int dim) {
  SandwichReport rep;
  rep.theorem = theorem;
  rep.multiplier = multiplier(theorem);
  Evaluator ev(functional, rep, dim);

  const bool pk = theorem == Theorem::pk_thm2;
  const auto axes = [dim](const ScalePoint& s, double (*fn)(double, double), double p_) {
    return dim == 2 ? fn(p_, s.s1) * fn(p_, s.s2) : fn(p_, s.s1);
  };
  const Factor lf = [&](const ScalePoint& s) { return axes(s, pk ? pk_lower_axis : lower_axis, p); };
  const Factor uf = [&](const ScalePoint& s) { return axes(s, upper_axis, p); };

  // Upper bound, and the Hardy-side lower bound, over (1, p).
  Best up{kInf, {}}, low{0.0, {}}, restricted{0.0, {}};
  if (p > 1.0) {
    const Range r = open_range(1.0, p);
    const auto g = grid_points(r, opt.s_grid);
    const double step = g.size() > 1 ? g[1] - g[0] : r.hi - r.lo;
    up = grid_extremum(ev, g, dim, uf, -1);
    if (opt.polish) polish(ev, up, r, step, dim, uf, -1, opt);
    if (pk) {
      restricted = grid_extremum(ev, g, dim, lf, +1);
      rep.lower_bound_restricted = restricted.value;
    } else {
      low = grid_extremum(ev, g, dim, lf, +1);
      if (opt.polish) polish(ev, low, r, step, dim, lf, +1, opt);
    }
  } else {
    rep.note = "no admissible s in (1, p) for p <= 1: upper bound unavailable";
  }
  if (pk) {
    // The lower product saturates as s grows; the range is truncated at 1 + 10 max(p - 1, 1).
    const Range r = open_range(1.0, 1.0 + 10.0 * std::max(p - 1.0, 1.0));
    const auto g = grid_points(r, opt.s_grid);
    const double step = g.size() > 1 ? g[1] - g[0] : r.hi - r.lo;
    low = grid_extremum(ev, g, dim, lf, +1);
    if (opt.polish) polish(ev, low, r, step, dim, lf, +1, opt);
    if (restricted.value > low.value) low = restricted;
  }

  const bool all_infinite = std::all_of(rep.functional_values.begin(), rep.functional_values.end(),
                                        [](const ScaleSample& x) { return x.value.infinite; });
  rep.unbounded = !rep.functional_values.empty() && all_infinite;
  rep.lower_bound = low.value;
  rep.s_at_lower = low.s;
  rep.upper_bound = std::isfinite(up.value) ? rep.multiplier * up.value : kInf;
  rep.s_at_upper = up.s;
  if (rep.unbounded) {
    rep.lower_bound = kInf;
    rep.upper_bound = kInf;
    rep.note = "functional infinite at every sampled s";
  } else if (std::any_of(rep.functional_values.begin(), rep.functional_values.end(),
                         [](const ScaleSample& x) { return x.value.infinite; })) {
    rep.lower_bound = kInf;
    rep.note = "functional infinite at some sampled s";
  }
  return rep;
}

}  // namespace

std::string to_string(Theorem t) {
  switch (t) {
    case Theorem::hardy_thm1: return "hardy_thm1";
    case Theorem::pk_thm2: return "pk_thm2";
    case Theorem::lemmaA: return "lemmaA";
    case Theorem::lemma2: return "lemma2";
    case Theorem::lemma3: return "lemma3";
    case Theorem::lemma4: return "lemma4";
    case Theorem::hardy_1d: return "hardy_1d";
  }
  return "unknown";
}

Theorem theorem_from_string(const std::string& name) {
  for (Theorem t : {Theorem::hardy_thm1, Theorem::pk_thm2, Theorem::lemmaA, Theorem::lemma2, Theorem::lemma3,
                    Theorem::lemma4, Theorem::hardy_1d})
    if (to_string(t) == name) return t;
  throw DomainError("unknown theorem '" + name + "'");
}

double multiplier(Theorem t) {
  switch (t) {
    case Theorem::hardy_thm1:
    case Theorem::pk_thm2: return 4.0;
    case Theorem::hardy_1d: return 2.0;
    default: return 1.0;
  }
}

Theorem corner_theorem(CornerVariant v) {
  switch (v) {
    case CornerVariant::AW: return Theorem::lemmaA;
    case CornerVariant::AWstar: return Theorem::lemma2;
    case CornerVariant::AWtilde: return Theorem::lemma3;
    case CornerVariant::AWtilde_star: return Theorem::lemma4;
  }
  return Theorem::lemmaA;
}

double lower_factor(double p, const ScalePoint& s) { return lower_axis(p, s.s1) * lower_axis(p, s.s2); }
double upper_factor(double p, const ScalePoint& s) { return upper_axis(p, s.s1) * upper_axis(p, s.s2); }
double pk_lower_factor(double p, const ScalePoint& s) { return pk_lower_axis(p, s.s1) * pk_lower_axis(p, s.s2); }
double lower_factor_1d(double p, double s) { return lower_axis(p, s); }
double upper_factor_1d(double p, double s) { return upper_axis(p, s); }

SandwichReport optimize_sandwich(const ScaleFunctional& functional, double p, Theorem theorem,
                                 const SandwichOptions& opt) {
  if (opt.s_grid < 1) throw DomainError("s-grid needs at least one point");
  return run(functional, p, theorem, opt, theorem == Theorem::hardy_1d ? 1 : 2);
}

SandwichReport sandwich_hardy(const Problem& pb, const SandwichOptions& opt) {
  return optimize_sandwich([&pb](const ScalePoint& s) { return B2(pb, s); }, pb.exps().p, Theorem::hardy_thm1, opt);
}

SandwichReport sandwich_pk(const PkProblem& pb, const SandwichOptions& opt) {
  return optimize_sandwich([&pb](const ScalePoint& s) { return D2(pb, s); }, pb.config().exps.p, Theorem::pk_thm2,
                           opt);
}

SandwichReport sandwich_corner(CornerVariant variant, const Rect& rect, const Problem& pb,
                               const SandwichOptions& opt) {
  return optimize_sandwich([&](const ScalePoint& s) { return rect_corner(variant, rect, pb, s); }, pb.exps().p,
                           corner_theorem(variant), opt);
}

SandwichReport sandwich_1d(const Problem1D& pb, const SandwichOptions& opt) {
  return optimize_sandwich([&pb](const ScalePoint& s) { return B1(pb, s.s1); }, pb.config().exps.p,
                           Theorem::hardy_1d, opt);
}

}  // namespace hardyvl
