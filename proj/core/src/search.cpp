#include "search.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <vector>

#include "hardyvl/error.hpp"
#include "hardyvl/quad.hpp"

namespace hardyvl::detail {

namespace {

struct Candidate {
  std::array<double, 2> theta{};
  AxisState st;
  std::size_t lo_idx = 0, hi_idx = 0;
};

std::vector<Candidate> make_candidates(const AxisFamily& f, int g1, int g2) {
  std::vector<Candidate> out;
  if (f.dim == 1) {
    for (int j = 0; j < g1; ++j) {
      Candidate c;
      c.theta = {(j + 0.5) / g1, 0.0};
      c.st = f.state(c.theta.data());
      out.push_back(c);
    }
  } else {
    for (int j = 0; j < g1; ++j)
      for (int k = 0; k < g2; ++k) {
        Candidate c;
        c.theta = {(j + 0.5) / g1, (k + 0.5) / g2};
        c.st = f.state(c.theta.data());
        out.push_back(c);
      }
  }
  return out;
}

// Sorted breakpoints of the valid candidates; fills their indices.
std::vector<double> breakpoints(std::vector<Candidate>& cands) {
  std::vector<double> b;
  for (const auto& c : cands)
    if (c.st.valid) {
      b.push_back(c.st.lo);
      b.push_back(c.st.hi);
    }
  std::sort(b.begin(), b.end());
  b.erase(std::unique(b.begin(), b.end()), b.end());
  for (auto& c : cands)
    if (c.st.valid) {
      c.lo_idx = static_cast<std::size_t>(std::lower_bound(b.begin(), b.end(), c.st.lo) - b.begin());
      c.hi_idx = static_cast<std::size_t>(std::lower_bound(b.begin(), b.end(), c.st.hi) - b.begin());
    }
  return b;
}

struct Nodes {
  std::vector<double> y;
  std::vector<double> wk;  // quadrature weight times kernel
};

Nodes cell_nodes(const std::vector<double>& b, const AxisFamily& f, int n) {
  const GaussRule& gl = gauss_legendre(n);
  Nodes nd;
  if (b.size() < 2) return nd;
  nd.y.reserve((b.size() - 1) * n);
  nd.wk.reserve((b.size() - 1) * n);
  for (std::size_t k = 0; k + 1 < b.size(); ++k) {
    const bool logs = f.log_scale && b[k] > 0.0;
    const double lo = logs ? std::log(b[k]) : b[k], hi = logs ? std::log(b[k + 1]) : b[k + 1];
    const double mid = 0.5 * (lo + hi), half = 0.5 * (hi - lo);
    for (int m = 0; m < n; ++m) {
      const double s = mid + half * gl.nodes[m];
      const double y = logs ? std::exp(s) : s;
      const double jac = logs ? y : 1.0;
      nd.y.push_back(y);
      nd.wk.push_back(half * gl.weights[m] * jac * f.kernel(y));
    }
  }
  return nd;
}

double safe_root(double integral, double q) { return integral > 0.0 ? std::pow(integral, 1.0 / q) : 0.0; }

// Golden-section maximization of f on [a, b]; updates (best_x, best_v) when improved.
template <class F>
void golden_max(F&& f, double a, double b, double tol, double& best_x, double& best_v) {
  constexpr double r = 0.6180339887498949;
  double c = b - r * (b - a), d = a + r * (b - a);
  double fc = f(c), fd = f(d);
  auto note = [&](double x, double v) {
    if (v > best_v) {
      best_v = v;
      best_x = x;
    }
  };
  note(c, fc);
  note(d, fd);
  while (b - a > tol) {
    if (fc >= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - r * (b - a);
      fc = f(c);
      note(c, fc);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + r * (b - a);
      fd = f(d);
      note(d, fd);
    }
  }
}

// Coordinate-wise golden refinement of theta from value v.
template <class S>
void refine(S&& supremand, std::vector<double>& theta, double& v, const std::vector<double>& spacing,
            const EngineOptions& opt) {
  std::vector<double> width(spacing.size());
  for (std::size_t c = 0; c < spacing.size(); ++c) width[c] = 1.5 * spacing[c];
  for (int sweep = 0; sweep < opt.max_sweeps; ++sweep) {
    const double v_start = v;
    for (std::size_t c = 0; c < theta.size(); ++c) {
      const double lo = std::max(0.0, theta[c] - width[c]), hi = std::min(1.0, theta[c] + width[c]);
      double bx = theta[c], bv = v;
      std::vector<double> trial = theta;
      golden_max(
          [&](double x) {
            trial[c] = x;
            return supremand(trial);
          },
          lo, hi, opt.golden_tol, bx, bv);
      if (bv > v) {
        v = bv;
        theta[c] = bx;
      }
      width[c] = std::max(0.5 * width[c], 20.0 * opt.golden_tol);
    }
    if (v - v_start <= 1e-12 * std::abs(v)) break;
  }
}

std::vector<std::size_t> top_indices(const std::vector<double>& vals, int k) {
  std::vector<std::size_t> idx(vals.size());
  std::iota(idx.begin(), idx.end(), 0);
  const std::size_t kk = std::min<std::size_t>(static_cast<std::size_t>(std::max(k, 1)), idx.size());
  std::partial_sort(idx.begin(), idx.begin() + static_cast<long>(kk), idx.end(),
                    [&](std::size_t a, std::size_t b) { return vals[a] > vals[b]; });
  idx.resize(kk);
  return idx;
}

AxisState state_at(const AxisFamily& f, const double* th) { return f.state(th); }

}  // namespace

EngineResult maximize_axis(const AxisFamily& fam, const std::function<double(double)>& weight, double q,
                           const EngineOptions& opt) {
  EngineResult res;
  auto cands = make_candidates(fam, opt.grid_first, opt.grid_second);
  res.evaluations += static_cast<long>(cands.size());
  if (std::none_of(cands.begin(), cands.end(), [](const Candidate& c) { return c.st.valid; })) {
    res.empty = true;
    return res;
  }
  const auto b = breakpoints(cands);
  const Nodes nd = cell_nodes(b, fam, opt.cell_nodes);
  const int n = opt.cell_nodes;
  std::vector<long double> prefix(b.size(), 0.0L);
  for (std::size_t k = 0; k + 1 < b.size(); ++k) {
    long double cell = 0.0L;
    for (int m = 0; m < n; ++m) {
      const std::size_t i = k * n + m;
      cell += nd.wk[i] * weight(nd.y[i]);
    }
    prefix[k + 1] = prefix[k] + cell;
  }
  std::vector<double> vals(cands.size(), -1.0);
  for (std::size_t i = 0; i < cands.size(); ++i) {
    const auto& c = cands[i];
    if (!c.st.valid) continue;
    vals[i] = safe_root(static_cast<double>(prefix[c.hi_idx] - prefix[c.lo_idx]), q) * c.st.pref;
  }

  bool accurate = true;
  auto exact = [&](const std::vector<double>& th, double tol, double* rel_err) -> double {
    ++res.evaluations;
    for (double t : th)
      if (t < 0.0 || t > 1.0) return 0.0;
    const AxisState st = state_at(fam, th.data());
    if (!st.valid || !(st.hi > st.lo)) return 0.0;
    auto g = [&](double y) { return weight(y) * fam.kernel(y); };
    QuadResult r;
    try {
      r = (fam.log_scale && st.lo > 0.0) ? integrate_1d_log(g, st.lo, st.hi, tol) : integrate_1d(g, st.lo, st.hi, tol);
    } catch (const AccuracyError& e) {
      accurate = false;
      r.value = e.best_estimate();
      r.error_estimate = e.error_estimate();
    }
    if (rel_err) *rel_err = r.value > 0.0 ? r.error_estimate / r.value : 0.0;
    return safe_root(r.value, q) * st.pref;
  };

  std::vector<double> spacing{1.0 / opt.grid_first};
  if (fam.dim == 2) spacing.push_back(1.0 / opt.grid_second);
  std::vector<double> best_theta;
  double best_v = -1.0;
  for (std::size_t i : top_indices(vals, opt.top_k)) {
    if (vals[i] < 0.0) continue;
    std::vector<double> th(cands[i].theta.begin(), cands[i].theta.begin() + fam.dim);
    double v = exact(th, opt.inner_tol, nullptr);
    if (v > 0.0) refine([&](const std::vector<double>& x) { return exact(x, opt.inner_tol, nullptr); }, th, v,
                        spacing, opt);
    if (v > best_v) {
      best_v = v;
      best_theta = th;
    }
  }
  if (best_theta.empty()) {
    // Every candidate evaluates to zero: report the first valid one.
    for (const auto& c : cands)
      if (c.st.valid) {
        best_theta.assign(c.theta.begin(), c.theta.begin() + fam.dim);
        break;
      }
  }
  double rel = 0.0;
  res.value = exact(best_theta, opt.final_tol, &rel);
  res.first = state_at(fam, best_theta.data());
  res.error_estimate = rel / q;
  res.converged = accurate;
  return res;
}

EngineResult maximize_pair(const AxisFamily& f1, const AxisFamily& f2, const Weight2D& u, double q,
                           const EngineOptions& opt) {
  if (opt.exploit_separability) {
    if (auto fac = u.factors()) {
      EngineResult r1 = maximize_axis(f1, fac->first, q, opt);
      EngineResult r2 = maximize_axis(f2, fac->second, q, opt);
      EngineResult res;
      res.value = r1.value * r2.value;
      res.first = r1.first;
      res.second = r2.first;
      res.evaluations = r1.evaluations + r2.evaluations;
      res.converged = r1.converged && r2.converged;
      res.empty = r1.empty || r2.empty;
      res.error_estimate = r1.error_estimate + r2.error_estimate;
      if (res.empty) res.value = 0.0;
      return res;
    }
  }

  EngineResult res;
  auto c1 = make_candidates(f1, opt.grid_first, opt.grid_second);
  auto c2 = make_candidates(f2, opt.grid_first, opt.grid_second);
  const auto any_valid = [](const std::vector<Candidate>& c) {
    return std::any_of(c.begin(), c.end(), [](const Candidate& x) { return x.st.valid; });
  };
  if (!any_valid(c1) || !any_valid(c2)) {
    res.empty = true;
    return res;
  }
  const auto b1 = breakpoints(c1), b2 = breakpoints(c2);
  const std::size_t m1 = b1.size(), m2 = b2.size();
  std::vector<long double> prefix(m1 * m2, 0.0L);
  if (!u.is_zero()) {
    const int n = opt.cell_nodes;
    const Nodes n1 = cell_nodes(b1, f1, n), n2 = cell_nodes(b2, f2, n);
    std::vector<double> cell((m1 - 1) * (m2 - 1), 0.0);
    for (std::size_t i = 0; i < n1.y.size(); ++i) {
      const std::size_t k1 = i / n;
      double* row = cell.data() + k1 * (m2 - 1);
      for (std::size_t j = 0; j < n2.y.size(); ++j) row[j / n] += n1.wk[i] * n2.wk[j] * u(n1.y[i], n2.y[j]);
    }
    for (std::size_t i = 1; i < m1; ++i) {
      long double run = 0.0L;
      for (std::size_t j = 1; j < m2; ++j) {
        run += cell[(i - 1) * (m2 - 1) + (j - 1)];
        prefix[i * m2 + j] = prefix[(i - 1) * m2 + j] + run;
      }
    }
  }
  const auto rect_sum = [&](std::size_t lo1, std::size_t hi1, std::size_t lo2, std::size_t hi2) {
    return static_cast<double>(prefix[hi1 * m2 + hi2] - prefix[lo1 * m2 + hi2] - prefix[hi1 * m2 + lo2] +
                               prefix[lo1 * m2 + lo2]);
  };

  std::vector<double> vals(c1.size() * c2.size(), -1.0);
  for (std::size_t i = 0; i < c1.size(); ++i) {
    if (!c1[i].st.valid) continue;
    for (std::size_t j = 0; j < c2.size(); ++j) {
      if (!c2[j].st.valid) continue;
      const double I = rect_sum(c1[i].lo_idx, c1[i].hi_idx, c2[j].lo_idx, c2[j].hi_idx);
      vals[i * c2.size() + j] = safe_root(I, q) * c1[i].st.pref * c2[j].st.pref;
    }
  }
  res.evaluations += static_cast<long>(vals.size());

  const int d1 = f1.dim, d2 = f2.dim;
  bool accurate = true;
  auto exact = [&](const std::vector<double>& th, double tol, double* rel_err) -> double {
    ++res.evaluations;
    for (double t : th)
      if (t < 0.0 || t > 1.0) return 0.0;
    const AxisState s1 = state_at(f1, th.data());
    const AxisState s2 = state_at(f2, th.data() + d1);
    if (!s1.valid || !s2.valid || !(s1.hi > s1.lo) || !(s2.hi > s2.lo)) return 0.0;
    if (u.is_zero()) return 0.0;
    auto g = [&](double y1, double y2) { return u(y1, y2) * f1.kernel(y1) * f2.kernel(y2); };
    QuadResult r;
    try {
      r = integrate_2d(g, Rect{s1.lo, s1.hi, s2.lo, s2.hi}, tol);
    } catch (const AccuracyError& e) {
      accurate = false;
      r.value = e.best_estimate();
      r.error_estimate = e.error_estimate();
    }
    if (rel_err) *rel_err = r.value > 0.0 ? r.error_estimate / r.value : 0.0;
    return safe_root(r.value, q) * s1.pref * s2.pref;
  };

  std::vector<double> spacing{1.0 / opt.grid_first};
  if (d1 == 2) spacing.push_back(1.0 / opt.grid_second);
  spacing.push_back(1.0 / opt.grid_first);
  if (d2 == 2) spacing.push_back(1.0 / opt.grid_second);

  std::vector<double> best_theta;
  double best_v = -1.0;
  for (std::size_t idx : top_indices(vals, opt.top_k)) {
    if (vals[idx] < 0.0) continue;
    const auto& a = c1[idx / c2.size()];
    const auto& b = c2[idx % c2.size()];
    std::vector<double> th(a.theta.begin(), a.theta.begin() + d1);
    th.insert(th.end(), b.theta.begin(), b.theta.begin() + d2);
    double v = exact(th, opt.inner_tol, nullptr);
    if (v > 0.0) refine([&](const std::vector<double>& x) { return exact(x, opt.inner_tol, nullptr); }, th, v,
                        spacing, opt);
    if (v > best_v) {
      best_v = v;
      best_theta = th;
    }
  }
  if (best_theta.empty()) {
    for (std::size_t i = 0; i < c1.size() && best_theta.empty(); ++i)
      for (std::size_t j = 0; j < c2.size(); ++j)
        if (c1[i].st.valid && c2[j].st.valid) {
          best_theta.assign(c1[i].theta.begin(), c1[i].theta.begin() + d1);
          best_theta.insert(best_theta.end(), c2[j].theta.begin(), c2[j].theta.begin() + d2);
          break;
        }
  }
  double rel = 0.0;
  res.value = exact(best_theta, opt.final_tol, &rel);
  res.first = state_at(f1, best_theta.data());
  res.second = state_at(f2, best_theta.data() + d1);
  res.error_estimate = rel / q;
  res.converged = accurate;
  return res;
}

}  // namespace hardyvl::detail
