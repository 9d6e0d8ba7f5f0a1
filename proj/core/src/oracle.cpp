#include "hardyvl/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "hardyvl/error.hpp"

namespace hardyvl::oracle {

namespace {

// V(y) = int_0^y v^{1-p'} tabulated on a log mesh by the trapezoid rule, with the piece below
// the mesh taken from a power law fitted to the first two nodes. Linear interpolation in ln y.
class TableV {
 public:
  TableV(const Weight1D& v, double expo, double lo, double hi, int n) : llo_(std::log(lo)) {
    h_ = (std::log(hi) - llo_) / (n - 1);
    std::vector<double> g(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k) {
      const double y = std::exp(llo_ + k * h_);
      g[static_cast<std::size_t>(k)] = std::pow(v(y), expo) * y;  // integrand in ln y
    }
    const double gamma = std::log(g[1] / g[0]) / h_;  // g = c y^{gamma} in ln y, i.e. v^{e} ~ y^{gamma-1}
    if (!(gamma > 0.0)) throw IntegrabilityError("oracle V table: v^{1-p'} is not integrable at 0");
    V_.resize(static_cast<std::size_t>(n));
    V_[0] = g[0] / gamma;
    for (int k = 1; k < n; ++k)
      V_[static_cast<std::size_t>(k)] = V_[static_cast<std::size_t>(k - 1)] + 0.5 * h_ * (g[static_cast<std::size_t>(k - 1)] + g[static_cast<std::size_t>(k)]);
  }

  double operator()(double y) const {
    const double s = (std::log(y) - llo_) / h_;
    if (s < 0.0 || s > static_cast<double>(V_.size() - 1)) throw RangeError("oracle V table: argument outside the table");
    const auto k = std::min(static_cast<std::size_t>(s), V_.size() - 2);
    const double f = s - static_cast<double>(k);
    return (1.0 - f) * V_[k] + f * V_[k + 1];
  }

 private:
  double llo_, h_ = 0.0;
  std::vector<double> V_;
};

struct Mesh {
  std::vector<double> y;
  double h = 0.0;  // spacing in ln y
};

Mesh make_mesh(const OracleConfig& oc) {
  if (!(oc.lo > 0.0) || !(oc.hi > oc.lo) || oc.mesh < 8 || oc.stride < 1)
    throw DomainError("oracle mesh must satisfy 0 < lo < hi, mesh >= 8, stride >= 1");
  Mesh m;
  m.h = std::log(oc.hi / oc.lo) / (oc.mesh - 1);
  for (int k = 0; k < oc.mesh; ++k) m.y.push_back(oc.lo * std::exp(k * m.h));
  m.y.back() = oc.hi;
  return m;
}

struct AxisTable {
  std::vector<double> Vb, Va;  // V(b(y_k)), V(a(y_k))
  std::vector<double> ay, by;  // a(y_k), b(y_k)
};

AxisTable axis_table(const Mesh& m, const BoundaryPair& pair, const Weight1D& v, double expo, const OracleConfig& oc) {
  const double lo = 0.5 * std::min(pair.a()(m.y.front()), pair.b()(m.y.front()));
  const double hi = 2.0 * std::max(pair.a()(m.y.back()), pair.b()(m.y.back()));
  const TableV V(v, expo, lo, hi, oc.v_mesh);
  AxisTable t;
  for (double y : m.y) {
    t.ay.push_back(pair.a()(y));
    t.by.push_back(pair.b()(y));
    t.Va.push_back(V(t.ay.back()));
    t.Vb.push_back(V(t.by.back()));
  }
  return t;
}

bool candidate(int k, int stride) { return k % stride == 0; }

// sup over candidate t < x of [int_t^x u (Vb - Va)^kappa]^{1/q} (Vb(t) - Va(x))^{(s-1)/p}.
double axis_sup(const Mesh& m, const AxisTable& t, const std::function<double(double)>& u, const Exponents& e,
                double s, int stride) {
  const double kappa = e.q * (e.p - s) / e.p, pre = (s - 1.0) / e.p;
  const int n = static_cast<int>(m.y.size());
  std::vector<double> uy(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) {
    const auto i = static_cast<std::size_t>(k);
    uy[i] = u(m.y[i]) * m.y[i] * std::pow(t.Vb[i] - t.Va[i], kappa);
  }
  double best = 0.0;
  for (int ix = 1; ix < n; ++ix) {
    if (!candidate(ix, stride) && ix != n - 1) continue;
    const double Vax = t.Va[static_cast<std::size_t>(ix)], ax = t.ay[static_cast<std::size_t>(ix)];
    double S = 0.0, g_next = uy[static_cast<std::size_t>(ix)];
    for (int k = ix - 1; k >= 0 && t.by[static_cast<std::size_t>(k)] > ax; --k) {
      const double g = uy[static_cast<std::size_t>(k)];
      S += 0.5 * m.h * (g + g_next);
      g_next = g;
      if (candidate(k, stride))
        best = std::max(best, std::pow(S, 1.0 / e.q) * std::pow(t.Vb[static_cast<std::size_t>(k)] - Vax, pre));
    }
  }
  return best;
}

}  // namespace

double oracle_B1(const ProblemConfig1D& cfg, double s, const OracleConfig& oc) {
  if (!(s > 1.0 && s < cfg.exps.p)) throw DomainError("scale parameter must lie in (1, p)");
  const Mesh m = make_mesh(oc);
  const AxisTable t = axis_table(m, cfg.boundary, cfg.v, 1.0 - cfg.exps.pprime(), oc);
  const Weight1D u = cfg.u;
  return axis_sup(m, t, [&u](double y) { return u(y); }, cfg.exps, s, oc.stride);
}

double oracle_B2(const ProblemConfig& cfg, const ScalePoint& s, const OracleConfig& oc) {
  const Exponents& e = cfg.exps;
  if (!(s.s1 > 1.0 && s.s1 < e.p && s.s2 > 1.0 && s.s2 < e.p)) throw DomainError("scale parameters must lie in (1, p)");
  if (cfg.u.is_zero()) return 0.0;
  const Mesh m = make_mesh(oc);
  const double expo = 1.0 - e.pprime();
  const AxisTable t1 = axis_table(m, cfg.axis1, cfg.v1, expo, oc);
  const AxisTable t2 = axis_table(m, cfg.axis2, cfg.v2, expo, oc);

  if (auto fac = cfg.u.factors(); fac && !oc.force_2d)
    return axis_sup(m, t1, fac->first, e, s.s1, oc.stride) * axis_sup(m, t2, fac->second, e, s.s2, oc.stride);

  const int n = static_cast<int>(m.y.size()), st = oc.stride;
  const double k1 = e.q * (e.p - s.s1) / e.p, k2 = e.q * (e.p - s.s2) / e.p;
  const double pre1 = (s.s1 - 1.0) / e.p, pre2 = (s.s2 - 1.0) / e.p;
  // Integrand in log coordinates: u(y_k, y_l) y_k y_l prod (Vb - Va)^{kappa}.
  Eigen::VectorXd w1(n), w2(n);
  for (int k = 0; k < n; ++k) {
    const auto i = static_cast<std::size_t>(k);
    w1[k] = m.y[i] * std::pow(t1.Vb[i] - t1.Va[i], k1);
    w2[k] = m.y[i] * std::pow(t2.Vb[i] - t2.Va[i], k2);
  }
  Eigen::MatrixXd Uy(n, n);
  for (int l = 0; l < n; ++l)
    for (int k = 0; k < n; ++k)
      Uy(k, l) = cfg.u(m.y[static_cast<std::size_t>(k)], m.y[static_cast<std::size_t>(l)]) * w1[k] * w2[l];

  std::vector<int> xs;
  for (int ix = 1; ix < n; ++ix)
    if (candidate(ix, st) || ix == n - 1) xs.push_back(ix);

  double best = 0.0;
  for (int ix2 : xs) {
    const double Vax = t2.Va[static_cast<std::size_t>(ix2)], ax = t2.ay[static_cast<std::size_t>(ix2)];
    // R.col(c) = trapezoid over l in [t2_c, x2] of Uy(., l).
    std::vector<int> t2s;
    std::vector<Eigen::VectorXd> cols;
    Eigen::VectorXd acc = Eigen::VectorXd::Zero(n);
    Eigen::VectorXd next = Uy.col(ix2);
    for (int l = ix2 - 1; l >= 0 && t2.by[static_cast<std::size_t>(l)] > ax; --l) {
      Eigen::VectorXd cur = Uy.col(l);
      acc += 0.5 * m.h * (cur + next);
      next = std::move(cur);
      if (candidate(l, st)) {
        t2s.push_back(l);
        cols.push_back(acc);
      }
    }
    if (t2s.empty()) continue;
    const auto T = static_cast<Eigen::Index>(t2s.size());
    Eigen::MatrixXd R(n, T);
    Eigen::VectorXd pref2(T);
    for (Eigen::Index c = 0; c < T; ++c) {
      R.col(c) = cols[static_cast<std::size_t>(c)];
      pref2[c] = std::pow(t2.Vb[static_cast<std::size_t>(t2s[static_cast<std::size_t>(c)])] - Vax, pre2);
    }
    for (int ix1 : xs) {
      const double Vax1 = t1.Va[static_cast<std::size_t>(ix1)], ax1 = t1.ay[static_cast<std::size_t>(ix1)];
      Eigen::VectorXd S = Eigen::VectorXd::Zero(T);
      Eigen::VectorXd rn = R.row(ix1).transpose();
      for (int k = ix1 - 1; k >= 0 && t1.by[static_cast<std::size_t>(k)] > ax1; --k) {
        const double vb = t1.Vb[static_cast<std::size_t>(k)] - Vax1;
        Eigen::VectorXd rc = R.row(k).transpose();
        S += 0.5 * m.h * (rc + rn);
        rn = std::move(rc);
        if (!candidate(k, st)) continue;
        const double p1 = std::pow(vb, pre1);
        for (Eigen::Index c = 0; c < T; ++c)
          if (S[c] > 0.0) best = std::max(best, std::pow(S[c], 1.0 / e.q) * p1 * pref2[c]);
      }
    }
  }
  return best;
}

double oracle_ratio_search(const ProblemConfig& cfg, int resolution, const OracleConfig& oc) {
  if (resolution < 2 || resolution > 32) throw DomainError("oracle ratio search needs 2 <= resolution <= 32");
  if (cfg.u.is_zero()) return 0.0;
  const Problem pb(cfg);
  const auto edges = geometric_edges(oc.lo, oc.hi, resolution);
  const NormOperator op = NormOperator::hardy(pb, edges, edges);
  static constexpr double kFactors[] = {4.0, 2.0, 1.25, 0.8, 0.5, 0.25, 0.0};
  std::mt19937_64 rng(oc.seed);
  std::uniform_real_distribution<double> unif(0.1, 1.0);
  double best = 0.0;
  for (int r = 0; r < oc.restarts; ++r) {
    Eigen::MatrixXd F(resolution, resolution);
    for (Eigen::Index j = 0; j < F.cols(); ++j)
      for (Eigen::Index i = 0; i < F.rows(); ++i) F(i, j) = unif(rng);
    double cur = op.ratio(F);
    for (int sweep = 0; sweep < oc.max_sweeps; ++sweep) {
      bool improved = false;
      for (Eigen::Index j = 0; j < F.cols(); ++j)
        for (Eigen::Index i = 0; i < F.rows(); ++i)
          for (double fac : kFactors) {
            const double old = F(i, j);
            if (old == 0.0) break;
            F(i, j) = old * fac;
            const double d = op.denominator(F);
            const double val = d > 0.0 ? op.numerator(F) / d : 0.0;
            if (val > cur * (1.0 + 1e-12)) {
              cur = val;
              improved = true;
            } else {
              F(i, j) = old;
            }
          }
      if (!improved) break;
    }
    best = std::max(best, cur);
  }
  return best;
}

}  // namespace hardyvl::oracle
