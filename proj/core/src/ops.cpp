#include "hardyvl/ops.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "hardyvl/error.hpp"
#include "hardyvl/witness.hpp"

namespace hardyvl {

namespace {

// x^e elementwise, avoiding pow for the common integer exponents.
Eigen::ArrayXXd power(const Eigen::ArrayXXd& x, double e) {
  if (e == 1.0) return x;
  if (e == 2.0) return x.square();
  if (e == 3.0) return x.cube();
  if (e == 0.5) return x.sqrt();
  return x.pow(e);
}

bool increasing(const std::vector<double>& v) {
  for (std::size_t i = 1; i < v.size(); ++i)
    if (!(v[i] > v[i - 1])) return false;
  return v.size() >= 2;
}

// Gauss nodes on each segment between consecutive sorted breakpoints; log coordinates when
// the segment is away from 0.
void add_segment_nodes(double lo, double hi, int gl, std::vector<double>& nodes, std::vector<double>& weights) {
  const GaussRule& r = gauss_legendre(gl);
  const bool logs = lo > 0.0;
  const double L = logs ? std::log(lo) : lo, H = logs ? std::log(hi) : hi;
  const double mid = 0.5 * (L + H), half = 0.5 * (H - L);
  for (int m = 0; m < gl; ++m) {
    const double s = mid + half * r.nodes[m];
    const double x = logs ? std::exp(s) : s;
    nodes.push_back(x);
    weights.push_back(half * r.weights[m] * (logs ? x : 1.0));
  }
}

void add_overlap_row(const std::vector<double>& edges, int row, double lo, double hi,
                     std::vector<Eigen::Triplet<double>>& trip) {
  if (!(hi > lo) || hi <= edges.front() || lo >= edges.back()) return;
  auto it = std::upper_bound(edges.begin(), edges.end(), lo);
  std::size_t k = it == edges.begin() ? 0 : static_cast<std::size_t>(it - edges.begin()) - 1;
  for (; k + 1 < edges.size() && edges[k] < hi; ++k) {
    const double len = std::min(hi, edges[k + 1]) - std::max(lo, edges[k]);
    if (len > 0.0) trip.emplace_back(row, static_cast<int>(k), len);
  }
}


double gl8_integral(const std::function<double(double)>& f, double lo, double hi) {
  const GaussRule& r = gauss_legendre(8);
  const double mid = 0.5 * (lo + hi), half = 0.5 * (hi - lo);
  double s = 0.0;
  for (int m = 0; m < 8; ++m) s += r.weights[m] * f(mid + half * r.nodes[m]);
  return half * s;
}

}  // namespace

// ---------------------------------------------------------------- grid functions

GridFn GridFn::constant(std::vector<double> edges1, std::vector<double> edges2, double c) {
  GridFn f;
  f.edges1 = std::move(edges1);
  f.edges2 = std::move(edges2);
  f.values = Eigen::MatrixXd::Constant(f.cells1(), f.cells2(), c);
  f.validate();
  return f;
}

void GridFn::validate() const {
  if (!increasing(edges1) || !increasing(edges2)) throw DomainError("grid edges must be strictly increasing");
  if (edges1.front() < 0.0 || edges2.front() < 0.0) throw DomainError("grid must lie in the positive quadrant");
  if (values.rows() != cells1() || values.cols() != cells2()) throw DomainError("grid values do not match the edges");
  if ((values.array() < 0.0).any() || !values.allFinite())
    throw DomainError("grid function values must be finite and nonnegative");
}

std::vector<double> geometric_edges(double lo, double hi, int n) {
  if (!(lo > 0.0) || !(hi > lo) || n < 1) throw DomainError("geometric_edges requires 0 < lo < hi and n >= 1");
  std::vector<double> e(n + 1);
  for (int i = 0; i <= n; ++i) e[i] = lo * std::pow(hi / lo, static_cast<double>(i) / n);
  e.front() = lo;
  e.back() = hi;
  return e;
}

std::vector<double> refine_edges(const std::vector<double>& edges) {
  std::vector<double> out;
  out.reserve(2 * edges.size());
  for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
    out.push_back(edges[i]);
    out.push_back(edges[i] > 0.0 ? std::sqrt(edges[i] * edges[i + 1]) : 0.5 * (edges[i] + edges[i + 1]));
  }
  out.push_back(edges.back());
  return out;
}

GridFn refine(const GridFn& f) {
  GridFn g;
  g.edges1 = refine_edges(f.edges1);
  g.edges2 = refine_edges(f.edges2);
  g.values.resize(2 * f.cells1(), 2 * f.cells2());
  for (int i = 0; i < g.values.rows(); ++i)
    for (int j = 0; j < g.values.cols(); ++j) g.values(i, j) = f.values(i / 2, j / 2);
  return g;
}

std::vector<double> cell_overlaps(const std::vector<double>& edges, double lo, double hi) {
  std::vector<double> o(edges.size() - 1, 0.0);
  for (std::size_t k = 0; k + 1 < edges.size(); ++k) {
    const double len = std::min(hi, edges[k + 1]) - std::max(lo, edges[k]);
    if (len > 0.0) o[k] = len;
  }
  return o;
}

double apply_H2(const GridFn& f, const BoundaryPair& axis1, const BoundaryPair& axis2, double x1, double x2) {
  const auto o1 = cell_overlaps(f.edges1, axis1.a()(x1), axis1.b()(x1));
  const auto o2 = cell_overlaps(f.edges2, axis2.a()(x2), axis2.b()(x2));
  const Eigen::Map<const Eigen::VectorXd> v1(o1.data(), static_cast<Eigen::Index>(o1.size()));
  const Eigen::Map<const Eigen::VectorXd> v2(o2.data(), static_cast<Eigen::Index>(o2.size()));
  return v1.dot(f.values * v2);
}

double apply_G2(const GridFn& f, const BoundaryPair& axis1, const BoundaryPair& axis2, double x1, double x2) {
  const double a1 = axis1.a()(x1), b1 = axis1.b()(x1), a2 = axis2.a()(x2), b2 = axis2.b()(x2);
  if (!(b1 > a1) || !(b2 > a2)) throw DomainError("G2 box is degenerate");
  // f = 0 outside the grid: a box leaving the support has a zero part of positive measure.
  if (a1 < f.edges1.front() || b1 > f.edges1.back() || a2 < f.edges2.front() || b2 > f.edges2.back()) return 0.0;
  const auto o1 = cell_overlaps(f.edges1, a1, b1);
  const auto o2 = cell_overlaps(f.edges2, a2, b2);
  long double acc = 0.0L;
  for (std::size_t i = 0; i < o1.size(); ++i) {
    if (o1[i] == 0.0) continue;
    for (std::size_t j = 0; j < o2.size(); ++j) {
      if (o2[j] == 0.0) continue;
      const double v = f.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
      if (!(v > 0.0)) return 0.0;
      acc += static_cast<long double>(o1[i]) * o2[j] * std::log(v);
    }
  }
  return std::exp(static_cast<double>(acc / ((static_cast<long double>(b1) - a1) * (static_cast<long double>(b2) - a2))));
}

double weighted_norm(const GridFn& f, const Weight2D& w, double r, const Rect& domain) {
  if (!(r > 0.0)) throw DomainError("norm exponent must be positive");
  f.validate();
  if (w.is_zero()) return 0.0;
  const auto fac = w.factors();
  const GaussRule& g = gauss_legendre(8);
  long double acc = 0.0L;
  for (int i = 0; i < f.cells1(); ++i) {
    const double lo1 = std::max(f.edges1[i], domain.lo1), hi1 = std::min(f.edges1[i + 1], domain.hi1);
    if (!(hi1 > lo1)) continue;
    for (int j = 0; j < f.cells2(); ++j) {
      const double v = f.values(i, j);
      if (v == 0.0) continue;
      const double lo2 = std::max(f.edges2[j], domain.lo2), hi2 = std::min(f.edges2[j + 1], domain.hi2);
      if (!(hi2 > lo2)) continue;
      double I = 0.0;
      if (fac) {
        I = gl8_integral(fac->first, lo1, hi1) * gl8_integral(fac->second, lo2, hi2);
      } else {
        const double m1 = 0.5 * (lo1 + hi1), h1 = 0.5 * (hi1 - lo1), m2 = 0.5 * (lo2 + hi2), h2 = 0.5 * (hi2 - lo2);
        for (int a = 0; a < 8; ++a)
          for (int b = 0; b < 8; ++b)
            I += g.weights[a] * g.weights[b] * w(m1 + h1 * g.nodes[a], m2 + h2 * g.nodes[b]);
        I *= h1 * h2;
      }
      acc += std::pow(v, r) * I;
    }
  }
  return std::pow(static_cast<double>(acc), 1.0 / r);
}

// ---------------------------------------------------------------- discretized operator

AxisQuadrature interval_axis(std::vector<double> breaks, const std::vector<double>& edges, int gl,
                        const std::function<std::pair<double, double>(double)>& interval) {
  std::sort(breaks.begin(), breaks.end());
  breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());
  AxisQuadrature q;
  for (std::size_t i = 0; i + 1 < breaks.size(); ++i) add_segment_nodes(breaks[i], breaks[i + 1], gl, q.nodes, q.weights);
  std::vector<Eigen::Triplet<double>> trip;
  for (std::size_t n = 0; n < q.nodes.size(); ++n) {
    const auto [lo, hi] = interval(q.nodes[n]);
    add_overlap_row(edges, static_cast<int>(n), lo, hi, trip);
  }
  q.overlap.resize(static_cast<Eigen::Index>(q.nodes.size()), static_cast<Eigen::Index>(edges.size() - 1));
  q.overlap.setFromTriplets(trip.begin(), trip.end());
  return q;
}

AxisQuadrature moving_axis(const BoundaryPair& pair, const std::vector<double>& edges, int gl) {
  if (!increasing(edges)) throw DomainError("grid edges must be strictly increasing");
  std::vector<double> breaks;
  for (double e : edges) {
    if (!(e > 0.0)) continue;
    for (const MonotoneMap* m : {&pair.a(), &pair.b()}) {
      try {
        breaks.push_back(m->inverse(e));
      } catch (const RangeError&) {
      }
    }
  }
  return interval_axis(std::move(breaks), edges, gl, [&pair](double x) { return std::make_pair(pair.a()(x), pair.b()(x)); });
}

AxisQuadrature corner_axis(const std::vector<double>& edges, double c, double d, bool lower_tail, int gl) {
  if (!increasing(edges)) throw DomainError("grid edges must be strictly increasing");
  if (!(c >= 0.0) || !(d > c)) throw DomainError("corner side must satisfy 0 <= c < d");
  std::vector<double> breaks{c, d};
  for (double e : edges)
    if (e > c && e < d) breaks.push_back(e);
  return interval_axis(std::move(breaks), edges, gl, [c, d, lower_tail](double x) {
    return lower_tail ? std::make_pair(c, x) : std::make_pair(x, d);
  });
}

Eigen::MatrixXd cell_weight_integrals(const std::vector<double>& edges1, const std::vector<double>& edges2,
                                      const Weight1D& v1, const Weight1D& v2) {
  const auto axis = [](const std::vector<double>& e, const Weight1D& v) {
    Eigen::VectorXd I(static_cast<Eigen::Index>(e.size() - 1));
    for (std::size_t k = 0; k + 1 < e.size(); ++k) {
      if (v.is_unit()) {
        I[static_cast<Eigen::Index>(k)] = e[k + 1] - e[k];
      } else {
        auto g = [&v](double y) { return v(y); };
        I[static_cast<Eigen::Index>(k)] = integrate_1d_auto(g, e[k], e[k + 1], 1e-11).value;
      }
    }
    return I;
  };
  return axis(edges1, v1) * axis(edges2, v2).transpose();
}

NormOperator::NormOperator(AxisQuadrature ax1, AxisQuadrature ax2, const Weight2D& u, double q,
                           Eigen::MatrixXd cell_weights, double p)
    : ax1_(std::move(ax1)), ax2_(std::move(ax2)), wv_(std::move(cell_weights)), p_(p), q_(q) {
  if (!(p > 0.0) || !(q > 0.0)) throw DomainError("norm exponents must be positive");
  if (wv_.rows() != ax1_.overlap.cols() || wv_.cols() != ax2_.overlap.cols())
    throw DomainError("cell weights do not match the grid");
  const auto n1 = static_cast<Eigen::Index>(ax1_.nodes.size()), n2 = static_cast<Eigen::Index>(ax2_.nodes.size());
  zero_ = u.is_zero();
  U_ = Eigen::MatrixXd::Zero(n1, n2);
  if (zero_) return;
  if (auto fac = u.factors()) {
    Eigen::VectorXd f1(n1), f2(n2);
    for (Eigen::Index i = 0; i < n1; ++i) f1[i] = fac->first(ax1_.nodes[i]) * ax1_.weights[i];
    for (Eigen::Index j = 0; j < n2; ++j) f2[j] = fac->second(ax2_.nodes[j]) * ax2_.weights[j];
    U_ = f1 * f2.transpose();
  } else {
    for (Eigen::Index i = 0; i < n1; ++i)
      for (Eigen::Index j = 0; j < n2; ++j)
        U_(i, j) = u(ax1_.nodes[i], ax2_.nodes[j]) * ax1_.weights[i] * ax2_.weights[j];
  }
}

NormOperator NormOperator::hardy(const Problem& pb, const std::vector<double>& edges1,
                                 const std::vector<double>& edges2) {
  return NormOperator(moving_axis(pb.boundary(1), edges1), moving_axis(pb.boundary(2), edges2), pb.u(), pb.exps().q,
                      cell_weight_integrals(edges1, edges2, pb.v(1), pb.v(2)), pb.exps().p);
}

Eigen::MatrixXd NormOperator::image(const Eigen::MatrixXd& F) const {
  const Eigen::MatrixXd T = ax1_.overlap * F;
  return T * ax2_.overlap.transpose();
}

double NormOperator::numerator(const Eigen::MatrixXd& F) const {
  if (zero_) return 0.0;
  const Eigen::MatrixXd H = image(F);
  const double s = (U_.array() * power(H.array(), q_)).sum();
  return s > 0.0 ? std::pow(s, 1.0 / q_) : 0.0;
}

double NormOperator::denominator(const Eigen::MatrixXd& F) const {
  const double s = (wv_.array() * power(F.array(), p_)).sum();
  return s > 0.0 ? std::pow(s, 1.0 / p_) : 0.0;
}

double NormOperator::ratio(const Eigen::MatrixXd& F) const {
  const double d = denominator(F);
  if (!(d > 0.0)) throw DomainError("ratio undefined: the weighted norm of f is zero");
  return numerator(F) / d;
}

Eigen::MatrixXd NormOperator::numerator_gradient(const Eigen::MatrixXd& F, double* numerator_value) const {
  if (zero_) {
    if (numerator_value) *numerator_value = 0.0;
    return Eigen::MatrixXd::Zero(F.rows(), F.cols());
  }
  const Eigen::ArrayXXd H = image(F).array();
  const Eigen::ArrayXXd Hq1 = power(H, q_ - 1.0);
  const double s = (U_.array() * Hq1 * H).sum();
  const double N = s > 0.0 ? std::pow(s, 1.0 / q_) : 0.0;
  if (numerator_value) *numerator_value = N;
  if (!(N > 0.0)) return Eigen::MatrixXd::Zero(F.rows(), F.cols());
  const Eigen::MatrixXd W = (U_.array() * Hq1).matrix();
  const Eigen::MatrixXd T = ax1_.overlap.transpose() * W;
  return std::pow(N, 1.0 - q_) * (T * ax2_.overlap);
}

double rayleigh_ratio(const GridFn& f, const Problem& pb) {
  f.validate();
  return NormOperator::hardy(pb, f.edges1, f.edges2).ratio(f.values);
}

// ---------------------------------------------------------------- norm estimation

std::pair<Eigen::MatrixXd, double> ascend(const NormOperator& op, Eigen::MatrixXd F, const NormOptions& opt,
                                          long* iterations, bool* converged) {
  const double d0 = op.denominator(F);
  if (!(d0 > 0.0)) throw DomainError("ascent start has zero weighted norm");
  F /= d0;
  double r = op.numerator(F);
  long it = 0;
  bool conv = true;
  if (!op.zero_weight() && r > 0.0) {
    const Eigen::ArrayXXd wv = op.cell_weights().array();
    const double expo = 1.0 / (op.p() - 1.0);
    double gamma = 1.0;
    int stagnant = 0;
    conv = false;
    Eigen::MatrixXd G = op.numerator_gradient(F);
    while (it < opt.max_iters) {
      ++it;
      // Stationarity of N / D: F^{p-1} proportional to G / Wv.
      Eigen::ArrayXXd Fb = power((wv > 0.0).select(G.array().max(0.0) / wv, 0.0), expo);
      const double db = op.denominator(Fb.matrix());
      if (!(db > 0.0)) {
        conv = true;
        break;
      }
      Fb /= db;
      Eigen::MatrixXd cand = ((1.0 - gamma) * F.array() + gamma * Fb).matrix();
      cand /= op.denominator(cand);
      double rc = 0.0;
      Eigen::MatrixXd Gc = op.numerator_gradient(cand, &rc);
      if (rc > r) {
        stagnant = (rc - r) <= opt.tol * r ? stagnant + 1 : 0;
        F = std::move(cand);
        G = std::move(Gc);
        r = rc;
        gamma = std::min(1.0, 2.0 * gamma);
      } else {
        gamma *= 0.5;
        ++stagnant;
      }
      if (stagnant >= opt.stagnation_limit || gamma < 1e-6) {
        conv = true;
        break;
      }
    }
  }
  if (iterations) *iterations = it;
  if (converged) *converged = conv;
  return {std::move(F), r};
}

NormEstimate estimate_norm(const Problem& pb, const NormOptions& opt) {
  if (opt.resolution < 8) throw DomainError("norm estimation needs resolution >= 8 per axis");
  const auto e1 = geometric_edges(opt.grid_lo, opt.grid_hi, opt.resolution);
  const auto e2 = e1;
  const NormOperator op = NormOperator::hardy(pb, e1, e2);
  NormEstimate est;
  est.best_f = GridFn::constant(e1, e2, 1.0);
  if (op.zero_weight()) {
    est.best_f.values /= op.denominator(est.best_f.values);
    est.best_start = "uniform";
    est.start_values.emplace_back("uniform", 0.0);
    return est;
  }

  std::vector<std::pair<std::string, Eigen::MatrixXd>> starts;
  starts.emplace_back("uniform", Eigen::MatrixXd::Ones(opt.resolution, opt.resolution));
  if (opt.witness_starts) {
    const double p = pb.exps().p;
    WitnessSpec spec;
    spec.kind = WitnessSpec::Kind::thm1_hardy;
    spec.s = {0.5 * (p + 1.0), 0.5 * (p + 1.0)};
    const double centre = std::sqrt(opt.grid_lo * opt.grid_hi);
    int k = 0;
    for (const auto& anchor : default_anchors(pb.boundary(1), pb.boundary(2), centre, centre, 4)) {
      spec.anchor = anchor;
      ++k;
      try {
        GridFn g = sample_onto(thm1_witness_fn(pb, spec), e1, e2);
        if (g.values.sum() > 0.0) starts.emplace_back("witness" + std::to_string(k), std::move(g.values));
      } catch (const Error&) {
        // Anchor outside the V window of this problem: skip the start.
      }
    }
  }
  std::mt19937_64 rng(opt.seed);
  std::uniform_real_distribution<double> unif(0.05, 1.0);
  for (int k = 0; k < opt.random_restarts; ++k) {
    Eigen::MatrixXd R(opt.resolution, opt.resolution);
    for (Eigen::Index j = 0; j < R.cols(); ++j)
      for (Eigen::Index i = 0; i < R.rows(); ++i) R(i, j) = unif(rng);
    starts.emplace_back("random" + std::to_string(k + 1), std::move(R));
  }

  est.value = -1.0;
  for (auto& [name, F0] : starts) {
    long iters = 0;
    bool conv = true;
    auto [F, r] = ascend(op, std::move(F0), opt, &iters, &conv);
    est.iterations += iters;
    est.start_values.emplace_back(name, r);
    if (r > est.value) {
      est.value = r;
      est.best_f.values = std::move(F);
      est.converged = conv;
      est.best_start = name;
    }
  }
  return est;
}

}  // namespace hardyvl
