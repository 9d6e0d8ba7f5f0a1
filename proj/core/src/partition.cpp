#include "hardyvl/partition.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <sstream>

#include "hardyvl/error.hpp"
#include "hardyvl/quad.hpp"

namespace hardyvl {

double LimitSequence::at(int k) const {
  if (k < k_min || k > k_max) throw RangeError("sequence index " + std::to_string(k) + " outside the built range");
  return m[static_cast<std::size_t>(k - k_min)];
}
double LimitSequence::a(int k) const {
  at(k);
  return a_k[static_cast<std::size_t>(k - k_min)];
}
double LimitSequence::b(int k) const {
  at(k);
  return b_k[static_cast<std::size_t>(k - k_min)];
}

double LimitSequence::abutment_error() const {
  double worst = 0.0;
  for (std::size_t i = 0; i + 1 < m.size(); ++i)
    worst = std::max(worst, std::abs(a_k[i + 1] - b_k[i]) / std::max(1.0, b_k[i]));
  return worst;
}

LimitSequence build_sequence(const BoundaryPair& pair, double m0, int k_min, int k_max, const Window& window,
                             int axis) {
  if (!(m0 > 0.0)) throw DomainError("sequence origin must be positive");
  if (k_min > 0 || k_max < 0) throw DomainError("index range must contain 0");
  if (!window.contains(m0)) throw DomainError("sequence origin outside the window");
  std::deque<double> ms{m0};
  LimitSequence seq;
  seq.axis = axis;
  seq.m0 = m0;
  seq.k_min = 0;
  seq.k_max = 0;
  for (int k = 0; k < k_max; ++k) {
    double next = 0.0;
    try {
      next = pair.a().inverse(pair.b()(ms.back()));
    } catch (const RangeError&) {
      seq.truncated_high = true;
      break;
    }
    if (!window.contains(next)) {
      seq.truncated_high = true;
      break;
    }
    ms.push_back(next);
    seq.k_max = k + 1;
  }
  for (int k = -1; k >= k_min; --k) {
    double prev = 0.0;
    try {
      prev = pair.b().inverse(pair.a()(ms.front()));
    } catch (const RangeError&) {
      seq.truncated_low = true;
      break;
    }
    if (!window.contains(prev)) {
      seq.truncated_low = true;
      break;
    }
    ms.push_front(prev);
    seq.k_min = k;
  }
  seq.m.assign(ms.begin(), ms.end());
  for (double x : seq.m) {
    seq.a_k.push_back(pair.a()(x));
    seq.b_k.push_back(pair.b()(x));
  }
  return seq;
}

std::pair<int, int> default_k_range(const BoundaryPair& pair, double m0, double lo, double hi, int max_steps) {
  if (!(lo > 0.0) || !(hi > lo)) throw DomainError("covering range must satisfy 0 < lo < hi");
  int kmin = 0, kmax = 0;
  for (double m = m0; m > lo && kmin > -max_steps; --kmin) m = pair.b().inverse(pair.a()(m));
  for (double m = m0; m < hi && kmax < max_steps; ++kmax) m = pair.a().inverse(pair.b()(m));
  return {kmin, kmax};
}

LimitSequence covering_sequence(const BoundaryPair& pair, double m0, double lo, double hi, int axis) {
  // a(m^{k_min+1}) = b(m^{k_min}) <= lo and a(m^{k_max}) >= hi.
  const auto [k0, k1] = default_k_range(pair, m0, pair.b().inverse(lo), pair.a().inverse(hi));
  return build_sequence(pair, m0, k0, k1, Window{0.0, INFINITY}, axis);
}

std::string to_string(Quadrant q) {
  switch (q) {
    case Quadrant::aa: return "aa";
    case Quadrant::ab: return "ab";
    case Quadrant::ba: return "ba";
    case Quadrant::bb: return "bb";
  }
  return "unknown";
}

namespace {

const MonotoneMap& first_map(const BoundaryPair& axis, Quadrant q, int which_axis) {
  const bool use_a = which_axis == 1 ? (q == Quadrant::aa || q == Quadrant::ab) : (q == Quadrant::aa || q == Quadrant::ba);
  return use_a ? axis.a() : axis.b();
}

}  // namespace

double transformed_weight(const Weight2D& u, const BoundaryPair& axis1, const BoundaryPair& axis2, Quadrant which,
                          double y1, double y2) {
  const MonotoneMap& c1 = first_map(axis1, which, 1);
  const MonotoneMap& c2 = first_map(axis2, which, 2);
  return u(c1.inverse(y1), c2.inverse(y2)) * c1.inverse_derivative(y1) * c2.inverse_derivative(y2);
}

Weight2D transformed(const Weight2D& u, const BoundaryPair& axis1, const BoundaryPair& axis2, Quadrant which) {
  const MonotoneMap c1 = first_map(axis1, which, 1);
  const MonotoneMap c2 = first_map(axis2, which, 2);
  std::optional<Weight2D::Factors> fac;
  if (auto f = u.factors()) {
    fac = Weight2D::Factors{
        [g = f->first, c1](double y) { return g(c1.inverse(y)) * c1.inverse_derivative(y); },
        [g = f->second, c2](double y) { return g(c2.inverse(y)) * c2.inverse_derivative(y); }};
  }
  if (u.is_zero()) return Weight2D::zero();
  return Weight2D::derived(
      [u, c1, c2](double y1, double y2) {
        return u(c1.inverse(y1), c2.inverse(y2)) * c1.inverse_derivative(y1) * c2.inverse_derivative(y2);
      },
      "u_" + to_string(which), fac);
}

TransformedWeights transformed_weights(const Weight2D& u, const BoundaryPair& axis1, const BoundaryPair& axis2) {
  return {transformed(u, axis1, axis2, Quadrant::aa), transformed(u, axis1, axis2, Quadrant::bb),
          transformed(u, axis1, axis2, Quadrant::ab), transformed(u, axis1, axis2, Quadrant::ba)};
}

namespace {

// Mean of v^{1-p'} over each cell.
Eigen::VectorXd dual_cell_means(const std::vector<double>& e, const Weight1D& v, double expo) {
  Eigen::VectorXd m(static_cast<Eigen::Index>(e.size() - 1));
  for (std::size_t k = 0; k + 1 < e.size(); ++k) {
    if (v.is_unit()) {
      m[static_cast<Eigen::Index>(k)] = 1.0;
      continue;
    }
    auto g = [&v, expo](double y) { return std::pow(v(y), expo); };
    m[static_cast<Eigen::Index>(k)] = integrate_1d_auto(g, e[k], e[k + 1], 1e-11).value / (e[k + 1] - e[k]);
  }
  return m;
}

void check_coverage(const Eigen::VectorXd& mass, const std::vector<double>& e, const LimitSequence& s, int axis) {
  const double lo = s.k_min < s.k_max ? s.a(s.k_min + 1) : INFINITY;
  const double hi = s.a(s.k_max);
  std::vector<int> bad;
  for (Eigen::Index i = 0; i < mass.size(); ++i)
    if (mass[i] > 0.0 && (e[static_cast<std::size_t>(i)] < lo * (1.0 - 1e-12) ||
                          e[static_cast<std::size_t>(i) + 1] > hi * (1.0 + 1e-12)))
      bad.push_back(static_cast<int>(i));
  if (bad.empty()) return;
  std::ostringstream os;
  os << "partition on axis " << axis << " covers [" << lo << ", " << hi << "] but cells";
  for (std::size_t k = 0; k < bad.size() && k < 16; ++k) os << ' ' << bad[k];
  if (bad.size() > 16) os << " ... (" << bad.size() << " total)";
  os << " carry mass outside it";
  throw DomainError(os.str());
}

// Nodes y in [a^k, b^k) for k in [k_lo, k_hi]; inner interval [y, b^k] (upper) or [a^k, y].
AxisQuadrature piece_axis(const LimitSequence& s, int k_lo, int k_hi, bool upper, const std::vector<double>& edges,
                          int gl) {
  std::vector<double> breaks;
  std::vector<double> lows, highs;
  for (int k = k_lo; k <= k_hi; ++k) {
    lows.push_back(s.a(k));
    highs.push_back(s.b(k));
    breaks.push_back(s.a(k));
    breaks.push_back(s.b(k));
  }
  if (breaks.empty()) {
    AxisQuadrature q;
    q.overlap.resize(0, static_cast<Eigen::Index>(edges.size() - 1));
    return q;
  }
  const double lo = lows.front(), hi = highs.back();
  for (double e : edges)
    if (e > lo && e < hi) breaks.push_back(e);
  return interval_axis(std::move(breaks), edges, gl, [lows, highs, upper](double y) {
    auto it = std::upper_bound(lows.begin(), lows.end(), y);
    const std::size_t k = it == lows.begin() ? 0 : static_cast<std::size_t>(it - lows.begin()) - 1;
    return upper ? std::make_pair(y, highs[k]) : std::make_pair(lows[k], y);
  });
}

}  // namespace

QuadrantResult quadrant_decompose(const GridFn& f, const Problem& pb, const LimitSequence& seq1,
                                  const LimitSequence& seq2, int gl) {
  f.validate();
  QuadrantResult r;
  const double p = pb.exps().p, q = pb.exps().q, expo = 1.0 - pb.exps().pprime();
  const Eigen::MatrixXd G = (dual_cell_means(f.edges1, pb.v(1), expo).asDiagonal() * f.values) *
                            dual_cell_means(f.edges2, pb.v(2), expo).asDiagonal();
  if (G.sum() == 0.0 || pb.u().is_zero()) return r;
  check_coverage(G.rowwise().sum(), f.edges1, seq1, 1);
  check_coverage(G.colwise().sum().transpose(), f.edges2, seq2, 2);

  const Eigen::MatrixXd ones = Eigen::MatrixXd::Ones(G.rows(), G.cols());
  r.total_lhs = NormOperator(moving_axis(pb.boundary(1), f.edges1, gl), moving_axis(pb.boundary(2), f.edges2, gl),
                             pb.u(), q, ones, p)
                    .numerator(G);

  // x in [m^k, m^{k+1}) for k < k_max: a(x) sweeps [a^k, b^k) and b(x) sweeps [a^{k+1}, b^{k+1}).
  const AxisQuadrature up1 = piece_axis(seq1, seq1.k_min, seq1.k_max - 1, true, f.edges1, gl);
  const AxisQuadrature lo1 = piece_axis(seq1, seq1.k_min + 1, seq1.k_max, false, f.edges1, gl);
  const AxisQuadrature up2 = piece_axis(seq2, seq2.k_min, seq2.k_max - 1, true, f.edges2, gl);
  const AxisQuadrature lo2 = piece_axis(seq2, seq2.k_min + 1, seq2.k_max, false, f.edges2, gl);
  const TransformedWeights tw = transformed_weights(pb.u(), pb.boundary(1), pb.boundary(2));
  auto piece = [&](const AxisQuadrature& x1, const AxisQuadrature& x2, const Weight2D& w) {
    if (x1.nodes.empty() || x2.nodes.empty()) return 0.0;
    return NormOperator(x1, x2, w, q, ones, p).numerator(G);
  };
  r.II1 = piece(up1, up2, tw.u_aa);
  r.II2 = piece(up1, lo2, tw.u_ab);
  r.II3 = piece(lo1, up2, tw.u_ba);
  r.II4 = piece(lo1, lo2, tw.u_bb);
  return r;
}

}  // namespace hardyvl
