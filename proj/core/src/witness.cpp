#include "hardyvl/witness.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "hardyvl/error.hpp"

namespace hardyvl {

namespace {

struct Piecewise {
  std::function<double(double)> fn;
  std::vector<double> breaks;
};

// Two pieces on [b0, b1) and [b1, b2); zero elsewhere.
Piecewise two_pieces(double b0, double b1, double b2, std::function<double(double)> left,
                     std::function<double(double)> right) {
  Piecewise p;
  p.breaks = {b0, b1, b2};
  p.fn = [b0, b1, b2, left = std::move(left), right = std::move(right)](double y) {
    if (y < b0 || y >= b2) return 0.0;
    return y < b1 ? left(y) : right(y);
  };
  return p;
}

TensorWitness tensor(Piecewise a, Piecewise b) {
  TensorWitness w;
  w.first = std::move(a.fn);
  w.second = std::move(b.fn);
  w.breaks1 = std::move(a.breaks);
  w.breaks2 = std::move(b.breaks);
  return w;
}

std::vector<double> piece_edges(const std::vector<double>& breaks, int n) {
  std::vector<double> e{breaks.front()};
  for (std::size_t k = 0; k + 1 < breaks.size(); ++k) {
    const double lo = breaks[k], hi = breaks[k + 1];
    if (!(hi > lo)) continue;
    for (int i = 1; i <= n; ++i) {
      const double f = static_cast<double>(i) / n;
      e.push_back(i == n ? hi : (lo > 0.0 ? lo * std::pow(hi / lo, f) : lo + f * (hi - lo)));
    }
  }
  return e;
}

Eigen::VectorXd midpoint_values(const std::function<double(double)>& f, const std::vector<double>& e) {
  Eigen::VectorXd v(static_cast<Eigen::Index>(e.size() - 1));
  for (std::size_t k = 0; k + 1 < e.size(); ++k) v[static_cast<Eigen::Index>(k)] = f(0.5 * (e[k] + e[k + 1]));
  return v;
}

void require_kind(const WitnessSpec& spec, WitnessSpec::Kind k) {
  if (spec.kind != k) throw DomainError("witness spec kind mismatch: expected " + to_string(k));
}

void require_hardy_scale(double s, double p) {
  if (!(s > 1.0 && s < p)) throw DomainError("witness requires 1 < s < p");
}

// ((p/(p-s))^p + 1/(s-1))^{1/p}
double rhs_constant(double p, double s) { return std::pow(std::pow(p / (p - s), p) + 1.0 / (s - 1.0), 1.0 / p); }

double margin_lhs(double lhs, double bound) { return bound > 0.0 ? (lhs - bound) / bound : 0.0; }
double margin_rhs(double rhs, double bound) { return bound > 0.0 ? (bound - rhs) / bound : 0.0; }

}  // namespace

std::string to_string(WitnessSpec::Kind k) {
  switch (k) {
    case WitnessSpec::Kind::thm1_hardy: return "thm1_hardy";
    case WitnessSpec::Kind::lemma2_corner: return "lemma2_corner";
    case WitnessSpec::Kind::thm2_pk: return "thm2_pk";
  }
  return "unknown";
}

double TensorWitness::operator()(double y1, double y2) const {
  if (y1 < breaks1.front() || y1 >= breaks1.back() || y2 < breaks2.front() || y2 >= breaks2.back()) return 0.0;
  return first(y1) * second(y2);
}

// ---------------------------------------------------------------- constructions

TensorWitness thm1_witness_fn(const Problem& pb, const WitnessSpec& spec) {
  require_kind(spec, WitnessSpec::Kind::thm1_hardy);
  if (!admissible(spec.anchor, pb.boundary(1), pb.boundary(2))) throw DomainError("witness anchor is not admissible");
  const double p = pb.exps().p, e = 1.0 - pb.exps().pprime();
  auto axis = [&](int i, double s, double t, double x) {
    require_hardy_scale(s, p);
    const VFunction& V = pb.V(i);
    const Weight1D v = pb.v(i);
    const BoundaryPair& pair = pb.boundary(i);
    const double A = pair.a()(x), B = pair.b()(t), Bx = pair.b()(x);
    const double VA = V(A), dV = V(B) - VA;
    const double plateau = p / (p - s) * std::pow(dV, -s / p);
    return two_pieces(
        A, B, Bx, [plateau, v, e](double y) { return plateau * std::pow(v(y), e); },
        [&V, VA, v, e, s, p](double y) { return std::pow(V(y) - VA, -s / p) * std::pow(v(y), e); });
  };
  const auto& a = spec.anchor;
  return tensor(axis(1, spec.s.s1, a.t1, a.x1), axis(2, spec.s.s2, a.t2, a.x2));
}

TensorWitness lemma2_witness_fn(const Problem& pb, const WitnessSpec& spec) {
  require_kind(spec, WitnessSpec::Kind::lemma2_corner);
  if (!spec.rect) throw DomainError("corner witness needs a rectangle");
  const Rect& r = *spec.rect;
  if (!(r.lo1 < r.hi1) || !(r.lo2 < r.hi2)) throw DomainError("corner rectangle must be ordered");
  const double t1 = spec.anchor.t1, t2 = spec.anchor.t2;
  if (!(t1 > r.lo1 && t1 < r.hi1 && t2 > r.lo2 && t2 < r.hi2))
    throw DomainError("corner witness anchor must lie inside the rectangle");
  const double p = pb.exps().p, e = 1.0 - pb.exps().pprime();
  const double s1 = spec.s.s1, s2 = spec.s.s2;
  require_hardy_scale(s1, p);
  require_hardy_scale(s2, p);
  const VFunction &V1 = pb.V(1), &V2 = pb.V(2);
  const Weight1D v1 = pb.v(1), v2 = pb.v(2);
  // Axis 1 grows from c1, axis 2 from d2 downward.
  const double Vc = V1(r.lo1), k1 = std::pow(p / (p - s1), p) * std::pow(V1(t1) - Vc, -s1);
  const double Vd = V2(r.hi2), k2 = std::pow(p / (p - s2), p) * std::pow(Vd - V2(t2), -s2);
  auto g1 = two_pieces(
      r.lo1, t1, r.hi1, [k1, v1, e](double y) { return k1 * std::pow(v1(y), e); },
      [&V1, Vc, v1, e, s1](double y) { return std::pow(V1(y) - Vc, -s1) * std::pow(v1(y), e); });
  auto g2 = two_pieces(
      r.lo2, t2, r.hi2, [&V2, Vd, v2, e, s2](double y) { return std::pow(Vd - V2(y), -s2) * std::pow(v2(y), e); },
      [k2, v2, e](double y) { return k2 * std::pow(v2(y), e); });
  return tensor(std::move(g1), std::move(g2));
}

TensorWitness pk_witness_fn(const PkProblem& pb, const WitnessSpec& spec, double z1, double z2) {
  require_kind(spec, WitnessSpec::Kind::thm2_pk);
  const auto& c = pb.config();
  if (!admissible(spec.anchor, c.axis1, c.axis2)) throw DomainError("witness anchor is not admissible");
  const auto& a = spec.anchor;
  if (!(z1 > a.t1 && z1 <= a.x1 && z2 > a.t2 && z2 <= a.x2)) throw DomainError("slice must satisfy t < z <= x");
  auto axis = [](const BoundaryPair& pair, double s, double t, double z) {
    if (!(s > 1.0)) throw DomainError("geometric-mean witness requires s > 1");
    const double A = pair.a()(z), B = pair.b()(t), Bz = pair.b()(z);
    const double plateau = std::pow(B - A, -s), tail = std::exp(-s);
    return two_pieces(
        A, B, Bz, [plateau](double) { return plateau; },
        [A, s, tail](double y) { return tail * std::pow(y - A, -s); });
  };
  return tensor(axis(c.axis1, spec.s.s1, a.t1, z1), axis(c.axis2, spec.s.s2, a.t2, z2));
}

GridFn sample_witness(const TensorWitness& w, int cells_per_piece) {
  if (cells_per_piece < 1) throw DomainError("witness sampling needs at least one cell per piece");
  return sample_onto(w, piece_edges(w.breaks1, cells_per_piece), piece_edges(w.breaks2, cells_per_piece));
}

GridFn sample_onto(const TensorWitness& w, const std::vector<double>& edges1, const std::vector<double>& edges2) {
  GridFn g;
  g.edges1 = edges1;
  g.edges2 = edges2;
  g.values = midpoint_values(w.first, edges1) * midpoint_values(w.second, edges2).transpose();
  g.validate();
  return g;
}

GridFn thm1_witness(const Problem& pb, const WitnessSpec& spec, int cells_per_piece) {
  return sample_witness(thm1_witness_fn(pb, spec), cells_per_piece);
}

GridFn lemma2_witness(const Problem& pb, const WitnessSpec& spec, int cells_per_piece) {
  return sample_witness(lemma2_witness_fn(pb, spec), cells_per_piece);
}

GridFn pk_witness(const PkProblem& pb, const WitnessSpec& spec, int cells_per_piece) {
  return pk_witness_at(pb, spec, spec.anchor.x1, spec.anchor.x2, cells_per_piece);
}

GridFn pk_witness_at(const PkProblem& pb, const WitnessSpec& spec, double z1, double z2, int cells_per_piece) {
  return sample_witness(pk_witness_fn(pb, spec, z1, z2), cells_per_piece);
}

// ---------------------------------------------------------------- checks

WitnessCheck witness_bound_check(const Problem& pb, const WitnessSpec& spec, double budget, int cells_per_piece) {
  const double p = pb.exps().p, q = pb.exps().q;
  const double s1 = spec.s.s1, s2 = spec.s.s2;
  WitnessCheck wc;
  wc.budget = budget;
  const auto& a = spec.anchor;

  if (spec.kind == WitnessSpec::Kind::thm1_hardy) {
    const GridFn f = thm1_witness(pb, spec, cells_per_piece);
    const NormOperator op = NormOperator::hardy(pb, f.edges1, f.edges2);
    wc.lhs = op.numerator(f.values);
    wc.rhs = op.denominator(f.values);
    const auto &ax1 = pb.boundary(1), &ax2 = pb.boundary(2);
    const VFunction &V1 = pb.V(1), &V2 = pb.V(2);
    const double VA1 = V1(ax1.a()(a.x1)), VA2 = V2(ax2.a()(a.x2));
    const double k1 = q * (p - s1) / p, k2 = q * (p - s2) / p;
    // With the slice fixed at x, H2 f(z) equals prod p/(p-s) (V(b(z)) - V(a(x)))^{(p-s)/p} on t < z < x.
    auto g = [&](double z1, double z2) {
      return pb.u()(z1, z2) * std::pow(V1(ax1.b()(z1)) - VA1, k1) * std::pow(V2(ax2.b()(z2)) - VA2, k2);
    };
    const double I = pb.u().is_zero() ? 0.0 : integrate_2d(g, Rect{a.t1, a.x1, a.t2, a.x2}, 1e-9).value;
    wc.lhs_bound = p / (p - s1) * p / (p - s2) * std::pow(std::max(I, 0.0), 1.0 / q);
    const double d1 = V1(ax1.b()(a.t1)) - VA1, d2 = V2(ax2.b()(a.t2)) - VA2;
    wc.rhs_bound = rhs_constant(p, s1) * rhs_constant(p, s2) * std::pow(d1, (1.0 - s1) / p) *
                   std::pow(d2, (1.0 - s2) / p);
  } else if (spec.kind == WitnessSpec::Kind::lemma2_corner) {
    const TensorWitness g = lemma2_witness_fn(pb, spec);
    const Weight1D v1 = pb.v(1), v2 = pb.v(2);
    // f = g^{1/p} (v1 v2)^{-1/p}
    TensorWitness fw = g;
    fw.first = [h = g.first, v1, p](double y) { return std::pow(h(y), 1.0 / p) * std::pow(v1(y), -1.0 / p); };
    fw.second = [h = g.second, v2, p](double y) { return std::pow(h(y), 1.0 / p) * std::pow(v2(y), -1.0 / p); };
    const GridFn f = sample_witness(fw, cells_per_piece);
    const Rect& r = *spec.rect;
    const NormOperator op(corner_axis(f.edges1, r.lo1, r.hi1, true), corner_axis(f.edges2, r.lo2, r.hi2, false),
                          pb.u(), q, cell_weight_integrals(f.edges1, f.edges2, v1, v2), p);
    wc.lhs = op.numerator(f.values);
    wc.rhs = op.denominator(f.values);
    const VFunction &V1 = pb.V(1), &V2 = pb.V(2);
    const double Vc = V1(r.lo1), Vd = V2(r.hi2);
    const double k1 = q * (p - s1) / p, k2 = q * (p - s2) / p;
    auto h = [&](double x1, double x2) {
      return pb.u()(x1, x2) * std::pow(V1(x1) - Vc, k1) * std::pow(Vd - V2(x2), k2);
    };
    const double I = pb.u().is_zero() ? 0.0 : integrate_2d(h, Rect{a.t1, r.hi1, r.lo2, a.t2}, 1e-9).value;
    wc.lhs_bound = p / (p - s1) * p / (p - s2) * std::pow(std::max(I, 0.0), 1.0 / q);
    wc.rhs_bound = rhs_constant(p, s1) * rhs_constant(p, s2) * std::pow(V1(a.t1) - Vc, (1.0 - s1) / p) *
                   std::pow(Vd - V2(a.t2), (1.0 - s2) / p);
  } else {
    throw DomainError("witness_bound_check handles the Hardy and corner kinds; use pk_witness_check");
  }

  wc.lhs_margin = margin_lhs(wc.lhs, wc.lhs_bound);
  wc.rhs_margin = margin_rhs(wc.rhs, wc.rhs_bound);
  wc.ratio = wc.rhs > 0.0 ? wc.lhs / wc.rhs : 0.0;
  wc.ratio_floor = wc.rhs_bound > 0.0 ? wc.lhs_bound / wc.rhs_bound : 0.0;
  wc.passed = wc.lhs_margin >= -budget && wc.rhs_margin >= -budget;
  std::ostringstream os;
  os.precision(10);
  os << "lhs " << wc.lhs << " >= " << wc.lhs_bound << " (margin " << wc.lhs_margin << "); rhs " << wc.rhs
     << " <= " << wc.rhs_bound << " (margin " << wc.rhs_margin << ")";
  wc.detail = os.str();
  return wc;
}

PkWitnessCheck pk_witness_check(const PkProblem& pb, const WitnessSpec& spec, int slices_per_axis, double budget,
                                int cells_per_piece) {
  require_kind(spec, WitnessSpec::Kind::thm2_pk);
  if (slices_per_axis < 1) throw DomainError("need at least one slice per axis");
  const auto& c = pb.config();
  const double p = c.exps.p, q = c.exps.q, s1 = spec.s.s1, s2 = spec.s.s2;
  const auto& a = spec.anchor;
  PkWitnessCheck pc;
  pc.budget = budget;
  pc.rhs_margin = INFINITY;
  const double k1 = std::pow(1.0 + std::exp(-s1) / (s1 - 1.0), 1.0 / p);
  const double k2 = std::pow(1.0 + std::exp(-s2) / (s2 - 1.0), 1.0 / p);
  auto rhs_bound_at = [&](double z1, double z2) {
    return k1 * k2 * std::pow(c.axis1.b()(a.t1) - c.axis1.a()(z1), (1.0 - s1) / p) *
           std::pow(c.axis2.b()(a.t2) - c.axis2.a()(z2), (1.0 - s2) / p);
  };
  // Slices z = t + (x - t) k / n for k = 1..n; the last one is z = x.
  for (int i = 1; i <= slices_per_axis; ++i)
    for (int j = 1; j <= slices_per_axis; ++j) {
      const double z1 = i == slices_per_axis ? a.x1 : a.t1 + (a.x1 - a.t1) * i / slices_per_axis;
      const double z2 = j == slices_per_axis ? a.x2 : a.t2 + (a.x2 - a.t2) * j / slices_per_axis;
      const GridFn g = pk_witness_at(pb, spec, z1, z2, cells_per_piece);
      const double G = apply_G2(g, c.axis1, c.axis2, z1, z2);
      const double expect = std::pow(c.axis1.b()(z1) - c.axis1.a()(z1), -s1) *
                            std::pow(c.axis2.b()(z2) - c.axis2.a()(z2), -s2);
      pc.identity_max_rel_error = std::max(pc.identity_max_rel_error, std::abs(G - expect) / expect);
      const Eigen::VectorXd l1 = Eigen::Map<const Eigen::VectorXd>(g.edges1.data() + 1, g.cells1()) -
                                 Eigen::Map<const Eigen::VectorXd>(g.edges1.data(), g.cells1());
      const Eigen::VectorXd l2 = Eigen::Map<const Eigen::VectorXd>(g.edges2.data() + 1, g.cells2()) -
                                 Eigen::Map<const Eigen::VectorXd>(g.edges2.data(), g.cells2());
      const double rhs = std::pow(l1.dot(g.values * l2), 1.0 / p);
      const double bound = rhs_bound_at(z1, z2);
      pc.rhs_margin = std::min(pc.rhs_margin, margin_rhs(rhs, bound));
      if (z1 == a.x1 && z2 == a.x2) {
        pc.rhs = rhs;
        pc.rhs_bound = bound;
      }
      ++pc.slices;
    }
  const Weight2D& w = pb.w();
  auto h = [&](double z1, double z2) {
    return w(z1, z2) * std::pow(c.axis1.b()(z1) - c.axis1.a()(z1), -s1 * q / p) *
           std::pow(c.axis2.b()(z2) - c.axis2.a()(z2), -s2 * q / p);
  };
  const double I = w.is_zero() ? 0.0 : integrate_2d(h, Rect{a.t1, a.x1, a.t2, a.x2}, 1e-9).value;
  pc.lhs_bound = std::pow(std::max(I, 0.0), 1.0 / q);
  pc.ratio_floor = pc.rhs_bound > 0.0 ? pc.lhs_bound / pc.rhs_bound : 0.0;
  pc.passed = pc.identity_max_rel_error <= budget && pc.rhs_margin >= -budget;
  std::ostringstream os;
  os.precision(10);
  os << "box-mean identity max rel error " << pc.identity_max_rel_error << " over " << pc.slices
     << " slices; rhs " << pc.rhs << " <= " << pc.rhs_bound << " (worst margin " << pc.rhs_margin << ")";
  pc.detail = os.str();
  return pc;
}

std::vector<SearchPoint> default_anchors(const BoundaryPair& axis1, const BoundaryPair& axis2, double center1,
                                         double center2, int count) {
  static constexpr double kScale[] = {1.0, 0.5, 2.0, 0.25, 4.0, 0.125, 8.0, 0.0625};
  static constexpr double kTheta[] = {0.5, 0.3, 0.7, 0.5, 0.4, 0.6, 0.5, 0.5};
  std::vector<SearchPoint> out;
  for (int k = 0; k < count && k < 8; ++k) {
    const double t1 = center1 * kScale[k], t2 = center2 * kScale[k];
    const double x1 = t1 * std::pow(axis1.x_upper(t1) / t1, kTheta[k]);
    const double x2 = t2 * std::pow(axis2.x_upper(t2) / t2, kTheta[(k + 1) % 8]);
    out.push_back({t1, t2, x1, x2});
  }
  return out;
}

}  // namespace hardyvl
