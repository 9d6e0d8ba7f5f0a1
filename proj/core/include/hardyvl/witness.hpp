#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "hardyvl/charf.hpp"
#include "hardyvl/ops.hpp"

namespace hardyvl {

struct WitnessSpec {
  enum class Kind { thm1_hardy, lemma2_corner, thm2_pk };
  Kind kind = Kind::thm1_hardy;
  ScalePoint s;
  /// t and x per axis; for the corner kind only t is used.
  SearchPoint anchor;
  std::optional<Rect> rect;
};

std::string to_string(WitnessSpec::Kind k);

/// Tensor-product test function first(y1) * second(y2), zero outside the support. Each
/// factor is smooth between consecutive entries of its breakpoint list.
struct TensorWitness {
  std::function<double(double)> first, second;
  std::vector<double> breaks1, breaks2;

  double operator()(double y1, double y2) const;
  Rect support() const { return {breaks1.front(), breaks1.back(), breaks2.front(), breaks2.back()}; }
};

/// Continuous test functions for the necessity direction; the free slice variable is fixed to the anchor x.
TensorWitness thm1_witness_fn(const Problem& pb, const WitnessSpec& spec);
TensorWitness lemma2_witness_fn(const Problem& pb, const WitnessSpec& spec);
/// Geometric-mean witness at slice z = (z1, z2) with t < z < x per axis.
TensorWitness pk_witness_fn(const PkProblem& pb, const WitnessSpec& spec, double z1, double z2);

/// Own grid: `cells_per_piece` geometric cells between consecutive breakpoints, midpoint values.
GridFn sample_witness(const TensorWitness& w, int cells_per_piece = 64);
/// Midpoint values on a given grid.
GridFn sample_onto(const TensorWitness& w, const std::vector<double>& edges1, const std::vector<double>& edges2);

GridFn thm1_witness(const Problem& pb, const WitnessSpec& spec, int cells_per_piece = 64);
GridFn lemma2_witness(const Problem& pb, const WitnessSpec& spec, int cells_per_piece = 64);
GridFn pk_witness(const PkProblem& pb, const WitnessSpec& spec, int cells_per_piece = 64);
GridFn pk_witness_at(const PkProblem& pb, const WitnessSpec& spec, double z1, double z2, int cells_per_piece = 64);

/// Numerical check of the two inequalities bracketing a witness's ratio.
struct WitnessCheck {
  double lhs = 0.0;        // ||T f||_{q,u} of the sampled witness
  double lhs_bound = 0.0;  // proven lower bound on the left side
  double rhs = 0.0;        // ||f||_{p,v1 v2} of the sampled witness
  double rhs_bound = 0.0;  // proven upper bound on the right side
  /// (lhs - lhs_bound) / lhs_bound and (rhs_bound - rhs) / rhs_bound.
  double lhs_margin = 0.0;
  double rhs_margin = 0.0;
  double ratio = 0.0;
  /// lhs_bound / rhs_bound: a lower bound on the ratio implied by the two inequalities.
  double ratio_floor = 0.0;
  double budget = 1e-3;
  bool passed = true;
  std::string detail;
};

/// For thm1_hardy and lemma2_corner specs.
WitnessCheck witness_bound_check(const Problem& pb, const WitnessSpec& spec, double budget = 1e-3,
                                 int cells_per_piece = 64);

/// Geometric-mean check at z-slices in the anchor box: the box-mean identity
/// G2 g_z(z) = prod (b(z) - a(z))^{-s}, the right-side bound at each slice, and the implied
/// lower bound on the left side.
struct PkWitnessCheck {
  double identity_max_rel_error = 0.0;
  double rhs = 0.0;        // (iint g)^{1/p} at z = x
  double rhs_bound = 0.0;
  double rhs_margin = 0.0;  // worst over slices
  double lhs_bound = 0.0;
  double ratio_floor = 0.0;
  int slices = 0;
  double budget = 1e-3;
  bool passed = true;
  std::string detail;
};

PkWitnessCheck pk_witness_check(const PkProblem& pb, const WitnessSpec& spec, int slices_per_axis = 3,
                                double budget = 1e-3, int cells_per_piece = 64);

/// Admissible anchors t = center * factor, x = t (x_upper(t) / t)^{theta} on both axes.
std::vector<SearchPoint> default_anchors(const BoundaryPair& axis1, const BoundaryPair& axis2, double center1,
                                         double center2, int count = 4);

}  // namespace hardyvl
