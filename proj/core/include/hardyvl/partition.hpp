#pragma once

#include <string>
#include <utility>
#include <vector>

#include "hardyvl/charf.hpp"
#include "hardyvl/funcspace.hpp"
#include "hardyvl/ops.hpp"

namespace hardyvl {

/// Points m^k with a(m^{k+1}) = b(m^k), so the intervals [a(m^k), b(m^k)) tile an interval.
struct LimitSequence {
  int axis = 1;
  double m0 = 1.0;
  int k_min = 0, k_max = 0;
  std::vector<double> m;  // m[k - k_min]
  std::vector<double> a_k, b_k;
  /// Set when the recursion left the window or the map's range before reaching the
  /// requested end of the index range.
  bool truncated_low = false, truncated_high = false;

  double at(int k) const;
  double a(int k) const;
  double b(int k) const;
  /// max over k of |a(m^{k+1}) - b(m^k)| / max(1, b(m^k)).
  double abutment_error() const;
};

/// Forward recursion m^{k+1} = a^{-1}(b(m^k)) for k >= 0 and backward m^k = b^{-1}(a(m^{k+1}))
/// for k < 0, stopping (with a truncation flag) when m leaves `window`.
LimitSequence build_sequence(const BoundaryPair& pair, double m0, int k_min, int k_max, const Window& window,
                             int axis = 1);

/// Smallest index range with m^{k_min} <= lo and m^{k_max} >= hi; the range is capped at
/// `max_steps` steps per direction.
std::pair<int, int> default_k_range(const BoundaryPair& pair, double m0, double lo, double hi,
                                    int max_steps = 4096);

/// Sequence whose decomposition covers functions supported in [lo, hi]: a(m^{k_min+1}) <= lo and
/// a(m^{k_max}) >= hi.
LimitSequence covering_sequence(const BoundaryPair& pair, double m0, double lo, double hi, int axis = 1);

enum class Quadrant { aa, ab, ba, bb };
std::string to_string(Quadrant q);

/// u(c1^{-1}(y1), c2^{-1}(y2)) (c1^{-1})'(y1) (c2^{-1})'(y2), where c_i is a_i or b_i per `which`.
double transformed_weight(const Weight2D& u, const BoundaryPair& axis1, const BoundaryPair& axis2, Quadrant which,
                          double y1, double y2);
Weight2D transformed(const Weight2D& u, const BoundaryPair& axis1, const BoundaryPair& axis2, Quadrant which);

struct TransformedWeights {
  Weight2D u_aa, u_bb, u_ab, u_ba;
};
TransformedWeights transformed_weights(const Weight2D& u, const BoundaryPair& axis1, const BoundaryPair& axis2);

struct QuadrantResult {
  double II1 = 0.0, II2 = 0.0, II3 = 0.0, II4 = 0.0;
  /// ||H2 g||_{q,u} with g = f v1^{1-p'} v2^{1-p'}, evaluated in the original variables.
  double total_lhs = 0.0;
  double sum() const { return II1 + II2 + II3 + II4; }
  bool holds(double rel_slack = 1e-3) const { return total_lhs <= sum() * (1.0 + rel_slack); }
};

/// Splits each moving box at b^k = a^{k+1} and evaluates the four pieces with the transformed
/// weights. Throws DomainError listing the offending cells when g has support outside
/// [a(m^{k_min+1}), a(m^{k_max})] on either axis.
QuadrantResult quadrant_decompose(const GridFn& f, const Problem& pb, const LimitSequence& seq1,
                                  const LimitSequence& seq2, int gl = 4);

}  // namespace hardyvl
