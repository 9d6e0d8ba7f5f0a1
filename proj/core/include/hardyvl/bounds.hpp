#pragma once

#include <functional>
#include <string>
#include <vector>

#include "hardyvl/charf.hpp"

namespace hardyvl {

enum class Theorem { hardy_thm1, pk_thm2, lemmaA, lemma2, lemma3, lemma4, hardy_1d };

std::string to_string(Theorem t);
/// Inverse of to_string; DomainError on unknown names.
Theorem theorem_from_string(const std::string& name);
/// 4 for the two-variable theorems, 1 for the rectangle lemmas, 2 for the one-variable case.
double multiplier(Theorem t);
/// Rectangle lemma matching a corner variant.
Theorem corner_theorem(CornerVariant v);

/// prod_i ((p/(p-s_i))^p / ((p/(p-s_i))^p + 1/(s_i-1)))^{1/p}; requires 1 < s_i < p.
double lower_factor(double p, const ScalePoint& s);
/// prod_i ((p-1)/(p-s_i))^{1/p'}; +inf at s_i = p, DomainError for s_i < 1 or s_i > p.
double upper_factor(double p, const ScalePoint& s);
/// prod_i (e^{s_i}(s_i-1) / (e^{s_i}(s_i-1) + 1))^{1/p}; requires s_i > 1, p > 0.
double pk_lower_factor(double p, const ScalePoint& s);

double lower_factor_1d(double p, double s);
double upper_factor_1d(double p, double s);

struct SandwichOptions {
  /// Grid points per axis, uniform over (1 + h, p - h) with h = (p - 1) / 40.
  int s_grid = 9;
  bool polish = true;
  double polish_tol = 1e-3;
  int polish_sweeps = 2;
};

struct ScaleSample {
  ScalePoint s;
  CharacterizationValue value;
};

struct SandwichReport {
  double lower_bound = 0.0;
  double upper_bound = 0.0;
  ScalePoint s_at_lower, s_at_upper;
  /// Every functional evaluation in the order performed.
  std::vector<ScaleSample> functional_values;
  Theorem theorem = Theorem::hardy_thm1;
  double multiplier = 4.0;
  /// Set when every sampled functional value is infinite.
  bool unbounded = false;
  /// For the geometric-mean theorem: the lower bound restricted to s_i in (1, p).
  double lower_bound_restricted = 0.0;
  bool converged = true;
  std::string note;
};

using ScaleFunctional = std::function<CharacterizationValue(const ScalePoint&)>;

/// Grid search plus golden polish of the lower and upper products of `functional`.
SandwichReport optimize_sandwich(const ScaleFunctional& functional, double p, Theorem theorem,
                                 const SandwichOptions& opt = {});

SandwichReport sandwich_hardy(const Problem& pb, const SandwichOptions& opt = {});
SandwichReport sandwich_pk(const PkProblem& pb, const SandwichOptions& opt = {});
SandwichReport sandwich_corner(CornerVariant variant, const Rect& rect, const Problem& pb,
                               const SandwichOptions& opt = {});
/// One-variable sandwich with multiplier 2; s2 fields of the report are unused.
SandwichReport sandwich_1d(const Problem1D& pb, const SandwichOptions& opt = {});

}  // namespace hardyvl
