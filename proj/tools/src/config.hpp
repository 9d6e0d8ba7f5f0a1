#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "hardyvl/bounds.hpp"
#include "hardyvl/charf.hpp"
#include "hardyvl/ops.hpp"

namespace hardyvl::cli {

struct Entry {
  std::string value;
  int line = 0;  // 0 for values set from the command line or a sweep
};

/// Flat key/value view of a config file; keys are dotted paths.
using KeyValues = std::map<std::string, Entry>;

/// `key = value` lines; '#' starts a comment; values may be double-quoted.
/// Throws ConfigError naming the line on malformed or duplicate entries.
KeyValues parse_key_values(const std::string& text, const std::string& source = "config");
KeyValues read_key_values(const std::string& path);

enum class ProblemKind { hardy, pk };

struct CornerSpec {
  CornerVariant variant = CornerVariant::AW;
  Rect rect;
};

struct SweepSpec {
  std::string param;
  std::vector<std::string> values;
};

struct RunConfig {
  ProblemKind kind = ProblemKind::hardy;
  ProblemConfig hardy;
  PkConfig pk;
  std::optional<CornerSpec> corner;
  SandwichOptions sandwich;
  int s_grid = 9;  // per axis, for characterize
  NormOptions norm;
  std::uint64_t seed = 1;
  /// Relative slack of the norm-containment and witness-containment checks.
  double containment_budget = 1e-2;
  /// Relative slack of each witness inequality.
  double witness_budget = 1e-3;
  /// Relative slack of the decomposition inequality.
  double decomposition_budget = 1e-3;
  int witness_cells = 64;
  std::optional<SweepSpec> sweep;
  KeyValues source;
};

/// Validated configuration. Builds the problem once so the cumulative-transform checks run;
/// errors carry the offending key and line.
RunConfig build_config(const KeyValues& kv);

/// Descriptors: "linear:c", "power:c,r" for boundaries; "unit", "power:alpha",
/// "exp_scaled:alpha,beta" for one-variable weights.
MonotoneMap parse_map(const std::string& text);
Weight1D parse_weight1d(const std::string& text);

/// Canonical "key = value" rendering, sorted by key.
std::string render(const KeyValues& kv);

}  // namespace hardyvl::cli
