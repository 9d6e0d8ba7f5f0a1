#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "config.hpp"
#include "json.hpp"

namespace hardyvl::cli {

using Json = nlohmann::ordered_json;

inline constexpr int kSchemaVersion = 1;

enum ExitCode : int { kPass = 0, kFail = 1, kUsage = 2, kNonconvergence = 3 };

struct Flags {
  std::string out_dir;
  int jobs = 1;
  std::optional<std::uint64_t> seed;
  std::optional<int> s_grid;
  std::optional<int> resolution;
  std::optional<std::pair<double, double>> window;
  /// Fault-injection hook: multiplies the upper bound before the verify checks.
  double test_scale_upper = 1.0;
  /// Wall-clock stage timings make reports non-reproducible, so they are opt-in.
  bool timings = false;
};

/// Command-line overrides written into the key/value view so the report echoes them.
KeyValues apply_flags(KeyValues kv, const Flags& flags);

struct CommandResult {
  Json report;
  int exit_code = kPass;
};

CommandResult cmd_characterize(const RunConfig& rc, const Flags& flags);
CommandResult cmd_sandwich(const RunConfig& rc, const Flags& flags);
CommandResult cmd_verify(const RunConfig& rc, const Flags& flags);

struct SweepRow {
  std::string param, value;
  double lower = 0.0, upper = 0.0, norm_estimate = 0.0;
  std::string verdict;
};

/// One verify report per value of the swept key plus the aggregate rows. Samples run on up to
/// `flags.jobs` threads; output does not depend on the job count.
struct SweepResult {
  std::vector<Json> reports;
  std::vector<SweepRow> rows;
  std::string csv;
  int exit_code = kPass;
};
SweepResult cmd_sweep(const KeyValues& base, const SweepSpec& spec, const Flags& flags);

/// Columns: param,value,lower,upper,norm_estimate,gap_ratio,verdict.
std::string aggregate_csv(const std::vector<SweepRow>& rows);

/// Brute-force reference values for a Hardy-side config on the reduced window [1e-2, 1e2].
CommandResult cmd_oracle_regen(const RunConfig& rc, const Flags& flags);

/// Numbers as JSON, with infinities as the strings "+inf" / "-inf" and NaN as "nan".
Json number(double x);

/// Report serialization with two-space indentation and a trailing newline.
std::string dump(const Json& j);

}  // namespace hardyvl::cli
