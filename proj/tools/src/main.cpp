#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "commands.hpp"
#include "hardyvl/error.hpp"

namespace fs = std::filesystem;
using namespace hardyvl;
using namespace hardyvl::cli;

namespace {

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write '" + path.string() + "'");
  out << text;
}

std::pair<double, double> parse_window(const std::string& s) {
  const auto comma = s.find(',');
  if (comma == std::string::npos) throw ConfigError("--window expects eps,X (got '" + s + "')");
  try {
    return {std::stod(s.substr(0, comma)), std::stod(s.substr(comma + 1))};
  } catch (const std::exception&) {
    throw ConfigError("--window expects two numbers eps,X (got '" + s + "')");
  }
}

std::string verdict_line(const Json& report) {
  std::ostringstream os;
  os << report["command"].get<std::string>();
  if (report.contains("verdict")) os << ": " << report["verdict"].get<std::string>();
  if (report.contains("failures"))
    for (const auto& f : report["failures"])
      os << "\n  failed " << f["name"].get<std::string>() << " (margin " << f["margin"].dump() << ")";
  return os.str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Two-sided bounds and numerical checks for weighted Hardy and geometric-mean inequalities"};
  app.require_subcommand(1);

  std::string config_path, window_text, sweep_param, sweep_values;
  Flags flags;
  std::uint64_t seed = 0;
  int s_grid = 0, resolution = 0;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "key = value config file")->required()->check(CLI::ExistingFile);
    sub->add_option("--out", flags.out_dir, "directory for report files (stdout when omitted)");
    sub->add_option("--jobs", flags.jobs, "concurrent sweep samples")->check(CLI::PositiveNumber);
    sub->add_option("--seed", seed, "seed for random restarts");
    sub->add_option("--s-grid", s_grid, "scale-parameter grid points per axis")->check(CLI::PositiveNumber);
    sub->add_option("--resolution", resolution, "norm-estimation cells per axis")->check(CLI::PositiveNumber);
    sub->add_option("--window", window_text, "truncation window eps,X for both axes");
    sub->add_flag("--timings", flags.timings, "record wall-clock time per stage");
  };

  CLI::App* characterize = app.add_subcommand("characterize", "characterization functional on an s-grid");
  CLI::App* sandwich = app.add_subcommand("sandwich", "optimized lower and upper constant bounds");
  CLI::App* verify = app.add_subcommand("verify", "norm estimate, witness and decomposition checks against the bounds");
  CLI::App* sweep = app.add_subcommand("sweep", "verify over values of one config key");
  CLI::App* regen = app.add_subcommand("oracle-regen", "brute-force reference values for the test suite");
  for (CLI::App* sub : {characterize, sandwich, verify, sweep, regen}) add_common(sub);
  verify->add_option("--test-scale-upper", flags.test_scale_upper, "fault injection: scale the upper bound")
      ->group("");
  sweep->add_option("--param", sweep_param, "swept key (overrides sweep.param)");
  sweep->add_option("--values", sweep_values, "comma-separated values (overrides sweep.values)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kPass : kUsage;
  }
  if (seed) flags.seed = seed;
  if (s_grid) flags.s_grid = s_grid;
  if (resolution) flags.resolution = resolution;

  try {
    if (!window_text.empty()) flags.window = parse_window(window_text);
    const KeyValues kv = apply_flags(read_key_values(config_path), flags);
    if (!flags.out_dir.empty()) fs::create_directories(flags.out_dir);

    if (sweep->parsed()) {
      RunConfig rc = build_config(kv);
      SweepSpec spec = rc.sweep.value_or(SweepSpec{});
      if (!sweep_param.empty()) spec.param = sweep_param;
      if (sweep->count("--values")) {
        spec.values.clear();
        std::istringstream is(sweep_values);
        for (std::string v; std::getline(is, v, ',');)
          if (!v.empty()) spec.values.push_back(v);
      }
      if (spec.param.empty()) throw ConfigError("sweep needs sweep.param or --param");
      const SweepResult r = cmd_sweep(kv, spec, flags);
      if (flags.out_dir.empty()) {
        std::cout << r.csv;
      } else {
        for (std::size_t i = 0; i < r.reports.size(); ++i)
          write_file(fs::path(flags.out_dir) / ("sample_" + std::to_string(i) + ".json"), dump(r.reports[i]));
        write_file(fs::path(flags.out_dir) / "aggregate.csv", r.csv);
        std::cout << "sweep: " << r.rows.size() << " samples written to " << flags.out_dir << "\n";
      }
      return r.exit_code;
    }

    const RunConfig rc = build_config(kv);
    CommandResult r;
    std::string name;
    if (characterize->parsed()) {
      r = cmd_characterize(rc, flags);
      name = "characterize";
    } else if (sandwich->parsed()) {
      r = cmd_sandwich(rc, flags);
      name = "sandwich";
    } else if (verify->parsed()) {
      r = cmd_verify(rc, flags);
      name = "verify";
    } else {
      r = cmd_oracle_regen(rc, flags);
      name = "oracle_golden";
    }
    if (flags.out_dir.empty()) {
      std::cout << dump(r.report);
    } else {
      write_file(fs::path(flags.out_dir) / (name + ".json"), dump(r.report));
      std::cout << verdict_line(r.report) << "\n";
    }
    return r.exit_code;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kUsage;
  } catch (const AccuracyError& e) {
    std::cerr << "numerical nonconvergence: " << e.what() << "\n";
    return kNonconvergence;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  }
}
