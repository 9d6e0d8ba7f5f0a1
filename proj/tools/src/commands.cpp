#include "commands.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <iomanip>
#include <mutex>
#include <random>
#include <sstream>
#include <thread>

#include "hardyvl/error.hpp"
#include "hardyvl/partition.hpp"
#include "hardyvl/witness.hpp"
#ifdef HARDYVL_WITH_ORACLE
#include "hardyvl/oracle.hpp"
#endif

namespace hardyvl::cli {

Json number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "+inf" : "-inf";
  return x;
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

KeyValues apply_flags(KeyValues kv, const Flags& flags) {
  auto set = [&kv](const std::string& key, const std::string& value) { kv[key] = Entry{value, 0}; };
  auto num = [](double x) {
    std::ostringstream os;
    os << std::setprecision(17) << x;
    return os.str();
  };
  if (flags.seed) set("seed", std::to_string(*flags.seed));
  if (flags.s_grid) set("search.s_grid", std::to_string(*flags.s_grid));
  if (flags.resolution) set("norm.resolution", std::to_string(*flags.resolution));
  if (flags.window) {
    set("window.eps", num(flags.window->first));
    set("window.X", num(flags.window->second));
  }
  return kv;
}

namespace {

class Stopwatch {
 public:
  Stopwatch(bool on, Json& sink) : on_(on), sink_(sink) {}
  void lap(const std::string& stage) {
    const auto now = std::chrono::steady_clock::now();
    if (on_) sink_[stage] = std::chrono::duration<double>(now - last_).count();
    last_ = now;
  }

 private:
  bool on_;
  Json& sink_;
  std::chrono::steady_clock::time_point last_ = std::chrono::steady_clock::now();
};

Json to_json(const ScalePoint& s) { return Json{{"s1", number(s.s1)}, {"s2", number(s.s2)}}; }

Json to_json(const SearchPoint& p) {
  return Json{{"t1", number(p.t1)}, {"t2", number(p.t2)}, {"x1", number(p.x1)}, {"x2", number(p.x2)}};
}

Json to_json(const CharacterizationValue& v) {
  Json j;
  j["value"] = number(v.value);
  j["error_estimate"] = number(v.error_estimate);
  j["argmax"] = to_json(v.argmax);
  j["evaluations"] = v.evaluations;
  j["converged"] = v.converged;
  j["infinite"] = v.infinite;
  j["empty_region"] = v.empty_region;
  if (!v.note.empty()) j["note"] = v.note;
  return j;
}

Json to_json(const SandwichReport& r) {
  Json j;
  j["theorem"] = to_string(r.theorem);
  j["multiplier"] = r.multiplier;
  j["lower_bound"] = number(r.lower_bound);
  j["upper_bound"] = number(r.upper_bound);
  j["s_at_lower"] = to_json(r.s_at_lower);
  j["s_at_upper"] = to_json(r.s_at_upper);
  if (r.theorem == Theorem::pk_thm2) j["lower_bound_restricted"] = number(r.lower_bound_restricted);
  j["unbounded"] = r.unbounded;
  j["converged"] = r.converged;
  if (!r.note.empty()) j["note"] = r.note;
  Json samples = Json::array();
  for (const auto& s : r.functional_values)
    samples.push_back(Json{{"s1", number(s.s.s1)}, {"s2", number(s.s.s2)}, {"value", number(s.value.value)}});
  j["functional_values"] = std::move(samples);
  return j;
}

Json to_json(const NormEstimate& e, const NormOptions& opt) {
  Json j;
  j["value"] = number(e.value);
  j["resolution"] = opt.resolution;
  j["grid"] = Json::array({number(opt.grid_lo), number(opt.grid_hi)});
  j["iterations"] = e.iterations;
  j["converged"] = e.converged;
  j["stopping_tol"] = number(opt.tol);
  j["best_start"] = e.best_start;
  Json starts = Json::object();
  for (const auto& [name, v] : e.start_values) starts[name] = number(v);
  j["start_values"] = std::move(starts);
  return j;
}

Json to_json(const WitnessCheck& w) {
  return Json{{"lhs", number(w.lhs)},
              {"lhs_bound", number(w.lhs_bound)},
              {"lhs_margin", number(w.lhs_margin)},
              {"rhs", number(w.rhs)},
              {"rhs_bound", number(w.rhs_bound)},
              {"rhs_margin", number(w.rhs_margin)},
              {"ratio", number(w.ratio)},
              {"ratio_floor", number(w.ratio_floor)},
              {"budget", number(w.budget)},
              {"passed", w.passed}};
}

Json to_json(const PkWitnessCheck& w) {
  return Json{{"identity_max_rel_error", number(w.identity_max_rel_error)},
              {"rhs", number(w.rhs)},
              {"rhs_bound", number(w.rhs_bound)},
              {"rhs_margin", number(w.rhs_margin)},
              {"lhs_bound", number(w.lhs_bound)},
              {"ratio_floor", number(w.ratio_floor)},
              {"slices", w.slices},
              {"budget", number(w.budget)},
              {"passed", w.passed}};
}

Json to_json(const QuadrantResult& q) {
  return Json{{"II1", number(q.II1)},       {"II2", number(q.II2)}, {"II3", number(q.II3)},
              {"II4", number(q.II4)},       {"sum", number(q.sum())}, {"total_lhs", number(q.total_lhs)}};
}

Json tolerances_json(const RunConfig& rc) {
  const Tolerances& t = rc.kind == ProblemKind::hardy ? rc.hardy.tols : rc.pk.tols;
  return Json{{"quad_1d", number(t.quad_1d)},
              {"quad_2d", number(t.quad_2d)},
              {"search_inner", number(t.search_inner)},
              {"search_final", number(t.search_final)},
              {"invert", number(t.invert)},
              {"containment_budget", number(rc.containment_budget)},
              {"witness_budget", number(rc.witness_budget)},
              {"decomposition_budget", number(rc.decomposition_budget)}};
}

Json header(const std::string& command, const RunConfig& rc) {
  Json j;
  j["schema_version"] = kSchemaVersion;
  j["command"] = command;
  Json cfg = Json::object();
  for (const auto& [k, e] : rc.source) cfg[k] = e.value;
  j["config"] = std::move(cfg);
  j["tolerances"] = tolerances_json(rc);
  return j;
}

std::vector<double> scale_grid(double p, int n) {
  std::vector<double> s;
  for (int k = 0; k < n; ++k) s.push_back(1.0 + (p - 1.0) * (k + 1) / (n + 1));
  return s;
}

double exponent_p(const RunConfig& rc) { return rc.kind == ProblemKind::hardy ? rc.hardy.exps.p : rc.pk.exps.p; }

SandwichReport run_sandwich(const RunConfig& rc) {
  if (rc.kind == ProblemKind::pk) return sandwich_pk(PkProblem(rc.pk), rc.sandwich);
  const Problem pb(rc.hardy);
  if (rc.corner) return sandwich_corner(rc.corner->variant, rc.corner->rect, pb, rc.sandwich);
  return sandwich_hardy(pb, rc.sandwich);
}

struct Check {
  std::string name;
  bool passed = true;
  double margin = 0.0;
  std::string detail;
};

Json to_json(const Check& c) {
  Json j{{"name", c.name}, {"passed", c.passed}, {"margin", number(c.margin)}};
  if (!c.detail.empty()) j["detail"] = c.detail;
  return j;
}

std::string fmt(double x) {
  std::ostringstream os;
  os << std::setprecision(10) << x;
  return os.str();
}

// value <= limit (1 + budget); margin relative to the limit.
Check at_most(const std::string& name, double value, double limit, double budget) {
  Check c;
  c.name = name;
  const double cap = limit * (1.0 + budget);
  if (std::isinf(limit) && limit > 0) {
    c.margin = INFINITY;
    return c;
  }
  c.margin = limit > 0.0 ? (cap - value) / limit : (value <= cap ? 0.0 : -INFINITY);
  c.passed = value <= cap;
  c.detail = fmt(value) + " <= " + fmt(limit) + " * (1 + " + fmt(budget) + ")";
  return c;
}

ScalePoint witness_scale(const SandwichReport& sw, double p, bool pk) {
  const auto ok = [&](double s) { return std::isfinite(s) && s > 1.0 && (pk || s < p); };
  const ScalePoint s = sw.s_at_lower;
  if (ok(s.s1) && ok(s.s2)) return s;
  const double mid = 0.5 * (p + 1.0);
  return {mid, mid};
}

std::vector<double> side_edges(double c, double d, int n) {
  if (c > 0.0) return geometric_edges(c, d, n);
  std::vector<double> e;
  for (int k = 0; k <= n; ++k) e.push_back(c + (d - c) * k / n);
  return e;
}

std::pair<bool, bool> corner_tails(CornerVariant v) {
  switch (v) {
    case CornerVariant::AW: return {true, true};
    case CornerVariant::AWstar: return {true, false};
    case CornerVariant::AWtilde: return {false, false};
    case CornerVariant::AWtilde_star: return {false, true};
  }
  return {true, true};
}

// Power ascent on the rectangle operator from a uniform and seeded random starts.
NormEstimate corner_norm(const Problem& pb, const CornerSpec& cs, const NormOptions& opt) {
  const Rect& r = cs.rect;
  const auto e1 = side_edges(r.lo1, r.hi1, opt.resolution), e2 = side_edges(r.lo2, r.hi2, opt.resolution);
  const auto [t1, t2] = corner_tails(cs.variant);
  const NormOperator op(corner_axis(e1, r.lo1, r.hi1, t1), corner_axis(e2, r.lo2, r.hi2, t2), pb.u(),
                        pb.exps().q, cell_weight_integrals(e1, e2, pb.v(1), pb.v(2)), pb.exps().p);
  NormEstimate est;
  est.best_f = GridFn::constant(e1, e2, 1.0);
  est.value = -1.0;
  std::vector<std::pair<std::string, Eigen::MatrixXd>> starts;
  starts.emplace_back("uniform", Eigen::MatrixXd::Ones(opt.resolution, opt.resolution));
  std::mt19937_64 rng(opt.seed);
  std::uniform_real_distribution<double> unif(0.05, 1.0);
  for (int k = 0; k < opt.random_restarts; ++k) {
    Eigen::MatrixXd R(opt.resolution, opt.resolution);
    for (Eigen::Index j = 0; j < R.cols(); ++j)
      for (Eigen::Index i = 0; i < R.rows(); ++i) R(i, j) = unif(rng);
    starts.emplace_back("random" + std::to_string(k + 1), std::move(R));
  }
  for (auto& [name, F0] : starts) {
    long it = 0;
    bool conv = true;
    auto [F, v] = ascend(op, std::move(F0), opt, &it, &conv);
    est.iterations += it;
    est.start_values.emplace_back(name, v);
    if (v > est.value) {
      est.value = v;
      est.best_f.values = std::move(F);
      est.converged = conv;
      est.best_start = name;
    }
  }
  return est;
}

}  // namespace

// ---------------------------------------------------------------- characterize

CommandResult cmd_characterize(const RunConfig& rc, const Flags& flags) {
  CommandResult out;
  Json& j = out.report = header("characterize", rc);
  Json timings = Json::object();
  Stopwatch clock(flags.timings, timings);
  const double p = exponent_p(rc);
  const auto grid = scale_grid(p, rc.s_grid);
  Json res;
  res["s_grid"] = grid;
  Json table = Json::array();
  bool all_converged = true;

  std::function<CharacterizationValue(const ScalePoint&)> functional;
  std::optional<Problem> pb;
  std::optional<PkProblem> pk;
  if (rc.kind == ProblemKind::pk) {
    pk.emplace(rc.pk);
    res["functional"] = "D2";
    functional = [&](const ScalePoint& s) { return D2(*pk, s); };
  } else if (rc.corner) {
    pb.emplace(rc.hardy);
    res["functional"] = "corner_" + to_string(rc.corner->variant);
    res["rect"] = Json::array({rc.corner->rect.lo1, rc.corner->rect.hi1, rc.corner->rect.lo2, rc.corner->rect.hi2});
    functional = [&](const ScalePoint& s) { return rect_corner(rc.corner->variant, rc.corner->rect, *pb, s); };
  } else {
    pb.emplace(rc.hardy);
    res["functional"] = "B2";
    functional = [&](const ScalePoint& s) { return B2(*pb, s); };
  }

  // Window doubling once at the grid centre; per point only when the centre diverges.
  bool check_each = false;
  if (rc.kind == ProblemKind::hardy && !rc.corner && !rc.hardy.u.is_zero()) {
    const double mid = grid[grid.size() / 2];
    const DivergenceCheck d = B2_divergence(rc.hardy, {mid, mid});
    res["divergence"] = Json{{"s", Json::array({mid, mid})},
                             {"divergent", d.divergent},
                             {"values", d.values},
                             {"detail", d.detail}};
    check_each = d.divergent;
  }
  clock.lap("setup");

  for (double s1 : grid)
    for (double s2 : grid) {
      Json row{{"s1", s1}, {"s2", s2}};
      CharacterizationValue v;
      try {
        v = functional({s1, s2});
        if (check_each && B2_divergence(rc.hardy, {s1, s2}).divergent) {
          v.infinite = true;
          v.value = INFINITY;
          v.note = "window doubling grows the functional by more than 10% per step";
        }
      } catch (const AccuracyError& e) {
        v.value = e.best_estimate();
        v.error_estimate = e.error_estimate();
        v.converged = false;
        v.note = e.what();
      }
      all_converged = all_converged && v.converged;
      row.update(to_json(v));
      table.push_back(std::move(row));
    }
  clock.lap("functional_grid");
  res["table"] = std::move(table);
  j["results"] = std::move(res);
  if (flags.timings) j["timings"] = std::move(timings);
  out.exit_code = all_converged ? kPass : kNonconvergence;
  return out;
}

// ---------------------------------------------------------------- sandwich

CommandResult cmd_sandwich(const RunConfig& rc, const Flags& flags) {
  CommandResult out;
  Json& j = out.report = header("sandwich", rc);
  Json timings = Json::object();
  Stopwatch clock(flags.timings, timings);
  const SandwichReport sw = run_sandwich(rc);
  clock.lap("sandwich");
  j["results"] = Json{{"sandwich", to_json(sw)}};
  if (flags.timings) j["timings"] = std::move(timings);
  if (sw.lower_bound > sw.upper_bound * (1.0 + 1e-9))
    out.exit_code = kFail;
  else
    out.exit_code = sw.converged ? kPass : kNonconvergence;
  return out;
}

// ---------------------------------------------------------------- verify

CommandResult cmd_verify(const RunConfig& rc, const Flags& flags) {
  CommandResult out;
  Json& j = out.report = header("verify", rc);
  Json timings = Json::object();
  Stopwatch clock(flags.timings, timings);
  Json res;
  std::vector<Check> checks;
  bool converged = true;

  SandwichReport sw = run_sandwich(rc);
  converged = converged && sw.converged;
  clock.lap("sandwich");
  if (flags.test_scale_upper != 1.0) {
    sw.upper_bound *= flags.test_scale_upper;
    j["test_hooks"] = Json{{"scale_upper", flags.test_scale_upper}};
  }
  res["sandwich"] = to_json(sw);
  {
    Check c = at_most("bound_order", sw.lower_bound, sw.upper_bound, 1e-9);
    checks.push_back(c);
  }
  const double p = exponent_p(rc);

  if (rc.kind == ProblemKind::pk) {
    const PkProblem pk(rc.pk);
    WitnessSpec spec;
    spec.kind = WitnessSpec::Kind::thm2_pk;
    spec.s = witness_scale(sw, p, true);
    Json wj = Json::array();
    int k = 0;
    for (const auto& anchor : default_anchors(rc.pk.axis1, rc.pk.axis2, 1.0, 1.0, 4)) {
      ++k;
      spec.anchor = anchor;
      const PkWitnessCheck wc = pk_witness_check(pk, spec, 3, rc.witness_budget, rc.witness_cells);
      Json e = to_json(wc);
      e["anchor"] = to_json(anchor);
      e["s"] = to_json(spec.s);
      wj.push_back(std::move(e));
      Check c;
      c.name = "witness_chain[" + std::to_string(k) + "]";
      c.passed = wc.passed;
      c.margin = std::min(wc.rhs_margin + wc.budget, wc.budget - wc.identity_max_rel_error);
      c.detail = wc.detail;
      checks.push_back(c);
      checks.push_back(at_most("witness_containment[" + std::to_string(k) + "]", wc.ratio_floor, sw.upper_bound,
                               rc.containment_budget));
    }
    res["witness_checks"] = std::move(wj);
    clock.lap("witness");
    // The reduction identity at the centre scale point.
    const double mid = 0.5 * (p + 1.0);
    const CharacterizationValue d = D2(pk, {mid, mid});
    const CharacterizationValue b = B2(Problem(pk_reduced_config(pk)), {mid, mid});
    const double rel = d.value > 0.0 ? std::abs(d.value - b.value) / d.value : std::abs(b.value);
    res["reduction"] = Json{{"s", Json::array({mid, mid})}, {"D2", number(d.value)}, {"B2_reduced", number(b.value)},
                            {"rel_diff", number(rel)}};
    Check c;
    c.name = "reduction_identity";
    c.passed = rel <= 1e-4;
    c.margin = 1e-4 - rel;
    c.detail = "|D2 - B2(reduced)| / D2 = " + fmt(rel) + " <= 1e-4";
    checks.push_back(c);
    clock.lap("reduction");
  } else {
    const Problem pb(rc.hardy);
    NormEstimate est;
    if (rc.corner) {
      est = corner_norm(pb, *rc.corner, rc.norm);
    } else {
      est = estimate_norm(pb, rc.norm);
    }
    converged = converged && est.converged;
    res["norm_estimate"] = to_json(est, rc.norm);
    checks.push_back(at_most("containment", est.value, sw.upper_bound, rc.containment_budget));
    clock.lap("norm_estimate");

    Json wj = Json::array();
    std::vector<std::pair<WitnessSpec, std::string>> specs;
    const ScalePoint ws = witness_scale(sw, p, false);
    if (rc.corner) {
      if (rc.corner->variant == CornerVariant::AWstar) {
        const Rect& r = rc.corner->rect;
        for (double f : {0.5, 0.3, 0.7}) {
          WitnessSpec spec;
          spec.kind = WitnessSpec::Kind::lemma2_corner;
          spec.s = ws;
          spec.rect = r;
          spec.anchor = {r.lo1 + f * (r.hi1 - r.lo1), r.lo2 + (1.0 - f) * (r.hi2 - r.lo2), 0.0, 0.0};
          specs.emplace_back(spec, "corner");
        }
      }
    } else {
      for (const auto& anchor : default_anchors(rc.hardy.axis1, rc.hardy.axis2, 1.0, 1.0, 4)) {
        WitnessSpec spec;
        spec.kind = WitnessSpec::Kind::thm1_hardy;
        spec.s = ws;
        spec.anchor = anchor;
        specs.emplace_back(spec, "hardy");
      }
    }
    int k = 0;
    for (const auto& [spec, label] : specs) {
      ++k;
      const WitnessCheck wc = witness_bound_check(pb, spec, rc.witness_budget, rc.witness_cells);
      Json e = to_json(wc);
      e["kind"] = to_string(spec.kind);
      e["anchor"] = to_json(spec.anchor);
      e["s"] = to_json(spec.s);
      wj.push_back(std::move(e));
      Check c;
      c.name = "witness_chain[" + std::to_string(k) + "]";
      c.passed = wc.passed;
      c.margin = std::min(wc.lhs_margin, wc.rhs_margin) + wc.budget;
      c.detail = wc.detail;
      checks.push_back(c);
      checks.push_back(
          at_most("witness_containment[" + std::to_string(k) + "]", wc.ratio, sw.upper_bound, rc.containment_budget));
    }
    res["witness_checks"] = std::move(wj);
    clock.lap("witness");

    if (!rc.corner) {
      Json dj = Json::array();
      const GridFn uniform = GridFn::constant(est.best_f.edges1, est.best_f.edges2, 1.0);
      for (const auto& [name, f] : {std::pair<std::string, const GridFn*>{"norm_maximizer", &est.best_f},
                                    std::pair<std::string, const GridFn*>{"uniform", &uniform}}) {
        const auto s1 = covering_sequence(rc.hardy.axis1, 1.0, f->edges1.front(), f->edges1.back(), 1);
        const auto s2 = covering_sequence(rc.hardy.axis2, 1.0, f->edges2.front(), f->edges2.back(), 2);
        const QuadrantResult q = quadrant_decompose(*f, pb, s1, s2);
        Json e = to_json(q);
        e["f"] = name;
        e["k_range"] = Json::array({Json::array({s1.k_min, s1.k_max}), Json::array({s2.k_min, s2.k_max})});
        e["abutment_error"] = number(std::max(s1.abutment_error(), s2.abutment_error()));
        dj.push_back(std::move(e));
        checks.push_back(at_most("decomposition[" + name + "]", q.total_lhs, q.sum(), rc.decomposition_budget));
      }
      res["decomposition"] = std::move(dj);
      clock.lap("decomposition");
    }
  }

  Json cj = Json::array();
  Json failures = Json::array();
  bool pass = true;
  for (const auto& c : checks) {
    cj.push_back(to_json(c));
    if (!c.passed) {
      pass = false;
      failures.push_back(to_json(c));
    }
  }
  res["checks"] = std::move(cj);
  j["results"] = std::move(res);
  j["verdict"] = pass ? "PASS" : "FAIL";
  j["failures"] = std::move(failures);
  j["converged"] = converged;
  if (flags.timings) j["timings"] = std::move(timings);
  out.exit_code = !pass ? kFail : (converged ? kPass : kNonconvergence);
  return out;
}

// ---------------------------------------------------------------- sweep

std::string aggregate_csv(const std::vector<SweepRow>& rows) {
  std::ostringstream os;
  os << "param,value,lower,upper,norm_estimate,gap_ratio,verdict\n";
  auto cell = [](double x) {
    if (std::isinf(x)) return std::string(x > 0 ? "+inf" : "-inf");
    if (std::isnan(x)) return std::string("nan");
    std::ostringstream s;
    s << std::setprecision(10) << x;
    return s.str();
  };
  for (const auto& r : rows) {
    const double gap = r.lower > 0.0 ? r.upper / r.lower : INFINITY;
    os << r.param << ',' << r.value << ',' << cell(r.lower) << ',' << cell(r.upper) << ',' << cell(r.norm_estimate)
       << ',' << cell(gap) << ',' << r.verdict << '\n';
  }
  return os.str();
}

SweepResult cmd_sweep(const KeyValues& base, const SweepSpec& spec, const Flags& flags) {
  SweepResult out;
  const std::size_t n = spec.values.size();
  out.reports.resize(n);
  out.rows.resize(n);
  std::vector<int> codes(n, kPass);
  std::vector<std::string> errors(n);
  std::mutex mu;
  std::size_t next = 0;
  auto worker = [&] {
    for (;;) {
      std::size_t i = 0;
      {
        std::lock_guard<std::mutex> lock(mu);
        if (next >= n) return;
        i = next++;
      }
      KeyValues kv = base;
      kv.erase("sweep.param");
      kv.erase("sweep.values");
      kv[spec.param] = Entry{spec.values[i], 0};
      SweepRow& row = out.rows[i];
      row.param = spec.param;
      row.value = spec.values[i];
      try {
        const RunConfig rc = build_config(kv);
        CommandResult r = cmd_verify(rc, flags);
        const Json& res = r.report["results"];
        auto num = [](const Json& v) { return v.is_number() ? v.get<double>() : (v == "+inf" ? INFINITY : NAN); };
        row.lower = num(res["sandwich"]["lower_bound"]);
        row.upper = num(res["sandwich"]["upper_bound"]);
        row.norm_estimate = res.contains("norm_estimate") ? num(res["norm_estimate"]["value"]) : NAN;
        row.verdict = r.report["verdict"].get<std::string>();
        out.reports[i] = std::move(r.report);
        codes[i] = r.exit_code;
      } catch (const Error& e) {
        row.lower = row.upper = row.norm_estimate = NAN;
        row.verdict = "ERROR";
        out.reports[i] = Json{{"schema_version", kSchemaVersion}, {"command", "verify"}, {"error", e.what()}};
        codes[i] = kUsage;
      }
    }
  };
  const int jobs = std::max(1, std::min<int>(flags.jobs, static_cast<int>(std::max<std::size_t>(n, 1))));
  std::vector<std::thread> pool;
  for (int t = 1; t < jobs; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  for (int c : codes) out.exit_code = std::max(out.exit_code, c == kUsage ? kFail : c);
  out.csv = aggregate_csv(out.rows);
  return out;
}

// ---------------------------------------------------------------- oracle regeneration

CommandResult cmd_oracle_regen(const RunConfig& rc, const Flags& flags) {
#ifdef HARDYVL_WITH_ORACLE
  if (rc.kind != ProblemKind::hardy || rc.corner)
    throw ConfigError("oracle-regen supports the two-variable Hardy problem only");
  CommandResult out;
  Json& j = out.report = header("oracle-regen", rc);
  Json timings = Json::object();
  Stopwatch clock(flags.timings, timings);
  const oracle::OracleConfig oc;
  const auto grid = scale_grid(rc.hardy.exps.p, 3);
  Json b2 = Json::array();
  for (double s1 : grid)
    for (double s2 : grid)
      b2.push_back(Json{{"s1", s1}, {"s2", s2}, {"value", number(oracle::oracle_B2(rc.hardy, {s1, s2}, oc))}});
  clock.lap("oracle_B2");
  const int res = 16;
  const double ratio = oracle::oracle_ratio_search(rc.hardy, res, oc);
  clock.lap("oracle_ratio_search");
  j["results"] = Json{{"window", Json::array({oc.lo, oc.hi})},
                      {"mesh", oc.mesh},
                      {"stride", oc.stride},
                      {"B2", std::move(b2)},
                      {"ratio_search", Json{{"resolution", res}, {"value", number(ratio)}}}};
  if (flags.timings) j["timings"] = std::move(timings);
  return out;
#else
  (void)rc;
  (void)flags;
  throw ConfigError("this build has no oracle (configure with HARDYVL_WITH_ORACLE=ON)");
#endif
}

}  // namespace hardyvl::cli
