// Exit gate: one PASS/FAIL line per acceptance criterion. Optional arguments select criteria
// by number; the exit status is nonzero when any selected criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_dec_float.hpp>

#include "commands.hpp"
#include "config.hpp"
#include "hardyvl/bounds.hpp"
#include "hardyvl/charf.hpp"
#include "hardyvl/error.hpp"
#include "hardyvl/ops.hpp"
#include "hardyvl/oracle.hpp"
#include "hardyvl/partition.hpp"
#include "hardyvl/witness.hpp"

using namespace hardyvl;

namespace {

// Pinned tolerances and runtime budgets.
constexpr double kContainmentSlack = 1e-2;
constexpr double kWitnessMargin = -1e-3;
constexpr double kFactorTol = 1e-10;
constexpr double kOracleRel = 1e-2;
constexpr double kSeparabilityRel = 1e-4;
constexpr double kReductionRel = 1e-4;
constexpr double kJensenSlack = 1e-12;
constexpr double kAbutmentTol = 1e-10;
constexpr double kDecompositionSlack = 1e-3;
constexpr double kVRel = 1e-8;
constexpr double kBudget1 = 300.0, kBudget2 = 60.0, kBudget4 = 600.0;

struct Outcome {
  bool passed = true;
  std::string detail;
};

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(6);
  os << x;
  return os.str();
}

cli::RunConfig load(const std::string& name) {
  return cli::build_config(cli::read_key_values(std::string(HARDYVL_TEST_CONFIG_DIR) + "/" + name + ".cfg"));
}

const std::vector<std::string> kSuite = {"suite1", "suite2", "suite3", "suite4", "suite5", "suite6"};

// Shared by criteria 1 and 2; the first caller pays for the optimizers.
std::vector<SandwichReport>& suite_sandwiches() {
  static std::vector<SandwichReport> cache;
  if (cache.empty())
    for (const auto& name : kSuite) cache.push_back(sandwich_hardy(Problem(load(name).hardy)));
  return cache;
}

Outcome criterion1() {
  Outcome o;
  double worst = INFINITY;
  for (std::size_t i = 0; i < kSuite.size(); ++i) {
    const cli::RunConfig rc = load(kSuite[i]);
    const Problem pb(rc.hardy);
    const SandwichReport& sw = suite_sandwiches()[i];
    NormOptions opt = rc.norm;
    opt.resolution = 64;
    const NormEstimate est = estimate_norm(pb, opt);
    const bool ok = est.value <= sw.upper_bound * (1.0 + kContainmentSlack) && sw.lower_bound <= sw.upper_bound;
    worst = std::min(worst, sw.upper_bound * (1.0 + kContainmentSlack) / est.value - 1.0);
    o.passed = o.passed && ok;
    if (!ok) o.detail += kSuite[i] + " estimate " + fmt(est.value) + " vs upper " + fmt(sw.upper_bound) + "; ";
  }
  o.detail += "6 configs at 64^2, smallest headroom " + fmt(worst);
  return o;
}

Outcome criterion2() {
  Outcome o;
  double worst = INFINITY;
  int count = 0;
  for (std::size_t i = 0; i < kSuite.size(); ++i) {
    const Problem pb(load(kSuite[i]).hardy);
    const double p = pb.exps().p;
    const ScalePoint s = suite_sandwiches()[i].s_at_lower;
    for (const SearchPoint& a : default_anchors(pb.boundary(1), pb.boundary(2), 1.0, 1.0, 4)) {
      WitnessSpec spec;
      spec.kind = WitnessSpec::Kind::thm1_hardy;
      spec.s = (s.s1 > 1.0 && s.s1 < p && s.s2 > 1.0 && s.s2 < p) ? s : ScalePoint{0.5 * (p + 1), 0.5 * (p + 1)};
      spec.anchor = a;
      const WitnessCheck w = witness_bound_check(pb, spec, 1e-3);
      const double margin = std::min(w.lhs_margin, w.rhs_margin);
      worst = std::min(worst, margin);
      ++count;
      if (!(margin >= kWitnessMargin)) {
        o.passed = false;
        o.detail += kSuite[i] + " anchor " + std::to_string(count) + " margin " + fmt(margin) + "; ";
      }
    }
  }
  o.detail += std::to_string(count) + " anchors, worst margin " + fmt(worst);
  return o;
}

Outcome criterion3() {
  // Independent evaluation with 50 significant digits from the closed forms.
  using Big = boost::multiprecision::cpp_dec_float_50;
  const Big s("1.5"), p("2");
  const Big r = p / (p - s);
  const Big low1 = pow(pow(r, p) / (pow(r, p) + 1 / (s - 1)), 1 / p);
  const Big up1 = pow((p - 1) / (p - s), (p - 1) / p);
  const Big e = exp(s) * (s - 1);
  const Big pk1 = pow(e / (e + 1), 1 / p);
  const double ref_low = static_cast<double>(low1 * low1), ref_up = static_cast<double>(up1 * up1),
               ref_pk = static_cast<double>(pk1 * pk1);
  const ScalePoint sp{1.5, 1.5};
  const double dl = std::abs(lower_factor(2.0, sp) - ref_low), du = std::abs(upper_factor(2.0, sp) - ref_up),
               dp = std::abs(pk_lower_factor(2.0, sp) - ref_pk);
  Outcome o;
  o.passed = dl <= kFactorTol && du <= kFactorTol && dp <= kFactorTol && std::abs(ref_low - 8.0 / 9.0) <= kFactorTol &&
             std::abs(ref_up - 2.0) <= kFactorTol && std::abs(ref_pk - 0.691439) <= 1e-6;
  o.detail = "8/9 err " + fmt(dl) + ", 2 err " + fmt(du) + ", " + fmt(ref_pk) + " err " + fmt(dp);
  return o;
}

Outcome criterion4() {
  Outcome o;
  double worst = 0.0;
  for (const std::string name : {"suite1", "suite5", "oracle_c"}) {
    ProblemConfig cfg = load(name).hardy;
    cfg.window1 = cfg.window2 = Window{1e-2, 1e2};
    const Problem pb(cfg);
    for (double s1 : {1.25, 1.5, 1.75})
      for (double s2 : {1.25, 1.5, 1.75}) {
        const ScalePoint s{s1, s2};
        const double fast = B2(pb, s).value;
        const double slow = oracle::oracle_B2(cfg, s);
        const double rel = std::abs(fast - slow) / slow;
        worst = std::max(worst, rel);
        if (!(rel <= kOracleRel)) {
          o.passed = false;
          o.detail += name + " s=(" + fmt(s1) + "," + fmt(s2) + ") B2 " + fmt(fast) + " oracle " + fmt(slow) + "; ";
        }
      }
  }
  o.detail += "27 points, worst relative difference " + fmt(worst);
  return o;
}

Outcome criterion5() {
  Outcome o;
  double worst = 0.0;
  for (const std::string name : {"suite1", "suite3"}) {
    ProblemConfig cfg = load(name).hardy;
    cfg.search.exploit_separability = false;
    const Problem pb(cfg);
    const Problem1D p1(restrict_to_axis(cfg, 1, Weight1D::power(cfg.u.beta())));
    const Problem1D p2(restrict_to_axis(cfg, 2, Weight1D::power(cfg.u.gamma())));
    for (const ScalePoint s : {ScalePoint{1.5, 1.5}, ScalePoint{1.25, 1.75}}) {
      const double b2 = B2(pb, s).value;
      const double prod = B1(p1, s.s1).value * B1(p2, s.s2).value;
      const double rel = std::abs(b2 - prod) / b2;
      worst = std::max(worst, rel);
      if (!(rel <= kSeparabilityRel)) {
        o.passed = false;
        o.detail += name + " B2 " + fmt(b2) + " product " + fmt(prod) + "; ";
      }
    }
  }
  o.detail += "2 configs x 2 scale points, worst relative difference " + fmt(worst);
  return o;
}

Outcome criterion6() {
  Outcome o;
  double worst = 0.0;
  for (const std::string name : {"pk1", "pk2"}) {
    const PkProblem pk(load(name).pk);
    const Problem reduced(pk_reduced_config(pk));
    for (const ScalePoint s : {ScalePoint{1.5, 1.5}, ScalePoint{1.25, 1.75}}) {
      const double d2 = D2(pk, s).value, b2 = B2(reduced, s).value;
      const double rel = std::abs(d2 - b2) / d2;
      worst = std::max(worst, rel);
      if (!(rel <= kReductionRel)) {
        o.passed = false;
        o.detail += name + " D2 " + fmt(d2) + " B2 " + fmt(b2) + "; ";
      }
    }
  }
  o.detail += "2 configs x 2 scale points, worst relative difference " + fmt(worst);
  return o;
}

Outcome criterion7() {
  std::mt19937_64 rng(20240607);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const BoundaryPair ax1(MonotoneMap::linear(0.5), MonotoneMap::linear(1.0));
  const BoundaryPair ax2(MonotoneMap::linear(2.0 / 3.0), MonotoneMap::linear(1.0));
  int violations = 0, evaluated = 0;
  double worst = -INFINITY;
  for (int k = 0; k < 20; ++k) {
    const int n1 = 3 + static_cast<int>(unit(rng) * 10), n2 = 3 + static_cast<int>(unit(rng) * 10);
    GridFn f;
    f.edges1 = geometric_edges(0.1 + unit(rng), 10.0 + 10.0 * unit(rng), n1);
    f.edges2 = geometric_edges(0.1 + unit(rng), 10.0 + 10.0 * unit(rng), n2);
    f.values = Eigen::MatrixXd(n1, n2);
    for (int i = 0; i < n1; ++i)
      for (int j = 0; j < n2; ++j) f.values(i, j) = std::exp(4.0 * (unit(rng) - 0.5));
    for (int m = 0; m < 100; ++m) {
      // x inside the range where the box meets the support
      const double x1 = f.edges1.front() * std::pow(2.0 * f.edges1.back() / f.edges1.front(), unit(rng));
      const double x2 = f.edges2.front() * std::pow(1.5 * f.edges2.back() / f.edges2.front(), unit(rng));
      const double area = (x1 - 0.5 * x1) * (x2 - 2.0 / 3.0 * x2);
      const double g = apply_G2(f, ax1, ax2, x1, x2), h = apply_H2(f, ax1, ax2, x1, x2) / area;
      worst = std::max(worst, g - h);
      ++evaluated;
      if (g > h + kJensenSlack) ++violations;
    }
  }
  Outcome o;
  o.passed = violations == 0;
  o.detail = std::to_string(evaluated) + " points, " + std::to_string(violations) +
             " violations, max G2 - H2/area " + fmt(worst);
  return o;
}

Outcome criterion8() {
  Outcome o;
  double worst_abut = 0.0;
  const std::vector<BoundaryPair> pairs = {
      BoundaryPair(MonotoneMap::linear(0.5), MonotoneMap::linear(1.0)),
      BoundaryPair(MonotoneMap::linear(2.0 / 3.0), MonotoneMap::linear(1.0)),
      BoundaryPair(MonotoneMap::linear(1.0 / 3.0), MonotoneMap::linear(0.5))};
  for (const BoundaryPair& pair : pairs) {
    const LimitSequence seq = build_sequence(pair, 1.0, -10, 10, Window{1e-300, 1e300});
    for (int k = -10; k < 10; ++k)
      worst_abut = std::max(worst_abut, std::abs(pair.a()(seq.at(k + 1)) - pair.b()(seq.at(k))));
    if (seq.truncated_low || seq.truncated_high) o.passed = false;
  }
  if (!(worst_abut <= kAbutmentTol)) o.passed = false;

  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  double worst_ratio = 0.0;
  int cases = 0;
  for (const std::string name : {"suite1", "suite3", "suite6"}) {
    const cli::RunConfig rc = load(name);
    const Problem pb(rc.hardy);
    const std::vector<double> edges = geometric_edges(0.1, 10.0, 16);
    const LimitSequence s1 = covering_sequence(pb.boundary(1), 1.0, 0.1, 10.0, 1);
    const LimitSequence s2 = covering_sequence(pb.boundary(2), 1.0, 0.1, 10.0, 2);
    std::vector<GridFn> fs;
    fs.push_back(GridFn::constant(edges, edges, 1.0));
    GridFn r = GridFn::constant(edges, edges, 1.0);
    for (int i = 0; i < r.cells1(); ++i)
      for (int j = 0; j < r.cells2(); ++j) r.values(i, j) = unit(rng);
    fs.push_back(r);
    NormOptions opt = rc.norm;
    opt.resolution = 16;
    opt.grid_lo = 0.1;
    opt.grid_hi = 10.0;
    fs.push_back(estimate_norm(pb, opt).best_f);
    for (const GridFn& f : fs) {
      const QuadrantResult q = quadrant_decompose(f, pb, s1, s2);
      ++cases;
      worst_ratio = std::max(worst_ratio, q.total_lhs / q.sum());
      if (!q.holds(kDecompositionSlack)) {
        o.passed = false;
        o.detail += name + " total " + fmt(q.total_lhs) + " > sum " + fmt(q.sum()) + "; ";
      }
    }
  }
  o.detail += "abutment error " + fmt(worst_abut) + " on 3 pairs; " + std::to_string(cases) +
              " decompositions, max total/sum " + fmt(worst_ratio);
  return o;
}

Outcome criterion9() {
  Outcome o;
  double worst = 0.0;
  const Window w{1e-6, 1e6};
  for (double p : {1.5, 2.0, 3.0})
    for (double alpha : {0.0, 0.5, -0.4, 1.5}) {
      const double e = 1.0 + alpha * (1.0 - p / (p - 1.0));
      if (e <= 0.0) continue;
      const VFunction V = build_V(Weight1D::power(alpha), p, w, 512);
      for (double t : {1e-7, 3e-6, 1e-3, 0.7, 1.0, 12.3, 4e4, 9.9e5}) {
        const double exact = std::pow(t, e) / e;
        worst = std::max(worst, std::abs(V(t) - exact) / exact);
      }
    }
  if (!(worst <= kVRel)) o.passed = false;
  int rejected = 0;
  for (const auto& [alpha, p] : std::vector<std::pair<double, double>>{{1.0, 2.0}, {3.0, 2.0}, {3.0, 3.0}}) {
    try {
      build_V(Weight1D::power(alpha), p, w, 512, "v1");
    } catch (const IntegrabilityError& err) {
      if (std::string(err.what()).find("v1") != std::string::npos) ++rejected;
    }
  }
  if (rejected != 3) o.passed = false;
  o.detail = "max relative error " + fmt(worst) + "; " + std::to_string(rejected) + "/3 divergent cases rejected";
  return o;
}

Outcome criterion10() {
  Outcome o;
  cli::Flags flags;
  flags.resolution = 16;
  const cli::KeyValues kv = cli::apply_flags(
      cli::read_key_values(std::string(HARDYVL_TEST_CONFIG_DIR) + "/suite1.cfg"), flags);
  const cli::RunConfig rc = cli::build_config(kv);
  const std::string first = cli::dump(cli::cmd_verify(rc, flags).report);
  const std::string second = cli::dump(cli::cmd_verify(rc, flags).report);
  const bool identical = first == second;
  flags.test_scale_upper = 0.01;
  const cli::CommandResult bad = cli::cmd_verify(rc, flags);
  bool named = false;
  for (const auto& f : bad.report["failures"])
    if (f["name"] == "containment") named = true;
  const bool flipped = bad.report["verdict"] == "FAIL" && bad.exit_code == cli::kFail;
  o.passed = identical && named && flipped;
  o.detail = std::string(identical ? "reports byte-identical" : "reports differ") + "; fault injection " +
             (flipped ? "FAIL" : "did not fail") + (named ? " naming containment" : " without containment");
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  struct Entry {
    int id;
    const char* name;
    std::function<Outcome()> run;
    double budget;
  };
  const std::vector<Entry> all = {
      {1, "sandwich containment", criterion1, kBudget1}, {2, "witness chain", criterion2, kBudget2},
      {3, "constant factors", criterion3, 0},            {4, "oracle agreement", criterion4, kBudget4},
      {5, "separability", criterion5, 0},                {6, "geometric-mean reduction", criterion6, 0},
      {7, "Jensen property", criterion7, 0},             {8, "partition", criterion8, 0},
      {9, "V exactness", criterion9, 0},                 {10, "determinism and fault injection", criterion10, 0}};
  std::set<int> selected;
  for (int i = 1; i < argc; ++i) selected.insert(std::atoi(argv[i]));

  int failures = 0;
  for (const Entry& e : all) {
    if (!selected.empty() && !selected.count(e.id)) continue;
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = e.run();
    } catch (const std::exception& ex) {
      o.passed = false;
      o.detail = std::string("exception: ") + ex.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (e.budget > 0 && secs > e.budget) {
      o.passed = false;
      o.detail += "; over the " + fmt(e.budget) + " s budget";
    }
    std::printf("criterion %2d %-32s %s  %s (%.1f s)\n", e.id, e.name, o.passed ? "PASS" : "FAIL", o.detail.c_str(),
                secs);
    std::fflush(stdout);
    if (!o.passed) ++failures;
  }
  return failures == 0 ? 0 : 1;
}
