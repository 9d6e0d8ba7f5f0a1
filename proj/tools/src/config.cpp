#include "config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "hardyvl/error.hpp"

namespace hardyvl::cli {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream is(s);
  while (std::getline(is, item, sep)) out.push_back(trim(item));
  return out;
}

double to_number(const std::string& s) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    throw DomainError("'" + s + "' is not a number");
  }
  if (used != s.size()) throw DomainError("'" + s + "' is not a number");
  return v;
}

std::vector<double> numbers(const std::string& s) {
  std::vector<double> out;
  for (const auto& item : split(s, ',')) out.push_back(to_number(item));
  return out;
}

// Tracks which keys were consumed so unknown keys can be reported.
class Reader {
 public:
  explicit Reader(const KeyValues& kv) : kv_(kv) {}

  const Entry* find(const std::string& key) {
    used_.insert(key);
    auto it = kv_.find(key);
    return it == kv_.end() ? nullptr : &it->second;
  }

  template <class F>
  auto with(const std::string& key, F&& parse) -> std::optional<decltype(parse(std::string{}))> {
    const Entry* e = find(key);
    if (!e) return std::nullopt;
    try {
      return parse(e->value);
    } catch (const ConfigError&) {
      throw;
    } catch (const Error& err) {
      throw ConfigError("key '" + key + "': " + err.what(), e->line);
    }
  }

  double number(const std::string& key, double fallback) {
    return with(key, to_number).value_or(fallback);
  }
  int integer(const std::string& key, int fallback) {
    const auto v = with(key, to_number);
    if (!v) return fallback;
    if (*v != std::floor(*v)) throw ConfigError("key '" + key + "': expected an integer", kv_.at(key).line);
    return static_cast<int>(*v);
  }
  bool flag(const std::string& key, bool fallback) {
    return with(key, [](const std::string& s) {
             if (s == "true" || s == "1" || s == "yes") return true;
             if (s == "false" || s == "0" || s == "no") return false;
             throw DomainError("expected true or false");
           })
        .value_or(fallback);
  }
  std::string text(const std::string& key, const std::string& fallback) {
    const Entry* e = find(key);
    return e ? e->value : fallback;
  }

  void reject_unknown() const {
    for (const auto& [k, e] : kv_)
      if (!used_.count(k)) throw ConfigError("unknown key '" + k + "'", e.line);
  }

 private:
  const KeyValues& kv_;
  std::set<std::string> used_;
};

Weight2D read_u(Reader& r) {
  const std::string kind = r.text("weights.u.kind", "power_pair");
  Weight2D u;
  if (kind == "zero") {
    u = Weight2D::zero();
  } else if (kind == "unit") {
    u = Weight2D::unit();
  } else if (kind == "separable") {
    u = Weight2D::separable(r.with("weights.u.u1", parse_weight1d).value_or(Weight1D::unit()),
                            r.with("weights.u.u2", parse_weight1d).value_or(Weight1D::unit()));
  } else if (kind == "power_pair") {
    const double beta = r.number("weights.u.beta", 0.0), gamma = r.number("weights.u.gamma", beta);
    const double bump = r.number("weights.u.bump", 0.0);
    if (bump == 0.0) {
      u = Weight2D::power_pair(beta, gamma);
    } else {
      if (!(bump > 0.0)) throw ConfigError("weights.u.bump must be non-negative");
      std::ostringstream label;
      label << "x1^" << beta << " x2^" << gamma << " (1 + " << bump << " exp(-ln^2(x1/x2)))";
      u = Weight2D::derived(
          [beta, gamma, bump](double x1, double x2) {
            const double l = std::log(x1 / x2);
            return std::pow(x1, beta) * std::pow(x2, gamma) * (1.0 + bump * std::exp(-l * l));
          },
          label.str());
    }
  } else {
    throw ConfigError("weights.u.kind must be one of zero, unit, separable, power_pair (got '" + kind + "')");
  }
  const double scale = r.number("weights.u.scale", 1.0);
  if (!(scale >= 0.0)) throw ConfigError("weights.u.scale must be non-negative");
  return scale == 1.0 ? u : u.scaled(scale);
}

Weight2D read_pk_v(Reader& r) {
  const std::string kind = r.text("weights.v.kind", "unit");
  if (kind == "unit") return Weight2D::unit();
  if (kind == "power_pair") {
    const double beta = r.number("weights.v.beta", 0.0);
    return Weight2D::power_pair(beta, r.number("weights.v.gamma", beta));
  }
  if (kind == "separable")
    return Weight2D::separable(r.with("weights.v.v1", parse_weight1d).value_or(Weight1D::unit()),
                               r.with("weights.v.v2", parse_weight1d).value_or(Weight1D::unit()));
  throw ConfigError("weights.v.kind must be one of unit, power_pair, separable (got '" + kind + "')");
}

Window read_window(Reader& r, const std::string& axis, const Window& base) {
  Window w;
  w.eps = r.number("window." + axis + ".eps", base.eps);
  w.X = r.number("window." + axis + ".X", base.X);
  return w;
}

CornerVariant parse_variant(const std::string& s) {
  for (CornerVariant v : {CornerVariant::AW, CornerVariant::AWstar, CornerVariant::AWtilde, CornerVariant::AWtilde_star})
    if (to_string(v) == s) return v;
  throw DomainError("corner.variant must be one of AW, AWstar, AWtilde, AWtilde_star");
}

}  // namespace

KeyValues parse_key_values(const std::string& text, const std::string& source) {
  KeyValues kv;
  std::istringstream is(text);
  std::string raw;
  int line = 0;
  while (std::getline(is, raw)) {
    ++line;
    std::string s = raw;
    bool quoted = false;
    for (std::size_t i = 0; i < s.size(); ++i) {
      if (s[i] == '"') quoted = !quoted;
      if (s[i] == '#' && !quoted) {
        s.resize(i);
        break;
      }
    }
    s = trim(s);
    if (s.empty()) continue;
    const auto eq = s.find('=');
    if (eq == std::string::npos)
      throw ConfigError(source + ":" + std::to_string(line) + ": expected 'key = value'", line);
    const std::string key = trim(s.substr(0, eq));
    std::string value = trim(s.substr(eq + 1));
    if (key.empty()) throw ConfigError(source + ":" + std::to_string(line) + ": empty key", line);
    if (value.size() >= 2 && value.front() == '"' && value.back() == '"') value = value.substr(1, value.size() - 2);
    if (kv.count(key))
      throw ConfigError(source + ":" + std::to_string(line) + ": duplicate key '" + key + "' (first on line " +
                            std::to_string(kv[key].line) + ")",
                        line);
    kv[key] = Entry{value, line};
  }
  return kv;
}

KeyValues read_key_values(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_key_values(ss.str(), path);
}

MonotoneMap parse_map(const std::string& text) {
  const auto colon = text.find(':');
  const std::string kind = trim(text.substr(0, colon));
  const auto args = colon == std::string::npos ? std::vector<double>{} : numbers(text.substr(colon + 1));
  if (kind == "linear" && args.size() == 1) return MonotoneMap::linear(args[0]);
  if (kind == "power" && args.size() == 2) return MonotoneMap::power(args[0], args[1]);
  if (kind == "identity" && args.empty()) return MonotoneMap::linear(1.0);
  throw DomainError("boundary descriptor must be linear:c, power:c,r or identity (got '" + text + "')");
}

Weight1D parse_weight1d(const std::string& text) {
  const auto colon = text.find(':');
  const std::string kind = trim(text.substr(0, colon));
  const auto args = colon == std::string::npos ? std::vector<double>{} : numbers(text.substr(colon + 1));
  if (kind == "unit" && args.empty()) return Weight1D::unit();
  if (kind == "power" && args.size() == 1) return Weight1D::power(args[0]);
  if (kind == "exp_scaled" && args.size() == 2) return Weight1D::exp_scaled(args[0], args[1]);
  throw DomainError("weight descriptor must be unit, power:alpha or exp_scaled:alpha,beta (got '" + text + "')");
}

RunConfig build_config(const KeyValues& kv) {
  Reader r(kv);
  RunConfig rc;
  rc.source = kv;
  const std::string problem = r.text("problem", "hardy");
  if (problem == "hardy") {
    rc.kind = ProblemKind::hardy;
  } else if (problem == "pk") {
    rc.kind = ProblemKind::pk;
  } else {
    throw ConfigError("problem must be hardy or pk (got '" + problem + "')", kv.at("problem").line);
  }

  Exponents exps;
  exps.p = r.number("exponents.p", 2.0);
  exps.q = r.number("exponents.q", exps.p);
  auto boundary = [&](const std::string& axis) {
    const MonotoneMap a = r.with("boundaries." + axis + ".a", parse_map).value_or(MonotoneMap::linear(0.5));
    const MonotoneMap b = r.with("boundaries." + axis + ".b", parse_map).value_or(MonotoneMap::linear(1.0));
    try {
      return BoundaryPair(a, b);
    } catch (const Error& e) {
      throw ConfigError("boundaries." + axis + ": " + e.what());
    }
  };
  const BoundaryPair ax1 = boundary("axis1"), ax2 = boundary("axis2");
  Window base;
  base.eps = r.number("window.eps", base.eps);
  base.X = r.number("window.X", base.X);
  const Window w1 = read_window(r, "axis1", base), w2 = read_window(r, "axis2", base);

  Tolerances tols;
  tols.quad_1d = r.number("tolerances.quad_1d", tols.quad_1d);
  tols.quad_2d = r.number("tolerances.quad_2d", tols.quad_2d);
  tols.search_inner = r.number("tolerances.search_inner", tols.search_inner);
  tols.search_final = r.number("tolerances.search_final", tols.search_final);
  SearchOptions search;
  search.t_grid = r.integer("search.t_grid", search.t_grid);
  search.x_grid = r.integer("search.x_grid", search.x_grid);
  search.exploit_separability = r.flag("search.separable", search.exploit_separability);
  rc.s_grid = r.integer("search.s_grid", rc.s_grid);
  rc.sandwich.s_grid = r.integer("sandwich.s_grid", rc.s_grid);
  rc.sandwich.polish = r.flag("sandwich.polish", rc.sandwich.polish);
  if (rc.s_grid < 1 || rc.sandwich.s_grid < 2) throw ConfigError("s-grids need at least 2 points (characterize: 1)");

  rc.seed = static_cast<std::uint64_t>(r.integer("seed", 1));
  rc.norm.resolution = r.integer("norm.resolution", rc.norm.resolution);
  rc.norm.grid_lo = r.number("norm.grid_lo", rc.norm.grid_lo);
  rc.norm.grid_hi = r.number("norm.grid_hi", rc.norm.grid_hi);
  rc.norm.random_restarts = r.integer("norm.restarts", rc.norm.random_restarts);
  rc.norm.max_iters = r.integer("norm.max_iters", rc.norm.max_iters);
  rc.norm.seed = rc.seed;
  rc.containment_budget = r.number("verify.containment_budget", rc.containment_budget);
  rc.witness_budget = r.number("verify.witness_budget", rc.witness_budget);
  rc.decomposition_budget = r.number("verify.decomposition_budget", rc.decomposition_budget);
  rc.witness_cells = r.integer("verify.witness_cells", rc.witness_cells);

  if (r.find("corner.variant")) {
    CornerSpec cs;
    cs.variant = *r.with("corner.variant", parse_variant);
    const auto v = r.with("corner.rect", numbers);
    if (!v || v->size() != 4) throw ConfigError("corner.rect must list c1,d1,c2,d2", kv.at("corner.variant").line);
    cs.rect = Rect{(*v)[0], (*v)[1], (*v)[2], (*v)[3]};
    rc.corner = cs;
  } else if (r.find("corner.rect")) {
    throw ConfigError("corner.rect given without corner.variant", kv.at("corner.rect").line);
  }

  if (r.find("sweep.param")) {
    SweepSpec sw;
    sw.param = kv.at("sweep.param").value;
    const std::string vals = r.text("sweep.values", "");
    if (!vals.empty()) sw.values = split(vals, ',');
    rc.sweep = sw;
  } else {
    r.find("sweep.values");
  }

  try {
    if (rc.kind == ProblemKind::hardy) {
      ProblemConfig& c = rc.hardy;
      c.exps = exps;
      c.u = read_u(r);
      c.v1 = r.with("weights.v1", parse_weight1d).value_or(Weight1D::unit());
      c.v2 = r.with("weights.v2", parse_weight1d).value_or(Weight1D::unit());
      c.axis1 = ax1;
      c.axis2 = ax2;
      c.window1 = w1;
      c.window2 = w2;
      c.tols = tols;
      c.search = search;
      r.reject_unknown();
      Problem check(c);
    } else {
      PkConfig& c = rc.pk;
      c.exps = exps;
      c.u = read_u(r);
      c.v = read_pk_v(r);
      c.axis1 = ax1;
      c.axis2 = ax2;
      c.window1 = w1;
      c.window2 = w2;
      c.tols = tols;
      c.search = search;
      r.reject_unknown();
      if (!(exps.p > 0.0)) throw DomainError("p must be positive");
      if (!(exps.q >= exps.p)) throw DomainError("q must be at least p");
    }
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    throw ConfigError(e.what());
  }
  return rc;
}

std::string render(const KeyValues& kv) {
  std::ostringstream os;
  for (const auto& [k, e] : kv) os << k << " = " << e.value << '\n';
  return os.str();
}

}  // namespace hardyvl::cli
