#include "hardyvl/quad.hpp"

#include <array>
#include <cmath>
#include <mutex>
#include <numbers>

namespace hardyvl {

namespace {

GaussRule make_rule(int n) {
  GaussRule r;
  r.nodes.resize(n);
  r.weights.resize(n);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = pk;
      }
      if (n == 1) {
        p1 = x;
        p0 = 1.0;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    if (n == 1) {
      r.nodes[0] = 0.0;
      r.weights[0] = 2.0;
      break;
    }
    double p0 = 1.0, p1 = x;
    for (int k = 2; k <= n; ++k) {
      const double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = pk;
    }
    dp = n * (x * p1 - p0) / (x * x - 1.0);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    r.nodes[i] = -x;
    r.nodes[n - 1 - i] = x;
    r.weights[i] = w;
    r.weights[n - 1 - i] = w;
  }
  if (n % 2 == 1 && n > 1) r.nodes[n / 2] = 0.0;
  return r;
}

}  // namespace

const GaussRule& gauss_legendre(int n) {
  if (n < 1 || n > 64) throw DomainError("gauss_legendre supports 1..64 points");
  static std::array<GaussRule, 65> rules;
  static std::array<std::once_flag, 65> flags;
  std::call_once(flags[n], [n] { rules[n] = make_rule(n); });
  return rules[n];
}

double VFunction::operator()(double t) const {
  if (knots_.empty()) throw DomainError("VFunction is not built");
  if (t <= 0.0) {
    if (t == 0.0) return 0.0;
    throw DomainError("V evaluated at negative argument " + format_number(t));
  }
  if (t > knots_.back() * (1 + 1e-12))
    throw DomainError("V evaluated at " + format_number(t) + " above its window end " + format_number(knots_.back()));
  if (t <= knots_.front()) return cum_.front() * std::pow(t / knots_.front(), head_exponent_);
  const double u = (std::log(t) - lk_.front()) / dl_;
  const std::size_t n = knots_.size();
  std::size_t k = static_cast<std::size_t>(std::max(0.0, std::floor(u)));
  if (k > n - 2) k = n - 2;
  const double tau = std::clamp(u - static_cast<double>(k), 0.0, 1.0);
  const double t2 = tau * tau, t3 = t2 * tau;
  const double h00 = 2 * t3 - 3 * t2 + 1, h10 = t3 - 2 * t2 + tau, h01 = -2 * t3 + 3 * t2, h11 = t3 - t2;
  const double l = h00 * lv_[k] + h10 * dl_ * slope_[k] + h01 * lv_[k + 1] + h11 * dl_ * slope_[k + 1];
  return std::exp(l);
}

double VFunction::diff(double c, double d) const { return V_diff(*this, c, d); }

double V_diff(const VFunction& V, double c, double d) {
  if (c < 0.0 || d > V.upper() * (1 + 1e-12))
    throw DomainError("V_diff arguments [" + format_number(c) + ", " + format_number(d) + "] outside [0, " +
                      format_number(V.upper()) + "]");
  if (c > d) throw DomainError("V_diff requires c <= d");
  if (c == d) return 0.0;
  return std::max(0.0, V(d) - V(c));
}

VFunction build_V(const Weight1D& v, double p, const Window& window, int knot_count, const std::string& name) {
  if (!(p > 1.0)) throw DomainError("V transform requires p > 1 (got p=" + format_number(p) + ")");
  window.validate();
  if (knot_count < 4) throw DomainError("V transform needs at least 4 knots");
  const double e = 1.0 - p / (p - 1.0);  // 1 - p'
  const auto not_integrable = [&](double sigma) {
    return IntegrabilityError(name + " not integrable at 0 for p=" + format_number(p) + " (local exponent " +
                              format_number(sigma) + " <= -1)");
  };

  VFunction V;
  V.p_ = p;
  V.source_ = v;
  const double k0 = window.eps, kn = window.X;

  // Integrand v^{1-p'} with a power-law continuation below a sampled table.
  double sampled_sigma = 0.0;
  if (v.kind() == Weight1D::Kind::sampled) {
    if (kn > v.domain_hi() * (1 + 1e-12))
      throw DomainError(name + " sampled table ends at " + format_number(v.domain_hi()) + " below the window end " +
                        format_number(kn));
    const auto& xs = v.abscissas();
    const auto& vs = v.values();
    const double slope = (std::log(vs[1]) - std::log(vs[0])) / (std::log(xs[1]) - std::log(xs[0]));
    sampled_sigma = slope * e;
    if (sampled_sigma <= -1.0) throw not_integrable(sampled_sigma);
  }
  const auto integrand = [&](double x) -> double {
    if (v.kind() == Weight1D::Kind::sampled && x < v.domain_lo()) {
      const double x0 = v.domain_lo();
      return std::pow(v(x0), e) * std::pow(x / x0, sampled_sigma);
    }
    return std::pow(v(x), e);
  };

  double head = 0.0;
  switch (v.kind()) {
    case Weight1D::Kind::power: {
      const double sigma = v.alpha() * e;
      if (sigma <= -1.0) throw not_integrable(sigma);
      head = std::pow(k0, sigma + 1.0) / (sigma + 1.0);
      V.head_exponent_ = sigma + 1.0;
      break;
    }
    case Weight1D::Kind::exp_scaled: {
      const double sigma = v.alpha() * e;
      if (sigma <= -1.0) throw not_integrable(sigma);
      const double be = v.beta() * e, inv = 1.0 / (sigma + 1.0);
      // x = k0 r^{1/(sigma+1)} turns x^sigma dx into a constant multiple of dr.
      auto h = [&](double r) { return std::exp(be * k0 * std::pow(r, inv)); };
      head = std::pow(k0, sigma + 1.0) * inv * integrate_1d(h, 0.0, 1.0, 1e-13).value;
      V.head_exponent_ = sigma + 1.0;
      break;
    }
    case Weight1D::Kind::sampled: {
      const double x0 = v.domain_lo(), s1 = sampled_sigma + 1.0;
      if (k0 <= x0) {
        head = k0 * integrand(k0) / s1;
      } else {
        head = x0 * integrand(x0) / s1 + integrate_1d(integrand, x0, k0, 1e-13).value;
      }
      V.head_exponent_ = s1;
      break;
    }
  }

  const int n = knot_count;
  V.knots_.resize(n);
  V.lk_.resize(n);
  V.dl_ = std::log(kn / k0) / (n - 1);
  for (int i = 0; i < n; ++i) {
    V.lk_[i] = std::log(k0) + i * V.dl_;
    V.knots_[i] = (i == 0) ? k0 : (i == n - 1 ? kn : std::exp(V.lk_[i]));
  }
  V.cum_.resize(n);
  long double acc = head;
  V.cum_[0] = head;
  for (int i = 0; i + 1 < n; ++i) {
    acc += integrate_1d(integrand, V.knots_[i], V.knots_[i + 1], 1e-13).value;
    V.cum_[i + 1] = static_cast<double>(acc);
  }
  if (!std::isfinite(V.cum_.back()) || !(head > 0.0)) throw not_integrable(-1.0);

  if (v.kind() == Weight1D::Kind::sampled) {
    // Window-shrink check: extending the window from eps to eps/4 must not move V by more than 5%.
    const double shrink = head * (1.0 - std::pow(0.25, V.head_exponent_));
    const double span = V.cum_.back() - head;
    if (span > 0.0 && shrink / span > 0.05)
      throw IntegrabilityError(name + " likely not integrable at 0 for p=" + format_number(p) +
                               ": extending the window to eps/4 changes V by " +
                               format_number(100.0 * shrink / span) + "%");
  }

  V.lv_.resize(n);
  for (int i = 0; i < n; ++i) V.lv_[i] = std::log(V.cum_[i]);
  // Fritsch-Carlson slopes on the uniform log grid.
  std::vector<double> sec(n - 1);
  for (int i = 0; i + 1 < n; ++i) sec[i] = (V.lv_[i + 1] - V.lv_[i]) / V.dl_;
  V.slope_.assign(n, 0.0);
  V.slope_[0] = V.head_exponent_;
  V.slope_[n - 1] = sec[n - 2];
  for (int i = 1; i + 1 < n; ++i) {
    const double a = sec[i - 1], b = sec[i];
    V.slope_[i] = (a * b <= 0.0) ? 0.0 : 2.0 * a * b / (a + b);
  }
  // Clamp the left slope so the first cell stays monotone.
  if (V.slope_[0] < 0.0 || V.slope_[0] > 3.0 * sec[0]) V.slope_[0] = sec[0];
  return V;
}

}  // namespace hardyvl
