#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <numbers>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "kantorovich/errors.hpp"
#include "kantorovich/operators.hpp"
#include "kantorovich/quadrature.hpp"
#include "kantorovich/signals.hpp"

namespace kantorovich {

/// u^p
struct PowerEta {
  double p = 1.0;
};

/// u^a log^b(e + u)
struct LogPowerEta {
  double a = 1.0;
  double b = 1.0;
};

/// exp(u^a) - 1
struct ExponentialEta {
  double a = 1.0;
};

/// Convex eta-function driving a modular I[h] = int eta(|h|).
class EtaFunction {
 public:
  using Kind = std::variant<PowerEta, LogPowerEta, ExponentialEta>;

  static EtaFunction power(double p) {
    if (!(p >= 1.0)) throw ConfigError("eta power: p must be >= 1");
    return EtaFunction(PowerEta{p});
  }
  static EtaFunction log_power(double a, double b) {
    if (!(a >= 1.0) || !(b > 0.0)) throw ConfigError("eta log-power: requires a >= 1 and b > 0");
    return EtaFunction(LogPowerEta{a, b});
  }
  static EtaFunction exponential(double a) {
    if (!(a > 0.0)) throw ConfigError("eta exponential: a must be positive");
    return EtaFunction(ExponentialEta{a});
  }

  const Kind& kind() const noexcept { return kind_; }

  /// Unchecked evaluation for u >= 0.
  double operator()(double u) const {
    if (auto* p = std::get_if<PowerEta>(&kind_)) return std::pow(u, p->p);
    if (auto* l = std::get_if<LogPowerEta>(&kind_)) {
      return std::pow(u, l->a) * std::pow(std::log(std::numbers::e + u), l->b);
    }
    return std::expm1(std::pow(u, std::get<ExponentialEta>(kind_).a));
  }

  std::string name() const {
    char buf[96];
    if (auto* p = std::get_if<PowerEta>(&kind_)) {
      std::snprintf(buf, sizeof buf, "power:%g", p->p);
    } else if (auto* l = std::get_if<LogPowerEta>(&kind_)) {
      std::snprintf(buf, sizeof buf, "logpower:%g:%g", l->a, l->b);
    } else {
      std::snprintf(buf, sizeof buf, "exp:%g", std::get<ExponentialEta>(kind_).a);
    }
    return buf;
  }

 private:
  explicit EtaFunction(Kind k) : kind_(k) {}
  Kind kind_;
};

inline double eta_eval(const EtaFunction& eta, double u) {
  if (u < 0.0 || std::isnan(u)) throw DomainError("eta_eval: argument must be >= 0");
  return eta(u);
}

struct Window {
  double a = -20.0;
  double b = 20.0;
};

inline constexpr Window kDefaultModularWindow{-20.0, 20.0};

/// |h| sampled at the nodes of a composite 16-point Gauss-Legendre rule, so
/// modulars for many (eta, lambda) pairs reuse one set of evaluations.
struct SampledFunction {
  std::vector<double> weights;
  std::vector<double> abs_values;
  Window window;
  int panels = 0;

  bool identically_zero() const {
    return std::all_of(abs_values.begin(), abs_values.end(), [](double v) { return v == 0.0; });
  }
};

template <class F>
SampledFunction sample_abs(F&& h, Window window, int panels) {
  if (panels < 1) throw ConfigError("sample_abs: panels must be >= 1");
  if (!(window.a < window.b)) throw ConfigError("sample_abs: window requires a < b");
  const GaussRule& rule = gauss_rule(16);
  SampledFunction s;
  s.window = window;
  s.panels = panels;
  s.weights.reserve(static_cast<std::size_t>(panels) * rule.nodes.size());
  s.abs_values.reserve(s.weights.capacity());
  const double width = (window.b - window.a) / panels;
  for (int k = 0; k < panels; ++k) {
    const double lo = window.a + k * width;
    const double hi = (k + 1 == panels) ? window.b : window.a + (k + 1) * width;
    const double half = 0.5 * (hi - lo);
    const double mid = 0.5 * (hi + lo);
    for (std::size_t j = 0; j < rule.nodes.size(); ++j) {
      s.weights.push_back(half * rule.weights[j]);
      s.abs_values.push_back(std::abs(h(mid + half * rule.nodes[j])));
    }
  }
  return s;
}

/// I[lambda h] = int eta(lambda |h|) over the sampled window.
inline double modular(const EtaFunction& eta, const SampledFunction& h, double lambda) {
  if (!(lambda > 0.0)) throw DomainError("modular: lambda must be positive");
  double sum = 0.0;
  for (std::size_t k = 0; k < h.weights.size(); ++k) sum += h.weights[k] * eta(lambda * h.abs_values[k]);
  return sum;
}

template <class F>
double modular(const EtaFunction& eta, F&& h, double lambda, Window window, int grid_n) {
  if (!(lambda > 0.0)) throw DomainError("modular: lambda must be positive");
  return modular(eta, sample_abs(h, window, grid_n), lambda);
}

inline constexpr double kLuxemburgRelativeWidth = 1e-8;

/// inf { lambda > 0 : I[h / lambda] <= 1 } by doubling/halving from lambda = 1
/// and then bisection.
inline double luxemburg_norm(const EtaFunction& eta, const SampledFunction& h) {
  if (h.identically_zero()) return 0.0;
  const auto fits = [&](double lambda) { return modular(eta, h, 1.0 / lambda) <= 1.0; };
  double lo = 1.0;
  double hi = 1.0;
  if (fits(1.0)) {
    int steps = 0;
    while (fits(lo)) {
      hi = lo;
      lo *= 0.5;
      if (++steps > 1100) throw DivergenceError("luxemburg_norm: bracket search underflowed");
    }
  } else {
    int steps = 0;
    while (!fits(hi)) {
      lo = hi;
      hi *= 2.0;
      if (++steps > 64) throw DivergenceError("luxemburg_norm: modular never <= 1 within 2^64 doublings");
    }
  }
  while (hi - lo > kLuxemburgRelativeWidth * hi) {
    const double mid = 0.5 * (lo + hi);
    if (fits(mid)) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return hi;
}

template <class F>
double luxemburg_norm(const EtaFunction& eta, F&& h, Window window, int grid_n) {
  return luxemburg_norm(eta, sample_abs(h, window, grid_n));
}

inline constexpr double kDelta2UnboundedThreshold = 1e6;

/// max over the grid of eta(2u)/eta(u); nullopt when the ratio at the largest
/// grid point exceeds 1e6 and is still increasing.
inline std::optional<double> delta2_probe(const EtaFunction& eta, std::span<const double> u_grid) {
  if (u_grid.empty()) throw ConfigError("delta2_probe: empty grid");
  std::vector<double> u(u_grid.begin(), u_grid.end());
  std::sort(u.begin(), u.end());
  if (!(u.front() > 0.0)) throw DomainError("delta2_probe: grid points must be positive");
  std::vector<double> ratios;
  ratios.reserve(u.size());
  for (double x : u) {
    const double num = eta(2.0 * x);
    const double den = eta(x);
    ratios.push_back(std::isinf(num) ? std::numeric_limits<double>::infinity() : num / den);
  }
  const double last = ratios.back();
  const bool increasing = ratios.size() < 2 || last > ratios[ratios.size() - 2] ||
                          (std::isinf(last) && std::isinf(ratios[ratios.size() - 2]));
  if (last > kDelta2UnboundedThreshold && increasing) return std::nullopt;
  return *std::max_element(ratios.begin(), ratios.end());
}

struct ModularRequest {
  EtaFunction eta;
  double lambda = 1.0;
};

struct MetricRequest {
  bool sup = true;
  std::vector<double> p_values;
  std::vector<ModularRequest> modulars;
  /// When set, also report the sup error over points at least this far from
  /// every breakpoint of the reference.
  std::optional<double> continuity_radius;
};

struct ModularError {
  std::string eta;
  double lambda = 0.0;
  double value = 0.0;
};

struct ErrorReport {
  double sup_error = 0.0;
  std::map<double, double> lp_errors;
  std::vector<ModularError> modular_errors;
  std::optional<double> sup_continuity_error;
  Window window;
  int grid_n = 0;
};

namespace detail {

template <class F>
double trapezoid(std::span<const GridValue> grid, F&& integrand) {
  double sum = 0.0;
  for (std::size_t k = 1; k < grid.size(); ++k) {
    sum += 0.5 * (grid[k].y - grid[k - 1].y) * (integrand(k - 1) + integrand(k));
  }
  return sum;
}

}  // namespace detail

/// Error metrics of `approx` against the reference signal on the approx grid.
/// L^p norms and modulars use the trapezoid rule on that grid.
inline ErrorReport error_metrics(const PiecewiseSignal& reference, std::span<const GridValue> approx,
                                 const MetricRequest& request) {
  if (approx.empty()) throw ConfigError("error_metrics: empty approximation grid");
  std::vector<double> diff(approx.size());
  for (std::size_t k = 0; k < approx.size(); ++k) {
    if (k > 0 && !(approx[k].y > approx[k - 1].y)) throw ConfigError("error_metrics: grid must be increasing");
    diff[k] = std::abs(approx[k].value - reference(approx[k].y));
  }
  ErrorReport report;
  report.window = {approx.front().y, approx.back().y};
  report.grid_n = static_cast<int>(approx.size());
  if (request.sup) report.sup_error = *std::max_element(diff.begin(), diff.end());
  for (double p : request.p_values) {
    if (!(p >= 1.0)) throw ConfigError("error_metrics: p must be >= 1");
    const double integral = detail::trapezoid(approx, [&](std::size_t k) { return std::pow(diff[k], p); });
    report.lp_errors[p] = std::pow(integral, 1.0 / p);
  }
  for (const ModularRequest& m : request.modulars) {
    if (!(m.lambda > 0.0)) throw ConfigError("error_metrics: lambda must be positive");
    const double value = detail::trapezoid(approx, [&](std::size_t k) { return m.eta(m.lambda * diff[k]); });
    report.modular_errors.push_back({m.eta.name(), m.lambda, value});
  }
  if (request.continuity_radius) {
    const std::vector<double> breaks = reference.breakpoints();
    double worst = 0.0;
    for (std::size_t k = 0; k < approx.size(); ++k) {
      const bool near = std::any_of(breaks.begin(), breaks.end(), [&](double b) {
        return std::abs(approx[k].y - b) < *request.continuity_radius;
      });
      if (!near) worst = std::max(worst, diff[k]);
    }
    report.sup_continuity_error = worst;
  }
  return report;
}

}  // namespace kantorovich
