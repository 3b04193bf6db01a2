#pragma once

#include <array>
#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "kantorovich/errors.hpp"

namespace kantorovich {

/// Nodes and weights of an n-point Gauss-Legendre rule on [-1, 1].
struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

inline constexpr int kMinGaussOrder = 2;
inline constexpr int kMaxGaussOrder = 64;

namespace detail {

// Newton iteration on P_n starting from the Chebyshev-like guess.
inline GaussRule build_gauss_rule(int n) {
  GaussRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  const int half = (n + 1) / 2;
  for (int k = 0; k < half; ++k) {
    double x = std::cos(std::numbers::pi * (k + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0;
      double p1 = x;
      for (int j = 2; j <= n; ++j) {
        const double p2 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p0) / j;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    // Recompute the derivative at the converged node.
    double p0 = 1.0;
    double p1 = x;
    for (int j = 2; j <= n; ++j) {
      const double p2 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p0) / j;
      p0 = p1;
      p1 = p2;
    }
    dp = n * (x * p1 - p0) / (x * x - 1.0);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes[k] = -x;
    rule.nodes[n - 1 - k] = x;
    rule.weights[k] = w;
    rule.weights[n - 1 - k] = w;
  }
  if (n % 2 == 1) rule.nodes[n / 2] = 0.0;
  return rule;
}

}  // namespace detail

/// Cached rule for 2 <= order <= 64.
inline const GaussRule& gauss_rule(int order) {
  static const std::array<GaussRule, kMaxGaussOrder + 1> rules = [] {
    std::array<GaussRule, kMaxGaussOrder + 1> r{};
    for (int n = kMinGaussOrder; n <= kMaxGaussOrder; ++n) r[n] = detail::build_gauss_rule(n);
    return r;
  }();
  if (order < kMinGaussOrder || order > kMaxGaussOrder) {
    throw ConfigError("Gauss-Legendre order must lie in [2, 64], got " + std::to_string(order));
  }
  return rules[order];
}

/// Gauss-Legendre estimate of the integral of f over [a, b].
template <class F>
double gauss_legendre(F&& f, double a, double b, int order) {
  if (!(a <= b)) throw DomainError("gauss_legendre: requires a <= b");
  const GaussRule& rule = gauss_rule(order);
  const double half = 0.5 * (b - a);
  const double mid = 0.5 * (a + b);
  double sum = 0.0;
  for (std::size_t k = 0; k < rule.nodes.size(); ++k) {
    sum += rule.weights[k] * f(mid + half * rule.nodes[k]);
  }
  return sum * half;
}

/// Composite Gauss-Legendre rule over `panels` equal panels.
template <class F>
double composite_gauss_legendre(F&& f, double a, double b, int panels, int order = 16) {
  if (panels < 1) throw ConfigError("composite_gauss_legendre: panels must be >= 1");
  const double h = (b - a) / panels;
  double sum = 0.0;
  for (int k = 0; k < panels; ++k) {
    const double lo = a + k * h;
    const double hi = (k + 1 == panels) ? b : a + (k + 1) * h;
    sum += gauss_legendre(f, lo, hi, order);
  }
  return sum;
}

inline constexpr int kSimpsonMaxDepth = 40;
// Every branch is split at least this often before the error test applies, so
// features narrower than the first Simpson panels are still sampled.
inline constexpr int kSimpsonMinDepth = 5;

namespace detail {

struct SimpsonState {
  double capped_error = 0.0;  // error estimates of leaves accepted at the depth cap
  int capped_leaves = 0;
};

template <class F>
double simpson_step(F& f, double a, double fa, double m, double fm, double b, double fb,
                    double whole, double tol, int depth, SimpsonState& state) {
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = f(lm);
  const double frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double delta = left + right - whole;
  if (depth >= kSimpsonMinDepth && std::abs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
  if (depth >= kSimpsonMaxDepth) {
    state.capped_error += std::abs(delta) / 15.0;
    ++state.capped_leaves;
    return left + right + delta / 15.0;
  }
  return simpson_step(f, a, fa, lm, flm, m, fm, left, 0.5 * tol, depth + 1, state) +
         simpson_step(f, m, fm, rm, frm, b, fb, right, 0.5 * tol, depth + 1, state);
}

}  // namespace detail

/// Adaptive Simpson quadrature with absolute tolerance `tol`.
///
/// Leaves that reach the recursion cap are accepted with their Richardson
/// estimate; jump discontinuities end up there with negligible error. If the
/// summed error estimate of the capped leaves exceeds `tol` a QuadratureError
/// carrying the partial result is thrown.
template <class F>
double adaptive_simpson(F&& f, double a, double b, double tol) {
  if (!(a <= b)) throw DomainError("adaptive_simpson: requires a <= b");
  if (!(tol > 0.0)) throw DomainError("adaptive_simpson: tol must be positive");
  if (a == b) return 0.0;
  const double fa = f(a);
  const double fb = f(b);
  const double m = 0.5 * (a + b);
  const double fm = f(m);
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  detail::SimpsonState state;
  const double result = detail::simpson_step(f, a, fa, m, fm, b, fb, whole, tol, 0, state);
  if (state.capped_error > tol) {
    throw QuadratureError("adaptive_simpson: depth cap reached on " +
                              std::to_string(state.capped_leaves) + " subintervals",
                          result);
  }
  return result;
}

}  // namespace kantorovich
