#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include "kantorovich/errors.hpp"
#include "kantorovich/quadrature.hpp"
#include "kantorovich/signals.hpp"

namespace kantorovich {

/// Inputs of the warped mean int_0^1 g((i + t^alpha) / (w + 1)) dt.
struct MeanRequest {
  const PiecewiseSignal* signal = nullptr;
  std::int64_t i = 0;
  double w = 1.0;
  double alpha = 1.0;

  void validate() const {
    if (signal == nullptr) throw ConfigError("mean request: missing signal");
    if (!(w > 0.0)) throw ConfigError("mean request: w must be positive");
    if (!(alpha > 0.0)) throw ConfigError("mean request: alpha must be positive");
  }
};

inline constexpr int kMeanGaussOrder = 16;

namespace detail {

// Geometric grading of [t0, t1] towards the branch point of t^alpha at 0:
// panels [t1 r^{k+1}, t1 r^k] while they stay above t0, then [t0, t1 r^k].
// Every panel spans at most a factor 1/r, so Gauss-Legendre converges fast.
inline constexpr double kGradingRatio = 0.5;
inline constexpr int kGradingLevels = 40;

template <class F>
double graded_towards_zero(F&& f, double t0, double t1, int order) {
  double sum = 0.0;
  double hi = t1;
  for (int k = 0; k < kGradingLevels && hi * kGradingRatio > t0; ++k) {
    const double lo = hi * kGradingRatio;
    sum += gauss_legendre(f, lo, hi, order);
    hi = lo;
  }
  return sum + gauss_legendre(f, t0, hi, order);
}

inline bool is_integer(double x) { return x == std::round(x); }

}  // namespace detail

/// t in (0, 1) where (i + t^alpha)/(w + 1) hits a breakpoint of the signal,
/// sorted, with the endpoints 0 and 1 added.
inline std::vector<double> mean_cuts(const MeanRequest& req) {
  std::vector<double> cuts{0.0};
  const double scale = req.w + 1.0;
  for (double b : req.signal->breakpoints()) {
    const double x = scale * b - static_cast<double>(req.i);
    if (x > 0.0 && x < 1.0) cuts.push_back(std::pow(x, 1.0 / req.alpha));
  }
  std::sort(cuts.begin() + 1, cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  if (cuts.back() < 1.0) cuts.push_back(1.0);
  return cuts;
}

/// int_0^1 g((i + t^alpha) / (w + 1)) dt, integrated in t with a Gauss-Legendre
/// rule on each cell between breakpoint preimages.
inline double kantorovich_mean(const MeanRequest& req, int order = kMeanGaussOrder) {
  req.validate();
  const PiecewiseSignal& g = *req.signal;
  const double scale = req.w + 1.0;
  const double shift = static_cast<double>(req.i);
  const auto map = [&](double t) { return (shift + std::pow(t, req.alpha)) / scale; };
  const bool smooth_at_zero = detail::is_integer(req.alpha);

  const std::vector<double> cuts = mean_cuts(req);
  double sum = 0.0;
  for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
    const double t0 = cuts[k];
    const double t1 = cuts[k + 1];
    const PieceForm& form = g.pieces()[g.piece_index(map(0.5 * (t0 + t1)))].form;
    if (is_constant(form)) {
      sum += eval_form(form, 0.0) * (t1 - t0);
      continue;
    }
    const auto integrand = [&](double t) { return eval_form(form, map(t)); };
    if (!smooth_at_zero) {
      sum += detail::graded_towards_zero(integrand, t0, t1, order);
    } else {
      sum += gauss_legendre(integrand, t0, t1, order);
    }
  }
  return sum;
}

inline double kantorovich_mean(const PiecewiseSignal& signal, std::int64_t i, double w, double alpha) {
  return kantorovich_mean(MeanRequest{&signal, i, w, alpha});
}

/// w * int_{i/w}^{(i+1)/w} g(u) du.
inline double classical_mean(const PiecewiseSignal& signal, std::int64_t i, double w) {
  if (!(w > 0.0)) throw ConfigError("classical_mean: w must be positive");
  const double a = static_cast<double>(i) / w;
  const double b = static_cast<double>(i + 1) / w;
  return w * signal_integrate(signal, a, b);
}

}  // namespace kantorovich
