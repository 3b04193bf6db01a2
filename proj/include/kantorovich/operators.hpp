#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "kantorovich/errors.hpp"
#include "kantorovich/kernels.hpp"
#include "kantorovich/means.hpp"
#include "kantorovich/signals.hpp"

namespace kantorovich {

enum class OperatorKind {
  Generalized,  // sum g(i/w) chi(wy - i)
  Kantorovich,  // sum [w int_{i/w}^{(i+1)/w} g] chi(wy - i)
  Modified,     // sum [int_0^1 g((i + t^alpha)/(w+1)) dt] chi(wy - i)
};

inline std::string_view operator_name(OperatorKind kind) {
  switch (kind) {
    case OperatorKind::Generalized: return "generalized";
    case OperatorKind::Kantorovich: return "kantorovich";
    case OperatorKind::Modified: return "modified";
  }
  return "?";
}

/// Sum over exactly the indices where a compact kernel is nonzero.
struct ExactSupport {};

/// Sum over |i - round(wy)| <= K.
struct HalfWidth {
  std::int64_t K = 1000;
};

using Truncation = std::variant<ExactSupport, HalfWidth>;

inline constexpr std::int64_t kDefaultHalfWidth = 1000;

inline Truncation default_truncation(const KernelSpec& kernel) {
  if (kernel.compact()) return ExactSupport{};
  return HalfWidth{kDefaultHalfWidth};
}

struct OperatorParams {
  OperatorKind kind = OperatorKind::Modified;
  double w = 1.0;
  double alpha = 0.5;
  Truncation truncation = HalfWidth{kDefaultHalfWidth};

  void validate(const KernelSpec& kernel) const {
    if (!(w > 0.0) || !std::isfinite(w)) throw ConfigError("operator: w must be positive and finite");
    if (!(alpha > 0.0) || !std::isfinite(alpha)) throw ConfigError("operator: alpha must be positive and finite");
    if (auto* h = std::get_if<HalfWidth>(&truncation); h && h->K < 1) {
      throw ConfigError("operator: truncation K must be >= 1");
    }
    if (std::holds_alternative<ExactSupport>(truncation) && !kernel.compact()) {
      throw ConfigError("operator: exact-support truncation needs a compactly supported kernel, got " +
                        kernel.name());
    }
  }
};

struct GridSpec {
  double a = 0.0;
  double b = 1.0;
  int n = 2;

  void validate() const {
    if (!std::isfinite(a) || !std::isfinite(b) || !(a < b)) throw ConfigError("grid: requires finite a < b");
    if (n < 2) throw ConfigError("grid: requires n >= 2");
  }

  double point(int k) const {
    if (k + 1 == n) return b;
    return a + k * (b - a) / (n - 1);
  }
};

inline IndexRange truncation_range(const KernelSpec& kernel, const OperatorParams& params, double y) {
  params.validate(kernel);
  const double z = params.w * y;
  if (std::holds_alternative<ExactSupport>(params.truncation)) {
    const double r = *kernel.radius();
    return {static_cast<std::int64_t>(std::ceil(z - r)), static_cast<std::int64_t>(std::floor(z + r))};
  }
  const std::int64_t K = std::get<HalfWidth>(params.truncation).K;
  const std::int64_t c = std::llround(z);
  return {c - K, c + K};
}

/// The value that multiplies chi(wy - i) in the series.
inline double series_coefficient(const PiecewiseSignal& signal, const OperatorParams& params,
                                 std::int64_t i) {
  switch (params.kind) {
    case OperatorKind::Generalized:
      return signal(static_cast<double>(i) / params.w);
    case OperatorKind::Kantorovich:
      return classical_mean(signal, i, params.w);
    case OperatorKind::Modified:
      return kantorovich_mean(MeanRequest{&signal, i, params.w, params.alpha});
  }
  return 0.0;
}

namespace detail {

inline double evaluate_series(const KernelSpec& kernel, const PiecewiseSignal& signal,
                              const OperatorParams& params, double y) {
  const IndexRange r = truncation_range(kernel, params, y);
  const double z = params.w * y;
  double sum = 0.0;
  for (std::int64_t i = r.lo; i <= r.hi; ++i) {
    const double k = kernel(z - static_cast<double>(i));
    if (k != 0.0) sum += series_coefficient(signal, params, i) * k;
  }
  return sum;
}

inline void require_kind(const OperatorParams& params, OperatorKind kind) {
  if (params.kind != kind) {
    throw ConfigError("operator kind mismatch: expected " + std::string(operator_name(kind)) + ", got " +
                      std::string(operator_name(params.kind)));
  }
}

}  // namespace detail

inline double eval_generalized(const KernelSpec& kernel, const PiecewiseSignal& signal,
                               const OperatorParams& params, double y) {
  detail::require_kind(params, OperatorKind::Generalized);
  return detail::evaluate_series(kernel, signal, params, y);
}

inline double eval_kantorovich(const KernelSpec& kernel, const PiecewiseSignal& signal,
                               const OperatorParams& params, double y) {
  detail::require_kind(params, OperatorKind::Kantorovich);
  return detail::evaluate_series(kernel, signal, params, y);
}

inline double eval_modified(const KernelSpec& kernel, const PiecewiseSignal& signal,
                            const OperatorParams& params, double y) {
  detail::require_kind(params, OperatorKind::Modified);
  return detail::evaluate_series(kernel, signal, params, y);
}

/// A sampling series with its coefficients precomputed for every index that
/// contributes on [y_lo, y_hi]. Evaluation is const and thread-safe; points
/// outside the window fall back to computing the missing coefficients.
class SamplingSeries {
 public:
  SamplingSeries(KernelSpec kernel, PiecewiseSignal signal, OperatorParams params, double y_lo,
                 double y_hi)
      : kernel_(std::move(kernel)), signal_(std::move(signal)), params_(params) {
    params_.validate(kernel_);
    if (!(y_lo <= y_hi)) throw ConfigError("sampling series: requires y_lo <= y_hi");
    const IndexRange lo = truncation_range(kernel_, params_, y_lo);
    const IndexRange hi = truncation_range(kernel_, params_, y_hi);
    cached_ = {lo.lo, hi.hi};
    coefficients_.reserve(static_cast<std::size_t>(cached_.size()));
    for (std::int64_t i = cached_.lo; i <= cached_.hi; ++i) {
      coefficients_.push_back(series_coefficient(signal_, params_, i));
    }
  }

  double coefficient(std::int64_t i) const {
    if (i >= cached_.lo && i <= cached_.hi) return coefficients_[static_cast<std::size_t>(i - cached_.lo)];
    return series_coefficient(signal_, params_, i);
  }

  double operator()(double y) const {
    const IndexRange r = truncation_range(kernel_, params_, y);
    const double z = params_.w * y;
    double sum = 0.0;
    for (std::int64_t i = r.lo; i <= r.hi; ++i) {
      const double k = kernel_(z - static_cast<double>(i));
      if (k != 0.0) sum += coefficient(i) * k;
    }
    return sum;
  }

  const KernelSpec& kernel() const noexcept { return kernel_; }
  const PiecewiseSignal& signal() const noexcept { return signal_; }
  const OperatorParams& params() const noexcept { return params_; }
  IndexRange cached_range() const noexcept { return cached_; }

 private:
  KernelSpec kernel_;
  PiecewiseSignal signal_;
  OperatorParams params_;
  IndexRange cached_;
  std::vector<double> coefficients_;
};

inline double evaluate(const KernelSpec& kernel, const PiecewiseSignal& signal,
                       const OperatorParams& params, double y) {
  return detail::evaluate_series(kernel, signal, params, y);
}

struct GridValue {
  double y = 0.0;
  double value = 0.0;
};

inline std::vector<GridValue> eval_on_grid(const KernelSpec& kernel, const PiecewiseSignal& signal,
                                           const OperatorParams& params, const GridSpec& grid) {
  grid.validate();
  const SamplingSeries series(kernel, signal, params, grid.a, grid.b);
  std::vector<GridValue> out;
  out.reserve(static_cast<std::size_t>(grid.n));
  for (int k = 0; k < grid.n; ++k) {
    const double y = grid.point(k);
    out.push_back({y, series(y)});
  }
  return out;
}

}  // namespace kantorovich
