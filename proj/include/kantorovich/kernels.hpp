#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <numbers>
#include <optional>
#include <string>
#include <type_traits>
#include <variant>

#include "kantorovich/errors.hpp"
#include "kantorovich/quadrature.hpp"

namespace kantorovich {

/// Normalized sinc: sin(pi y) / (pi y), with sinc(0) = 1.
inline double sinc(double y) {
  const double x = std::numbers::pi * y;
  if (std::abs(x) < 1e-4) {
    const double x2 = x * x;
    return 1.0 - x2 / 6.0 + x2 * x2 / 120.0;
  }
  return std::sin(x) / x;
}

struct Fejer {};

struct Jackson {
  int n = 1;
  double stretch = 1.0;
};

struct BSpline {
  int n = 3;
};

using KernelIdentity = std::variant<Fejer, Jackson, BSpline>;

struct CompactSupport {
  double radius = 0.0;
};

/// |chi(z)| = O(|z|^-exponent) as |z| -> infinity.
struct DecaySupport {
  double exponent = 0.0;
};

using KernelSupport = std::variant<CompactSupport, DecaySupport>;

/// Largest B-spline order evaluated by the truncated-power sum; beyond it the
/// alternating sum loses more than ~1e-10 to cancellation.
inline constexpr int kMaxBSplineOrder = 8;

inline double jackson_normalization(int n, double stretch);

/// An admissible sampling kernel. Immutable once built; use the factories.
class KernelSpec {
 public:
  static KernelSpec fejer() { return KernelSpec(Fejer{}, DecaySupport{2.0}, 1.0); }

  static KernelSpec jackson(int n, double stretch = 1.0) {
    if (n < 1) throw ConfigError("jackson kernel: n must be >= 1");
    if (!(stretch >= 1.0)) throw ConfigError("jackson kernel: stretch must be >= 1");
    return KernelSpec(Jackson{n, stretch}, DecaySupport{2.0 * n}, jackson_normalization(n, stretch));
  }

  static KernelSpec bspline(int n) {
    if (n < 1 || n > kMaxBSplineOrder) {
      throw ConfigError("bspline kernel: order must lie in [1, " + std::to_string(kMaxBSplineOrder) +
                        "], got " + std::to_string(n));
    }
    return KernelSpec(BSpline{n}, CompactSupport{0.5 * n}, 1.0);
  }

  const KernelIdentity& identity() const noexcept { return identity_; }
  const KernelSupport& support() const noexcept { return support_; }
  double normalization() const noexcept { return normalization_; }

  bool compact() const noexcept { return std::holds_alternative<CompactSupport>(support_); }

  /// Support radius for compact kernels, nullopt otherwise.
  std::optional<double> radius() const noexcept {
    if (auto* c = std::get_if<CompactSupport>(&support_)) return c->radius;
    return std::nullopt;
  }

  /// Selector string understood by the CLI (fejer, jackson:<n>:<stretch>, bspline:<n>).
  std::string name() const {
    if (std::holds_alternative<Fejer>(identity_)) return "fejer";
    if (auto* j = std::get_if<Jackson>(&identity_)) {
      char buf[64];
      std::snprintf(buf, sizeof buf, "jackson:%d:%g", j->n, j->stretch);
      return buf;
    }
    return "bspline:" + std::to_string(std::get<BSpline>(identity_).n);
  }

  double operator()(double z) const;

 private:
  KernelSpec(KernelIdentity id, KernelSupport support, double normalization)
      : identity_(id), support_(support), normalization_(normalization) {}

  KernelIdentity identity_;
  KernelSupport support_;
  double normalization_;
};

namespace detail {

inline double binomial(int n, int k) {
  double r = 1.0;
  for (int j = 1; j <= k; ++j) r = r * (n - k + j) / j;
  return r;
}

// M_n(z) = 1/(n-1)! sum_{m=0}^{n} (-1)^m C(n,m) (n/2 + z - m)_+^{n-1}
inline double bspline_truncated_power(int n, double z) {
  const double half = 0.5 * n;
  if (std::abs(z) > half) return 0.0;
  double factorial = 1.0;
  for (int j = 2; j < n; ++j) factorial *= j;
  double sum = 0.0;
  for (int m = 0; m <= n; ++m) {
    const double x = half + z - m;
    if (n == 1) {
      // (x)_+^0 is the Heaviside step with H(0) = 1, giving M_1 = 1 on [-1/2, 1/2).
      if (x < 0.0) continue;
      sum += (m % 2 == 0 ? 1.0 : -1.0) * binomial(n, m);
      continue;
    }
    if (x <= 0.0) continue;
    sum += (m % 2 == 0 ? 1.0 : -1.0) * binomial(n, m) * std::pow(x, n - 1);
  }
  return sum / factorial;
}

}  // namespace detail

inline double KernelSpec::operator()(double z) const {
  return std::visit(
      [&](const auto& id) -> double {
        using T = std::decay_t<decltype(id)>;
        if constexpr (std::is_same_v<T, Fejer>) {
          const double s = sinc(0.5 * z);
          return 0.5 * s * s;
        } else if constexpr (std::is_same_v<T, Jackson>) {
          const double s = sinc(z / (2.0 * id.n * std::numbers::pi * id.stretch));
          return normalization_ * std::pow(s * s, id.n);
        } else {
          return detail::bspline_truncated_power(id.n, z);
        }
      },
      identity_);
}

inline double kernel_eval(const KernelSpec& kernel, double z) { return kernel(z); }

/// Analytic Fourier transform chi^(u) = int chi(x) e^{-iux} dx where known.
/// Jackson kernels return nullopt; see jackson_bandlimit.
inline std::optional<double> kernel_fourier(const KernelSpec& kernel, double u) {
  if (std::holds_alternative<Fejer>(kernel.identity())) {
    const double a = std::abs(u / std::numbers::pi);
    return a <= 1.0 ? 1.0 - a : 0.0;
  }
  if (auto* b = std::get_if<BSpline>(&kernel.identity())) {
    return std::pow(sinc(u / (2.0 * std::numbers::pi)), b->n);
  }
  return std::nullopt;
}

/// Half-width of the frequency band outside which a Jackson kernel's transform vanishes.
inline double jackson_bandlimit(double stretch) { return 1.0 / stretch; }

/// c_n = (int sinc^{2n}(u / (2 n pi s)) du)^{-1}.
///
/// The integral is 2 n pi s * int sinc^{2n}(v) dv. The v-integral is done with
/// 16-point Gauss-Legendre on unit cells of [0, L] plus the averaged tail
/// C(2n, n) 4^{-n} pi^{-2n} L^{1-2n} / (2n-1); L and 2L must agree to 1e-10.
inline double jackson_normalization(int n, double stretch) {
  if (n < 1) throw ConfigError("jackson_normalization: n must be >= 1");
  if (!(stretch >= 1.0)) throw ConfigError("jackson_normalization: stretch must be >= 1");

  const auto integrand = [n](double v) {
    const double s = sinc(v);
    return std::pow(s * s, n);
  };
  const double mean_power = detail::binomial(2 * n, n) / std::pow(4.0, n);
  const auto tail = [&](double L) {
    return mean_power * std::pow(std::numbers::pi, -2.0 * n) * std::pow(L, 1.0 - 2.0 * n) /
           (2.0 * n - 1.0);
  };

  constexpr int kCells = 4096;
  double head = 0.0;
  for (int k = 0; k < kCells; ++k) head += gauss_legendre(integrand, k, k + 1.0, 16);
  const double coarse = 2.0 * (head + tail(kCells));
  for (int k = kCells; k < 2 * kCells; ++k) head += gauss_legendre(integrand, k, k + 1.0, 16);
  const double fine = 2.0 * (head + tail(2.0 * kCells));

  const double scale = 2.0 * n * std::numbers::pi * stretch;
  if (std::abs(fine - coarse) > 1e-10 * std::abs(fine)) {
    throw QuadratureError("jackson_normalization: tail estimate did not stabilize",
                          1.0 / (scale * fine));
  }
  return 1.0 / (scale * fine);
}

/// ||chi||_1. All built-in kernels are nonnegative with unit integral.
inline double kernel_l1_norm(const KernelSpec&) { return 1.0; }

struct IndexRange {
  std::int64_t lo = 0;
  std::int64_t hi = -1;

  bool empty() const noexcept { return hi < lo; }
  std::int64_t size() const noexcept { return empty() ? 0 : hi - lo + 1; }
};

namespace detail {

// Indices i contributing to sum_i chi(z - i): exact for compact kernels, |i| <= K otherwise.
inline IndexRange shift_range(const KernelSpec& kernel, double z, std::int64_t K) {
  if (auto r = kernel.radius()) {
    return {static_cast<std::int64_t>(std::ceil(z - *r)),
            static_cast<std::int64_t>(std::floor(z + *r))};
  }
  return {-K, K};
}

inline void require_grid(int grid_density, std::int64_t K) {
  if (grid_density < 1) throw ConfigError("grid_density must be >= 1");
  if (K < 1) throw ConfigError("truncation K must be >= 1");
}

}  // namespace detail

/// max over z in [0, 1) of |sum_{|i|<=K} chi(z - i) - 1|.
inline double partition_defect(const KernelSpec& kernel, int grid_density, std::int64_t K) {
  detail::require_grid(grid_density, K);
  double worst = 0.0;
  for (int j = 0; j < grid_density; ++j) {
    const double z = static_cast<double>(j) / grid_density;
    const IndexRange r = detail::shift_range(kernel, z, K);
    double sum = 0.0;
    for (std::int64_t i = r.lo; i <= r.hi; ++i) sum += kernel(z - static_cast<double>(i));
    worst = std::max(worst, std::abs(sum - 1.0));
  }
  return worst;
}

/// Estimate of mu_0 = sup_z sum_i |chi(z - i)|.
inline double absolute_moment0(const KernelSpec& kernel, int grid_density, std::int64_t K) {
  detail::require_grid(grid_density, K);
  double worst = 0.0;
  for (int j = 0; j < grid_density; ++j) {
    const double z = static_cast<double>(j) / grid_density;
    const IndexRange r = detail::shift_range(kernel, z, K);
    double sum = 0.0;
    for (std::int64_t i = r.lo; i <= r.hi; ++i) sum += std::abs(kernel(z - static_cast<double>(i)));
    worst = std::max(worst, sum);
  }
  return worst;
}

struct MomentEstimate {
  double value = 0.0;            // truncated at K
  double value_doubled = 0.0;    // truncated at 2K
  double relative_change = 0.0;  // |value_doubled - value| / value_doubled
  bool divergent = false;        // relative_change > kMomentStabilityTolerance
};

inline constexpr double kMomentStabilityTolerance = 1e-3;

/// Estimate of m_beta = sup_z sum_i |chi(z - i)| |z - i|^beta, with a stability
/// check under K -> 2K.
inline MomentEstimate moment_estimate(const KernelSpec& kernel, double beta, int grid_density,
                                      std::int64_t K) {
  detail::require_grid(grid_density, K);
  if (!(beta > 0.0)) throw DomainError("moment_estimate: beta must be positive");
  double worst = 0.0;
  double worst_doubled = 0.0;
  const auto term = [&](double x) { return std::abs(kernel(x)) * std::pow(std::abs(x), beta); };
  for (int j = 0; j < grid_density; ++j) {
    const double z = static_cast<double>(j) / grid_density;
    double sum = 0.0;
    double extra = 0.0;
    if (kernel.compact()) {
      const IndexRange r = detail::shift_range(kernel, z, K);
      for (std::int64_t i = r.lo; i <= r.hi; ++i) sum += term(z - static_cast<double>(i));
    } else {
      for (std::int64_t i = -K; i <= K; ++i) sum += term(z - static_cast<double>(i));
      for (std::int64_t i = K + 1; i <= 2 * K; ++i) {
        extra += term(z - static_cast<double>(i)) + term(z + static_cast<double>(i));
      }
    }
    worst = std::max(worst, sum);
    worst_doubled = std::max(worst_doubled, sum + extra);
  }
  MomentEstimate est;
  est.value = worst;
  est.value_doubled = worst_doubled;
  est.relative_change = worst_doubled > 0.0 ? std::abs(worst_doubled - worst) / worst_doubled : 0.0;
  est.divergent = est.relative_change > kMomentStabilityTolerance;
  return est;
}

/// sum over |w y - i| > gamma w of |chi(w y - i)|, with the i-sum truncated to
/// |i - round(w y)| <= K for non-compact kernels.
inline double kernel_tail_sum(const KernelSpec& kernel, double w, double y, double gamma,
                              std::int64_t K) {
  const double z = w * y;
  const IndexRange r = kernel.compact() ? detail::shift_range(kernel, z, K)
                                        : IndexRange{std::llround(z) - K, std::llround(z) + K};
  double sum = 0.0;
  for (std::int64_t i = r.lo; i <= r.hi; ++i) {
    const double x = z - static_cast<double>(i);
    if (std::abs(x) > gamma * w) sum += std::abs(kernel(x));
  }
  return sum;
}

/// max(|chi^(0) - 1|, max_{1<=|i|<=terms} |chi^(2 pi i)|), the Fourier-side form of
/// the partition of unity. nullopt when the transform is not known analytically.
inline std::optional<double> fourier_unity_defect(const KernelSpec& kernel, int terms) {
  auto at0 = kernel_fourier(kernel, 0.0);
  if (!at0) return std::nullopt;
  double worst = std::abs(*at0 - 1.0);
  for (int i = 1; i <= terms; ++i) {
    const double u = 2.0 * std::numbers::pi * i;
    worst = std::max({worst, std::abs(*kernel_fourier(kernel, u)), std::abs(*kernel_fourier(kernel, -u))});
  }
  return worst;
}

struct KernelDiagnostics {
  double partition_defect = 0.0;
  double mu0 = 0.0;
  double moment_beta = 0.0;
  double moment_value = 0.0;
  bool moment_divergent = false;
  std::int64_t truncation_K = 0;
  int grid_density = 0;
};

inline KernelDiagnostics diagnose_kernel(const KernelSpec& kernel, double beta, int grid_density,
                                         std::int64_t K) {
  KernelDiagnostics d;
  d.partition_defect = partition_defect(kernel, grid_density, K);
  d.mu0 = absolute_moment0(kernel, grid_density, K);
  const MomentEstimate m = moment_estimate(kernel, beta, grid_density, K);
  d.moment_beta = beta;
  d.moment_value = m.value;
  d.moment_divergent = m.divergent;
  d.truncation_K = K;
  d.grid_density = grid_density;
  return d;
}

}  // namespace kantorovich
