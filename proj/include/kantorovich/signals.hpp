#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "kantorovich/errors.hpp"
#include "kantorovich/quadrature.hpp"

namespace kantorovich {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// c0 + c1 y + c2 y^2 + ...
struct Polynomial {
  std::vector<double> coefficients;
};

/// scale * y^exponent, used for decaying tails.
struct PowerTail {
  double scale = 0.0;
  int exponent = -2;
};

using PieceForm = std::variant<Polynomial, PowerTail>;

/// One piece on [lower, upper); lower may be -inf and upper +inf.
struct Piece {
  double lower = -kInf;
  double upper = kInf;
  PieceForm form;
};

/// Value assigned at a single point, overriding the piece that contains it.
struct PointValue {
  double y = 0.0;
  double value = 0.0;
};

inline double eval_form(const PieceForm& form, double y) {
  if (auto* p = std::get_if<Polynomial>(&form)) {
    double acc = 0.0;
    for (auto it = p->coefficients.rbegin(); it != p->coefficients.rend(); ++it) acc = acc * y + *it;
    return acc;
  }
  const auto& t = std::get<PowerTail>(form);
  return t.scale * std::pow(y, t.exponent);
}

/// True when the form is a constant polynomial (including the empty polynomial).
inline bool is_constant(const PieceForm& form) {
  auto* p = std::get_if<Polynomial>(&form);
  if (!p) return false;
  return std::all_of(p->coefficients.begin() + std::min<std::size_t>(1, p->coefficients.size()),
                     p->coefficients.end(), [](double c) { return c == 0.0; });
}

namespace detail {

// Antiderivative of the form, valid on any interval where the form is finite.
inline double antiderivative(const PieceForm& form, double y) {
  if (auto* p = std::get_if<Polynomial>(&form)) {
    double acc = 0.0;
    for (std::size_t k = p->coefficients.size(); k-- > 0;) {
      acc = acc * y + p->coefficients[k] / static_cast<double>(k + 1);
    }
    return acc * y;
  }
  const auto& t = std::get<PowerTail>(form);
  if (t.exponent == -1) return t.scale * std::log(std::abs(y));
  return t.scale * std::pow(y, t.exponent + 1) / (t.exponent + 1);
}

inline double integrate_form(const PieceForm& form, double a, double b) {
  if (a >= b) return 0.0;
  if (auto* t = std::get_if<PowerTail>(&form); t && t->exponent < 0 && a <= 0.0 && b >= 0.0) {
    throw DomainError("signal_integrate: interval crosses the pole of a power-law piece at 0");
  }
  return antiderivative(form, b) - antiderivative(form, a);
}

}  // namespace detail

/// A real function given piecewise on consecutive left-closed, right-open
/// intervals covering the whole line.
class PiecewiseSignal {
 public:
  explicit PiecewiseSignal(std::vector<Piece> pieces, std::vector<PointValue> point_values = {},
                           std::string name = {})
      : pieces_(std::move(pieces)), points_(std::move(point_values)), name_(std::move(name)) {
    validate();
    lowers_.reserve(pieces_.size());
    for (const Piece& p : pieces_) lowers_.push_back(p.lower);
  }

  static PiecewiseSignal constant(double c, std::string name = "const") {
    return PiecewiseSignal({Piece{-kInf, kInf, Polynomial{{c}}}}, {}, std::move(name));
  }

  const std::vector<Piece>& pieces() const noexcept { return pieces_; }
  const std::vector<PointValue>& point_values() const noexcept { return points_; }
  const std::string& name() const noexcept { return name_; }

  /// Finite breakpoints in increasing order.
  std::vector<double> breakpoints() const {
    std::vector<double> out;
    for (std::size_t k = 1; k < pieces_.size(); ++k) out.push_back(pieces_[k].lower);
    return out;
  }

  /// Index of the piece containing y.
  std::size_t piece_index(double y) const {
    auto it = std::upper_bound(lowers_.begin() + 1, lowers_.end(), y);
    return static_cast<std::size_t>(it - lowers_.begin()) - 1;
  }

  double operator()(double y) const {
    for (const PointValue& pv : points_) {
      if (pv.y == y) return pv.value;
    }
    return eval_form(pieces_[piece_index(y)].form, y);
  }

 private:
  void validate() const {
    if (pieces_.empty()) throw ConfigError("piecewise signal: needs at least one piece");
    if (pieces_.front().lower != -kInf) throw ConfigError("piecewise signal: first piece must start at -inf");
    if (pieces_.back().upper != kInf) throw ConfigError("piecewise signal: last piece must end at +inf");
    for (std::size_t k = 0; k < pieces_.size(); ++k) {
      const Piece& p = pieces_[k];
      if (!(p.lower < p.upper)) throw ConfigError("piecewise signal: empty or reversed piece");
      if (k + 1 < pieces_.size() && p.upper != pieces_[k + 1].lower) {
        throw ConfigError("piecewise signal: pieces must be contiguous");
      }
      if (auto* t = std::get_if<PowerTail>(&p.form)) {
        const bool unbounded = std::isinf(p.lower) || std::isinf(p.upper);
        if (unbounded && t->exponent > -2) {
          throw ConfigError("piecewise signal: unbounded power-law piece needs exponent <= -2");
        }
        if (t->exponent < 0 && p.lower <= 0.0 && p.upper > 0.0) {
          throw ConfigError("piecewise signal: power-law piece may not contain 0");
        }
      }
    }
  }

  std::vector<Piece> pieces_;
  std::vector<PointValue> points_;
  std::vector<double> lowers_;
  std::string name_;
};

enum class BuiltinSignal { F1, F2 };

inline PiecewiseSignal builtin_signal(BuiltinSignal which) {
  if (which == BuiltinSignal::F1) {
    // Indicator of the closed interval [-1, 1]; the right endpoint is a point value.
    return PiecewiseSignal({Piece{-kInf, -1.0, Polynomial{{0.0}}},
                            Piece{-1.0, 1.0, Polynomial{{1.0}}},
                            Piece{1.0, kInf, Polynomial{{0.0}}}},
                           {PointValue{1.0, 1.0}}, "f1");
  }
  return PiecewiseSignal({Piece{-kInf, -3.0, PowerTail{9.0, -2}},
                          Piece{-3.0, -2.0, Polynomial{{2.0}}},
                          Piece{-2.0, -1.0, Polynomial{{-0.5}}},
                          Piece{-1.0, 0.0, Polynomial{{1.5}}},
                          Piece{0.0, 1.0, Polynomial{{1.0}}},
                          Piece{1.0, 2.0, Polynomial{{-1.0}}},
                          Piece{2.0, 3.0, Polynomial{{0.0}}},
                          Piece{3.0, kInf, PowerTail{-50.0, -4}}},
                         {}, "f2");
}

inline PiecewiseSignal builtin_signal(std::string_view name) {
  if (name == "f1") return builtin_signal(BuiltinSignal::F1);
  if (name == "f2") return builtin_signal(BuiltinSignal::F2);
  throw ConfigError("unknown built-in signal '" + std::string(name) + "' (valid: f1, f2)");
}

inline double signal_eval(const PiecewiseSignal& signal, double y) { return signal(y); }

/// Exact integral over [a, b] from per-piece antiderivatives.
inline double signal_integrate(const PiecewiseSignal& signal, double a, double b) {
  if (!std::isfinite(a) || !std::isfinite(b)) throw DomainError("signal_integrate: bounds must be finite");
  if (!(a <= b)) throw DomainError("signal_integrate: requires a <= b");
  double sum = 0.0;
  const auto& pieces = signal.pieces();
  for (std::size_t k = signal.piece_index(a); k < pieces.size() && pieces[k].lower < b; ++k) {
    const double lo = std::max(a, pieces[k].lower);
    const double hi = std::min(b, pieces[k].upper);
    sum += detail::integrate_form(pieces[k].form, lo, hi);
  }
  return sum;
}

/// (int_a^b |g|^p)^{1/p}. Constant pieces are exact; others use 16-point
/// Gauss-Legendre on unit-length panels.
inline double signal_lp_norm(const PiecewiseSignal& signal, double p, double a, double b) {
  if (!(p >= 1.0)) throw DomainError("signal_lp_norm: p must be >= 1");
  if (!std::isfinite(a) || !std::isfinite(b) || !(a < b)) {
    throw DomainError("signal_lp_norm: window must be finite with a < b");
  }
  double sum = 0.0;
  const auto& pieces = signal.pieces();
  for (std::size_t k = signal.piece_index(a); k < pieces.size() && pieces[k].lower < b; ++k) {
    const double lo = std::max(a, pieces[k].lower);
    const double hi = std::min(b, pieces[k].upper);
    if (!(lo < hi)) continue;
    const PieceForm& form = pieces[k].form;
    if (is_constant(form)) {
      sum += std::pow(std::abs(eval_form(form, lo)), p) * (hi - lo);
    } else {
      const int panels = std::max(1, static_cast<int>(std::ceil(hi - lo)));
      sum += composite_gauss_legendre(
          [&](double y) { return std::pow(std::abs(eval_form(form, y)), p); }, lo, hi, panels, 16);
    }
  }
  return std::pow(sum, 1.0 / p);
}

}  // namespace kantorovich
