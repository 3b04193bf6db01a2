#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>

#include "kantorovich/quadrature.hpp"

using namespace kantorovich;
using Catch::Matchers::WithinAbs;

TEST_CASE("Gauss-Legendre rules are symmetric and integrate constants", "[quadrature]") {
  for (int n = kMinGaussOrder; n <= kMaxGaussOrder; ++n) {
    const GaussRule& r = gauss_rule(n);
    double total = 0.0;
    for (std::size_t k = 0; k < r.nodes.size(); ++k) {
      total += r.weights[k];
      CHECK_THAT(r.nodes[k] + r.nodes[r.nodes.size() - 1 - k], WithinAbs(0.0, 1e-15));
    }
    CHECK_THAT(total, WithinAbs(2.0, 1e-13));
  }
  CHECK_THROWS_AS(gauss_rule(1), ConfigError);
  CHECK_THROWS_AS(gauss_rule(65), ConfigError);
}

TEST_CASE("gauss_legendre examples", "[quadrature]") {
  CHECK_THAT(gauss_legendre([](double) { return 1.0; }, 0.0, 1.0, 8), WithinAbs(1.0, 1e-15));
  CHECK_THAT(gauss_legendre([](double t) { return t * t; }, 0.0, 1.0, 8), WithinAbs(1.0 / 3.0, 1e-14));
  CHECK_THAT(gauss_legendre([](double t) { return std::sin(t); }, 0.0, std::numbers::pi, 16), WithinAbs(2.0, 1e-12));
}

TEST_CASE("gauss_legendre is exact up to degree 2n-1", "[quadrature]") {
  for (int n : {2, 5, 16, 32}) {
    const int degree = 2 * n - 1;
    const double got = gauss_legendre([&](double t) { return std::pow(t, degree); }, 0.0, 1.0, n);
    CHECK_THAT(got, WithinAbs(1.0 / (degree + 1), 1e-13));
  }
}

TEST_CASE("adaptive_simpson examples", "[quadrature]") {
  CHECK_THAT(adaptive_simpson([](double) { return 1.0; }, 0.0, 1.0, 1e-10), WithinAbs(1.0, 1e-15));
  CHECK_THAT(adaptive_simpson([](double t) { return std::sqrt(t); }, 0.0, 1.0, 1e-10), WithinAbs(2.0 / 3.0, 1e-8));
  CHECK(adaptive_simpson([](double t) { return t; }, 2.0, 2.0, 1e-10) == 0.0);
}

TEST_CASE("adaptive_simpson handles jump discontinuities", "[quadrature]") {
  const auto step = [](double t) { return t < 1.0 / 3.0 ? 0.0 : 1.0; };
  CHECK_THAT(adaptive_simpson(step, 0.0, 1.0, 1e-10), WithinAbs(2.0 / 3.0, 1e-9));
  const auto two_steps = [](double t) { return t < -0.7 ? 2.0 : (t < 1.3 ? -1.0 : 0.5); };
  CHECK_THAT(adaptive_simpson(two_steps, -3.0, 3.0, 1e-10), WithinAbs(2.0 * 2.3 - 2.0 + 0.5 * 1.7, 1e-9));
}

TEST_CASE("adaptive_simpson reports a partial result when the depth cap is hit", "[quadrature]") {
  const auto singular = [](double t) { return t > 0.0 ? 1.0 / t : 0.0; };
  try {
    adaptive_simpson(singular, 0.0, 1.0, 1e-10);
    FAIL("expected QuadratureError");
  } catch (const QuadratureError& e) {
    CHECK(e.partial() > 10.0);
  }
  CHECK_THROWS_AS(adaptive_simpson([](double t) { return t; }, 1.0, 0.0, 1e-10), DomainError);
  CHECK_THROWS_AS(adaptive_simpson([](double t) { return t; }, 0.0, 1.0, 0.0), DomainError);
}

TEST_CASE("composite rule matches antiderivative", "[quadrature]") {
  const double got = composite_gauss_legendre([](double t) { return std::exp(-t) * std::cos(3 * t); }, 0.0, 10.0, 20);
  // int_0^10 e^{-t} cos 3t dt = [e^{-t}(3 sin 3t - cos 3t)/10]_0^10
  const double exact = (std::exp(-10.0) * (3 * std::sin(30.0) - std::cos(30.0)) + 1.0) / 10.0;
  CHECK_THAT(got, WithinAbs(exact, 1e-13));
}
