#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "kantorovich/means.hpp"
#include "random_signals.hpp"

using namespace kantorovich;
using Catch::Matchers::WithinAbs;

namespace {

PiecewiseSignal identity_signal() { return PiecewiseSignal({Piece{-kInf, kInf, Polynomial{{0.0, 1.0}}}}, {}, "id"); }

double simpson_mean(const PiecewiseSignal& g, std::int64_t i, double w, double alpha) {
  return adaptive_simpson([&](double t) { return g((static_cast<double>(i) + std::pow(t, alpha)) / (w + 1.0)); },
                          0.0, 1.0, 1e-10);
}

}  // namespace

TEST_CASE("kantorovich_mean examples", "[means]") {
  const PiecewiseSignal c = PiecewiseSignal::constant(-2.5);
  for (double alpha : {0.3, 1.0, 2.0}) CHECK_THAT(kantorovich_mean(c, 7, 3.0, alpha), WithinAbs(-2.5, 1e-15));
  CHECK_THAT(kantorovich_mean(identity_signal(), 0, 1.0, 0.5), WithinAbs(1.0 / 3.0, 1e-13));
  CHECK_THAT(kantorovich_mean(builtin_signal(BuiltinSignal::F1), 0, 9.0, 1.0), WithinAbs(1.0, 1e-15));
  CHECK_THROWS_AS(kantorovich_mean(c, 0, 0.0, 1.0), ConfigError);
  CHECK_THROWS_AS(kantorovich_mean(c, 0, 1.0, -1.0), ConfigError);
  CHECK_THROWS_AS(kantorovich_mean(MeanRequest{}), ConfigError);
}

TEST_CASE("classical_mean examples", "[means]") {
  CHECK_THAT(classical_mean(PiecewiseSignal::constant(4.0), -3, 2.0), WithinAbs(4.0, 1e-15));
  CHECK_THAT(classical_mean(identity_signal(), 0, 2.0), WithinAbs(0.25, 1e-15));
  CHECK_THAT(classical_mean(builtin_signal(BuiltinSignal::F1), 0, 1.0), WithinAbs(1.0, 1e-15));
}

TEST_CASE("mean cuts are breakpoint preimages", "[means]") {
  const PiecewiseSignal f1 = builtin_signal(BuiltinSignal::F1);
  // (i + t^a)/(w+1) = 1 with i = 5, w = 5.5: t^a = 1.5, outside (0, 1)
  CHECK(mean_cuts(MeanRequest{&f1, 5, 5.5, 0.5}) == std::vector<double>{0.0, 1.0});
  // i = 5, w = 4.5: t^2 = 0.5
  const auto cuts = mean_cuts(MeanRequest{&f1, 5, 4.5, 2.0});
  REQUIRE(cuts.size() == 3);
  CHECK_THAT(cuts[1], WithinAbs(std::sqrt(0.5), 1e-15));
}

TEST_CASE("alpha = 1 is the (w+1)-grid Kantorovich mean", "[means][property]") {
  for (const char* name : {"f1", "f2"}) {
    const PiecewiseSignal g = builtin_signal(name);
    for (double w : {5.0, 10.0}) {
      for (std::int64_t i = -50; i <= 50; ++i) {
        const double exact = (w + 1.0) * signal_integrate(g, i / (w + 1.0), (i + 1.0) / (w + 1.0));
        REQUIRE_THAT(kantorovich_mean(g, i, w, 1.0), WithinAbs(exact, 1e-10));
      }
    }
  }
}

TEST_CASE("kantorovich_mean agrees with adaptive Simpson", "[means][property]") {
  std::mt19937_64 rng(2024);
  std::uniform_int_distribution<std::int64_t> index(-60, 60);
  std::uniform_real_distribution<double> rate(0.5, 30.0);
  const double alphas[] = {0.3, 0.5, 1.0, 2.0};
  const PiecewiseSignal builtins[] = {builtin_signal(BuiltinSignal::F1), builtin_signal(BuiltinSignal::F2)};
  for (int trial = 0; trial < 200; ++trial) {
    const PiecewiseSignal g = trial % 2 == 0 ? builtins[(trial / 2) % 2] : testing::random_signal(rng);
    const std::int64_t i = index(rng);
    const double w = rate(rng);
    const double alpha = alphas[trial % 4];
    INFO("trial " << trial << " i=" << i << " w=" << w << " alpha=" << alpha);
    REQUIRE_THAT(kantorovich_mean(g, i, w, alpha), WithinAbs(simpson_mean(g, i, w, alpha), 1e-8));
  }
}

TEST_CASE("piecewise-constant means lie between the extreme values", "[means][property]") {
  const PiecewiseSignal f2 = builtin_signal(BuiltinSignal::F2);
  for (double w : {2.0, 5.0, 10.0}) {
    for (std::int64_t i = -20; i <= 20; ++i) {
      const double lo = i / (w + 1.0);
      const double hi = (i + 1.0) / (w + 1.0);
      // bracket over the image interval from dense samples plus both ends
      double gmin = std::min(f2(lo), f2(std::nextafter(hi, lo)));
      double gmax = std::max(f2(lo), f2(std::nextafter(hi, lo)));
      for (int k = 1; k < 1000; ++k) {
        const double v = f2(lo + (hi - lo) * k / 1000.0);
        gmin = std::min(gmin, v);
        gmax = std::max(gmax, v);
      }
      if (hi <= -3.0 || lo >= 3.0) continue;  // power-law tails are not constant
      for (double alpha : {0.5, 1.0, 2.0}) {
        const double m = kantorovich_mean(f2, i, w, alpha);
        CHECK(m >= gmin - 1e-14);
        CHECK(m <= gmax + 1e-14);
      }
    }
  }
}

TEST_CASE("halving the Gauss order barely moves the mean", "[means][property]") {
  std::mt19937_64 rng(99);
  std::uniform_int_distribution<std::int64_t> index(-40, 40);
  for (int trial = 0; trial < 100; ++trial) {
    const PiecewiseSignal g = testing::random_signal(rng);
    const double alpha = trial % 3 == 0 ? 0.3 : (trial % 3 == 1 ? 0.5 : 2.0);
    const MeanRequest req{&g, index(rng), 7.0, alpha};
    REQUIRE_THAT(kantorovich_mean(req, 8), WithinAbs(kantorovich_mean(req, 16), 1e-9));
  }
}
