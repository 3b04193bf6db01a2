#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>

#include "kantorovich/signal_file.hpp"
#include "kantorovich/signals.hpp"

using namespace kantorovich;
using Catch::Matchers::WithinAbs;

TEST_CASE("builtin signals", "[signals]") {
  const PiecewiseSignal f1 = builtin_signal(BuiltinSignal::F1);
  const PiecewiseSignal f2 = builtin_signal("f2");
  CHECK(f1(0.0) == 1.0);
  CHECK(f2(-4.0) == 0.5625);
  CHECK(f2(1.0) == -1.0);
  CHECK(signal_eval(f2, 0.0) == 1.0);
  CHECK(signal_eval(f2, -3.0) == 2.0);
  CHECK(signal_eval(f1, 1.5) == 0.0);
  // closed at both ends
  CHECK(f1(-1.0) == 1.0);
  CHECK(f1(1.0) == 1.0);
  CHECK(f1(std::nextafter(1.0, 2.0)) == 0.0);
  CHECK(f1(std::nextafter(-1.0, -2.0)) == 0.0);
  CHECK(f2(4.0) == -50.0 / 256.0);
  CHECK_THROWS_AS(builtin_signal("f3"), ConfigError);
}

TEST_CASE("signal_integrate examples", "[signals]") {
  const PiecewiseSignal f1 = builtin_signal(BuiltinSignal::F1);
  const PiecewiseSignal f2 = builtin_signal(BuiltinSignal::F2);
  CHECK_THAT(signal_integrate(f1, -2.0, 2.0), WithinAbs(2.0, 1e-15));
  CHECK_THAT(signal_integrate(f1, 0.5, 2.0), WithinAbs(0.5, 1e-15));
  CHECK_THAT(signal_integrate(f2, 3.0, 4.0), WithinAbs(50.0 / 3.0 * (1.0 / 64.0 - 1.0 / 27.0), 1e-14));
  CHECK_THAT(signal_integrate(f2, -6.0, -3.0), WithinAbs(9.0 * (1.0 / 3.0 - 1.0 / 6.0), 1e-14));
  CHECK(signal_integrate(f2, 1.0, 1.0) == 0.0);
  CHECK_THROWS_AS(signal_integrate(f2, 1.0, 0.0), DomainError);
  CHECK_THROWS_AS(signal_integrate(f2, 0.0, kInf), DomainError);
}

TEST_CASE("integration across a power-law pole is rejected", "[signals]") {
  CHECK_THROWS_AS(detail::integrate_form(PowerTail{1.0, -2}, -1.0, 1.0), DomainError);
  CHECK_THROWS_AS(PiecewiseSignal({Piece{-kInf, -1.0, PowerTail{1.0, -2}}, Piece{-1.0, 1.0, PowerTail{1.0, -2}},
                                   Piece{1.0, kInf, PowerTail{1.0, -2}}},
                                  {}, "pole"),
                  ConfigError);
}

TEST_CASE("signal_lp_norm examples", "[signals]") {
  const PiecewiseSignal f1 = builtin_signal(BuiltinSignal::F1);
  CHECK_THAT(signal_lp_norm(f1, 1.0, -2.0, 2.0), WithinAbs(2.0, 1e-15));
  CHECK_THAT(signal_lp_norm(f1, 2.0, -2.0, 2.0), WithinAbs(std::sqrt(2.0), 1e-15));
  CHECK(signal_lp_norm(PiecewiseSignal::constant(0.0), 3.0, -5.0, 5.0) == 0.0);
  // f2 in L^2 on [-20, 20]: constant pieces plus the two tails in closed form
  const PiecewiseSignal f2 = builtin_signal(BuiltinSignal::F2);
  const double tails = 27.0 * (std::pow(3.0, -3) - std::pow(20.0, -3)) + 2500.0 * (std::pow(3.0, -7) - std::pow(20.0, -7)) / 7.0;
  const double body = 4.0 + 0.25 + 2.25 + 1.0 + 1.0 + 0.0;
  CHECK_THAT(signal_lp_norm(f2, 2.0, -20.0, 20.0), WithinAbs(std::sqrt(body + tails), 1e-13));
  CHECK_THROWS_AS(signal_lp_norm(f1, 0.5, -1.0, 1.0), DomainError);
}

TEST_CASE("signal validation", "[signals]") {
  // gap between pieces
  CHECK_THROWS_AS(PiecewiseSignal({Piece{-kInf, 0.0, Polynomial{{0.0}}}, Piece{1.0, kInf, Polynomial{{0.0}}}}, {}, "gap"),
                  ConfigError);
  // does not cover the line
  CHECK_THROWS_AS(PiecewiseSignal({Piece{0.0, kInf, Polynomial{{0.0}}}}, {}, "half"), ConfigError);
  // non-integrable unbounded tail
  CHECK_THROWS_AS(PiecewiseSignal({Piece{-kInf, 1.0, Polynomial{{0.0}}}, Piece{1.0, kInf, PowerTail{1.0, -1}}}, {}, "slow"),
                  ConfigError);
  CHECK_NOTHROW(PiecewiseSignal::constant(3.0));
}

TEST_CASE("breakpoints select the right-hand piece", "[signals][property]") {
  const PiecewiseSignal f2 = builtin_signal(BuiltinSignal::F2);
  const auto& pieces = f2.pieces();
  for (std::size_t k = 1; k < pieces.size(); ++k) {
    const double b = pieces[k].lower;
    CHECK(f2(b) == eval_form(pieces[k].form, b));
  }
}

TEST_CASE("signal_integrate is additive", "[signals][property]") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-10.0, 10.0);
  for (const char* name : {"f1", "f2"}) {
    const PiecewiseSignal g = builtin_signal(name);
    for (int trial = 0; trial < 200; ++trial) {
      double x[3] = {u(rng), u(rng), u(rng)};
      std::sort(x, x + 3);
      const double split = signal_integrate(g, x[0], x[1]) + signal_integrate(g, x[1], x[2]);
      REQUIRE_THAT(split, WithinAbs(signal_integrate(g, x[0], x[2]), 1e-12));
    }
  }
}

TEST_CASE("signal_integrate agrees with adaptive Simpson", "[signals][property]") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-10.0, 10.0);
  const PiecewiseSignal f2 = builtin_signal(BuiltinSignal::F2);
  CHECK_THAT(adaptive_simpson(f2, -5.0, 5.0, 1e-10), WithinAbs(signal_integrate(f2, -5.0, 5.0), 1e-8));
  for (const char* name : {"f1", "f2"}) {
    const PiecewiseSignal g = builtin_signal(name);
    for (int trial = 0; trial < 100; ++trial) {
      double a = u(rng);
      double b = u(rng);
      if (a > b) std::swap(a, b);
      REQUIRE_THAT(adaptive_simpson(g, a, b, 1e-10), WithinAbs(signal_integrate(g, a, b), 1e-8));
    }
  }
}

TEST_CASE("signal files", "[signals]") {
  const auto dir = std::filesystem::temp_directory_path() / "kantorovich_signal_test";
  std::filesystem::create_directories(dir);
  const auto path = dir / "ramp.json";
  {
    std::ofstream out(path);
    out << R"({"name": "ramp", "pieces": [
      {"lower": null, "upper": -2, "power_tail": {"scale": 4, "exponent": -2}},
      {"lower": -2, "upper": 0, "polynomial": [1]},
      {"lower": 0, "upper": 2, "polynomial": [1, 0.5]},
      {"lower": 2, "upper": null, "power_tail": {"scale": 8, "exponent": -2}}],
      "point_values": [{"y": 0, "value": 7}]})";
  }
  const PiecewiseSignal s = load_signal_file(path.string());
  CHECK(s.name() == "ramp");
  CHECK(s(-4.0) == 0.25);
  CHECK(s(0.0) == 7.0);
  CHECK(s(1.0) == 1.5);
  CHECK(s(4.0) == 0.5);
  CHECK_THAT(signal_integrate(s, 0.0, 2.0), WithinAbs(3.0, 1e-15));

  CHECK_THROWS_AS(load_signal_file((dir / "missing.json").string()), IoError);
  CHECK_THROWS_AS(parse_signal_json(nlohmann::json::parse(R"({"pieces": []})"), "x"), ConfigError);
  CHECK_THROWS_AS(parse_signal_json(nlohmann::json::parse(R"({"pieces": [{"lower": null, "upper": null}]})"), "x"),
                  ConfigError);
  std::filesystem::remove_all(dir);
}
