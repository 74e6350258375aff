#include <cmath>
#include <random>
#include <stdexcept>

#include "doctest.h"
#include "rramtk/model.hpp"
#include "test_helpers.hpp"

using namespace rramtk;
using namespace rramtk::testing;

TEST_CASE("current follows the polarity-split sinh law") {
  const ModelParams& p = builtin_params("exp-10k17k");

  CHECK(current(p, 12.0e3, 0.0) == 0.0);
  CHECK(current(p, 123.0, 0.0) == 0.0);

  // 0.24/16250*sinh(2.81*0.5), cross-checked against a sinh Taylor series:
  // sinh(1.405) = 1.405 + 1.405^3/6 + 1.405^5/120 + ... = 1.9150288...
  const double i = current(p, 16250.0, 0.5);
  CHECK(i == doctest::Approx(2.8283e-5).epsilon(1e-4));
  const double taylor = [] {
    double x = 1.405, term = x, acc = x;
    for (int k = 1; k < 12; ++k) {
      term *= x * x / ((2 * k) * (2 * k + 1));
      acc += term;
    }
    return acc;
  }();
  CHECK(i == doctest::Approx(0.24 / 16250.0 * taylor).epsilon(1e-12));

  // odd symmetry holds here because a_p = a_n and b_p = b_n in this fit
  CHECK(current(p, 16250.0, -0.5) == doctest::Approx(-i).epsilon(1e-12));

  CHECK_THROWS_AS(current(p, 0.0, 0.5), std::domain_error);
  CHECK_THROWS_AS(current(p, -10.0, 0.5), std::domain_error);
}

TEST_CASE("current law: sign and strict monotonicity in R") {
  std::mt19937 rng(7);
  for (int k = 0; k < 200; ++k) {
    const auto c = draw_case(rng, WindowKind::exponential, k % 2 == 0);
    const double v = c.v_bias;
    const double i1 = current(c.params, c.r0, v);
    const double i2 = current(c.params, c.r0 * 1.5, v);
    CHECK(std::signbit(i1) == std::signbit(v));
    CHECK(std::abs(i2) < std::abs(i1));
  }
}

TEST_CASE("sensitivity branches and exact zero at v = 0") {
  const ModelParams& p = builtin_params("exp-10k17k");
  CHECK(sensitivity(p, 0.0) == 0.0);
  // 743.47*(e^{6.51*0.8} - 1)
  CHECK(sensitivity(p, 0.8) ==
        doctest::Approx(743.47 * std::expm1(6.51 * 0.8)).epsilon(1e-15));
  CHECK(sensitivity(p, 0.8) == doctest::Approx(1.351e5).epsilon(1e-3));
  // -6.8e4*(e^{0.31*0.8} - 1)
  CHECK(sensitivity(p, -0.8) ==
        doctest::Approx(-6.8e4 * std::expm1(0.31 * 0.8)).epsilon(1e-15));
  CHECK(sensitivity(p, -0.8) == doctest::Approx(-1.914e4).epsilon(1e-3));
}

TEST_CASE("boundary polynomial evaluation") {
  const ModelParams& p10 = builtin_params("exp-10k17k");
  CHECK(boundary(p10, 0.8) == 16710.0);  // r_p1 = 0 in this fit
  const ModelParams& p45 = builtin_params("exp-4k5-6k");
  CHECK(boundary(p45, 1.2) == doctest::Approx(3085.0 + 1862.0 * 1.2).epsilon(1e-15));
  CHECK(boundary(p45, 1.2) == doctest::Approx(5319.4).epsilon(1e-12));
  CHECK(boundary(p45, 1e-300) == doctest::Approx(3085.0));  // v -> 0+ gives r_p0

  ModelParams q = toy_quadratic();
  q.r_p1 = 3.0;
  q.r_p2 = 5.0;
  CHECK(boundary(q, 2.0) == doctest::Approx(2.0 + 6.0 + 20.0).epsilon(1e-15));
}

TEST_CASE("window function, both variants") {
  ModelParams q = toy_quadratic();
  CHECK(window(q, 2.0, 1.0) == 0.0);              // R at the boundary
  CHECK(window(q, 1.0, 1.0) == doctest::Approx(1.0).epsilon(1e-15));  // (2-1)^2
  CHECK(window(q, 3.0, 1.0) == 0.0);              // beyond the boundary: held
  CHECK(window(q, 1.0, 0.0) == 0.0);

  const ModelParams& p = builtin_params("exp-10k17k");
  // -1 + e^{5.11e-4 * (16710 - 16250)} = -1 + e^{0.23506}
  CHECK(window(p, 16250.0, 0.8) ==
        doctest::Approx(std::expm1(5.11e-4 * 460.0)).epsilon(1e-15));
  CHECK(window(p, 16250.0, 0.8) == doctest::Approx(0.2650).epsilon(1e-3));
  CHECK(window(p, 16710.0, 0.8) == 0.0);
  CHECK(window(p, 17000.0, 0.8) == 0.0);

  CHECK_THROWS_AS(window(p, -1.0, 0.8), std::domain_error);
}

TEST_CASE("smooth_theta: values, exact complement, monotone") {
  CHECK(smooth_theta(0.0, 1.0) == 0.5);
  CHECK(smooth_theta(std::log(3.0), 1.0) == doctest::Approx(0.75).epsilon(1e-15));
  const double b = 0.37;
  CHECK(smooth_theta(b * std::log(3.0), b) == doctest::Approx(0.75).epsilon(1e-12));
  CHECK(std::abs(1.0 - smooth_theta(50.0 * b, b)) < 1e-20);

  std::mt19937 rng(3);
  // stay where (0,1) is representable; the tails round to exactly 0 / 1
  std::uniform_real_distribution<double> ux(-25.0, 25.0);
  double prev = -1;
  for (int k = 0; k < 500; ++k) {
    const double x = ux(rng);
    const double th = smooth_theta(x, 0.8);
    CHECK(th > 0.0);
    CHECK(th < 1.0);
    CHECK(th + smooth_theta(-x, 0.8) == 1.0);  // bit-exact complement
  }
  CHECK(smooth_theta(60.0, 0.8) + smooth_theta(-60.0, 0.8) == 1.0);
  for (double x = -5.0; x <= 5.0; x += 0.1) {
    const double th = smooth_theta(x, 0.5);
    CHECK(th > prev);
    prev = th;
  }

  CHECK_THROWS_AS(smooth_theta(1.0, 0.0), std::domain_error);
  CHECK_THROWS_AS(smooth_theta(1.0, -2.0), std::domain_error);
}

TEST_CASE("analytical_step: quadratic toy case against the hand formula and RK4") {
  const ModelParams q = toy_quadratic();
  // dR/dt = (2 - R)^2 from R0 = 1 for 1 s -> (1 + 1*2*1*1)/(1 + 1*1*1) = 1.5
  const double r = analytical_step(q, 1.0, 1.0, 1.0);
  CHECK(r == doctest::Approx(1.5).epsilon(1e-12));

  const double rk = rk4_reference([](double y) { return (2.0 - y) * (2.0 - y); },
                                  1.0, 1.0, 10000);
  CHECK(rel_diff(r, rk) < 1e-9);

  CHECK(analytical_step(q, 1.0, 1.0, 0.0) == 1.0);
  CHECK_THROWS_AS(analytical_step(q, 1.0, 1.0, -1.0), std::domain_error);
}

TEST_CASE("analytical_step: guard hold and boundary exclusion") {
  const ModelParams& p = builtin_params("exp-10k17k");
  CHECK(analytical_step(p, 16250.0, 0.3, 10.0) == 16250.0);   // |v| <= guard
  CHECK(analytical_step(p, 16250.0, -0.5, 10.0) == 16250.0);  // guard is symmetric
  CHECK(analytical_step(p, 16800.0, 0.8, 10.0) == 16800.0);   // R0 >= r_p(v)
  CHECK(analytical_step(p, 9000.0, -0.8, 10.0) == 9000.0);    // R0 <= r_n(v)

  const ModelParams q = toy_quadratic();
  CHECK(analytical_step(q, 2.5, 1.0, 5.0) == 2.5);
  CHECK(analytical_step(q, 0.4, -1.0, 5.0) == 0.4);
}

TEST_CASE("analytical_step: appendix-fit case matches an independent RK4") {
  const ModelParams& p = builtin_params("exp-10k17k");
  const double s = sensitivity(p, 0.8);
  const double rk = rk4_reference(
      [&](double y) {
        const double f = y < 16710.0 ? std::expm1(5.11e-4 * (16710.0 - y)) : 0.0;
        return s * f;
      },
      16250.0, 100e-6, 10000);
  const double r = analytical_step(p, 16250.0, 0.8, 100e-6);
  CHECK(rel_diff(r, rk) < 1e-9);
  CHECK(r == doctest::Approx(16254.0).epsilon(1e-4));
}

TEST_CASE("analytical_step: re-derived exponential negative branch against RK4") {
  const ModelParams& p = builtin_params("exp-10k17k");
  const double s = sensitivity(p, -0.8);
  const double rn = boundary(p, -0.8);  // 29300 - 23690*0.8
  CHECK(rn == doctest::Approx(10348.0).epsilon(1e-12));
  const double rk = rk4_reference(
      [&](double y) {
        const double f = y > rn ? std::expm1(1.17e-3 * (y - rn)) : 0.0;
        return s * f;
      },
      16250.0, 100e-6, 20000);
  const double r = analytical_step(p, 16250.0, -0.8, 100e-6);
  CHECK(rel_diff(r, rk) < 1e-8);
  // ON transition moves far more than the +0.8 V case in one pulse
  CHECK(16250.0 - r > 100.0 * (analytical_step(p, 16250.0, 0.8, 100e-6) - 16250.0));
}

TEST_CASE("numeric_step agrees with analytical_step (oracle pairing)") {
  const ModelParams q = toy_quadratic();
  CHECK(numeric_step(q, 1.0, 1.0, 0.0, 10) == 1.0);
  CHECK(std::abs(numeric_step(q, 1.0, 1.0, 1.0, 10000) - 1.5) < 1e-8);

  const ModelParams& p = builtin_params("exp-10k17k");
  const double a = analytical_step(p, 16250.0, 0.8, 100e-6);
  const double n = numeric_step(p, 16250.0, 0.8, 100e-6, 10000);
  CHECK(rel_diff(a, n) < 1e-6);

  CHECK_THROWS_AS(numeric_step(q, 1.0, 1.0, 1.0, 0), std::domain_error);
  CHECK_THROWS_AS(numeric_step(q, 1.0, 1.0, -1.0, 10), std::domain_error);
}

TEST_CASE("oracle agreement over randomized draws, both variants and polarities") {
  std::mt19937 rng(42);
  for (WindowKind kind : {WindowKind::quadratic, WindowKind::exponential}) {
    for (bool neg : {false, true}) {
      for (int k = 0; k < 60; ++k) {
        const auto c = draw_case(rng, kind, neg);
        const double a = analytical_step(c.params, c.r0, c.v_bias, c.t);
        const double n = numeric_step(c.params, c.r0, c.v_bias, c.t, 10000);
        CAPTURE(k);
        CAPTURE(c.v_bias);
        CAPTURE(c.t);
        CHECK(rel_diff(a, n) < 1e-6);
      }
    }
  }
}

TEST_CASE("zero-bias fixed point and boundary confinement") {
  std::mt19937 rng(11);
  for (int k = 0; k < 1000; ++k) {
    const auto c = draw_case(rng, k % 2 ? WindowKind::exponential : WindowKind::quadratic,
                             k % 3 == 0);
    CHECK(analytical_step(c.params, c.r0, 0.0, c.t) == c.r0);

    const double r1 = analytical_step(c.params, c.r0, c.v_bias, c.t);
    const double rb = boundary(c.params, c.v_bias);
    if (c.v_bias > 0) {
      CHECK(r1 > c.r0);
      CHECK(r1 < rb);
    } else {
      CHECK(r1 < c.r0);
      CHECK(r1 > rb);
    }
    // monotone in t
    const double r2 = analytical_step(c.params, c.r0, c.v_bias, 2.0 * c.t);
    if (c.v_bias > 0)
      CHECK(r2 >= r1);
    else
      CHECK(r2 <= r1);
  }
}

TEST_CASE("semigroup composition of the closed form") {
  std::mt19937 rng(13);
  for (int k = 0; k < 100; ++k) {
    const auto c = draw_case(rng, k % 2 ? WindowKind::exponential : WindowKind::quadratic,
                             k % 2 == 0);
    const double whole = analytical_step(c.params, c.r0, c.v_bias, c.t);
    for (int parts : {2, 7, 100}) {
      double r = c.r0;
      for (int i = 0; i < parts; ++i)
        r = analytical_step(c.params, r, c.v_bias, c.t / parts);
      CHECK(rel_diff(whole, r) < 1e-9);
    }
  }
}

TEST_CASE("state change rate is monotone in |V|") {
  std::mt19937 rng(17);
  int checked = 0;
  while (checked < 300) {
    const auto c = draw_case(rng, checked % 2 ? WindowKind::exponential : WindowKind::quadratic,
                             false);
    const double v1 = std::abs(c.v_bias);
    const double v2 = v1 * 1.25;
    if (boundary(c.params, v2) < boundary(c.params, v1)) continue;
    if (boundary(c.params, v1) <= c.r0) continue;
    const double d1 = analytical_step(c.params, c.r0, v1, c.t) - c.r0;
    const double d2 = analytical_step(c.params, c.r0, v2, c.t) - c.r0;
    CHECK(d2 >= d1);
    ++checked;
  }
}

TEST_CASE("eta = -1 flips the switching direction") {
  ModelParams p = builtin_params("exp-10k17k");
  p.eta = -1;
  // positive-bias switching is excluded (R < eta*r_p never holds)
  CHECK(analytical_step(p, 16250.0, 0.8, 1.0) == 16250.0);
  // negative bias now drives the state upward; verify against RK4
  const double s = sensitivity(p, -0.8);
  const double rn = boundary(p, -0.8);
  const double rk = rk4_reference(
      [&](double y) { return s * std::expm1(-1.17e-3 * (y - rn)); },
      16250.0, 50e-6, 20000);
  const double a = analytical_step(p, 16250.0, -0.8, 50e-6);
  CHECK(rel_diff(a, rk) < 1e-8);
  CHECK(a > 16250.0);
}

TEST_CASE("smoothed evaluation tracks the exact branches away from v = 0") {
  const ModelParams& p = builtin_params("exp-10k17k");
  CHECK(sensitivity_smoothed(p, 0.8) ==
        doctest::Approx(sensitivity(p, 0.8)).epsilon(1e-12));
  CHECK(window_smoothed(p, 16250.0, 0.8) ==
        doctest::Approx(window(p, 16250.0, 0.8)).epsilon(1e-12));
  // smoothed numeric integration still agrees at read-scale tolerances
  const double n_exact = numeric_step(p, 16250.0, 0.8, 100e-6, 5000, false);
  const double n_smooth = numeric_step(p, 16250.0, 0.8, 100e-6, 5000, true);
  CHECK(rel_diff(n_exact, n_smooth) < 1e-9);
}

TEST_CASE("parameter validation") {
  ModelParams p = builtin_params("exp-10k17k");
  CHECK_NOTHROW(p.validate());
  p.eta = 2;
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
  p = builtin_params("exp-10k17k");
  p.k_p = 0;
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);

  DeviceState s{13e3, 10e3, 17e3};
  CHECK_NOTHROW(s.validate());
  s.r = 9e3;
  CHECK_THROWS_AS(s.validate(), std::invalid_argument);

  CHECK_THROWS_AS(builtin_params("nope"), std::invalid_argument);
  CHECK(builtin_param_names().size() == 2);
}
