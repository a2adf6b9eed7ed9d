#include <doctest.h>

#include <cmath>

#include "lienard/error.hpp"
#include "lienard/model.hpp"
#include "lienard/sampling.hpp"
#include "lienard/symmetry.hpp"

using namespace lienard;

namespace {

LienardModel harmonic() { return LienardModel::build("x", 1.0, 0.0, {-8.0, 8.0}); }
LienardModel cubic() { return LienardModel::build("x + x^3/3", 1.0, 0.0, {-4.0, 4.0}); }
LienardModel linear_isotonic() { return LienardModel::build("x", 1.0, -2.0, {0.05, 10.0}); }
LienardModel exp_isotonic() { return LienardModel::build("exp(x)", 1.0, -2.0, {-9.0, 2.5}); }

}  // namespace

TEST_CASE("build accepts valid models and rejects invalid ones") {
  CHECK_NOTHROW(harmonic());
  CHECK_NOTHROW(cubic());
  CHECK(cubic().k() == 1.0);
  CHECK(linear_isotonic().k() == doctest::Approx(3.0));

  CHECK_THROWS_AS(LienardModel::build("x", 1.0, 0.5, {0.1, 8.0}), ModelError);
  CHECK_THROWS_AS(LienardModel::build("x", 1.0, 0.25, {0.1, 8.0}), ModelError);
  CHECK_THROWS_AS(LienardModel::build("-x", 1.0, 0.0, {-1.0, 1.0}), ModelError);     // decreasing
  CHECK_THROWS_AS(LienardModel::build("x^2", 1.0, 0.0, {-1.0, 1.0}), ModelError);    // not monotone
  CHECK_THROWS_AS(LienardModel::build("x", 1.0, -2.0, {-1.0, 1.0}), ModelError);     // h crosses 0
  CHECK_THROWS_AS(LienardModel::build("x", 0.0, 0.0, {-1.0, 1.0}), ModelError);      // omega
  CHECK_THROWS_AS(LienardModel::build("x", 1.0, 0.0, {1.0, -1.0}), ModelError);      // empty domain
  CHECK_THROWS_AS(LienardModel::build("x +", 1.0, 0.0, {-1.0, 1.0}), ParseError);
}

TEST_CASE("ode_rhs examples") {
  CHECK(ode_rhs(harmonic(), 0.3, 7.0) == doctest::Approx(-0.3).epsilon(1e-15));
  CHECK(ode_rhs(linear_isotonic(), 1.0, 0.0) == doctest::Approx(1.0).epsilon(1e-15));
  const LienardModel s = LienardModel::build("sinh(x)", 1.0, 0.0, {-5.0, 5.0});
  CHECK(ode_rhs(s, 0.0, 5.0) == doctest::Approx(0.0));
}

TEST_CASE("lagrangian, potential and energy examples") {
  CHECK(lagrangian(harmonic(), 1.0, 0.0) == doctest::Approx(-0.5));
  CHECK(lagrangian(linear_isotonic(), 1.0, 2.0) == doctest::Approx(0.5));
  CHECK(lagrangian(cubic(), 1.0, 1.0) == doctest::Approx(2.0 - 8.0 / 9.0).epsilon(1e-14));

  CHECK(potential(harmonic(), 2.0) == doctest::Approx(2.0));
  CHECK(potential(linear_isotonic(), 1.0) == doctest::Approx(1.5));
  CHECK(potential(exp_isotonic(), 0.0) == doctest::Approx(1.5));

  CHECK(energy(harmonic(), 1.0, 0.0) == doctest::Approx(0.5));
  CHECK(energy(linear_isotonic(), 1.0, 0.0) == doctest::Approx(1.5));
}

TEST_CASE("jacobi_last_multiplier and to_isotonic examples") {
  CHECK(jacobi_last_multiplier(harmonic(), -3.1) == doctest::Approx(1.0));
  CHECK(jacobi_last_multiplier(cubic(), 1.0) == doctest::Approx(4.0));
  CHECK(to_isotonic(harmonic(), 0.7) == doctest::Approx(0.7));
  CHECK(to_isotonic(exp_isotonic(), 0.0) == doctest::Approx(1.0));
  CHECK(to_isotonic(cubic(), 1.0) == doctest::Approx(4.0 / 3.0));
}

TEST_CASE("inverse and coverage") {
  const LienardModel m = cubic();
  for (const double x : {-3.5, -0.2, 0.0, 1.7, 3.9}) CHECK(m.inverse(m.h_at(x)) == doctest::Approx(x).epsilon(1e-12));
  CHECK(m.coverage_radius() == doctest::Approx(std::sqrt(80.0)));
  CHECK(m.covers_full_line());  // h(4) = 25.3 > sqrt(80)
  CHECK_FALSE(harmonic().covers_full_line());  // h(8) = 8 < sqrt(80)
  CHECK(m.xi_range().lo == doctest::Approx(-4.0 - 64.0 / 3.0));
  CHECK(m.xi_range().hi == doctest::Approx(4.0 + 64.0 / 3.0));
}

TEST_CASE("Euler-Lagrange equation reproduces ode_rhs") {
  for (const LienardModel& m : {cubic(), exp_isotonic(), linear_isotonic()}) {
    // Derivatives of h taken here, independently of the cached ones.
    const Expression hp = differentiate(m.h());
    const Expression hpp = differentiate(hp);
    Lcg64 rng(kDefaultSeed);
    const Interval d = m.domain();
    for (int i = 0; i < 100; ++i) {
      const double x = rng.uniform(d.lo + 0.05 * d.width(), d.hi - 0.05 * d.width());
      const double v = rng.uniform(-2.0, 2.0);
      const double h = evaluate(m.h(), x);
      const double h1 = evaluate(hp, x);
      const double h2 = evaluate(hpp, x);
      const double w2 = m.omega() * m.omega();
      const double a = ode_rhs(m, x, v);
      // d/dt(dL/dv) = 2 h' h'' v^2 + h'^2 a, dL/dx = h' h'' v^2 - A h'/h^3 - w^2 h h'.
      const double ddt_Lv = 2.0 * h1 * h2 * v * v + h1 * h1 * a;
      const double L_x = h1 * h2 * v * v - m.A() * h1 / (h * h * h) - w2 * h * h1;
      CHECK(std::abs(ddt_Lv - L_x) <= 1e-9 * (1.0 + std::abs(L_x)));
    }
  }
}

TEST_CASE("point transformation maps orbits to the isotonic oscillator") {
  for (const LienardModel& m : {cubic(), exp_isotonic(), linear_isotonic()}) {
    for (const PhasePoint& p : sample_phase_points(m, 100)) {
      const double a = ode_rhs(m, p.x, p.v);
      const double xi = m.h_at(p.x);
      const double xi_dd = m.hpp_at(p.x) * p.v * p.v + m.hp_at(p.x) * a;
      const double w2 = m.omega() * m.omega();
      const double residual = xi_dd + w2 * xi + m.A() / (xi * xi * xi);
      // Terms reach A / xi^3 ~ e^{25} near the lower end of the exp model.
      const double scale = 1.0 + std::abs(xi_dd) + std::abs(m.A() / (xi * xi * xi));
      CHECK(std::abs(residual) <= 1e-9 * scale);
      if (m.domain().lo > -1.0) CHECK(std::abs(residual) <= 1e-9);
    }
  }
}

TEST_CASE("last multiplier times |delta78| equals omega^5") {
  for (const double omega : {0.5, 1.0, 2.0}) {
    for (const char* h : {"x + x^3/3", "sinh(x)"}) {
      const LienardModel m = LienardModel::build(h, omega, 0.0, {-3.0, 3.0});
      for (const PhasePoint& p : sample_phase_points(m, 100)) {
        const double product = jacobi_last_multiplier(m, p.x) * std::abs(delta78(m, p.t, p.x, p.v));
        CHECK(product == doctest::Approx(std::pow(omega, 5)).epsilon(1e-10));
      }
    }
  }
}
