#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <string>

#include "lienard/classical.hpp"
#include "lienard/model.hpp"

using namespace lienard;

namespace {

constexpr double kPi = std::numbers::pi;

LienardModel harmonic() { return LienardModel::build("x", 1.0, 0.0, {-8.0, 8.0}); }
LienardModel cubic(double omega = 1.0) { return LienardModel::build("x + x^3/3", omega, 0.0, {-4.0, 4.0}); }
LienardModel linear_isotonic() { return LienardModel::build("x", 1.0, -2.0, {0.05, 10.0}); }

}  // namespace

TEST_CASE("harmonic orbit returns after one period") {
  const LienardModel m = harmonic();
  const Trajectory tr = integrate_orbit(m, 1.0, 0.0, 2.0 * kPi, default_time_step(m));
  CHECK(tr.size() == 2001);
  CHECK(tr.t.back() == doctest::Approx(2.0 * kPi).epsilon(1e-14));
  CHECK(std::abs(tr.x.back() - 1.0) <= 1e-8);
  for (std::size_t i = 0; i < tr.size(); i += 97) CHECK(std::abs(tr.x[i] - std::cos(tr.t[i])) <= 1e-8);
}

TEST_CASE("isotonic orbit stays on the positive half-line") {
  const LienardModel m = linear_isotonic();
  const Trajectory tr = integrate_orbit(m, 1.0, 0.0, 10.0 * kPi, default_time_step(m));
  CHECK(*std::min_element(tr.x.begin(), tr.x.end()) > 0.0);
}

TEST_CASE("cubic orbit is a sinusoid in xi = h(x)") {
  const LienardModel m = cubic();
  const Trajectory tr = integrate_orbit(m, 1.0, 0.0, 4.0 * kPi, default_time_step(m));
  for (std::size_t i = 0; i < tr.size(); i += 13) {
    CHECK(std::abs(m.h_at(tr.x[i]) - (4.0 / 3.0) * std::cos(tr.t[i])) <= 1e-8);
  }
}

TEST_CASE("period estimates") {
  {
    const LienardModel m = harmonic();
    const Trajectory tr = integrate_orbit(m, 1.0, 0.0, 5.0 * 2.0 * kPi, default_time_step(m));
    CHECK(estimate_period(tr) == doctest::Approx(2.0 * kPi).epsilon(1e-9));
  }
  {
    const LienardModel m = cubic(2.0);
    const Trajectory tr = integrate_orbit(m, 0.8, 0.3, 5.0 * kPi, default_time_step(m));
    CHECK(estimate_period(tr) == doctest::Approx(kPi).epsilon(1e-8));
  }
  {
    // Amplitudes from just above the equilibrium xi = 2^{1/4} to far out.
    const LienardModel m = linear_isotonic();
    double lo = 1e9, hi = 0.0;
    for (const double x0 : {1.3, 1.6, 2.0, 2.6, 3.5}) {
      const Trajectory tr = integrate_orbit(m, x0, 0.0, 5.0 * kPi, default_time_step(m));
      const double T = estimate_period(tr);
      CHECK(T == doctest::Approx(kPi).epsilon(1e-6));
      lo = std::min(lo, T);
      hi = std::max(hi, T);
    }
    CHECK((hi - lo) / lo <= 1e-6);
  }
}

TEST_CASE("moving start uses the position section") {
  const LienardModel m = cubic();
  const Trajectory tr = integrate_orbit(m, 0.0, 1.2, 6.0 * 2.0 * kPi, default_time_step(m));
  CHECK(estimate_period(tr) == doctest::Approx(2.0 * kPi).epsilon(1e-8));
}

TEST_CASE("energy is conserved over 50 periods") {
  for (const LienardModel& m : {cubic(), linear_isotonic()}) {
    const double T = (m.isotonic() ? kPi : 2.0 * kPi) / m.omega();
    const Trajectory tr = integrate_orbit(m, 1.8, 0.0, 50.0 * T, default_time_step(m));
    CHECK(tr.max_relative_energy_drift() <= 1e-8);
  }
}

TEST_CASE("RK4 error drops sixteenfold when the step halves") {
  const LienardModel m = harmonic();
  const double t_end = 10.0;
  const double dt = 0.05;
  const double coarse = std::abs(integrate_orbit(m, 1.0, 0.0, t_end, dt).x.back() - std::cos(t_end));
  const double fine = std::abs(integrate_orbit(m, 1.0, 0.0, t_end, dt / 2.0).x.back() - std::cos(t_end));
  const double factor = coarse / fine;
  CHECK(factor >= 12.0);
  CHECK(factor <= 20.0);
}

TEST_CASE("hidden linearity of u = h^2 / 2") {
  {
    const LienardModel m = harmonic();
    const Trajectory tr = integrate_orbit(m, 1.0, 0.0, 4.0 * kPi, default_time_step(m));
    CHECK(hidden_linearity_residual(m, tr) <= 1e-7);
  }
  {
    const LienardModel m = linear_isotonic();
    const Trajectory tr = integrate_orbit(m, 1.0, 0.0, 4.0 * kPi, default_time_step(m));
    CHECK(hidden_linearity_residual(m, tr) <= 1e-6);
  }
  {
    const LienardModel m = cubic();
    const Trajectory tr = integrate_orbit(m, 1.0, 0.0, 4.0 * kPi, default_time_step(m));
    CHECK(hidden_linearity_residual(m, tr) <= 1e-6);
  }
  {
    // Samples at the wrong frequency are not harmonic at 2 omega.
    const LienardModel m = harmonic();
    Trajectory tr = integrate_orbit(m, 1.0, 0.0, 4.0 * kPi, default_time_step(m));
    for (std::size_t i = 0; i < tr.size(); ++i) tr.x[i] = std::cos(1.3 * tr.t[i]);
    CHECK(hidden_linearity_residual(m, tr) > 1e-2);
  }
}

TEST_CASE("leaving the domain is reported") {
  const LienardModel m = LienardModel::build("x", 1.0, 0.0, {-0.5, 2.0});
  try {
    integrate_orbit(m, 1.0, 0.0, 2.0 * kPi, default_time_step(m));
    FAIL("expected DomainExitError");
  } catch (const DomainExitError& e) {
    CHECK(e.time() > 0.0);
    CHECK(e.time() < kPi);
  }
}

TEST_CASE("trajectory CSV") {
  const LienardModel m = cubic();
  const Trajectory tr = integrate_orbit(m, 1.0, 0.0, 0.01, 0.005);
  std::ostringstream os;
  write_trajectory_csv(os, tr);
  std::istringstream in(os.str());
  std::string line;
  std::getline(in, line);
  CHECK(line == "t,x,v,energy,u");
  int rows = 0;
  while (std::getline(in, line)) ++rows;
  CHECK(rows == 3);
}
