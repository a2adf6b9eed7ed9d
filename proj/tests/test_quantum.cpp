#include <doctest.h>

#include <cmath>
#include <numbers>
#include <sstream>
#include <string>

#include "lienard/error.hpp"
#include "lienard/polyspec.hpp"
#include "lienard/quantum.hpp"
#include "lienard/symmetry.hpp"

using namespace lienard;

namespace {

LienardModel harmonic() { return LienardModel::build("x", 1.0, 0.0, {-9.0, 9.0}); }
LienardModel cubic(double omega = 1.0) { return LienardModel::build("x + x^3/3", omega, 0.0, {-4.0, 4.0}); }
LienardModel exp_isotonic() { return LienardModel::build("exp(x)", 1.0, -2.0, {-9.0, 2.5}); }
LienardModel linear_isotonic() { return LienardModel::build("x", 1.0, -2.0, {1e-3, 10.0}); }
LienardModel exp_half() { return LienardModel::build("exp(x)", 0.5, 3.0 / 16.0, {-12.0, 3.0}); }

// Closed-form value sampled on the grid, in the same sqrt(h')-weighted
// variable as the eigenvector.
double sampled_overlap(const LienardModel& m, const DiscreteHamiltonian& H, const std::vector<double>& phi,
                       const StationaryState& st) {
  double dot = 0.0, norm = 0.0;
  for (std::size_t i = 0; i < H.size(); ++i) {
    const double psi = st.spatial(m.h_at(H.x[i]));
    dot += phi[i] * psi * H.weight[i] * H.dx;
    norm += psi * psi * H.weight[i] * H.dx;
  }
  return dot / std::sqrt(norm);
}

int sign_changes(const std::vector<double>& phi) {
  double peak = 0.0;
  for (const double p : phi) peak = std::max(peak, std::abs(p));
  int changes = 0;
  double last = 0.0;
  for (const double p : phi) {
    if (std::abs(p) < 1e-8 * peak) continue;  // skip the numerically flat tails
    if (last != 0.0 && (p > 0.0) != (last > 0.0)) ++changes;
    last = p;
  }
  return changes;
}

}  // namespace

TEST_CASE("closed-form eigenvalues") {
  CHECK(closed_form_eigenvalue(cubic(), 0) == doctest::Approx(0.5));
  CHECK(closed_form_eigenvalue(linear_isotonic(), 0) == doctest::Approx(2.5));
  CHECK(closed_form_eigenvalue(exp_half(), 1) == doctest::Approx(1.625));
  for (int n = 0; n < 8; ++n) {
    CHECK(closed_form_eigenvalue(cubic(2.0), n + 1) - closed_form_eigenvalue(cubic(2.0), n) == 2.0);
    CHECK(closed_form_eigenvalue(exp_isotonic(), n + 1) - closed_form_eigenvalue(exp_isotonic(), n) == 2.0);
  }
}

TEST_CASE("closed-form eigenfunctions") {
  {
    const StationaryState s0 = closed_form_eigenfunction(cubic(), 0);
    CHECK(s0.energy == doctest::Approx(0.5));
    CHECK(s0.spatial.s() == 0.0);
    REQUIRE(s0.spatial.degree() == 0);
    CHECK(s0.spatial.coeffs()[0] == doctest::Approx(std::pow(std::numbers::pi, -0.25)).epsilon(1e-10));
  }
  {
    const StationaryState s2 = closed_form_eigenfunction(cubic(), 2);
    CHECK(s2.energy == doctest::Approx(2.5));
    const auto& c = s2.spatial.coeffs();
    REQUIRE(c.size() == 3);
    CHECK(c[1] == 0.0);
    CHECK(c[2] / c[0] == doctest::Approx(-2.0));  // 4 xi^2 - 2
    CHECK(c[2] > 0.0);
  }
  {
    const StationaryState s0 = closed_form_eigenfunction(linear_isotonic(), 0);
    CHECK(s0.energy == doctest::Approx(2.5));
    CHECK(s0.spatial.s() == doctest::Approx(2.0));
    CHECK(s0.spatial.degree() == 0);
  }
  for (int n = 0; n <= 6; ++n) {
    CHECK(closed_form_eigenfunction(cubic(), n).spatial.degree() == n);
    const StationaryState a = closed_form_eigenfunction(exp_isotonic(), n);
    CHECK(a.spatial.s() == doctest::Approx(2.0));
    CHECK(a.spatial.degree() == 2 * n);
    const StationaryState b = closed_form_eigenfunction(exp_half(), n);
    CHECK(b.spatial.s() == doctest::Approx(0.75));
  }
}

TEST_CASE("orthonormality of closed forms") {
  for (const LienardModel& m : {cubic(), exp_isotonic(), exp_half()}) {
    for (int a = 0; a <= 8; ++a) {
      const StationaryState sa = closed_form_eigenfunction(m, a);
      for (int b = a; b <= 8; ++b) {
        const StationaryState sb = closed_form_eigenfunction(m, b);
        const double g = inner_product(m, sa.spatial, sb.spatial);
        CHECK(std::abs(g - (a == b ? 1.0 : 0.0)) <= 1e-8);
      }
    }
  }
}

TEST_CASE("Hamiltonian assembly") {
  const LienardModel m = harmonic();
  const DiscreteHamiltonian H = build_hamiltonian(m, 4000, {-9.0, 9.0});
  REQUIRE(H.size() == 3999);
  const double dx2 = H.dx * H.dx;
  CHECK(H.dx == doctest::Approx(18.0 / 4000.0));
  for (std::size_t i = 0; i < H.size(); i += 111) {
    CHECK(H.d[i] == doctest::Approx(1.0 / dx2 + 0.5 * H.x[i] * H.x[i]).epsilon(1e-13));
  }
  for (const double e : H.e) CHECK(e == doctest::Approx(-0.5 / dx2).epsilon(1e-13));

  const DiscreteHamiltonian C = build_hamiltonian(cubic(), 1000, {-4.0, 4.0});
  for (const double e : C.e) CHECK(e < 0.0);
  CHECK(C.e.size() + 1 == C.d.size());

  CHECK_THROWS(build_hamiltonian(m, 199, {-9.0, 9.0}));
  CHECK_THROWS_AS(build_hamiltonian(m, 4000, {-5.0, 5.0}), ModelError);  // misses [-xi*, xi*]
  CHECK_THROWS_AS(build_hamiltonian(m, 4000, {-9.5, 9.0}), ModelError);  // outside the domain
}

TEST_CASE("Sturm bisection on a 2x2 matrix") {
  DiscreteHamiltonian H;
  H.d = {2.0, 2.0};
  H.e = {-1.0};
  CHECK(sturm_count(H, 0.5) == 0);
  CHECK(sturm_count(H, 2.0) == 1);
  CHECK(sturm_count(H, 3.5) == 2);
  const std::vector<double> E = lowest_eigenvalues(H, 2);
  REQUIRE(E.size() == 2);
  CHECK(E[0] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(E[1] == doctest::Approx(3.0).epsilon(1e-12));
  CHECK_THROWS(lowest_eigenvalues(H, 21));
}

TEST_CASE("harmonic grid spectrum matches the discretization oracle") {
  // The three-point Laplacian adds -(dx^2/24) p^4 to H; first-order
  // perturbation theory gives dE_n = -(dx^2/24)(3/4)(2n^2 + 2n + 1).
  const DiscreteHamiltonian H = build_hamiltonian(harmonic(), 4000, {-9.0, 9.0});
  const std::vector<double> E = lowest_eigenvalues(H, 8);
  const double dx2 = H.dx * H.dx;
  for (int n = 0; n < 8; ++n) {
    const double shift = -(dx2 / 24.0) * 0.75 * (2.0 * n * n + 2.0 * n + 1.0);
    CHECK(std::abs(E[n] - (n + 0.5) - shift) <= 1e-9);
  }
  CHECK(std::abs(E[0] - 0.5) <= 1e-6);
}

TEST_CASE("cubic ground state converges to omega / 2") {
  const LienardModel m = cubic();
  const double e2000 = lowest_eigenvalues(build_hamiltonian(m, 2000, {-4.0, 4.0}), 1)[0];
  const double e4000 = lowest_eigenvalues(build_hamiltonian(m, 4000, {-4.0, 4.0}), 1)[0];
  const double ratio = (e2000 - 0.5) / (e4000 - 0.5);
  CHECK(ratio >= 3.2);
  CHECK(ratio <= 4.8);
  const double richardson = (4.0 * e4000 - e2000) / 3.0;
  CHECK(std::abs(richardson - 0.5) <= 1e-9);
  CHECK(std::abs(e4000 - 0.5) <= 1e-6);
}

TEST_CASE("isotonic grid spectrum") {
  const Spectrum s = compute_spectrum(exp_isotonic(), 6, 4000, {-9.0, 2.5});
  const Spectrum fine = compute_spectrum(exp_isotonic(), 6, 8000, {-9.0, 2.5});
  const double expected[] = {2.5, 4.5, 6.5, 8.5, 10.5, 12.5};
  for (int n = 0; n < 6; ++n) {
    CHECK(s.closed[n] == expected[n]);
    // Second-order scheme: Richardson extrapolation removes the dx^2 term.
    const double extrapolated = (4.0 * fine.numeric[n] - s.numeric[n]) / 3.0;
    CHECK(std::abs(extrapolated - expected[n]) <= 1e-6);
    CHECK(s.numeric[n] < expected[n]);
  }
  for (int n = 0; n < 5; ++n) CHECK(std::abs((s.numeric[n + 1] - s.numeric[n]) - 2.0) <= 2e-4);
}

TEST_CASE("numerical spectrum does not depend on h") {
  // Three maps with the same (omega, A); Richardson error bars from N and 2N.
  struct Case {
    LienardModel m;
    Interval range;
  };
  const Case cases[] = {{harmonic(), {-9.0, 9.0}},
                        {cubic(), {-4.0, 4.0}},
                        {LienardModel::build("sinh(x)", 1.0, 0.0, {-3.5, 3.5}), {-3.5, 3.5}}};
  std::vector<std::vector<double>> values, bounds;
  for (const Case& c : cases) {
    const auto a = lowest_eigenvalues(build_hamiltonian(c.m, 4000, c.range), 6);
    const auto b = lowest_eigenvalues(build_hamiltonian(c.m, 8000, c.range), 6);
    std::vector<double> err(6);
    for (int n = 0; n < 6; ++n) err[n] = 4.0 / 3.0 * std::abs(b[n] - a[n]);
    values.push_back(a);
    bounds.push_back(err);
  }
  for (std::size_t i = 0; i < 3; ++i) {
    for (std::size_t j = i + 1; j < 3; ++j) {
      for (int n = 0; n < 6; ++n) {
        CHECK(std::abs(values[i][n] - values[j][n]) <= 1.1 * (bounds[i][n] + bounds[j][n]));
      }
    }
  }
}

TEST_CASE("grid eigenvectors") {
  const LienardModel m = harmonic();
  const DiscreteHamiltonian H = build_hamiltonian(m, 4000, {-9.0, 9.0});
  const std::vector<double> E = lowest_eigenvalues(H, 4);

  const std::vector<double> phi0 = eigenvector(H, E[0]);
  CHECK(sampled_overlap(m, H, phi0, closed_form_eigenfunction(m, 0)) >= 1.0 - 1e-8);

  const std::vector<double> phi3 = eigenvector(H, E[3]);
  CHECK(sign_changes(phi3) == 3);
  double norm = 0.0;
  for (std::size_t i = 0; i < H.size(); ++i) norm += phi3[i] * phi3[i] * H.weight[i] * H.dx;
  CHECK(std::abs(norm - 1.0) <= 1e-12);
  // Same sign convention as the closed form: overlap positive.
  CHECK(sampled_overlap(m, H, phi3, closed_form_eigenfunction(m, 3)) >= 1.0 - 1e-7);

  // Non-uniform weight: cubic map, n = 2.
  const LienardModel c = cubic();
  const DiscreteHamiltonian Hc = build_hamiltonian(c, 4000, {-4.0, 4.0});
  const std::vector<double> phi2 = eigenvector(Hc, lowest_eigenvalues(Hc, 3)[2]);
  CHECK(sampled_overlap(c, Hc, phi2, closed_form_eigenfunction(c, 2)) >= 1.0 - 1e-7);
  CHECK(eigenvector(Hc, lowest_eigenvalues(Hc, 3)[2]) == phi2);  // deterministic
  const std::vector<double> other = eigenvector(Hc, lowest_eigenvalues(Hc, 3)[2], 1234);
  double diff = 0.0;
  for (std::size_t i = 0; i < phi2.size(); ++i) diff = std::max(diff, std::abs(other[i] - phi2[i]));
  CHECK(diff <= 1e-8);
}

TEST_CASE("time-dependent equation residuals") {
  for (const LienardModel& m : {cubic(), exp_isotonic(), exp_half(), linear_isotonic()}) {
    for (const int n : {0, 2}) {
      const StationaryState st = closed_form_eigenfunction(m, n);
      for (const PhasePoint& p : sample_phase_points(m, 20)) CHECK(pde_residual(m, st, p.t, p.x) <= 1e-10);
    }
  }
  const LienardModel m = cubic();
  StationaryState wrong = closed_form_eigenfunction(m, 0);
  wrong.energy += 0.1;
  CHECK(pde_residual(m, wrong, 0.3, 0.2) > 1e-3);
}

TEST_CASE("characteristics move between levels") {
  {
    const LienardModel m = cubic();
    const StationaryState s0 = closed_form_eigenfunction(m, 0);
    const auto up = apply_characteristic(m, complex_generator(m, "Omega_3-"), s0);
    REQUIRE(up.has_value());
    CHECK(up->energy == doctest::Approx(1.5));
    CHECK(up->n == 1);
    CHECK(up->spatial.s() == 0.0);
    REQUIRE(up->spatial.degree() == 1);
    CHECK(std::abs(up->spatial.coeffs()[0]) <= 1e-14 * std::abs(up->spatial.coeffs()[1]));
    CHECK_FALSE(apply_characteristic(m, complex_generator(m, "Omega_3+"), s0).has_value());
    // Omega_1 = i d_t is the eigenvalue operator: same level back.
    const auto same = apply_characteristic(m, complex_generator(m, "Omega_1"), s0);
    REQUIRE(same.has_value());
    CHECK(same->energy == doctest::Approx(0.5));
    CHECK(same->n == 0);
    CHECK(normalized_overlap(m, same->spatial, s0.spatial) >= 1.0 - 1e-14);
  }
  {
    const LienardModel m = exp_isotonic();
    const StationaryState s0 = closed_form_eigenfunction(m, 0);
    const auto up = apply_characteristic(m, complex_generator(m, "Omega_2-"), s0);
    REQUIRE(up.has_value());
    CHECK(up->energy == doctest::Approx(s0.energy + 2.0));
    CHECK(normalized_overlap(m, up->spatial, closed_form_eigenfunction(m, 1).spatial) >= 1.0 - 1e-9);
    CHECK_FALSE(apply_characteristic(m, complex_generator(m, "Omega_2+"), s0).has_value());
  }
  {
    // A state that is not an eigenstate is rejected.
    const LienardModel m = cubic();
    StationaryState bad = closed_form_eigenfunction(m, 1);
    bad.energy = 0.9;
    CHECK_THROWS(apply_characteristic(m, complex_generator(m, "Omega_3-"), bad));
  }
}

TEST_CASE("ladder reproduces Hermite polynomials") {
  for (const double omega : {1.0, 2.0}) {
    const LienardModel m = cubic(omega);
    const StationaryState g = ladder_generate(m, 0);
    CHECK(normalized_overlap(m, g.spatial, closed_form_eigenfunction(m, 0).spatial) >= 1.0 - 1e-14);
    for (int n = 1; n <= 10; ++n) {
      const StationaryState st = ladder_generate(m, n);
      CHECK(st.energy == doctest::Approx(omega * (n + 0.5)));
      // (-1)^n omega^{n/2} H_n(sqrt(omega) xi), up to one scalar.
      std::vector<double> ref = hermite_coefficients(n);
      for (int j = 0; j <= n; ++j) ref[j] *= std::pow(-1.0, n) * std::pow(omega, 0.5 * n) * std::pow(omega, 0.5 * j);
      const auto& c = st.spatial.coeffs();
      REQUIRE(static_cast<int>(c.size()) == n + 1);
      const double scale = c[n] / ref[n];
      for (int j = 0; j <= n; ++j) {
        if (ref[j] == 0.0) {
          CHECK(std::abs(c[j]) <= 1e-11 * std::abs(c[n]));
        } else {
          CHECK(std::abs(c[j] / (scale * ref[j]) - 1.0) <= 1e-11);
        }
      }
    }
  }
}

TEST_CASE("ladder for the isotonic case") {
  const LienardModel m = exp_isotonic();
  for (int n = 0; n <= 6; ++n) {
    const StationaryState st = ladder_generate(m, n);
    CHECK(st.n == n);
    CHECK(st.energy == doctest::Approx(closed_form_eigenvalue(m, n)));
    CHECK(normalized_overlap(m, st.spatial, closed_form_eigenfunction(m, n).spatial) >= 1.0 - 1e-9);
  }
}

TEST_CASE("creation then annihilation returns the state") {
  for (const LienardModel& m : {cubic(), exp_isotonic()}) {
    const Generator up = complex_generator(m, m.isotonic() ? "Omega_2-" : "Omega_3-");
    const Generator down = complex_generator(m, m.isotonic() ? "Omega_2+" : "Omega_3+");
    for (int n = 0; n <= 5; ++n) {
      const StationaryState st = closed_form_eigenfunction(m, n);
      const auto raised = apply_characteristic(m, up, st);
      REQUIRE(raised.has_value());
      const auto back = apply_characteristic(m, down, *raised);
      REQUIRE(back.has_value());
      CHECK(back->energy == doctest::Approx(st.energy));
      CHECK(normalized_overlap(m, back->spatial, st.spatial) >= 1.0 - 1e-9);
    }
  }
}

TEST_CASE("PDE symmetries map solutions to solutions") {
  for (const LienardModel& m : {cubic(), cubic(2.0), exp_isotonic()}) {
    const auto pts = sample_phase_points(m, 10);
    std::vector<Generator> gens = schrodinger_generators(m);
    for (const Generator& g : complex_generators(m)) gens.push_back(g);
    for (const Generator& g : gens) {
      if (!g.expected_valid) continue;
      for (int n = 0; n <= 3; ++n) {
        const StationaryState st = closed_form_eigenfunction(m, n);
        for (const PhasePoint& p : pts) CHECK_MESSAGE(pde_symmetry_residual(m, g, st, p.t, p.x) <= 1e-8, g.label);
      }
    }
  }
}

TEST_CASE("transcribed coefficients fail the soundness test") {
  // omega != 1 exposes the missing omega factors.
  const LienardModel m = cubic(2.0);
  const StationaryState st = closed_form_eigenfunction(m, 1);
  for (const Generator& g : transcribed_generators(m)) {
    double worst = 0.0;
    for (const PhasePoint& p : sample_phase_points(m, 10)) worst = std::max(worst, pde_symmetry_residual(m, g, st, p.t, p.x));
    CHECK_MESSAGE(worst > 1e-3, g.label);
  }
}

TEST_CASE("von Roos ordering") {
  {
    const LienardModel m = cubic();
    const StationaryState st = closed_form_eigenfunction(m, 0);
    double worst = 0.0;
    for (const PhasePoint& p : sample_phase_points(m, 50)) {
      worst = std::max(worst, vonroos_residual(m, st, -0.25, -0.5, -0.25, p.t, p.x));
    }
    CHECK(worst <= 1e-8);
    CHECK(vonroos_residual(m, st, 0.0, 0.0, -1.0, 0.4, 0.8) > 1e-3);
    // alpha = gamma - 1/4 with beta = -1/2 and the sum rule: alpha = -3/8, gamma = -1/8.
    CHECK(vonroos_residual(m, st, -0.375, -0.5, -0.125, 0.4, 0.8) > 1e-3);
    CHECK_THROWS(vonroos_residual(m, st, 0.0, 0.0, 0.0, 0.4, 0.8));
    CHECK_THROWS_AS(vonroos_residual(cubic(2.0), closed_form_eigenfunction(cubic(2.0), 0), -0.25, -0.5, -0.25, 0.1, 0.2),
                    ModelError);
  }
  {
    const LienardModel m = exp_half();
    const StationaryState st = closed_form_eigenfunction(m, 0);
    for (const PhasePoint& p : sample_phase_points(m, 50)) {
      CHECK(vonroos_residual(m, st, -0.25, -0.5, -0.25, p.t, p.x) <= 1e-8);
    }
    CHECK(vonroos_residual(m, st, 0.0, 0.0, -1.0, 0.4, 0.8) > 1e-3);
  }
}

TEST_CASE("default grid range") {
  const LienardModel m = cubic();
  const Interval r = default_x_range(m, 7);
  CHECK(m.h_at(r.lo) <= -m.coverage_radius() + 1e-9);
  CHECK(m.h_at(r.hi) >= m.coverage_radius() - 1e-9);
  CHECK(r.lo >= -4.0);
  CHECK(r.hi <= 4.0);
  CHECK_NOTHROW(build_hamiltonian(m, 4000, r));
}

TEST_CASE("spectrum and eigenfunction CSV") {
  const LienardModel m = cubic();
  const Spectrum s = compute_spectrum(m, 3, 400, {-4.0, 4.0});
  std::ostringstream os;
  write_spectrum_csv(os, s);
  std::istringstream in(os.str());
  std::string line;
  std::getline(in, line);
  CHECK(line == "n,E_numeric,E_closed,abs_err");
  int rows = 0;
  while (std::getline(in, line)) ++rows;
  CHECK(rows == 3);

  std::ostringstream ef;
  write_eigenfunction_csv(ef, m, s.hamiltonian, eigenvector(s.hamiltonian, s.numeric[0]));
  std::istringstream ein(ef.str());
  std::getline(ein, line);
  CHECK(line == "x,xi,psi");
  rows = 0;
  while (std::getline(ein, line)) ++rows;
  CHECK(rows == 401);
}
