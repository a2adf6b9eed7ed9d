#pragma once

// Stationary Schrodinger operator of the model, its closed-form eigenpairs,
// a three-point numerical eigensolver, symmetry-characteristic ladders and
// the von Roos cross-check.

#include <complex>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <vector>

#include "lienard/model.hpp"
#include "lienard/polyspec.hpp"
#include "lienard/sampling.hpp"
#include "lienard/symmetry.hpp"

namespace lienard {

/// psi(t, x) = e^{-i E t} spatial(h(x)).
struct StationaryState {
  double energy = 0.0;
  QuasiPolynomial spatial{1.0, 0.0, {}};
  int n = 0;
};

/// Symmetric tridiagonal form of
///   H = -(1/(2h')) d/dx((1/h') d/dx) + V
/// on the interior nodes of a uniform grid with Dirichlet ends.
struct DiscreteHamiltonian {
  Interval x_range;
  int n_grid = 0;          // number of intervals
  double dx = 0.0;
  std::vector<double> x;       // interior nodes x_1 .. x_{N-1}
  std::vector<double> d;       // diagonal
  std::vector<double> e;       // off-diagonal, e[i] couples i and i+1
  std::vector<double> weight;  // h'(x_i)

  std::size_t size() const { return d.size(); }
};

/// omega (n + 1/2) for A = 0, 2 omega (n + 1/2 + k/4) otherwise.
double closed_form_eigenvalue(const LienardModel& m, int n);

/// H_n(sqrt(omega) xi) e^{-omega xi^2/2} (A = 0) or
/// xi^{(k+1)/2} L_n^{k/2}(omega xi^2) e^{-omega xi^2/2} (A != 0), unit norm
/// under inner_product and positive leading coefficient (so the outermost
/// lobe is positive).
StationaryState closed_form_eigenfunction(const LienardModel& m, int n);

/// Preimage of the xi-interval where the n_max-th closed-form eigenfunction
/// exceeds 1e-16 of its maximum, widened to the coverage radius and clipped
/// to the model domain.
Interval default_x_range(const LienardModel& m, int n_max);

/// Throws ModelError when h(x_range) misses [-xi*, xi*] (A = 0) or does not
/// reach xi* (A != 0).
DiscreteHamiltonian build_hamiltonian(const LienardModel& m, int n_grid, Interval x_range);

/// Number of eigenvalues strictly below lambda (Sturm count).
int sturm_count(const DiscreteHamiltonian& H, double lambda);

/// The `count` smallest eigenvalues, ascending, by bisection to
/// 1e-12 (1 + |E|). count <= 20.
std::vector<double> lowest_eigenvalues(const DiscreteHamiltonian& H, int count);

/// Grid eigenfunction phi at the interior nodes for an eigenvalue estimate E:
/// inverse iteration, normalized to sum phi^2 h' dx = 1, outermost lobe positive.
std::vector<double> eigenvector(const DiscreteHamiltonian& H, double E, std::uint64_t seed = kDefaultSeed);

struct Spectrum {
  DiscreteHamiltonian hamiltonian;
  std::vector<double> numeric;
  std::vector<double> closed;
};

Spectrum compute_spectrum(const LienardModel& m, int levels, int n_grid, Interval x_range);

/// |2i psi_t + psi_xx/h'^2 - h'' psi_x/h'^3 + (A/h^2 - omega^2 h^2) psi| / (1 + |psi| (1 + E)).
double pde_residual(const LienardModel& m, const StationaryState& st, double t, double x);

/// Characteristic Q = g_psi psi - tau psi_t - eta psi_x of a phase-carrying
/// complex generator applied to a stationary state. Returns the state with
/// energy E - rate and the extracted spatial part, or nullopt when the result
/// vanishes (coefficients below 1e-13 of the term scale).
std::optional<StationaryState> apply_characteristic(const LienardModel& m, const Generator& g,
                                                    const StationaryState& st);

/// Ground state raised n times with Omega_3- (A = 0) or Omega_2- (A != 0);
/// normalized and sign-fixed after every step.
StationaryState ladder_generate(const LienardModel& m, int n);

/// Characteristic of g applied to st, as a function of (t, x), inserted in
/// the time-dependent equation. Same normalization as pde_residual.
double pde_symmetry_residual(const LienardModel& m, const Generator& g, const StationaryState& st, double t,
                             double x);

/// |<F, G>| / sqrt(<F, F> <G, G>) under inner_product.
double normalized_overlap(const LienardModel& m, const QuasiPolynomial& F, const QuasiPolynomial& G);

/// Residual of the von Roos ordered equation for phi = sqrt(h') psi with
/// ordering parameters (alpha, beta, gamma), alpha + beta + gamma = -1, and
/// the closed-form potentials for omega = 1 (A = 0) or omega = 1/2 (A != 0).
double vonroos_residual(const LienardModel& m, const StationaryState& st, double alpha, double beta, double gamma,
                        double t, double x);

/// Columns n,E_numeric,E_closed,abs_err.
void write_spectrum_csv(std::ostream& os, const Spectrum& s);
/// Columns x,xi,psi over the grid, Dirichlet ends included.
void write_eigenfunction_csv(std::ostream& os, const LienardModel& m, const DiscreteHamiltonian& H,
                             const std::vector<double>& phi);

}  // namespace lienard
