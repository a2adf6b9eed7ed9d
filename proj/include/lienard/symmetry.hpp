#pragma once

// Point-symmetry generators of the Lienard-II equation and of its
// Schrodinger equation, prolongation-based symmetry checks, Noether
// classification and the Gamma_7 / Gamma_8 determinant.

#include <array>
#include <complex>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "lienard/model.hpp"
#include "lienard/sampling.hpp"

namespace lienard {

using Complex = std::complex<double>;

/// Sum of separable terms  scale * T(t) * X(x). Partial derivatives are exact:
/// each single-variable factor is differentiated symbolically.
///
/// Each term may carry `xi_poly`, the coefficient pushed to xi = h(x):
/// for dt- and psi-coefficients X(x) = xi_poly(h(x)); for dx-coefficients
/// X(x) h'(x) = xi_poly(h(x)).
class Coefficient {
 public:
  Coefficient& add(Complex scale, const Expression& t_factor, const Expression& x_factor,
                   std::vector<double> xi_poly = {});

  /// d^dt/dt^dt d^dx/dx^dx of the coefficient, dt + dx <= 2 per variable.
  Complex operator()(double t, double x, int dt = 0, int dx = 0) const;
  double real(double t, double x, int dt = 0, int dx = 0) const { return (*this)(t, x, dt, dx).real(); }

  bool empty() const { return terms_.empty(); }
  bool is_real() const;

  struct Term {
    Complex scale;
    std::array<Expression, 3> t_derivs;  // T, T', T''
    std::array<Expression, 3> x_derivs;  // X, X', X''
    std::vector<double> xi_poly;
  };
  const std::vector<Term>& terms() const { return terms_; }
  Coefficient scaled(Complex c) const;

 private:
  std::vector<Term> terms_;
};

/// tau(t,x) d_t + eta(t,x) d_x + psi(t,x) psi d_psi.
struct Generator {
  std::string label;
  Coefficient tau;
  Coefficient eta;
  Coefficient psi;
  /// For complex PDE generators: all time factors combine into e^{i rate t}.
  std::optional<double> phase_rate;
  /// Whether the generator is expected to be a symmetry of the model's case.
  bool expected_valid = true;

  Generator scaled(double c) const;
};

enum class Classification { noether, lie_only, not_symmetry };
const char* to_string(Classification c);

/// Gamma_1 .. Gamma_8. All are flagged valid when A = 0; only Gamma_1..3 when A != 0.
std::vector<Generator> standard_generators(const LienardModel& m);

/// Xi_1 .. Xi_5 of the Schrodinger equation (Xi_4, Xi_5 flagged valid only for A = 0).
std::vector<Generator> schrodinger_generators(const LienardModel& m);
/// Omega_1, Omega_2+, Omega_2-, Omega_3+, Omega_3- (Omega_3 flagged valid only for A = 0).
std::vector<Generator> complex_generators(const LienardModel& m);
/// Coefficients exactly as transcribed in the source formulas for Xi_4, Xi_5
/// and Omega_2+-, kept to document why the validated versions differ.
std::vector<Generator> transcribed_generators(const LienardModel& m);
/// Look up one of the complex generators by label ("Omega_3-" etc.).
Generator complex_generator(const LienardModel& m, const std::string& label);

/// Linearised symmetry condition from the second prolongation, normalised by
/// (1 + |F_x| + |F_v|) with F the ODE right-hand side.
double lie_symmetry_residual(const LienardModel& m, const Generator& g, double t, double x, double v);

/// Maximum lie_symmetry_residual over `points`.
double max_lie_residual(const LienardModel& m, const Generator& g, const std::vector<PhasePoint>& points);

/// Noether test on the model Lagrangian: the first-prolonged action W must be
/// affine in v with a gauge-compatible split W = a + b v (a_x = b_t).
Classification noether_classify(const LienardModel& m, const Generator& g, std::uint64_t seed = kDefaultSeed);

/// det [[1, v, F], [tau7, eta7, eta7^(1)], [tau8, eta8, eta8^(1)]] = -omega^5 / h'^2.
double delta78(const LienardModel& m, double t, double x, double v);

struct ClosureReport {
  bool closed = true;
  double max_residual = 0.0;
  /// structure[i][j][k]: [g_i, g_j] = sum_k structure[i][j][k] g_k.
  std::vector<std::vector<std::vector<double>>> structure;
  /// Rank of the (pairs x generators) structure-constant matrix.
  int rank = 0;
};

/// Commutators sampled at 50 points and projected on the span of `gens`.
ClosureReport algebra_closure_check(const LienardModel& m, const std::vector<Generator>& gens,
                                    std::uint64_t seed = kDefaultSeed);

struct SymmetryRow {
  std::string generator;
  double max_residual;
  Classification classification;
};

/// Residuals and classifications of Gamma_1..Gamma_8 over `samples` seeded points.
std::vector<SymmetryRow> classify_standard_generators(const LienardModel& m, int samples = 100,
                                                      std::uint64_t seed = kDefaultSeed);

/// Columns generator,max_residual,classification.
void write_symmetry_csv(std::ostream& os, const std::vector<SymmetryRow>& rows);

}  // namespace lienard
