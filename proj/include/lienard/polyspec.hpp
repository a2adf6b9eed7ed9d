#pragma once

// Orthogonal polynomials, the Gamma function, quasi-polynomial calculus and
// Gaussian-weighted quadrature in xi-space.

#include <span>
#include <vector>

#include "lienard/model.hpp"

namespace lienard {

/// Physicists' Hermite polynomial H_n(x) by three-term recurrence.
double hermite(int n, double x);
/// Associated Laguerre polynomial L_n^alpha(x) by three-term recurrence.
double assoc_laguerre(int n, double alpha, double x);
/// Gamma(x) for x > 0 (Lanczos, g = 7, 9 terms). Throws DomainError for x <= 0.
double gamma_fn(double x);

/// Power-basis coefficients (ascending) of H_n.
std::vector<double> hermite_coefficients(int n);
/// Power-basis coefficients (ascending) of L_n^alpha.
std::vector<double> laguerre_coefficients(int n, double alpha);

/// Value of sum_j c_j x^j by Horner's rule.
double polyval(std::span<const double> coeffs, double x);

/// xi -> p(xi) * xi^s * exp(-omega xi^2 / 2).
///
/// Trailing zero coefficients are trimmed, so the leading coefficient is
/// nonzero unless the function is identically zero. A negative integer s
/// absorbs exactly-zero low-order coefficients (keeps xi = 0 evaluable);
/// otherwise s is left as given.
class QuasiPolynomial {
 public:
  QuasiPolynomial(double omega, double s, std::vector<double> coeffs);

  double omega() const { return omega_; }
  double s() const { return s_; }
  const std::vector<double>& coeffs() const { return coeffs_; }
  int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
  bool is_zero() const { return coeffs_.empty(); }
  double max_abs_coeff() const;

  /// Throws DomainError for xi <= 0 when s is not an integer.
  double operator()(double xi) const;

  /// d/dxi: s -> s - 1, p -> p' xi + s p - omega xi^2 p.
  QuasiPolynomial derivative() const;
  /// Multiply by the polynomial q(xi) (ascending coefficients).
  QuasiPolynomial times_poly(std::span<const double> q) const;
  QuasiPolynomial times_xi(int power = 1) const;
  QuasiPolynomial scaled(double c) const;

  /// Sum; the exponents must differ by an integer and omega must agree.
  friend QuasiPolynomial operator+(const QuasiPolynomial& a, const QuasiPolynomial& b);
  friend QuasiPolynomial operator-(const QuasiPolynomial& a, const QuasiPolynomial& b);

  /// Drop coefficients below `rel * max|c|` from the top end.
  QuasiPolynomial trimmed(double rel) const;

  /// Same function written with exponent s_target (s_target - s must be an
  /// integer). Raising the exponent drops low-order coefficients, which must
  /// be below rel * max|c|. The result is not re-canonicalized at the low end.
  QuasiPolynomial rebased(double s_target, double rel = 1e-12) const;

 private:
  void canonicalize();

  double omega_;
  double s_;
  std::vector<double> coeffs_;
};

/// 64-node Gauss-Legendre rule on [-1, 1].
struct GaussLegendre64 {
  std::vector<double> nodes;
  std::vector<double> weights;
};
const GaussLegendre64& gauss_legendre_64();

/// Integral of F(xi) G(xi) over `range` by composite 64-node Gauss-Legendre
/// panels, refined until successive results agree to 1e-11 relative.
double integrate_product(const QuasiPolynomial& F, const QuasiPolynomial& G, Interval range);

/// Integral of F(h(x)) G(h(x)) h'(x) dx over the model domain, computed in
/// xi-space over h(domain).
double inner_product(const LienardModel& m, const QuasiPolynomial& F, const QuasiPolynomial& G);

}  // namespace lienard
