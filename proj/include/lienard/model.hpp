#pragma once

#include <string_view>

#include "lienard/expr.hpp"

namespace lienard {

/// Open interval (lo, hi) of the real line.
struct Interval {
  double lo = 0.0;
  double hi = 0.0;

  double width() const { return hi - lo; }
  bool contains(double v) const { return v > lo && v < hi; }
};

/// Validated instance of the isochronous Lienard-II family
///
///   x'' + (h''/h') x'^2 + omega^2 h/h' + A/(h' h^3) = 0
///
/// built from a user-supplied monotone map h. The point transformation
/// xi = h(x) takes it to the isotonic oscillator xi'' + omega^2 xi + A/xi^3 = 0.
class LienardModel {
 public:
  /// Validation samples h' on a 1001-point grid (plus the endpoints when
  /// they are evaluable): h' > 0 everywhere, A < 1/4, and h > 0 when A != 0.
  static LienardModel build(std::string_view h_text, double omega, double A, Interval domain);
  static LienardModel build(const Expression& h, double omega, double A, Interval domain);

  const Expression& h() const { return h_; }
  const Expression& hp() const { return hp_; }
  const Expression& hpp() const { return hpp_; }
  const Expression& hppp() const { return hppp_; }

  double omega() const { return omega_; }
  double A() const { return A_; }
  /// k = sqrt(1 - 4A).
  double k() const { return k_; }
  bool isotonic() const { return A_ != 0.0; }
  const Interval& domain() const { return domain_; }
  /// Image h(domain), from endpoint values (or the outermost samples when an
  /// endpoint is singular).
  const Interval& xi_range() const { return xi_range_; }
  /// Largest |h| seen during validation.
  double max_abs_h() const { return max_abs_h_; }

  double h_at(double x) const { return evaluate(h_, x); }
  double hp_at(double x) const { return evaluate(hp_, x); }
  double hpp_at(double x) const { return evaluate(hpp_, x); }
  double hppp_at(double x) const { return evaluate(hppp_, x); }

  /// x = h^{-1}(xi) by safeguarded bisection on the domain.
  double inverse(double xi) const;

  /// True when the image covers [-xi*, xi*] with omega xi*^2 / 2 >= 40
  /// (Gaussian tail below 1e-17), the requirement for full-line spectra.
  bool covers_full_line() const;
  /// xi* = sqrt(80 / omega).
  double coverage_radius() const;

 private:
  LienardModel() = default;

  Expression h_, hp_, hpp_, hppp_;
  double omega_ = 1.0;
  double A_ = 0.0;
  double k_ = 1.0;
  Interval domain_;
  Interval xi_range_;
  double max_abs_h_ = 0.0;
};

/// x'' = -(h''/h') v^2 - omega^2 h/h' - A/(h' h^3).
double ode_rhs(const LienardModel& m, double x, double v);
/// L = (h')^2 v^2 / 2 + A/(2 h^2) - omega^2 h^2 / 2.
double lagrangian(const LienardModel& m, double x, double v);
/// V = (omega^2 h^2 - A/h^2) / 2.
double potential(const LienardModel& m, double x);
/// E = (h')^2 v^2 / 2 - A/(2 h^2) + omega^2 h^2 / 2.
double energy(const LienardModel& m, double x, double v);
/// M = (h')^2.
double jacobi_last_multiplier(const LienardModel& m, double x);
/// xi = h(x).
double to_isotonic(const LienardModel& m, double x);

}  // namespace lienard
