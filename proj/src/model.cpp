#include "lienard/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <sstream>

#include "lienard/error.hpp"

namespace lienard {

namespace {

constexpr int kValidationSamples = 1001;

std::optional<double> try_eval(const Expression& e, double x) {
  try {
    const double v = evaluate(e, x);
    if (std::isfinite(v)) return v;
  } catch (const DomainError&) {
  }
  return std::nullopt;
}

std::string describe(double x) {
  std::ostringstream os;
  os.precision(17);
  os << x;
  return os.str();
}

}  // namespace

LienardModel LienardModel::build(std::string_view h_text, double omega, double A, Interval domain) {
  return build(parse(h_text, "x"), omega, A, domain);
}

LienardModel LienardModel::build(const Expression& h, double omega, double A, Interval domain) {
  if (!(omega > 0.0) || !std::isfinite(omega)) throw ModelError("omega must be a positive number");
  if (!std::isfinite(A)) throw ModelError("A must be finite");
  if (A >= 0.25) throw ModelError("A >= 1/4: k = sqrt(1 - 4A) is not real");
  if (!std::isfinite(domain.lo) || !std::isfinite(domain.hi) || !(domain.lo < domain.hi)) {
    throw ModelError("domain must be a non-degenerate finite interval");
  }

  LienardModel m;
  m.h_ = simplify(h);
  m.hp_ = differentiate(m.h_, 1);
  m.hpp_ = differentiate(m.hp_, 1);
  m.hppp_ = differentiate(m.hpp_, 1);
  m.omega_ = omega;
  m.A_ = A;
  m.k_ = std::sqrt(1.0 - 4.0 * A);
  m.domain_ = domain;

  double first_h = 0.0;
  double last_h = 0.0;
  for (int j = 0; j < kValidationSamples; ++j) {
    const double x = domain.lo + domain.width() * (j + 0.5) / kValidationSamples;
    const auto hv = try_eval(m.h_, x);
    const auto hpv = try_eval(m.hp_, x);
    if (!hv || !hpv) throw ModelError("h is not evaluable at x = " + describe(x));
    if (!(*hpv > 0.0)) throw ModelError("h' <= 0 at x = " + describe(x) + " (h must be strictly increasing)");
    if (A != 0.0 && !(*hv > 0.0)) throw ModelError("h <= 0 at x = " + describe(x) + " with A != 0");
    if (j == 0) first_h = *hv;
    last_h = *hv;
    m.max_abs_h_ = std::max(m.max_abs_h_, std::abs(*hv));
  }

  m.xi_range_ = {first_h, last_h};
  for (const double x : {domain.lo, domain.hi}) {
    const auto hv = try_eval(m.h_, x);
    const auto hpv = try_eval(m.hp_, x);
    if (!hv || !hpv) continue;
    if (*hpv < 0.0) throw ModelError("h' < 0 at domain endpoint " + describe(x));
    if (A != 0.0 && *hv < 0.0) throw ModelError("h < 0 at domain endpoint " + describe(x) + " with A != 0");
    (x == domain.lo ? m.xi_range_.lo : m.xi_range_.hi) = *hv;
    m.max_abs_h_ = std::max(m.max_abs_h_, std::abs(*hv));
  }
  return m;
}

double LienardModel::inverse(double xi) const {
  double lo = domain_.lo;
  double hi = domain_.hi;
  if (!(xi >= xi_range_.lo && xi <= xi_range_.hi)) {
    throw DomainError("xi = " + describe(xi) + " outside h(domain)");
  }
  // Endpoints may be singular; bisect on interior points only.
  for (int it = 0; it < 200 && hi - lo > 4.0 * std::numeric_limits<double>::epsilon() * (1.0 + std::abs(lo)); ++it) {
    const double mid = 0.5 * (lo + hi);
    const auto hv = try_eval(h_, mid);
    if (!hv) throw DomainError("h not evaluable at x = " + describe(mid));
    (*hv < xi ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

double LienardModel::coverage_radius() const { return std::sqrt(80.0 / omega_); }

bool LienardModel::covers_full_line() const {
  const double r = coverage_radius();
  return xi_range_.lo <= -r && xi_range_.hi >= r;
}

namespace {

struct Local {
  double h, hp, hpp;
};

Local local(const LienardModel& m, double x) {
  Local l{m.h_at(x), m.hp_at(x), m.hpp_at(x)};
  if (l.hp == 0.0) throw DomainError("h' vanishes at x = " + describe(x));
  if (m.isotonic() && l.h == 0.0) throw DomainError("h vanishes at x = " + describe(x) + " with A != 0");
  return l;
}

}  // namespace

double ode_rhs(const LienardModel& m, double x, double v) {
  const Local l = local(m, x);
  const double w2 = m.omega() * m.omega();
  double rhs = -(l.hpp / l.hp) * v * v - w2 * l.h / l.hp;
  if (m.isotonic()) rhs -= m.A() / (l.hp * l.h * l.h * l.h);
  return rhs;
}

double lagrangian(const LienardModel& m, double x, double v) {
  const Local l = local(m, x);
  const double w2 = m.omega() * m.omega();
  double L = 0.5 * l.hp * l.hp * v * v - 0.5 * w2 * l.h * l.h;
  if (m.isotonic()) L += m.A() / (2.0 * l.h * l.h);
  return L;
}

double potential(const LienardModel& m, double x) {
  const Local l = local(m, x);
  const double w2 = m.omega() * m.omega();
  double V = 0.5 * w2 * l.h * l.h;
  if (m.isotonic()) V -= m.A() / (2.0 * l.h * l.h);
  return V;
}

double energy(const LienardModel& m, double x, double v) {
  const Local l = local(m, x);
  return 0.5 * l.hp * l.hp * v * v + potential(m, x);
}

double jacobi_last_multiplier(const LienardModel& m, double x) {
  const double hp = m.hp_at(x);
  return hp * hp;
}

double to_isotonic(const LienardModel& m, double x) { return m.h_at(x); }

}  // namespace lienard
