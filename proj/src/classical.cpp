#include "lienard/classical.hpp"

#include <array>
#include <cmath>
#include <iomanip>
#include <numbers>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace lienard {

namespace {

struct State {
  double x;
  double v;
};

class Stepper {
 public:
  explicit Stepper(const LienardModel& m)
      : m_(m), guard_(m.isotonic() ? 1e-6 * m.max_abs_h() : 0.0) {}

  State step(State s, double dt, double t) const {
    const double k1x = s.v;
    const double k1v = accel(s.x, s.v, t);
    const double k2x = s.v + 0.5 * dt * k1v;
    const double k2v = accel(s.x + 0.5 * dt * k1x, k2x, t);
    const double k3x = s.v + 0.5 * dt * k2v;
    const double k3v = accel(s.x + 0.5 * dt * k2x, k3x, t);
    const double k4x = s.v + dt * k3v;
    const double k4v = accel(s.x + dt * k3x, k4x, t);
    State out{s.x + dt / 6.0 * (k1x + 2.0 * k2x + 2.0 * k3x + k4x),
              s.v + dt / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v)};
    check(out.x, t + dt);
    return out;
  }

  void check(double x, double t) const {
    if (!std::isfinite(x) || !m_.domain().contains(x)) fail("orbit left the domain", t);
    if (m_.isotonic() && m_.h_at(x) < guard_) fail("orbit approached the singularity h = 0", t);
  }

 private:
  double accel(double x, double v, double t) const {
    check(x, t);
    return ode_rhs(m_, x, v);
  }

  [[noreturn]] static void fail(const char* why, double t) {
    std::ostringstream os;
    os.precision(17);
    os << why << " at t = " << t;
    throw DomainExitError(os.str(), t);
  }

  const LienardModel& m_;
  double guard_;
};

}  // namespace

double Trajectory::max_relative_energy_drift() const {
  if (energy.empty()) return 0.0;
  const double e0 = energy.front();
  double worst = 0.0;
  for (const double e : energy) worst = std::max(worst, std::abs(e - e0));
  return worst / std::abs(e0);
}

double default_time_step(const LienardModel& m) {
  return 2.0 * std::numbers::pi / m.omega() / 2000.0;
}

Trajectory integrate_orbit(const LienardModel& m, double x0, double v0, double t_end, double dt) {
  if (!(dt > 0.0)) throw std::invalid_argument("integrate_orbit: dt must be positive");
  if (!(t_end > 0.0)) throw std::invalid_argument("integrate_orbit: t_end must be positive");
  const Stepper stepper(m);
  stepper.check(x0, 0.0);

  const auto steps = static_cast<std::size_t>(std::llround(t_end / dt));
  Trajectory tr{m, dt, {}, {}, {}, {}};
  tr.t.reserve(steps + 1);
  tr.x.reserve(steps + 1);
  tr.v.reserve(steps + 1);
  tr.energy.reserve(steps + 1);

  State s{x0, v0};
  for (std::size_t i = 0;; ++i) {
    const double t = static_cast<double>(i) * dt;
    tr.t.push_back(t);
    tr.x.push_back(s.x);
    tr.v.push_back(s.v);
    tr.energy.push_back(energy(m, s.x, s.v));
    if (i == steps) break;
    s = stepper.step(s, dt, t);
  }
  return tr;
}

double estimate_period(const Trajectory& tr) {
  if (tr.size() < 3) throw NumericalError("estimate_period: trajectory too short");
  const LienardModel& m = tr.model;
  const Stepper stepper(m);
  const double x0 = tr.x.front();
  const double v0 = tr.v.front();

  const double vscale = std::abs(tr.v[1]) + std::abs(v0);
  const bool at_rest = std::abs(v0) <= 1e-12 * (1.0 + vscale);
  double dir;
  if (at_rest) {
    const double a0 = ode_rhs(m, x0, v0);
    if (a0 == 0.0) throw NumericalError("estimate_period: orbit starts at an equilibrium");
    dir = a0 > 0.0 ? 1.0 : -1.0;
  } else {
    dir = v0 > 0.0 ? 1.0 : -1.0;
  }
  auto section = [&](State s) { return at_rest ? s.v * dir : (s.x - x0) * dir; };

  std::vector<double> crossings{0.0};
  for (std::size_t i = 1; i + 1 < tr.size(); ++i) {
    const State si{tr.x[i], tr.v[i]};
    const double g0 = section(si);
    const double g1 = section({tr.x[i + 1], tr.v[i + 1]});
    if (!(g0 < 0.0 && g1 >= 0.0)) continue;

    // Illinois false position on the partial-step offset.
    double lo = 0.0;
    double hi = tr.dt;
    double glo = g0;
    double ghi = g1;
    int side = 0;
    double root = hi;
    for (int it = 0; it < 100; ++it) {
      root = (lo * ghi - hi * glo) / (ghi - glo);
      const double g = section(stepper.step(si, root, tr.t[i]));
      if (g == 0.0 || hi - lo < 1e-15 * tr.dt) break;
      if (g < 0.0) {
        lo = root;
        glo = g;
        if (side == -1) ghi *= 0.5;
        side = -1;
      } else {
        hi = root;
        ghi = g;
        if (side == 1) glo *= 0.5;
        side = 1;
      }
      if (std::abs(g) < 1e-15 * (std::abs(g0) + std::abs(g1))) break;
    }
    crossings.push_back(tr.t[i] + root);
  }
  if (crossings.size() < 2) throw NumericalError("estimate_period: no return to the Poincare section");
  return (crossings.back() - crossings.front()) / static_cast<double>(crossings.size() - 1);
}

double hidden_linearity_residual(const LienardModel& m, const Trajectory& tr) {
  const double w2 = 2.0 * m.omega();
  std::vector<double> u(tr.size());
  std::array<std::array<double, 4>, 3> ne{};  // augmented normal equations
  for (std::size_t i = 0; i < tr.size(); ++i) {
    const double h = m.h_at(tr.x[i]);
    u[i] = 0.5 * h * h;
    const std::array<double, 3> row{1.0, std::cos(w2 * tr.t[i]), std::sin(w2 * tr.t[i])};
    for (int r = 0; r < 3; ++r) {
      for (int c = 0; c < 3; ++c) ne[r][c] += row[r] * row[c];
      ne[r][3] += row[r] * u[i];
    }
  }
  for (int col = 0; col < 3; ++col) {
    int piv = col;
    for (int r = col + 1; r < 3; ++r) {
      if (std::abs(ne[r][col]) > std::abs(ne[piv][col])) piv = r;
    }
    std::swap(ne[col], ne[piv]);
    if (ne[col][col] == 0.0) throw NumericalError("hidden_linearity_residual: singular normal equations");
    for (int r = col + 1; r < 3; ++r) {
      const double f = ne[r][col] / ne[col][col];
      for (int c = col; c < 4; ++c) ne[r][c] -= f * ne[col][c];
    }
  }
  std::array<double, 3> c{};
  for (int r = 2; r >= 0; --r) {
    double acc = ne[r][3];
    for (int k = r + 1; k < 3; ++k) acc -= ne[r][k] * c[k];
    c[r] = acc / ne[r][r];
  }
  const double amplitude = std::hypot(c[1], c[2]);
  if (!(amplitude > 1e-14 * (1.0 + std::abs(c[0])))) {
    throw NumericalError("hidden_linearity_residual: degenerate fit (zero oscillation amplitude)");
  }
  double worst = 0.0;
  for (std::size_t i = 0; i < tr.size(); ++i) {
    const double fit = c[0] + c[1] * std::cos(w2 * tr.t[i]) + c[2] * std::sin(w2 * tr.t[i]);
    worst = std::max(worst, std::abs(u[i] - fit));
  }
  return worst / amplitude;
}

void write_trajectory_csv(std::ostream& os, const Trajectory& tr) {
  os << "t,x,v,energy,u\n";
  os << std::setprecision(17);
  for (std::size_t i = 0; i < tr.size(); ++i) {
    const double h = tr.model.h_at(tr.x[i]);
    os << tr.t[i] << ',' << tr.x[i] << ',' << tr.v[i] << ',' << tr.energy[i] << ',' << 0.5 * h * h << '\n';
  }
}

}  // namespace lienard
