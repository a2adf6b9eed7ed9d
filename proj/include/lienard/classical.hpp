#pragma once

#include <iosfwd>
#include <vector>

#include "lienard/error.hpp"
#include "lienard/model.hpp"

namespace lienard {

/// Orbit left the model domain (or approached h = 0 with A != 0).
class DomainExitError : public DomainError {
 public:
  DomainExitError(const std::string& what, double time) : DomainError(what), time_(time) {}
  double time() const { return time_; }

 private:
  double time_;
};

/// Fixed-step samples of one orbit on the uniform grid t_i = i * dt.
struct Trajectory {
  LienardModel model;
  double dt = 0.0;
  std::vector<double> t;
  std::vector<double> x;
  std::vector<double> v;
  std::vector<double> energy;

  std::size_t size() const { return t.size(); }
  /// max_i |E(t_i) - E(0)| / |E(0)|.
  double max_relative_energy_drift() const;
};

/// (2 pi / omega) / 2000.
double default_time_step(const LienardModel& m);

/// Classical RK4 from (x0, v0) up to t_end (rounded to a whole number of
/// steps). Throws DomainExitError when x leaves the domain or, for A != 0,
/// when h(x) < 1e-6 max|h|.
Trajectory integrate_orbit(const LienardModel& m, double x0, double v0, double t_end, double dt);

/// Mean period from successive returns to the section {x = x(0)} crossed in
/// the direction of v(0). When the orbit starts at rest the section is
/// {v = 0} crossed in the direction of the initial acceleration. Crossing
/// times are refined by secant iteration on a partial RK4 step.
double estimate_period(const Trajectory& tr);

/// Fits u = h(x)^2 / 2 to c0 + c1 cos(2 omega t) + c2 sin(2 omega t) by
/// least squares on the trajectory grid and returns max |residual| divided
/// by sqrt(c1^2 + c2^2).
double hidden_linearity_residual(const LienardModel& m, const Trajectory& tr);

/// Columns t,x,v,energy,u with 17 significant digits.
void write_trajectory_csv(std::ostream& os, const Trajectory& tr);

}  // namespace lienard
