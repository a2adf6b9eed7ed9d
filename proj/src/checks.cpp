#include "lienard/checks.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "lienard/classical.hpp"
#include "lienard/error.hpp"
#include "lienard/polyspec.hpp"
#include "lienard/quantum.hpp"
#include "lienard/symmetry.hpp"

namespace lienard {

const char* to_string(CheckStatus s) {
  switch (s) {
    case CheckStatus::pass: return "PASS";
    case CheckStatus::fail: return "FAIL";
    case CheckStatus::skip: return "SKIP";
  }
  return "?";
}

namespace {

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(3);
  os << v;
  return os.str();
}

// value <= threshold passes.
CheckResult upper_bound(std::string name, double value, double threshold, std::string detail = {}) {
  CheckResult r;
  r.name = std::move(name);
  r.value = value;
  r.threshold = threshold;
  r.status = value <= threshold ? CheckStatus::pass : CheckStatus::fail;
  r.detail = std::move(detail);
  return r;
}

CheckResult skipped(std::string name, std::string why) {
  CheckResult r;
  r.name = std::move(name);
  r.status = CheckStatus::skip;
  r.detail = std::move(why);
  return r;
}

CheckResult failed(std::string name, std::string why) {
  CheckResult r;
  r.name = std::move(name);
  r.status = CheckStatus::fail;
  r.value = std::numeric_limits<double>::quiet_NaN();
  r.detail = std::move(why);
  return r;
}

// Runs `body`, turning library errors into a failed check.
template <class F>
CheckResult guarded(const std::string& name, F&& body) {
  try {
    return body();
  } catch (const std::exception& e) {
    return failed(name, e.what());
  }
}

}  // namespace

CheckResult combine(std::string name, const std::vector<CheckResult>& parts) {
  CheckResult r;
  r.name = std::move(name);
  bool any_pass = false;
  bool any_fail = false;
  std::string detail;
  for (const CheckResult& p : parts) {
    if (p.status == CheckStatus::fail) any_fail = true;
    if (p.status == CheckStatus::pass) any_pass = true;
    if (!detail.empty()) detail += "; ";
    detail += p.name + " " + to_string(p.status) + " (" + fmt(p.value) + " vs " + fmt(p.threshold) + ")";
    if (!p.detail.empty()) detail += " " + p.detail;
  }
  r.status = any_fail ? CheckStatus::fail : (any_pass ? CheckStatus::pass : CheckStatus::skip);
  r.detail = detail;
  if (parts.size() == 1) {
    r.value = parts[0].value;
    r.threshold = parts[0].threshold;
  }
  return r;
}

// ---------------------------------------------------------------------------
// Spectrum

CheckResult check_spectrum(const LienardModel& m, int levels, int n_grid, Interval x_range, double tol) {
  const std::string name = "spectrum";
  return guarded(name, [&] {
    const Spectrum s = compute_spectrum(m, levels, n_grid, x_range);
    double worst = 0.0;
    std::string detail = "errors:";
    for (int n = 0; n < levels; ++n) {
      const double err = s.numeric[n] - s.closed[n];
      worst = std::max(worst, std::abs(err));
      detail += " " + fmt(err);
    }
    return upper_bound(name, worst, tol, detail);
  });
}

CheckResult check_gaps(const LienardModel& m, int levels, int n_grid, Interval x_range, double tol) {
  const std::string name = "gaps";
  return guarded(name, [&] {
    const Spectrum s = compute_spectrum(m, levels, n_grid, x_range);
    const double spacing = m.isotonic() ? 2.0 * m.omega() : m.omega();
    double closed_worst = 0.0;
    double worst = 0.0;
    for (int n = 0; n + 1 < levels; ++n) {
      closed_worst = std::max(closed_worst, std::abs(s.closed[n + 1] - s.closed[n] - spacing));
      worst = std::max(worst, std::abs(s.numeric[n + 1] - s.numeric[n] - spacing));
    }
    if (closed_worst > 1e-12 * spacing) return failed(name, "closed-form gaps are not uniform");
    return upper_bound(name, worst, tol);
  });
}

// ---------------------------------------------------------------------------
// Ladder

CheckResult check_ladder_hermite(const LienardModel& m, int n_max, double tol) {
  const std::string name = "ladder_hermite";
  if (m.isotonic()) return skipped(name, "A != 0");
  return guarded(name, [&] {
    double worst = 0.0;
    const double sw = std::sqrt(m.omega());
    for (int n = 0; n <= n_max; ++n) {
      const StationaryState st = ladder_generate(m, n);
      const auto& a = st.spatial.coeffs();
      std::vector<double> b = hermite_coefficients(n);
      double scale = 1.0;
      for (double& c : b) {
        c *= scale;
        scale *= sw;
      }
      if (st.spatial.s() != 0.0 || a.size() != b.size()) {
        return failed(name, "ladder state n = " + std::to_string(n) + " has the wrong shape");
      }
      if (std::abs(st.energy - closed_form_eigenvalue(m, n)) > 1e-12 * (1.0 + st.energy)) {
        return failed(name, "ladder energy mismatch at n = " + std::to_string(n));
      }
      const double c = b.back() / a.back();
      double bmax = 0.0;
      for (const double v : b) bmax = std::max(bmax, std::abs(v));
      for (std::size_t j = 0; j < a.size(); ++j) {
        const double err = b[j] != 0.0 ? std::abs(c * a[j] - b[j]) / std::abs(b[j]) : std::abs(c * a[j]) / bmax;
        worst = std::max(worst, err);
      }
    }
    return upper_bound(name, worst, tol, "n <= " + std::to_string(n_max));
  });
}

CheckResult check_annihilation(const LienardModel& m) {
  const std::string label = m.isotonic() ? "Omega_2+" : "Omega_3+";
  const std::string name = "annihilation " + label;
  return guarded(name, [&] {
    const auto out = apply_characteristic(m, complex_generator(m, label), closed_form_eigenfunction(m, 0));
    CheckResult r = upper_bound(name, out ? 1.0 : 0.0, 0.0);
    r.detail = out ? "ground state not annihilated" : "ground state annihilated";
    return r;
  });
}

CheckResult check_ladder_overlap(const LienardModel& m, int n_max, double tol) {
  const std::string name = "ladder_overlap";
  return guarded(name, [&] {
    double worst = 0.0;
    for (int n = 0; n <= n_max; ++n) {
      const StationaryState st = ladder_generate(m, n);
      const StationaryState cf = closed_form_eigenfunction(m, n);
      if (std::abs(st.energy - cf.energy) > 1e-12 * (1.0 + cf.energy)) {
        return failed(name, "ladder energy mismatch at n = " + std::to_string(n));
      }
      worst = std::max(worst, std::abs(normalized_overlap(m, st.spatial, cf.spatial) - 1.0));
    }
    return upper_bound(name, worst, tol, "n <= " + std::to_string(n_max));
  });
}

CheckResult check_ladder_round_trip(const LienardModel& m, int n_max, double tol) {
  const std::string name = "ladder_round_trip";
  return guarded(name, [&] {
    const std::string up = m.isotonic() ? "Omega_2-" : "Omega_3-";
    const std::string down = m.isotonic() ? "Omega_2+" : "Omega_3+";
    const Generator g_up = complex_generator(m, up);
    const Generator g_down = complex_generator(m, down);
    double worst = 0.0;
    for (int n = 0; n <= n_max; ++n) {
      const StationaryState st = closed_form_eigenfunction(m, n);
      const auto raised = apply_characteristic(m, g_up, st);
      if (!raised) return failed(name, "creation annihilated psi_" + std::to_string(n));
      const auto back = apply_characteristic(m, g_down, *raised);
      if (!back) return failed(name, "annihilation removed psi_" + std::to_string(n + 1));
      if (std::abs(back->energy - st.energy) > 1e-12 * (1.0 + st.energy)) return failed(name, "energy not restored");
      worst = std::max(worst, std::abs(normalized_overlap(m, back->spatial, st.spatial) - 1.0));
    }
    return upper_bound(name, worst, tol, "n <= " + std::to_string(n_max));
  });
}

// ---------------------------------------------------------------------------
// Symmetries

CheckResult check_symmetries(const LienardModel& m, std::uint64_t seed) {
  const std::string name = "symmetries";
  return guarded(name, [&] {
    const auto points = sample_phase_points(m, 100, seed);
    const auto gens = standard_generators(m);
    double worst_valid = 0.0;
    bool ok = true;
    std::string detail;
    for (std::size_t i = 0; i < gens.size(); ++i) {
      const Generator& g = gens[i];
      const double res = max_lie_residual(m, g, points);
      const Classification c = noether_classify(m, g, seed);
      Classification expected;
      if (!g.expected_valid) {
        expected = Classification::not_symmetry;
        // A broken generator must fail clearly at a generic point.
        if (!(res > 1e-3)) ok = false;
      } else {
        worst_valid = std::max(worst_valid, res);
        const bool noether = i < 3 || i >= 6;  // Gamma_1,2,3,7,8
        expected = noether ? Classification::noether : Classification::lie_only;
      }
      if (c != expected) ok = false;
      if (!detail.empty()) detail += ", ";
      detail += g.label + "=" + to_string(c);
    }
    CheckResult r = upper_bound(name, worst_valid, 1e-8, detail);
    if (!ok) r.status = CheckStatus::fail;
    return r;
  });
}

CheckResult check_delta78(const LienardModel& m, std::uint64_t seed) {
  const std::string name = "delta78";
  return guarded(name, [&] {
    const double w5 = std::pow(m.omega(), 5);
    double worst = 0.0;
    for (const PhasePoint& p : sample_phase_points(m, 100, seed)) {
      const double hp = m.hp_at(p.x);
      worst = std::max(worst, std::abs(delta78(m, p.t, p.x, p.v) * hp * hp + w5) / w5);
    }
    return upper_bound(name, worst, 1e-10);
  });
}

// ---------------------------------------------------------------------------
// Classical

namespace {

struct Launch {
  double x0;
  double energy;
};

// Five rest starts whose energies above the potential minimum span a factor
// of 16, scaled down if the orbit would come within 20% of h(domain)'s ends.
std::vector<Launch> launches(const LienardModel& m) {
  const double w = m.omega();
  const double A = m.A();
  const Interval img = m.xi_range();
  const double vmin = A < 0.0 ? w * std::sqrt(-A) : 0.0;
  auto turning = [&](double E) {
    const double disc = std::sqrt(E * E + A * w * w);
    return std::pair{(E - disc) / (w * w), (E + disc) / (w * w)};  // u = xi^2
  };
  auto fits = [&](double E) {
    const auto [u_lo, u_hi] = turning(E);
    const double xi_hi = std::sqrt(u_hi);
    if (A == 0.0) return xi_hi <= 0.8 * img.hi && -xi_hi >= 0.8 * img.lo;
    return xi_hi <= 0.8 * img.hi && std::sqrt(u_lo) >= 1.25 * std::max(img.lo, 0.0);
  };
  double top = 1.6 * w;
  while (!fits(vmin + top) && top > 1e-8 * w) top *= 0.5;
  std::vector<Launch> out;
  for (int j = 0; j < 5; ++j) {
    const double E = vmin + top * std::ldexp(1.0, j - 4);
    out.push_back({m.inverse(std::sqrt(turning(E).second)), E});
  }
  return out;
}

double expected_period(const LienardModel& m) {
  return (m.isotonic() ? 1.0 : 2.0) * std::numbers::pi / m.omega();
}

}  // namespace

CheckResult check_isochrony(const LienardModel& m) {
  const std::string name = "isochrony";
  if (m.A() > 0.0) return skipped(name, "A > 0: orbits fall into h = 0");
  return guarded(name, [&] {
    const double T = expected_period(m);
    const double dt = default_time_step(m);
    std::vector<double> periods;
    for (const Launch& l : launches(m)) {
      periods.push_back(estimate_period(integrate_orbit(m, l.x0, 0.0, 5.0 * T, dt)));
    }
    const auto [lo, hi] = std::minmax_element(periods.begin(), periods.end());
    const double spread = (*hi - *lo) / *lo;
    double off = 0.0;
    for (const double p : periods) off = std::max(off, std::abs(p - T) / T);
    CheckResult r = upper_bound(name, std::max(spread, off), 1e-6,
                                "spread " + fmt(spread) + ", deviation from " + fmt(T) + " " + fmt(off));
    return r;
  });
}

CheckResult check_energy_drift(const LienardModel& m) {
  const std::string name = "energy_drift";
  if (m.A() > 0.0) return skipped(name, "A > 0: orbits fall into h = 0");
  return guarded(name, [&] {
    const double T = expected_period(m);
    const auto ls = launches(m);
    double worst = 0.0;
    for (const Launch& l : {ls.front(), ls.back()}) {
      const Trajectory tr = integrate_orbit(m, l.x0, 0.0, 50.0 * T, default_time_step(m));
      worst = std::max(worst, tr.max_relative_energy_drift());
    }
    return upper_bound(name, worst, 1e-8, "50 periods");
  });
}

CheckResult check_hidden_linearity(const LienardModel& m) {
  const std::string name = "hidden_linearity";
  if (m.A() > 0.0) return skipped(name, "A > 0: orbits fall into h = 0");
  return guarded(name, [&] {
    const auto ls = launches(m);
    const Trajectory tr = integrate_orbit(m, ls[2].x0, 0.0, 4.0 * expected_period(m), default_time_step(m));
    return upper_bound(name, hidden_linearity_residual(m, tr), 1e-6);
  });
}

// ---------------------------------------------------------------------------
// Closed forms

CheckResult check_pde_residuals(const LienardModel& m, int n_max, std::uint64_t seed) {
  const std::string name = "pde_residuals";
  return guarded(name, [&] {
    double worst = 0.0;
    for (int n = 0; n <= n_max; ++n) {
      const StationaryState st = closed_form_eigenfunction(m, n);
      for (const PhasePoint& p : sample_phase_points(m, 20, seed + static_cast<std::uint64_t>(n))) {
        worst = std::max(worst, pde_residual(m, st, p.t, p.x));
      }
    }
    return upper_bound(name, worst, 1e-8, "n <= " + std::to_string(n_max));
  });
}

CheckResult check_orthonormality(const LienardModel& m, int n_max) {
  const std::string name = "orthonormality";
  return guarded(name, [&] {
    std::vector<StationaryState> states;
    for (int n = 0; n <= n_max; ++n) states.push_back(closed_form_eigenfunction(m, n));
    double worst = 0.0;
    for (int a = 0; a <= n_max; ++a) {
      for (int b = a; b <= n_max; ++b) {
        const double g = inner_product(m, states[a].spatial, states[b].spatial);
        worst = std::max(worst, std::abs(g - (a == b ? 1.0 : 0.0)));
      }
    }
    return upper_bound(name, worst, 1e-8, "n <= " + std::to_string(n_max));
  });
}

CheckResult check_pde_symmetries(const LienardModel& m, int n_max, std::uint64_t seed) {
  const std::string name = "pde_symmetries";
  return guarded(name, [&] {
    std::vector<Generator> gens = schrodinger_generators(m);
    for (Generator& g : complex_generators(m)) gens.push_back(std::move(g));
    double worst = 0.0;
    std::string used;
    for (const Generator& g : gens) {
      if (!g.expected_valid) continue;
      used += (used.empty() ? "" : ",") + g.label;
      for (int n = 0; n <= n_max; ++n) {
        const StationaryState st = closed_form_eigenfunction(m, n);
        for (const PhasePoint& p : sample_phase_points(m, 10, seed + static_cast<std::uint64_t>(n))) {
          worst = std::max(worst, pde_symmetry_residual(m, g, st, p.t, p.x));
        }
      }
    }
    return upper_bound(name, worst, 1e-8, used);
  });
}

CheckResult check_vonroos(const LienardModel& m, std::uint64_t seed) {
  const std::string name = "vonroos";
  if (!m.isotonic() && m.omega() != 1.0) return skipped(name, "needs omega = 1 when A = 0");
  if (m.isotonic() && m.omega() != 0.5) return skipped(name, "needs omega = 1/2 when A != 0");
  return guarded(name, [&] {
    const auto points = sample_phase_points(m, 50, seed);
    double curvature = 0.0;
    for (const PhasePoint& p : points) curvature = std::max(curvature, std::abs(m.hpp_at(p.x) / m.hp_at(p.x)));
    if (curvature < 1e-12) return skipped(name, "h is affine: every ordering coincides");

    const StationaryState st = closed_form_eigenfunction(m, 0);
    double worst = 0.0;
    for (const PhasePoint& p : points) worst = std::max(worst, vonroos_residual(m, st, -0.25, -0.5, -0.25, p.t, p.x));
    double violated = 0.0;
    for (const PhasePoint& p : points) violated = std::max(violated, vonroos_residual(m, st, 0.0, 0.0, -1.0, p.t, p.x));
    CheckResult r = upper_bound(name, worst, 1e-8, "violated ordering residual " + fmt(violated));
    if (!(violated > 1e-3)) r.status = CheckStatus::fail;
    return r;
  });
}

CheckResult check_convergence_order(const LienardModel& m, int n_grid, Interval x_range) {
  const std::string name = "convergence_order";
  return guarded(name, [&] {
    const double exact = closed_form_eigenvalue(m, 0);
    const double e1 = lowest_eigenvalues(build_hamiltonian(m, n_grid, x_range), 1)[0] - exact;
    const double e2 = lowest_eigenvalues(build_hamiltonian(m, 2 * n_grid, x_range), 1)[0] - exact;
    const double ratio = e1 / e2;
    CheckResult r;
    r.name = name;
    r.value = ratio;
    r.threshold = 4.0;
    r.status = ratio >= 3.2 && ratio <= 4.8 ? CheckStatus::pass : CheckStatus::fail;
    r.detail = "ground-state errors " + fmt(e1) + " (N=" + std::to_string(n_grid) + "), " + fmt(e2) +
               " (N=" + std::to_string(2 * n_grid) + "), accepted ratio [3.2, 4.8]";
    return r;
  });
}

std::vector<CheckResult> run_model_checks(const LienardModel& m, const ReportSettings& s) {
  const bool iso = m.isotonic();
  const Interval range = default_x_range(m, s.levels - 1);
  const double tol = iso ? 1e-4 : 1e-5;
  std::vector<CheckResult> out;
  out.push_back(check_spectrum(m, s.levels, s.n_grid, range, tol));
  out.push_back(check_gaps(m, s.levels, s.n_grid, range, 2.0 * tol));
  if (!iso) out.push_back(check_ladder_hermite(m, 10, 1e-11));
  out.push_back(check_annihilation(m));
  out.push_back(check_ladder_overlap(m, 6, 1e-9));
  out.push_back(check_ladder_round_trip(m, 5, 1e-9));
  out.push_back(check_symmetries(m, s.seed));
  out.push_back(check_delta78(m, s.seed));
  out.push_back(check_isochrony(m));
  out.push_back(check_energy_drift(m));
  out.push_back(check_hidden_linearity(m));
  out.push_back(check_pde_residuals(m, 6, s.seed));
  out.push_back(check_orthonormality(m, 8));
  out.push_back(check_pde_symmetries(m, 3, s.seed));
  out.push_back(check_vonroos(m, s.seed));
  out.push_back(check_convergence_order(m, s.n_grid, range));
  return out;
}

}  // namespace lienard
