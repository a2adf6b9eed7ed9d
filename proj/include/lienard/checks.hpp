#pragma once

// Property checks shared by the acceptance binary and the `report` command.
// Each check evaluates one quantitative claim for a model and compares it to
// a fixed tolerance.

#include <cstdint>
#include <string>
#include <vector>

#include "lienard/model.hpp"
#include "lienard/sampling.hpp"

namespace lienard {

enum class CheckStatus { pass, fail, skip };
const char* to_string(CheckStatus s);

struct CheckResult {
  std::string name;
  CheckStatus status = CheckStatus::skip;
  double value = 0.0;      // worst observed quantity
  double threshold = 0.0;  // tolerance it is compared against
  std::string detail;

  bool failed() const { return status == CheckStatus::fail; }
};

/// Combine sub-checks into one line: fails if any part fails.
CheckResult combine(std::string name, const std::vector<CheckResult>& parts);

/// max_n |E_numeric - E_closed| over the lowest `levels` states.
CheckResult check_spectrum(const LienardModel& m, int levels, int n_grid, Interval x_range, double tol);
/// Numerical gaps versus the exact closed-form spacing (omega or 2 omega).
CheckResult check_gaps(const LienardModel& m, int levels, int n_grid, Interval x_range, double tol);
/// A = 0: ladder_generate(n) against H_n(sqrt(omega) xi), componentwise.
CheckResult check_ladder_hermite(const LienardModel& m, int n_max, double tol);
/// Omega_3+ (A = 0) or Omega_2+ (A != 0) applied to the ground state vanishes.
CheckResult check_annihilation(const LienardModel& m);
/// Normalized overlap between ladder_generate(n) and the closed form.
CheckResult check_ladder_overlap(const LienardModel& m, int n_max, double tol);
/// Creation followed by annihilation returns psi_n.
CheckResult check_ladder_round_trip(const LienardModel& m, int n_max, double tol);
/// Gamma_1..8: residual threshold and the expected Noether / Lie-only split.
CheckResult check_symmetries(const LienardModel& m, std::uint64_t seed);
/// delta78 (h')^2 = -omega^5 at 100 seeded points.
CheckResult check_delta78(const LienardModel& m, std::uint64_t seed);
/// Periods at five amplitudes: mutual agreement and the predicted value.
CheckResult check_isochrony(const LienardModel& m);
/// Relative energy drift over 50 periods.
CheckResult check_energy_drift(const LienardModel& m);
/// u = h^2/2 harmonic at 2 omega along an orbit.
CheckResult check_hidden_linearity(const LienardModel& m);
/// pde_residual of psi_0..psi_nmax at 20 seeded (t, x) each.
CheckResult check_pde_residuals(const LienardModel& m, int n_max, std::uint64_t seed);
/// Gram matrix of psi_0..psi_nmax against the identity.
CheckResult check_orthonormality(const LienardModel& m, int n_max);
/// Xi generators valid for the model map closed-form states to solutions.
CheckResult check_pde_symmetries(const LienardModel& m, int n_max, std::uint64_t seed);
/// von Roos ordering: compliant parameters vanish, violated ones do not.
CheckResult check_vonroos(const LienardModel& m, std::uint64_t seed);
/// Ground-state error ratio between n_grid and 2 n_grid.
CheckResult check_convergence_order(const LienardModel& m, int n_grid, Interval x_range);

struct ReportSettings {
  int n_grid = 4000;
  int levels = 8;
  std::uint64_t seed = kDefaultSeed;
};

/// Every check that applies to the model's case, in a fixed order.
std::vector<CheckResult> run_model_checks(const LienardModel& m, const ReportSettings& settings);

}  // namespace lienard
