#include "lienard/quantum.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <numeric>
#include <ostream>
#include <stdexcept>
#include <string>

#include "lienard/error.hpp"

namespace lienard {

namespace {

using Complex = std::complex<double>;
constexpr Complex kI(0.0, 1.0);

double canonical_exponent(const LienardModel& m) { return m.isotonic() ? 0.5 * (m.k() + 1.0) : 0.0; }

QuasiPolynomial closed_form_spatial(const LienardModel& m, int n) {
  const double w = m.omega();
  std::vector<double> coeffs;
  if (!m.isotonic()) {
    const auto h = hermite_coefficients(n);
    coeffs.resize(h.size());
    const double sw = std::sqrt(w);
    double scale = 1.0;
    for (std::size_t j = 0; j < h.size(); ++j) {
      coeffs[j] = h[j] * scale;
      scale *= sw;
    }
  } else {
    const auto l = laguerre_coefficients(n, 0.5 * m.k());
    coeffs.assign(2 * l.size() - 1, 0.0);
    double scale = 1.0;
    for (std::size_t j = 0; j < l.size(); ++j) {
      coeffs[2 * j] = l[j] * scale;
      scale *= w;
    }
  }
  return QuasiPolynomial(w, canonical_exponent(m), std::move(coeffs));
}

QuasiPolynomial normalize_and_orient(const LienardModel& m, const QuasiPolynomial& q) {
  const double norm2 = inner_product(m, q, q);
  if (!(norm2 > 0.0)) throw NumericalError("state has zero norm on h(domain)");
  double c = 1.0 / std::sqrt(norm2);
  if (q.coeffs().back() < 0.0) c = -c;
  return q.scaled(c);
}

double safe_h(const LienardModel& m, double x, double inward) {
  try {
    return m.h_at(x);
  } catch (const Error&) {
    return m.h_at(x + inward);
  }
}

}  // namespace

double closed_form_eigenvalue(const LienardModel& m, int n) {
  if (n < 0) throw std::invalid_argument("closed_form_eigenvalue: n must be non-negative");
  const double w = m.omega();
  if (!m.isotonic()) return w * (n + 0.5);
  return 2.0 * w * (n + 0.5 + 0.25 * m.k());
}

StationaryState closed_form_eigenfunction(const LienardModel& m, int n) {
  if (n < 0) throw std::invalid_argument("closed_form_eigenfunction: n must be non-negative");
  StationaryState st;
  st.n = n;
  st.energy = closed_form_eigenvalue(m, n);
  st.spatial = normalize_and_orient(m, closed_form_spatial(m, n));
  return st;
}

// ---------------------------------------------------------------------------
// Grid operator

Interval default_x_range(const LienardModel& m, int n_max) {
  if (n_max < 0) throw std::invalid_argument("default_x_range: n_max must be non-negative");
  const QuasiPolynomial S = closed_form_spatial(m, n_max);
  const double w = m.omega();
  const double s = S.s();
  const double reach = 2.0 * std::sqrt((4.0 * n_max + 2.0 * s + 82.0) / w);
  const bool half_line = m.isotonic();
  const double lo = half_line ? 0.0 : -reach;
  constexpr int kScan = 40000;
  std::vector<double> grid(kScan + 1);
  std::vector<double> vals(kScan + 1);
  double peak = 0.0;
  for (int j = 0; j <= kScan; ++j) {
    grid[j] = lo + (reach - lo) * j / kScan;
    vals[j] = (half_line && j == 0) ? 0.0 : std::abs(S(grid[j]));
    peak = std::max(peak, vals[j]);
  }
  const double cut = 1e-16 * peak;
  int first = 0;
  while (first < kScan && vals[first] <= cut) ++first;
  int last = kScan;
  while (last > 0 && vals[last] <= cut) --last;
  double xi_lo = half_line ? grid[std::max(first - 1, 0)] : -grid[std::min(last + 1, kScan)];
  double xi_hi = grid[std::min(last + 1, kScan)];

  const double r = m.coverage_radius();
  xi_hi = std::max(xi_hi, r);
  if (!half_line) xi_lo = std::min(xi_lo, -r);

  const Interval& img = m.xi_range();
  const Interval& dom = m.domain();
  Interval out;
  out.lo = xi_lo <= img.lo ? dom.lo : m.inverse(xi_lo);
  out.hi = xi_hi >= img.hi ? dom.hi : m.inverse(xi_hi);
  return out;
}

DiscreteHamiltonian build_hamiltonian(const LienardModel& m, int n_grid, Interval x_range) {
  if (n_grid < 200) throw std::invalid_argument("build_hamiltonian: n_grid must be at least 200");
  const Interval& dom = m.domain();
  if (!(x_range.lo < x_range.hi) || x_range.lo < dom.lo || x_range.hi > dom.hi) {
    throw ModelError("build_hamiltonian: x_range must be a non-empty sub-interval of the model domain");
  }
  const double dx = x_range.width() / n_grid;
  const double xi_lo = safe_h(m, x_range.lo, 1e-9 * dx);
  const double xi_hi = safe_h(m, x_range.hi, -1e-9 * dx);
  const double r = m.coverage_radius() * (1.0 - 1e-9);
  if (xi_hi < r || (!m.isotonic() && xi_lo > -r)) {
    throw ModelError("build_hamiltonian: h(x_range) = [" + std::to_string(xi_lo) + ", " + std::to_string(xi_hi) +
                     "] does not reach the coverage radius " + std::to_string(m.coverage_radius()));
  }

  DiscreteHamiltonian H;
  H.x_range = x_range;
  H.n_grid = n_grid;
  H.dx = dx;
  const auto n = static_cast<std::size_t>(n_grid - 1);
  H.x.resize(n);
  H.d.resize(n);
  H.e.resize(n - 1);
  H.weight.resize(n);
  std::vector<double> a(n + 1);  // a[j] = 1/h' at x_j + dx/2, j = 0..N-1
  for (std::size_t j = 0; j <= n; ++j) a[j] = 1.0 / m.hp_at(x_range.lo + (static_cast<double>(j) + 0.5) * dx);
  const double inv_dx2 = 1.0 / (dx * dx);
  for (std::size_t i = 0; i < n; ++i) {
    const double xi = x_range.lo + static_cast<double>(i + 1) * dx;
    H.x[i] = xi;
    H.weight[i] = m.hp_at(xi);
    H.d[i] = 0.5 * (a[i] + a[i + 1]) * inv_dx2 / H.weight[i] + potential(m, xi);
  }
  for (std::size_t i = 0; i + 1 < n; ++i) {
    H.e[i] = -0.5 * a[i + 1] * inv_dx2 / std::sqrt(H.weight[i] * H.weight[i + 1]);
  }
  const auto finite = [](double v) { return std::isfinite(v); };
  if (!std::all_of(H.d.begin(), H.d.end(), finite) || !std::all_of(H.e.begin(), H.e.end(), finite)) {
    throw NumericalError("build_hamiltonian: non-finite matrix entries");
  }
  return H;
}

int sturm_count(const DiscreteHamiltonian& H, double lambda) {
  double emax = 1.0;
  for (const double v : H.e) emax = std::max(emax, v * v);
  const double pivmin = std::numeric_limits<double>::min() * emax;
  int count = 0;
  double q = 1.0;
  for (std::size_t i = 0; i < H.d.size(); ++i) {
    q = H.d[i] - lambda - (i == 0 ? 0.0 : H.e[i - 1] * H.e[i - 1] / q);
    if (std::abs(q) < pivmin) q = -pivmin;
    if (q < 0.0) ++count;
  }
  return count;
}

std::vector<double> lowest_eigenvalues(const DiscreteHamiltonian& H, int count) {
  if (count < 0 || count > 20) throw std::invalid_argument("lowest_eigenvalues: count must be in [0, 20]");
  if (static_cast<std::size_t>(count) > H.size()) throw std::invalid_argument("lowest_eigenvalues: count exceeds size");
  // Gershgorin bounds.
  double gl = std::numeric_limits<double>::infinity();
  double gu = -gl;
  for (std::size_t i = 0; i < H.size(); ++i) {
    const double r = (i > 0 ? std::abs(H.e[i - 1]) : 0.0) + (i + 1 < H.size() ? std::abs(H.e[i]) : 0.0);
    gl = std::min(gl, H.d[i] - r);
    gu = std::max(gu, H.d[i] + r);
  }
  std::vector<double> out;
  double floor = gl;
  for (int k = 0; k < count; ++k) {
    double lo = floor;
    double hi = gu;
    while (true) {
      const double mid = 0.5 * (lo + hi);
      if (hi - lo <= 1e-12 * (1.0 + std::abs(mid)) || mid <= lo || mid >= hi) break;
      (sturm_count(H, mid) > k ? hi : lo) = mid;
    }
    const double e = 0.5 * (lo + hi);
    out.push_back(e);
    floor = lo;
  }
  return out;
}

namespace {

// Solves (T - lambda I) y = b with partial pivoting (row interchanges).
std::vector<double> shifted_solve(const DiscreteHamiltonian& H, double lambda, std::vector<double> b) {
  const std::size_t n = H.size();
  std::vector<double> d(n), du(H.e), dl(H.e), du2(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) d[i] = H.d[i] - lambda;
  double anorm = 0.0;
  for (std::size_t i = 0; i < n; ++i) anorm = std::max(anorm, std::abs(d[i]) + (i < n - 1 ? std::abs(H.e[i]) : 0.0));
  const double tiny = std::numeric_limits<double>::epsilon() * anorm;

  for (std::size_t i = 0; i + 1 < n; ++i) {
    if (std::abs(d[i]) >= std::abs(dl[i])) {
      if (d[i] == 0.0) d[i] = tiny;
      const double fact = dl[i] / d[i];
      d[i + 1] -= fact * du[i];
      b[i + 1] -= fact * b[i];
      du2[i] = 0.0;
    } else {
      const double fact = d[i] / dl[i];
      d[i] = dl[i];
      const double temp = d[i + 1];
      d[i + 1] = du[i] - fact * temp;
      if (i + 2 < n) {
        du2[i] = du[i + 1];
        du[i + 1] = -fact * du2[i];
      }
      du[i] = temp;
      const double tb = b[i];
      b[i] = b[i + 1];
      b[i + 1] = tb - fact * b[i + 1];
    }
  }
  if (d[n - 1] == 0.0) d[n - 1] = tiny;

  b[n - 1] /= d[n - 1];
  if (n > 1) b[n - 2] = (b[n - 2] - du[n - 2] * b[n - 1]) / d[n - 2];
  for (std::size_t i = n - 2; i-- > 0;) b[i] = (b[i] - du[i] * b[i + 1] - du2[i] * b[i + 2]) / d[i];
  return b;
}

double norm2(const std::vector<double>& v) {
  double s = 0.0;
  for (const double x : v) s += x * x;
  return std::sqrt(s);
}

}  // namespace

std::vector<double> eigenvector(const DiscreteHamiltonian& H, double E, std::uint64_t seed) {
  const std::size_t n = H.size();
  if (n < 2) throw std::invalid_argument("eigenvector: matrix too small");
  Lcg64 rng(seed);
  std::vector<double> u(n);
  for (double& v : u) v = rng.uniform(-1.0, 1.0);
  double nu = norm2(u);
  for (double& v : u) v /= nu;

  bool converged = false;
  for (int sweep = 1; sweep <= 10; ++sweep) {
    std::vector<double> y = shifted_solve(H, E, u);
    const double ny = norm2(y);
    if (!(ny > 0.0) || !std::isfinite(ny)) throw NumericalError("eigenvector: inverse iteration broke down");
    double diff_plus = 0.0;
    double diff_minus = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      y[i] /= ny;
      diff_plus += (y[i] - u[i]) * (y[i] - u[i]);
      diff_minus += (y[i] + u[i]) * (y[i] + u[i]);
    }
    u = std::move(y);
    if (sweep >= 3 && std::sqrt(std::min(diff_plus, diff_minus)) <= 1e-9) {
      converged = true;
      break;
    }
  }
  if (!converged) throw NumericalError("eigenvector: inverse iteration did not converge in 10 sweeps");

  // u = sqrt(h') phi; sum u^2 dx = sum phi^2 h' dx.
  const double scale = 1.0 / (norm2(u) * std::sqrt(H.dx));
  std::vector<double> phi(n);
  double peak = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    phi[i] = u[i] * scale / std::sqrt(H.weight[i]);
    peak = std::max(peak, std::abs(phi[i]));
  }
  std::size_t outer = n - 1;
  while (outer > 0 && std::abs(phi[outer]) < 1e-3 * peak) --outer;
  if (phi[outer] < 0.0) {
    for (double& v : phi) v = -v;
  }
  return phi;
}

Spectrum compute_spectrum(const LienardModel& m, int levels, int n_grid, Interval x_range) {
  Spectrum s{build_hamiltonian(m, n_grid, x_range), {}, {}};
  s.numeric = lowest_eigenvalues(s.hamiltonian, levels);
  for (int n = 0; n < levels; ++n) s.closed.push_back(closed_form_eigenvalue(m, n));
  return s;
}

// ---------------------------------------------------------------------------
// Time-dependent equation

namespace {

struct SpatialJet {
  double S, S1, S2, S3;  // derivatives in xi
};

SpatialJet spatial_jet(const QuasiPolynomial& q, double xi, bool third) {
  const QuasiPolynomial d1 = q.derivative();
  const QuasiPolynomial d2 = d1.derivative();
  SpatialJet j{q(xi), d1(xi), d2(xi), 0.0};
  if (third) j.S3 = d2.derivative()(xi);
  return j;
}

struct Local {
  double h, hp, hpp, hppp;
};

Local local(const LienardModel& m, double x) {
  Local l{m.h_at(x), m.hp_at(x), m.hpp_at(x), m.hppp_at(x)};
  if (l.hp == 0.0) throw DomainError("h' vanishes");
  if (m.isotonic() && l.h == 0.0) throw DomainError("h vanishes with A != 0");
  return l;
}

// 2i psi_t + psi_xx/h'^2 - h'' psi_x/h'^3 + (A/h^2 - omega^2 h^2) psi
Complex schrodinger_operator(const LienardModel& m, const Local& l, Complex psi, Complex psi_t, Complex psi_x,
                             Complex psi_xx) {
  const double w2 = m.omega() * m.omega();
  double pot = -w2 * l.h * l.h;
  if (m.isotonic()) pot += m.A() / (l.h * l.h);
  return 2.0 * kI * psi_t + psi_xx / (l.hp * l.hp) - l.hpp * psi_x / (l.hp * l.hp * l.hp) + pot * psi;
}

}  // namespace

double pde_residual(const LienardModel& m, const StationaryState& st, double t, double x) {
  const Local l = local(m, x);
  const SpatialJet s = spatial_jet(st.spatial, l.h, false);
  const double E = st.energy;
  const Complex phase = std::exp(-kI * E * t);
  const Complex psi = phase * s.S;
  const Complex psi_t = -kI * E * psi;
  const Complex psi_x = phase * (l.hp * s.S1);
  const Complex psi_xx = phase * (l.hpp * s.S1 + l.hp * l.hp * s.S2);
  const Complex r = schrodinger_operator(m, l, psi, psi_t, psi_x, psi_xx);
  return std::abs(r) / (1.0 + std::abs(psi) * (1.0 + std::abs(E)));
}

double pde_symmetry_residual(const LienardModel& m, const Generator& g, const StationaryState& st, double t,
                             double x) {
  const Local l = local(m, x);
  const SpatialJet s = spatial_jet(st.spatial, l.h, true);
  const double E = st.energy;
  const Complex phase = std::exp(-kI * E * t);
  const Complex iE = -kI * E;  // d/dt acting on psi

  const Complex psi = phase * s.S;
  const Complex psi_t = iE * psi;
  const Complex psi_tt = iE * psi_t;
  const Complex psi_x = phase * (l.hp * s.S1);
  const Complex psi_xx = phase * (l.hpp * s.S1 + l.hp * l.hp * s.S2);
  const Complex psi_xxx = phase * (l.hppp * s.S1 + 3.0 * l.hp * l.hpp * s.S2 + l.hp * l.hp * l.hp * s.S3);
  const Complex psi_tx = iE * psi_x;
  const Complex psi_txx = iE * psi_xx;

  const auto& G = g.psi;
  const auto& T = g.tau;
  const auto& N = g.eta;
  const Complex G0 = G(t, x), Gt = G(t, x, 1, 0), Gx = G(t, x, 0, 1), Gxx = G(t, x, 0, 2);
  const Complex T0 = T(t, x), Tt = T(t, x, 1, 0), Tx = T(t, x, 0, 1), Txx = T(t, x, 0, 2);
  const Complex N0 = N(t, x), Nt = N(t, x, 1, 0), Nx = N(t, x, 0, 1), Nxx = N(t, x, 0, 2);

  const Complex Q = G0 * psi - T0 * psi_t - N0 * psi_x;
  const Complex Q_t = Gt * psi + G0 * psi_t - Tt * psi_t - T0 * psi_tt - Nt * psi_x - N0 * psi_tx;
  const Complex Q_x = Gx * psi + G0 * psi_x - Tx * psi_t - T0 * psi_tx - Nx * psi_x - N0 * psi_xx;
  const Complex Q_xx = Gxx * psi + 2.0 * Gx * psi_x + G0 * psi_xx - Txx * psi_t - 2.0 * Tx * psi_tx -
                       T0 * psi_txx - Nxx * psi_x - 2.0 * Nx * psi_xx - N0 * psi_xxx;
  const Complex r = schrodinger_operator(m, l, Q, Q_t, Q_x, Q_xx);
  // Q may cancel to zero (annihilation), so scale by the sizes of its terms.
  const double q_scale = std::abs(G0 * psi) + std::abs(T0 * psi_t) + std::abs(N0 * psi_x);
  return std::abs(r) / (1.0 + q_scale * (1.0 + std::abs(E)));
}

// ---------------------------------------------------------------------------
// Ladder

namespace {

struct ComplexPoly {
  std::vector<double> re;
  std::vector<double> im;
};

void accumulate(std::vector<double>& dst, const std::vector<double>& src, double c) {
  if (dst.size() < src.size()) dst.resize(src.size(), 0.0);
  for (std::size_t j = 0; j < src.size(); ++j) dst[j] += c * src[j];
}

// Sum over terms of scale * T(t) * xi_poly.
ComplexPoly xi_form(const Coefficient& c, double t, const std::string& label) {
  ComplexPoly out;
  for (const auto& term : c.terms()) {
    if (term.xi_poly.empty()) throw std::invalid_argument("generator " + label + " has no xi-space form");
    const Complex f = term.scale * evaluate(term.t_derivs[0], t);
    accumulate(out.re, term.xi_poly, f.real());
    accumulate(out.im, term.xi_poly, f.imag());
  }
  return out;
}

double poly_distance(const ComplexPoly& a, const ComplexPoly& b, Complex rot) {
  // max_j |a_j - rot * b_j|
  const std::size_t n = std::max({a.re.size(), a.im.size(), b.re.size(), b.im.size()});
  auto at = [](const std::vector<double>& v, std::size_t j) { return j < v.size() ? v[j] : 0.0; };
  double worst = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    const Complex ac(at(a.re, j), at(a.im, j));
    const Complex bc(at(b.re, j), at(b.im, j));
    worst = std::max(worst, std::abs(ac - rot * bc));
  }
  return worst;
}

double poly_scale(const ComplexPoly& p) {
  double s = 0.0;
  for (const double v : p.re) s = std::max(s, std::abs(v));
  for (const double v : p.im) s = std::max(s, std::abs(v));
  return s;
}

// Spatial xi-form at t = 0 after checking that the generator's time
// dependence really is e^{i rate t}.
ComplexPoly phase_free_form(const Coefficient& c, double rate, const std::string& label) {
  const ComplexPoly at0 = xi_form(c, 0.0, label);
  for (const double t : {0.37, 1.91}) {
    const ComplexPoly at_t = xi_form(c, t, label);
    const double tol = 1e-12 * (1.0 + poly_scale(at0));
    if (poly_distance(at_t, at0, std::exp(kI * rate * t)) > tol) {
      throw std::invalid_argument("generator " + label + " is not of the form e^{i rate t} X(x)");
    }
  }
  return at0;
}

struct ComplexQuasi {
  QuasiPolynomial re;
  QuasiPolynomial im;
};

ComplexQuasi times(const QuasiPolynomial& q, const ComplexPoly& c) {
  return {q.times_poly(c.re), q.times_poly(c.im)};
}

double max_coeff(const ComplexQuasi& q) { return std::max(q.re.max_abs_coeff(), q.im.max_abs_coeff()); }

// Zero out coefficients at the top end and below the target exponent that
// are rounding residue relative to `scale`.
QuasiPolynomial clean(const QuasiPolynomial& q, double s_target, double scale) {
  if (q.is_zero()) return QuasiPolynomial(q.omega(), s_target, {});
  std::vector<double> c = q.coeffs();
  const double cut = 1e-13 * scale;
  while (!c.empty() && std::abs(c.back()) <= cut) c.pop_back();
  const double shift = s_target - q.s();
  for (std::size_t j = 0; j < c.size() && static_cast<double>(j) < shift; ++j) {
    if (std::abs(c[j]) <= cut) c[j] = 0.0;
  }
  return QuasiPolynomial(q.omega(), q.s(), std::move(c)).rebased(s_target, 0.0);
}

void check_stationary(const LienardModel& m, const StationaryState& st) {
  Interval span = m.xi_range();
  const double r = m.coverage_radius();
  span.lo = std::max(span.lo, m.isotonic() ? 0.05 * r : -r);
  span.hi = std::min(span.hi, r);
  if (!(span.lo < span.hi)) span = m.xi_range();
  for (int j = 1; j <= 5; ++j) {
    const double xi = span.lo + span.width() * j / 6.0;
    const double x = m.inverse(xi);
    const double res = pde_residual(m, st, 0.3, x);
    if (!(res <= 1e-8)) {
      throw NumericalError("apply_characteristic: input is not a stationary solution (residual " +
                           std::to_string(res) + ")");
    }
  }
}

}  // namespace

std::optional<StationaryState> apply_characteristic(const LienardModel& m, const Generator& g,
                                                    const StationaryState& st) {
  if (!g.phase_rate) throw std::invalid_argument("apply_characteristic: generator " + g.label + " has no phase rate");
  if (!g.expected_valid) {
    throw ModelError("apply_characteristic: " + g.label + " is not a symmetry for this model");
  }
  check_stationary(m, st);

  const double rate = *g.phase_rate;
  const ComplexPoly cg = phase_free_form(g.psi, rate, g.label);
  const ComplexPoly ct = phase_free_form(g.tau, rate, g.label);
  const ComplexPoly ce = phase_free_form(g.eta, rate, g.label);

  // Q e^{i(E - rate) t} = c_psi S - c_tau (-iE) S - c_eta S'  (all in xi).
  const QuasiPolynomial& S = st.spatial;
  const ComplexQuasi a = times(S, cg);
  const ComplexQuasi b = times(S, ct);  // multiplied by +iE below
  const ComplexQuasi c = times(S.derivative(), ce);
  const double E = st.energy;
  const QuasiPolynomial re = a.re - b.im.scaled(E) - c.re;
  const QuasiPolynomial im = a.im + b.re.scaled(E) - c.im;

  const double scale = std::max({max_coeff(a), std::abs(E) * max_coeff(b), max_coeff(c)});
  if (std::max(re.max_abs_coeff(), im.max_abs_coeff()) < 1e-13 * scale) return std::nullopt;

  const double s_target = canonical_exponent(m);
  const QuasiPolynomial R = clean(re, s_target, scale);
  const QuasiPolynomial I = clean(im, s_target, scale);
  const bool real_dominant = R.max_abs_coeff() >= I.max_abs_coeff();
  const QuasiPolynomial& F = real_dominant ? R : I;
  const QuasiPolynomial& O = real_dominant ? I : R;

  // The complex result must be a single real function times a constant.
  double dot = 0.0;
  double ff = 0.0;
  for (std::size_t j = 0; j < F.coeffs().size(); ++j) {
    ff += F.coeffs()[j] * F.coeffs()[j];
    if (j < O.coeffs().size()) dot += F.coeffs()[j] * O.coeffs()[j];
  }
  const double lambda = dot / ff;
  const QuasiPolynomial leftover = O - F.scaled(lambda);
  if (leftover.max_abs_coeff() > 1e-10 * F.max_abs_coeff()) {
    throw NumericalError("apply_characteristic: result is not a single stationary state");
  }

  StationaryState out;
  out.energy = E - rate;
  out.spatial = F;
  const double spacing = m.isotonic() ? 2.0 * m.omega() : m.omega();
  out.n = st.n + static_cast<int>(std::lround(-rate / spacing));
  return out;
}

StationaryState ladder_generate(const LienardModel& m, int n) {
  if (n < 0 || n > 30) throw std::invalid_argument("ladder_generate: n must be in [0, 30]");
  const Generator up = complex_generator(m, m.isotonic() ? "Omega_2-" : "Omega_3-");
  StationaryState st = closed_form_eigenfunction(m, 0);
  for (int j = 0; j < n; ++j) {
    auto next = apply_characteristic(m, up, st);
    if (!next) throw NumericalError("ladder_generate: creation step annihilated the state");
    next->spatial = normalize_and_orient(m, next->spatial);
    st = std::move(*next);
  }
  return st;
}

double normalized_overlap(const LienardModel& m, const QuasiPolynomial& F, const QuasiPolynomial& G) {
  const double fg = inner_product(m, F, G);
  const double ff = inner_product(m, F, F);
  const double gg = inner_product(m, G, G);
  return std::abs(fg) / std::sqrt(ff * gg);
}

// ---------------------------------------------------------------------------
// von Roos ordering

double vonroos_residual(const LienardModel& m, const StationaryState& st, double alpha, double beta, double gamma,
                        double t, double x) {
  if (std::abs(alpha + beta + gamma + 1.0) > 1e-12) {
    throw std::invalid_argument("vonroos_residual: alpha + beta + gamma must equal -1");
  }
  const double w = m.omega();
  if (!m.isotonic() && w != 1.0) throw ModelError("vonroos_residual: the A = 0 potential needs omega = 1");
  if (m.isotonic() && w != 0.5) throw ModelError("vonroos_residual: the A != 0 potential needs omega = 1/2");

  const Local l = local(m, x);
  const SpatialJet s = spatial_jet(st.spatial, l.h, false);
  const double E = st.energy;
  const Complex phase = std::exp(-kI * E * t);
  const Complex psi = phase * s.S;
  const Complex psi_x = phase * (l.hp * s.S1);
  const Complex psi_xx = phase * (l.hpp * s.S1 + l.hp * l.hp * s.S2);

  // e^{int f} = h' with f = h''/h'.
  const double f = l.hpp / l.hp;
  const double fp = (l.hppp * l.hp - l.hpp * l.hpp) / (l.hp * l.hp);
  const double g = std::sqrt(l.hp);
  const Complex phi = g * psi;
  const Complex phi_t = -kI * E * phi;
  const Complex phi_x = g * (psi_x + 0.5 * f * psi);
  const Complex phi_xx = g * (psi_xx + f * psi_x + (0.5 * fp + 0.25 * f * f) * psi);

  double V;
  if (!m.isotonic()) {
    V = 0.5 * l.h * l.h;
  } else {
    const double mu = 0.5 * m.k();
    V = l.h * l.h / 8.0 + 0.5 * (0.75 - (1.0 + mu) * (1.0 - mu)) / (l.h * l.h);
  }
  const double bracket = (beta + 1.0) * (2.0 * f * f - fp) + 4.0 * alpha * (alpha + beta + 1.0) * f * f;
  const Complex r = 2.0 * kI * phi_t + (phi_xx - 2.0 * f * phi_x + bracket * phi) / (l.hp * l.hp) - 2.0 * V * phi;
  return std::abs(r) / (1.0 + std::abs(phi) * (1.0 + std::abs(E)));
}

// ---------------------------------------------------------------------------
// Export

void write_spectrum_csv(std::ostream& os, const Spectrum& s) {
  os << "n,E_numeric,E_closed,abs_err\n";
  os << std::setprecision(17);
  for (std::size_t n = 0; n < s.numeric.size(); ++n) {
    os << n << ',' << s.numeric[n] << ',' << s.closed[n] << ',' << std::abs(s.numeric[n] - s.closed[n]) << '\n';
  }
}

void write_eigenfunction_csv(std::ostream& os, const LienardModel& m, const DiscreteHamiltonian& H,
                             const std::vector<double>& phi) {
  if (phi.size() != H.size()) throw std::invalid_argument("write_eigenfunction_csv: size mismatch");
  os << "x,xi,psi\n";
  os << std::setprecision(17);
  auto end_row = [&](double x) {
    try {
      const double xi = m.h_at(x);
      os << x << ',' << xi << ',' << 0.0 << '\n';
    } catch (const Error&) {
      // singular endpoint: no row
    }
  };
  end_row(H.x_range.lo);
  for (std::size_t i = 0; i < H.size(); ++i) os << H.x[i] << ',' << m.h_at(H.x[i]) << ',' << phi[i] << '\n';
  end_row(H.x_range.hi);
}

}  // namespace lienard
