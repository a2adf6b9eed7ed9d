#include "lienard/symmetry.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <iomanip>
#include <numbers>
#include <ostream>
#include <stdexcept>

#include "lienard/error.hpp"

namespace lienard {

std::vector<PhasePoint> sample_phase_points(const LienardModel& m, int count, std::uint64_t seed) {
  Lcg64 rng(seed);
  const double period = 2.0 * std::numbers::pi / m.omega();
  const Interval& d = m.domain();
  const double lo = d.lo + 0.05 * d.width();
  const double hi = d.hi - 0.05 * d.width();
  std::vector<PhasePoint> pts;
  pts.reserve(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) {
    PhasePoint p{};
    p.t = rng.uniform(0.0, period);
    p.x = rng.uniform(lo, hi);
    p.v = rng.uniform(-2.0, 2.0);
    pts.push_back(p);
  }
  return pts;
}

// ---------------------------------------------------------------------------
// Coefficient

Coefficient& Coefficient::add(Complex scale, const Expression& t_factor, const Expression& x_factor,
                              std::vector<double> xi_poly) {
  Term term;
  term.scale = scale;
  term.t_derivs = {simplify(t_factor), differentiate(t_factor, 1), differentiate(t_factor, 2)};
  term.x_derivs = {simplify(x_factor), differentiate(x_factor, 1), differentiate(x_factor, 2)};
  term.xi_poly = std::move(xi_poly);
  terms_.push_back(std::move(term));
  return *this;
}

Complex Coefficient::operator()(double t, double x, int dt, int dx) const {
  if (dt < 0 || dt > 2 || dx < 0 || dx > 2) throw std::invalid_argument("Coefficient: derivative order out of range");
  Complex acc = 0.0;
  for (const Term& term : terms_) {
    acc += term.scale * evaluate(term.t_derivs[dt], t) * evaluate(term.x_derivs[dx], x);
  }
  return acc;
}

bool Coefficient::is_real() const {
  return std::all_of(terms_.begin(), terms_.end(), [](const Term& term) { return term.scale.imag() == 0.0; });
}

Coefficient Coefficient::scaled(Complex c) const {
  Coefficient out = *this;
  for (Term& term : out.terms_) term.scale *= c;
  return out;
}

Generator Generator::scaled(double c) const {
  Generator g = *this;
  g.tau = tau.scaled(c);
  g.eta = eta.scaled(c);
  // psi d_psi is scaled too: the whole vector field is multiplied by c.
  g.psi = psi.scaled(c);
  return g;
}

const char* to_string(Classification c) {
  switch (c) {
    case Classification::noether: return "noether";
    case Classification::lie_only: return "lie_only";
    case Classification::not_symmetry: return "not_symmetry";
  }
  return "?";
}

// ---------------------------------------------------------------------------
// Generator tables

namespace {

struct Factors {
  Expression one = Expression::constant(1.0);
  Expression h, hp;
  Expression h_over_hp, inv_hp, h2, h2_over_hp;
  Expression cos1, sin1, cos2, sin2;  // cos(omega t), ..., sin(2 omega t)

  explicit Factors(const LienardModel& m) : h(m.h()), hp(m.hp()) {
    h_over_hp = simplify(h / hp);
    inv_hp = simplify(1.0 / hp);
    h2 = simplify(h * h);
    h2_over_hp = simplify(h * h / hp);
    const Expression t = Expression::variable("t");
    cos1 = cos(Expression::constant(m.omega()) * t);
    sin1 = sin(Expression::constant(m.omega()) * t);
    cos2 = cos(Expression::constant(2.0 * m.omega()) * t);
    sin2 = sin(Expression::constant(2.0 * m.omega()) * t);
  }
};

Generator make(std::string label, bool valid) {
  Generator g;
  g.label = std::move(label);
  g.expected_valid = valid;
  return g;
}

// Gamma_2 / Gamma_3 spatial parts shared with Xi_2 / Xi_3.
Generator gamma2(const Factors& f, double w) {
  Generator g = make("Gamma_2", true);
  g.tau.add(1.0, f.cos2, f.one, {1.0});
  g.eta.add(-w, f.sin2, f.h_over_hp, {0.0, 1.0});
  return g;
}

Generator gamma3(const Factors& f, double w) {
  Generator g = make("Gamma_3", true);
  g.tau.add(1.0, f.sin2, f.one, {1.0});
  g.eta.add(w, f.cos2, f.h_over_hp, {0.0, 1.0});
  return g;
}

Generator gamma7(const Factors& f, double w, bool valid) {
  Generator g = make("Gamma_7", valid);
  g.eta.add(w * w, f.sin1, f.inv_hp, {1.0});
  return g;
}

Generator gamma8(const Factors& f, double w, bool valid) {
  Generator g = make("Gamma_8", valid);
  g.eta.add(w * w, f.cos1, f.inv_hp, {1.0});
  return g;
}

}  // namespace

std::vector<Generator> standard_generators(const LienardModel& m) {
  const Factors f(m);
  const double w = m.omega();
  const bool full = !m.isotonic();
  std::vector<Generator> out;

  Generator g1 = make("Gamma_1", true);
  g1.tau.add(1.0, f.one, f.one, {1.0});
  out.push_back(g1);
  out.push_back(gamma2(f, w));
  out.push_back(gamma3(f, w));

  Generator g4 = make("Gamma_4", full);
  g4.tau.add(1.0 / (w * w), f.cos1, f.h, {0.0, 1.0});
  g4.eta.add(-1.0 / w, f.sin1, f.h2_over_hp, {0.0, 0.0, 1.0});
  out.push_back(g4);

  Generator g5 = make("Gamma_5", full);
  g5.tau.add(1.0 / (w * w), f.sin1, f.h, {0.0, 1.0});
  g5.eta.add(1.0 / w, f.cos1, f.h2_over_hp, {0.0, 0.0, 1.0});
  out.push_back(g5);

  Generator g6 = make("Gamma_6", full);
  g6.eta.add(1.0, f.one, f.h_over_hp, {0.0, 1.0});
  out.push_back(g6);

  out.push_back(gamma7(f, w, full));
  out.push_back(gamma8(f, w, full));
  return out;
}

std::vector<Generator> schrodinger_generators(const LienardModel& m) {
  const Factors f(m);
  const double w = m.omega();
  const bool full = !m.isotonic();
  const Complex i(0.0, 1.0);
  std::vector<Generator> out;

  Generator x1 = make("Xi_1", true);
  x1.tau.add(1.0, f.one, f.one, {1.0});
  out.push_back(x1);

  Generator x2 = gamma2(f, w);
  x2.label = "Xi_2";
  x2.psi.add(w / 2.0, f.sin2, f.one, {1.0});
  x2.psi.add(-i * w * w, f.cos2, f.h2, {0.0, 0.0, 1.0});
  out.push_back(x2);

  Generator x3 = gamma3(f, w);
  x3.label = "Xi_3";
  x3.psi.add(-w / 2.0, f.cos2, f.one, {1.0});
  x3.psi.add(-i * w * w, f.sin2, f.h2, {0.0, 0.0, 1.0});
  out.push_back(x3);

  // The psi-parts carry omega^3; with only omega they solve the determining
  // equations for omega = 1 alone.
  Generator x4 = gamma7(f, w, full);
  x4.label = "Xi_4";
  x4.psi.add(i * w * w * w, f.cos1, f.h, {0.0, 1.0});
  out.push_back(x4);

  Generator x5 = gamma8(f, w, full);
  x5.label = "Xi_5";
  x5.psi.add(-i * w * w * w, f.sin1, f.h, {0.0, 1.0});
  out.push_back(x5);
  return out;
}

namespace {

// e^{+-2 i w t}[d_t +- i w (h/h') d_x - i (w^2 h^2 +- w/2) psi d_psi]
Generator omega2(const Factors& f, double w, int sign) {
  const Complex i(0.0, 1.0);
  const double s = sign;
  Generator g = make(sign > 0 ? "Omega_2+" : "Omega_2-", true);
  g.phase_rate = 2.0 * w * s;
  g.tau.add(1.0, f.cos2, f.one, {1.0});
  g.tau.add(s * i, f.sin2, f.one, {1.0});
  g.eta.add(s * i * w, f.cos2, f.h_over_hp, {0.0, 1.0});
  g.eta.add(-w, f.sin2, f.h_over_hp, {0.0, 1.0});
  g.psi.add(-i * w * w, f.cos2, f.h2, {0.0, 0.0, 1.0});
  g.psi.add(s * w * w, f.sin2, f.h2, {0.0, 0.0, 1.0});
  g.psi.add(-s * i * w / 2.0, f.cos2, f.one, {1.0});
  g.psi.add(w / 2.0, f.sin2, f.one, {1.0});
  return g;
}

// e^{+-i w t}((1/h') d_x -+ w h psi d_psi)
Generator omega3(const Factors& f, double w, int sign, bool valid) {
  const Complex i(0.0, 1.0);
  const double s = sign;
  Generator g = make(sign > 0 ? "Omega_3+" : "Omega_3-", valid);
  g.phase_rate = w * s;
  g.eta.add(1.0, f.cos1, f.inv_hp, {1.0});
  g.eta.add(s * i, f.sin1, f.inv_hp, {1.0});
  g.psi.add(-s * w, f.cos1, f.h, {0.0, 1.0});
  g.psi.add(-i * w, f.sin1, f.h, {0.0, 1.0});
  return g;
}

}  // namespace

std::vector<Generator> complex_generators(const LienardModel& m) {
  const Factors f(m);
  const double w = m.omega();
  const bool full = !m.isotonic();
  std::vector<Generator> out;
  Generator o1 = make("Omega_1", true);
  o1.phase_rate = 0.0;
  o1.tau.add(Complex(0.0, 1.0), f.one, f.one, {1.0});
  out.push_back(o1);
  out.push_back(omega2(f, w, +1));
  out.push_back(omega2(f, w, -1));
  out.push_back(omega3(f, w, +1, full));
  out.push_back(omega3(f, w, -1, full));
  return out;
}

std::vector<Generator> transcribed_generators(const LienardModel& m) {
  const Factors f(m);
  const double w = m.omega();
  const Complex i(0.0, 1.0);
  std::vector<Generator> out;

  Generator x4 = gamma7(f, w, false);
  x4.label = "Xi_4 (transcribed)";
  x4.psi.add(i * w, f.cos1, f.h, {0.0, 1.0});
  out.push_back(x4);

  Generator x5 = gamma8(f, w, false);
  x5.label = "Xi_5 (transcribed)";
  x5.psi.add(-i * w, f.sin1, f.h, {0.0, 1.0});
  out.push_back(x5);

  // e^{+-2 i w t}[d_t +- i (h/h') d_x - i (w^2 h^2 +- (i/2) w) psi d_psi]
  for (const int sign : {+1, -1}) {
    const double s = sign;
    Generator g = make(sign > 0 ? "Omega_2+ (transcribed)" : "Omega_2- (transcribed)", false);
    g.phase_rate = 2.0 * w * s;
    g.tau.add(1.0, f.cos2, f.one, {1.0});
    g.tau.add(s * i, f.sin2, f.one, {1.0});
    g.eta.add(s * i, f.cos2, f.h_over_hp, {0.0, 1.0});
    g.eta.add(-1.0, f.sin2, f.h_over_hp, {0.0, 1.0});
    g.psi.add(-i * w * w, f.cos2, f.h2, {0.0, 0.0, 1.0});
    g.psi.add(s * w * w, f.sin2, f.h2, {0.0, 0.0, 1.0});
    g.psi.add(s * w / 2.0, f.cos2, f.one, {1.0});
    g.psi.add(i * w / 2.0, f.sin2, f.one, {1.0});
    out.push_back(g);
  }
  return out;
}

Generator complex_generator(const LienardModel& m, const std::string& label) {
  for (Generator& g : complex_generators(m)) {
    if (g.label == label) return g;
  }
  throw std::invalid_argument("unknown complex generator: " + label);
}

// ---------------------------------------------------------------------------
// Prolongation

namespace {

struct Jet {
  double tau, tau_t, tau_x, tau_tt, tau_tx, tau_xx;
  double eta, eta_t, eta_x, eta_tt, eta_tx, eta_xx;
};

Jet jet(const Generator& g, double t, double x) {
  if (!g.tau.is_real() || !g.eta.is_real()) {
    throw std::invalid_argument("generator " + g.label + " has complex point coefficients");
  }
  Jet j{};
  j.tau = g.tau.real(t, x);
  j.tau_t = g.tau.real(t, x, 1, 0);
  j.tau_x = g.tau.real(t, x, 0, 1);
  j.tau_tt = g.tau.real(t, x, 2, 0);
  j.tau_tx = g.tau.real(t, x, 1, 1);
  j.tau_xx = g.tau.real(t, x, 0, 2);
  j.eta = g.eta.real(t, x);
  j.eta_t = g.eta.real(t, x, 1, 0);
  j.eta_x = g.eta.real(t, x, 0, 1);
  j.eta_tt = g.eta.real(t, x, 2, 0);
  j.eta_tx = g.eta.real(t, x, 1, 1);
  j.eta_xx = g.eta.real(t, x, 0, 2);
  return j;
}

double eta1(const Jet& j, double v) { return j.eta_t + v * (j.eta_x - j.tau_t) - v * v * j.tau_x; }

struct Rhs {
  double F, F_x, F_v;
};

Rhs rhs_jet(const LienardModel& m, double x, double v) {
  const double h = m.h_at(x);
  const double hp = m.hp_at(x);
  const double hpp = m.hpp_at(x);
  const double hppp = m.hppp_at(x);
  const double w2 = m.omega() * m.omega();
  const double A = m.A();
  if (A != 0.0 && h == 0.0) throw DomainError("singular point h(x) = 0");
  const double c2 = -hpp / hp;
  const double c2_x = -(hppp * hp - hpp * hpp) / (hp * hp);
  double c0 = -w2 * h / hp;
  double c0_x = -w2 * (1.0 - h * hpp / (hp * hp));
  if (A != 0.0) {
    const double h3 = h * h * h;
    c0 -= A / (hp * h3);
    c0_x += A * (hpp * h + 3.0 * hp * hp) / (hp * hp * h3 * h);
  }
  return {c2 * v * v + c0, c2_x * v * v + c0_x, 2.0 * c2 * v};
}

}  // namespace

double lie_symmetry_residual(const LienardModel& m, const Generator& g, double t, double x, double v) {
  const Jet j = jet(g, t, x);
  const Rhs r = rhs_jet(m, x, v);
  const double e1 = eta1(j, v);
  const double e1_t = j.eta_tt + v * (j.eta_tx - j.tau_tt) - v * v * j.tau_tx;
  const double e1_x = j.eta_tx + v * (j.eta_xx - j.tau_tx) - v * v * j.tau_xx;
  const double e1_v = (j.eta_x - j.tau_t) - 2.0 * v * j.tau_x;
  const double dtau = j.tau_t + v * j.tau_x;
  const double e2 = e1_t + v * e1_x + r.F * e1_v - r.F * dtau;
  // Autonomous equation: F_t = 0.
  const double residual = e2 - j.eta * r.F_x - e1 * r.F_v;
  return std::abs(residual) / (1.0 + std::abs(r.F_x) + std::abs(r.F_v));
}

double max_lie_residual(const LienardModel& m, const Generator& g, const std::vector<PhasePoint>& points) {
  double worst = 0.0;
  for (const PhasePoint& p : points) worst = std::max(worst, lie_symmetry_residual(m, g, p.t, p.x, p.v));
  return worst;
}

namespace {

constexpr int kNoetherPoints = 50;
constexpr double kLieTolerance = 1e-8;

struct AffineSplit {
  bool affine;
  double a;  // v^0 coefficient
  double b;  // v^1 coefficient
  double scale;  // largest |term| sum; sets the round-off floor of a and b
};

// Cubic fit of W(v) = tau L_t + eta L_x + eta^(1) L_v + L D_t tau on v = -2..2.
AffineSplit noether_split(const LienardModel& m, const Generator& g, double t, double x) {
  const Jet j = jet(g, t, x);
  const double h = m.h_at(x);
  const double hp = m.hp_at(x);
  const double hpp = m.hpp_at(x);
  const double w2 = m.omega() * m.omega();
  const double A = m.A();

  Eigen::Matrix<double, 5, 4> vander;
  Eigen::Matrix<double, 5, 1> w;
  double scale = 0.0;
  for (int r = 0; r < 5; ++r) {
    const double v = r - 2.0;
    const double L = lagrangian(m, x, v);
    double L_x = hp * hpp * v * v - w2 * h * hp;
    if (A != 0.0) L_x -= A * hp / (h * h * h);
    const double L_v = hp * hp * v;
    const double t1 = j.eta * L_x;
    const double t2 = eta1(j, v) * L_v;
    const double t3 = L * (j.tau_t + v * j.tau_x);
    w(r) = t1 + t2 + t3;  // L_t = 0
    scale = std::max(scale, std::abs(t1) + std::abs(t2) + std::abs(t3));
    for (int c = 0; c < 4; ++c) vander(r, c) = std::pow(v, c);
  }
  const Eigen::Vector4d coef = vander.colPivHouseholderQr().solve(w);
  const double tol = 1e-9 * std::max(scale, 1e-300);
  const bool affine = std::abs(coef(2)) <= tol && std::abs(coef(3)) <= tol;
  return {affine, coef(0), coef(1), scale};
}

}  // namespace

Classification noether_classify(const LienardModel& m, const Generator& g, std::uint64_t seed) {
  const auto points = sample_phase_points(m, kNoetherPoints, seed);
  if (max_lie_residual(m, g, points) > kLieTolerance) return Classification::not_symmetry;

  const Interval& d = m.domain();
  for (const PhasePoint& p : points) {
    const AffineSplit c = noether_split(m, g, p.t, p.x);
    if (!c.affine) return Classification::lie_only;

    // Gauge compatibility a_x = b_t by central differences.
    const double dx = 1e-5 * std::max(1.0, std::abs(p.x));
    const double dt = 1e-5 * std::max(1.0, std::abs(p.t));
    if (!d.contains(p.x - dx) || !d.contains(p.x + dx)) continue;
    const double a_x = (noether_split(m, g, p.t, p.x + dx).a - noether_split(m, g, p.t, p.x - dx).a) / (2.0 * dx);
    const double b_t = (noether_split(m, g, p.t + dt, p.x).b - noether_split(m, g, p.t - dt, p.x).b) / (2.0 * dt);
    // a and b come out of large cancelling terms when A / h^2 is big.
    const double noise = 1e3 * std::numeric_limits<double>::epsilon() * c.scale / std::min(dx, dt);
    if (std::abs(a_x - b_t) > 1e-6 * (1.0 + std::abs(a_x) + std::abs(b_t)) + noise) return Classification::lie_only;
  }
  return Classification::noether;
}

double delta78(const LienardModel& m, double t, double x, double v) {
  const auto gens = standard_generators(m);
  const Jet j7 = jet(gens[6], t, x);
  const Jet j8 = jet(gens[7], t, x);
  const double F = rhs_jet(m, x, v).F;
  Eigen::Matrix3d mat;
  mat << 1.0, v, F,                     //
      j7.tau, j7.eta, eta1(j7, v),      //
      j8.tau, j8.eta, eta1(j8, v);
  return mat.determinant();
}

// ---------------------------------------------------------------------------
// Algebra closure

ClosureReport algebra_closure_check(const LienardModel& m, const std::vector<Generator>& gens, std::uint64_t seed) {
  constexpr int kPoints = 50;
  constexpr double kTolerance = 1e-8;
  const auto n = static_cast<int>(gens.size());
  const auto points = sample_phase_points(m, kPoints, seed);

  std::vector<std::vector<Jet>> jets(static_cast<std::size_t>(n));
  Eigen::MatrixXd basis(2 * kPoints, n);
  for (int k = 0; k < n; ++k) {
    for (int p = 0; p < kPoints; ++p) {
      jets[k].push_back(jet(gens[k], points[p].t, points[p].x));
      basis(2 * p, k) = jets[k][p].tau;
      basis(2 * p + 1, k) = jets[k][p].eta;
    }
  }
  const Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(basis);

  ClosureReport report;
  report.structure.assign(n, std::vector<std::vector<double>>(n, std::vector<double>(n, 0.0)));
  std::vector<Eigen::VectorXd> rows;
  for (int a = 0; a < n; ++a) {
    for (int b = a + 1; b < n; ++b) {
      Eigen::VectorXd comm(2 * kPoints);
      for (int p = 0; p < kPoints; ++p) {
        const Jet& X = jets[a][p];
        const Jet& Y = jets[b][p];
        comm(2 * p) = X.tau * Y.tau_t + X.eta * Y.tau_x - Y.tau * X.tau_t - Y.eta * X.tau_x;
        comm(2 * p + 1) = X.tau * Y.eta_t + X.eta * Y.eta_x - Y.tau * X.eta_t - Y.eta * X.eta_x;
      }
      const double norm = comm.norm();
      Eigen::VectorXd c = Eigen::VectorXd::Zero(n);
      double residual = 0.0;
      if (norm > 1e-14 * std::max(1.0, basis.norm())) {
        c = qr.solve(comm);
        residual = (basis * c - comm).norm() / norm;
      }
      report.max_residual = std::max(report.max_residual, residual);
      if (residual > kTolerance) report.closed = false;
      for (int k = 0; k < n; ++k) {
        report.structure[a][b][k] = c(k);
        report.structure[b][a][k] = -c(k);
      }
      rows.push_back(c);
    }
  }
  if (!rows.empty()) {
    Eigen::MatrixXd sc(static_cast<Eigen::Index>(rows.size()), n);
    for (std::size_t r = 0; r < rows.size(); ++r) sc.row(static_cast<Eigen::Index>(r)) = rows[r].transpose();
    const Eigen::JacobiSVD<Eigen::MatrixXd> svd(sc);
    const auto& sv = svd.singularValues();
    const double top = sv.size() > 0 ? sv(0) : 0.0;
    for (Eigen::Index i = 0; i < sv.size(); ++i) {
      if (top > 0.0 && sv(i) > 1e-8 * top) ++report.rank;
    }
  }
  return report;
}

std::vector<SymmetryRow> classify_standard_generators(const LienardModel& m, int samples, std::uint64_t seed) {
  const auto points = sample_phase_points(m, samples, seed);
  std::vector<SymmetryRow> rows;
  for (const Generator& g : standard_generators(m)) {
    rows.push_back({g.label, max_lie_residual(m, g, points), noether_classify(m, g, seed)});
  }
  return rows;
}

void write_symmetry_csv(std::ostream& os, const std::vector<SymmetryRow>& rows) {
  os << "generator,max_residual,classification\n";
  os << std::setprecision(17);
  for (const SymmetryRow& r : rows) os << r.generator << ',' << r.max_residual << ',' << to_string(r.classification) << '\n';
}

}  // namespace lienard
