#include "lienard/polyspec.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "lienard/error.hpp"

namespace lienard {

double hermite(int n, double x) {
  if (n < 0) throw std::invalid_argument("hermite: n must be >= 0");
  if (n == 0) return 1.0;
  double prev = 1.0;
  double cur = 2.0 * x;
  for (int k = 1; k < n; ++k) {
    const double next = 2.0 * x * cur - 2.0 * k * prev;
    prev = cur;
    cur = next;
  }
  return cur;
}

double assoc_laguerre(int n, double alpha, double x) {
  if (n < 0) throw std::invalid_argument("assoc_laguerre: n must be >= 0");
  if (n == 0) return 1.0;
  double prev = 1.0;
  double cur = 1.0 + alpha - x;
  for (int k = 1; k < n; ++k) {
    const double next = ((2.0 * k + 1.0 + alpha - x) * cur - (k + alpha) * prev) / (k + 1.0);
    prev = cur;
    cur = next;
  }
  return cur;
}

double gamma_fn(double x) {
  if (!(x > 0.0)) throw DomainError("gamma_fn: argument must be positive");
  static constexpr std::array<double, 9> kLanczos = {
      0.99999999999980993,  676.5203681218851,     -1259.1392167224028,
      771.32342877765313,   -176.61502916214059,   12.507343278686905,
      -0.13857109526572012, 9.9843695780195716e-6, 1.5056327351493116e-7};
  if (x < 0.5) return std::numbers::pi / (std::sin(std::numbers::pi * x) * gamma_fn(1.0 - x));
  const double z = x - 1.0;
  double sum = kLanczos[0];
  for (std::size_t i = 1; i < kLanczos.size(); ++i) sum += kLanczos[i] / (z + static_cast<double>(i));
  const double t = z + 7.5;
  return std::sqrt(2.0 * std::numbers::pi) * std::pow(t, z + 0.5) * std::exp(-t) * sum;
}

std::vector<double> hermite_coefficients(int n) {
  if (n < 0) throw std::invalid_argument("hermite_coefficients: n must be >= 0");
  std::vector<double> prev{1.0};
  if (n == 0) return prev;
  std::vector<double> cur{0.0, 2.0};
  for (int k = 1; k < n; ++k) {
    std::vector<double> next(cur.size() + 1, 0.0);
    for (std::size_t j = 0; j < cur.size(); ++j) next[j + 1] += 2.0 * cur[j];
    for (std::size_t j = 0; j < prev.size(); ++j) next[j] -= 2.0 * k * prev[j];
    prev = std::move(cur);
    cur = std::move(next);
  }
  return cur;
}

std::vector<double> laguerre_coefficients(int n, double alpha) {
  if (n < 0) throw std::invalid_argument("laguerre_coefficients: n must be >= 0");
  std::vector<double> prev{1.0};
  if (n == 0) return prev;
  std::vector<double> cur{1.0 + alpha, -1.0};
  for (int k = 1; k < n; ++k) {
    std::vector<double> next(cur.size() + 1, 0.0);
    for (std::size_t j = 0; j < cur.size(); ++j) {
      next[j] += (2.0 * k + 1.0 + alpha) * cur[j];
      next[j + 1] -= cur[j];
    }
    for (std::size_t j = 0; j < prev.size(); ++j) next[j] -= (k + alpha) * prev[j];
    for (auto& c : next) c /= (k + 1.0);
    prev = std::move(cur);
    cur = std::move(next);
  }
  return cur;
}

double polyval(std::span<const double> coeffs, double x) {
  double acc = 0.0;
  for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = acc * x + *it;
  return acc;
}

// ---------------------------------------------------------------------------
// QuasiPolynomial

namespace {

bool is_integer(double v) { return v == std::nearbyint(v); }

}  // namespace

QuasiPolynomial::QuasiPolynomial(double omega, double s, std::vector<double> coeffs)
    : omega_(omega), s_(s), coeffs_(std::move(coeffs)) {
  if (!(omega > 0.0)) throw std::invalid_argument("QuasiPolynomial: omega must be positive");
  canonicalize();
}

void QuasiPolynomial::canonicalize() {
  while (!coeffs_.empty() && coeffs_.back() == 0.0) coeffs_.pop_back();
  // A negative integer power with vanishing low-order coefficients is a
  // polynomial in disguise; fold it back so xi = 0 stays evaluable.
  while (s_ < 0.0 && is_integer(s_) && !coeffs_.empty() && coeffs_.front() == 0.0) {
    coeffs_.erase(coeffs_.begin());
    s_ += 1.0;
  }
}

double QuasiPolynomial::max_abs_coeff() const {
  double m = 0.0;
  for (const double c : coeffs_) m = std::max(m, std::abs(c));
  return m;
}

double QuasiPolynomial::operator()(double xi) const {
  if (coeffs_.empty()) return 0.0;
  double power;
  if (s_ == 0.0) {
    power = 1.0;
  } else if (is_integer(s_)) {
    if (xi == 0.0 && s_ < 0.0) throw DomainError("quasi-polynomial with negative power evaluated at xi = 0");
    power = std::pow(xi, s_);
  } else {
    if (!(xi > 0.0)) throw DomainError("quasi-polynomial with non-integer power needs xi > 0");
    power = std::exp(s_ * std::log(xi));
  }
  return polyval(coeffs_, xi) * power * std::exp(-0.5 * omega_ * xi * xi);
}

QuasiPolynomial QuasiPolynomial::derivative() const {
  if (coeffs_.empty()) return *this;
  std::vector<double> out(coeffs_.size() + 2, 0.0);
  for (std::size_t j = 0; j < coeffs_.size(); ++j) {
    out[j] += (static_cast<double>(j) + s_) * coeffs_[j];  // p' xi + s p
    out[j + 2] -= omega_ * coeffs_[j];                      // -omega xi^2 p
  }
  return QuasiPolynomial(omega_, s_ - 1.0, std::move(out));
}

QuasiPolynomial QuasiPolynomial::times_poly(std::span<const double> q) const {
  if (coeffs_.empty() || q.empty()) return QuasiPolynomial(omega_, s_, {});
  std::vector<double> out(coeffs_.size() + q.size() - 1, 0.0);
  for (std::size_t i = 0; i < coeffs_.size(); ++i) {
    for (std::size_t j = 0; j < q.size(); ++j) out[i + j] += coeffs_[i] * q[j];
  }
  return QuasiPolynomial(omega_, s_, std::move(out));
}

QuasiPolynomial QuasiPolynomial::times_xi(int power) const {
  if (power < 0) throw std::invalid_argument("times_xi: negative power");
  std::vector<double> out(static_cast<std::size_t>(power), 0.0);
  out.insert(out.end(), coeffs_.begin(), coeffs_.end());
  return QuasiPolynomial(omega_, s_, std::move(out));
}

QuasiPolynomial QuasiPolynomial::scaled(double c) const {
  std::vector<double> out = coeffs_;
  for (auto& v : out) v *= c;
  return QuasiPolynomial(omega_, s_, std::move(out));
}

QuasiPolynomial operator+(const QuasiPolynomial& a, const QuasiPolynomial& b) {
  if (a.omega_ != b.omega_) throw std::invalid_argument("QuasiPolynomial sum: omega mismatch");
  if (a.is_zero()) return b;
  if (b.is_zero()) return a;
  const double shift = a.s_ - b.s_;
  if (!is_integer(shift)) throw std::invalid_argument("QuasiPolynomial sum: exponents differ by a non-integer");
  const QuasiPolynomial& low = shift <= 0.0 ? a : b;
  const QuasiPolynomial& high = shift <= 0.0 ? b : a;
  const auto offset = static_cast<std::size_t>(std::abs(shift));
  std::vector<double> out(std::max(low.coeffs_.size(), high.coeffs_.size() + offset), 0.0);
  for (std::size_t j = 0; j < low.coeffs_.size(); ++j) out[j] += low.coeffs_[j];
  for (std::size_t j = 0; j < high.coeffs_.size(); ++j) out[j + offset] += high.coeffs_[j];
  return QuasiPolynomial(a.omega_, low.s_, std::move(out));
}

QuasiPolynomial operator-(const QuasiPolynomial& a, const QuasiPolynomial& b) { return a + b.scaled(-1.0); }

QuasiPolynomial QuasiPolynomial::trimmed(double rel) const {
  const double cut = rel * max_abs_coeff();
  std::vector<double> out = coeffs_;
  while (!out.empty() && std::abs(out.back()) <= cut) out.pop_back();
  return QuasiPolynomial(omega_, s_, std::move(out));
}

QuasiPolynomial QuasiPolynomial::rebased(double s_target, double rel) const {
  if (coeffs_.empty()) return QuasiPolynomial(omega_, s_target, {});
  const double shift = s_target - s_;
  if (!is_integer(shift)) throw std::invalid_argument("rebased: exponents differ by a non-integer");
  std::vector<double> out = coeffs_;
  if (shift < 0.0) {
    out.insert(out.begin(), static_cast<std::size_t>(-shift), 0.0);
  } else {
    const auto drop = static_cast<std::size_t>(shift);
    const double cut = rel * max_abs_coeff();
    for (std::size_t j = 0; j < drop && j < out.size(); ++j) {
      if (std::abs(out[j]) > cut) throw NumericalError("rebased: low-order coefficient does not vanish");
    }
    out.erase(out.begin(), out.begin() + static_cast<std::ptrdiff_t>(std::min(drop, out.size())));
  }
  QuasiPolynomial q(omega_, s_target, {});
  q.coeffs_ = std::move(out);
  while (!q.coeffs_.empty() && q.coeffs_.back() == 0.0) q.coeffs_.pop_back();
  return q;
}

// ---------------------------------------------------------------------------
// Quadrature

const GaussLegendre64& gauss_legendre_64() {
  static const GaussLegendre64 rule = [] {
    constexpr int n = 64;
    GaussLegendre64 r;
    r.nodes.resize(n);
    r.weights.resize(n);
    for (int i = 0; i < n / 2; ++i) {
      double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
      double dp = 0.0;
      for (int it = 0; it < 100; ++it) {
        double p0 = 1.0;
        double p1 = z;
        for (int k = 2; k <= n; ++k) {
          const double p2 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p0) / k;
          p0 = p1;
          p1 = p2;
        }
        dp = n * (z * p1 - p0) / (z * z - 1.0);
        const double dz = p1 / dp;
        z -= dz;
        if (std::abs(dz) < 1e-16) break;
      }
      const double w = 2.0 / ((1.0 - z * z) * dp * dp);
      r.nodes[i] = -z;
      r.nodes[n - 1 - i] = z;
      r.weights[i] = w;
      r.weights[n - 1 - i] = w;
    }
    return r;
  }();
  return rule;
}

namespace {

double pairwise_sum(std::span<const double> v) {
  if (v.size() <= 8) {
    double s = 0.0;
    for (const double x : v) s += x;
    return s;
  }
  const std::size_t half = v.size() / 2;
  return pairwise_sum(v.subspan(0, half)) + pairwise_sum(v.subspan(half));
}

struct PanelSums {
  double value = 0.0;
  double abs_value = 0.0;
};

PanelSums integrate_panels(const QuasiPolynomial& F, const QuasiPolynomial& G, std::span<const double> breaks) {
  const auto& gl = gauss_legendre_64();
  std::vector<double> vals;
  std::vector<double> abs_vals;
  vals.reserve(breaks.size());
  abs_vals.reserve(breaks.size());
  for (std::size_t p = 0; p + 1 < breaks.size(); ++p) {
    const double a = breaks[p];
    const double b = breaks[p + 1];
    const double half = 0.5 * (b - a);
    const double mid = 0.5 * (a + b);
    double s = 0.0;
    double sa = 0.0;
    for (std::size_t i = 0; i < gl.nodes.size(); ++i) {
      const double xi = mid + half * gl.nodes[i];
      const double f = F(xi) * G(xi);
      s += gl.weights[i] * f;
      sa += gl.weights[i] * std::abs(f);
    }
    vals.push_back(half * s);
    abs_vals.push_back(half * sa);
  }
  return {pairwise_sum(vals), pairwise_sum(abs_vals)};
}

/// Upper bound of |F G| at |xi| >= 1 from coefficient magnitudes.
double envelope(const QuasiPolynomial& F, const QuasiPolynomial& G, double r) {
  double cf = 0.0;
  double cg = 0.0;
  for (const double c : F.coeffs()) cf += std::abs(c);
  for (const double c : G.coeffs()) cg += std::abs(c);
  const double power = F.degree() + G.degree() + F.s() + G.s();
  return cf * cg * std::exp(power * std::log(r) - 0.5 * (F.omega() + G.omega()) * r * r);
}

}  // namespace

double integrate_product(const QuasiPolynomial& F, const QuasiPolynomial& G, Interval range) {
  if (F.is_zero() || G.is_zero()) return 0.0;
  if (!(range.lo < range.hi)) throw std::invalid_argument("integrate_product: empty range");
  const bool fractional = !is_integer(F.s()) || !is_integer(G.s());
  if (fractional && range.lo < 0.0) {
    throw DomainError("integrate_product: non-integer exponent requires xi >= 0");
  }
  const double total_s = F.s() + G.s();
  if (range.lo <= 0.0 && range.hi >= 0.0 && total_s <= -1.0) {
    throw DomainError("integrate_product: non-integrable singularity at xi = 0");
  }

  // Running maximum on a coarse grid, then cut the tails where the
  // coefficient envelope drops below 1e-18 of it.
  const double wt = F.omega() + G.omega();
  const double power = std::max(0.0, F.degree() + G.degree() + total_s);
  const double reach = std::sqrt(2.0 * (power + 60.0) / wt) + 1.0;
  const double scan_lo = std::max(range.lo, -reach);
  const double scan_hi = std::min(range.hi, reach);
  double running_max = 0.0;
  constexpr int kScan = 4000;
  for (int i = 0; i <= kScan; ++i) {
    double xi = scan_lo + (scan_hi - scan_lo) * i / kScan;
    if (fractional && xi <= 0.0) continue;
    if (xi == 0.0 && total_s < 0.0) continue;
    running_max = std::max(running_max, std::abs(F(xi) * G(xi)));
  }
  if (running_max == 0.0) return 0.0;

  double cutoff = std::max(1.0, std::sqrt(power / wt));
  while (envelope(F, G, cutoff) >= 1e-18 * running_max) cutoff += 0.25 / std::sqrt(wt);
  const double lo = std::max(range.lo, -cutoff);
  const double hi = std::min(range.hi, cutoff);
  if (!(lo < hi)) return 0.0;

  const bool graded = fractional || total_s < 0.0;
  double previous = 0.0;
  bool have_previous = false;
  for (int panels = 8; panels <= (1 << 16); panels *= 2) {
    std::vector<double> breaks;
    const double w = (hi - lo) / panels;
    if (graded && lo >= 0.0) {
      // Geometric grading into the (possibly singular) lower end.
      constexpr int kLevels = 16;
      breaks.push_back(lo);
      for (int j = kLevels; j >= 1; --j) breaks.push_back(lo + w * std::pow(0.25, j));
    }
    for (int p = 0; p <= panels; ++p) breaks.push_back(p == panels ? hi : lo + w * p);
    breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());
    const PanelSums sums = integrate_panels(F, G, breaks);
    if (have_previous &&
        std::abs(sums.value - previous) <= 1e-11 * std::max(std::abs(sums.value), sums.abs_value)) {
      return sums.value;
    }
    previous = sums.value;
    have_previous = true;
  }
  throw NumericalError("integrate_product: panel refinement did not converge");
}

double inner_product(const LienardModel& m, const QuasiPolynomial& F, const QuasiPolynomial& G) {
  return integrate_product(F, G, m.xi_range());
}

}  // namespace lienard
