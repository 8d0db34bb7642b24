#include "edgewise/equilibrium.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "edgewise/errors.hpp"
#include "edgewise/quadrature.hpp"

namespace edgewise {

namespace {

using cd = std::complex<double>;
constexpr double kPi = std::numbers::pi;
constexpr double kR2 = std::numbers::sqrt2;

const QuadratureRule& gl16() {
  static const QuadratureRule r = gauss_legendre(16);
  return r;
}

const QuadratureRule& gl24() {
  static const QuadratureRule r = gauss_legendre(24);
  return r;
}

template <class T>
T poly_eval(const std::vector<double>& c, T x) {
  T s = T(0);
  for (auto it = c.rbegin(); it != c.rend(); ++it) s = s * x + T(*it);
  return s;
}

std::vector<double> poly_derivative(const std::vector<double>& c) {
  if (c.size() <= 1) return {0.0};
  std::vector<double> d(c.size() - 1);
  for (std::size_t k = 1; k < c.size(); ++k) d[k - 1] = static_cast<double>(k) * c[k];
  return d;
}

/** \brief Coefficients of p(x0 + u) in u. */
std::vector<double> poly_shift(std::vector<double> c, double x0) {
  const std::size_t n = c.size();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = n - 1; k > i; --k) c[k - 1] += x0 * c[k];
  return c;
}

/** \brief Integral of f over [a,b] on panels graded geometrically toward c in [a,b]. */
template <class F>
auto integrate_graded(F&& f, double a, double b, double c) -> decltype(f(a)) {
  using R = decltype(f(a));
  const auto& gl = gl16();
  R total = R(0);
  auto side = [&](double end) {
    const double len = end - c;
    if (len == 0.0) return;
    double lo = 0.5, hi = 1.0;
    for (int k = 0; k < 52; ++k) {
      const double x0 = c + len * lo, x1 = c + len * hi;
      const double mid = 0.5 * (x0 + x1), half = 0.5 * (x1 - x0);
      R acc = R(0);
      for (std::size_t i = 0; i < gl.nodes.size(); ++i) acc += gl.weights[i] * f(mid + half * gl.nodes[i]);
      total += acc * std::fabs(half);
      hi = lo;
      lo *= 0.5;
    }
  };
  side(a);
  side(b);
  return total;
}

double h_theta_at(const EquilibriumData& eq, double theta, double x) {
  return (1.0 - theta) / kPi + theta * eq.h(x);
}

/** \brief Monomial coefficients of h_theta in x. */
std::vector<double> h_theta_monomial(const EquilibriumData& eq, double theta) {
  std::vector<double> m = eq.h_monomial();
  for (double& v : m) v *= theta;
  m[0] += (1.0 - theta) / kPi;
  return m;
}

void check_theta(double theta) {
  if (!(theta >= 0.0 && theta <= 1.0)) fail(ErrorKind::domain, "theta must lie in [0,1]");
}

/** \brief int_E ln(z - y) rho_theta(y) dy in the variable y = sqrt2 sin(phi). */
cd log_transform(const EquilibriumData& eq, double theta, cd z) {
  auto f = [&](double phi) -> cd {
    const double y = kR2 * std::sin(phi);
    const double c = std::cos(phi);
    return std::log(z - y) * (h_theta_at(eq, theta, y) * 2.0 * c * c);
  };
  const double dist_real = std::max(0.0, std::fabs(z.real()) - kR2);
  const double dist = std::hypot(dist_real, z.imag());
  if (dist >= 0.5) {
    const auto gc = gauss_chebyshev(256, true);
    cd s = 0.0;
    for (std::size_t i = 0; i < gc.nodes.size(); ++i) {
      const double t = gc.nodes[i];
      s += gc.weights[i] * std::log(z - kR2 * t) * h_theta_at(eq, theta, kR2 * t);
    }
    return 2.0 * s;
  }
  const double xr = std::clamp(z.real() / kR2, -1.0, 1.0);
  return integrate_graded(f, -kPi / 2, kPi / 2, std::asin(xr));
}

/** \brief Mass of rho_theta on [x, sqrt2]. */
double upper_mass(const EquilibriumData& eq, double theta, double x) {
  const double p0 = std::asin(std::clamp(x / kR2, -1.0, 1.0));
  auto f = [&](double phi) {
    const double c = std::cos(phi);
    return h_theta_at(eq, theta, kR2 * std::sin(phi)) * 2.0 * c * c;
  };
  return integrate_panels(gl24(), p0, kPi / 2, 4, f);
}

/** \brief Segment integral 2 pi int_{e}^{w} h(u) sqrt(u - e) sqrt(u + e) du with e = +-sqrt2. */
cd segment_integral(const std::vector<double>& hm, double e, cd w) {
  const cd d = w - e;
  const cd rd = std::sqrt(d);
  const auto& gl = gl24();
  cd total = 0.0;
  const int panels = 8;
  for (int p = 0; p < panels; ++p) {
    const double v0 = double(p) / panels, v1 = double(p + 1) / panels;
    const double mid = 0.5 * (v0 + v1), half = 0.5 * (v1 - v0);
    cd acc = 0.0;
    for (std::size_t i = 0; i < gl.nodes.size(); ++i) {
      const double v = mid + half * gl.nodes[i];
      const cd u = e + d * (v * v);
      const cd other = (e > 0) ? std::sqrt(u + kR2) : std::sqrt(u - kR2);
      acc += gl.weights[i] * poly_eval(hm, u) * (v * rd) * other * (2.0 * v);
    }
    total += acc * half;
  }
  return 2.0 * kPi * total * d;
}

cd pick_branch(cd p, cd linear) {
  cd best = std::pow(p, 2.0 / 3.0);
  double dbest = std::abs(best - linear);
  const cd base = best;
  for (int k = 1; k < 3; ++k) {
    const cd cand = base * std::polar(1.0, 2.0 * kPi * k / 3.0);
    const double dc = std::abs(cand - linear);
    if (dc < dbest) {
      best = cand;
      dbest = dc;
    }
  }
  return best;
}

cd j_map(cd w) { return w + std::sqrt(w - 1.0) * std::sqrt(w + 1.0); }

}  // namespace

void Potential::validate() const {
  if (coeffs.size() < 3) fail(ErrorKind::domain, "potential must have degree >= 2");
  for (double c : coeffs)
    if (!std::isfinite(c)) fail(ErrorKind::domain, "potential coefficients must be finite");
  if (!(coeffs.back() > 0.0)) fail(ErrorKind::domain, "leading coefficient of the potential must be positive");
  if (degree() % 2 != 0) fail(ErrorKind::domain, "potential degree must be even");
}

double Potential::operator()(double x) const { return poly_eval(coeffs, x); }

std::complex<double> Potential::operator()(std::complex<double> z) const { return poly_eval(coeffs, z); }

Potential Potential::derivative(int k) const {
  std::vector<double> c = coeffs;
  for (int i = 0; i < k; ++i) c = poly_derivative(c);
  return Potential{c, false};
}

Potential Potential::admissible_quartic(double c4, double c3) {
  return Potential{{0.0, -3.0 * c3, 1.0 - 3.0 * c4, c3, c4}, c3 == 0.0};
}

double EquilibriumData::h(double x) const { return chebyshev_eval(hv_cheb, x / kR2); }

double EquilibriumData::h_derivative(double x, int k) const {
  std::vector<double> c = hv_cheb;
  for (int i = 0; i < k; ++i) c = chebyshev_derivative(c);
  return chebyshev_eval(c, x / kR2) / std::pow(kR2, k);
}

double EquilibriumData::rho(double x) const {
  if (std::fabs(x) >= kR2) return 0.0;
  return h(x) * std::sqrt(2.0 - x * x);
}

std::vector<double> EquilibriumData::h_monomial() const {
  // T_k recurrence in t, then t = x / sqrt2.
  const std::size_t n = hv_cheb.size();
  std::vector<double> out(n, 0.0);
  std::vector<double> tkm1{1.0}, tk{0.0, 1.0};
  for (std::size_t k = 0; k < n; ++k) {
    const std::vector<double>& tcur = (k == 0) ? tkm1 : tk;
    for (std::size_t j = 0; j < tcur.size() && j < n; ++j) out[j] += hv_cheb[k] * tcur[j];
    if (k >= 1) {
      std::vector<double> next(tk.size() + 1, 0.0);
      for (std::size_t j = 0; j < tk.size(); ++j) next[j + 1] += 2.0 * tk[j];
      for (std::size_t j = 0; j < tkm1.size(); ++j) next[j] -= tkm1[j];
      tkm1 = tk;
      tk = next;
    }
  }
  double scale = 1.0;
  for (std::size_t j = 0; j < n; ++j) {
    out[j] *= scale;
    scale /= kR2;
  }
  return out;
}

EquilibriumData compute_equilibrium(const Potential& V) {
  V.validate();
  const int d = V.degree();
  const Potential dV = V.derivative(1);
  const std::vector<double> vp = chebyshev_fit([&](double t) { return dV(kR2 * t); }, static_cast<std::size_t>(d - 1));

  EquilibriumData eq;
  eq.V = V;
  eq.hv_cheb = chebyshev_fit(
      [&](double t) {
        const double x = kR2 * t;
        return (2.0 * kPi + pv_sqrt_transform(vp, x)) / (2.0 * kPi * kPi * (2.0 - x * x));
      },
      static_cast<std::size_t>(d - 2));

  const double m0 = 0.5 * vp[0];
  const double m1 = 0.25 * kR2 * vp[1];
  const auto gc = gauss_chebyshev(static_cast<std::size_t>(d + 8), true);
  double mass = 0.0;
  for (std::size_t i = 0; i < gc.nodes.size(); ++i) mass += gc.weights[i] * eq.h(kR2 * gc.nodes[i]);
  mass *= 2.0;
  eq.normalization_defect = std::max({std::fabs(mass - 1.0), std::fabs(m0), std::fabs(m1 - 1.0)});
  if (eq.normalization_defect > 1e-8) {
    std::ostringstream os;
    os.precision(17);
    os << "potential is not supported on E: normalization defect " << eq.normalization_defect
       << " (mass " << mass << ", first moment condition " << m0 << ", second " << m1 << ")";
    fail(ErrorKind::model, os.str());
  }
  for (int i = 0; i <= 100; ++i) {
    const double x = -kR2 + 2.0 * kR2 * i / 100.0;
    if (!(eq.h(x) > 0.0)) {
      std::ostringstream os;
      os.precision(17);
      os << "potential is not one-cut regular on E: h_V(" << x << ") = " << eq.h(x);
      fail(ErrorKind::model, os.str());
    }
  }
  eq.ell = V(0.0) - 2.0 * log_potential(eq, 0.0);
  eq.tau = kPi * eq.h(kR2) * std::pow(2.0, 0.75);
  return eq;
}

Potential v_theta(const Potential& V, double theta) {
  check_theta(theta);
  V.validate();
  std::vector<double> c(V.coeffs.size(), 0.0);
  for (std::size_t k = 0; k < c.size(); ++k) c[k] = theta * V.coeffs[k];
  c[2] += 1.0 - theta;
  while (c.size() > 3 && c.back() == 0.0) c.pop_back();
  return Potential{c, V.even_hint};
}

EquilibriumData equilibrium_theta(const EquilibriumData& eq, double theta) {
  check_theta(theta);
  EquilibriumData out;
  out.V = v_theta(eq.V, theta);
  out.hv_cheb = eq.hv_cheb;
  for (double& c : out.hv_cheb) c *= theta;
  out.hv_cheb[0] += (1.0 - theta) / kPi;
  out.ell = (1.0 - theta) * (1.0 + std::numbers::ln2) + theta * eq.ell;
  out.tau = tau_theta(eq, theta);
  out.normalization_defect = theta * eq.normalization_defect;
  return out;
}

double tau_theta(const EquilibriumData& eq, double theta) {
  check_theta(theta);
  return kPi * h_theta_at(eq, theta, kR2) * std::pow(2.0, 0.75);
}

double s_n_theta(const EquilibriumData& eq, double s, double n, double theta) {
  if (!(n >= 1.0)) fail(ErrorKind::domain, "n must be >= 1");
  return s / std::pow(n * tau_theta(eq, theta), 2.0 / 3.0);
}

double lambda_n(const EquilibriumData& eq, double s, double n, double theta) {
  return kR2 + s_n_theta(eq, s, n, theta);
}

double lambda_n(const Potential& V, double s, double n, double theta) {
  return lambda_n(compute_equilibrium(V), s, n, theta);
}

double log_potential(const EquilibriumData& eq, double x) {
  auto f = [&](double phi) {
    const double y = kR2 * std::sin(phi);
    const double c = std::cos(phi);
    const double dxy = std::fabs(x - y);
    return dxy == 0.0 ? 0.0 : std::log(dxy) * eq.h(y) * 2.0 * c * c;
  };
  const double c = std::asin(std::clamp(x / kR2, -1.0, 1.0));
  return integrate_graded(f, -kPi / 2, kPi / 2, c);
}

double variational_residual(const EquilibriumData& eq, double x) {
  return 2.0 * log_potential(eq, x) - eq.V(x) + eq.ell;
}

std::complex<double> g_eval(const EquilibriumData& eq, double theta, std::complex<double> z) {
  check_theta(theta);
  if (z.imag() == 0.0 && z.real() <= kR2) fail(ErrorKind::domain, "g is evaluated off the cut (-inf, sqrt2]");
  return log_transform(eq, theta, z);
}

std::complex<double> g_boundary(const EquilibriumData& eq, double theta, double x, int sign) {
  check_theta(theta);
  if (!(std::fabs(x) < kR2)) fail(ErrorKind::domain, "boundary values of g are taken inside E");
  const EquilibriumData et = equilibrium_theta(eq, theta);
  const double re = log_potential(et, x);
  const double im = kPi * upper_mass(eq, theta, x);
  return {re, sign > 0 ? im : -im};
}

std::complex<double> edge_integral(const EquilibriumData& eq, double theta, std::complex<double> w) {
  check_theta(theta);
  if (w.imag() == 0.0 && w.real() < kR2) fail(ErrorKind::domain, "integration path would cross E");
  return segment_integral(h_theta_monomial(eq, theta), kR2, w);
}

std::complex<double> left_edge_integral(const EquilibriumData& eq, double theta, std::complex<double> w) {
  check_theta(theta);
  if (w.imag() == 0.0 && w.real() > -kR2) fail(ErrorKind::domain, "integration path would cross E");
  return segment_integral(h_theta_monomial(eq, theta), -kR2, w);
}

std::complex<double> xi_eval(const EquilibriumData& eq, double theta, double n, double s,
                             std::complex<double> z) {
  return edge_integral(eq, theta, z + s_n_theta(eq, s, n, theta));
}

std::complex<double> zeta_eval(const EquilibriumData& eq, double theta, double n, double s,
                               std::complex<double> z, EdgeSide side) {
  const double sn = s_n_theta(eq, s, n, theta);
  const std::vector<double> a = zeta_series(eq, theta, side, 1);
  if (side == EdgeSide::right) {
    const cd w = z + sn;
    const cd p = 0.75 * segment_integral(h_theta_monomial(eq, theta), kR2, w);
    return pick_branch(p, a[0] * (w - kR2));
  }
  const cd w = z + sn;
  const cd p = 0.75 * segment_integral(h_theta_monomial(eq, theta), -kR2, w);
  // e^{i pi} p^{2/3}, continued from the real axis left of the edge.
  return pick_branch(p, -a[0] * (w + kR2)) * -1.0;
}

std::vector<double> zeta_series(const EquilibriumData& eq, double theta, EdgeSide side, int order) {
  check_theta(theta);
  if (order < 1) fail(ErrorKind::domain, "series order must be >= 1");
  const int K = order;
  std::vector<double> hm = h_theta_monomial(eq, theta);
  if (side == EdgeSide::left)
    for (std::size_t k = 1; k < hm.size(); k += 2) hm[k] = -hm[k];
  std::vector<double> hs = poly_shift(hm, kR2);
  hs.resize(static_cast<std::size_t>(K), 0.0);
  // sqrt(2 sqrt2 + u) = (2 sqrt2)^{1/2} sum binom(1/2, j) (u / (2 sqrt2))^j
  const double c = 2.0 * kR2;
  std::vector<double> q(static_cast<std::size_t>(K));
  double binom = 1.0;
  for (int j = 0; j < K; ++j) {
    q[j] = std::sqrt(c) * binom / std::pow(c, j);
    binom *= (0.5 - j) / (j + 1.0);
  }
  std::vector<double> P(static_cast<std::size_t>(K), 0.0);
  for (int k = 0; k < K; ++k) {
    double g = 0.0;
    for (int j = 0; j <= k; ++j) g += hs[j] * q[k - j];
    P[k] = 1.5 * kPi * g / (k + 1.5);
  }
  // R = P^{2/3} by the power recurrence.
  const double a = 2.0 / 3.0;
  std::vector<double> R(static_cast<std::size_t>(K), 0.0);
  R[0] = std::pow(P[0], a);
  for (int k = 1; k < K; ++k) {
    double acc = 0.0;
    for (int j = 1; j <= k; ++j) acc += ((a + 1.0) * j - k) * P[j] * R[k - j];
    R[k] = acc / (k * P[0]);
  }
  if (side == EdgeSide::left)
    for (int k = 0; k < K; ++k)
      if (k % 2 == 1) R[k] = -R[k];
  return R;
}

ConformalCoeffs zeta_coeffs(const EquilibriumData& eq, double theta, double n, double s, EdgeSide side) {
  ConformalCoeffs out;
  out.side = side;
  if (side == EdgeSide::left) {
    const std::vector<double> a = zeta_series(eq, theta, side, 3);
    out.zeta1 = a[0];
    out.zeta2 = a[1] / a[0];
    out.zeta3 = a[2] / a[0];
    return out;
  }
  const double sn = s_n_theta(eq, s, n, theta);
  if (std::fabs(sn) > 0.5) fail(ErrorKind::domain, "edge shift s/(n tau)^{2/3} must not exceed 0.5 in size");
  const int K = 40;
  const std::vector<double> a = zeta_series(eq, theta, side, K);
  // zeta = sum_k a_k omega^{k+1} with omega = delta + sn; collect powers of delta.
  double b[4] = {0.0, 0.0, 0.0, 0.0};
  for (int k = 0; k < K; ++k) {
    const int p = k + 1;
    double binom = 1.0;
    for (int j = 0; j <= 3 && j <= p; ++j) {
      if (j >= 1) b[j] += a[k] * binom * std::pow(sn, p - j);
      binom *= double(p - j) / (j + 1.0);
    }
  }
  out.zeta1 = b[1];
  out.zeta2 = b[2] / b[1];
  out.zeta3 = b[3] / b[1];
  if (!(out.zeta1 > 0.0)) fail(ErrorKind::numerical, "conformal map is degenerate at the edge");
  return out;
}

ConformalCoeffs zeta_coeffs_asymptotic(const EquilibriumData& eq, double theta, double n, double s) {
  const double h0 = h_theta_at(eq, theta, kR2);
  const double h1 = theta * eq.h_derivative(kR2, 1);
  const double h2 = theta * eq.h_derivative(kR2, 2);
  const double K = h1 / h0 + 1.0 / (4.0 * kR2);
  const double L = h2 / (2.0 * h0) + h1 / (4.0 * kR2 * h0) - 1.0 / 64.0;
  const double e = s / std::pow(n * tau_theta(eq, theta), 2.0 / 3.0);
  ConformalCoeffs out;
  out.side = EdgeSide::right;
  out.zeta1 = kR2 * std::pow(kPi * h0, 2.0 / 3.0) * (1.0 + 4.0 * e / 5.0 * K);
  out.zeta2 = 0.4 * K + 0.4 * e * (15.0 / 7.0 * L - 1.1 * K * K);
  out.zeta3 = 2.0 / 7.0 * L - K * K / 25.0;
  return out;
}

std::complex<double> szego_D(double alpha, double s_ntheta, std::complex<double> z) {
  const double kappa = -kR2 - s_ntheta;
  if (z.imag() == 0.0 && z.real() >= kappa && z.real() <= kR2)
    fail(ErrorKind::domain, "Szego function is evaluated off [kappa, sqrt2]");
  const cd w = 1.0 + 2.0 * (z - kR2) / (2.0 * kR2 + s_ntheta);
  return std::pow((z - kR2) / j_map(w), alpha / 2.0);
}

std::complex<double> szego_D_boundary(double alpha, double s_ntheta, double x, int sign) {
  const double kappa = -kR2 - s_ntheta;
  if (!(x > kappa && x < kR2)) fail(ErrorKind::domain, "boundary values of D are taken inside the cut");
  const double w = 1.0 + 2.0 * (x - kR2) / (2.0 * kR2 + s_ntheta);
  const double phi = std::acos(std::clamp(w, -1.0, 1.0));
  const double arg = (sign > 0 ? 1.0 : -1.0) * (kPi - phi) * alpha / 2.0;
  return std::polar(std::pow(kR2 - x, alpha / 2.0), arg);
}

double szego_chi(double alpha, double s_ntheta) { return std::pow((2.0 * kR2 + s_ntheta) / 4.0, alpha / 2.0); }

double EdgeConstants::log_ratio_predictor(double n, double alpha, double Theta) const {
  return -n * n * i2 - n * alpha * i1 + 0.5 * n * alpha * w_edge + alpha * s * std::cbrt(n) * factor * wp_edge +
         Theta * theta_right_log + theta_left;
}

EdgeConstants edge_constants(const EquilibriumData& eq, double s) {
  std::vector<double> w = eq.V.coeffs;
  w[2] -= 1.0;
  const std::vector<double> wp = poly_derivative(w);
  EdgeConstants ec;
  ec.s = s;
  const std::size_t m = w.size() + eq.hv_cheb.size() + 8;
  const auto g2 = gauss_chebyshev(m, true);
  const auto g1 = gauss_chebyshev(m, false);
  double i2 = 0.0, i1 = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    const double x2 = kR2 * g2.nodes[i];
    i2 += g2.weights[i] * 0.5 * (eq.h(x2) + 1.0 / kPi) * poly_eval(w, x2);
    i1 += g1.weights[i] * poly_eval(w, kR2 * g1.nodes[i]);
  }
  ec.i2 = 2.0 * i2;
  ec.i1 = i1 / (2.0 * kPi);
  ec.w_edge = poly_eval(w, kR2);
  ec.wp_edge = poly_eval(wp, kR2);
  const double y = kPi * eq.h(kR2);
  const double e = y - 1.0;
  if (std::fabs(e) < 1e-6) {
    ec.removable_limit = true;
    ec.factor = 3.0 / (2.0 * kR2) * (1.0 / 3.0 - e / 9.0 + 5.0 * e * e / 81.0);
  } else {
    ec.factor = 3.0 / (2.0 * kR2) * (std::cbrt(y) - 1.0) / e;
  }
  ec.rho1 = 0.5 * (1.0 - std::numbers::ln2) - ec.i1 + 0.5 * ec.w_edge;
  ec.rho2 = 1.0 + ec.factor * ec.wp_edge;
  ec.theta_right_log = std::log(y);
  ec.theta_left = -std::log(kPi * eq.h(-kR2)) / 24.0;
  return ec;
}

ModelKind parse_model_kind(const std::string& name) {
  if (name == "h12") return ModelKind::h12;
  if (name == "h13") return ModelKind::h13;
  if (name == "h17") return ModelKind::h17;
  if (name == "h18") return ModelKind::h18;
  if (name == "h19") return ModelKind::h19;
  if (name == "h20") return ModelKind::h20;
  fail(ErrorKind::domain, "unknown model integral kind '" + name + "'");
}

std::string model_kind_name(ModelKind k) {
  switch (k) {
    case ModelKind::h12: return "h12";
    case ModelKind::h13: return "h13";
    case ModelKind::h17: return "h17";
    case ModelKind::h18: return "h18";
    case ModelKind::h19: return "h19";
    case ModelKind::h20: return "h20";
  }
  return "?";
}

ModelIntegral model_integral_check(const EquilibriumData& eq, double n, ModelKind kind, double s, double theta,
                                   double margin) {
  const double sn = s_n_theta(eq, s, n, theta);
  const double kappa = -kR2 - sn;
  if (!(margin > 0.0)) fail(ErrorKind::domain, "contour margin must be positive");
  if (!(kappa < kR2)) fail(ErrorKind::domain, "contour intersects the cut: kappa >= sqrt2");
  const double hr = eq.h(kR2), hl = eq.h(-kR2);

  auto f = [&](cd z) -> cd {
    const cd nu2 = std::sqrt((z - kR2) / (z - kappa));
    const cd a = z - kR2, b = z - kappa;
    switch (kind) {
      case ModelKind::h12: return nu2 / (a * a * a);
      case ModelKind::h13: return nu2 / (a * a);
      case ModelKind::h17: return 1.0 / (nu2 * a * a);
      case ModelKind::h18: return 1.0 / (nu2 * b * b);
      case ModelKind::h19: return nu2 / (b * b);
      case ModelKind::h20: return 1.0 / (nu2 * b * b * b);
    }
    return 0.0;
  };
  auto g = [&](cd z) { return f(z) * eq.V(z + sn); };

  const double xl = kappa - margin, xr = kR2 + margin;
  // gamma_+ runs left to right above the cut, gamma_- likewise below: a clockwise loop.
  const cd corners[5] = {{xl, margin}, {xr, margin}, {xr, -margin}, {xl, -margin}, {xl, margin}};
  const auto& gl = gl24();
  cd total = 0.0;
  for (int e = 0; e < 4; ++e) {
    const cd a = corners[e], b = corners[e + 1];
    const int panels = std::clamp(static_cast<int>(std::ceil(4.0 * std::abs(b - a) / margin)), 4, 400);
    for (int p = 0; p < panels; ++p) {
      const cd z0 = a + (b - a) * (double(p) / panels), z1 = a + (b - a) * (double(p + 1) / panels);
      const cd mid = 0.5 * (z0 + z1), half = 0.5 * (z1 - z0);
      cd acc = 0.0;
      for (std::size_t i = 0; i < gl.nodes.size(); ++i) acc += gl.weights[i] * g(mid + half * gl.nodes[i]);
      total += acc * half;
    }
  }

  const cd I(0.0, 1.0);
  cd lead;
  switch (kind) {
    case ModelKind::h12: lead = 2.0 * kPi * I / 3.0 * (1.0 - 4.0 * kPi * hr); break;
    case ModelKind::h13:
      lead = -4.0 * kPi * I / kR2 * (1.0 + sn * (kPi * kR2 * hr - 1.0 / (2.0 * kR2)));
      break;
    case ModelKind::h17: lead = -4.0 * kPi * I / (3.0 * kR2) * (1.0 + 8.0 * kPi * hr); break;
    case ModelKind::h18: lead = 4.0 * kPi * I / kR2; break;
    case ModelKind::h19: lead = 4.0 * kPi * I / (3.0 * kR2) * (1.0 + 8.0 * kPi * hl); break;
    case ModelKind::h20: lead = 2.0 * kPi * I / 3.0 * (1.0 - 4.0 * kPi * hl); break;
  }
  return ModelIntegral{total, lead, std::abs(total - lead), sn};
}

}  // namespace edgewise
