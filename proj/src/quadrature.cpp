#include "edgewise/quadrature.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <numbers>

#include "edgewise/errors.hpp"
#include "edgewise/special.hpp"

namespace edgewise {

void gauss_legendre_ext(std::size_t m, std::vector<long double>& nodes, std::vector<long double>& weights) {
  if (m < 1 || m > 4096) fail(ErrorKind::domain, "gauss_legendre requires 1 <= m <= 4096");
  nodes.assign(m, 0.0L);
  weights.assign(m, 0.0L);
  const long double pi = std::numbers::pi_v<long double>;
  auto legendre = [m](long double x, long double& p1, long double& dp) {
    long double p0 = 1;
    p1 = x;
    for (std::size_t k = 2; k <= m; ++k) {
      const long double p2 = ((2.0L * k - 1) * x * p1 - (k - 1.0L) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    dp = (m == 1) ? 1.0L : m * (x * p1 - p0) / (x * x - 1);
  };
  for (std::size_t i = 0; i < (m + 1) / 2; ++i) {
    long double x = std::cos(pi * (i + 0.75L) / (m + 0.5L));
    long double p = 0, dp = 1;
    for (int it = 0; it < 100; ++it) {
      legendre(x, p, dp);
      const long double dx = p / dp;
      x -= dx;
      if (std::fabs(dx) < 1e-19L) break;
    }
    legendre(x, p, dp);
    const long double w = 2.0L / ((1 - x * x) * dp * dp);
    nodes[i] = -x;
    nodes[m - 1 - i] = x;
    weights[i] = weights[m - 1 - i] = w;
  }
  if (m % 2 == 1) nodes[m / 2] = 0.0L;
}

QuadratureRule gauss_legendre(std::size_t m) {
  std::vector<long double> xl, wl;
  gauss_legendre_ext(m, xl, wl);
  QuadratureRule r;
  r.kind = QuadratureRule::Kind::legendre;
  r.nodes.assign(xl.begin(), xl.end());
  r.weights.assign(wl.begin(), wl.end());
  return r;
}

QuadratureRule gauss_jacobi(std::size_t m, double a_exp) {
  if (!(a_exp > -1.0)) fail(ErrorKind::domain, "gauss_jacobi requires a_exp > -1");
  if (m < 1 || m > 4096) fail(ErrorKind::domain, "gauss_jacobi requires 1 <= m <= 4096");
  // Golub-Welsch for (1+t)^b on [-1,1], then t -> (1+t)/2.
  const double b = a_exp;
  Eigen::VectorXd diag(m), off(m > 1 ? m - 1 : 0);
  for (std::size_t k = 0; k < m; ++k) {
    if (k == 0) {
      diag[k] = b / (b + 2.0);
    } else {
      const double s = 2.0 * k + b;
      diag[k] = b * b / (s * (s + 2.0));
    }
  }
  for (std::size_t k = 1; k < m; ++k) {
    const double kk = static_cast<double>(k);
    const double s = 2.0 * kk + b;
    const double beta = 4.0 * kk * kk * (kk + b) * (kk + b) / (s * s * (s + 1.0) * (s - 1.0));
    off[k - 1] = std::sqrt(beta);
  }
  const double mu0 = std::pow(2.0, b + 1.0) / (b + 1.0);
  QuadratureRule r;
  r.kind = QuadratureRule::Kind::jacobi;
  r.a_exp = a_exp;
  r.nodes.resize(m);
  r.weights.resize(m);
  if (m == 1) {
    r.nodes[0] = (1.0 + diag[0]) / 2.0;
    r.weights[0] = mu0 * std::pow(2.0, -b - 1.0);
    return r;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
  es.computeFromTridiagonal(diag, off, Eigen::ComputeEigenvectors);
  if (es.info() != Eigen::Success) fail(ErrorKind::numerical, "Jacobi matrix eigensolve failed");
  const double scale = std::pow(2.0, -b - 1.0);
  for (std::size_t i = 0; i < m; ++i) {
    const double v0 = es.eigenvectors()(0, static_cast<Eigen::Index>(i));
    r.nodes[i] = (1.0 + es.eigenvalues()[static_cast<Eigen::Index>(i)]) / 2.0;
    r.weights[i] = mu0 * v0 * v0 * scale;
  }
  return r;
}

QuadratureRule gauss_chebyshev(std::size_t m, bool second_kind) {
  if (m < 1) fail(ErrorKind::domain, "gauss_chebyshev requires m >= 1");
  const double pi = std::numbers::pi;
  QuadratureRule r;
  r.kind = second_kind ? QuadratureRule::Kind::chebyshev2 : QuadratureRule::Kind::chebyshev1;
  r.nodes.resize(m);
  r.weights.resize(m);
  for (std::size_t i = 0; i < m; ++i) {
    const std::size_t j = m - 1 - i;  // increasing order
    if (second_kind) {
      const double th = (j + 1.0) * pi / (m + 1.0);
      const double s = std::sin(th);
      r.nodes[i] = std::cos(th);
      r.weights[i] = pi / (m + 1.0) * s * s;
    } else {
      r.nodes[i] = std::cos((2.0 * j + 1.0) * pi / (2.0 * m));
      r.weights[i] = pi / m;
    }
  }
  return r;
}

double integrate(const QuadratureRule& gl, double a, double b, const std::function<double(double)>& f) {
  const double c = 0.5 * (a + b), h = 0.5 * (b - a);
  double s = 0.0;
  for (std::size_t i = 0; i < gl.nodes.size(); ++i) s += gl.weights[i] * f(c + h * gl.nodes[i]);
  return s * h;
}

double integrate_panels(const QuadratureRule& gl, double a, double b, int panels,
                        const std::function<double(double)>& f) {
  double s = 0.0;
  const double w = (b - a) / panels;
  for (int p = 0; p < panels; ++p) s += integrate(gl, a + p * w, a + (p + 1) * w, f);
  return s;
}

double chebyshev_eval(const std::vector<double>& c, double t) {
  double b1 = 0.0, b2 = 0.0;
  for (std::size_t k = c.size(); k-- > 1;) {
    const double b0 = 2.0 * t * b1 - b2 + c[k];
    b2 = b1;
    b1 = b0;
  }
  return (c.empty() ? 0.0 : c[0]) + t * b1 - b2;
}

std::vector<double> chebyshev_derivative(const std::vector<double>& c) {
  const std::size_t n = c.size();
  if (n <= 1) return {0.0};
  std::vector<double> d(n - 1, 0.0);
  // d_{k-1} = d_{k+1} + 2k c_k, halved at k=1.
  std::vector<double> e(n + 1, 0.0);
  for (std::size_t k = n - 1; k >= 1; --k) e[k - 1] = e[k + 1] + 2.0 * k * c[k];
  for (std::size_t k = 0; k + 1 < n; ++k) d[k] = e[k];
  d[0] *= 0.5;
  return d;
}

std::vector<double> chebyshev_fit(const std::function<double(double)>& f, std::size_t deg) {
  const std::size_t n = deg + 1;
  const double pi = std::numbers::pi;
  std::vector<double> fv(n), c(n, 0.0);
  for (std::size_t j = 0; j < n; ++j) fv[j] = f(std::cos(pi * (j + 0.5) / n));
  for (std::size_t k = 0; k < n; ++k) {
    double s = 0.0;
    for (std::size_t j = 0; j < n; ++j) s += fv[j] * std::cos(pi * k * (j + 0.5) / n);
    c[k] = s * (k == 0 ? 1.0 : 2.0) / n;
  }
  return c;
}

std::vector<double> chebyshev_t_to_u(const std::vector<double>& c) {
  std::vector<double> u(c.size(), 0.0);
  for (std::size_t k = 0; k < c.size(); ++k) {
    if (k == 0) {
      u[0] += c[0];
    } else {
      u[k] += 0.5 * c[k];
      if (k >= 2) u[k - 2] -= 0.5 * c[k];
    }
  }
  return u;
}

double pv_sqrt_transform(const std::vector<double>& cheb_coeffs, double x) {
  const double r2 = std::numbers::sqrt2;
  if (!(std::fabs(x) < r2)) fail(ErrorKind::domain, "pv_sqrt_transform requires x inside (-sqrt2, sqrt2)");
  for (double c : cheb_coeffs)
    if (!std::isfinite(c)) fail(ErrorKind::domain, "pv_sqrt_transform coefficients must be finite");
  const std::vector<double> u = chebyshev_t_to_u(cheb_coeffs);
  // pv int sqrt(1-t^2) U_k(t)/(t-y) dt = -pi T_{k+1}(y); T_{k+1} carried as coefficient shift.
  std::vector<double> t(u.size() + 1, 0.0);
  for (std::size_t k = 0; k < u.size(); ++k) t[k + 1] = u[k];
  return -r2 * std::numbers::pi * chebyshev_eval(t, x / r2);
}

}  // namespace edgewise
