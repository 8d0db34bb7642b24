#include "edgewise/fredholm.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <numbers>
#include <vector>

#include "edgewise/errors.hpp"
#include "edgewise/quadrature.hpp"
#include "edgewise/special.hpp"

namespace edgewise {
namespace {

using ld = long double;
using cplx = std::complex<double>;
using cld = std::complex<long double>;
constexpr double kBlend = 1e-4;

template <class T>
using Vec2 = std::array<T, 2>;
template <class T>
using Mat2 = std::array<std::array<T, 2>, 2>;

template <class T>
Vec2<T> mul(const Mat2<T>& m, const Vec2<T>& v) {
  return {m[0][0] * v[0] + m[0][1] * v[1], m[1][0] * v[0] + m[1][1] * v[1]};
}
template <class T>
Mat2<T> mul(const Mat2<T>& a, const Mat2<T>& b) {
  Mat2<T> c{};
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) c[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
  return c;
}
template <class T>
Mat2<T> add(const Mat2<T>& a, const Mat2<T>& b) {
  Mat2<T> c{};
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) c[i][j] = a[i][j] + b[i][j];
  return c;
}
template <class T>
T det(const Vec2<T>& u, const Vec2<T>& v) {
  return u[0] * v[1] - u[1] * v[0];
}

/** \brief For psi' = A(z) psi with dA/dz = E21, returns det(psi, psi') and the d^2 coefficient
 *  of det(psi(m+d), psi(m-d)) / (-2d) about the midpoint. */
template <class T>
std::pair<T, T> midpoint_expansion(const Vec2<T>& psi, const Mat2<T>& a) {
  const Mat2<T> e21{{{T(0), T(0)}, {T(1), T(0)}}};
  const Mat2<T> a2 = mul(a, a);
  const Mat2<T> b = add(e21, a2);
  const Mat2<T> c = add(add(mul(e21, a), mul(e21, a)), add(mul(a, e21), mul(a2, a)));
  const Vec2<T> p1 = mul(a, psi), p2 = mul(b, psi), p3 = mul(c, psi);
  return {det(psi, p1), det(psi, p3) / T(6) + det(p2, p1) / T(2)};
}

ld airy_diag_ext(ld x) {
  const auto p = airy_ai_pair_ext(x);
  return p.aip * p.aip - x * p.ai * p.ai;
}

/** \brief psi on the positive half line in extended precision. */
Vec2<cld> psi_pos(ld z, ld x) {
  const cld c = std::sqrt(2.0L * std::numbers::pi_v<ld>) * std::polar(1.0L, -std::numbers::pi_v<ld> / 4);
  const auto p = airy_ai_pair_ext(z + x);
  return {c * p.ai, c * (p.aip - 0.25L * x * x * p.ai)};
}

template <class F>
Eigen::Matrix<ld, Eigen::Dynamic, Eigen::Dynamic> assemble(std::size_t m, const std::vector<ld>& x,
                                                          const std::vector<ld>& sw, bool symmetric, F&& kern) {
  Eigen::Matrix<ld, Eigen::Dynamic, Eigen::Dynamic> a(m, m);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      ld kij;
      if (symmetric && j < i)
        kij = a(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i));
      else
        kij = kern(i, j);
      if (!std::isfinite(static_cast<double>(kij))) fail(ErrorKind::numerical, "non-finite kernel value");
      a(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = kij;
    }
  }
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j) {
      auto& e = a(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
      e = (i == j ? 1.0L : 0.0L) - sw[i] * e * sw[j];
    }
  return a;
}

}  // namespace

long double airy_kernel_ext(long double x, long double y) {
  if (std::fabs(x - y) > kBlend) {
    const auto px = airy_ai_pair_ext(x), py = airy_ai_pair_ext(y);
    return (px.ai * py.aip - px.aip * py.ai) / (x - y);
  }
  const ld m = 0.5L * (x + y), d = 0.5L * (x - y);
  const auto p = airy_ai_pair_ext(m);
  const Mat2<ld> a{{{0.0L, 1.0L}, {m, 0.0L}}};
  const auto [d0, d2] = midpoint_expansion<ld>({p.ai, p.aip}, a);
  return -(d0 + d * d * d2);
}

double airy_kernel(double x, double y) { return static_cast<double>(airy_kernel_ext(x, y)); }

KernelSpec airy_kernel_spec() {
  KernelSpec k;
  k.eval = airy_kernel;
  k.diag = [](double x) { return static_cast<double>(airy_diag_ext(x)); };
  k.eval_ext = airy_kernel_ext;
  k.diag_ext = airy_diag_ext;
  k.decay_scale = 8.5;
  return k;
}

std::array<cplx, 2> psi_a01(double z, double x) {
  const cplx c = std::sqrt(2.0 * std::numbers::pi) * std::polar(1.0, -std::numbers::pi / 4);
  const double xx = z + x;
  const Mat2<cplx> lower{{{1.0, 0.0}, {-0.25 * x * x, 1.0}}};
  if (z > 0.0) {
    // Q_+ on the positive axis is the Omega_1 branch, whose first column is real-Airy.
    const auto p = airy_ai_pair(xx);
    const Vec2<cplx> col = mul(lower, Vec2<cplx>{p.ai, p.aip});
    return {c * col[0], c * col[1]};
  }
  // Upper boundary value on the negative axis: Omega_2 branch, then the alpha=0 weight vector (1,1).
  const cplx rot = std::polar(1.0, -2.0 * std::numbers::pi / 3);
  const auto p = airy_ai_pair(xx);
  const auto q = airy_ai_pair_complex(rot * xx);
  const Mat2<cplx> core{{{p.ai, std::polar(1.0, std::numbers::pi / 3) * q.ai},
                         {p.aip, std::polar(1.0, -std::numbers::pi / 3) * q.aip}}};
  const Mat2<cplx> sector{{{1.0, 0.0}, {-1.0, 1.0}}};
  const Mat2<cplx> qplus = mul(mul(lower, core), sector);
  const Vec2<cplx> col = mul(qplus, Vec2<cplx>{1.0, 1.0});
  return {c * col[0], c * col[1]};
}

KernelSpec kernel_a01(double s) {
  // Lax data of the (0,1) solution.
  const ld sl = s;
  const ld a = 0.25L * sl * sl, b = 0.5L * sl * (1.0L - sl * sl * sl / 8.0L);
  const cld twopii(0.0L, 2.0L * std::numbers::pi_v<ld>);
  auto lax = [a, b, sl](ld z) { return Mat2<cld>{{{a, 1.0L}, {z + 0.5L * sl + b, -a}}}; };
  auto eval_ext = [=](ld x, ld y) -> ld {
    if (std::fabs(x - y) > kBlend) {
      const auto px = psi_pos(x, sl), py = psi_pos(y, sl);
      return ((px[1] * py[0] - px[0] * py[1]) / (twopii * (x - y))).real();
    }
    const ld m = 0.5L * (x + y), d = 0.5L * (x - y);
    const auto [d0, d2] = midpoint_expansion<cld>(psi_pos(m, sl), lax(m));
    return ((d0 + d * d * d2) / twopii).real();
  };
  auto diag_ext = [=](ld x) -> ld {
    const auto p = psi_pos(x, sl);
    const Vec2<cld> dp = mul(lax(x), p);
    return ((dp[1] * p[0] - dp[0] * p[1]) / twopii).real();
  };
  KernelSpec k;
  k.eval_ext = eval_ext;
  k.diag_ext = diag_ext;
  k.eval = [eval_ext](double x, double y) { return static_cast<double>(eval_ext(x, y)); };
  k.diag = [diag_ext](double x) { return static_cast<double>(diag_ext(x)); };
  k.decay_scale = 8.5 - s;
  return k;
}

NystromResult nystrom_logdet(const KernelSpec& k, double s, std::size_t m) {
  if (m < 8) fail(ErrorKind::domain, "nystrom_logdet requires m >= 8");
  if (!std::isfinite(s)) fail(ErrorKind::domain, "nystrom_logdet requires finite s");
  NystromResult res;
  res.m = m;
  res.truncation = std::max(12.0, k.decay_scale - s);
  std::vector<ld> gx, gw;
  gauss_legendre_ext(m, gx, gw);
  const ld h = 0.5L * res.truncation, c = s + h;
  std::vector<ld> x(m), sw(m);
  for (std::size_t i = 0; i < m; ++i) {
    x[i] = c + h * gx[i];
    sw[i] = std::sqrt(h * gw[i]);
  }
  const bool ext = static_cast<bool>(k.eval_ext) && static_cast<bool>(k.diag_ext);
  auto kern = [&](std::size_t i, std::size_t j) -> ld {
    if (ext) return i == j ? k.diag_ext(x[i]) : k.eval_ext(x[i], x[j]);
    const double xi = static_cast<double>(x[i]), xj = static_cast<double>(x[j]);
    return i == j ? k.diag(xi) : k.eval(xi, xj);
  };
  const auto a = assemble(m, x, sw, k.symmetric, kern);
  Eigen::PartialPivLU<Eigen::Matrix<ld, Eigen::Dynamic, Eigen::Dynamic>> lu(a);
  const auto& u = lu.matrixLU();
  ld logdet = 0.0L;
  int sign = static_cast<int>(lu.permutationP().determinant());
  for (Eigen::Index i = 0; i < u.rows(); ++i) {
    const ld p = u(i, i);
    if (p == 0.0L) fail(ErrorKind::numerical, "singular Nystrom matrix");
    if (p < 0) sign = -sign;
    logdet += std::log(std::fabs(p));
  }
  if (sign <= 0) fail(ErrorKind::numerical, "Nystrom determinant is not positive");
  res.log_det = static_cast<double>(logdet);
  return res;
}

double deformed_airy_logdet(double s, double theta, std::size_t m) {
  if (!(theta <= 1.0)) fail(ErrorKind::domain, "deformed_airy_logdet requires theta <= 1");
  if (theta == 0.0) return 0.0;
  KernelSpec k = airy_kernel_spec();
  const ld th = theta;
  k.eval = [theta](double x, double y) { return theta * airy_kernel(x, y); };
  k.diag = [theta](double x) { return theta * static_cast<double>(airy_diag_ext(x)); };
  k.eval_ext = [th](ld x, ld y) { return th * airy_kernel_ext(x, y); };
  k.diag_ext = [th](ld x) { return th * airy_diag_ext(x); };
  return nystrom_logdet(k, s, m).log_det;
}

}  // namespace edgewise
