#include "edgewise/special.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "edgewise/errors.hpp"

namespace edgewise {
namespace {

using ld = long double;
using cld = std::complex<long double>;

constexpr ld kPi = 3.14159265358979323846264338327950288L;
constexpr ld kAi0 = 0.355028053887817239260063186004183176L;
constexpr ld kAip0 = 0.258819403792806798405183560189203963L;  // -Ai'(0)
constexpr ld kSqrt3 = 1.73205080756887729352744634150587237L;
constexpr ld kEpsL = std::numeric_limits<ld>::epsilon();

template <class T>
struct Quad {
  T ai, aip, bi, bip;
};

template <class T>
ld mag(const T& v) {
  using std::abs;
  return static_cast<ld>(abs(v));
}

/** \brief Maclaurin series of Ai, Ai', Bi, Bi' in extended precision. */
template <class T>
Quad<T> maclaurin(T z) {
  const T z3 = z * z * z;
  T f = 1, g = z, fp = 0, gp = 1;
  T tf = 1, tg = z, tfp = z * z / ld(2), tgp = 1;
  fp = tfp;
  for (int k = 1; k < 500; ++k) {
    const ld k3 = 3.0L * k;
    tf *= z3 / ((k3 - 1) * k3);
    tg *= z3 / (k3 * (k3 + 1));
    if (k >= 2) tfp *= z3 / ((k3 - 3) * (k3 - 1));
    tgp *= z3 / ((k3 - 2) * k3);
    f += tf;
    g += tg;
    if (k >= 2) fp += tfp;
    gp += tgp;
    const ld tail = mag(tf) + mag(tg) + mag(tfp) + mag(tgp);
    const ld scale = mag(f) + mag(g) + mag(fp) + mag(gp);
    if (k > 2 && tail < kEpsL * scale) break;
  }
  return {kAi0 * f - kAip0 * g, kAi0 * fp - kAip0 * gp, kSqrt3 * (kAi0 * f + kAip0 * g),
          kSqrt3 * (kAi0 * fp + kAip0 * gp)};
}

/** \brief Advance (y, y') of y'' = x y from x0 by h with a Taylor series. */
void taylor_step(ld x0, ld h, ld& y, ld& yp) {
  ld cm3 = 0, cm2 = y, cm1 = yp;  // c_{k-3}, c_{k-2}, c_{k-1}
  ld hk = h, sum = y + yp * h, dsum = yp;
  for (int k = 2; k < 400; ++k) {
    const ld ck = (x0 * cm2 + cm3) / (ld(k) * (k - 1));
    dsum += k * ck * hk;
    hk *= h;
    sum += ck * hk;
    cm3 = cm2;
    cm2 = cm1;
    cm1 = ck;
    if (k > 10 && std::fabs(ck * hk) < kEpsL * (std::fabs(sum) + 1e-300L) &&
        std::fabs(cm2 * hk / h) < kEpsL * (std::fabs(sum) + 1e-300L))
      break;
  }
  y = sum;
  yp = dsum;
}

/** \brief u_k coefficients of the Airy asymptotic expansions. */
ld u_coef(int k, ld prev) {
  return prev * (6.0L * k - 5) * (6.0L * k - 3) * (6.0L * k - 1) / ((2.0L * k - 1) * 216.0L * k);
}

/** \brief Oscillatory expansions for x <= -8. */
Quad<ld> negative_asymptotic(ld x) {
  const ld t = -x;
  const ld zeta = 2.0L / 3.0L * t * std::sqrt(t);
  const ld t4 = std::sqrt(std::sqrt(t));
  // Sums over even and odd orders with alternating signs, for u and v.
  ld ue = 1, uo = 0, ve = 1, vo = 0;
  ld u = 1, zp = 1;
  ld last = std::numeric_limits<ld>::infinity();
  for (int k = 1; k < 200; ++k) {
    u = u_coef(k, u);
    zp /= zeta;
    const ld v = -(6.0L * k + 1) / (6.0L * k - 1) * u;
    const ld term = u * zp;
    if (std::fabs(term) > last) break;
    last = std::fabs(term);
    const int m = k / 2;
    const ld sgn = (m % 2 == 0) ? 1.0L : -1.0L;
    if (k % 2 == 0) {
      ue += sgn * term;
      ve += sgn * v * zp;
    } else {
      uo += sgn * term;
      vo += sgn * v * zp;
    }
    if (std::fabs(term) < kEpsL * 1e-2L) break;
  }
  const ld ph = zeta - kPi / 4;
  const ld c = std::cos(ph), s = std::sin(ph);
  const ld pre = 1.0L / (std::sqrt(kPi) * t4);
  const ld pred = t4 / std::sqrt(kPi);
  return {pre * (c * ue + s * uo), pred * (s * ve - c * vo), pre * (-s * ue + c * uo),
          pred * (c * ve + s * vo)};
}

/** \brief e^x K_{1/3}(x) and e^x K_{4/3}(x) by the Steed/Temme continued fraction. */
template <class T>
std::pair<T, T> bessel_k_third(T x) {
  using std::abs;
  using std::sqrt;
  const ld xmu = 1.0L / 3.0L;
  const ld a1 = 0.25L - xmu * xmu;
  T b = ld(2) * (ld(1) + x);
  T d = ld(1) / b;
  T h = d, delh = d;
  T q1 = 0, q2 = 1;
  T q = a1, c = a1;
  ld a = -a1;
  T s = ld(1) + q * delh;
  bool converged = false;
  for (int i = 1; i < 200000; ++i) {
    a -= 2.0L * i;
    c = -a * c / (i + 1.0L);
    const T qnew = (q1 - b * q2) / a;
    q1 = q2;
    q2 = qnew;
    q += c * qnew;
    b += ld(2);
    d = ld(1) / (b + a * d);
    delh = (b * d - ld(1)) * delh;
    h += delh;
    const T dels = q * delh;
    s += dels;
    if (mag(dels) < kEpsL * mag(s)) {
      converged = true;
      break;
    }
  }
  if (!converged) fail(ErrorKind::numerical, "Bessel K continued fraction did not converge");
  h = a1 * h;
  const T kmu = sqrt(kPi / (ld(2) * x)) / s;
  const T k1 = kmu * (xmu + x + ld(0.5) - h) / x;
  return {kmu, k1};
}

/** \brief Ai, Ai' for |arg z| < pi via K-Bessel; the e^{-zeta} factor is applied. */
template <class T>
std::pair<T, T> airy_from_bessel(T z) {
  using std::exp;
  using std::sqrt;
  const T sz = sqrt(z);
  const T zeta = ld(2) / ld(3) * z * sz;
  auto [k13, k43] = bessel_k_third(zeta);
  const T k23 = k43 - ld(2) / (ld(3) * zeta) * k13;
  const T e = exp(-zeta);
  const T ai = e * sqrt(z / ld(3)) * k13 / kPi;
  const T aip = -e * z * k23 / (kPi * kSqrt3);
  return {ai, aip};
}

void check_real(double x) {
  if (!std::isfinite(x)) fail(ErrorKind::domain, "Airy argument must be finite");
  if (std::fabs(x) > 120.0) fail(ErrorKind::range, "Airy argument outside |x| <= 120");
}

Quad<ld> negative_region(ld x) {
  // Maclaurin at -5 then one Taylor step; the Maclaurin cancellation grows like e^{4/3 |x|^{3/2}}.
  if (x >= -5.0L) return maclaurin<ld>(x);
  Quad<ld> q = maclaurin<ld>(-5.0L);
  taylor_step(-5.0L, x + 5.0L, q.ai, q.aip);
  taylor_step(-5.0L, x + 5.0L, q.bi, q.bip);
  return q;
}

/** \brief Bi, Bi' for x > 8. */
std::pair<ld, ld> bi_positive_asymptotic(ld x) {
  const ld zeta = 2.0L / 3.0L * x * std::sqrt(x);
  const ld t4 = std::sqrt(std::sqrt(x));
  ld su = 1, sv = 1, u = 1, zp = 1, last = std::numeric_limits<ld>::infinity();
  for (int k = 1; k < 200; ++k) {
    u = u_coef(k, u);
    zp /= zeta;
    const ld term = u * zp;
    if (term > last) break;
    last = term;
    su += term;
    sv += -(6.0L * k + 1) / (6.0L * k - 1) * term;
    if (term < kEpsL * 1e-2L) break;
  }
  const ld e = std::exp(zeta);
  if (!std::isfinite(static_cast<double>(e * su)))
    fail(ErrorKind::range, "Bi overflows at x = " + std::to_string(static_cast<double>(x)));
  return {e * su / (std::sqrt(kPi) * t4), e * t4 * sv / std::sqrt(kPi)};
}

}  // namespace

AiryPairL airy_ai_pair_ext(long double lx) {
  check_real(static_cast<double>(lx));
  if (lx < -8.0L) {
    auto q = negative_asymptotic(lx);
    return {q.ai, q.aip};
  }
  if (lx < 0.0L) {
    auto q = negative_region(lx);
    return {q.ai, q.aip};
  }
  if (lx < 2.5L) {
    auto q = maclaurin<ld>(lx);
    return {q.ai, q.aip};
  }
  auto [ai, aip] = airy_from_bessel<ld>(lx);
  return {ai, aip};
}

AiryPair airy_ai_pair(double x) {
  const auto p = airy_ai_pair_ext(x);
  return {static_cast<double>(p.ai), static_cast<double>(p.aip)};
}

double airy_ai(double x) { return airy_ai_pair(x).ai; }
double airy_ai_prime(double x) { return airy_ai_pair(x).aip; }

namespace {
std::pair<double, double> bi_pair(double x) {
  check_real(x);
  const ld lx = x;
  if (lx < -8.0L) {
    auto q = negative_asymptotic(lx);
    return {static_cast<double>(q.bi), static_cast<double>(q.bip)};
  }
  if (lx < 0.0L) {
    auto q = negative_region(lx);
    return {static_cast<double>(q.bi), static_cast<double>(q.bip)};
  }
  if (lx <= 8.0L) {
    auto q = maclaurin<ld>(lx);
    return {static_cast<double>(q.bi), static_cast<double>(q.bip)};
  }
  auto [b, bp] = bi_positive_asymptotic(lx);
  return {static_cast<double>(b), static_cast<double>(bp)};
}
}  // namespace

double airy_bi(double x) { return bi_pair(x).first; }
double airy_bi_prime(double x) { return bi_pair(x).second; }

namespace {

std::pair<cld, cld> airy_complex_principal(cld z);

/** \brief Leading-order-corrected expansion for pi/3 < |arg z| <= 2pi/3, |z| > 7. */
std::pair<cld, cld> complex_asymptotic(cld z) {
  const cld sz = std::sqrt(z);
  const cld zeta = 2.0L / 3.0L * z * sz;
  const cld z4 = std::sqrt(sz);
  cld su = 1, sv = 1, zp = 1;
  ld u = 1, last = std::numeric_limits<ld>::infinity();
  for (int k = 1; k < 200; ++k) {
    u = u_coef(k, u);
    zp /= -zeta;
    const cld term = u * zp;
    if (std::abs(term) > last) break;
    last = std::abs(term);
    su += term;
    sv += -(6.0L * k + 1) / (6.0L * k - 1) * term;
    if (last < kEpsL * 1e-2L) break;
  }
  const cld e = std::exp(-zeta);
  const ld c = 1.0L / (2.0L * std::sqrt(kPi));
  return {c * e * su / z4, -c * z4 * e * sv};
}

std::pair<cld, cld> airy_complex_principal(cld z) {
  const ld r = std::abs(z);
  const ld th = std::fabs(std::arg(z));
  if (r <= 2.5L) {
    auto q = maclaurin<cld>(z);
    return {q.ai, q.aip};
  }
  if (th <= kPi / 3) return airy_from_bessel<cld>(z);
  if (r <= 7.0L) {
    auto q = maclaurin<cld>(z);
    return {q.ai, q.aip};
  }
  if (th <= 2 * kPi / 3) return complex_asymptotic(z);
  const cld w = -z;
  const cld ep = std::polar(1.0L, kPi / 3), em = std::conj(ep);
  auto [a1, d1] = airy_complex_principal(w * ep);
  auto [a2, d2] = airy_complex_principal(w * em);
  return {ep * a1 + em * a2, -(ep * ep * d1 + em * em * d2)};
}

}  // namespace

AiryPairC airy_ai_pair_complex(cplx z) {
  if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
    fail(ErrorKind::domain, "complex Airy argument must be finite");
  if (std::abs(z) > 40.0) fail(ErrorKind::range, "complex Airy argument outside |z| <= 40");
  if (z.imag() == 0.0) {
    auto p = airy_ai_pair(z.real());
    return {cplx(p.ai, 0.0), cplx(p.aip, 0.0)};
  }
  auto [a, d] = airy_complex_principal(cld(z.real(), z.imag()));
  return {cplx(static_cast<double>(a.real()), static_cast<double>(a.imag())),
          cplx(static_cast<double>(d.real()), static_cast<double>(d.imag()))};
}

cplx airy_ai_complex(cplx z) { return airy_ai_pair_complex(z).ai; }
cplx airy_ai_prime_complex(cplx z) { return airy_ai_pair_complex(z).aip; }

double gamma_fn(double x) {
  if (!(x > 0.0)) fail(ErrorKind::domain, "gamma_fn requires x > 0");
  const double g = std::tgamma(x);
  if (!std::isfinite(g)) fail(ErrorKind::range, "gamma_fn overflows");
  return g;
}

}  // namespace edgewise
