#include "edgewise/painleve.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <sstream>

#include "edgewise/errors.hpp"
#include "edgewise/fredholm.hpp"
#include "edgewise/quadrature.hpp"
#include "edgewise/special.hpp"

namespace edgewise {

namespace {

using ld = long double;
using cld = std::complex<ld>;
using Y5 = std::array<cld, 5>;
using Y10 = std::array<cld, 10>;

constexpr ld kPi = std::numbers::pi_v<ld>;

// Internal variables (sigma, c, p, q, r) with a = x^2/4 - sigma and b = c + x/2 - x^4/16.
template <class X>
cld a_of(X x, const cld& sigma) {
  return cld(x) * cld(x) / cld(4) - sigma;
}
template <class X>
cld b_of(X x, const cld& c) {
  const cld xc(x);
  return c + xc / cld(2) - xc * xc * xc * xc / cld(16);
}

template <class X>
Y5 lax_rhs(X x, const Y5& y) {
  const cld xc(x);
  const cld a = a_of(x, y[0]), b = b_of(x, y[1]);
  const cld &p = y[2], &q = y[3], &r = y[4];
  return {q, xc * y[0] + cld(2) * p, r - q * b, cld(2) * (a * q - p), cld(2) * (b * p - a * r)};
}

template <class X>
Y10 lax_rhs_tangent(X x, const Y10& y) {
  const cld xc(x);
  Y5 base{y[0], y[1], y[2], y[3], y[4]};
  const Y5 f = lax_rhs(x, base);
  const cld a = a_of(x, y[0]), b = b_of(x, y[1]);
  const cld &p = y[2], &q = y[3], &r = y[4];
  const cld &ds = y[5], &dc = y[6], &dp = y[7], &dq = y[8], &dr = y[9];
  Y10 out;
  for (int i = 0; i < 5; ++i) out[i] = f[i];
  out[5] = dq;
  out[6] = xc * ds + cld(2) * dp;
  out[7] = dr - q * dc - b * dq;
  out[8] = cld(2) * (-q * ds + a * dq - dp);
  out[9] = cld(2) * (p * dc + b * dp + r * ds - a * dr);
  return out;
}

/** \brief Internal state from sigma and its first two derivatives. */
Y5 state_from_sigma(cld x, const std::array<cld, 3>& sg, ld alpha) {
  const cld a = x * x / cld(4) - sg[0];
  const cld q = sg[1];
  const cld p = a * q - sg[2] / cld(2);
  const cld c = -q + x * x * sg[0] / cld(2) - sg[0] * sg[0];
  const cld r = (cld(alpha * alpha / 4) - p * p) / q;
  return {sg[0], c, p, q, r};
}

Y5 tangent_from_sigma(cld x, const std::array<cld, 3>& sg, const std::array<cld, 3>& dsg, const Y5& y) {
  const cld a = x * x / cld(4) - sg[0];
  const cld &p = y[2], &q = y[3], &r = y[4];
  const cld da = -dsg[0];
  const cld dq = dsg[1];
  const cld dp = q * da + a * dq - dsg[2] / cld(2);
  const cld dc = -dq + x * x * dsg[0] / cld(2) - cld(2) * sg[0] * dsg[0];
  const cld dr = (-cld(2) * p * dp - r * dq) / q;
  return {dsg[0], dc, dp, dq, dr};
}

/** \brief Optimally truncated background sigma, sigma', sigma'' and the smallest omitted term. */
std::pair<std::array<cld, 3>, ld> background(const AsymptoticData& d, cld x) {
  const cld z = std::pow(x, cld(-1.5L));
  const cld sx = std::sqrt(x);
  const std::size_t n = d.s.size();
  std::vector<ld> mag(n);
  cld zk = 1;
  for (std::size_t k = 0; k < n; ++k, zk *= z) mag[k] = std::abs(d.s[k] * zk);
  std::size_t stop = 2;
  for (std::size_t k = 3; k < n; ++k)
    if (mag[k] > 0 && mag[k] < mag[stop]) stop = k;
  std::array<cld, 3> v{0, 0, 0};
  zk = 1;
  for (std::size_t k = 0; k < stop; ++k, zk *= z) {
    const ld A = d.s[k] * (0.5L - 1.5L * k);
    const ld B = A * (-0.5L - 1.5L * k);
    v[0] += d.s[k] * zk;
    v[1] += A * zk;
    v[2] += B * zk;
  }
  v[0] *= sx;
  v[1] /= sx;
  v[2] *= z;
  return {v, mag[stop] * std::abs(sx)};
}

std::pair<std::array<cld, 3>, ld> instanton_truncated(const AsymptoticData& d, cld x) {
  const cld S = cld(4.0L / 3) * std::pow(x, cld(1.5L));
  const cld es = std::exp(-S);
  const cld z = std::pow(x, cld(-1.5L));
  const cld sx = std::sqrt(x);
  const std::size_t n = d.e.size();
  std::vector<ld> mag(n);
  cld zk = 1;
  for (std::size_t k = 0; k < n; ++k, zk *= z) mag[k] = std::abs(d.e[k] * zk);
  std::size_t stop = 1;
  for (std::size_t k = 2; k < n; ++k)
    if (mag[k] > 0 && mag[k] < mag[stop]) stop = k;
  std::array<cld, 3> v{0, 0, 0};
  cld xm = std::pow(x, cld(d.nu));
  for (std::size_t k = 0; k < stop; ++k, xm *= z) {
    const ld mu = d.nu - 1.5L * k;
    const cld t = d.e[k] * es * xm;
    v[0] += t;
    v[1] += t * (cld(mu) / x - cld(2) * sx);
    v[2] += t * (cld(4) * x - cld(4 * mu + 1) / sx + cld(mu * (mu - 1)) / (x * x));
  }
  return {v, mag[stop] / std::max(mag[0], 1e-300L)};
}

/** \brief Background state and tangent at t0 continued from the ray arg x = -pi/3. */
std::pair<Y5, Y5> continued_background(const AsymptoticData& d, ld t0) {
  const ld alpha = d.alpha;
  const cld rot = std::polar(1.0L, -kPi / 3);
  ld R = std::max<ld>(12.0L, t0 + 4.0L);
  std::array<cld, 3> bg, in;
  for (;; R *= 1.25L) {
    if (R > 120.0L)
      fail(ErrorKind::domain, "alpha too close to 0 for the asymptotic launch; use alpha = 0 or |alpha| >= 0.05");
    const cld x = R * rot;
    auto [b, eb] = background(d, x);
    auto [i, ei] = instanton_truncated(d, x);
    if (eb <= 1e-17L * std::abs(b[0]) + 1e-30L && ei <= 1e-17L) {
      bg = b;
      in = i;
      break;
    }
  }
  const cld x0 = R * rot;
  const Y5 y = state_from_sigma(x0, bg, alpha);
  const Y5 dy = tangent_from_sigma(x0, bg, in, y);
  Y10 Y;
  for (int i = 0; i < 5; ++i) {
    Y[i] = y[i];
    Y[i + 5] = dy[i];
  }
  ode::Options opt;
  opt.rtol = 1e-18L;
  opt.atol = 1e-40L;
  opt.h0 = 1e-3L;
  opt.hmin = 1e-14L;
  auto ray = [&](ld tau, const Y10& v) {
    const cld x = (R - tau) * rot;
    Y10 f = lax_rhs_tangent(x, v);
    for (auto& e : f) e *= -rot;
    return f;
  };
  auto r1 = ode::integrate<cld, 10>(ray, 0.0L, R - t0, Y, opt, false);
  if (r1.status != ode::Status::ok) fail(ErrorKind::numerical, "complex launch path failed on the ray");
  auto arc = [&](ld phi, const Y10& v) {
    const cld x = std::polar(t0, phi);
    Y10 f = lax_rhs_tangent(x, v);
    for (auto& e : f) e *= cld(0, 1) * x;
    return f;
  };
  auto r2 = ode::integrate<cld, 10>(arc, -kPi / 3, 0.0L, r1.y_end, opt, false);
  if (r2.status != ode::Status::ok) fail(ErrorKind::numerical, "complex launch path failed on the arc");
  Y5 b, t;
  for (int i = 0; i < 5; ++i) {
    b[i] = r2.y_end[i];
    t[i] = r2.y_end[i + 5];
  }
  return {b, t};
}

Y5 init_internal(ld t0, const PainleveParams& params) {
  const ld alpha = params.alpha;
  const cld gamma(params.gamma.real(), params.gamma.imag());
  if (alpha == 0) {
    const cld k = std::sqrt(cld(1) - gamma);
    const AiryPairL ai = airy_ai_pair_ext(t0);
    const cld u = k * ai.ai, up = k * ai.aip;
    const cld a = cld(t0 * t0 / 4);
    const cld sigma = up * up - t0 * u * u - u * u * u * u;
    const cld q = -u * u;
    const cld w = up - a * u;
    const cld p = u * w;
    const cld r = w * w;
    const cld c = -q + t0 * t0 * sigma / cld(2) - sigma * sigma;
    return {sigma, c, p, q, r};
  }
  const AsymptoticData d = asymptotic_data(static_cast<double>(alpha));
  static std::mutex mu;
  static std::map<std::pair<ld, ld>, std::pair<Y5, Y5>> cache;
  std::pair<Y5, Y5> launch;
  {
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find({alpha, t0});
    if (it != cache.end()) launch = it->second;
  }
  if (launch.first[0] == cld(0)) {
    launch = continued_background(d, t0);
    std::lock_guard<std::mutex> lock(mu);
    if (cache.size() > 64) cache.clear();
    cache[{alpha, t0}] = launch;
  }
  const auto& [bg, tan] = launch;
  const cld kappa = (std::polar(1.0L, -kPi * alpha) - gamma) * d.stokes;
  Y5 y;
  for (int i = 0; i < 5; ++i) y[i] = bg[i] + kappa * tan[i];
  return y;
}

LaxState to_state(ld x, const Y5& y) {
  auto cd = [](const cld& v) { return cplx(static_cast<double>(v.real()), static_cast<double>(v.imag())); };
  LaxState s;
  s.x = static_cast<double>(x);
  s.a = cd(a_of(x, y[0]));
  s.b = cd(b_of(x, y[1]));
  s.p = cd(y[2]);
  s.q = cd(y[3]);
  s.r = cd(y[4]);
  return s;
}

cplx to_cplx(const cld& v) { return {static_cast<double>(v.real()), static_cast<double>(v.imag())}; }

void validate(const PainleveParams& p) {
  if (!(p.alpha > -1.0) || !std::isfinite(p.alpha)) fail(ErrorKind::domain, "alpha must exceed -1");
  if (!std::isfinite(p.gamma.real()) || !std::isfinite(p.gamma.imag()))
    fail(ErrorKind::domain, "gamma must be finite");
}

std::string window_message(double alpha, double t0) {
  auto w = admissible_t0(alpha);
  std::ostringstream os;
  os << "launch abscissa " << t0 << " outside the admissible window [" << w.first << ", " << w.second
     << "] for alpha = " << alpha;
  return os.str();
}

constexpr ld kGl3x[3] = {-0.774596669241483377035853079956479922L, 0.0L, 0.774596669241483377035853079956479922L};
constexpr ld kGl3w[3] = {5.0L / 9, 8.0L / 9, 5.0L / 9};

}  // namespace

double default_t0(double alpha) { return alpha == 0.0 ? 8.0 : 4.0; }

std::pair<double, double> admissible_t0(double alpha) {
  if (alpha == 0.0) return {6.0, 40.0};
  return {3.5, 5.0};
}

AsymptoticData asymptotic_data(double alpha, std::size_t order) {
  if (!(alpha > -1.0)) fail(ErrorKind::domain, "alpha must exceed -1");
  AsymptoticData d;
  d.alpha = alpha;
  const ld al = alpha;
  const std::size_t K = order + 4;
  std::vector<ld>& s = d.s;
  s.assign(K, 0.0L);
  std::vector<ld> A(K, 0.0L), B(K, 0.0L);
  auto conv = [](const std::vector<ld>& u, const std::vector<ld>& v, std::size_t n) {
    ld acc = 0;
    for (std::size_t j = 0; j <= n; ++j) acc += u[j] * v[n - j];
    return acc;
  };
  s[0] = -al;
  A[0] = s[0] * 0.5L;
  B[0] = A[0] * -0.5L;
  std::vector<ld> AA(K, 0.0L);
  AA[0] = A[0] * A[0];
  for (std::size_t N = 1; N < K; ++N) {
    // sigma''^2 + 4 sigma'^3 - 4 x sigma'^2 + 4 sigma sigma' = alpha^2, order z^N with s_N = 0.
    ld rest = 0;
    if (N >= 2) rest += conv(B, B, N - 2);
    {
      ld acc = 0;
      for (std::size_t j = 0; j <= N - 1; ++j) acc += AA[j] * A[N - 1 - j];
      rest += 4 * acc;
    }
    rest += -4 * conv(A, A, N) + 4 * conv(A, s, N);
    s[N] = (alpha == 0.0) ? 0.0L : -rest / (2 * s[0]);
    A[N] = s[N] * (0.5L - 1.5L * N);
    B[N] = A[N] * (-0.5L - 1.5L * N);
    AA[N] = conv(A, A, N);
  }
  d.s.resize(order + 1);
  d.stokes = std::tgamma(1.0L + al) / (std::pow(2.0L, 3.0L * (1.0L + al)) * kPi);
  if (alpha == 0.0) {
    d.nu = -1.0L;
    return d;
  }
  // Linearization of the sigma-form about the background; coefficient P of delta sigma'.
  std::vector<ld> P(K, 0.0L);
  for (std::size_t j = 0; j < K; ++j) P[j] = 2 * s[j] - 4 * A[j] + (j >= 1 ? 6 * AA[j - 1] : 0.0L);
  d.nu = -(4 * B[1] - B[0] - 2 * P[2] + 2 * A[1]) / (P[1] - 4 * B[0]);
  std::vector<ld>& e = d.e;
  const std::size_t M = order + 1;
  e.assign(M, 0.0L);
  e[0] = 1.0L;
  auto mu = [&](std::size_t k) { return d.nu - 1.5L * k; };
  auto order_sum = [&](std::size_t n, std::size_t kmax) {
    ld acc = 0;
    for (std::size_t k = 0; k <= std::min(n, kmax); ++k) {
      const std::size_t j = n - k;
      acc += (4 * B[j] + P[j] * mu(k) + 2 * A[j]) * e[k];
    }
    if (n >= 1)
      for (std::size_t k = 0; k <= std::min(n - 1, kmax); ++k) acc -= B[n - 1 - k] * (4 * mu(k) + 1) * e[k];
    if (n >= 2)
      for (std::size_t k = 0; k <= std::min(n - 2, kmax); ++k) acc += B[n - 2 - k] * mu(k) * (mu(k) - 1) * e[k];
    for (std::size_t k = 0; k <= std::min(n + 1, kmax); ++k) acc -= 2 * P[n + 1 - k] * e[k];
    return acc;
  };
  for (std::size_t N = 1; N < M && N + 3 < K; ++N) {
    const ld coef = 4 * B[1] - B[0] * (4 * mu(N) + 1) + P[1] * mu(N) - 2 * P[2] + 2 * A[1];
    e[N] = -order_sum(N + 1, N - 1) / coef;
  }
  return d;
}

std::array<std::complex<long double>, 3> instanton(const AsymptoticData& d, std::complex<long double> x) {
  if (d.e.empty()) fail(ErrorKind::domain, "no exponential series at alpha = 0");
  return instanton_truncated(d, x).first;
}

std::pair<cplx, double> sigma_asymptotic(double alpha, cplx gamma, double x) {
  if (!(x > 0)) fail(ErrorKind::domain, "asymptotic evaluation requires x > 0");
  if (alpha == 0.0) {
    const AiryPairL ai = airy_ai_pair_ext(x);
    const ld k = ai.aip * ai.aip - x * ai.ai * ai.ai;
    const cplx one_minus = 1.0 - gamma;
    return {one_minus * static_cast<double>(k), std::abs(one_minus * one_minus) * static_cast<double>(ai.ai * ai.ai * ai.ai * ai.ai)};
  }
  const AsymptoticData d = asymptotic_data(alpha);
  auto [bg, eb] = background(d, cld(x));
  auto [in, ei] = instanton_truncated(d, cld(x));
  const cld kappa = (cld(std::cos(kPi * static_cast<ld>(alpha))) - cld(gamma.real(), gamma.imag())) * d.stokes;
  const cld v = bg[0] + kappa * in[0];
  return {to_cplx(v), static_cast<double>(eb + std::abs(kappa * in[0]) * ei)};
}

LaxState init_lax(double t0, const PainleveParams& params) {
  validate(params);
  const auto win = admissible_t0(params.alpha);
  if (!(t0 >= win.first && t0 <= win.second)) fail(ErrorKind::domain, window_message(params.alpha, t0));
  return to_state(t0, init_internal(t0, params));
}

LaxTrajectory solve_lax(const PainleveParams& params, double t_min, const LaxOptions& opts) {
  validate(params);
  const double t0 = opts.t0 > 0 ? opts.t0 : default_t0(params.alpha);
  const auto win = admissible_t0(params.alpha);
  if (t0 < win.first || t0 > win.second) fail(ErrorKind::domain, window_message(params.alpha, t0));
  if (!(t_min < t0)) fail(ErrorKind::domain, "t_min must lie below the launch abscissa");
  if (!(opts.rtol >= 1e-12) || opts.rtol > 1e-3) fail(ErrorKind::domain, "rtol must lie in [1e-12, 1e-3]");
  const Y5 y0 = init_internal(t0, params);
  ode::Options o;
  o.rtol = std::max<ld>(1e-18L, static_cast<ld>(opts.rtol) * 1e-3L);
  o.atol = 1e-40L;
  o.h0 = 1e-3L;
  o.hmin = 1e-11L;
  auto f = [](ld x, const Y5& y) { return lax_rhs(x, y); };
  auto res = ode::integrate<cld, 5>(f, t0, t_min, y0, o, true);
  if (res.status != ode::Status::ok) {
    std::ostringstream os;
    os << "step size collapse near t = " << static_cast<double>(res.t_fail) << " (pole of the transcendent)";
    throw PoleError(static_cast<double>(res.t_fail), os.str());
  }
  LaxTrajectory tr;
  tr.params = params;
  tr.steps = std::move(res.steps);
  tr.grid.reserve(tr.steps.size() + 1);
  tr.states.reserve(tr.steps.size() + 1);
  for (const auto& st : tr.steps) {
    tr.grid.push_back(static_cast<double>(st.t0));
    tr.states.push_back(to_state(st.t0, st.r[0]));
  }
  tr.grid.push_back(t_min);
  tr.states.push_back(to_state(t_min, res.y_end));
  double drift = 0, scale = 1;
  for (const auto& s : tr.states) {
    drift = std::max({drift, std::abs(s.constraint1()), std::abs(s.constraint2(params.alpha))});
    scale = std::max({scale, 1 + std::abs(s.a), 1 + std::abs(s.b), 1 + std::abs(s.p), 1 + std::abs(s.q),
                      1 + std::abs(s.r)});
    if (!std::isfinite(std::abs(s.a) + std::abs(s.b) + std::abs(s.p) + std::abs(s.q) + std::abs(s.r)))
      fail(ErrorKind::numerical, "nonfinite Lax state");
  }
  if (drift > 1e-7 * scale) fail(ErrorKind::numerical, "Lax constraint drift beyond tolerance");
  tr.build_cumulative();
  return tr;
}

namespace {
const LaxTrajectory::Step& locate(const LaxTrajectory& tr, double t) {
  if (tr.steps.empty() || t > tr.t0() || t < tr.t_min() || !std::isfinite(t)) {
    std::ostringstream os;
    os << "abscissa " << t << " outside trajectory range [" << (tr.steps.empty() ? 0.0 : tr.t_min()) << ", "
       << (tr.steps.empty() ? 0.0 : tr.t0()) << "]";
    fail(ErrorKind::domain, os.str());
  }
  return ode::find_step(tr.steps, static_cast<ld>(t));
}
}  // namespace

LaxState LaxTrajectory::state(double t) const { return to_state(t, locate(*this, t).eval(t)); }

cplx LaxTrajectory::sigma(double t) const { return to_cplx(locate(*this, t).eval(t)[0]); }

cplx LaxTrajectory::q(double t) const { return to_cplx(locate(*this, t).eval(t)[3]); }

cplx LaxTrajectory::sigma_prime_dense(double t) const { return to_cplx(locate(*this, t).deriv(t)[0]); }

void LaxTrajectory::build_cumulative() {
  cumulative_.assign(steps.size() + 1, {0, 0, 0});
  for (std::size_t i = 0; i < steps.size(); ++i) {
    const auto& st = steps[i];
    std::array<Scalar, 3> acc{0, 0, 0};
    const ld half = -st.h / 2;
    const ld mid = st.t0 + st.h / 2;
    for (int g = 0; g < 3; ++g) {
      const ld x = mid + half * kGl3x[g];
      const auto y = st.eval(x);
      acc[0] += kGl3w[g] * half * y[0];
      acc[1] += kGl3w[g] * half * y[3];
      acc[2] += kGl3w[g] * half * x * y[3];
    }
    for (int k = 0; k < 3; ++k) cumulative_[i + 1][k] = cumulative_[i][k] + acc[k];
  }
}

std::array<LaxTrajectory::Scalar, 3> LaxTrajectory::integrals(double lo) const {
  const auto& st = locate(*this, lo);
  const std::size_t i = static_cast<std::size_t>(&st - steps.data());
  std::array<Scalar, 3> acc = cumulative_[i];
  const ld top = st.t0, bottom = lo;
  const ld half = (top - bottom) / 2, mid = (top + bottom) / 2;
  for (int g = 0; g < 3; ++g) {
    const ld x = mid + half * kGl3x[g];
    const auto y = st.eval(x);
    acc[0] += kGl3w[g] * half * y[0];
    acc[1] += kGl3w[g] * half * y[3];
    acc[2] += kGl3w[g] * half * x * y[3];
  }
  return acc;
}

cplx LaxTrajectory::integrate_sigma(double lo) const { return to_cplx(integrals(lo)[0]); }

cplx LaxTrajectory::integrate_q_weighted(double lo, double s) const {
  const auto v = integrals(lo);
  return to_cplx(v[2] - static_cast<ld>(s) * v[1]);
}

cplx sigma_of(const LaxTrajectory& traj, double t) { return traj.sigma(t); }
cplx q_of(const LaxTrajectory& traj, double t) { return traj.q(t); }

cplx sigma_form_residual(const LaxTrajectory& traj, double t) {
  const auto& st = locate(traj, t);
  const auto y = st.eval(t);
  const auto dy = st.deriv(t);
  const cld s = y[0], s1 = dy[0], s2 = dy[3];
  const ld al = traj.params.alpha;
  return to_cplx(s2 * s2 + cld(4) * s1 * (s1 * s1 - cld(t) * s1 + s) - cld(al * al));
}

cplx pxxxiv_residual(const LaxTrajectory& traj, double t) {
  const auto& st = locate(traj, t);
  const auto y = st.eval(t);
  const auto dy = st.deriv(t);
  const cld a = a_of(static_cast<ld>(t), y[0]);
  const cld q = y[3];
  const cld q1 = dy[3];
  const cld a1 = cld(t / 2.0L) - dy[0];
  const cld q2 = cld(2) * (a1 * q + a * q1 - dy[2]);
  const ld al = traj.params.alpha;
  return to_cplx(q2 - (q1 * q1 / (cld(2) * q) + cld(2 * t) * q - cld(4) * q * q - cld(al * al) / (cld(2) * q)));
}

PiiTrajectory solve_pii_hm(double t_min) {
  if (!(t_min < 8.0) || t_min < -12.0) fail(ErrorKind::domain, "t_min must lie in [-12, 8)");
  PiiTrajectory tr;
  tr.t_min = t_min;
  const AiryPairL ai = airy_ai_pair_ext(8.0L);
  ode::Options o;
  o.rtol = 1e-17L;
  o.atol = 1e-40L;
  o.hmin = 1e-11L;
  auto f = [](ld t, const std::array<ld, 2>& y) -> std::array<ld, 2> {
    return {y[1], t * y[0] + 2 * y[0] * y[0] * y[0]};
  };
  auto res = ode::integrate<ld, 2>(f, 8.0L, t_min, {ai.ai, ai.aip}, o, true);
  if (res.status != ode::Status::ok) {
    std::ostringstream os;
    os << "Hastings-McLeod integration blew up near t = " << static_cast<double>(res.t_fail);
    throw PoleError(static_cast<double>(res.t_fail), os.str());
  }
  tr.steps = std::move(res.steps);
  std::vector<ld> xs, ws;
  gauss_legendre_ext(5, xs, ws);
  tr.cumulative_.assign(tr.steps.size() + 1, {0, 0});
  for (std::size_t i = 0; i < tr.steps.size(); ++i) {
    const auto& st = tr.steps[i];
    const ld half = -st.h / 2, mid = st.t0 + st.h / 2;
    std::array<ld, 2> acc{0, 0};
    for (int g = 0; g < 5; ++g) {
      const ld x = mid + half * xs[g];
      const ld u = st.eval(x)[0];
      acc[0] += ws[g] * half * u * u;
      acc[1] += ws[g] * half * x * u * u;
    }
    tr.cumulative_[i + 1] = {tr.cumulative_[i][0] + acc[0], tr.cumulative_[i][1] + acc[1]};
  }
  // Beyond t = 8 the solution equals Ai to relative order Ai^2.
  std::vector<ld> xg, wg;
  gauss_legendre_ext(30, xg, wg);
  for (int panel = 0; panel < 4; ++panel) {
    const ld lo = 8.0L + 3.0L * panel, hi = lo + 3.0L;
    for (int g = 0; g < 30; ++g) {
      const ld x = (lo + hi) / 2 + (hi - lo) / 2 * xg[g];
      const ld u = airy_ai_pair_ext(x).ai;
      tr.tail_u2_ += wg[g] * (hi - lo) / 2 * u * u;
      tr.tail_xu2_ += wg[g] * (hi - lo) / 2 * x * u * u;
    }
  }
  return tr;
}

double PiiTrajectory::u(double t) const {
  if (!(t >= t_min && t <= t0)) fail(ErrorKind::domain, "abscissa outside the Hastings-McLeod trajectory");
  return static_cast<double>(ode::find_step(steps, static_cast<ld>(t)).eval(t)[0]);
}

double PiiTrajectory::up(double t) const {
  if (!(t >= t_min && t <= t0)) fail(ErrorKind::domain, "abscissa outside the Hastings-McLeod trajectory");
  return static_cast<double>(ode::find_step(steps, static_cast<ld>(t)).eval(t)[1]);
}

double PiiTrajectory::weighted_square_integral(double s) const {
  if (!(s >= t_min)) fail(ErrorKind::domain, "abscissa below the Hastings-McLeod trajectory");
  if (s >= t0) {
    std::vector<ld> xg, wg;
    gauss_legendre_ext(30, xg, wg);
    ld acc = 0;
    for (int panel = 0; panel < 4; ++panel) {
      const ld lo = s + 3.0L * panel, hi = lo + 3.0L;
      for (int g = 0; g < 30; ++g) {
        const ld x = (lo + hi) / 2 + (hi - lo) / 2 * xg[g];
        const ld u = airy_ai_pair_ext(x).ai;
        acc += wg[g] * (hi - lo) / 2 * (x - s) * u * u;
      }
    }
    return static_cast<double>(acc);
  }
  const auto& st = ode::find_step(steps, static_cast<ld>(s));
  const std::size_t i = static_cast<std::size_t>(&st - steps.data());
  std::array<ld, 2> acc = cumulative_[i];
  std::vector<ld> xs, ws;
  gauss_legendre_ext(5, xs, ws);
  const ld half = (st.t0 - s) / 2, mid = (st.t0 + s) / 2;
  for (int g = 0; g < 5; ++g) {
    const ld x = mid + half * xs[g];
    const ld u = st.eval(x)[0];
    acc[0] += ws[g] * half * u * u;
    acc[1] += ws[g] * half * x * u * u;
  }
  return static_cast<double>(acc[1] + tail_xu2_ - s * (acc[0] + tail_u2_));
}

FEvaluator::FEvaluator(double alpha, cplx beta, double s_min)
    : alpha_(alpha), t0_(default_t0(alpha)), s_min_(s_min) {
  if (!(alpha > -1.0)) fail(ErrorKind::domain, "alpha must exceed -1");
  if (beta.imag() == 0.0 && beta.real() < 1.0) fail(ErrorKind::domain, "beta - 1 must not lie in (-inf, 0)");
  if (!std::isfinite(s_min)) fail(ErrorKind::domain, "s must be finite");
  data_ = asymptotic_data(alpha);
  if (s_min < t0_) {
    const double t_min = s_min - 0.01;
    lower_ = solve_lax({alpha, beta - 1.0}, t_min);
    upper_ = solve_lax({alpha, beta}, t_min);
  }
}

cplx FEvaluator::tail_sigma(double from) const {
  std::vector<ld> xg, wg;
  gauss_legendre_ext(30, xg, wg);
  cld acc = 0;
  for (int panel = 0; panel < 4; ++panel) {
    const ld lo = from + 3.0L * panel, hi = lo + 3.0L;
    for (int g = 0; g < 30; ++g) {
      const ld x = (lo + hi) / 2 + (hi - lo) / 2 * xg[g];
      cld v;
      if (alpha_ == 0.0) {
        const AiryPairL ai = airy_ai_pair_ext(x);
        v = ai.aip * ai.aip - x * ai.ai * ai.ai;
      } else {
        v = data_.stokes * instanton_truncated(data_, cld(x)).first[0];
      }
      acc += wg[g] * (hi - lo) / 2 * v;
    }
  }
  return to_cplx(acc);
}

cplx FEvaluator::tail_q(double from, double s) const {
  std::vector<ld> xg, wg;
  gauss_legendre_ext(30, xg, wg);
  cld acc = 0;
  for (int panel = 0; panel < 4; ++panel) {
    const ld lo = from + 3.0L * panel, hi = lo + 3.0L;
    for (int g = 0; g < 30; ++g) {
      const ld x = (lo + hi) / 2 + (hi - lo) / 2 * xg[g];
      cld v;
      if (alpha_ == 0.0) {
        const ld ai = airy_ai_pair_ext(x).ai;
        v = -ai * ai;
      } else {
        v = data_.stokes * instanton_truncated(data_, cld(x)).first[1];
      }
      acc += wg[g] * (hi - lo) / 2 * (x - static_cast<ld>(s)) * v;
    }
  }
  return to_cplx(acc);
}

cplx FEvaluator::sigma_route(double s) const {
  if (!std::isfinite(s)) fail(ErrorKind::domain, "s must be finite");
  if (s >= t0_) return std::exp(-tail_sigma(s));
  if (s < s_min_) fail(ErrorKind::domain, "s below the evaluator range");
  const cplx inner = lower_.integrate_sigma(s) - upper_.integrate_sigma(s);
  return std::exp(-(inner + tail_sigma(t0_)));
}

cplx FEvaluator::q_route(double s) const {
  if (!std::isfinite(s)) fail(ErrorKind::domain, "s must be finite");
  if (s >= t0_) return std::exp(tail_q(s, s));
  if (s < s_min_) fail(ErrorKind::domain, "s below the evaluator range");
  const cplx inner = lower_.integrate_q_weighted(s, s) - upper_.integrate_q_weighted(s, s);
  return std::exp(inner + tail_q(t0_, s));
}

cplx F_eval_sigma(double s, double alpha, cplx beta) { return FEvaluator(alpha, beta, s).sigma_route(s); }

cplx F_eval_q(double s, double alpha, cplx beta) { return FEvaluator(alpha, beta, s).q_route(s); }

double tw2(double s, Tw2Route route) {
  if (!(s >= -8.0)) fail(ErrorKind::domain, "tw2 requires s >= -8");
  switch (route) {
    case Tw2Route::sigma:
    case Tw2Route::q: {
      static const FEvaluator ev(0.0, 1.0, -8.0);
      const cplx v = route == Tw2Route::sigma ? ev.sigma_route(s) : ev.q_route(s);
      return v.real();
    }
    case Tw2Route::pii: {
      static const PiiTrajectory hm = solve_pii_hm(-8.0);
      return std::exp(-hm.weighted_square_integral(s));
    }
    case Tw2Route::fredholm:
      return std::exp(nystrom_logdet(airy_kernel_spec(), s, 80).log_det);
  }
  fail(ErrorKind::domain, "unknown route");
}

SpecconData speccon(double x) {
  const double x3 = x * x * x, x5 = x3 * x * x, x6 = x3 * x3, x8 = x6 * x * x;
  SpecconData d;
  d.a = x * x / 4;
  d.b = x / 2 * (1 - x3 / 8);
  d.q1_21 = (x3 - x6 / 16 - 7.0 / 4) / 12;
  d.q2_12 = (5 - 5 * x3 + x6 / 8) / 48;
  d.q2_11 = (35 - 7 * x5 / 5 + x8 / 32) / 192;
  return d;
}

double theta01(double s) {
  const SpecconData d = speccon(s);
  return s * s * s / 6 - s * d.a - 2.0 / 3 * (d.q1_21 + 2 * d.q2_12);
}

}  // namespace edgewise
