#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <vector>

namespace edgewise::ode {

/** \brief Dense-output record of one accepted Dormand-Prince step. */
template <class S, std::size_t N>
struct Step {
  long double t0 = 0, h = 0;
  std::array<std::array<S, N>, 5> r{};

  std::array<S, N> eval(long double t) const {
    const long double th = (t - t0) / h, th1 = 1 - th;
    std::array<S, N> y;
    for (std::size_t i = 0; i < N; ++i)
      y[i] = r[0][i] + th * (r[1][i] + th1 * (r[2][i] + th * (r[3][i] + th1 * r[4][i])));
    return y;
  }

  /** \brief d/dt of the interpolant. */
  std::array<S, N> deriv(long double t) const {
    const long double th = (t - t0) / h;
    // y = r0 + th r1 + th(1-th) r2 + th^2(1-th) r3 + th^2(1-th)^2 r4
    const long double d2 = 1 - 2 * th;
    const long double d3 = 2 * th - 3 * th * th;
    const long double d4 = 2 * th * (1 - th) * (1 - 2 * th);
    std::array<S, N> y;
    for (std::size_t i = 0; i < N; ++i) y[i] = (r[1][i] + d2 * r[2][i] + d3 * r[3][i] + d4 * r[4][i]) / h;
    return y;
  }
};

struct Options {
  long double rtol = 1e-12L;
  long double atol = 1e-14L;
  long double h0 = 1e-3L;
  long double hmin = 1e-12L;
  std::size_t max_steps = 2000000;
};

enum class Status { ok, step_collapse, nonfinite, too_many_steps };

template <class S, std::size_t N>
struct Result {
  Status status = Status::ok;
  long double t_fail = 0;
  std::vector<Step<S, N>> steps;
  std::array<S, N> y_end{};
};

template <class S>
long double absval(const S& s) {
  using std::abs;
  return static_cast<long double>(abs(s));
}

/** \brief Adaptive Dormand-Prince 5(4) from t0 to t1 (either direction). */
template <class S, std::size_t N, class F>
Result<S, N> integrate(F&& f, long double t0, long double t1, std::array<S, N> y, const Options& opt,
                       bool keep_steps = true) {
  using V = std::array<S, N>;
  constexpr long double c2 = 1.0L / 5, c3 = 3.0L / 10, c4 = 4.0L / 5, c5 = 8.0L / 9;
  constexpr long double a21 = 1.0L / 5;
  constexpr long double a31 = 3.0L / 40, a32 = 9.0L / 40;
  constexpr long double a41 = 44.0L / 45, a42 = -56.0L / 15, a43 = 32.0L / 9;
  constexpr long double a51 = 19372.0L / 6561, a52 = -25360.0L / 2187, a53 = 64448.0L / 6561,
                        a54 = -212.0L / 729;
  constexpr long double a61 = 9017.0L / 3168, a62 = -355.0L / 33, a63 = 46732.0L / 5247, a64 = 49.0L / 176,
                        a65 = -5103.0L / 18656;
  constexpr long double b1 = 35.0L / 384, b3 = 500.0L / 1113, b4 = 125.0L / 192, b5 = -2187.0L / 6784,
                        b6 = 11.0L / 84;
  constexpr long double e1 = 71.0L / 57600, e3 = -71.0L / 16695, e4 = 71.0L / 1920, e5 = -17253.0L / 339200,
                        e6 = 22.0L / 525, e7 = -1.0L / 40;
  constexpr long double d1 = -12715105075.0L / 11282082432, d3 = 87487479700.0L / 32700410799,
                        d4 = -10690763975.0L / 1880347072, d5 = 701980252875.0L / 199316789632,
                        d6 = -1453857185.0L / 822651844, d7 = 69997945.0L / 29380423;

  Result<S, N> res;
  const long double dir = (t1 >= t0) ? 1.0L : -1.0L;
  long double t = t0;
  long double h = dir * std::min(opt.h0, std::fabs(t1 - t0));
  V k1 = f(t, y), k2, k3, k4, k5, k6, k7, tmp, ynew;
  long double err_prev = 1e-4L;
  for (std::size_t n = 0; n < opt.max_steps; ++n) {
    if (dir * (t - t1) >= 0) {
      res.y_end = y;
      return res;
    }
    if (dir * (t + h - t1) > 0) h = t1 - t;
    for (std::size_t i = 0; i < N; ++i) tmp[i] = y[i] + h * (a21 * k1[i]);
    k2 = f(t + c2 * h, tmp);
    for (std::size_t i = 0; i < N; ++i) tmp[i] = y[i] + h * (a31 * k1[i] + a32 * k2[i]);
    k3 = f(t + c3 * h, tmp);
    for (std::size_t i = 0; i < N; ++i) tmp[i] = y[i] + h * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
    k4 = f(t + c4 * h, tmp);
    for (std::size_t i = 0; i < N; ++i)
      tmp[i] = y[i] + h * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
    k5 = f(t + c5 * h, tmp);
    for (std::size_t i = 0; i < N; ++i)
      tmp[i] = y[i] + h * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] + a65 * k5[i]);
    k6 = f(t + h, tmp);
    for (std::size_t i = 0; i < N; ++i)
      ynew[i] = y[i] + h * (b1 * k1[i] + b3 * k3[i] + b4 * k4[i] + b5 * k5[i] + b6 * k6[i]);
    k7 = f(t + h, ynew);
    long double err = 0;
    bool finite = true;
    for (std::size_t i = 0; i < N; ++i) {
      const S ei = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);
      const long double sc = opt.atol + opt.rtol * std::max(absval(y[i]), absval(ynew[i]));
      const long double q = absval(ei) / sc;
      if (!std::isfinite(q)) finite = false;
      err = std::max(err, q);
    }
    if (!finite) {
      h *= 0.25L;
      if (std::fabs(h) < opt.hmin) {
        res.status = Status::nonfinite;
        res.t_fail = t;
        res.y_end = y;
        return res;
      }
      continue;
    }
    if (err <= 1) {
      if (keep_steps) {
        Step<S, N> st;
        st.t0 = t;
        st.h = h;
        for (std::size_t i = 0; i < N; ++i) {
          st.r[0][i] = y[i];
          st.r[1][i] = ynew[i] - y[i];
          st.r[2][i] = h * k1[i] - st.r[1][i];
          st.r[3][i] = st.r[1][i] - h * k7[i] - st.r[2][i];
          st.r[4][i] = h * (d1 * k1[i] + d3 * k3[i] + d4 * k4[i] + d5 * k5[i] + d6 * k6[i] + d7 * k7[i]);
        }
        res.steps.push_back(st);
      }
      t += h;
      y = ynew;
      k1 = k7;
      // PI step-size controller.
      const long double e = std::max(err, 1e-10L);
      long double fac = 0.9L * std::pow(e, -0.7L / 5) * std::pow(err_prev, 0.4L / 5);
      fac = std::min(5.0L, std::max(0.2L, fac));
      err_prev = std::max(err, 1e-4L);
      h *= fac;
    } else {
      h *= std::max(0.2L, 0.9L * std::pow(err, -0.2L));
    }
    if (std::fabs(h) < opt.hmin) {
      res.status = Status::step_collapse;
      res.t_fail = t;
      res.y_end = y;
      return res;
    }
  }
  res.status = Status::too_many_steps;
  res.t_fail = t;
  res.y_end = y;
  return res;
}

/** \brief Locate the step covering t in a monotone step list. */
template <class S, std::size_t N>
const Step<S, N>& find_step(const std::vector<Step<S, N>>& steps, long double t) {
  std::size_t lo = 0, hi = steps.size();
  const bool fwd = steps.front().h > 0;
  while (hi - lo > 1) {
    const std::size_t mid = (lo + hi) / 2;
    if (fwd ? (steps[mid].t0 <= t) : (steps[mid].t0 >= t))
      lo = mid;
    else
      hi = mid;
  }
  return steps[lo];
}

}  // namespace edgewise::ode
