#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <cmath>
#include <complex>
#include <numbers>

#include "edgewise/errors.hpp"
#include "edgewise/quadrature.hpp"
#include "edgewise/special.hpp"

using namespace edgewise;
using mp = boost::multiprecision::cpp_bin_float_100;

namespace {

// Maclaurin Ai/Ai'/Bi at 100 decimal digits: the cancellation at |x| <= 10 stays far below 1e-60.
struct MpAiry {
  double ai, aip, bi;
};
MpAiry mp_airy(double xd) {
  const mp x = xd;
  const mp c1 = boost::multiprecision::pow(mp(3), mp(-2) / 3) / boost::math::tgamma(mp(2) / 3);
  const mp c2 = boost::multiprecision::pow(mp(3), mp(-1) / 3) / boost::math::tgamma(mp(1) / 3);
  const mp x3 = x * x * x;
  mp f = 1, g = x, fp = 0, gp = 1, tf = 1, tg = x;
  for (int k = 1; k < 400; ++k) {
    tf *= x3 / ((3 * k - 1) * (3 * k));
    tg *= x3 / ((3 * k) * (3 * k + 1));
    f += tf;
    g += tg;
    if (x != 0) {
      fp += tf * (3 * k) / x;
      gp += tg * (3 * k + 1) / x;
    }
  }
  const mp s3 = boost::multiprecision::sqrt(mp(3));
  return {static_cast<double>(c1 * f - c2 * g), static_cast<double>(c1 * fp - c2 * gp),
          static_cast<double>(s3 * (c1 * f + c2 * g))};
}

}  // namespace

TEST_CASE("Airy values at zero") {
  CHECK(airy_ai(0.0) == doctest::Approx(0.35502805388781724).epsilon(1e-16));
  CHECK(airy_ai_prime(0.0) == doctest::Approx(-0.25881940379280680).epsilon(1e-16));
}

TEST_CASE("Airy against extended-precision series") {
  for (double x = -10.0; x <= 10.0; x += 0.37) {
    const auto o = mp_airy(x);
    CAPTURE(x);
    CHECK(std::fabs(airy_ai(x) - o.ai) <= 1e-13);
    CHECK(std::fabs(airy_ai_prime(x) - o.aip) <= 1e-13 * std::max(1.0, std::fabs(o.aip)));
    CHECK(std::fabs(airy_bi(x) - o.bi) <= 1e-13 * std::max(1.0, std::fabs(o.bi)));
  }
  CHECK(std::fabs(airy_ai(5.0) - mp_airy(5.0).ai) <= 1e-13);
}

TEST_CASE("Airy oscillatory side to -120") {
  // Oracle: 100-digit Maclaurin at moderate |x|; beyond, overlap with the series is checked at -10 .. -14.
  for (double x : {-10.5, -11.0, -12.3, -13.9}) {
    const auto o = mp_airy(x);
    CAPTURE(x);
    CHECK(std::fabs(airy_ai(x) - o.ai) <= 1e-11 * std::fabs(o.ai) + 1e-14);
    CHECK(std::fabs(airy_ai_prime(x) - o.aip) <= 1e-11 * std::fabs(o.aip) + 1e-14);
  }
  for (double x = -120.0; x <= -10.0; x += 3.1) {
    const double w = airy_ai(x) * airy_bi_prime(x) - airy_ai_prime(x) * airy_bi(x);
    CHECK(w == doctest::Approx(1.0 / std::numbers::pi).epsilon(1e-12));
  }
}

TEST_CASE("Airy Wronskian and ODE residual") {
  for (double x = -10.0; x <= 10.0; x += 0.25) {
    const double w = airy_ai(x) * airy_bi_prime(x) - airy_ai_prime(x) * airy_bi(x);
    CHECK(std::fabs(w - 1.0 / std::numbers::pi) <= 1e-10);
    const double h = 1e-3;
    const double d2 = (airy_ai(x + h) - 2 * airy_ai(x) + airy_ai(x - h)) / (h * h);
    CHECK(std::fabs(d2 - x * airy_ai(x)) <= 1e-6 * (1 + std::fabs(x)));
  }
}

TEST_CASE("Airy range errors") {
  CHECK_THROWS_AS(airy_ai(130.0), Error);
  CHECK_THROWS_AS(airy_bi(110.0), Error);
  CHECK(airy_ai(119.0) >= 0.0);
}

TEST_CASE("complex Airy") {
  using c = std::complex<double>;
  CHECK(std::abs(airy_ai_complex(c(0, 0)) - c(0.355028053887817, 0)) < 1e-14);
  CHECK(std::abs(airy_ai_complex(c(3, 0)) - airy_ai(3.0)) <= 1e-12 * airy_ai(3.0));
  const c w = std::polar(1.0, 2 * std::numbers::pi / 3);
  for (double r : {1.0, 2.0, 5.0, 15.0}) {
    for (double th = -3.1; th < 3.15; th += 0.2) {
      const c z = std::polar(r, th);
      const c s = airy_ai_complex(z) + w * airy_ai_complex(w * z) + w * w * airy_ai_complex(w * w * z);
      const double scale = std::abs(airy_ai_complex(z)) + std::abs(airy_ai_complex(w * z)) +
                           std::abs(airy_ai_complex(w * w * z));
      CAPTURE(r);
      CAPTURE(th);
      CHECK(std::abs(s) <= 1e-11 * scale);
    }
  }
  // Off-axis points against the Taylor series about a real point, coefficients by the Airy recurrence.
  for (double x : {-6.0, -1.0, 2.0, 6.0, 9.0}) {
    const auto o = mp_airy(x);
    const c ih(0, 0.05);
    c sum = o.ai + o.aip * ih, hk = ih;
    double cm3 = 0, cm2 = o.ai, cm1 = o.aip;
    for (int k = 2; k < 40; ++k) {
      const double ck = (x * cm2 + cm3) / (k * (k - 1.0));
      hk *= ih;
      sum += ck * hk;
      cm3 = cm2;
      cm2 = cm1;
      cm1 = ck;
    }
    CAPTURE(x);
    CHECK(std::abs(airy_ai_complex(c(x, 0.05)) - sum) <= 1e-10 * std::abs(sum));
  }
}

TEST_CASE("gamma") {
  CHECK(gamma_fn(1.0) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(gamma_fn(0.5) == doctest::Approx(std::sqrt(std::numbers::pi)).epsilon(1e-15));
  const double ref = static_cast<double>(boost::math::tgamma(mp(73) / 10));
  CHECK(std::fabs(gamma_fn(7.3) - ref) <= 1e-13 * ref);
  CHECK_THROWS_AS(gamma_fn(0.0), Error);
}

TEST_CASE("Gauss-Legendre") {
  auto r1 = gauss_legendre(1);
  CHECK(r1.nodes[0] == 0.0);
  CHECK(r1.weights[0] == doctest::Approx(2.0));
  auto r2 = gauss_legendre(2);
  CHECK(r2.nodes[1] == doctest::Approx(1 / std::sqrt(3.0)).epsilon(1e-15));
  CHECK(r2.weights[0] == doctest::Approx(1.0).epsilon(1e-15));
  auto r16 = gauss_legendre(16);
  double s = 0;
  for (std::size_t i = 0; i < 16; ++i) s += r16.weights[i] * std::pow(r16.nodes[i], 30);
  CHECK(std::fabs(s - 2.0 / 31) <= 1e-14);
  for (std::size_t m : {3u, 17u, 64u, 301u, 4096u}) {
    auto r = gauss_legendre(m);
    for (int p = 0; p <= 4; ++p) {
      double acc = 0;
      for (std::size_t i = 0; i < m; ++i) acc += r.weights[i] * std::pow(r.nodes[i], p);
      const double exact = (p % 2) ? 0.0 : 2.0 / (p + 1);
      CHECK(std::fabs(acc - exact) <= 1e-13 * 2);
    }
    for (std::size_t i = 1; i < m; ++i) CHECK(r.nodes[i] > r.nodes[i - 1]);
  }
}

TEST_CASE("Gauss-Jacobi") {
  auto gl = gauss_legendre(8);
  auto j0 = gauss_jacobi(8, 0.0);
  for (std::size_t i = 0; i < 8; ++i) {
    CHECK(std::fabs(j0.nodes[i] - (1 + gl.nodes[i]) / 2) <= 1e-13);
    CHECK(std::fabs(j0.weights[i] - gl.weights[i] / 2) <= 1e-13);
  }
  auto jh = gauss_jacobi(8, 0.5);
  double s = 0;
  for (double w : jh.weights) s += w;
  CHECK(std::fabs(s - 2.0 / 3) <= 1e-14);
  auto jm = gauss_jacobi(8, -0.5);
  s = 0;
  for (std::size_t i = 0; i < 8; ++i) s += jm.weights[i] * jm.nodes[i];
  CHECK(std::fabs(s - 2.0 / 3) <= 1e-13);
  CHECK_THROWS_AS(gauss_jacobi(4, -1.0), Error);
  for (double a : {-0.7, 0.0, 0.3, 2.5}) {
    auto r = gauss_jacobi(12, a);
    for (int p = 0; p <= 4; ++p) {
      double acc = 0;
      for (std::size_t i = 0; i < r.nodes.size(); ++i) acc += r.weights[i] * std::pow(r.nodes[i], p);
      CHECK(std::fabs(acc - 1.0 / (a + p + 1)) <= 1e-13 / (a + p + 1));
    }
    for (std::size_t i = 0; i < r.nodes.size(); ++i) {
      CHECK(r.nodes[i] > 0.0);
      CHECK(r.nodes[i] < 1.0);
      CHECK(r.weights[i] > 0.0);
    }
  }
}

TEST_CASE("Gauss-Chebyshev moments") {
  for (bool second : {false, true}) {
    auto r = gauss_chebyshev(20, second);
    const double pi = std::numbers::pi;
    const double m[5] = {second ? pi / 2 : pi, 0, second ? pi / 8 : pi / 2, 0, second ? pi / 16 : 3 * pi / 8};
    for (int p = 0; p <= 4; ++p) {
      double acc = 0;
      for (std::size_t i = 0; i < 20; ++i) acc += r.weights[i] * std::pow(r.nodes[i], p);
      CHECK(std::fabs(acc - m[p]) <= 1e-13 * pi);
    }
  }
}

TEST_CASE("principal-value transform") {
  const double r2 = std::numbers::sqrt2, pi = std::numbers::pi;
  for (double x : {-1.3, -0.4, 0.0, 0.77, 1.4}) {
    CHECK(std::fabs(pv_sqrt_transform({1.0}, x) + pi * x) <= 1e-12);
    // f(l) = l: coefficient sqrt2 on T_1(l/sqrt2).
    CHECK(std::fabs(pv_sqrt_transform({0.0, r2}, x) - pi * (1 - x * x)) <= 1e-12);
    // V = x^2, f = V' = 2l.
    const double lhs = pv_sqrt_transform({0.0, 2 * r2}, x);
    CHECK(std::fabs(lhs - (-2 * pi + 2 * pi * pi * (1 / pi) * (2 - x * x))) <= 1e-12);
  }
  // Symmetric-excision oracle for f(l) = l^3 - 0.5 l.
  auto f = [](double l) { return l * l * l - 0.5 * l; };
  const std::vector<double> c = chebyshev_fit([&](double t) { return f(r2 * t); }, 6);
  auto gl = gauss_legendre(200);
  for (double x : {-0.9, 0.3, 1.1}) {
    auto g = [&](double l) { return std::sqrt(2 - l * l) * f(l); };
    // pv = int (g(l)-g(x))/(l-x) + g(x) ln((sqrt2-x)/(sqrt2+x)), with the smooth part by panels.
    const double gx = g(x);
    auto sm = [&](double l) { return (g(l) - gx) / (l - x); };
    const double s1 = integrate_panels(gl, -r2, x, 8, sm) + integrate_panels(gl, x, r2, 8, sm);
    const double oracle = s1 + gx * std::log((r2 - x) / (r2 + x));
    CHECK(std::fabs(pv_sqrt_transform(c, x) - oracle) <= 1e-8);
  }
  CHECK_THROWS_AS(pv_sqrt_transform({1.0}, r2), Error);
}
