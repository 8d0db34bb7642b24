#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <boost/math/quadrature/tanh_sinh.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <boost/math/special_functions/hermite.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>
#include <cmath>
#include <functional>
#include <numbers>
#include <vector>

#include "edgewise/equilibrium.hpp"
#include "edgewise/errors.hpp"
#include "edgewise/fredholm.hpp"
#include "edgewise/hankel.hpp"
#include "edgewise/painleve.hpp"
#include "edgewise/quadrature.hpp"

using namespace edgewise;

namespace {

constexpr double kPi = std::numbers::pi;

/** \brief int_a^b f, split at lambda so that the singular point is always an endpoint. */
double split_integral(const std::function<double(double)>& f, double a, double b, double lambda) {
  boost::math::quadrature::tanh_sinh<double> ts;
  const double tol = 1e-15;
  if (lambda <= a || lambda >= b) return ts.integrate(f, a, b, tol);
  return ts.integrate(f, a, lambda, tol) + ts.integrate(f, lambda, b, tol);
}

/** \brief Moments int_{-8}^{hi} x^k w(x) dx for k < 2m. */
std::vector<double> moments(const FHWeight& w, int m, double hi = 8.0) {
  std::vector<double> mu(2 * m);
  for (int k = 0; k < 2 * m; ++k)
    mu[k] = split_integral([&](double x) { return std::pow(x, k) * w(x); }, -8.0, hi, w.lambda);
  return mu;
}

double hankel_det(const std::vector<double>& mu, int m) {
  Eigen::MatrixXd h(m, m);
  for (int j = 0; j < m; ++j)
    for (int k = 0; k < m; ++k) h(j, k) = mu[j + k];
  return h.determinant();
}

/** \brief Hankel determinant of the pure Gaussian e^{-n x^2} from closed-form moments. */
double gaussian_hankel(int n_scale, int m) {
  std::vector<double> mu(2 * m, 0.0);
  for (int k = 0; k < 2 * m; k += 2)
    mu[k] = boost::math::tgamma(k / 2.0 + 0.5) / std::pow(n_scale, k / 2.0 + 0.5);
  return hankel_det(mu, m);
}

/** \brief Monic coefficients c_0..c_{m-1} of the degree-m orthogonal polynomial from moments. */
Eigen::VectorXd monic_from_moments(const std::vector<double>& mu, int m) {
  Eigen::MatrixXd h(m, m);
  Eigen::VectorXd rhs(m);
  for (int j = 0; j < m; ++j) {
    for (int k = 0; k < m; ++k) h(j, k) = mu[j + k];
    rhs[j] = -mu[j + m];
  }
  return h.partialPivLu().solve(rhs);
}

double log_det_lu(const Eigen::MatrixXd& g) {
  Eigen::PartialPivLU<Eigen::MatrixXd> lu(g);
  double s = 0.0;
  for (Eigen::Index i = 0; i < g.rows(); ++i) s += std::log(std::fabs(lu.matrixLU()(i, i)));
  return s;
}

}  // namespace

TEST_CASE("hermite basis: orthonormality, parity and the classical Hermite polynomials") {
  const int ns = 10;
  const QuadratureRule gl = gauss_legendre(400);
  auto inner = [&](int j, int k) {
    return integrate(gl, -4.0, 4.0,
                     [&](double x) { return hermite_orthonormal(ns, j, x) * hermite_orthonormal(ns, k, x) * std::exp(-ns * x * x); });
  };
  CHECK(std::fabs(inner(0, 0) - 1.0) < 1e-13);
  CHECK(std::fabs(hermite_orthonormal(ns, 0, 0.3) - std::pow(ns / kPi, 0.25)) < 1e-15);
  CHECK(std::fabs(inner(3, 5)) < 1e-13);
  double worst = 0.0;
  for (int j = 0; j < 30; ++j)
    for (int k = 0; k <= j; ++k) worst = std::max(worst, std::fabs(inner(j, k) - (j == k ? 1.0 : 0.0)));
  CHECK(worst < 1e-12);
  for (int j = 0; j < 12; ++j) {
    const double p0 = hermite_orthonormal(ns, j, 0.0);
    if (j % 2) {
      CHECK(std::fabs(p0) < 1e-14);
    } else {
      const bool sign_ok = (j / 2) % 2 == 0 ? p0 > 0 : p0 < 0;
      CHECK(sign_ok);
    }
    for (double x : {-0.7, 0.2, 1.1}) {
      const double ref = std::pow(ns / kPi, 0.25) * boost::math::hermite(j, std::sqrt(ns) * x) /
                         std::sqrt(std::pow(2.0, j) * boost::math::tgamma(j + 1.0));
      CHECK(std::fabs(hermite_orthonormal(ns, j, x) - ref) < 1e-12 * (1 + std::fabs(ref)));
    }
  }
  CHECK(std::fabs(hermite_log_leading(ns, 7) -
                  std::log(std::pow(ns / kPi, 0.25) * std::pow(2.0 * std::sqrt(double(ns)), 7) /
                           std::sqrt(std::pow(2.0, 7) * 5040.0))) < 1e-12);
  CHECK_THROWS_AS(hermite_orthonormal(ns, 601, 0.0), Error);
}

TEST_CASE("gram matrix: Gaussian identity and the jump-only structure") {
  const Eigen::MatrixXd g = gram_matrix(FHWeight{0.37, 0.0, 1.0, 12});
  CHECK((g - Eigen::MatrixXd::Identity(12, 12)).cwiseAbs().maxCoeff() < 1e-12);

  const double beta = 2.6;
  const Eigen::MatrixXd gb = gram_matrix(FHWeight{0.2, 0.0, beta, 10});
  const Eigen::MatrixXd t = (gb - Eigen::MatrixXd::Identity(10, 10)) / (beta - 1.0);
  const Eigen::VectorXd ev = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(t).eigenvalues();
  CHECK(ev.minCoeff() > -1e-12);
  CHECK(ev.maxCoeff() < 1.0 + 1e-12);
  // T is the Gram of the half line, so T_00 is a normal tail probability.
  CHECK(std::fabs(t(0, 0) - 0.5 * std::erfc(std::sqrt(10.0) * 0.2)) < 1e-13);
}

TEST_CASE("gram matrix: closed-form |x| moments at n = 2") {
  const Eigen::MatrixXd g = gram_matrix(FHWeight{0.0, 1.0, 1.0, 2});
  // int |x|^{k+1} e^{-2x^2} dx = Gamma(k/2 + 1) / 2^{k/2 + 1} for even k.
  auto m = [](int k) { return boost::math::tgamma(k / 2.0 + 1.0) / std::pow(2.0, k / 2.0 + 1.0); };
  const double c = std::sqrt(2.0 / kPi);
  CHECK(std::fabs(g(0, 0) - c * m(0)) < 1e-12);
  CHECK(std::fabs(g(1, 1) - 4.0 * c * m(2)) < 1e-12);
  CHECK(std::fabs(g(0, 1)) < 1e-12);
  CHECK(std::fabs(g(1, 0)) < 1e-12);
}

TEST_CASE("gram matrix: general weight against an independent 50-digit oracle") {
  using mp = boost::multiprecision::cpp_bin_float_50;
  boost::math::quadrature::tanh_sinh<mp> ts;
  for (const FHWeight w : {FHWeight{0.8, 0.7, 1.4, 5}, FHWeight{-0.3, -0.45, 0.3, 6}, FHWeight{1.2, 2.5, 3.0, 7}}) {
    const Eigen::MatrixXd g = gram_matrix(w);
    const mp ns = w.n, lam = w.lambda;
    auto basis = [&](const mp& x) {
      std::vector<mp> p{pow(ns / boost::math::constants::pi<mp>(), mp(0.25))};
      p.push_back(x * p[0] * sqrt(2 * ns));
      for (int m = 1; m + 1 < w.n; ++m) p.push_back((x * p[m] - sqrt(m / (2 * ns)) * p[m - 1]) / sqrt((m + 1) / (2 * ns)));
      return p;
    };
    double worst = 0.0;
    for (int j = 0; j < w.n; ++j)
      for (int k = 0; k <= j; ++k) {
        auto f = [&](mp x) {
          const std::vector<mp> p = basis(x);
          mp om = pow(abs(x - lam), mp(w.alpha));
          if (x >= lam) om *= w.beta;
          return p[j] * p[k] * om * exp(-ns * x * x);
        };
        const mp ref = ts.integrate(f, mp(-8), lam) + ts.integrate(f, lam, mp(8));
        worst = std::max(worst, std::fabs(g(j, k) - static_cast<double>(ref)));
      }
    CHECK(worst < 1e-12);
  }
}

TEST_CASE("gram matrix: restriction to a half line") {
  const FHWeight w{0.8, 0.7, 1.4, 4};
  const Eigen::MatrixXd lo = gram_matrix(w, GramOptions{0, -std::numeric_limits<double>::infinity(), 1.1});
  const Eigen::MatrixXd hi = gram_matrix(w, GramOptions{0, 1.1});
  CHECK((lo + hi - gram_matrix(w)).cwiseAbs().maxCoeff() < 1e-13);
  const double ref = split_integral([&](double x) { return std::pow(hermite_orthonormal(4, 2, x), 2) * w(x); }, 1.1,
                                    8.0, w.lambda);
  CHECK(std::fabs(hi(2, 2) - ref) < 1e-12);
}

TEST_CASE("log ratio: Cholesky matches LU and the Hankel moment oracle") {
  CHECK(std::fabs(log_ratio(FHWeight{0.4, 0.0, 1.0, 20}).log_det) < 1e-12);
  CHECK(std::fabs(log_ratio(FHWeight{6.0, 0.0, 2.0, 4}).log_det) < 1e-8);

  for (const FHWeight w : {FHWeight{0.8, 0.7, 1.4, 16}, FHWeight{1.3, -0.5, 0.2, 40}, FHWeight{1.5, 1.5, 4.0, 64},
                           FHWeight{-1.0, 0.3, 2.0, 64}}) {
    const GramResult r = log_ratio(w);
    const double lu = log_det_lu(gram_matrix(w));
    CHECK(std::fabs(r.log_det - lu) < 1e-10 * std::max(1.0, std::fabs(lu)));
    CHECK(r.matrix_condition >= 1.0);
    CHECK(std::isfinite(r.log_det));
    Eigen::LLT<Eigen::MatrixXd> llt(gram_matrix(w));
    REQUIRE(llt.info() == Eigen::Success);
    CHECK(Eigen::MatrixXd(llt.matrixL()).diagonal().minCoeff() > 0.0);
  }

  const FHWeight w{0.8, 0.7, 1.4, 4};
  const double ref = std::log(hankel_det(moments(w, 4), 4) / gaussian_hankel(4, 4));
  CHECK(std::fabs(log_ratio(w).log_det - ref) < 1e-10);
}

TEST_CASE("op data: Gaussian closed forms") {
  for (int n = 1; n <= 64; ++n) {
    const OPData d = op_data(FHWeight{0.25, 0.0, 1.0, n});
    // kappa_{n,n} = (n/pi)^{1/4} (2n)^{n/2} / sqrt(n!).
    const double log_kappa = 0.25 * std::log(n / kPi) + 0.5 * n * std::log(2.0 * n) - 0.5 * std::lgamma(n + 1.0);
    CHECK(std::fabs(d.log_kappa_n - log_kappa) < 1e-10);
    CHECK(std::fabs(d.kappa_n / std::exp(log_kappa) - 1.0) < 1e-10);
    CHECK(std::fabs(d.delta_nn) < 1e-10);
    CHECK(std::fabs(d.gamma_nn + (n - 1) / 4.0) < 1e-10 * n);
  }
}

TEST_CASE("op data: moment oracle for a deformed weight") {
  const FHWeight w{0.8, 0.7, 1.4, 4};
  const std::vector<double> mu = moments(w, 5);
  const Eigen::VectorXd c = monic_from_moments(mu, 4);
  const OPData d = op_data(w);
  CHECK(std::fabs(d.delta_nn - c[3]) < 1e-10);
  CHECK(std::fabs(d.gamma_nn - c[2]) < 1e-10);
  // kappa_{n,n}^2 = D_n / D_{n+1}.
  CHECK(std::fabs(2.0 * d.log_kappa_n - std::log(hankel_det(mu, 4) / hankel_det(mu, 5))) < 1e-9);
  CHECK(std::fabs(2.0 * d.log_kappa_n1 - std::log(hankel_det(mu, 3) / hankel_det(mu, 4))) < 1e-9);
}

TEST_CASE("derivative identity in lambda is exact at finite n") {
  for (const FHWeight w : {FHWeight{1.0, 0.5, 1.0, 6}, FHWeight{1.0, 0.0, 2.0, 6}, FHWeight{-0.4, 1.2, 0.6, 9}}) {
    const A9Check c = check_a9(w, 1e-4);
    CHECK(c.residual <= 1e-5 * (1.0 + std::fabs(c.exact)));
  }
  const A9Check z = check_a9(FHWeight{0.6, 0.0, 1.0, 6}, 1e-4);
  CHECK(std::fabs(z.fd) < 1e-9);
  CHECK(std::fabs(z.exact) < 1e-9);
  CHECK_THROWS_AS(check_a9(FHWeight{1.0, 0.5, 1.0, 6}, 1e-2), Error);
}

TEST_CASE("finite Fredholm determinant: limits and the factorization identity") {
  const FHWeight w{0.8, 0.7, 1.4, 4};
  CHECK(std::fabs(finite_fredholm(w, 10.0) - 1.0) < 1e-14);
  CHECK(std::fabs(finite_fredholm(w, -10.0)) < 1e-12);
  const double f = finite_fredholm(w, 1.1);
  const double cut = hankel_det(moments(w, 4, 1.1), 4);
  const double full = hankel_det(moments(w, 4), 4);
  CHECK(std::fabs(full * f - cut) <= 1e-8 * std::fabs(cut));
  CHECK_THROWS_AS(finite_fredholm(FHWeight{0.0, 0.0, 1.0, 129}, 0.0), Error);
}

TEST_CASE("reproducing kernel: projection, trace and the Airy edge limit") {
  const FHWeight w{0.3, 0.7, 1.4, 8};
  const FiniteKernel k(w);
  for (auto [x, y] : {std::pair{0.1, -0.5}, std::pair{0.9, 0.9}, std::pair{-1.0, 1.3}}) {
    const double rep = split_integral([&](double t) { return k(x, t) * k(t, y); }, -8.0, 8.0, w.lambda);
    CHECK(std::fabs(rep - k(x, y)) < 1e-8);
  }
  const double trace = split_integral([&](double t) { return k(t, t); }, -8.0, 8.0, w.lambda);
  CHECK(std::fabs(trace - 8.0) < 1e-8);
  CHECK(std::fabs(kernel_Kn(w, 0.1, -0.5) - k(0.1, -0.5)) < 1e-15);
  CHECK_THROWS_AS(kernel_Kn(FHWeight{0.3, -0.5, 1.0, 4}, 0.3, 0.0), Error);

  const int n = 128;
  const double scale = std::pow(n * std::pow(2.0, 0.75), 2.0 / 3.0);
  const FiniteKernel edge(FHWeight{lambda_edge(0.0, n), 0.0, 1.0, n});
  double dev = 0.0;
  for (int i = -2; i <= 2; ++i)
    for (int j = -2; j <= 2; ++j) {
      const double x = std::sqrt(2.0) + i / scale, y = std::sqrt(2.0) + j / scale;
      dev = std::max(dev, std::fabs(edge(x, y) / scale - airy_kernel(i, j)));
    }
  CHECK(dev <= 0.05);
}

TEST_CASE("edge placement round trip") {
  const Potential v = Potential::quadratic();
  for (double s : {-2.0, 0.0, 1.5})
    for (int n : {32, 400}) {
      CHECK(std::fabs(lambda_edge(s, n) - lambda_n(v, s, n, 0.0)) < 1e-14);
    }
}

TEST_CASE("sigma_0 integral reproduces Tracy-Widom") {
  for (double s : {-3.0, -1.0, 0.0, 2.0})
    CHECK(std::fabs(std::exp(-sigma0_integral(0.0, s)) - tw2(s, Tw2Route::fredholm)) < 1e-9);
  CHECK(std::fabs(sigma0_integral(1.0, -2.0)) < 1e-12);
}

TEST_CASE("ratio with a pure jump converges to the sigma_0 integral") {
  double prev = 1e9;
  for (int n : {64, 128, 256}) {
    const RatioCheck c = check_jump_ratio(0.5, 0.0, n);
    CHECK(c.defect < prev);
    prev = c.defect;
  }
  CHECK(prev <= 0.05);
}

TEST_CASE("root-type singularity: remainder trend and its slope") {
  for (const TrendRow& r : check_e21_trend(0.0, 1.7, 0.5, {32, 64})) {
    CHECK(r.log_ratio == 0.0);
    CHECK(r.remainder == 0.0);
  }
  const std::vector<TrendRow> rows = check_e21_trend(0.6, 1.0, 0.0, {64, 128, 256});
  CHECK(std::fabs(rows[2].remainder - rows[1].remainder) < std::fabs(rows[1].remainder - rows[0].remainder));
  for (const TrendRow& r : rows) CHECK(std::fabs(r.log_ratio - r.predicted - r.remainder) < 1e-12);
  const SlopeCheck slope = check_root_slope(0.6, 1.0, 0.0, 256);
  CHECK(slope.residual <= 0.1);
  CHECK_THROWS_AS(check_e21_trend(0.6, 1.0, 0.0, {16}), Error);
}

TEST_CASE("gap probability slope against sigma_alpha(s, 0)") {
  CHECK(check_e25(0.0, 0.0, 128).residual <= 0.1);
  const SlopeCheck far = check_e25(0.0, 3.0, 128);
  CHECK(std::fabs(far.fd) < 1e-3);
  CHECK(far.residual <= 1e-3);
  CHECK(check_e25(0.5, 0.0, 256).residual <= 0.15);
  CHECK_THROWS_AS(check_e25(0.5, 0.0, 300), Error);
}

TEST_CASE("delta expansion: correction brackets vanish for the Gaussian model") {
  for (double s : {-2.0, 0.0, 1.0}) {
    const SpecconData m = speccon(s);
    const DeltaBrackets d = delta_brackets(0.0, s, m.a, m.b, s / 2, m.q1_21, m.q2_12);
    CHECK(std::fabs(d.c0) < 1e-15);
    CHECK(std::fabs(d.c1) < 1e-14);
    CHECK(std::fabs(d.c2) < 1e-14);
    CHECK(std::fabs(d.c3) < 1e-12);
    const DeltaBrackets lax = delta_brackets_lax(0.0, 1.0, s);
    CHECK(std::fabs(lax.c1) < 1e-9);
    CHECK(std::fabs(op_data(FHWeight{lambda_edge(s, 64), 0.0, 1.0, 64}).delta_nn) < 1e-10);
  }
  CHECK_THROWS_AS(delta_brackets_lax(0.0, 1.0, 0.0).predict(64, 3), Error);
}

TEST_CASE("delta expansion: finite-n agreement improves with n") {
  const DeltaBrackets b = delta_brackets_lax(0.5, 1.0, 0.0);
  std::vector<double> err;
  for (int n : {32, 64, 128}) {
    const double d = std::sqrt(2.0) * op_data(FHWeight{lambda_edge(0.0, n), 0.5, 1.0, n}).delta_nn;
    const double e1 = std::fabs(d - b.predict(n, 1)), e2 = std::fabs(d - b.predict(n, 2));
    CHECK(e2 < e1);
    err.push_back(e2);
  }
  CHECK(err[1] < err[0]);
  CHECK(err[2] < err[1]);
  // Next omitted order is 1/n.
  CHECK(err[1] / err[2] > 1.6);
}

TEST_CASE("weight validation") {
  CHECK_THROWS_AS(gram_matrix(FHWeight{0.0, -1.0, 1.0, 4}), Error);
  CHECK_THROWS_AS(gram_matrix(FHWeight{0.0, 0.5, 0.0, 4}), Error);
  CHECK_THROWS_AS(gram_matrix(FHWeight{0.0, 0.5, -1.0, 4}), Error);
  CHECK_THROWS_AS(gram_matrix(FHWeight{0.0, 0.5, 1.0, 0}), Error);
  CHECK_THROWS_AS(gram_matrix(FHWeight{0.0, 0.5, 1.0, 400}), Error);
  try {
    gram_matrix(FHWeight{0.0, -2.0, 1.0, 4});
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::domain);
  }
  const FHWeight w{0.5, 0.5, 2.0, 3};
  CHECK(w.omega(0.25) == doctest::Approx(std::sqrt(0.25)));
  CHECK(w.omega(0.75) == doctest::Approx(2.0 * std::sqrt(0.25)));
  CHECK(w(0.75) == doctest::Approx(2.0 * 0.5 * std::exp(-3 * 0.5625)));
}
