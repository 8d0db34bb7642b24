#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "edgewise/equilibrium.hpp"
#include "edgewise/errors.hpp"
#include "edgewise/painleve.hpp"
#include "edgewise/rmt.hpp"

using namespace edgewise;

namespace {

Eigen::VectorXd tridiag_eigenvalues(const TridiagSample& t) {
  Eigen::VectorXd d = Eigen::Map<const Eigen::VectorXd>(t.diag.data(), t.n);
  Eigen::VectorXd e = Eigen::Map<const Eigen::VectorXd>(t.offdiag.data(), t.n - 1);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
  es.computeFromTridiagonal(d, e, Eigen::EigenvaluesOnly);
  return es.eigenvalues();
}

double two_sample_ks(std::vector<double> a, std::vector<double> b) {
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < a.size() && j < b.size()) {
    const double x = std::min(a[i], b[j]);
    while (i < a.size() && a[i] <= x) ++i;
    while (j < b.size() && b[j] <= x) ++j;
    d = std::max(d, std::fabs(double(i) / a.size() - double(j) / b.size()));
  }
  return d;
}

double semicircle_cdf(double x) {
  if (x <= -std::numbers::sqrt2) return 0.0;
  if (x >= std::numbers::sqrt2) return 1.0;
  return 0.5 + (0.5 * x * std::sqrt(2.0 - x * x) + std::asin(x / std::numbers::sqrt2)) / std::numbers::pi;
}

double tw2_inverse(double u) {
  double lo = -8.0, hi = 8.0;
  for (int it = 0; it < 60; ++it) {
    const double mid = 0.5 * (lo + hi);
    (tw2(mid, Tw2Route::sigma) < u ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

TEST_CASE("generator: seeded streams are reproducible and distinct") {
  Xoshiro256 a(42, 3), b(42, 3), c(42, 4), d(43, 3);
  bool differs_stream = false, differs_seed = false;
  for (int i = 0; i < 100; ++i) {
    const auto va = a(), vb = b(), vc = c(), vd = d();
    CHECK(va == vb);
    differs_stream |= va != vc;
    differs_seed |= va != vd;
  }
  CHECK(differs_stream);
  CHECK(differs_seed);
  const TridiagSample s1 = sample_tridiag(64, 9, 2), s2 = sample_tridiag(64, 9, 2);
  CHECK(s1.diag == s2.diag);
  CHECK(s1.offdiag == s2.offdiag);
}

TEST_CASE("tridiagonal sample: shape, positivity and centring") {
  const TridiagSample t = sample_tridiag(10, 1, 0);
  CHECK(t.diag.size() == 10);
  CHECK(t.offdiag.size() == 9);
  for (double b : t.offdiag) CHECK(b > 0.0);
  const int n = 4, draws = 2500;
  double sum = 0.0;
  for (int i = 0; i < draws; ++i)
    for (double v : sample_tridiag(n, 5, i).diag) sum += v;
  const double count = double(n) * draws;
  CHECK(std::fabs(sum / count) < 3.0 * std::sqrt(1.0 / (2.0 * n) / count));
  CHECK_THROWS_AS(sample_tridiag(1, 0), Error);
}

TEST_CASE("tridiagonal sample: n = 2 law against rejection sampling") {
  std::vector<double> tri;
  for (int i = 0; i < 10000; ++i) tri.push_back(lambda_max(sample_tridiag(2, 77, i)));
  // Proposal e^{-2 x^2} per coordinate, acceptance (x1 - x2)^2 / 16.
  std::mt19937_64 gen(12345);
  std::normal_distribution<double> prop(0.0, 0.5);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::vector<double> rej;
  while (rej.size() < 100000) {
    const double x1 = prop(gen), x2 = prop(gen);
    if (unif(gen) < (x1 - x2) * (x1 - x2) / 16.0) rej.push_back(std::max(x1, x2));
  }
  CHECK(two_sample_ks(tri, rej) <= 0.02);
}

TEST_CASE("tridiagonal sample: bulk follows the semicircle") {
  std::vector<double> ev;
  for (int i = 0; i < 20; ++i) {
    const Eigen::VectorXd e = tridiag_eigenvalues(sample_tridiag(512, 3, i));
    ev.insert(ev.end(), e.data(), e.data() + e.size());
  }
  CHECK(ks_statistic(ev, semicircle_cdf) <= 0.03);
}

TEST_CASE("largest eigenvalue by Sturm bisection") {
  TridiagSample t;
  t.n = 2;
  t.diag = {0.0, 0.0};
  t.offdiag = {1.0};
  CHECK(std::fabs(lambda_max(t) - 1.0) < 1e-11);
  t.n = 3;
  t.diag = {2.0, 1.0, 0.0};
  t.offdiag = {1e-14, 1e-14};
  CHECK(std::fabs(lambda_max(t) - 2.0) < 1e-11);
  CHECK(sturm_count(t, 1.5) == 2);
  double worst = 0.0;
  for (int i = 0; i < 50; ++i) {
    const TridiagSample r = sample_tridiag(50, 2024, i);
    worst = std::max(worst, std::fabs(lambda_max(r) - tridiag_eigenvalues(r).maxCoeff()));
  }
  CHECK(worst < 1e-9);
  TridiagSample bad;
  bad.n = 3;
  bad.diag = {0.0, 0.0};
  CHECK_THROWS_AS(lambda_max(bad), Error);
}

TEST_CASE("edge rescaling") {
  CHECK(edge_rescale(std::sqrt(2.0), 400) == 0.0);
  CHECK(std::fabs(edge_rescale(std::sqrt(2.0) + 0.1, 400) - 0.1 * std::pow(400 * std::pow(2.0, 0.75), 2.0 / 3.0)) <
        1e-12);
  for (double s : {-3.0, 0.5, 2.0})
    CHECK(std::fabs(edge_rescale(lambda_n(Potential::quadratic(), s, 400, 0.0), 400) - s) < 1e-11);
}

TEST_CASE("KS distance: inverse-CDF self test") {
  std::mt19937_64 gen(99);
  std::uniform_real_distribution<double> unif(1e-9, 1 - 1e-9);
  EdgeSampleSet set;
  for (int i = 0; i < 1000; ++i) set.s_values.push_back(tw2_inverse(unif(gen)));
  set.count = 1000;
  CHECK(ks_vs_tw2(set) <= 1.36 / std::sqrt(1000.0));
  set.s_values.resize(100);
  CHECK_THROWS_AS(ks_vs_tw2(set), Error);
}

TEST_CASE("edge law: KS distance, finite-size ordering and the mean") {
  const EdgeSampleSet e400 = sample_edge(400, 4000, 7);
  const EdgeSampleSet e100 = sample_edge(100, 4000, 7);
  const double ks400 = ks_vs_tw2(e400), ks100 = ks_vs_tw2(e100);
  CHECK(ks400 <= 0.03);
  CHECK(ks400 <= ks100 + 0.01);
  CHECK(std::fabs(tw2_mean() + 1.7710868074) < 1e-6);
  CHECK(std::fabs(sample_stats(e400.s_values).mean - tw2_mean()) <= 0.1);
  const EdgeSampleSet threaded = sample_edge(400, 200, 7, 3);
  for (int i = 0; i < 200; ++i) CHECK(threaded.s_values[i] == e400.s_values[i]);
}

TEST_CASE("sample statistics with compensated summation") {
  std::vector<double> x{1e16, 1.0, -1e16, 1.0, 2.0, 3.0};
  const SampleStats st = sample_stats(x);
  CHECK(st.mean == doctest::Approx(7.0 / 6.0));
  const SampleStats sym = sample_stats({-1.0, 0.0, 1.0});
  CHECK(sym.mean == 0.0);
  CHECK(sym.var == doctest::Approx(1.0));
  CHECK(sym.skew == 0.0);
  CHECK_THROWS_AS(sample_stats({1.0}), Error);
}

TEST_CASE("dense model and the log characteristic polynomial") {
  Xoshiro256 rng(5);
  const Eigen::MatrixXcd m = sample_gue(6, rng);
  CHECK((m - m.adjoint()).cwiseAbs().maxCoeff() == 0.0);
  const Eigen::VectorXd ev = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd>(m).eigenvalues();
  double ref = 0.0;
  for (int i = 0; i < 6; ++i) ref += std::log(std::fabs(ev[i] - 0.3));
  CHECK(std::fabs(log_abs_det_shifted(m, 0.3) - ref) < 1e-12);

  // E tr M^2 = n^2 / (2n) under e^{-n tr M^2}.
  double tr = 0.0;
  for (int i = 0; i < 400; ++i) {
    Xoshiro256 g(8, i);
    tr += sample_gue(8, g).squaredNorm();
  }
  CHECK(std::fabs(tr / 400 - 4.0) < 0.2);

  const EdgeConstants ec = edge_constants(compute_equilibrium(Potential::quadratic()), 0.0);
  CHECK(std::fabs(ec.rho1 - (1 - std::log(2.0)) / 2) < 1e-12);
  CHECK(std::fabs(ec.rho2 - 1.0) < 1e-12);

  const CltResult a = clt_logdet(48, 0.0, 40, 3), b = clt_logdet(48, 0.0, 40, 3, 2);
  CHECK(a.x == b.x);
  CHECK(a.stats.mean == b.stats.mean);
  CHECK(std::isfinite(a.stats.skew));
  CHECK_THROWS_AS(clt_logdet(4096, 0.0, 10, 1), Error);
  CHECK_THROWS_AS(clt_logdet(64, 0.0, 2000, 1), Error);
}
