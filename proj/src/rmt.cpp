#include "edgewise/rmt.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <thread>

#include "edgewise/equilibrium.hpp"
#include "edgewise/errors.hpp"
#include "edgewise/hankel.hpp"
#include "edgewise/painleve.hpp"
#include "edgewise/quadrature.hpp"

namespace edgewise {

namespace {

std::uint64_t splitmix64(std::uint64_t& x) {
  std::uint64_t z = (x += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

/** \brief Neumaier-compensated running sum. */
struct CompensatedSum {
  double sum = 0.0, c = 0.0;
  void add(double v) {
    const double t = sum + v;
    c += std::fabs(sum) >= std::fabs(v) ? (sum - t) + v : (v - t) + sum;
    sum = t;
  }
  double value() const { return sum + c; }
};

}  // namespace

Xoshiro256::Xoshiro256(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t a = seed, b = ~stream;
  const std::uint64_t mix = splitmix64(b);
  a ^= mix;
  for (auto& s : s_) s = splitmix64(a);
}

Xoshiro256::result_type Xoshiro256::operator()() {
  const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
  const std::uint64_t t = s_[1] << 17;
  s_[2] ^= s_[0];
  s_[3] ^= s_[1];
  s_[1] ^= s_[2];
  s_[0] ^= s_[3];
  s_[2] ^= t;
  s_[3] = rotl(s_[3], 45);
  return result;
}

TridiagSample sample_tridiag(int n, std::uint64_t seed, std::uint64_t stream) {
  if (n < 2) fail(ErrorKind::domain, "sample_tridiag requires n >= 2");
  Xoshiro256 rng(seed, stream);
  std::normal_distribution<double> normal(0.0, 1.0);
  TridiagSample t;
  t.n = n;
  t.seed = seed;
  t.stream = stream;
  t.diag.resize(n);
  t.offdiag.resize(n - 1);
  const double scale = 1.0 / std::sqrt(2.0 * n);
  for (int i = 0; i < n; ++i) t.diag[i] = normal(rng) * scale;
  // chi_{2k} / sqrt2 = sqrt(Gamma(k, 1)), k = n-1 down to 1.
  for (int i = 0; i < n - 1; ++i) {
    std::gamma_distribution<double> gam(static_cast<double>(n - 1 - i), 1.0);
    t.offdiag[i] = std::sqrt(gam(rng)) * scale;
  }
  return t;
}

int sturm_count(const TridiagSample& t, double x) {
  const double tiny = std::numeric_limits<double>::min() / std::numeric_limits<double>::epsilon();
  int count = 0;
  double q = t.diag[0] - x;
  for (int i = 0;; ++i) {
    if (q == 0.0) q = -tiny;
    if (q < 0) ++count;
    if (i + 1 >= t.n) break;
    q = (t.diag[i + 1] - x) - t.offdiag[i] * t.offdiag[i] / q;
  }
  return count;
}

double lambda_max(const TridiagSample& t) {
  if (t.n < 1 || static_cast<int>(t.diag.size()) != t.n || static_cast<int>(t.offdiag.size()) != t.n - 1)
    fail(ErrorKind::domain, "lambda_max requires a consistent tridiagonal sample");
  double lo = t.diag[0], hi = t.diag[0];
  for (int i = 0; i < t.n; ++i) {
    const double r = (i > 0 ? std::fabs(t.offdiag[i - 1]) : 0.0) + (i + 1 < t.n ? std::fabs(t.offdiag[i]) : 0.0);
    lo = std::min(lo, t.diag[i] - r);
    hi = std::max(hi, t.diag[i] + r);
  }
  const double pad = 1e-12 * std::max(1.0, std::fabs(hi) + std::fabs(lo));
  lo -= pad;
  hi += pad;
  if (sturm_count(t, hi) != t.n || sturm_count(t, lo) != 0)
    fail(ErrorKind::numerical, "Gershgorin bracket does not enclose the spectrum");
  for (int it = 0; it < 200 && hi - lo > 2e-12; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (sturm_count(t, mid) == t.n)
      hi = mid;
    else
      lo = mid;
  }
  return 0.5 * (lo + hi);
}

double edge_rescale(double lmax, int n) {
  return (lmax - std::sqrt(2.0)) * std::pow(n * std::pow(2.0, 0.75), 2.0 / 3.0);
}

void parallel_for(int count, int threads, const std::function<void(int)>& body) {
  threads = std::max(1, std::min(threads, count));
  if (threads == 1) {
    for (int i = 0; i < count; ++i) body(i);
    return;
  }
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(threads);
  for (int w = 0; w < threads; ++w)
    pool.emplace_back([&, w] {
      try {
        for (int i = w; i < count; i += threads) body(i);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  for (auto& th : pool) th.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

EdgeSampleSet sample_edge(int n, int count, std::uint64_t seed, int threads) {
  if (count < 1) fail(ErrorKind::domain, "sample_edge requires count >= 1");
  EdgeSampleSet set;
  set.n = n;
  set.count = count;
  set.seed = seed;
  set.s_values.assign(count, 0.0);
  parallel_for(count, threads, [&](int i) {
    set.s_values[i] = edge_rescale(lambda_max(sample_tridiag(n, seed, static_cast<std::uint64_t>(i))), n);
  });
  return set;
}

double ks_statistic(std::vector<double> values, const std::function<double(double)>& cdf) {
  if (values.empty()) fail(ErrorKind::domain, "ks_statistic requires a non-empty sample");
  std::sort(values.begin(), values.end());
  const double N = static_cast<double>(values.size());
  double d = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double f = cdf(values[i]);
    d = std::max({d, (i + 1) / N - f, f - i / N});
  }
  return d;
}

double ks_vs_tw2(const EdgeSampleSet& samples) {
  if (samples.s_values.size() < 500) fail(ErrorKind::domain, "ks_vs_tw2 requires at least 500 samples");
  // F_2(-8) is below 1e-20, so the lower cut is immaterial.
  return ks_statistic(samples.s_values, [](double s) { return s < -8.0 ? 0.0 : tw2(s, Tw2Route::sigma); });
}

double tw2_mean() {
  static const QuadratureRule gl = gauss_legendre(40);
  const double upper = integrate_panels(gl, 0.0, 12.0, 6, [](double s) { return 1.0 - tw2(s, Tw2Route::sigma); });
  const double lower = integrate_panels(gl, -8.0, 0.0, 8, [](double s) { return tw2(s, Tw2Route::sigma); });
  return upper - lower;
}

SampleStats sample_stats(const std::vector<double>& x) {
  if (x.size() < 3) fail(ErrorKind::domain, "sample_stats requires at least 3 values");
  const double N = static_cast<double>(x.size());
  CompensatedSum s1;
  for (double v : x) s1.add(v);
  const double mean = s1.value() / N;
  CompensatedSum s2, s3;
  for (double v : x) {
    const double d = v - mean;
    s2.add(d * d);
    s3.add(d * d * d);
  }
  SampleStats st;
  st.mean = mean;
  st.var = s2.value() / (N - 1);
  const double m2 = s2.value() / N;
  st.skew = m2 > 0 ? (s3.value() / N) / std::pow(m2, 1.5) : 0.0;
  return st;
}

Eigen::MatrixXcd sample_gue(int n, Xoshiro256& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  const double sd_diag = std::sqrt(1.0 / (2.0 * n)), sd_off = std::sqrt(1.0 / (4.0 * n));
  Eigen::MatrixXcd m(n, n);
  for (int j = 0; j < n; ++j) {
    m(j, j) = normal(rng) * sd_diag;
    for (int i = j + 1; i < n; ++i) {
      const double re = normal(rng) * sd_off;
      const double im = normal(rng) * sd_off;
      m(i, j) = {re, im};
      m(j, i) = {re, -im};
    }
  }
  return m;
}

double log_abs_det_shifted(const Eigen::MatrixXcd& m, double lambda) {
  const Eigen::Index n = m.rows();
  Eigen::PartialPivLU<Eigen::MatrixXcd> lu(m - lambda * Eigen::MatrixXcd::Identity(n, n));
  CompensatedSum acc;
  for (Eigen::Index i = 0; i < n; ++i) {
    const double a = std::abs(lu.matrixLU()(i, i));
    if (a == 0.0) fail(ErrorKind::numerical, "singular LU pivot");
    acc.add(std::log(a));
  }
  return acc.value();
}

CltResult clt_logdet(int n, double s, int sample_count, std::uint64_t seed, int threads) {
  if (n < 2 || n > 2048) fail(ErrorKind::domain, "clt_logdet requires 2 <= n <= 2048");
  if (sample_count < 3 || sample_count > 1000) fail(ErrorKind::domain, "clt_logdet requires 3 <= samples <= 1000");
  const EdgeConstants ec = edge_constants(compute_equilibrium(Potential::quadratic()), s);
  const double lam = lambda_edge(s, n);
  const double centre = n * ec.rho1 + s * ec.rho2 * std::cbrt(n);
  const double norm = std::sqrt(3.0 / std::log(n));
  CltResult r;
  r.n = n;
  r.s = s;
  r.seed = seed;
  r.x.assign(sample_count, 0.0);
  r.logdet.assign(sample_count, 0.0);
  parallel_for(sample_count, threads, [&](int i) {
    Xoshiro256 rng(seed, static_cast<std::uint64_t>(i));
    const Eigen::MatrixXcd m = sample_gue(n, rng);
    double ld;
    try {
      ld = log_abs_det_shifted(m, lam);
    } catch (const Error&) {
      ld = log_abs_det_shifted(m, lam * (1 + 1e-14));
    }
    r.logdet[i] = ld;
    r.x[i] = norm * (ld - centre);
  });
  r.stats = sample_stats(r.x);
  return r;
}

}  // namespace edgewise
