#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <vector>

#include <Eigen/Dense>

namespace edgewise {

/** \brief xoshiro256** generator; the state is seeded by splitmix64 from (seed, stream). */
class Xoshiro256 {
 public:
  using result_type = std::uint64_t;
  explicit Xoshiro256(std::uint64_t seed, std::uint64_t stream = 0);
  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }
  result_type operator()();

 private:
  std::uint64_t s_[4];
};

/** \brief Tridiagonal model whose eigenvalues have density prop. to |Delta|^2 e^{-n sum x^2}. */
struct TridiagSample {
  std::vector<double> diag;
  std::vector<double> offdiag;
  int n = 0;
  std::uint64_t seed = 0;
  std::uint64_t stream = 0;
};

TridiagSample sample_tridiag(int n, std::uint64_t seed, std::uint64_t stream = 0);

/** \brief Number of eigenvalues below x by the Sturm sequence. */
int sturm_count(const TridiagSample& t, double x);

/** \brief Largest eigenvalue by Sturm bisection from the Gershgorin bracket. */
double lambda_max(const TridiagSample& t);

/** \brief (lmax - sqrt2) (n 2^{3/4})^{2/3}. */
double edge_rescale(double lmax, int n);

struct EdgeSampleSet {
  std::vector<double> s_values;
  int n = 0;
  int count = 0;
  std::uint64_t seed = 0;
};

/** \brief Edge-rescaled top eigenvalues; sample i uses stream i, so the result is thread-count independent. */
EdgeSampleSet sample_edge(int n, int count, std::uint64_t seed, int threads = 1);

/** \brief sup |F_emp - F| for a sample and a continuous CDF. */
double ks_statistic(std::vector<double> values, const std::function<double(double)>& cdf);

/** \brief Kolmogorov-Smirnov distance between the edge sample and F_2. */
double ks_vs_tw2(const EdgeSampleSet& samples);

/** \brief Mean of the F_2 law. */
double tw2_mean();

/** \brief Mean, variance and skewness with compensated summation. */
struct SampleStats {
  double mean = 0.0;
  double var = 0.0;
  double skew = 0.0;
};
SampleStats sample_stats(const std::vector<double>& x);

/** \brief Hermitian matrix with density prop. to e^{-n tr M^2}. */
Eigen::MatrixXcd sample_gue(int n, Xoshiro256& rng);

/** \brief ln |det(M - lambda I)| by LU pivots. */
double log_abs_det_shifted(const Eigen::MatrixXcd& m, double lambda);

struct CltResult {
  SampleStats stats;
  std::vector<double> x;       ///< normalized samples X_n
  std::vector<double> logdet;  ///< ln |det(M - lambda_n)| per sample
  int n = 0;
  double s = 0.0;
  std::uint64_t seed = 0;
};

/** \brief Normalized log characteristic polynomial at lambda_edge(s, n) over dense samples. */
CltResult clt_logdet(int n, double s, int sample_count, std::uint64_t seed, int threads = 1);

/** \brief Runs body(i) for i in [0, count) on the given number of threads. */
void parallel_for(int count, int threads, const std::function<void(int)>& body);

}  // namespace edgewise
