#pragma once

#include <limits>
#include <vector>

#include <Eigen/Dense>

namespace edgewise {

/** \brief Fisher-Hartwig weight omega_{alpha beta}(x - lambda) e^{-n x^2} with real beta > 0. */
struct FHWeight {
  double lambda = 0.0;
  double alpha = 0.0;
  double beta = 1.0;
  int n = 1;

  void validate() const;
  /** \brief |x - lambda|^alpha, times beta for x >= lambda. */
  double omega(double x) const;
  double operator()(double x) const;
};

struct GramResult {
  int n = 0;
  double log_det = 0.0;
  double matrix_condition = 1.0;
};

/** \brief Leading data of the degree-n orthonormal polynomial kappa (x^n + delta x^{n-1} + gamma x^{n-2} + ...). */
struct OPData {
  double kappa_n = 0.0;      ///< kappa_{n,n}
  double kappa_n1 = 0.0;     ///< kappa_{n-1,n}
  double log_kappa_n = 0.0;
  double log_kappa_n1 = 0.0;
  double delta_nn = 0.0;
  double gamma_nn = 0.0;
};

/** \brief Orthonormal polynomial p_j for the weight e^{-n_scale x^2}. */
double hermite_orthonormal(int n_scale, int j, double x);

/** \brief Leading coefficient of hermite_orthonormal(n_scale, j, .), as a logarithm. */
double hermite_log_leading(int n_scale, int j);

/** \brief Restriction and size of a Gram assembly. */
struct GramOptions {
  int size = 0;  ///< 0 selects w.n
  double lo = -std::numeric_limits<double>::infinity();
  double hi = std::numeric_limits<double>::infinity();
  bool check = true;  ///< compare against a run with halved panels
};

/** \brief G_jk = int_lo^hi p_j p_k omega(x - lambda) e^{-n x^2} dx in the Hermite basis. */
Eigen::MatrixXd gram_matrix(const FHWeight& w, const GramOptions& opts = {});

/** \brief ln D_n(lambda, alpha, beta) - ln D_n(lambda, 0, 1) from the Cholesky factor of G. */
GramResult log_ratio(const FHWeight& w);

/** \brief kappa, delta, gamma of the degree-n orthonormal polynomial from the (n+1)-section. */
OPData op_data(const FHWeight& w);

struct A9Check {
  double fd = 0.0;     ///< central difference of lambda -> ln D_n
  double exact = 0.0;  ///< 2 n delta_{n,n}
  double residual = 0.0;
};

/** \brief Compares d/dlambda ln D_n with 2 n delta_{n,n}. */
A9Check check_a9(const FHWeight& w, double h);

/** \brief det[delta_jk - int_c^inf psi_j psi_k dx], j, k < n. */
double finite_fredholm(const FHWeight& w, double c);

/** \brief Christoffel-Darboux kernel of the weight, with the weight's square root on both sides. */
class FiniteKernel {
 public:
  explicit FiniteKernel(const FHWeight& w);
  double operator()(double x, double y) const;
  /** \brief psi_0..psi_{n-1} at x. */
  Eigen::VectorXd psi(double x) const;

 private:
  FHWeight w_;
  Eigen::MatrixXd l_;  ///< Cholesky factor of the n-section
};

double kernel_Kn(const FHWeight& w, double x, double y);

/** \brief sqrt2 + s / (n 2^{3/4})^{2/3}. */
double lambda_edge(double s, int n);

struct TrendRow {
  int n = 0;
  double log_ratio = 0.0;  ///< ln D_n(alpha, beta) / D_n(0, beta) at lambda_edge(s, n)
  double predicted = 0.0;  ///< n alpha (1 - ln2)/2 + alpha s n^{1/3} + (alpha^2/6) ln n
  double remainder = 0.0;
};

std::vector<TrendRow> check_e21_trend(double alpha, double beta, double s, const std::vector<int>& n_list);

struct SlopeCheck {
  double fd = 0.0;
  double reference = 0.0;
  double residual = 0.0;
};

/** \brief s-derivative of the remainder r_n against sigma_alpha(s, beta) - sigma_0(s, beta). */
SlopeCheck check_root_slope(double alpha, double beta, double s, int n, double h = 1e-2);

/** \brief s-derivative of ln[e^{-alpha s n^{1/3}} E_n] at beta = 1, cut at lambda_edge(s, n), against sigma_alpha(s, 0). */
SlopeCheck check_e25(double alpha, double s, int n, double h = 1e-2);

struct RatioCheck {
  double log_det = 0.0;
  double reference = 0.0;  ///< -int_s^inf sigma_0(x, beta) dx
  double defect = 0.0;
};

/** \brief ln det G_n at (0, beta) against -int_s^inf sigma_0(x, beta) dx. */
RatioCheck check_jump_ratio(double beta, double s, int n);

/** \brief int_s^inf sigma_0(x, gamma) dx. */
double sigma0_integral(double gamma, double s);

/** \brief Brackets of the large-n expansion of sqrt2 delta_{n,n} in powers of n^{-1/3}. */
struct DeltaBrackets {
  double c0 = 0.0;  ///< alpha
  double c1 = 0.0;  ///< -(a - s^2/4)
  double c2 = 0.0;  ///< (alpha/2)(b + a^2 + s/2)
  double c3 = 0.0;  ///< order 1/n bracket

  double predict(double n, int order) const;
};

/** \brief Brackets from the model data a, b, da/ds, Q_1^{21}, Q_2^{12} at s. */
DeltaBrackets delta_brackets(double alpha, double s, double a, double b, double da_ds, double q1_21, double q2_12);

/** \brief Brackets through order n^{-2/3} from the Lax data of (alpha, gamma = beta) at s. */
DeltaBrackets delta_brackets_lax(double alpha, double beta, double s);

}  // namespace edgewise
