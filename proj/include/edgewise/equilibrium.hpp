#pragma once

#include <complex>
#include <string>
#include <vector>

namespace edgewise {

/** \brief Polynomial potential, ascending coefficients. */
struct Potential {
  std::vector<double> coeffs;
  bool even_hint = false;

  /** \brief Validates degree, parity of the degree and the leading sign. */
  void validate() const;
  double operator()(double x) const;
  std::complex<double> operator()(std::complex<double> z) const;
  /** \brief k-th derivative as a new potential (validation not implied). */
  Potential derivative(int k = 1) const;
  int degree() const { return static_cast<int>(coeffs.size()) - 1; }

  static Potential quadratic() { return Potential{{0.0, 0.0, 1.0}, true}; }
  /** \brief (1-3c4)x^2 + c4 x^4 + c3(x^3 - 3x), one-cut on E when h stays positive. */
  static Potential admissible_quartic(double c4, double c3 = 0.0);
};

/** \brief Equilibrium data of a one-cut potential with support E = [-sqrt2, sqrt2]. */
struct EquilibriumData {
  Potential V;
  std::vector<double> hv_cheb;  ///< h_V(sqrt2 t) = sum c_k T_k(t)
  double ell = 0.0;
  double tau = 0.0;
  double normalization_defect = 0.0;

  double h(double x) const;
  /** \brief k-th derivative of h_V at x, 0 <= k <= 2. */
  double h_derivative(double x, int k) const;
  /** \brief Density h_V(x) sqrt(2-x^2) on E, zero outside. */
  double rho(double x) const;
  /** \brief Monomial coefficients of h_V in x. */
  std::vector<double> h_monomial() const;
};

/** \brief Solves for h_V and l_V. Throws a model error when V is not one-cut on E. */
EquilibriumData compute_equilibrium(const Potential& V);

/** \brief (1-theta) x^2 + theta V. */
Potential v_theta(const Potential& V, double theta);

/** \brief Equilibrium data of V_theta by affine interpolation of h and l. */
EquilibriumData equilibrium_theta(const EquilibriumData& eq, double theta);

/** \brief pi h(sqrt2) 2^{3/4} for V_theta. */
double tau_theta(const EquilibriumData& eq, double theta);

/** \brief s / (n tau_theta)^{2/3}. */
double s_n_theta(const EquilibriumData& eq, double s, double n, double theta);

/** \brief sqrt2 + s / (n tau_theta)^{2/3}. */
double lambda_n(const EquilibriumData& eq, double s, double n, double theta);
double lambda_n(const Potential& V, double s, double n, double theta);

/** \brief int_E ln|x-y| rho(y) dy for real x. */
double log_potential(const EquilibriumData& eq, double x);

/** \brief 2 int_E ln|x-y| rho(y) dy - V(x) + l_V. */
double variational_residual(const EquilibriumData& eq, double x);

/** \brief int_E ln(z-x) rho_theta(x) dx with the principal log; z off (-inf, sqrt2]. */
std::complex<double> g_eval(const EquilibriumData& eq, double theta, std::complex<double> z);

/** \brief Boundary values g_pm on the interior of E (upper for sign > 0). */
std::complex<double> g_boundary(const EquilibriumData& eq, double theta, double x, int sign);

/** \brief 2 pi int_{sqrt2}^{w} h_theta(u) (u^2-2)^{1/2} du along the segment, w off (-inf, sqrt2). */
std::complex<double> edge_integral(const EquilibriumData& eq, double theta, std::complex<double> w);

/** \brief The same integral started at -sqrt2; w off (-sqrt2, inf). */
std::complex<double> left_edge_integral(const EquilibriumData& eq, double theta, std::complex<double> w);

/** \brief xi(z) = edge_integral at w = z + s_{n theta}. */
std::complex<double> xi_eval(const EquilibriumData& eq, double theta, double n, double s,
                             std::complex<double> z);

enum class EdgeSide { right, left };

/** \brief Conformal edge map: [(3/4) xi]^{2/3} on the right, e^{i pi}[(3/4) xi_left]^{2/3} on the left. */
std::complex<double> zeta_eval(const EquilibriumData& eq, double theta, double n, double s,
                               std::complex<double> z, EdgeSide side);

/** \brief Taylor data zeta(z)-zeta(z0) = zeta1 (z-z0)(1 + zeta2 (z-z0) + zeta3 (z-z0)^2 + ...),
 *  z0 = sqrt2 on the right and z0 = -sqrt2 - s_{n theta} on the left. */
struct ConformalCoeffs {
  double zeta1 = 0.0;
  double zeta2 = 0.0;
  double zeta3 = 0.0;
  EdgeSide side = EdgeSide::right;
};

ConformalCoeffs zeta_coeffs(const EquilibriumData& eq, double theta, double n, double s, EdgeSide side);

/** \brief Power series of zeta in omega = z - (edge point), coefficients a_1..a_order. */
std::vector<double> zeta_series(const EquilibriumData& eq, double theta, EdgeSide side, int order);

/** \brief Closed-form leading terms of zeta1, zeta2, zeta3 in s/(n tau)^{2/3}. */
ConformalCoeffs zeta_coeffs_asymptotic(const EquilibriumData& eq, double theta, double n, double s);

/** \brief Szego function D(z) for the exponent alpha. */
std::complex<double> szego_D(double alpha, double s_ntheta, std::complex<double> z);

/** \brief Boundary value of D on (-sqrt2-s_ntheta, sqrt2), upper side for sign > 0. */
std::complex<double> szego_D_boundary(double alpha, double s_ntheta, double x, int sign);

/** \brief Limit of D at infinity. */
double szego_chi(double alpha, double s_ntheta);

/** \brief Edge functionals built from W = V - x^2. */
struct EdgeConstants {
  double i2 = 0.0;            ///< int_E (h_V + 1/pi)/2 sqrt(2-x^2) W
  double i1 = 0.0;            ///< (1/2pi) int_E W / sqrt(2-x^2)
  double w_edge = 0.0;        ///< W(sqrt2)
  double wp_edge = 0.0;       ///< W'(sqrt2)
  double factor = 0.0;        ///< (3/(2 sqrt2)) ((pi h)^{1/3} - 1)/(pi h - 1) at h = h_V(sqrt2)
  bool removable_limit = false;
  double rho1 = 0.0;
  double rho2 = 0.0;
  double s = 0.0;
  double theta_left = 0.0;    ///< -(1/24) ln(pi h_V(-sqrt2))
  double theta_right_log = 0.0;  ///< ln(pi h_V(sqrt2))

  /** \brief Leading part of ln D_n(V)/D_n(x^2) without the Painleve term Theta. */
  double log_ratio_predictor(double n, double alpha, double Theta) const;
};

EdgeConstants edge_constants(const EquilibriumData& eq, double s);

enum class ModelKind { h12, h13, h17, h18, h19, h20 };

ModelKind parse_model_kind(const std::string& name);
std::string model_kind_name(ModelKind k);

struct ModelIntegral {
  std::complex<double> numeric;
  std::complex<double> leading;
  double residual = 0.0;
  double s_ntheta = 0.0;
};

/** \brief Contour integral of f(z) V(z + s_{n theta}) over gamma_+ - gamma_- on a rectangle
 *  that encloses [kappa, sqrt2] at distance margin, compared with its leading term. */
ModelIntegral model_integral_check(const EquilibriumData& eq, double n, ModelKind kind, double s = 1.0,
                                   double theta = 1.0, double margin = 1.0);

}  // namespace edgewise
