#pragma once

#include <complex>
#include <cstddef>
#include <utility>
#include <vector>

#include "edgewise/ode.hpp"

namespace edgewise {

using cplx = std::complex<double>;

struct PainleveParams {
  double alpha = 0.0;
  cplx gamma = 0.0;
};

/** \brief Lax data (a, b, p, q, r) at abscissa x. */
struct LaxState {
  double x = 0.0;
  cplx a, b, p, q, r;

  cplx sigma() const { return 0.25 * x * x - a; }
  /** \brief q - (x/2 - b - a^2). */
  cplx constraint1() const { return q - (0.5 * x - b - a * a); }
  /** \brief 4(p^2 + rq) - alpha^2. */
  cplx constraint2(double alpha) const { return 4.0 * (p * p + r * q) - alpha * alpha; }
};

struct LaxOptions {
  double rtol = 1e-12;
  double t0 = 0.0;  ///< launch abscissa; 0 selects the default for the given alpha
};

/** \brief Default launch abscissa: 8 at alpha = 0, 4 otherwise. */
double default_t0(double alpha);

/** \brief Admissible launch window [lo, hi] for the given alpha. */
std::pair<double, double> admissible_t0(double alpha);

/** \brief Asymptotic coefficients of the algebraic and exponential parts of sigma at +infinity. */
struct AsymptoticData {
  double alpha = 0.0;
  std::vector<long double> s;  ///< sigma ~ sum s_k x^{1/2 - 3k/2}
  long double nu = 0.0L;       ///< exponent of the exponential part
  std::vector<long double> e;  ///< exponential part x^nu e^{-4/3 x^{3/2}} sum e_k x^{-3k/2}
  long double stokes = 0.0L;   ///< Gamma(1+alpha) / (2^{3(1+alpha)} pi)
};
AsymptoticData asymptotic_data(double alpha, std::size_t order = 60);

/** \brief Exponential part and its first two derivatives at complex x (optimal truncation). */
std::array<std::complex<long double>, 3> instanton(const AsymptoticData& d, std::complex<long double> x);

/** \brief sigma(x) on the real axis from the optimally truncated series with its exponential correction;
 *  returns the value and the size of the first omitted terms. */
std::pair<cplx, double> sigma_asymptotic(double alpha, cplx gamma, double x);

/** \brief Consistent Lax state at t0 from the boundary data at +infinity. */
LaxState init_lax(double t0, const PainleveParams& params);

class LaxTrajectory {
 public:
  using Scalar = std::complex<long double>;
  using Step = ode::Step<Scalar, 5>;

  PainleveParams params;
  std::vector<double> grid;     ///< decreasing abscissae from t0 to t_min
  std::vector<LaxState> states; ///< state at each grid point

  double t0() const { return grid.front(); }
  double t_min() const { return grid.back(); }
  LaxState state(double t) const;
  cplx sigma(double t) const;
  cplx q(double t) const;
  /** \brief d sigma/dt by differentiating the dense output. */
  cplx sigma_prime_dense(double t) const;
  /** \brief integral of sigma over [lo, t0] and of (x - s) q over [lo, t0], exact on the interpolant. */
  cplx integrate_sigma(double lo) const;
  cplx integrate_q_weighted(double lo, double s) const;

  std::vector<Step> steps;

 private:
  friend LaxTrajectory solve_lax(const PainleveParams&, double, const LaxOptions&);
  void build_cumulative();
  /** \brief Integrals of (sigma, q, x q) over [lo, t0]. */
  std::array<Scalar, 3> integrals(double lo) const;
  std::vector<std::array<Scalar, 3>> cumulative_;
};

/** \brief Integrate the Lax system from the launch abscissa down to t_min. */
LaxTrajectory solve_lax(const PainleveParams& params, double t_min, const LaxOptions& opts = {});

cplx sigma_of(const LaxTrajectory& traj, double t);
cplx q_of(const LaxTrajectory& traj, double t);

/** \brief Residual of the sigma-form equation at t. */
cplx sigma_form_residual(const LaxTrajectory& traj, double t);
/** \brief Residual of the Painleve-XXXIV equation at t. */
cplx pxxxiv_residual(const LaxTrajectory& traj, double t);

/** \brief Hastings-McLeod solution of u'' = t u + 2u^3 from Airy data at t0 = 8. */
class PiiTrajectory {
 public:
  double t0 = 8.0, t_min = -8.0;
  double u(double t) const;
  double up(double t) const;
  /** \brief integral of (x - s) u^2 over [s, infinity). */
  double weighted_square_integral(double s) const;
  std::vector<ode::Step<long double, 2>> steps;

 private:
  friend PiiTrajectory solve_pii_hm(double);
  std::vector<std::array<long double, 2>> cumulative_;  ///< integrals of u^2 and x u^2 from step start to t0
  long double tail_u2_ = 0, tail_xu2_ = 0;
};
PiiTrajectory solve_pii_hm(double t_min = -8.0);

/** \brief F(s; alpha, beta) for many s from one pair of trajectories reaching down to s_min. */
class FEvaluator {
 public:
  FEvaluator(double alpha, cplx beta, double s_min);
  cplx sigma_route(double s) const;
  cplx q_route(double s) const;
  double t0() const { return t0_; }

 private:
  double alpha_;
  double t0_;
  double s_min_;
  LaxTrajectory lower_, upper_;  ///< gamma = beta - 1 and gamma = beta
  AsymptoticData data_;
  cplx tail_sigma(double from) const;
  cplx tail_q(double from, double s) const;
};

/** \brief F(s; alpha, beta) from differences of two sigma trajectories. */
cplx F_eval_sigma(double s, double alpha, cplx beta);
/** \brief F(s; alpha, beta) from the (x - s)-weighted difference of two q trajectories. */
cplx F_eval_q(double s, double alpha, cplx beta);

enum class Tw2Route { sigma, q, pii, fredholm };
double tw2(double s, Tw2Route route);

/** \brief Closed-form data of the (alpha, beta) = (0, 1) model solution. */
struct SpecconData {
  double a, b, q1_21, q2_12, q2_11;
};
SpecconData speccon(double x);
double theta01(double s);

}  // namespace edgewise
