#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace edgewise {

/** \brief Nodes and positive weights on a reference interval. */
struct QuadratureRule {
  enum class Kind { legendre, jacobi, chebyshev1, chebyshev2 };
  std::vector<double> nodes;
  std::vector<double> weights;
  Kind kind = Kind::legendre;
  double a_exp = 0.0;  ///< Jacobi exponent of x^a on [0,1]
};

/** \brief m-point Gauss-Legendre rule on [-1,1], 1 <= m <= 4096. */
QuadratureRule gauss_legendre(std::size_t m);

/** \brief Gauss-Legendre nodes and weights kept in extended precision. */
void gauss_legendre_ext(std::size_t m, std::vector<long double>& nodes, std::vector<long double>& weights);

/** \brief m-point Gauss rule on [0,1] for the weight x^a_exp, a_exp > -1. */
QuadratureRule gauss_jacobi(std::size_t m, double a_exp);

/** \brief Gauss-Chebyshev on [-1,1]: first kind weight 1/sqrt(1-t^2), second kind sqrt(1-t^2). */
QuadratureRule gauss_chebyshev(std::size_t m, bool second_kind);

/** \brief Integral of f over [a,b] with a Legendre rule. */
double integrate(const QuadratureRule& gl, double a, double b, const std::function<double(double)>& f);

/** \brief Composite Legendre integral over [a,b] split into equal panels. */
double integrate_panels(const QuadratureRule& gl, double a, double b, int panels,
                        const std::function<double(double)>& f);

/** \brief Clenshaw evaluation of sum c_k T_k(t). */
double chebyshev_eval(const std::vector<double>& c, double t);

/** \brief Coefficients of the derivative series d/dt sum c_k T_k(t). */
std::vector<double> chebyshev_derivative(const std::vector<double>& c);

/** \brief Chebyshev interpolant of degree deg on [-1,1] at first-kind points. */
std::vector<double> chebyshev_fit(const std::function<double(double)>& f, std::size_t deg);

/** \brief Convert sum c_k T_k into sum u_k U_k. */
std::vector<double> chebyshev_t_to_u(const std::vector<double>& c);

/** \brief Principal value over E=[-sqrt2,sqrt2] of sqrt(2-l^2) f(l)/(l-x) dl,
 *  f(l) = sum c_k T_k(l/sqrt2), x strictly inside E. */
double pv_sqrt_transform(const std::vector<double>& cheb_coeffs, double x);

}  // namespace edgewise
