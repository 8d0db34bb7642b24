#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <functional>

namespace edgewise {

/** \brief Integral-operator kernel on a half line. */
struct KernelSpec {
  std::function<double(double, double)> eval;
  std::function<double(double)> diag;  ///< y -> x limit of eval
  double decay_scale = 10.0;           ///< abscissa beyond which |K(x,x)| < 1e-16
  bool symmetric = true;
  /** Optional extended-precision evaluators; when set, the determinant is assembled in long double. */
  std::function<long double(long double, long double)> eval_ext;
  std::function<long double(long double)> diag_ext;
};

struct NystromResult {
  double log_det = 0.0;
  std::size_t m = 0;
  double truncation = 0.0;
};

/** \brief Airy kernel (Ai(x)Ai'(y) - Ai'(x)Ai(y))/(x-y) with a Taylor blend near the diagonal. */
double airy_kernel(double x, double y);
long double airy_kernel_ext(long double x, long double y);
KernelSpec airy_kernel_spec();

/** \brief psi_1, psi_2 of the (0,1) model solution at abscissa z with Painleve variable x. */
std::array<std::complex<double>, 2> psi_a01(double z, double x);

/** \brief Edge kernel at (alpha,beta)=(0,1) on (0,inf), assembled from the explicit model solution. */
KernelSpec kernel_a01(double s);

/** \brief log det(I - K) on (s, s+truncation) by symmetrized Gauss-Legendre Nystrom. */
NystromResult nystrom_logdet(const KernelSpec& k, double s, std::size_t m);

/** \brief log det(I - theta K_Ai) on (s, inf); any theta <= 1 is accepted. */
double deformed_airy_logdet(double s, double theta, std::size_t m);

}  // namespace edgewise
