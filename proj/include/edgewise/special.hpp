#pragma once

#include <complex>

namespace edgewise {

using cplx = std::complex<double>;

/** \brief Airy function Ai on |x| <= 120. */
double airy_ai(double x);
double airy_ai_prime(double x);
/** \brief Airy function Bi on |x| <= 120; range error where Bi overflows. */
double airy_bi(double x);
double airy_bi_prime(double x);

struct AiryPair {
  double ai, aip;
};
/** \brief Ai and Ai' from a single evaluation. */
AiryPair airy_ai_pair(double x);

struct AiryPairL {
  long double ai, aip;
};
/** \brief Ai and Ai' carried in extended precision. */
AiryPairL airy_ai_pair_ext(long double x);

struct AiryPairC {
  cplx ai, aip;
};
/** \brief Complex Ai and Ai' on |z| <= 40. */
AiryPairC airy_ai_pair_complex(cplx z);
cplx airy_ai_complex(cplx z);
cplx airy_ai_prime_complex(cplx z);

/** \brief Gamma function for x > 0. */
double gamma_fn(double x);

}  // namespace edgewise
