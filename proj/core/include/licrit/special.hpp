#pragma once

#include <gmpxx.h>

#include "licrit/bigfloat.hpp"

namespace licrit {

// Exact C(n, k); throws domain_error when k > n.
mpz_class binomial(unsigned long n, unsigned long k);

// Exact n!.
mpz_class factorial(unsigned long n);

// Tangent number T_k (k >= 1): 1, 2, 16, 272, 7936, ... computed exactly by
// the integer triangle recurrence and cached for the process lifetime.
mpz_class tangent_number(unsigned k);

// B_{2k} as an exact rational rounded once to the requested width
// (B_0 = 1, B_2 = 1/6, B_4 = -1/30, ...), via B_{2k} = (-1)^{k-1} 2k T_k /
// (16^k - 4^k).
BigReal bernoulli2k(unsigned k, unsigned bits);

// B_{2k}/(2k)! rounded once (the combination every Euler-Maclaurin tail
// consumes).
BigReal bernoulli_over_factorial(unsigned k, unsigned bits);

// Upper incomplete gamma G(k, x) = integral_x^inf t^{k-1} e^{-t} dt for
// integer k >= 1 and real x >= 0, via the exact finite form
// (k-1)! e^{-x} sum_{j<k} x^j/j!.
BigReal incomplete_gamma_int(unsigned k, const BigReal& x);

// Principal-branch log Gamma by the Stirling series with argument shift;
// requires z not a pole (0, -1, -2, ...). Relative error <= 2^{8-p} at the
// operand width p.
BigComplex log_gamma(const BigComplex& z);
BigReal log_gamma(const BigReal& x); // x > 0

// m-th derivative of log Gamma (m = 0 is digamma), by the differentiated
// Stirling series with argument shift -- deliberately not routed through
// hurwitz_zeta so the identity between the two can serve as a two-sided
// check. Requires Re z > 0 or z off the poles for real x.
BigComplex polygamma(unsigned m, const BigComplex& z);
BigReal polygamma(unsigned m, const BigReal& x);

// Hurwitz zeta(s, q) for integer s >= 2 and Re q > 0, by direct summation
// plus an Euler-Maclaurin tail with an explicit remainder bound kept below
// 2^{-p-12} relative.
BigComplex hurwitz_zeta(unsigned s, const BigComplex& q);
BigReal hurwitz_zeta(unsigned s, const BigReal& q);

enum class ChebyshevKind { first, second };

// T_n(x) (kind first) or U_n(x) (kind second) by the three-term recurrence.
BigReal chebyshev(ChebyshevKind kind, unsigned n, const BigReal& x);

} // namespace licrit
