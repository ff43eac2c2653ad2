#include <doctest.h>

#include <cmath>
#include <gmpxx.h>
#include <vector>

#include "licrit/bigfloat.hpp"
#include "licrit/errors.hpp"
#include "licrit/special.hpp"

using licrit::BigComplex;
using licrit::BigReal;

namespace {

double rel_err(const BigReal& got, const BigReal& want) {
  BigReal d = got - want;
  double scale = std::fabs(want.to_double());
  if (scale < 1.0) scale = 1.0;
  return std::fabs(d.to_double()) / scale;
}

double rel_err(const BigComplex& got, const BigComplex& want) {
  BigComplex d = got - want;
  double num = std::sqrt(norm(d).to_double());
  double scale = std::sqrt(norm(want).to_double());
  if (scale < 1.0) scale = 1.0;
  return num / scale;
}

} // namespace

TEST_CASE("binomial matches the Pascal recurrence") {
  // Independent oracle: build the triangle by additions only.
  const unsigned long N = 40;
  std::vector<std::vector<mpz_class>> pas(N + 1);
  for (unsigned long n = 0; n <= N; ++n) {
    pas[n].assign(n + 1, 1);
    for (unsigned long k = 1; k < n; ++k)
      pas[n][k] = pas[n - 1][k - 1] + pas[n - 1][k];
  }
  for (unsigned long n = 0; n <= N; ++n)
    for (unsigned long k = 0; k <= n; ++k)
      CHECK(licrit::binomial(n, k) == pas[n][k]);
  CHECK_THROWS_AS(licrit::binomial(3, 4), licrit::domain_error);
}

TEST_CASE("Bernoulli numbers at small even index") {
  // B_2 = 1/6, B_4 = -1/30, B_12 = -691/2730.
  unsigned bits = 192;
  CHECK(rel_err(licrit::bernoulli2k(1, bits), BigReal::of_ratio(1, 6, bits)) < 1e-45);
  CHECK(rel_err(licrit::bernoulli2k(2, bits), BigReal::of_ratio(-1, 30, bits)) < 1e-45);
  CHECK(rel_err(licrit::bernoulli2k(6, bits), BigReal::of_ratio(-691, 2730, bits)) < 1e-45);
  // bernoulli_over_factorial(k) = B_{2k}/(2k)!
  CHECK(rel_err(licrit::bernoulli_over_factorial(1, bits),
                BigReal::of_ratio(1, 12, bits)) < 1e-45);
  CHECK(rel_err(licrit::bernoulli_over_factorial(2, bits),
                BigReal::of_ratio(-1, 720, bits)) < 1e-45);
  mpz_class f12;
  mpz_fac_ui(f12.get_mpz_t(), 12);
  mpz_class den = 2730 * f12;
  CHECK(rel_err(licrit::bernoulli_over_factorial(6, bits),
                BigReal::of_ratio(-691, den, bits)) < 1e-44);
}

TEST_CASE("incomplete gamma: closed forms and the ascending recurrence") {
  unsigned bits = 256;
  for (double xv : {0.5, 2.5, 13.8}) {
    BigReal x = BigReal::of(xv, bits);
    // Gamma(1, x) = e^{-x}
    BigReal g1 = licrit::incomplete_gamma_int(1, x);
    BigReal e = exp(-x);
    CHECK(rel_err(g1, e) < 1e-60);
    // Gamma(k+1, x) = k Gamma(k, x) + x^k e^{-x}, independent of how the
    // function itself is computed.
    BigReal xk = x; // x^k
    for (unsigned k = 1; k <= 40; ++k) {
      BigReal lhs = licrit::incomplete_gamma_int(k + 1, x);
      BigReal rhs = BigReal::of_ulong(k, bits) * licrit::incomplete_gamma_int(k, x)
                    + xk * e;
      CHECK(rel_err(lhs, rhs) < 1e-55);
      xk = xk * x;
    }
  }
}

TEST_CASE("log-gamma at half-integers and the functional equation") {
  unsigned bits = 256;
  // lgamma(10) = log(9!)
  BigReal lg10 = licrit::log_gamma(BigReal::of(10.0, bits));
  BigReal want = log(BigReal::of_ulong(362880, bits));
  CHECK(rel_err(lg10, want) < 1e-60);
  // lgamma(1/2) = log(sqrt(pi))
  BigReal lg_half = licrit::log_gamma(BigReal::of(0.5, bits));
  BigReal half_log_pi = log(BigReal::pi(bits)) / BigReal::of_long(2, bits);
  CHECK(rel_err(lg_half, half_log_pi) < 1e-60);
  // log Gamma(z+1) - log Gamma(z) = log z on the right half plane.
  BigComplex z(BigReal::of(2.5, bits), BigReal::of(3.0, bits));
  BigComplex one(BigReal::of_long(1, bits), BigReal::of_long(0, bits));
  BigComplex lhs = licrit::log_gamma(z + one) - licrit::log_gamma(z);
  CHECK(rel_err(lhs, log(z)) < 1e-55);
}

TEST_CASE("digamma and polygamma at classical points") {
  unsigned bits = 192;
  BigReal g = BigReal::euler_gamma(bits);
  // psi(1) = -gamma, psi(2) = 1 - gamma, psi(1/2) = -gamma - 2 log 2
  CHECK(rel_err(licrit::polygamma(0, BigReal::of(1.0, bits)), -g) < 1e-45);
  CHECK(rel_err(licrit::polygamma(0, BigReal::of(2.0, bits)),
                BigReal::of_long(1, bits) - g) < 1e-45);
  BigReal two_log2 = BigReal::of_long(2, bits) * log(BigReal::of_long(2, bits));
  CHECK(rel_err(licrit::polygamma(0, BigReal::of(0.5, bits)), -g - two_log2) < 1e-45);
  // psi'(1) = pi^2/6
  BigReal pi2_6 = BigReal::pi(bits) * BigReal::pi(bits) / BigReal::of_long(6, bits);
  CHECK(rel_err(licrit::polygamma(1, BigReal::of(1.0, bits)), pi2_6) < 1e-45);
  // psi''(1) = -2 zeta(3)
  CHECK(std::fabs(licrit::polygamma(2, BigReal::of(1.0, bits)).to_double() -
                  (-2.4041138063191886)) < 1e-13);
}

TEST_CASE("Hurwitz zeta against a brute partial sum with tail correction") {
  unsigned bits = 192;
  // zeta(2, 1) = pi^2/6 exactly.
  BigReal pi2_6 = BigReal::pi(bits) * BigReal::pi(bits) / BigReal::of_long(6, bits);
  CHECK(rel_err(licrit::hurwitz_zeta(2, BigReal::of(1.0, bits)), pi2_6) < 1e-45);
  // zeta(3, 1.5): frozen from an independent high-precision evaluation.
  CHECK(std::fabs(licrit::hurwitz_zeta(3, BigReal::of(1.5, bits)).to_double() -
                  0.41439832211715999779816713058) < 1e-14);
  // Double-precision brute oracle with integral-plus-midpoint tail:
  // sum_{k<K} (k+q)^{-s} + (K+q)^{1-s}/(s-1) + (K+q)^{-s}/2, error O(K^{-s-1}).
  for (unsigned s : {2u, 4u, 7u}) {
    for (double q : {0.25, 1.0, 3.5}) {
      double brute = 0.0;
      const unsigned K = 20000;
      for (unsigned k = 0; k < K; ++k) brute += std::pow(k + q, -double(s));
      brute += std::pow(K + q, 1.0 - double(s)) / (double(s) - 1.0);
      brute += 0.5 * std::pow(K + q, -double(s));
      double got = licrit::hurwitz_zeta(s, BigReal::of(q, bits)).to_double();
      CHECK(std::fabs(got - brute) < 1e-9);
    }
  }
  // Complex second argument: zeta(s, q) - zeta(s, q+1) = q^{-s}.
  BigComplex q(BigReal::of(1.25, bits), BigReal::of(2.0, bits));
  BigComplex one(BigReal::of_long(1, bits), BigReal::of_long(0, bits));
  BigComplex lhs = licrit::hurwitz_zeta(3, q) - licrit::hurwitz_zeta(3, q + one);
  BigComplex rhs = pow_si(q, -3);
  CHECK(rel_err(lhs, rhs) < 1e-40);
}

TEST_CASE("polygamma-Hurwitz identity at default and doubled precision") {
  // psi^{(m)}(z) = (-1)^{m+1} m! zeta(m+1, z): two independent evaluation
  // paths that must agree to working accuracy, and whose values must not
  // move when the working precision doubles.
  for (unsigned bits : {128u, 256u}) {
    double tol = std::ldexp(1.0, 16 - static_cast<int>(bits));
    mpz_class mfact = 1;
    for (unsigned m = 1; m <= 6; ++m) {
      mfact *= m;
      BigReal fact = BigReal::of_mpz(mfact, bits);
      for (double x : {0.75, 2.5, 9.0}) {
        BigReal lhs = licrit::polygamma(m, BigReal::of(x, bits));
        BigReal rhs = fact * licrit::hurwitz_zeta(m + 1, BigReal::of(x, bits));
        if (m % 2 == 0) rhs = -rhs;
        CHECK(rel_err(lhs, rhs) < tol);
      }
      BigComplex z(BigReal::of(1.25, bits), BigReal::of(2.0, bits));
      BigComplex lhs = licrit::polygamma(m, z);
      BigComplex rhs = fact * licrit::hurwitz_zeta(m + 1, z);
      if (m % 2 == 0) rhs = -rhs;
      CHECK(rel_err(lhs, rhs) < tol);
    }
  }
  // Digit stability across the doubling.
  BigReal v1 = licrit::polygamma(3, BigReal::of(2.5, 128));
  BigReal v2 = licrit::polygamma(3, BigReal::of(2.5, 256));
  CHECK(std::fabs(v1.to_double() - v2.to_double()) <=
        1e-15 * std::fabs(v2.to_double()));
}

TEST_CASE("Chebyshev recurrence reproduces the trigonometric form") {
  for (unsigned bits : {128u, 256u}) {
    double tol = std::ldexp(1.0, 32 - static_cast<int>(bits));
    for (double phi : {0.37, 1.9}) {
      BigReal big_phi = BigReal::of(phi, bits);
      BigReal c = cos(big_phi);
      for (unsigned n = 0; n <= 200; n += (n < 12 ? 1 : 17)) {
        BigReal tn = licrit::chebyshev(licrit::ChebyshevKind::first, n, c);
        // n * phi must be formed at working precision: the double product
        // rounds and would dominate the comparison.
        BigReal want = cos(big_phi * static_cast<long>(n));
        CHECK(std::fabs((tn - want).to_double()) < tol);
      }
    }
  }
  // Second kind: U_5(cos phi) = sin(6 phi)/sin(phi).
  unsigned bits = 192;
  BigReal phi = BigReal::of(0.61, bits);
  BigReal c = cos(phi);
  BigReal u5 = licrit::chebyshev(licrit::ChebyshevKind::second, 5, c);
  BigReal want = sin(phi * 6L) / sin(phi);
  CHECK(rel_err(u5, want) < 1e-40);
}
