#include <doctest.h>

#include <cmath>
#include <complex>
#include <vector>

#include "licrit/bigfloat.hpp"
#include "licrit/errors.hpp"
#include "licrit/lfunc.hpp"

using licrit::BigComplex;
using licrit::BigReal;
using licrit::LFunctionDescriptor;

namespace {

LFunctionDescriptor chi3() {
  return licrit::builtin_dirichlet(3, {{0.0, 0.0}, {1.0, 0.0}, {-1.0, 0.0}});
}
LFunctionDescriptor chi4() {
  return licrit::builtin_dirichlet(
      4, {{0.0, 0.0}, {1.0, 0.0}, {0.0, 0.0}, {-1.0, 0.0}});
}

} // namespace

TEST_CASE("zeta descriptor structural constants") {
  LFunctionDescriptor z = licrit::builtin_zeta();
  CHECK(z.m_F == 1);
  REQUIRE(z.gamma_factors.size() == 1);
  CHECK(std::fabs(z.gamma_factors[0].lambda.to_double() - 0.5) == 0.0);
  unsigned bits = 192;
  // Q = pi^{-1/2}
  BigReal q = z.Q(bits);
  BigReal want = 1 / sqrt(BigReal::pi(bits));
  CHECK(std::fabs((q - want).to_double()) < 1e-50);
  licrit::StructuralConstants sc = licrit::structural_constants(z, bits);
  CHECK(std::fabs(sc.d_F.to_double() - 1.0) < 1e-50);
  // Conductor of zeta is exactly 1, and c1 = -(log 2pi + 1)/(2pi).
  CHECK(std::fabs(sc.q_F.to_double() - 1.0) < 1e-40);
  CHECK(std::fabs(sc.c1.to_double() - (-0.45166216300617426)) < 1e-9);
  CHECK(std::fabs(sc.lambda_product.to_double() - 0.5) < 1e-50);
}

TEST_CASE("Dirichlet descriptors recover the modulus as conductor") {
  unsigned bits = 192;
  licrit::StructuralConstants s3 = licrit::structural_constants(chi3(), bits);
  CHECK(std::fabs(s3.d_F.to_double() - 1.0) < 1e-45);
  CHECK(std::fabs(s3.q_F.to_double() - 3.0) < 1e-40);
  licrit::StructuralConstants s4 = licrit::structural_constants(chi4(), bits);
  CHECK(std::fabs(s4.q_F.to_double() - 4.0) < 1e-40);
  // Both characters are odd: gamma factor (1/2, 1/2), no pole.
  LFunctionDescriptor d4 = chi4();
  CHECK(d4.m_F == 0);
  REQUIRE(d4.gamma_factors.size() == 1);
  CHECK(std::fabs(d4.gamma_factors[0].mu.re().to_double() - 0.5) < 1e-50);
}

TEST_CASE("builtin_dirichlet rejects improper tables") {
  // Principal character.
  CHECK_THROWS_AS(licrit::builtin_dirichlet(3, {{0, 0}, {1, 0}, {1, 0}}),
                  licrit::domain_error);
  // Values that are not roots of unity / not multiplicative.
  CHECK_THROWS_AS(licrit::builtin_dirichlet(3, {{0, 0}, {1, 0}, {2, 0}}),
                  licrit::domain_error);
  // Induced from modulus 3 (imprimitive at modulus 6).
  CHECK_THROWS_AS(licrit::builtin_dirichlet(
                      6, {{0, 0}, {1, 0}, {0, 0}, {0, 0}, {0, 0}, {-1, 0}}),
                  licrit::domain_error);
}

TEST_CASE("von Mangoldt values on prime powers") {
  unsigned bits = 128;
  LFunctionDescriptor z = licrit::builtin_zeta();
  BigReal log2 = log(BigReal::of_long(2, bits));
  BigReal log7 = log(BigReal::of_long(7, bits));
  CHECK(std::fabs((licrit::von_mangoldt(z, 8, bits).re() - log2).to_double()) < 1e-30);
  CHECK(std::fabs((licrit::von_mangoldt(z, 49, bits).re() - log7).to_double()) < 1e-30);
  CHECK(licrit::von_mangoldt(z, 1, bits).re().to_double() == 0.0);
  CHECK(licrit::von_mangoldt(z, 12, bits).re().to_double() == 0.0);
  // chi4: Lambda(9) = chi(1) log 3 = log 3; Lambda(3) = chi(3) log 3 = -log 3.
  LFunctionDescriptor d4 = chi4();
  BigReal log3 = log(BigReal::of_long(3, bits));
  CHECK(std::fabs((licrit::von_mangoldt(d4, 9, bits).re() - log3).to_double()) < 1e-30);
  CHECK(std::fabs((licrit::von_mangoldt(d4, 3, bits).re() + log3).to_double()) < 1e-30);
  CHECK(licrit::von_mangoldt(d4, 4, bits).re().to_double() == 0.0); // chi(0) = 0
}

TEST_CASE("prime-power counting function at 10") {
  // psi(10) = 3 log 2 + 2 log 3 + log 5 + log 7 = 7.8320...
  unsigned bits = 128;
  BigComplex v = licrit::psi_counting(licrit::builtin_zeta(), 10.0, bits);
  BigReal want = 3 * log(BigReal::of_long(2, bits)) +
                 2 * log(BigReal::of_long(3, bits)) +
                 log(BigReal::of_long(5, bits)) + log(BigReal::of_long(7, bits));
  CHECK(std::fabs((v.re() - want).to_double()) < 1e-30);
  CHECK(std::fabs(v.re().to_double() - 7.832014) < 1e-5);
  CHECK(v.im().to_double() == 0.0);
}

TEST_CASE("prime enumeration") {
  std::vector<std::uint32_t> p100 = licrit::primes_up_to(100);
  CHECK(p100.size() == 25);
  CHECK(p100.front() == 2);
  CHECK(p100.back() == 97);
  std::vector<std::uint32_t> p1m = licrit::primes_up_to(1000000);
  CHECK(p1m.size() == 78498);
  CHECK(p1m.back() == 999983);
}

TEST_CASE("log-derivative sums at s = 2 against analytic constants") {
  // sum Lambda(m) m^{-2} = -zeta'/zeta(2) = 0.5699609930945328
  // sum Lambda(m) log(m) m^{-2} = (zeta'/zeta)'(2) = 0.8844818339635239
  unsigned bits = 192;
  LFunctionDescriptor z = licrit::builtin_zeta();
  BigReal s = BigReal::of(2.0, bits);
  std::vector<licrit::DerivativeTerm> d =
      licrit::logF_derivatives(z, s, 2, 1e5, bits, 1);
  REQUIRE(d.size() == 3);
  // value_k = (-1)^{k+1} sum Lambda(m) (log m)^k m^{-s}
  CHECK(std::fabs(d[0].value.re().to_double() - (-0.5699609930945328)) < 3e-5);
  CHECK(std::fabs(d[1].value.re().to_double() - 0.8844818339635239) < 4e-4);
  CHECK(d[0].value.im().to_double() == 0.0);
  // Tail bounds are honest: refining the cutoff moves the value by less than
  // the claimed bound at the coarse cutoff.
  std::vector<licrit::DerivativeTerm> fine =
      licrit::logF_derivatives(z, s, 2, 1e7, bits, 1);
  for (unsigned k = 0; k <= 2; ++k) {
    double moved = std::fabs((d[k].value - fine[k].value).re().to_double());
    CHECK(moved <= d[k].tail_bound.to_double());
  }
  // Threading changes scheduling only, not the result.
  std::vector<licrit::DerivativeTerm> d4 =
      licrit::logF_derivatives(z, s, 2, 1e5, bits, 4);
  for (unsigned k = 0; k <= 2; ++k)
    CHECK((d[k].value - d4[k].value).re().to_double() == 0.0);
}

TEST_CASE("paired truncation matches two single passes") {
  unsigned bits = 160;
  LFunctionDescriptor z = licrit::builtin_zeta();
  BigReal s = BigReal::of(1.5, bits);
  auto [lo, hi] = licrit::logF_derivatives_pair(z, s, 3, 5e4, 1e5, bits, 1);
  std::vector<licrit::DerivativeTerm> lo1 =
      licrit::logF_derivatives(z, s, 3, 5e4, bits, 1);
  std::vector<licrit::DerivativeTerm> hi1 =
      licrit::logF_derivatives(z, s, 3, 1e5, bits, 1);
  REQUIRE(lo.size() == 4);
  REQUIRE(hi.size() == 4);
  for (unsigned k = 0; k <= 3; ++k) {
    CHECK(std::fabs((lo[k].value - lo1[k].value).re().to_double()) < 1e-40);
    CHECK(std::fabs((hi[k].value - hi1[k].value).re().to_double()) < 1e-40);
  }
}

TEST_CASE("descriptor JSON round-trip") {
  for (const LFunctionDescriptor& d :
       {licrit::builtin_zeta(), chi3(), chi4()}) {
    std::string text = licrit::descriptor_to_json(d);
    LFunctionDescriptor back = licrit::descriptor_from_json(text);
    CHECK(back.name == d.name);
    CHECK(back.m_F == d.m_F);
    REQUIRE(back.gamma_factors.size() == d.gamma_factors.size());
    for (size_t j = 0; j < d.gamma_factors.size(); ++j) {
      CHECK((back.gamma_factors[j].lambda - d.gamma_factors[j].lambda)
                .to_double() == 0.0);
    }
    unsigned bits = 200;
    CHECK(std::fabs((back.Q(bits) - d.Q(bits)).to_double()) <
          std::ldexp(1.0, -150));
    // Coefficients must round-trip exactly: compare a stretch of Lambda_F.
    for (std::uint64_t n : {2ull, 3ull, 4ull, 5ull, 9ull, 49ull, 64ull}) {
      BigComplex a = licrit::von_mangoldt(d, n, 128);
      BigComplex b = licrit::von_mangoldt(back, n, 128);
      CHECK((a - b).re().to_double() == 0.0);
      CHECK((a - b).im().to_double() == 0.0);
    }
  }
}
