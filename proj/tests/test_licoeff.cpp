#include <doctest.h>

#include <cmath>
#include <complex>
#include <string>
#include <vector>

#include "fixture.hpp"
#include "licrit/bigfloat.hpp"
#include "licrit/errors.hpp"
#include "licrit/lfunc.hpp"
#include "licrit/licoeff.hpp"
#include "licrit/zeros.hpp"

using licrit::BigComplex;
using licrit::BigReal;
using licrit::LiParams;
using licrit::LiResult;
using licrit::ZeroSet;

namespace {

const double kGamma1 = 14.1347251417346937904572519836;

ZeroSet single_pair() {
  ZeroSet z;
  BigReal g = BigReal::parse("14.1347251417346937904572519836", 256);
  z.online.push_back({g, 1, ""});
  z.complete_to = 15.0;
  return z;
}

LiParams params(long n, double a) {
  LiParams p;
  p.n = n;
  p.a = a;
  return p;
}

double cdist(const BigComplex& x, const BigComplex& y) {
  return sqrt(norm(x - y)).to_double();
}

} // namespace

TEST_CASE("zero angle against its defining tangent relation") {
  unsigned bits = 192;
  // Frozen: theta(gamma_1, a=0) = 2 atan(1/(2 gamma_1)).
  BigReal th = licrit::zero_angle(BigReal::of(kGamma1, bits), 0.0, bits);
  CHECK(std::fabs(th.to_double() - 0.0707182629429322) < 1e-13);
  // Property: gamma * tan(theta/2) = 1/2 - a for assorted gamma and a.
  for (double gv : {0.3, 14.134725, 5000.0}) {
    for (double a : {0.0, -1.0, -0.25, 0.3}) {
      BigReal g = BigReal::of(gv, bits);
      BigReal t = licrit::zero_angle(g, a, bits);
      BigReal s(bits), c(bits);
      sin_cos(s, c, t / BigReal::of_long(2, bits));
      BigReal lhs = g * (s / c);
      CHECK(std::fabs((lhs - BigReal::of(0.5 - a, bits)).to_double()) <
            std::ldexp(std::max(1.0, 0.5 - a), 40 - static_cast<int>(bits)));
    }
  }
}

TEST_CASE("tail majorant: frozen value, scaling law, preconditions") {
  licrit::LFunctionDescriptor z = licrit::builtin_zeta();
  unsigned bits = 128;
  BigReal t1 = licrit::tail_estimate(z, 1, 0.0, 1e4, bits);
  CHECK(t1.to_double() >= 1e-4);
  CHECK(t1.to_double() <= 1e-3);
  CHECK(std::fabs(t1.to_double() - 1.7857e-4) < 2e-6);
  // Quadratic in n: doubling n multiplies the bound by exactly 4.
  BigReal t2 = licrit::tail_estimate(z, 2, 0.0, 1e4, bits);
  CHECK(std::fabs(t2.to_double() / t1.to_double() - 4.0) < 1e-12);
  // Quadratic in (1 - 2a).
  BigReal s1 = licrit::tail_estimate(z, 1, -1.0, 1e4, bits);
  CHECK(std::fabs(s1.to_double() / t1.to_double() - 9.0) < 1e-12);
  CHECK_THROWS_AS(licrit::tail_estimate(z, 1, 0.0, 1.0, bits),
                  licrit::domain_error);
  CHECK_THROWS_AS(licrit::tail_estimate(z, 0, 0.0, 100.0, bits),
                  licrit::domain_error);
}

TEST_CASE("single conjugate pair: three algebraic forms of lambda(1, 0)") {
  // For one on-line pair at gamma_1 the n = 1 coefficient collapses to
  // 1/(gamma_1^2 + 1/4) = 4.99899e-3, reachable three independent ways.
  ZeroSet z = single_pair();
  LiResult r = licrit::zero_sum_route(z, params(1, 0.0));
  double v = r.value.re().to_double();
  CHECK(std::fabs(v - 0.0049989888337231) < 1e-12);
  CHECK(r.value.im().to_double() == 0.0);
  // Form 2: direct rational expression.
  unsigned bits = 256;
  BigReal g = BigReal::parse("14.1347251417346937904572519836", bits);
  BigReal want = 1 / (g * g + BigReal::of(0.25, bits));
  CHECK(std::fabs(r.value.re().to_double() - want.to_double()) < 1e-25);
  // Form 3: 2(1 - cos theta) with cos theta = (4g^2 - 1)/(4g^2 + 1).
  BigReal four_g2 = 4 * (g * g);
  BigReal ct = (four_g2 - 1) / (four_g2 + 1);
  BigReal form3 = 2 * (1 - ct);
  CHECK(std::fabs(form3.to_double() - v) < 1e-25);
  // The closed n = 1 reduction agrees as well.
  BigReal red = licrit::li1_closed_reduction(z, 0.0, bits);
  CHECK(std::fabs(red.to_double() - v) < 1e-25);
}

TEST_CASE("zero-sum route on the T = 100 table") {
  ZeroSet z = load_or_find("zeros_T100.txt", 100.0);
  LiResult r1 = licrit::zero_sum_route(z, params(1, 0.0));
  // 29 zeros reach about 75% of lambda_1; the rest is tail.
  CHECK(r1.value.re().to_double() > 0.015);
  CHECK(r1.value.re().to_double() < 0.0230957);
  CHECK(r1.route == "zero_sum");
  CHECK(r1.error_bound.to_double() > 0.0);
  CHECK(!r1.heuristic_bound);
  CHECK(r1.diagnostics.count("zeros_used") == 1);
  // n = 1 closed reduction matches to working accuracy.
  BigReal red = licrit::li1_closed_reduction(z, 0.0, r1.bits);
  CHECK(std::fabs(red.to_double() - r1.value.re().to_double()) <
        std::ldexp(1.0, 40 - static_cast<int>(r1.bits)));
  // Chebyshev form is algebraically identical: match to near round-off.
  for (long n : {1L, 7L, 50L}) {
    LiResult zs = licrit::zero_sum_route(z, params(n, -0.5));
    LiResult ch = licrit::chebyshev_route(z, params(n, -0.5));
    unsigned b = std::min(zs.bits, ch.bits);
    double allow = std::max(1.0, std::fabs(zs.value.re().to_double())) *
                   std::ldexp(1.0, 40 - static_cast<int>(b));
    CHECK(cdist(zs.value, ch.value) <= allow);
    CHECK(ch.route == "chebyshev");
  }
}

TEST_CASE("negated index is the exact conjugate") {
  ZeroSet z = load_or_find("zeros_T100.txt", 100.0);
  // On-line only: the sum is even in n, and the code path is identical.
  LiResult pos = licrit::zero_sum_route(z, params(9, -0.3));
  LiResult neg = licrit::zero_sum_route(z, params(9, -0.3), true);
  CHECK((pos.value - conj(neg.value)).re().to_double() == 0.0);
  CHECK((pos.value - conj(neg.value)).im().to_double() == 0.0);
  // With off-line entries the values stay real and equal to rounding.
  ZeroSet zi = licrit::inject_zero(z, 0.7, 10.0);
  LiResult posi = licrit::zero_sum_route(zi, params(9, -0.3));
  LiResult negi = licrit::zero_sum_route(zi, params(9, -0.3), true);
  CHECK(cdist(posi.value, conj(negi.value)) <
        std::max(1.0, std::fabs(posi.value.re().to_double())) *
            std::ldexp(1.0, 40 - static_cast<int>(posi.bits)));
}

TEST_CASE("off-line entries enter through the exact power form") {
  // A bare off-line pair (no on-line zeros, complete_to = 2 to mark the
  // empty on-line part as deliberate).
  ZeroSet z;
  z.offline.push_back({BigReal::of(0.8, 192), BigReal::of(14.0, 192), 1});
  z.offline.push_back({BigReal::of(0.2, 192), BigReal::of(14.0, 192), 1});
  z.complete_to = 2.0;
  LiResult r = licrit::zero_sum_route(z, params(3, 0.0));
  // Oracle: sum over the four zeros beta +- i gamma, 1-beta +- i gamma of
  // 1 - ((rho)/(rho-1))^3, assembled in double complex arithmetic.
  std::complex<double> total = 0.0;
  for (std::complex<double> rho : {std::complex<double>(0.8, 14.0),
                                   std::complex<double>(0.8, -14.0),
                                   std::complex<double>(0.2, 14.0),
                                   std::complex<double>(0.2, -14.0)}) {
    std::complex<double> w = rho / (rho - 1.0);
    total += 1.0 - w * w * w;
  }
  CHECK(std::fabs(total.imag()) < 1e-12); // sanity of the oracle itself
  CHECK(std::fabs(r.value.re().to_double() - total.real()) < 1e-10);
  // The Chebyshev route refuses off-line entries.
  CHECK_THROWS_AS(licrit::chebyshev_route(z, params(3, 0.0)),
                  licrit::domain_error);
}

TEST_CASE("zero-sum preconditions") {
  ZeroSet empty;
  CHECK_THROWS_AS(licrit::zero_sum_route(empty, params(1, 0.0)),
                  licrit::domain_error);
  ZeroSet z = single_pair();
  CHECK_THROWS_AS(licrit::zero_sum_route(z, params(1, 0.5)),
                  licrit::domain_error);
  CHECK_THROWS_AS(licrit::zero_sum_route(z, params(0, 0.0)),
                  licrit::domain_error);
}

TEST_CASE("sequence evaluation matches the per-index route") {
  ZeroSet z = load_or_find("zeros_T100.txt", 100.0);
  licrit::LFunctionDescriptor zeta = licrit::builtin_zeta();
  for (double a : {0.0, -1.0}) {
    std::vector<LiResult> seq = licrit::zero_sum_sequence(z, zeta, 40, a, 1);
    REQUIRE(seq.size() == 40);
    LiParams p = params(1, a);
    p.precision.override_bits = 256; // match the sequence's fixed width
    for (long n : {1L, 2L, 17L, 40L}) {
      p.n = n;
      LiResult one = licrit::zero_sum_route(z, p);
      CHECK(std::fabs(seq[n - 1].value.re().to_double() -
                      one.value.re().to_double()) <
            std::max(1.0, std::fabs(one.value.re().to_double())) * 1e-50);
      // Tail bounds scale as n^2 off the n = 1 base.
      CHECK(std::fabs(seq[n - 1].error_bound.to_double() /
                          seq[0].error_bound.to_double() -
                      static_cast<double>(n) * static_cast<double>(n)) <
            1e-9 * n * n);
    }
    // Threading is result-invariant.
    std::vector<LiResult> seq2 = licrit::zero_sum_sequence(z, zeta, 40, a, 3);
    for (size_t i = 0; i < seq.size(); ++i)
      CHECK((seq[i].value - seq2[i].value).re().to_double() == 0.0);
  }
}

TEST_CASE("prime-side assembly at a = -1 reproduces the zero-count data") {
  licrit::LFunctionDescriptor zeta = licrit::builtin_zeta();
  // Hand-assembled reference: lambda(1, -1) = 0.2070 from the four blocks
  // (pole 4.5, conductor -1.7171, prime block -1.70988, gamma block
  // -0.86582), cutoff M = 1e6.
  LiResult r = licrit::arithmetic_route(zeta, params(1, -1.0));
  CHECK(std::fabs(r.value.re().to_double() - 0.2070) < 2e-3);
  CHECK(r.route == "arithmetic");
  CHECK(r.heuristic_bound);
  CHECK(r.diagnostics.count("pole_block") == 1);
  CHECK(r.diagnostics.count("tail_majorant_log10") == 1);
  // Against the zero sum over the T = 500 table, within combined bounds.
  ZeroSet z = load_or_find("zeros_T500.txt", 500.0);
  for (double a : {-1.0, -0.25}) {
    for (long n = 1; n <= 3; ++n) {
      LiResult ar = licrit::arithmetic_route(zeta, params(n, a));
      LiResult zs = licrit::zero_sum_route(z, params(n, a));
      double allow = 2.0 * (ar.error_bound.to_double() +
                            zs.error_bound.to_double());
      CHECK(cdist(ar.value, zs.value) <= allow);
    }
  }
}

TEST_CASE("prime-side assembly preconditions") {
  licrit::LFunctionDescriptor zeta = licrit::builtin_zeta();
  CHECK_THROWS_AS(licrit::arithmetic_route(zeta, params(1, 0.0)),
                  licrit::domain_error);
  CHECK_THROWS_AS(licrit::arithmetic_route(zeta, params(1, 0.3)),
                  licrit::domain_error);
  LiParams p = params(1, -1.0);
  p.M = 50.0;
  CHECK_THROWS_AS(licrit::arithmetic_route(zeta, p), licrit::domain_error);
}

TEST_CASE("counterterm ladder at a = 0") {
  licrit::LFunctionDescriptor zeta = licrit::builtin_zeta();
  // lambda_1 = 1 + gamma/2 - log(4 pi)/2 = 0.023095708966121034.
  unsigned bits = 192;
  BigReal lam1 = 1 + BigReal::euler_gamma(bits) / 2 -
                 log(4 * BigReal::pi(bits)) / 2;
  CHECK(std::fabs(lam1.to_double() - 0.0230957089661210338) < 1e-16);
  LiResult r = licrit::classical_route(zeta, params(1, 0.0));
  CHECK(std::fabs(r.value.re().to_double() - lam1.to_double()) < 5e-3);
  CHECK(r.route == "classical");
  CHECK(r.diagnostics.count("ladder_ratio") == 1);
  CHECK(r.diagnostics.count("cutoff_X") == 1);
  // n = 2, 3 against the zero sum within combined bounds.
  ZeroSet z = load_or_find("zeros_T500.txt", 500.0);
  for (long n = 2; n <= 3; ++n) {
    LiResult cl = licrit::classical_route(zeta, params(n, 0.0));
    LiResult zs = licrit::zero_sum_route(z, params(n, 0.0));
    double allow = 2.0 * (cl.error_bound.to_double() +
                          zs.error_bound.to_double());
    CHECK(cdist(cl.value, zs.value) <= allow);
  }
  // Preconditions: the route exists only at a = 0 and needs X >= 100.
  CHECK_THROWS_AS(licrit::classical_route(zeta, params(1, -0.5)),
                  licrit::domain_error);
  LiParams p = params(1, 0.0);
  p.X = 10.0;
  CHECK_THROWS_AS(licrit::classical_route(zeta, p), licrit::domain_error);
}

TEST_CASE("shift constant: exact special values and self-checks") {
  licrit::LFunctionDescriptor zeta = licrit::builtin_zeta();
  unsigned bits = 256;
  // a = 0 short-circuits to exactly zero.
  licrit::CfaResult c0 = licrit::cfa_constant(zeta, 0.0, 64, bits);
  CHECK(c0.value.re().to_double() == 0.0);
  CHECK(c0.value.im().to_double() == 0.0);
  // a = -1 for zeta: (1/2)[psi(1) - psi(1/2)] = log 2.
  licrit::CfaResult c1 = licrit::cfa_constant(zeta, -1.0, 64, bits);
  BigReal want = log(BigReal::of_long(2, bits));
  CHECK(std::fabs(c1.value.re().to_double() - want.to_double()) < 1e-20);
  CHECK(c1.value.im().to_double() == 0.0);
  // chi4 at a = -1: (1/2)[psi(3/2) - psi(1)] = 1 - log 2.
  licrit::LFunctionDescriptor d4 = licrit::builtin_dirichlet(
      4, {{0.0, 0.0}, {1.0, 0.0}, {0.0, 0.0}, {-1.0, 0.0}});
  licrit::CfaResult c4 = licrit::cfa_constant(d4, -1.0, 64, bits);
  CHECK(std::fabs(c4.value.re().to_double() - (1.0 - want.to_double())) < 1e-20);
  // Inside the series disc the K-term check runs; the tail bound is honest.
  licrit::CfaResult cs = licrit::cfa_constant(zeta, -0.5, 32, bits);
  CHECK(cs.tail_bound.to_double() >= 0.0);
  // Preconditions: K >= 2 and the digamma arguments inside the domain.
  CHECK_THROWS_AS(licrit::cfa_constant(zeta, -0.5, 1, bits),
                  licrit::domain_error);
  CHECK_THROWS_AS(licrit::cfa_constant(zeta, -1.1, 64, bits),
                  licrit::domain_error);
}

TEST_CASE("leading-order growth route") {
  licrit::LFunctionDescriptor zeta = licrit::builtin_zeta();
  // Frozen: lambda(100, 0) ~ 50 log 100 + 100 c_F = 117.2254392240139.
  LiResult r = licrit::asymptotic_route(zeta, params(100, 0.0));
  CHECK(std::fabs(r.value.re().to_double() - 117.2254392240139) < 1e-9);
  CHECK(r.route == "asymptotic");
  CHECK(r.heuristic_bound);
  CHECK(std::fabs(r.error_bound.to_double() -
                  std::sqrt(100.0) * std::log(100.0)) < 1e-9);
  CHECK(std::fabs(r.diagnostics.at("shift_constant") -
                  (-1.1303307007539063)) < 1e-12);
  // a = -1: the leading term carries the (1/2 - a) d_F = 3/2 slope.
  LiResult r4 = licrit::asymptotic_route(zeta, params(400, -1.0));
  CHECK(std::fabs(r4.diagnostics.at("leading_term") - 3594.8787282647892) <
        1e-8);
  CHECK(std::fabs(r4.value.re().to_double() - 2411.0911308311702) < 1e-8);
  CHECK_THROWS_AS(licrit::asymptotic_route(zeta, params(10, 0.5)),
                  licrit::domain_error);
  CHECK_THROWS_AS(licrit::asymptotic_route(zeta, params(0, 0.0)),
                  licrit::domain_error);
}

TEST_CASE("generating-transform quadrature at rational probe points") {
  // n=1, a=-1, s=3: 1 - ((s+a-1)/(s-a)) = 1 - 1/4 = 3/4.
  licrit::QuadratureCheck q1 =
      licrit::test_function_check(1, -1.0, BigComplex::of(3.0, 0.0, 256), 1e-8);
  CHECK(q1.agree);
  CHECK(std::fabs(q1.closed_form.re().to_double() - 0.75) < 1e-25);
  CHECK(std::fabs(q1.numeric.re().to_double() - 0.75) < 1e-8);
  // n=2, a=-1, s=2: the ratio vanishes, value 1.
  licrit::QuadratureCheck q2 =
      licrit::test_function_check(2, -1.0, BigComplex::of(2.0, 0.0, 256), 1e-8);
  CHECK(q2.agree);
  CHECK(std::fabs(q2.closed_form.re().to_double() - 1.0) < 1e-25);
  // n=3, a=-1, s=4: 1 - (2/5)^3 = 117/125.
  licrit::QuadratureCheck q3 =
      licrit::test_function_check(3, -1.0, BigComplex::of(4.0, 0.0, 256), 1e-8);
  CHECK(q3.agree);
  CHECK(std::fabs(q3.closed_form.re().to_double() - 0.936) < 1e-25);
  // A complex probe point.
  licrit::QuadratureCheck qc =
      licrit::test_function_check(2, 0.0, BigComplex::of(2.0, 5.0, 256), 1e-8);
  CHECK(qc.agree);
  // Preconditions.
  CHECK_THROWS_AS(
      licrit::test_function_check(1, 0.0, BigComplex::of(-1.0, 0.0, 256), 1e-8),
      licrit::domain_error);
  CHECK_THROWS_AS(
      licrit::test_function_check(1, 0.0, BigComplex::of(3.0, 0.0, 256), 1e-45),
      licrit::domain_error);
}

TEST_CASE("pairwise comparison semantics") {
  ZeroSet z = load_or_find("zeros_T100.txt", 100.0);
  LiResult zs = licrit::zero_sum_route(z, params(4, -0.5));
  LiResult ch = licrit::chebyshev_route(z, params(4, -0.5));
  licrit::CrossValidation cv = licrit::cross_validate({zs, ch});
  CHECK(cv.ok);
  REQUIRE(cv.pairs.size() == 1);
  CHECK(cv.pairs[0].ok);
  CHECK(cv.pairs[0].residual <= cv.pairs[0].allowance);
  // Mixed (n, a) inputs are rejected.
  LiResult other = licrit::zero_sum_route(z, params(5, -0.5));
  CHECK_THROWS_AS(licrit::cross_validate({zs, other}), licrit::domain_error);
  // A forged disagreement on the strict zero-sum/Chebyshev pair fails.
  LiResult forged = ch;
  forged.value = ch.value + BigComplex::of(1e-3, 0.0, ch.bits);
  licrit::CrossValidation bad = licrit::cross_validate({zs, forged});
  CHECK(!bad.ok);
  // Pairs with the asymptotic route are skipped below n = 50.
  LiResult asym = licrit::asymptotic_route(licrit::builtin_zeta(),
                                           params(4, -0.5));
  licrit::CrossValidation sk = licrit::cross_validate({zs, asym});
  CHECK(sk.pairs.empty());
  CHECK(!sk.skipped.empty());
  CHECK(sk.ok);
}

TEST_CASE("route orchestration picks every applicable route") {
  licrit::LFunctionDescriptor zeta = licrit::builtin_zeta();
  ZeroSet z = load_or_find("zeros_T500.txt", 500.0);
  // a = -1: zero sum, Chebyshev, and the prime-side assembly all run;
  // the asymptotic regime is skipped at n = 2.
  licrit::CrossValidation cv =
      licrit::cross_validate(zeta, z, params(2, -1.0));
  CHECK(cv.ok);
  CHECK(cv.results.size() == 3);
  bool saw_arith = false, skip_asym = false;
  for (const LiResult& r : cv.results)
    if (r.route == "arithmetic") saw_arith = true;
  for (const std::string& s : cv.skipped)
    if (s.find("asymptotic") != std::string::npos) skip_asym = true;
  CHECK(saw_arith);
  CHECK(skip_asym);
  // a = 0.2: only the two zero-set routes apply.
  licrit::CrossValidation cv2 =
      licrit::cross_validate(zeta, z, params(2, 0.2));
  CHECK(cv2.ok);
  CHECK(cv2.results.size() == 2);
  // Off-line entries knock out the Chebyshev route; with a also positive
  // only one route remains and the comparison refuses to pretend.
  ZeroSet zi = licrit::inject_zero(z, 0.7, 10.0);
  CHECK_THROWS_AS(licrit::cross_validate(zeta, zi, params(2, 0.2)),
                  licrit::domain_error);
  // At a = 0 the off-line set still has zero-sum + classical.
  licrit::CrossValidation cv3 =
      licrit::cross_validate(zeta, zi, params(1, 0.0));
  CHECK(cv3.results.size() >= 2);
  bool skip_cheb = false;
  for (const std::string& s : cv3.skipped)
    if (s.find("chebyshev") != std::string::npos) skip_cheb = true;
  CHECK(skip_cheb);
}
