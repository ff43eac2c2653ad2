#pragma once

#include <complex>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "licrit/bigfloat.hpp"

namespace licrit {

// How the functional-equation scale Q is known. Built-in kinds carry an exact
// symbolic form so Q can be regenerated at any requested precision; literal
// descriptors (loaded from a file with an unknown kind) use the stored value.
enum class QForm {
  literal,           // use the stored 256-bit value
  inv_sqrt_pi,       // Q = pi^{-1/2}   (zeta)
  sqrt_mod_over_pi,  // Q = sqrt(modulus / pi)   (Dirichlet L)
};

struct GammaFactor {
  BigReal lambda;  // > 0
  BigComplex mu;   // Re mu >= 0 for the built-ins
};

enum class CoefficientKind { riemann_zeta, dirichlet_character, file };

// Prime-coefficient data: everything needed to evaluate Lambda_F(n) at any
// precision. Dirichlet characters are stored as exponent tables:
// chi(r) = exp(2*pi*i*chi_exponent[r]/chi_order), with -1 marking chi(r) = 0,
// so values are exact roots of unity regenerable at any width.
struct CoefficientSource {
  CoefficientKind kind = CoefficientKind::riemann_zeta;
  unsigned modulus = 1;
  unsigned chi_order = 1;
  std::vector<long> chi_exponent;
  std::string file_path;
  // kind == file: explicit Lambda_F(n) values (parsed once, double precision).
  std::map<std::uint64_t, std::complex<double>> file_values;

  // chi(n mod modulus) at the requested width (1 for the zeta kind).
  BigComplex chi(std::uint64_t n, unsigned bits) const;
};

struct LFunctionDescriptor {
  std::string name;
  unsigned m_F = 0;  // order of the pole at s = 1
  QForm q_form = QForm::literal;
  BigReal q_literal; // 256-bit stored Q
  std::vector<GammaFactor> gamma_factors;
  BigComplex omega;  // root number; carried for completeness, |omega| = 1
  CoefficientSource coefficients;

  // Q regenerated at the requested width (exact-form kinds recompute from
  // pi; literal kinds re-round the stored value).
  BigReal Q(unsigned bits) const;
};

// The Riemann zeta descriptor: m_F = 1, Q = pi^{-1/2}, one gamma factor
// (1/2, 0), omega = 1.
LFunctionDescriptor builtin_zeta();

// A primitive non-principal Dirichlet character mod q >= 3, given by its
// value table chi[r] for r = 0..q-1 (values are recovered as exact roots of
// unity; tolerance 1e-6). Throws domain_error when the table is not totally
// multiplicative, is principal, or is induced from a smaller modulus.
LFunctionDescriptor builtin_dirichlet(unsigned modulus,
                                      const std::vector<std::complex<double>>& chi);

// Descriptor JSON: {"name", "m_F", "Q", "gamma_factors":
// [{"lambda","mu_re","mu_im"}], "omega_re", "omega_im",
// "coefficients": {"kind": ...}}. Round-trips built-in kinds exactly.
LFunctionDescriptor descriptor_from_json(const std::string& text);
std::string descriptor_to_json(const LFunctionDescriptor& d);

// d_F = 2*sum(lambda_j); q_F = (2*pi)^{d_F} Q^2 prod(lambda_j^{2*lambda_j});
// lambda_product = prod(lambda_j^{2*lambda_j});
// c1 = (log q_F - d_F (log 2*pi + 1)) / (2*pi).
struct StructuralConstants {
  BigReal d_F;
  BigReal q_F;
  BigReal lambda_product;
  BigReal c1;
};
StructuralConstants structural_constants(const LFunctionDescriptor& d, unsigned bits);

/// Lambda_F(n): log p times chi(n) on prime powers n = p^e, else 0.
BigComplex von_mangoldt(const LFunctionDescriptor& d, std::uint64_t n, unsigned bits);

// psi_F(x) = sum_{n <= x} Lambda_F(n) (exact finite sum over prime powers).
BigComplex psi_counting(const LFunctionDescriptor& d, double x, unsigned bits);

struct DerivativeTerm {
  BigComplex value;     // truncated sum for (d/ds)^k [F'/F](s)
  BigReal tail_bound;   // rigorous bound on the omitted m > M mass
};

// Truncated derivatives of F'/F at real s > 1:
//   value_k = (-1)^{k+1} sum_{m <= M} Lambda_F(m) (log m)^k m^{-s},
// for k = 0..k_max, in one pass over prime powers (ascending p, then e).
// tail_bound_k bounds |sum_{m > M}| via |Lambda_F(m)| <= theta*log(m) and the
// integral of (log x)^{k+1} x^{-s} (plus the sup term when the integrand is
// still rising at M) -- honest but very pessimistic for large k.
// 'bits' fixes the working width; threads only changes scheduling, never the
// result (fixed-size chunks merged in index order).
std::vector<DerivativeTerm> logF_derivatives(const LFunctionDescriptor& d,
                                             const BigReal& s, unsigned k_max,
                                             double M, unsigned bits,
                                             unsigned threads = 1);

// Prime enumeration used by the coefficient sums: all primes <= limit,
// ascending (segmented sieve behind a process-lifetime cache; returned by
// value so callers hold a stable snapshot).
std::vector<std::uint32_t> primes_up_to(std::uint64_t limit);

// One-pass variant of logF_derivatives returning the sums truncated at both
// M_lo and M_hi (M_lo <= M_hi); the pair feeds truncation-spread estimates
// without a second pass over the prime powers.
std::pair<std::vector<DerivativeTerm>, std::vector<DerivativeTerm>>
logF_derivatives_pair(const LFunctionDescriptor& d, const BigReal& s,
                      unsigned k_max, double M_lo, double M_hi, unsigned bits,
                      unsigned threads = 1);

} // namespace licrit
