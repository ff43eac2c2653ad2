#pragma once

#include <map>
#include <string>
#include <vector>

#include "licrit/bigfloat.hpp"
#include "licrit/lfunc.hpp"
#include "licrit/precision.hpp"
#include "licrit/zeros.hpp"

namespace licrit {

// Inputs shared by every evaluation route of lambda(n, a).
struct LiParams {
  long n = 1;      // coefficient index, >= 1 (negative indices via conjugation)
  double a = 0.0;  // real shift, a != 1/2
  LFunctionDescriptor descriptor = builtin_zeta();
  PrecisionPolicy precision;
  double X = 1e6;   // classical-route prime cutoff (>= 100)
  double M = 1e6;   // arithmetic-route prime cutoff (>= 100)
  unsigned K = 64;  // term count for the shift-constant series self-check
  unsigned threads = 1;
};

struct LiResult {
  long n = 0;
  double a = 0.0;
  std::string route;
  BigComplex value;
  BigReal error_bound;           // absolute bound on |value - lambda(n,a)|
  bool heuristic_bound = false;  // true when the bound is an empirical spread
                                 // or a model estimate rather than a majorant
  unsigned bits = 0;             // working precision the route actually used
  std::map<std::string, double> diagnostics;
};

// theta with rho = 1/2 + i gamma mapped to e^{i theta}:
// theta = 2 atan((1/2 - a)/gamma), evaluated stably for all gamma > 0.
BigReal zero_angle(const BigReal& gamma, double a, unsigned bits);

// Truncation tail majorant for the zero sum cut at height T:
// n^2 (1-2a)^2 [ (d_F/2pi)(log T + 2) + max(c1, 0) + (5 + log T)/T ] / T
// (zero-density integral beyond T plus a fluctuation guard). Requires T >= 2.
BigReal tail_estimate(const LFunctionDescriptor& d, long n, double a, double T,
                      unsigned bits);

// lambda(n, a) as the explicit sum over the stored zeros; on-line pairs
// contribute 4 m sin^2(n theta / 2), off-line entries the exact Moebius
// powers, conjugates always added analytically. error_bound = tail_estimate
// at T = complete_to. negate_n computes the index -n (exact conjugation
// partner) by direct exponent negation.
LiResult zero_sum_route(const ZeroSet& z, const LiParams& p,
                        bool negate_n = false);

// Independent closed reduction of the n = 1 coefficient:
// (1-2a)^2 sum_{gamma>0} m / ((a-1/2)^2 + gamma^2) plus the exact off-line
// corrections. Shares no code path with zero_sum_route beyond the zero set
// itself; used as a two-sided consistency check.
BigReal li1_closed_reduction(const ZeroSet& z, double a, unsigned bits);

// lambda(1..N, a) in one pass using the cosine angle-addition recurrence per
// zero, at a fixed 256-bit working precision (a documented override of the
// per-n policy: the recurrence is uniformly stable on |cos| <= 1 and the
// sequence is consumed by double-precision growth diagnostics).
std::vector<LiResult> zero_sum_sequence(const ZeroSet& z,
                                        const LFunctionDescriptor& d,
                                        unsigned N, double a,
                                        unsigned threads = 1);

// The same on-line sum routed through Chebyshev polynomials:
// 2 sum_k m_k (1 - T_n(x_k)) with x_k = (4 g^2 - (1-2a)^2)/(4 g^2 + (1-2a)^2).
// Algebraically identical to zero_sum_route, numerically independent.
LiResult chebyshev_route(const ZeroSet& z, const LiParams& p);

// Prime-side evaluation for a < 0: pole, conductor, Dirichlet and gamma
// blocks with the smooth tail completion of the prime sums at the cutoff M.
// The reported error_bound is the doubled spread between the M and M/2
// evaluations (heuristic); the rigorous-but-pessimistic tail majorant is
// exposed in diagnostics.
LiResult arithmetic_route(const LFunctionDescriptor& d, const LiParams& p);

// Prime-side evaluation specialized to a = 0, with the psi-counterterm
// ladder at X, 2X, 4X and Aitken extrapolation when the ladder contracts.
LiResult classical_route(const LFunctionDescriptor& d, const LiParams& p);

// Leading-order growth: (1/2 - a) d_F n log n + n (1-2a) c_F(a), where
// c_F(a) = (d_F/2)(EulerGamma - 1 - log(1-2a)) + (1/2) log(lambda_prod Q^2)
//        + C_F(a). Requires a <= 0. error_bound = sqrt(n) log n (heuristic).
LiResult asymptotic_route(const LFunctionDescriptor& d, const LiParams& p);

// C_F(a) = sum_j lambda_j [psi(lambda_j(1-a) + mu_j) - psi(lambda_j + mu_j)],
// evaluated in closed digamma form and verified against the always-convergent
// double-sum rearrangement (and, strictly inside the disc of convergence,
// against the K-term Hurwitz power series).
struct CfaResult {
  BigComplex value;
  BigReal tail_bound;
};
CfaResult cfa_constant(const LFunctionDescriptor& d, double a, unsigned K,
                       unsigned bits);

// Quadrature check of the coefficient-generating transform at a probe point:
// the integral of the one-sided kernel against e^{(s-1/2)x} must reproduce
// 1 - (1 + (2a-1)/(s-a))^n. Requires Re(s) > a.
struct QuadratureCheck {
  BigComplex numeric;
  BigComplex closed_form;
  bool agree = false;
};
QuadratureCheck test_function_check(long n, double a, const BigComplex& s,
                                    double quad_tol);

// Pairwise consistency of independently computed results for one (n, a):
// |v_i - v_j| <= 2 (bound_i + bound_j). The zero-sum/Chebyshev pair must
// instead match to working accuracy, 2^{40-p} relative. Pairs involving the
// asymptotic route are skipped below n = 50 (outside its regime).
struct RoutePair {
  std::string first, second;
  double residual = 0.0;
  double allowance = 0.0;
  bool ok = false;
};
struct CrossValidation {
  std::vector<LiResult> results;  // the route outputs that were compared
  std::vector<RoutePair> pairs;
  std::vector<std::string> skipped;  // routes not run / pairs not compared, with reasons
  bool ok = true;
};
CrossValidation cross_validate(const std::vector<LiResult>& results);

// Runs every route applicable to (p.n, p.a) — zero sum always, Chebyshev when
// the set has no off-line entries, arithmetic for a < 0, classical at a = 0,
// asymptotic for a <= 0 once n >= 50 — then compares all pairs as above. A
// route that raises on these inputs is recorded in `skipped` with its message
// rather than aborting the comparison. Requires at least two routes to
// complete.
CrossValidation cross_validate(const LFunctionDescriptor& d, const ZeroSet& z,
                               const LiParams& p);

} // namespace licrit
