#include "licrit/special.hpp"

#include <cmath>
#include <mutex>
#include <vector>

namespace licrit {

namespace {

// Extra guard bits for internal series evaluation; results are rounded back
// to the operand width at the end, keeping the contract error 2^{8-p}.
constexpr unsigned kGuardBits = 32;

std::mutex g_tangent_mutex;
std::vector<mpz_class> g_tangent; // g_tangent[k-1] = T_k

// Extends the tangent-number cache to hold T_1..T_n using the integer
// triangle recurrence (exact, no floating point).
void extend_tangent_cache(unsigned n) {
  if (g_tangent.size() >= n) return;
  std::vector<mpz_class> t(n + 1);
  t[1] = 1;
  for (unsigned k = 2; k <= n; ++k) t[k] = t[k - 1] * (k - 1);
  for (unsigned k = 2; k <= n; ++k)
    for (unsigned j = k; j <= n; ++j)
      t[j] = t[j - 1] * (j - k) + t[j] * (j - k + 2);
  g_tangent.assign(t.begin() + 1, t.end());
}

// Shift radius for the Stirling series at working precision p: the series'
// smallest term at |z| = r is about 2^{-9r}, so r = p/8 + margin keeps the
// optimal truncation below the target.
unsigned stirling_radius(unsigned p_work, unsigned m = 0) {
  return p_work / 8 + m + 8;
}

BigReal half_log_two_pi(unsigned bits) {
  BigReal v = log(BigReal::pi(bits) * 2);
  v /= 2;
  return v;
}

} // namespace

mpz_class binomial(unsigned long n, unsigned long k) {
  if (k > n) throw domain_error("binomial: k > n");
  mpz_class r;
  mpz_bin_uiui(r.get_mpz_t(), n, k);
  return r;
}

mpz_class factorial(unsigned long n) {
  mpz_class r;
  mpz_fac_ui(r.get_mpz_t(), n);
  return r;
}

mpz_class tangent_number(unsigned k) {
  if (k == 0) throw domain_error("tangent_number: k >= 1 required");
  std::lock_guard<std::mutex> lock(g_tangent_mutex);
  if (g_tangent.size() < k) extend_tangent_cache(k + 16);
  return g_tangent[k - 1];
}

BigReal bernoulli2k(unsigned k, unsigned bits) {
  if (k == 0) return BigReal::of_long(1, bits);
  mpz_class tk = tangent_number(k);
  mpz_class num = tk * (2 * static_cast<unsigned long>(k));
  if (k % 2 == 0) num = -num; // sign (-1)^{k-1}
  mpz_class p16, p4;
  mpz_ui_pow_ui(p16.get_mpz_t(), 16, k);
  mpz_ui_pow_ui(p4.get_mpz_t(), 4, k);
  return BigReal::of_ratio(num, p16 - p4, bits);
}

BigReal bernoulli_over_factorial(unsigned k, unsigned bits) {
  if (k == 0) return BigReal::of_long(1, bits);
  mpz_class tk = tangent_number(k);
  mpz_class num = tk * (2 * static_cast<unsigned long>(k));
  if (k % 2 == 0) num = -num;
  mpz_class p16, p4;
  mpz_ui_pow_ui(p16.get_mpz_t(), 16, k);
  mpz_ui_pow_ui(p4.get_mpz_t(), 4, k);
  mpz_class den = (p16 - p4) * factorial(2 * static_cast<unsigned long>(k));
  return BigReal::of_ratio(num, den, bits);
}

BigReal incomplete_gamma_int(unsigned k, const BigReal& x) {
  if (k == 0) throw domain_error("incomplete_gamma_int: k >= 1 required");
  if (x.sign() < 0) throw domain_error("incomplete_gamma_int: x >= 0 required");
  unsigned p = x.bits() + kGuardBits;
  BigReal xi = x.to_bits(p);
  BigReal term = BigReal::of_long(1, p); // x^j / j!
  BigReal sum = term;
  for (unsigned j = 1; j < k; ++j) {
    term *= xi;
    term /= static_cast<long>(j);
    sum += term;
  }
  BigReal r = exp(-xi) * sum;
  r *= BigReal::of_mpz(factorial(k - 1), p);
  return r.to_bits(x.bits());
}

namespace {

// Stirling series core for log Gamma, valid once |z| >= radius; z must have
// Re z > 0 here (the public wrappers shift first).
BigComplex log_gamma_stirling(const BigComplex& z, unsigned p_work) {
  unsigned p = p_work;
  BigComplex lz = log(z);
  BigComplex half(BigReal::of_ratio(1, 2, p), BigReal::of_long(0, p));
  BigComplex acc = (z - half) * lz - z;
  acc += BigComplex(half_log_two_pi(p), BigReal::of_long(0, p));

  BigComplex w = inverse(z * z); // z^{-2}
  BigComplex u = inverse(z);     // z^{1-2j}, starts at z^{-1}
  BigReal acc_scale = abs(acc) + BigReal::of_long(1, p);
  for (unsigned j = 1; j < 16384; ++j) {
    BigReal coef =
        bernoulli2k(j, p) / static_cast<long>(2 * j) / static_cast<long>(2 * j - 1);
    BigComplex term = coef * u;
    acc += term;
    BigReal mag = abs(term);
    // Stop when the term is far below the result scale; the Stirling series
    // remainder is bounded by the first omitted term (times a modest secant
    // factor for |arg z| < pi/4, absorbed by the extra guard margin).
    if (mag * pow_si(BigReal::of_long(2, 32), static_cast<long>(p - 16)) < acc_scale)
      break;
    u *= w;
  }
  return acc;
}

} // namespace

BigComplex log_gamma(const BigComplex& z) {
  unsigned p_out = z.bits();
  unsigned p = p_out + kGuardBits;
  if (!z.is_finite()) throw domain_error("log_gamma: non-finite argument");
  if (z.im().is_zero() && z.re().sign() <= 0)
    throw domain_error("log_gamma: requires Re z > 0 (real axis poles)");
  if (z.re().sign() <= 0 && abs(z.im()).cmp_d(1e-300) < 0)
    throw domain_error("log_gamma: requires Re z > 0");

  BigComplex zz = z.to_bits(p);
  unsigned r0 = stirling_radius(p);
  // Shift z upward until |z| >= r0, accumulating sum of log(z + i).
  BigComplex shift_sum(BigReal::of_long(0, p), BigReal::of_long(0, p));
  double zr = zz.re().to_double(), zi = zz.im().to_double();
  double mod = std::sqrt(zr * zr + zi * zi);
  long m = 0;
  if (mod < static_cast<double>(r0))
    m = static_cast<long>(static_cast<double>(r0) - zr) + 1;
  if (m < 0) m = 0;
  for (long i = 0; i < m; ++i) {
    shift_sum += log(zz);
    zz.re() += 1;
  }
  BigComplex res = log_gamma_stirling(zz, p);
  res -= shift_sum;
  return res.to_bits(p_out);
}

BigReal log_gamma(const BigReal& x) {
  if (x.sign() <= 0) throw domain_error("log_gamma: requires x > 0");
  BigComplex z(x, BigReal::of_long(0, x.bits()));
  return log_gamma(z).re();
}

BigComplex polygamma(unsigned m, const BigComplex& z) {
  unsigned p_out = z.bits();
  unsigned p = p_out + kGuardBits;
  if (!z.is_finite()) throw domain_error("polygamma: non-finite argument");
  if (z.im().is_zero() && z.re().sign() <= 0)
    throw domain_error("polygamma: requires Re z > 0 (real axis poles)");
  if (z.re().sign() <= 0 && abs(z.im()).cmp_d(1e-300) < 0)
    throw domain_error("polygamma: requires Re z > 0");

  BigComplex zz = z.to_bits(p);
  unsigned r0 = stirling_radius(p, m);
  double zr = zz.re().to_double();
  double zi = zz.im().to_double();
  double mod = std::sqrt(zr * zr + zi * zi);
  long shift = 0;
  if (mod < static_cast<double>(r0))
    shift = static_cast<long>(static_cast<double>(r0) - zr) + 1;
  if (shift < 0) shift = 0;

  // psi^{(m)}(z) = psi^{(m)}(z + M) - sum_{i<M} d^m/dz^m 1/(z+i)
  //             = psi^{(m)}(z + M) - (-1)^m m! sum_{i<M} (z+i)^{-m-1}.
  BigComplex correction(BigReal::of_long(0, p), BigReal::of_long(0, p));
  for (long i = 0; i < shift; ++i) {
    correction += pow_si(zz, -static_cast<long>(m) - 1);
    zz.re() += 1;
  }
  BigReal mfact = BigReal::of_mpz(factorial(m), p);
  if (m % 2 == 1) mfact.negate(); // (-1)^m m!
  correction = mfact * correction;

  BigComplex acc(BigReal::of_long(0, p), BigReal::of_long(0, p));
  if (m == 0) {
    // psi(z) = log z - 1/(2z) - sum_j B_{2j}/(2j) z^{-2j}
    acc = log(zz);
    BigComplex invz = inverse(zz);
    BigComplex half(BigReal::of_ratio(1, 2, p), BigReal::of_long(0, p));
    acc -= half * invz;
    BigComplex w = invz * invz;
    BigComplex u = w; // z^{-2j}
    BigReal scale = abs(acc) + BigReal::of_long(1, p);
    for (unsigned j = 1; j < 16384; ++j) {
      BigReal coef = bernoulli2k(j, p) / static_cast<long>(2 * j);
      BigComplex term = coef * u;
      acc -= term;
      if (abs(term) * pow_si(BigReal::of_long(2, 32), static_cast<long>(p - 16)) < scale)
        break;
      u *= w;
    }
  } else {
    // psi^{(m)}(z) = (-1)^{m-1} [ (m-1)!/z^m + m!/(2 z^{m+1})
    //                + sum_j B_{2j} (2j+m-1)!/(2j)! z^{-2j-m} ]
    BigComplex zpm = pow_si(zz, -static_cast<long>(m)); // z^{-m}
    BigComplex invz = inverse(zz);
    acc = BigReal::of_mpz(factorial(m - 1), p) * zpm;
    BigComplex t2 = BigReal::of_mpz(factorial(m), p) * (zpm * invz);
    BigComplex half(BigReal::of_ratio(1, 2, p), BigReal::of_long(0, p));
    acc += half * t2;
    BigComplex w = invz * invz;
    BigComplex u = zpm * w; // z^{-2j-m}
    // c_j = (2j+m-1)!/(2j)!  (ratio update per j)
    BigReal c = BigReal::of_mpz(factorial(m + 1), p) / 2; // j=1: (m+1)!/2!
    BigReal scale = abs(acc) + BigReal::of_long(1, p);
    for (unsigned j = 1; j < 16384; ++j) {
      BigReal coef = bernoulli2k(j, p) * c;
      BigComplex term = coef * u;
      acc += term;
      if (abs(term) * pow_si(BigReal::of_long(2, 32), static_cast<long>(p - 16)) < scale)
        break;
      u *= w;
      c *= static_cast<long>(2 * j + m) * static_cast<long>(2 * j + m + 1);
      c /= static_cast<long>(2 * j + 1) * static_cast<long>(2 * j + 2);
    }
    if (m % 2 == 0) acc = -acc; // (-1)^{m-1}
  }
  acc -= correction;
  return acc.to_bits(p_out);
}

BigReal polygamma(unsigned m, const BigReal& x) {
  if (x.sign() <= 0)
    throw domain_error("polygamma: requires x > 0 on the real axis");
  BigComplex z(x, BigReal::of_long(0, x.bits()));
  return polygamma(m, z).re();
}

BigComplex hurwitz_zeta(unsigned s, const BigComplex& q) {
  if (s < 2) throw domain_error("hurwitz_zeta: integer s >= 2 required");
  if (q.re().sign() <= 0) throw domain_error("hurwitz_zeta: requires Re q > 0");
  unsigned p_out = q.bits();
  unsigned p = p_out + kGuardBits;
  BigComplex qq = q.to_bits(p);
  double qre = qq.re().to_double();
  double qim = qq.im().to_double();

  // Summation split N: far enough out that the Euler-Maclaurin tail terms
  // decay well below 2^{-p} before the series turns, and |arg(N+q)| <= ~0.33
  // so the complex remainder bound stays within the guard margin.
  long N = static_cast<long>(p) * 2 / 5;
  long n_min_s = static_cast<long>(s) * 3 / 4;
  long n_min_im = static_cast<long>(3.0 * std::fabs(qim));
  if (N < n_min_s) N = n_min_s;
  if (N < n_min_im) N = n_min_im;
  if (N < 8) N = 8;
  if (qre > 1.0) {
    long reduce = static_cast<long>(qre);
    N -= std::min(reduce, N - 8);
  }

  // Main block: sum_{m<N} (m+q)^{-s}.
  BigComplex acc(BigReal::of_long(0, p), BigReal::of_long(0, p));
  BigComplex base = qq;
  for (long m = 0; m < N; ++m) {
    acc += pow_si(base, -static_cast<long>(s));
    base.re() += 1;
  }
  // base is now N + q.
  const BigComplex& nq = base;
  BigComplex nq_pow = pow_si(nq, -static_cast<long>(s) + 1); // (N+q)^{1-s}
  BigComplex invnq = inverse(nq);
  acc += BigComplex(BigReal::of_ratio(1, static_cast<long>(s) - 1, p),
                    BigReal::of_long(0, p)) *
         nq_pow;
  BigComplex nq_pow_s = nq_pow * invnq; // (N+q)^{-s}
  BigComplex half(BigReal::of_ratio(1, 2, p), BigReal::of_long(0, p));
  acc += half * nq_pow_s;

  // Correction terms B_{2j}/(2j)! * (s)_{2j-1} * (N+q)^{-s-2j+1}.
  BigComplex w = invnq * invnq;
  BigComplex u = nq_pow_s * invnq; // (N+q)^{-s-1}, exponent -s-2j+1 at j=1
  BigReal poch = BigReal::of_long(static_cast<long>(s), p); // (s)_{2j-1}, j=1
  BigReal scale = abs(acc) + BigReal::of_long(1, p);
  for (unsigned j = 1; j < 16384; ++j) {
    BigReal coef = bernoulli_over_factorial(j, p) * poch;
    BigComplex term = coef * u;
    acc += term;
    if (abs(term) * pow_si(BigReal::of_long(2, 32), static_cast<long>(p - 16)) < scale)
      break;
    u *= w;
    poch *= static_cast<long>(s + 2 * j - 1) * static_cast<long>(s + 2 * j);
  }
  return acc.to_bits(p_out);
}

BigReal hurwitz_zeta(unsigned s, const BigReal& q) {
  BigComplex z(q, BigReal::of_long(0, q.bits()));
  return hurwitz_zeta(s, z).re();
}

BigReal chebyshev(ChebyshevKind kind, unsigned n, const BigReal& x) {
  unsigned p = x.bits();
  BigReal prev = BigReal::of_long(1, p); // T_0 = U_0 = 1
  if (n == 0) return prev;
  BigReal cur = kind == ChebyshevKind::first ? x : x * 2;
  BigReal two_x = x * 2;
  for (unsigned k = 2; k <= n; ++k) {
    BigReal next = two_x * cur - prev;
    prev = std::move(cur);
    cur = std::move(next);
  }
  return cur;
}

} // namespace licrit
