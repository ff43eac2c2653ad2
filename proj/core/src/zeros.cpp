#include "licrit/zeros.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdio>
#include <fstream>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <sstream>
#include <utility>

#include "licrit/detail/chunked.hpp"
#include "licrit/errors.hpp"
#include "licrit/special.hpp"

namespace licrit {

namespace {

constexpr double kTwoPi = 6.2831853071795864769;

// Height below which the accelerated alternating series is used for
// zeta(1/2+it); above it the series' error term (growing like e^{pi t/2})
// would need an absurd number of terms, so Euler-Maclaurin takes over.
constexpr double kEtaCutoff = 48.0;

BigComplex shift(const BigComplex& z, long k) {
  return BigComplex(z.re() + k, z.im());
}

// ---------------------------------------------------------------------------
// double-precision evaluators (grid scan and bisection workhorses)
// ---------------------------------------------------------------------------

// theta(t) = Im log Gamma(1/4 + it/2) - (t/2) log pi by the asymptotic
// expansion; absolute error < 1e-10 for t >= 8.
double theta_double(double t) {
  const double t2 = t * t;
  return 0.5 * t * std::log(t / kTwoPi) - 0.5 * t - M_PI / 8.0 +
         1.0 / (48.0 * t) + 7.0 / (5760.0 * t * t2) +
         31.0 / (80640.0 * t2 * t2 * t);
}

// B_{2j}/(2j)! for j = 1..14, materialized once from the exact rationals.
const double* bof_double() {
  static double v[15];
  static std::once_flag once;
  std::call_once(once, [] {
    v[0] = 1.0;
    for (unsigned j = 1; j <= 14; ++j)
      v[j] = bernoulli_over_factorial(j, 64).to_double();
  });
  return v;
}

// log k and k^{-1/2} tables shared by every double-precision sum. Grown under
// the mutex; find_zeros pre-grows them before its parallel phases so workers
// read a stable prefix.
struct DoubleTables {
  std::vector<double> logk{0.0, 0.0};
  std::vector<double> rsq{0.0, 1.0};
};
DoubleTables g_dbl;
std::mutex g_dbl_mu;

void ensure_double_tables(long n) {
  std::lock_guard<std::mutex> lk(g_dbl_mu);
  while (static_cast<long>(g_dbl.logk.size()) <= n) {
    const double k = static_cast<double>(g_dbl.logk.size());
    g_dbl.logk.push_back(std::log(k));
    g_dbl.rsq.push_back(1.0 / std::sqrt(k));
  }
}

// Z(t) in double precision by Euler-Maclaurin with J = 12 correction terms
// and N ~ 3t/(2 pi); absolute error ~1e-9 for 9 <= t <= ~5e4 (argument
// rounding dominates). Caller must have grown the tables past N.
double em_z_double(double t) {
  const long N = static_cast<long>(std::ceil(0.477 * t)) + 40;
  const double* lg = g_dbl.logk.data();
  const double* rs = g_dbl.rsq.data();
  double sre = 0.0, sim = 0.0;
  for (long k = 1; k < N; ++k) {
    const double a = t * lg[k];
    sre += rs[k] * std::cos(a);
    sim -= rs[k] * std::sin(a);
  }
  const std::complex<double> s(0.5, t);
  std::complex<double> acc(sre, sim);
  const std::complex<double> NmS = std::polar(rs[N], -t * lg[N]);
  const double Nd = static_cast<double>(N);
  acc += NmS * Nd / (s - 1.0);
  acc += 0.5 * NmS;
  const double* bof = bof_double();
  std::complex<double> P = s;       // Pochhammer(s, 2j-1)
  std::complex<double> w = NmS * Nd; // N^{1-s-2j+1} running power
  const double invN2 = 1.0 / (Nd * Nd);
  for (int j = 1; j <= 12; ++j) {
    if (j >= 2) P *= (s + static_cast<double>(2 * j - 3)) * (s + static_cast<double>(2 * j - 2));
    w *= invN2;
    acc += bof[j] * P * w;
  }
  const double th = theta_double(t);
  return std::cos(th) * acc.real() - std::sin(th) * acc.imag();
}

// ---------------------------------------------------------------------------
// arbitrary-precision evaluators
// ---------------------------------------------------------------------------

// Coefficients d_k of the accelerated alternating series, exact integers,
// cached per term count n.
std::shared_ptr<const std::vector<mpz_class>> eta_coefficients(long n) {
  static std::map<long, std::shared_ptr<const std::vector<mpz_class>>> cache;
  static std::mutex mu;
  std::lock_guard<std::mutex> lk(mu);
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;
  auto d = std::make_shared<std::vector<mpz_class>>();
  d->resize(n + 1);
  mpz_class v = 1; // n * (n+i-1)! 4^i / ((n-i)! (2i)!) at i = 0
  (*d)[0] = 1;
  for (long i = 1; i <= n; ++i) {
    v *= 4 * (n + i - 1);
    v *= (n - i + 1);
    mpz_divexact_ui(v.get_mpz_t(), v.get_mpz_t(),
                    static_cast<unsigned long>(2 * i - 1) *
                        static_cast<unsigned long>(2 * i));
    (*d)[i] = (*d)[i - 1] + v;
  }
  cache.emplace(n, d);
  return d;
}

// zeta(1/2 + it) by the accelerated alternating (eta) series; the term count
// follows the published bound 3 (3+sqrt 8)^{-n} (1+2t) e^{pi t / 2} /
// |1 - 2^{1-s}|, so the result carries absolute error below 2^{-target-6}.
BigComplex zeta_half_eta(const BigReal& t, unsigned target_bits) {
  const double td = std::fabs(t.to_double());
  const double need_nats = (target_bits + 8) * std::log(2.0) +
                           M_PI * td / 2.0 + std::log1p(2.0 * td) + 2.0;
  const long n =
      static_cast<long>(std::ceil(need_nats / std::log(3.0 + std::sqrt(8.0)))) + 2;
  const unsigned p =
      target_bits + static_cast<unsigned>(std::ceil(std::log2(n + 2.0))) + 16;
  auto d = eta_coefficients(n);
  const mpz_class& dn = (*d)[n];
  const BigReal tp = t.to_bits(p);
  BigReal sre(p), sim(p), s_(p), c_(p);
  for (long k = 0; k < n; ++k) {
    const BigReal kk = BigReal::of_ulong(static_cast<unsigned long>(k + 1), p);
    sin_cos(s_, c_, tp * log(kk));
    BigReal w = BigReal::of_mpz((*d)[k] - dn, p) / sqrt(kk);
    if (k & 1) w.negate();
    sre.fma_add(w, c_);
    sim -= w * s_;
  }
  const BigReal dnr = BigReal::of_mpz(dn, p);
  const BigComplex eta(-(sre / dnr), -(sim / dnr));
  // 1 - 2^{1-s} with 2^{1-s} = sqrt 2 * e^{-i t log 2}
  sin_cos(s_, c_, tp * BigReal::log2_const(p));
  const BigReal r2 = sqrt(BigReal::of(2.0, p));
  const BigComplex denom(1L - r2 * c_, r2 * s_);
  return (eta / denom).to_bits(target_bits + 8);
}

// log k / k^{-1/2} tables for the arbitrary-precision main sum, valid for one
// precision at a time. All users run under g_line_mu (the evaluations that
// need this path are rare relative to the double-precision workhorses).
struct LineCache {
  unsigned bits = 0;
  std::vector<BigReal> logk, rsq;
};
LineCache g_line;
std::mutex g_line_mu;

void ensure_line_cache_locked(long n, unsigned bits) {
  if (g_line.bits != bits) {
    g_line.bits = bits;
    g_line.logk.assign({BigReal(bits), BigReal(bits)});
    g_line.rsq.assign({BigReal(bits), BigReal::of(1.0, bits)});
  }
  while (static_cast<long>(g_line.logk.size()) <= n) {
    const unsigned long k = g_line.logk.size();
    const BigReal kk = BigReal::of_ulong(k, bits);
    g_line.logk.push_back(log(kk));
    g_line.rsq.push_back(1L / sqrt(kk));
  }
}

// zeta(1/2 + it) by Euler-Maclaurin. The correction series is truncated when
// the standard remainder bound |s+2J+1|/(sigma+2J+1) * |term_{J+1}| drops
// below 2^{-target-8} absolute; if the terms stop contracting first, the main
// sum length N is enlarged by half and the evaluation restarts.
BigComplex zeta_half_em(const BigReal& t, unsigned target_bits) {
  const unsigned p = target_bits + 40;
  const double td = std::fabs(t.to_double());
  double Nd = std::max(48.0, (td + 0.75 * target_bits + 30.0) / 3.0);
  std::lock_guard<std::mutex> lk(g_line_mu);
  for (int attempt = 0; attempt < 8; ++attempt, Nd *= 1.5) {
    const long N = static_cast<long>(std::ceil(Nd));
    ensure_line_cache_locked(N, p);
    const BigReal tp = t.to_bits(p);
    BigReal sre(p), sim(p), s_(p), c_(p);
    for (long k = 1; k < N; ++k) {
      sin_cos(s_, c_, tp * g_line.logk[k]);
      sre.fma_add(g_line.rsq[k], c_);
      sim -= g_line.rsq[k] * s_;
    }
    const BigComplex s(BigReal::of(0.5, p), tp);
    BigComplex acc(sre, sim);
    sin_cos(s_, c_, tp * g_line.logk[N]);
    const BigComplex NmS(g_line.rsq[N] * c_, -(g_line.rsq[N] * s_));
    const BigReal Nb = BigReal::of_ulong(static_cast<unsigned long>(N), p);
    const BigComplex N1mS(NmS.re() * Nb, NmS.im() * Nb); // N^{1-s}
    acc += N1mS / BigComplex(BigReal::of(-0.5, p), tp);  // N^{1-s}/(s-1)
    acc += BigReal::of(0.5, p) * NmS;
    const BigReal invN2 = 1L / (Nb * Nb);
    const BigReal thresh = pow_si(BigReal::of(2.0, p),
                                  -static_cast<long>(target_bits) - 8);
    BigComplex P = s;     // Pochhammer(s, 2j-1)
    BigComplex w = N1mS;  // N^{1-s} N^{-2j} running power
    BigReal prev_mag = abs(acc) + 1L;
    bool converged = false;
    for (unsigned j = 1; j <= p && !converged; ++j) {
      if (j >= 2) P *= shift(s, 2 * j - 3) * shift(s, 2 * j - 2);
      w = BigComplex(w.re() * invN2, w.im() * invN2);
      const BigComplex term = bernoulli_over_factorial(j, p) * (P * w);
      acc += term;
      const BigReal m = abs(term);
      // remainder factor |s+2J+1|/(sigma+2J+1) times the next-term ratio
      const double fac = std::hypot(td, 2.0 * j + 1.5) / (2.0 * j + 1.5);
      const double ratio = std::pow((td + 2.0 * j + 2.0) /
                                        (kTwoPi * static_cast<double>(N)),
                                    2.0);
      if (m * BigReal::of(fac * std::min(ratio, 1.0), p) < thresh) {
        converged = true;
      } else if (m > prev_mag) {
        break; // correction series not contracting: enlarge N
      }
      prev_mag = m;
    }
    if (converged) return acc.to_bits(target_bits + 8);
  }
  throw numeric_error(
      "critical-line Euler-Maclaurin evaluation failed to converge");
}

BigComplex zeta_half_line(const BigReal& t, unsigned bits) {
  return t.cmp_d(kEtaCutoff) <= 0 ? zeta_half_eta(t, bits)
                                  : zeta_half_em(t, bits);
}

// Z(t) = Re(e^{i theta(t)} zeta(1/2+it)) at the requested width.
BigReal Z_big(const BigReal& t, unsigned bits) {
  const BigComplex z = zeta_half_line(t, bits + 8);
  const unsigned p = bits + 16;
  const BigReal th = hardy_theta(t, p);
  BigReal s_(p), c_(p);
  sin_cos(s_, c_, th);
  return (c_ * z.re() - s_ * z.im()).to_bits(bits);
}

std::string format_double(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

} // namespace

// ---------------------------------------------------------------------------
// ZeroSet
// ---------------------------------------------------------------------------

std::size_t ZeroSet::size() const {
  std::size_t n = 0;
  for (const auto& e : online) n += e.multiplicity;
  for (const auto& e : offline) n += e.multiplicity;
  return n;
}

void ZeroSet::validate() const {
  const BigReal* prev = nullptr;
  for (const auto& e : online) {
    if (!e.gamma.is_finite() || e.gamma.sign() <= 0)
      throw domain_error("zero set: ordinates must be finite and positive");
    if (e.multiplicity < 1)
      throw domain_error("zero set: multiplicities must be >= 1");
    if (prev != nullptr && !(e.gamma > *prev))
      throw domain_error("zero set: ordinates must be strictly increasing");
    prev = &e.gamma;
  }
  if (offline.size() % 2 != 0)
    throw domain_error("zero set: off-line entries must form symmetric pairs");
  for (std::size_t i = 0; i + 1 < offline.size(); i += 2) {
    const OfflineEntry& a = offline[i];
    const OfflineEntry& b = offline[i + 1];
    for (const OfflineEntry* e : {&a, &b}) {
      if (!e->beta.is_finite() || e->beta.sign() <= 0 || !(e->beta.cmp_d(1.0) < 0))
        throw domain_error("zero set: off-line beta must lie in (0,1)");
      if (e->beta.cmp_d(0.5) == 0)
        throw domain_error("zero set: off-line beta must differ from 1/2");
      if (!e->gamma.is_finite() || e->gamma.sign() <= 0)
        throw domain_error("zero set: off-line gamma must be positive");
      if (e->multiplicity < 1)
        throw domain_error("zero set: multiplicities must be >= 1");
    }
    if (!((1L - a.beta) == b.beta) || !(a.gamma == b.gamma) ||
        a.multiplicity != b.multiplicity)
      throw domain_error(
          "zero set: off-line entries must pair beta with 1-beta at equal gamma");
  }
  if (!std::isfinite(complete_to) || complete_to < 0.0)
    throw domain_error("zero set: complete_to must be finite and >= 0");
}

// ---------------------------------------------------------------------------
// parsing / serialization
// ---------------------------------------------------------------------------

ZeroSet parse_zero_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw parse_error(path + ": cannot open zero table");
  ZeroSet z;
  z.source = "file:" + path;
  bool have_complete = false;
  double complete = 0.0;
  std::string line;
  std::size_t ln = 0;
  const BigReal* last = nullptr;
  while (std::getline(in, line)) {
    ++ln;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    if (line[first] == '#') {
      if (line.compare(first, 2, "#!") != 0) continue; // plain comment
      std::istringstream iss(line.substr(first + 2));
      std::string kw;
      iss >> kw;
      if (kw == "complete_to") {
        if (!(iss >> complete) || !std::isfinite(complete))
          throw parse_error(path + ": malformed complete_to directive", ln);
        have_complete = true;
      } else if (kw == "offline") {
        std::string bs, gs;
        if (!(iss >> bs >> gs))
          throw parse_error(path + ": offline directive needs beta and gamma", ln);
        unsigned long mult = 1;
        std::string ms;
        if (iss >> ms) {
          try {
            mult = std::stoul(ms);
          } catch (const std::exception&) {
            throw parse_error(path + ": malformed offline multiplicity", ln);
          }
        }
        try {
          z.offline.push_back({BigReal::parse(bs, 192), BigReal::parse(gs, 192),
                               static_cast<unsigned>(mult)});
        } catch (const parse_error& e) {
          throw parse_error(path + ": " + e.what(), ln);
        }
      } else {
        throw parse_error(path + ": unknown directive '" + kw + "'", ln);
      }
      continue;
    }
    std::string body = line;
    const auto hash = body.find('#');
    if (hash != std::string::npos) body.resize(hash);
    std::istringstream iss(body);
    std::string tok, extra;
    iss >> tok;
    if (iss >> extra)
      throw parse_error(path + ": expected one ordinate per line", ln);
    BigReal g;
    try {
      g = BigReal::parse(tok, 192);
    } catch (const parse_error& e) {
      throw parse_error(path + ": " + e.what(), ln);
    }
    if (!g.is_finite() || g.sign() <= 0)
      throw parse_error(path + ": ordinates must be positive", ln);
    if (last != nullptr && !(g > *last))
      throw parse_error(path + ": ordinates must be strictly increasing", ln);
    z.online.push_back({std::move(g), 1, tok});
    last = &z.online.back().gamma;
  }
  if (have_complete)
    z.complete_to = complete;
  else
    z.complete_to = z.online.empty() ? 0.0 : z.online.back().gamma.to_double();
  z.validate();
  return z;
}

std::string serialize_zero_set(const ZeroSet& z) {
  std::ostringstream out;
  out << "# critical-line ordinates, one per line; '#' starts a comment\n";
  if (!z.source.empty()) out << "# source: " << z.source << "\n";
  out << "#! complete_to " << format_double(z.complete_to) << "\n";
  // 60 significant digits round-trip the 192-bit stored values exactly, so
  // the beta / 1-beta pairing survives serialize -> parse unchanged.
  for (const auto& e : z.offline)
    out << "#! offline " << e.beta.str(60) << " " << e.gamma.str(60) << " "
        << e.multiplicity << "\n";
  for (const auto& e : z.online) {
    if (!e.raw.empty())
      out << e.raw << "\n";
    else
      out << e.gamma.str(30) << "\n";
  }
  return out.str();
}

// ---------------------------------------------------------------------------
// evaluators
// ---------------------------------------------------------------------------

BigReal hardy_theta(const BigReal& t, unsigned bits) {
  const unsigned p = bits + 16;
  const BigComplex lg =
      log_gamma(BigComplex(BigReal::of(0.25, p), t.to_bits(p) / 2L));
  return (lg.im() - (t.to_bits(p) / 2L) * log(BigReal::pi(p))).to_bits(bits);
}

BigReal hardy_Z(const BigReal& t, double tol) {
  if (!(tol > 0.0) || !std::isfinite(tol))
    throw domain_error("hardy_Z: tol must be positive and finite");
  const double bits_needed = std::ceil(-std::log2(tol)) + 24.0;
  if (bits_needed > 8192.0)
    throw numeric_error("hardy_Z: tol unachievable at configured precision");
  const unsigned bits = static_cast<unsigned>(std::max(96.0, bits_needed));
  return Z_big(abs(t), bits);
}

BigReal hardy_Z(double t, double tol) {
  return hardy_Z(BigReal::of(t, 64), tol);
}

double count_estimate(const LFunctionDescriptor& d, double T) {
  if (!(T > 1.0)) throw domain_error("count_estimate requires T > 1");
  const StructuralConstants sc = structural_constants(d, 128);
  const BigReal Tb = BigReal::of(T, 128);
  const BigReal est =
      sc.d_F * Tb * log(Tb) / (2L * BigReal::pi(128)) + sc.c1 * Tb;
  return est.to_double();
}

// ---------------------------------------------------------------------------
// zero location
// ---------------------------------------------------------------------------

namespace {

double local_mean_gap(double t) {
  return kTwoPi / std::log(std::max(t, 20.0) / kTwoPi);
}

double scan_step(double t, double cap) {
  return std::min({1.0, cap, local_mean_gap(t) / 4.0});
}

// Sign-grade evaluation: double Euler-Maclaurin where it is valid, the
// arbitrary-precision path below t = 9 and whenever the double value sits too
// close to zero to trust its sign.
double z_scan(double t) {
  if (t < 9.0) return Z_big(BigReal::of(t, 64), 128).to_double();
  const double z = em_z_double(t);
  if (std::fabs(z) < 1e-8) return Z_big(BigReal::of(t, 64), 192).to_double();
  return z;
}

struct FoundZero {
  double g_d = 0.0;
  BigReal gamma;
  bool high_precision = false;
};

struct RefineOutcome {
  std::optional<FoundZero> zero;
  std::string note;
};

// Bisects a sign-change bracket down to width <= tol with |Z(gamma)| <= tol.
// The double path carries the bracket to width 1e-8; tighter tolerances (or a
// failed residual check) continue in arbitrary precision.
RefineOutcome refine_bracket(double a, double b, double za, double tol) {
  RefineOutcome out;
  while (b - a > 1e-8) {
    const double m = 0.5 * (a + b);
    if (m <= a || m >= b) break;
    double zm = (m < 9.0) ? Z_big(BigReal::of(m, 64), 128).to_double()
                          : em_z_double(m);
    if (zm == 0.0) zm = 1e-300;
    if ((za < 0.0) != (zm < 0.0)) {
      b = m;
    } else {
      a = m;
      za = zm;
    }
  }
  const double gm = 0.5 * (a + b);
  if (tol >= 1e-8) {
    const double zg = (gm < 9.0) ? Z_big(BigReal::of(gm, 64), 128).to_double()
                                 : em_z_double(gm);
    if (std::fabs(zg) <= 0.8 * tol) {
      out.zero = FoundZero{gm, BigReal::of(gm, 160), false};
      return out;
    }
  }
  // arbitrary-precision continuation
  const unsigned bits =
      std::max(160u, static_cast<unsigned>(std::ceil(-std::log2(tol))) + 64u);
  BigReal A = BigReal::of(a, bits), B = BigReal::of(b, bits);
  BigReal Za = Z_big(A, bits), Zb = Z_big(B, bits);
  if (Za.sign() == Zb.sign()) {
    out.note = "bracket near t=" + format_double(gm) +
               " lost under high-precision re-evaluation";
    return out;
  }
  const BigReal tolb = BigReal::of(tol, bits);
  for (int iter = 0; iter < 400; ++iter) {
    BigReal M = (A + B) / 2L;
    const BigReal ZM = Z_big(M, bits);
    if (B - A <= tolb && abs(ZM) <= tolb * BigReal::of(0.9, bits)) {
      out.zero = FoundZero{M.to_double(), std::move(M), true};
      return out;
    }
    if (ZM.sign() == Za.sign() || ZM.sign() == 0) {
      A = std::move(M);
      Za = ZM;
    } else {
      B = std::move(M);
    }
  }
  out.note = "refinement stalled near t=" + format_double(gm);
  return out;
}

struct Bracket {
  double a, b, za, zb;
};

// Scans [lo, hi] at the given step and returns the sign-change brackets.
std::vector<Bracket> scan_interval(double lo, double hi, double step) {
  std::vector<Bracket> out;
  if (!(hi > lo)) return out;
  std::vector<double> ts;
  for (double t = lo; t < hi; t += step) ts.push_back(t);
  ts.push_back(hi);
  double prev_t = ts[0];
  double prev_z = z_scan(prev_t);
  for (std::size_t i = 1; i < ts.size(); ++i) {
    double z = z_scan(ts[i]);
    if (z == 0.0) z = 1e-300;
    if ((prev_z < 0.0) != (z < 0.0))
      out.push_back({prev_t, ts[i], prev_z, z});
    prev_t = ts[i];
    prev_z = z;
  }
  return out;
}

} // namespace

ZeroSet find_zeros(double T, double tol, unsigned threads) {
  if (!(T >= 10.0)) throw domain_error("find_zeros requires T >= 10");
  if (!(tol >= 1e-12 && tol <= 0.1))
    throw domain_error("find_zeros requires tol in [1e-12, 0.1]");
  if (threads == 0) threads = 1;

  const double cap = kTwoPi / std::log(T);
  std::vector<double> knots;
  for (double t = 0.5; t < T; t += scan_step(t, cap)) knots.push_back(t);
  knots.push_back(T);
  ensure_double_tables(static_cast<long>(std::ceil(0.477 * T)) + 64);

  // Phase 1: signs on the grid.
  std::vector<double> zv(knots.size());
  const std::size_t kKnotChunk = 1024;
  const std::size_t n_kchunks = (knots.size() + kKnotChunk - 1) / kKnotChunk;
  detail::chunked_reduce<std::vector<double>>(
      n_kchunks, threads,
      [&](std::size_t ci) {
        const std::size_t b = ci * kKnotChunk;
        const std::size_t e = std::min(knots.size(), b + kKnotChunk);
        std::vector<double> part;
        part.reserve(e - b);
        for (std::size_t i = b; i < e; ++i) part.push_back(z_scan(knots[i]));
        return part;
      },
      [&](std::vector<double>&& part, std::size_t ci) {
        std::copy(part.begin(), part.end(), zv.begin() + ci * kKnotChunk);
      });

  std::vector<Bracket> brackets;
  for (std::size_t i = 0; i + 1 < knots.size(); ++i) {
    double za = zv[i] == 0.0 ? 1e-300 : zv[i];
    double zb = zv[i + 1] == 0.0 ? 1e-300 : zv[i + 1];
    if ((za < 0.0) != (zb < 0.0))
      brackets.push_back({knots[i], knots[i + 1], za, zb});
  }

  // Phase 2: refine each bracket.
  std::vector<FoundZero> zeros;
  std::vector<std::string> notes;
  const std::size_t kBrChunk = 16;
  const std::size_t n_bchunks = (brackets.size() + kBrChunk - 1) / kBrChunk;
  using RefPart = std::pair<std::vector<FoundZero>, std::vector<std::string>>;
  detail::chunked_reduce<RefPart>(
      n_bchunks, threads,
      [&](std::size_t ci) {
        RefPart part;
        const std::size_t b = ci * kBrChunk;
        const std::size_t e = std::min(brackets.size(), b + kBrChunk);
        for (std::size_t i = b; i < e; ++i) {
          RefineOutcome r = refine_bracket(brackets[i].a, brackets[i].b,
                                           brackets[i].za, tol);
          if (r.zero) part.first.push_back(std::move(*r.zero));
          if (!r.note.empty()) part.second.push_back(std::move(r.note));
        }
        return part;
      },
      [&](RefPart&& part, std::size_t) {
        for (auto& f : part.first) zeros.push_back(std::move(f));
        for (auto& n : part.second) notes.push_back(std::move(n));
      });
  std::sort(zeros.begin(), zeros.end(),
            [](const FoundZero& x, const FoundZero& y) { return x.g_d < y.g_d; });

  // Phase 3: rescan suspiciously wide gaps at 8x, then 64x finer steps
  // (close pairs hide from the base grid when both members share a cell).
  for (int depth = 1; depth <= 2; ++depth) {
    const double shrink = std::pow(8.0, depth);
    std::vector<std::pair<double, double>> windows;
    double prev = 0.5;
    for (const auto& f : zeros) {
      if (f.g_d - prev > 1.6 * local_mean_gap(0.5 * (f.g_d + prev)))
        windows.emplace_back(prev, f.g_d);
      prev = f.g_d;
    }
    if (T - prev > 1.6 * local_mean_gap(0.5 * (T + prev)))
      windows.emplace_back(prev, T);
    bool inserted = false;
    for (const auto& [lo0, hi0] : windows) {
      const double lo = lo0 + 2.0 * tol, hi = hi0 - 2.0 * tol;
      const double step = scan_step(0.5 * (lo + hi), cap) / shrink;
      for (const Bracket& br : scan_interval(lo, hi, step)) {
        RefineOutcome r = refine_bracket(br.a, br.b, br.za, tol);
        if (!r.note.empty()) notes.push_back(std::move(r.note));
        if (!r.zero) continue;
        const double g = r.zero->g_d;
        const bool dup =
            std::any_of(zeros.begin(), zeros.end(), [&](const FoundZero& f) {
              return std::fabs(f.g_d - g) < 4.0 * tol;
            });
        if (!dup) {
          zeros.push_back(std::move(*r.zero));
          inserted = true;
        }
      }
    }
    if (!inserted) break;
    std::sort(zeros.begin(), zeros.end(), [](const FoundZero& x,
                                             const FoundZero& y) {
      return x.g_d < y.g_d;
    });
  }

  // Phase 4: independent residual verification of a fixed sample.
  for (std::size_t i = 0; i < zeros.size(); i += (i < 3 ? 1 : 500)) {
    const BigReal resid = abs(Z_big(zeros[i].gamma.to_bits(160), 160));
    if (!(resid.cmp_d(tol) <= 0))
      throw numeric_error(
          "find_zeros: high-precision residual check failed near t=" +
          format_double(zeros[i].g_d));
  }

  // Phase 5: count law.
  const double est = count_estimate(builtin_zeta(), T);
  const double band = 2.0 + std::log(T);
  const double found = static_cast<double>(zeros.size());
  if (found < est - band)
    throw numeric_error(
        "find_zeros: located " + std::to_string(zeros.size()) +
        " zeros below the density estimate " + format_double(est) +
        " minus the band " + format_double(band) +
        "; rescan with a finer grid (lower tol or smaller steps)");
  if (found > est + band)
    notes.push_back("zero count " + std::to_string(zeros.size()) +
                    " exceeds the density estimate " + format_double(est) +
                    " plus the band " + format_double(band));

  ZeroSet out;
  out.online.reserve(zeros.size());
  for (auto& f : zeros)
    out.online.push_back({std::move(f.gamma), 1, std::string()});
  out.complete_to = T;
  out.source = "hardy-z-scan T=" + format_double(T) + " tol=" + format_double(tol);
  out.notes = std::move(notes);
  out.validate();
  return out;
}

ZeroSet inject_zero(const ZeroSet& z, double beta, double gamma) {
  if (!(beta > 0.0 && beta < 1.0))
    throw domain_error("inject_zero: beta must lie in (0,1)");
  if (beta == 0.5)
    throw domain_error(
        "inject_zero: beta = 1/2 lies on the critical line; nothing to inject");
  if (!(gamma > 0.0) || !std::isfinite(gamma))
    throw domain_error("inject_zero: gamma must be positive and finite");
  ZeroSet out = z;
  const unsigned p = 192;
  const BigReal b = BigReal::of(beta, p);
  const BigReal g = BigReal::of(gamma, p);
  out.offline.push_back({b, g, 1});
  out.offline.push_back({1L - b, g, 1});
  out.notes.push_back("injected off-line pair beta=" + format_double(beta) +
                      " gamma=" + format_double(gamma));
  out.validate();
  return out;
}

} // namespace licrit
