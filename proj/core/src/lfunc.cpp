#include "licrit/lfunc.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <mutex>
#include <numeric>
#include <sstream>

#include "licrit/detail/chunked.hpp"
#include "licrit/special.hpp"

namespace licrit {

namespace {

constexpr unsigned kDescriptorBits = 256;

std::mutex g_prime_mutex;
std::vector<std::uint32_t> g_primes;
std::uint64_t g_prime_limit = 0;

// Segmented sieve of Eratosthenes; extends the cached prime list.
void extend_primes(std::uint64_t limit) {
  if (limit > 0xFFFFFFF0ull)
    throw domain_error("prime sieve limit exceeds 32-bit range");
  std::uint64_t root = static_cast<std::uint64_t>(std::sqrt(static_cast<double>(limit))) + 2;
  std::vector<char> small(root + 1, 1);
  std::vector<std::uint32_t> base;
  for (std::uint64_t i = 2; i <= root; ++i) {
    if (!small[i]) continue;
    base.push_back(static_cast<std::uint32_t>(i));
    for (std::uint64_t j = i * i; j <= root; j += i) small[j] = 0;
  }
  g_primes.clear();
  constexpr std::uint64_t kSegment = 1u << 20;
  std::vector<char> seg(kSegment);
  for (std::uint64_t lo = 2; lo <= limit; lo += kSegment) {
    std::uint64_t hi = std::min(lo + kSegment - 1, limit);
    std::fill(seg.begin(), seg.begin() + (hi - lo + 1), 1);
    for (std::uint32_t p : base) {
      std::uint64_t pp = static_cast<std::uint64_t>(p) * p;
      if (pp > hi) break;
      std::uint64_t start = pp > lo ? pp : ((lo + p - 1) / p) * p;
      for (std::uint64_t j = start; j <= hi; j += p) seg[j - lo] = 0;
    }
    for (std::uint64_t i = lo; i <= hi; ++i)
      if (seg[i - lo]) g_primes.push_back(static_cast<std::uint32_t>(i));
  }
  g_prime_limit = limit;
}

unsigned long gcd_ul(unsigned long a, unsigned long b) {
  while (b) {
    unsigned long t = a % b;
    a = b;
    b = t;
  }
  return a;
}

unsigned euler_phi(unsigned q) {
  unsigned result = q, n = q;
  for (unsigned p = 2; static_cast<unsigned long>(p) * p <= n; ++p) {
    if (n % p) continue;
    while (n % p == 0) n /= p;
    result -= result / p;
  }
  if (n > 1) result -= result / n;
  return result;
}

constexpr double kTwoPi = 6.283185307179586476925286766559;

} // namespace

std::vector<std::uint32_t> primes_up_to(std::uint64_t limit) {
  std::lock_guard<std::mutex> lock(g_prime_mutex);
  if (limit > g_prime_limit) {
    std::uint64_t target = std::max<std::uint64_t>(
        {limit, g_prime_limit * 2, 1u << 20});
    extend_primes(target);
  }
  auto end = std::upper_bound(g_primes.begin(), g_primes.end(),
                              static_cast<std::uint32_t>(std::min<std::uint64_t>(
                                  limit, 0xFFFFFFFFull)));
  return std::vector<std::uint32_t>(g_primes.begin(), end);
}

BigComplex CoefficientSource::chi(std::uint64_t n, unsigned bits) const {
  if (kind == CoefficientKind::riemann_zeta) {
    return BigComplex(BigReal::of_long(1, bits), BigReal::of_long(0, bits));
  }
  if (kind == CoefficientKind::file)
    throw domain_error("chi: file coefficient sources carry explicit values");
  unsigned long r = static_cast<unsigned long>(n % modulus);
  long e = chi_exponent[r];
  if (e < 0) return BigComplex(BigReal::of_long(0, bits), BigReal::of_long(0, bits));
  if (e == 0) return BigComplex(BigReal::of_long(1, bits), BigReal::of_long(0, bits));
  // exp(2*pi*i*e/order), exact root of unity at the requested width.
  BigReal angle = BigReal::pi(bits) * 2;
  angle *= e;
  angle /= static_cast<long>(chi_order);
  BigReal s(bits), c(bits);
  sin_cos(s, c, angle);
  return BigComplex(c, s);
}

BigReal LFunctionDescriptor::Q(unsigned bits) const {
  switch (q_form) {
    case QForm::inv_sqrt_pi: {
      BigReal r = sqrt(BigReal::pi(bits));
      return 1 / r;
    }
    case QForm::sqrt_mod_over_pi: {
      BigReal q = BigReal::of_ulong(coefficients.modulus, bits);
      return sqrt(q / BigReal::pi(bits));
    }
    case QForm::literal:
    default:
      return q_literal.to_bits(bits);
  }
}

LFunctionDescriptor builtin_zeta() {
  LFunctionDescriptor d;
  d.name = "zeta";
  d.m_F = 1;
  d.q_form = QForm::inv_sqrt_pi;
  d.q_literal = d.Q(kDescriptorBits);
  GammaFactor g;
  g.lambda = BigReal::of_ratio(1, 2, kDescriptorBits);
  g.mu = BigComplex(BigReal::of_long(0, kDescriptorBits),
                    BigReal::of_long(0, kDescriptorBits));
  d.gamma_factors.push_back(std::move(g));
  d.omega = BigComplex(BigReal::of_long(1, kDescriptorBits),
                       BigReal::of_long(0, kDescriptorBits));
  d.coefficients.kind = CoefficientKind::riemann_zeta;
  d.coefficients.modulus = 1;
  return d;
}

namespace {

// Recovers the exponent table of a character value list, validating that
// every nonzero value is a root of unity of order dividing phi(q).
std::pair<std::vector<long>, unsigned> recover_exponents(
    unsigned q, const std::vector<std::complex<double>>& chi) {
  unsigned order = euler_phi(q);
  std::vector<long> expo(q, -1);
  for (unsigned r = 0; r < q; ++r) {
    double mag = std::abs(chi[r]);
    if (gcd_ul(r, q) != 1) {
      if (mag > 1e-9)
        throw domain_error("character: chi(r) must vanish when gcd(r, q) > 1");
      continue;
    }
    if (std::fabs(mag - 1.0) > 1e-6)
      throw domain_error("character: |chi(r)| must be 1 when gcd(r, q) = 1");
    double theta = std::arg(chi[r]);
    if (theta < 0) theta += kTwoPi;
    long e = std::lround(theta * order / kTwoPi) % static_cast<long>(order);
    double rec_re = std::cos(kTwoPi * e / order);
    double rec_im = std::sin(kTwoPi * e / order);
    if (std::hypot(rec_re - chi[r].real(), rec_im - chi[r].imag()) > 1e-6)
      throw domain_error(
          "character: values must be roots of unity of order dividing phi(q)");
    expo[r] = e;
  }
  return {expo, order};
}

void validate_character(unsigned q, const std::vector<long>& expo,
                        unsigned order) {
  if (expo[1 % q] != 0)
    throw domain_error("character: chi(1) must equal 1");
  // Totally multiplicative on the unit group.
  for (unsigned r = 1; r < q; ++r) {
    if (expo[r] < 0) continue;
    for (unsigned s = r; s < q; ++s) {
      if (expo[s] < 0) continue;
      unsigned long rs = (static_cast<unsigned long>(r) * s) % q;
      long sum = (expo[r] + expo[s]) % static_cast<long>(order);
      if (expo[rs] != sum)
        throw domain_error("character: value table is not totally multiplicative");
    }
  }
  // Non-principal.
  bool nonprincipal = false;
  for (unsigned r = 2; r < q; ++r)
    if (expo[r] > 0) nonprincipal = true;
  if (!nonprincipal)
    throw domain_error("character: principal characters are not accepted");
  // Primitive: no proper divisor dd of q may have chi constant on residue
  // classes mod dd (within the unit group mod q).
  for (unsigned dd = 1; dd < q; ++dd) {
    if (q % dd != 0) continue;
    bool periodic = true;
    for (unsigned r = 1; r < q && periodic; ++r) {
      if (expo[r] < 0) continue;
      for (unsigned s = r + dd; s < q; s += dd) {
        if (expo[s] < 0) continue;
        if (expo[s] != expo[r]) {
          periodic = false;
          break;
        }
      }
    }
    if (periodic)
      throw domain_error(
          "character: induced from modulus " + std::to_string(dd) +
          "; only primitive characters are accepted");
  }
}

} // namespace

LFunctionDescriptor builtin_dirichlet(
    unsigned modulus, const std::vector<std::complex<double>>& chi) {
  if (modulus < 3)
    throw domain_error("dirichlet: modulus >= 3 required");
  if (modulus > 100000)
    throw domain_error("dirichlet: modulus too large (limit 100000)");
  if (chi.size() != modulus)
    throw domain_error("dirichlet: value table must have exactly q entries");

  auto [expo, order] = recover_exponents(modulus, chi);
  validate_character(modulus, expo, order);

  LFunctionDescriptor d;
  d.name = "dirichlet_mod" + std::to_string(modulus);
  d.m_F = 0;
  d.q_form = QForm::sqrt_mod_over_pi;
  d.coefficients.kind = CoefficientKind::dirichlet_character;
  d.coefficients.modulus = modulus;
  d.coefficients.chi_order = order;
  d.coefficients.chi_exponent = expo;
  d.q_literal = d.Q(kDescriptorBits);

  // Parity: chi(-1) = +1 (even, delta = 0) or -1 (odd, delta = 1).
  long em1 = expo[modulus - 1];
  unsigned delta;
  if (em1 == 0)
    delta = 0;
  else if (2 * em1 == static_cast<long>(order))
    delta = 1;
  else
    throw domain_error("character: chi(-1) must be +1 or -1");

  GammaFactor g;
  g.lambda = BigReal::of_ratio(1, 2, kDescriptorBits);
  g.mu = BigComplex(BigReal::of_ratio(delta, 2, kDescriptorBits),
                    BigReal::of_long(0, kDescriptorBits));
  d.gamma_factors.push_back(std::move(g));

  // Root number omega = tau(chi) / (i^delta sqrt(q)).
  unsigned bits = kDescriptorBits;
  BigComplex tau(BigReal::of_long(0, bits), BigReal::of_long(0, bits));
  for (unsigned r = 1; r < modulus; ++r) {
    if (expo[r] < 0) continue;
    BigComplex cr = d.coefficients.chi(r, bits);
    BigReal angle = BigReal::pi(bits) * 2;
    angle *= static_cast<long>(r);
    angle /= static_cast<long>(modulus);
    BigReal sv(bits), cv(bits);
    sin_cos(sv, cv, angle);
    tau += cr * BigComplex(cv, sv);
  }
  BigComplex denom(BigReal::of_long(0, bits), BigReal::of_long(0, bits));
  BigReal root_q = sqrt(BigReal::of_ulong(modulus, bits));
  if (delta == 0)
    denom = BigComplex(root_q, BigReal::of_long(0, bits));
  else
    denom = BigComplex(BigReal::of_long(0, bits), root_q);
  d.omega = tau / denom;
  BigReal omega_mod = abs(d.omega);
  if (abs(omega_mod - 1).cmp_d(1e-40) > 0)
    throw numeric_error("dirichlet: root number does not have modulus 1");
  return d;
}

// ---------------------------------------------------------------------------
// JSON serialization
// ---------------------------------------------------------------------------

namespace {

using nlohmann::ordered_json;

void load_coefficient_file(CoefficientSource& src) {
  std::ifstream in(src.file_path);
  if (!in)
    throw parse_error("cannot open coefficient file: " + src.file_path);
  src.file_values.clear();
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::size_t hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    std::istringstream ss(line);
    std::uint64_t n;
    if (!(ss >> n)) continue; // blank / comment line
    double re, im = 0.0;
    if (!(ss >> re)) throw parse_error("coefficient entry needs a value", line_no);
    ss >> im;
    std::string rest;
    if (ss >> rest) throw parse_error("trailing tokens in coefficient entry", line_no);
    if (n < 2) throw parse_error("coefficient index must be >= 2", line_no);
    src.file_values[n] = std::complex<double>(re, im);
  }
}

} // namespace

std::string descriptor_to_json(const LFunctionDescriptor& d) {
  ordered_json j;
  j["name"] = d.name;
  j["m_F"] = d.m_F;
  j["Q"] = d.Q(64).to_double();
  j["gamma_factors"] = ordered_json::array();
  for (const auto& g : d.gamma_factors) {
    ordered_json gj;
    gj["lambda"] = g.lambda.to_double();
    gj["mu_re"] = g.mu.re().to_double();
    gj["mu_im"] = g.mu.im().to_double();
    j["gamma_factors"].push_back(gj);
  }
  j["omega_re"] = d.omega.re().to_double();
  j["omega_im"] = d.omega.im().to_double();
  ordered_json cj;
  switch (d.coefficients.kind) {
    case CoefficientKind::riemann_zeta:
      cj["kind"] = "riemann_zeta";
      break;
    case CoefficientKind::dirichlet_character: {
      cj["kind"] = "dirichlet_character";
      cj["modulus"] = d.coefficients.modulus;
      ordered_json vals = ordered_json::array();
      for (unsigned r = 0; r < d.coefficients.modulus; ++r) {
        BigComplex v = d.coefficients.chi(r, 64);
        vals.push_back({v.re().to_double(), v.im().to_double()});
      }
      cj["values"] = vals;
      break;
    }
    case CoefficientKind::file:
      cj["kind"] = "file";
      cj["path"] = d.coefficients.file_path;
      break;
  }
  j["coefficients"] = cj;
  return j.dump(2) + "\n";
}

LFunctionDescriptor descriptor_from_json(const std::string& text) {
  ordered_json j;
  try {
    j = ordered_json::parse(text);
  } catch (const std::exception& e) {
    throw parse_error(std::string("descriptor JSON: ") + e.what());
  }
  auto need = [&](const char* key) -> const ordered_json& {
    if (!j.contains(key))
      throw parse_error(std::string("descriptor JSON: missing field '") + key + "'");
    return j.at(key);
  };
  LFunctionDescriptor d;
  try {
    d.name = need("name").get<std::string>();
    d.m_F = need("m_F").get<unsigned>();
    double q_file = need("Q").get<double>();
    const auto& gf = need("gamma_factors");
    if (!gf.is_array() || gf.empty())
      throw parse_error("descriptor JSON: gamma_factors must be a nonempty array");
    for (const auto& gj : gf) {
      GammaFactor g;
      g.lambda = BigReal::of(gj.at("lambda").get<double>(), kDescriptorBits);
      if (g.lambda.sign() <= 0)
        throw parse_error("descriptor JSON: lambda must be positive");
      g.mu = BigComplex(BigReal::of(gj.at("mu_re").get<double>(), kDescriptorBits),
                        BigReal::of(gj.at("mu_im").get<double>(), kDescriptorBits));
      d.gamma_factors.push_back(std::move(g));
    }
    d.omega = BigComplex(BigReal::of(need("omega_re").get<double>(), kDescriptorBits),
                         BigReal::of(need("omega_im").get<double>(), kDescriptorBits));
    const auto& cj = need("coefficients");
    std::string kind = cj.at("kind").get<std::string>();
    if (kind == "riemann_zeta") {
      d.coefficients.kind = CoefficientKind::riemann_zeta;
      d.coefficients.modulus = 1;
      d.q_form = QForm::inv_sqrt_pi;
    } else if (kind == "dirichlet_character") {
      unsigned q = cj.at("modulus").get<unsigned>();
      const auto& vals = cj.at("values");
      if (!vals.is_array() || vals.size() != q)
        throw parse_error("descriptor JSON: character values must have q entries");
      std::vector<std::complex<double>> chi(q);
      for (unsigned r = 0; r < q; ++r)
        chi[r] = std::complex<double>(vals[r].at(0).get<double>(),
                                      vals[r].at(1).get<double>());
      auto [expo, order] = recover_exponents(q, chi);
      validate_character(q, expo, order);
      d.coefficients.kind = CoefficientKind::dirichlet_character;
      d.coefficients.modulus = q;
      d.coefficients.chi_order = order;
      d.coefficients.chi_exponent = expo;
      d.q_form = QForm::sqrt_mod_over_pi;
    } else if (kind == "file") {
      d.coefficients.kind = CoefficientKind::file;
      d.coefficients.file_path = cj.at("path").get<std::string>();
      d.q_form = QForm::literal;
      load_coefficient_file(d.coefficients);
    } else {
      throw parse_error("descriptor JSON: unknown coefficient kind '" + kind + "'");
    }
    d.q_literal = BigReal::of(q_file, kDescriptorBits);
    if (d.q_form != QForm::literal) {
      // Built-in kinds regenerate Q exactly; the stored number must agree.
      double q_exact = d.Q(64).to_double();
      if (std::fabs(q_file - q_exact) > 1e-9 * std::fabs(q_exact))
        throw parse_error("descriptor JSON: Q inconsistent with coefficient kind");
    }
  } catch (const parse_error&) {
    throw;
  } catch (const domain_error&) {
    throw;
  } catch (const std::exception& e) {
    throw parse_error(std::string("descriptor JSON: ") + e.what());
  }
  return d;
}

// ---------------------------------------------------------------------------
// Structural constants and coefficient sums
// ---------------------------------------------------------------------------

StructuralConstants structural_constants(const LFunctionDescriptor& d,
                                         unsigned bits) {
  if (d.gamma_factors.empty())
    throw domain_error("structural_constants: descriptor has no gamma factors");
  StructuralConstants out{BigReal(bits), BigReal(bits), BigReal(bits), BigReal(bits)};
  BigReal sum_lambda(bits);
  BigReal log_prod(bits);
  for (const auto& g : d.gamma_factors) {
    BigReal lam = g.lambda.to_bits(bits);
    sum_lambda += lam;
    BigReal t = log(lam);
    t *= 2;
    t *= lam;
    log_prod += t; // 2*lambda*log(lambda)
  }
  out.d_F = sum_lambda * 2;
  out.lambda_product = exp(log_prod);
  BigReal two_pi = BigReal::pi(bits) * 2;
  BigReal q = d.Q(bits);
  out.q_F = pow(two_pi, out.d_F) * q * q * out.lambda_product;
  BigReal log_2pi_plus_1 = log(two_pi) + 1;
  out.c1 = (log(out.q_F) - out.d_F * log_2pi_plus_1) / two_pi;
  return out;
}

BigComplex von_mangoldt(const LFunctionDescriptor& d, std::uint64_t n,
                        unsigned bits) {
  BigComplex zero(BigReal::of_long(0, bits), BigReal::of_long(0, bits));
  if (n < 2) return zero;
  if (d.coefficients.kind == CoefficientKind::file) {
    auto it = d.coefficients.file_values.find(n);
    if (it == d.coefficients.file_values.end()) return zero;
    return BigComplex::of(it->second.real(), it->second.imag(), bits);
  }
  // Prime-power test by trial division.
  std::uint64_t m = n, p = 0;
  for (std::uint64_t f = 2; f * f <= m; ++f) {
    if (m % f == 0) {
      p = f;
      break;
    }
  }
  if (p == 0) p = m; // n itself prime
  while (m % p == 0) m /= p;
  if (m != 1) return zero; // at least two prime factors
  BigComplex c = d.coefficients.chi(n, bits);
  BigReal logp = log(BigReal::of_ulong(static_cast<unsigned long>(p), bits));
  return BigComplex(c.re() * logp, c.im() * logp);
}

BigComplex psi_counting(const LFunctionDescriptor& d, double x, unsigned bits) {
  if (x < 0) throw domain_error("psi_counting: x >= 0 required");
  BigComplex acc(BigReal::of_long(0, bits), BigReal::of_long(0, bits));
  if (d.coefficients.kind == CoefficientKind::file) {
    for (const auto& [n, v] : d.coefficients.file_values) {
      if (static_cast<double>(n) > x) break;
      acc += BigComplex::of(v.real(), v.imag(), bits);
    }
    return acc;
  }
  if (x < 2) return acc;
  auto primes = primes_up_to(static_cast<std::uint64_t>(x));
  for (std::uint32_t p : primes) {
    BigReal logp = log(BigReal::of_ulong(p, bits));
    double m = p;
    std::uint64_t mi = p;
    while (m <= x) {
      BigComplex c = d.coefficients.chi(mi, bits);
      acc += BigComplex(c.re() * logp, c.im() * logp);
      if (m > x / p) break;
      m *= p;
      mi *= p;
    }
  }
  return acc;
}

namespace {

struct DerivPartial {
  // Real and imaginary accumulators for the lo (m <= M_lo) and hi
  // (M_lo < m <= M_hi) ranges; laid out k-major: [bucket][k].
  std::vector<BigReal> re[2];
  std::vector<BigReal> im[2];
  bool complex_lane = false;
};

} // namespace

std::pair<std::vector<DerivativeTerm>, std::vector<DerivativeTerm>>
logF_derivatives_pair(const LFunctionDescriptor& d, const BigReal& s,
                      unsigned k_max, double M_lo, double M_hi, unsigned bits,
                      unsigned threads) {
  if (!(M_lo >= 2.0) || !(M_hi >= M_lo))
    throw domain_error("logF_derivatives: need 2 <= M_lo <= M_hi");
  BigReal s_minus_1 = s - 1;
  if (s_minus_1.sign() <= 0)
    throw domain_error("logF_derivatives: requires s > 1");
  const unsigned K = k_max + 1;
  BigReal sw = s.to_bits(bits);

  std::vector<BigReal> acc_re[2];
  std::vector<BigReal> acc_im[2];
  for (int b = 0; b < 2; ++b) {
    acc_re[b].assign(K, BigReal(bits));
    acc_im[b].assign(K, BigReal(bits));
  }

  if (d.coefficients.kind == CoefficientKind::file) {
    for (const auto& [n, v] : d.coefficients.file_values) {
      double nd = static_cast<double>(n);
      if (nd > M_hi) break;
      int b = nd <= M_lo ? 0 : 1;
      BigReal logm = log(BigReal::of_ulong(n, bits));
      BigReal mpow = exp(-(sw * logm));
      BigReal wre = BigReal::of(v.real(), bits) * mpow;
      BigReal wim = BigReal::of(v.imag(), bits) * mpow;
      for (unsigned k = 0; k < K; ++k) {
        acc_re[b][k] += wre;
        acc_im[b][k] += wim;
        if (k + 1 < K) {
          wre *= logm;
          wim *= logm;
        }
      }
    }
  } else {
    const bool real_lane = d.coefficients.kind == CoefficientKind::riemann_zeta ||
                           d.coefficients.chi_order <= 2;
    auto primes = primes_up_to(static_cast<std::uint64_t>(M_hi));
    const std::size_t chunk_size = 2048;
    const std::size_t n_chunks = (primes.size() + chunk_size - 1) / chunk_size;

    auto eval = [&](std::size_t ci) -> DerivPartial {
      DerivPartial part;
      part.complex_lane = !real_lane;
      for (int b = 0; b < 2; ++b) {
        part.re[b].assign(K, BigReal(bits));
        if (!real_lane) part.im[b].assign(K, BigReal(bits));
      }
      std::size_t i0 = ci * chunk_size;
      std::size_t i1 = std::min(i0 + chunk_size, primes.size());
      BigReal logp(bits), ps(bits), mpow(bits), wre(bits), wim(bits), l(bits);
      for (std::size_t i = i0; i < i1; ++i) {
        std::uint32_t p = primes[i];
        if (static_cast<double>(p) > M_hi) break;
        logp = log(BigReal::of_ulong(p, bits));
        ps = exp(-(sw * logp));
        mpow = ps;
        double mval = p;
        std::uint64_t mi = p;
        for (unsigned e = 1;; ++e) {
          if (real_lane) {
            int sgn = 1;
            if (d.coefficients.kind == CoefficientKind::dirichlet_character) {
              long er = d.coefficients.chi_exponent[mi % d.coefficients.modulus];
              if (er < 0) sgn = 0;
              else if (er != 0) sgn = -1; // order <= 2: nonzero exponent is -1
            }
            if (sgn != 0) {
              wre = mpow * logp;
              if (sgn < 0) wre.negate();
              l = logp;
              l *= static_cast<long>(e);
              int b = mval <= M_lo ? 0 : 1;
              for (unsigned k = 0; k < K; ++k) {
                part.re[b][k] += wre;
                if (k + 1 < K) wre *= l;
              }
            }
          } else {
            BigComplex c = d.coefficients.chi(mi, bits);
            if (!(c.re().is_zero() && c.im().is_zero())) {
              wre = c.re() * logp;
              wre *= mpow;
              wim = c.im() * logp;
              wim *= mpow;
              l = logp;
              l *= static_cast<long>(e);
              int b = mval <= M_lo ? 0 : 1;
              for (unsigned k = 0; k < K; ++k) {
                part.re[b][k] += wre;
                part.im[b][k] += wim;
                if (k + 1 < K) {
                  wre *= l;
                  wim *= l;
                }
              }
            }
          }
          if (mval > M_hi / p) break;
          mval *= p;
          mi *= p;
          mpow *= ps;
        }
      }
      return part;
    };
    auto merge = [&](DerivPartial&& part, std::size_t) {
      for (int b = 0; b < 2; ++b)
        for (unsigned k = 0; k < K; ++k) {
          acc_re[b][k] += part.re[b][k];
          if (part.complex_lane) acc_im[b][k] += part.im[b][k];
        }
    };
    detail::chunked_reduce<DerivPartial>(n_chunks, threads, eval, merge);
  }

  // Tail bounds: |Lambda_F(m)| <= log m for the built-in kinds, so
  // |sum_{m>M}| <= integral_M^inf (log x)^{k+1} x^{-s} dx + sup term.
  auto tail_for = [&](double M, unsigned k) -> BigReal {
    if (d.coefficients.kind == CoefficientKind::file) {
      // The file IS the function: nothing exists beyond its support.
      BigReal t(bits);
      for (const auto& [n, v] : d.coefficients.file_values) {
        if (static_cast<double>(n) <= M) continue;
        BigReal logm = log(BigReal::of_ulong(n, bits));
        BigReal term = pow_si(logm, static_cast<long>(k)) *
                       exp(-(sw * logm)) *
                       BigReal::of(std::abs(v), bits);
        t += term;
      }
      return t;
    }
    BigReal L = log(BigReal::of(M, bits));
    BigReal sm1 = sw - 1;
    BigReal integral = incomplete_gamma_int(k + 2, sm1 * L) /
                       pow_si(sm1, static_cast<long>(k + 2));
    // sup_{x >= M} (log x)^{k+1} x^{-s}: the integrand peaks at
    // log x = (k+1)/s; take the larger of the value at M and at the peak.
    BigReal f_at_M = pow_si(L, static_cast<long>(k + 1)) * exp(-(sw * L));
    BigReal peak_log = BigReal::of_long(static_cast<long>(k + 1), bits) / sw;
    BigReal sup = f_at_M;
    if (peak_log > L) {
      BigReal f_peak = pow_si(peak_log, static_cast<long>(k + 1)) *
                       exp(-(sw * peak_log));
      if (f_peak > sup) sup = f_peak;
    }
    return integral + sup;
  };

  std::vector<DerivativeTerm> lo(K, DerivativeTerm{BigComplex(bits), BigReal(bits)});
  std::vector<DerivativeTerm> hi(K, DerivativeTerm{BigComplex(bits), BigReal(bits)});
  for (unsigned k = 0; k < K; ++k) {
    BigReal re_lo = acc_re[0][k];
    BigReal im_lo = acc_im[0][k];
    BigReal re_hi = acc_re[0][k] + acc_re[1][k];
    BigReal im_hi = acc_im[0][k] + acc_im[1][k];
    // value_k = (-1)^{k+1} * sum  (even k gets the minus sign)
    if (k % 2 == 0) {
      re_lo.negate();
      im_lo.negate();
      re_hi.negate();
      im_hi.negate();
    }
    lo[k].value = BigComplex(re_lo, im_lo);
    lo[k].tail_bound = tail_for(M_lo, k);
    hi[k].value = BigComplex(re_hi, im_hi);
    hi[k].tail_bound = tail_for(M_hi, k);
  }
  return {std::move(lo), std::move(hi)};
}

std::vector<DerivativeTerm> logF_derivatives(const LFunctionDescriptor& d,
                                             const BigReal& s, unsigned k_max,
                                             double M, unsigned bits,
                                             unsigned threads) {
  auto pr = logF_derivatives_pair(d, s, k_max, M, M, bits, threads);
  return std::move(pr.second);
}

} // namespace licrit
