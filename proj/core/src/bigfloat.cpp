#include "licrit/bigfloat.hpp"

#include <cstdio>
#include <cstring>
#include <vector>

namespace licrit {

BigReal BigReal::of_ratio(const mpz_class& p, const mpz_class& q, unsigned bits) {
  if (q == 0) throw domain_error("of_ratio: zero denominator");
  mpq_class r(p, q);
  r.canonicalize();
  BigReal out(bits);
  mpfr_set_q(out.raw(), r.get_mpq_t(), MPFR_RNDN);
  return out;
}

BigReal BigReal::parse(const std::string& text, unsigned bits) {
  if (text.empty()) throw parse_error("empty number");
  BigReal r(bits);
  char* end = nullptr;
  int rc = mpfr_strtofr(r.raw(), text.c_str(), &end, 10, MPFR_RNDN);
  (void)rc;
  if (end == text.c_str()) throw parse_error("not a number: '" + text + "'");
  while (*end == ' ' || *end == '\t') ++end;
  if (*end != '\0')
    throw parse_error("trailing characters after number: '" + text + "'");
  return r;
}

std::string BigReal::str(int sig_digits) const {
  if (sig_digits < 2) sig_digits = 2;
  // %.*Re prints one digit before the point and sig_digits-1 after.
  int n = mpfr_snprintf(nullptr, 0, "%.*Re", sig_digits - 1, v_);
  std::vector<char> buf(static_cast<size_t>(n) + 1);
  mpfr_snprintf(buf.data(), buf.size(), "%.*Re", sig_digits - 1, v_);
  return std::string(buf.data());
}

BigComplex pow_si(const BigComplex& a, long n) {
  unsigned bits = a.bits();
  if (n == 0) {
    return BigComplex(BigReal::of_long(1, bits), BigReal::of_long(0, bits));
  }
  bool invert = n < 0;
  unsigned long e = invert ? static_cast<unsigned long>(-(n + 1)) + 1ul
                           : static_cast<unsigned long>(n);
  BigComplex base = a;
  BigComplex acc(BigReal::of_long(1, bits), BigReal::of_long(0, bits));
  while (e > 0) {
    if (e & 1ul) acc *= base;
    e >>= 1;
    if (e > 0) base *= base;
  }
  if (invert) acc = inverse(acc);
  return acc;
}

} // namespace licrit
