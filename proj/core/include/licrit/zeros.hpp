#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "licrit/bigfloat.hpp"
#include "licrit/lfunc.hpp"

namespace licrit {

struct ZeroEntry {
  BigReal gamma;          // ordinate > 0
  unsigned multiplicity = 1;
  std::string raw;        // original textual token (bit-exact round-trips)
};

struct OfflineEntry {
  BigReal beta;           // in (0,1), != 1/2
  BigReal gamma;          // > 0
  unsigned multiplicity = 1;
};

// Ordered multiset of non-trivial zeros: critical-line ordinates plus
// explicit off-line entries (always stored as symmetric pairs {beta, 1-beta};
// conjugates are implicit everywhere). complete_to is the height up to which
// the on-line list is claimed exhaustive.
struct ZeroSet {
  std::vector<ZeroEntry> online;
  std::vector<OfflineEntry> offline;
  double complete_to = 0.0;
  std::string source;
  std::vector<std::string> notes; // warnings (count-band deviations etc.)

  // Total number of stored zeros counted with multiplicity (online entries
  // and offline entries; conjugates not counted since they are implicit).
  std::size_t size() const;

  // Enforces: ordinates strictly increasing and positive, multiplicities
  // >= 1, offline entries in symmetric pairs with beta in (0,1)\{1/2}.
  void validate() const;
};

// Reads a plain text zero table: one decimal ordinate per line, '#' starts a
// comment. Lines beginning with "#!" are structured directives emitted by
// serialize_zero_set (offline entries, completeness height); plain tables
// never contain them. complete_to defaults to the last ordinate.
ZeroSet parse_zero_file(const std::string& path);

// Renders a ZeroSet in the parse_zero_file format; ordinate tokens parsed
// from a file round-trip bit-exactly.
std::string serialize_zero_set(const ZeroSet& z);

// Hardy Z(t) = e^{i theta(t)} zeta(1/2+it) as a real value within tol.
// The critical-line zeta value comes from the accelerated alternating (eta)
// series for t <= 48 and from Euler-Maclaurin summation with an explicit
// remainder above (the eta error inflates like e^{pi t/2}, making it
// infeasible at the heights the zero table needs).
BigReal hardy_Z(const BigReal& t, double tol);
BigReal hardy_Z(double t, double tol);

// Riemann-Siegel theta(t) = Im log Gamma(1/4 + it/2) - (t/2) log pi.
BigReal hardy_theta(const BigReal& t, unsigned bits);

// Locates all critical-line zeros with 0 < gamma <= T by sign changes of
// Z on a density-adapted grid (step <= 2pi/log T), each refined by bisection
// until the bracket is narrower than tol and |Z(gamma)| <= tol. Suspiciously
// large gaps trigger local rescans at 8x and 64x finer steps before the
// count is checked against count_estimate; a deficit beyond the band
// 2 + log T raises numeric_error instructing a finer scan, an excess is
// recorded as a note. complete_to = T.
ZeroSet find_zeros(double T, double tol = 1e-7, unsigned threads = 1);

// (d_F/2pi) T log T + c1 T with c1 from structural_constants.
double count_estimate(const LFunctionDescriptor& d, double T);

// Returns a copy of z with the symmetric off-line pair
// {beta + i gamma, (1-beta) + i gamma} appended (multiplicity 1 each).
// Requires beta in (0,1), beta != 1/2, gamma > 0.
ZeroSet inject_zero(const ZeroSet& z, double beta, double gamma);

} // namespace licrit
