#pragma once

#include <optional>
#include <string>
#include <vector>

#include "licrit/licoeff.hpp"

namespace licrit {

// Sign classification of one coefficient against its error bound. The label
// is strictly about the sign of Re lambda: "negative" requires
// Re + bound < 0 and "positive" requires Re - bound > 0, so shrinking bounds
// can only move "indeterminate" records outward, never flip a decided sign.
enum class SignVerdict { positive, negative, indeterminate };

struct CriterionRecord {
  long n = 0;
  double re_lambda = 0.0;
  double error_bound = 0.0;
  SignVerdict verdict = SignVerdict::indeterminate;
};

enum class OverallStatus { consistent, violation, inconclusive };

// lim sup |lambda_n|^{1/n} estimate with the violation-signature flags.
struct GrowthReport {
  double rate_estimate = 1.0;
  bool flagged = false;
  std::string note;
};

struct CriterionReport {
  double a = 0.0;
  std::vector<CriterionRecord> records;
  OverallStatus status = OverallStatus::inconclusive;
  long consistent_up_to = 0;    // length of the prefix satisfying the criterion
  long violation_witness = 0;   // first offending index (0 = none)
  GrowthReport growth;
  // Nonempty for a > 1/2: the nonpositivity reading applied there is in
  // tension with the termwise nonnegativity of on-line zero sums; the report
  // carries that caveat machine-readably rather than guessing intent.
  std::string warning;
};

// Applies the positivity criterion to a consecutive coefficient sequence
// (n = 1, 2, ...). For a < 1/2 the hypothesis is equivalent to
// Re lambda(n, a) >= 0 for all n, so a proven-negative record is a violation
// witness; for a > 1/2 the inequality is reversed (and flagged, see above).
// Runs the growth detector when at least 20 values are supplied.
CriterionReport verdict(const std::vector<LiResult>& values, double a);

// Growth signature of an off-line zero: |lambda_n| acquiring a geometric
// factor r^n with r > 1. Estimates the rate from the least-squares slope of
// log|lambda_n| over the top half of the range, and flags when either
//   (a) the linear-in-n model beats the linear-in-log-n model decisively
//       (RSS ratio < 1/4) with a significant positive slope, or
//   (b) the residual oscillation envelope grows significantly (block-RMS of
//       first-differenced residuals, fitted on a log scale) above a 1e-5
//       amplitude floor
// -- (b) catches the realistic case where the geometric term is a small
// oscillation riding on the smooth n log n trend. Requires >= 20 consecutive
// values; exact zeros are skipped.
GrowthReport growth_detector(const std::vector<LiResult>& values);

struct MonotonicityReport {
  long increasing_up_to = 0;          // longest strictly increasing prefix
  std::optional<long> first_descent;  // index where the first non-increase occurs
};

// Longest strictly increasing prefix of Re lambda_n (purely empirical; the
// monotonicity of these sequences is an open question, so nothing is
// asserted). Requires >= 2 values.
MonotonicityReport monotonicity_report(const std::vector<LiResult>& values);

// Stable-key-order JSON rendering of a report.
std::string criterion_report_to_json(const CriterionReport& r);

} // namespace licrit
