#include "licrit/criterion.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <sstream>
#include <vector>

namespace licrit {

namespace {

constexpr const char* kFlipWarning =
    "a > 1/2: the nonpositivity reading Re lambda(n,a) <= 0 is applied, but "
    "every on-line zero contributes 2m(1 - cos n theta) >= 0 termwise, so "
    "the two statements are in tension; treat this regime as an open "
    "question, not a verdict.";

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double slope_se = 0.0;
  double rss = 0.0;
  std::size_t count = 0;
};

// Ordinary least squares y ~ intercept + slope * x with the slope's standard
// error; well-defined for count >= 3 and non-degenerate x.
LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
  LineFit f;
  f.count = x.size();
  if (f.count < 3) return f;
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < f.count; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= static_cast<double>(f.count);
  my /= static_cast<double>(f.count);
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < f.count; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (sxx <= 0.0) return f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  for (std::size_t i = 0; i < f.count; ++i) {
    double r = y[i] - (f.intercept + f.slope * x[i]);
    f.rss += r * r;
  }
  if (f.count > 2)
    f.slope_se = std::sqrt(f.rss / (static_cast<double>(f.count) - 2.0) / sxx);
  return f;
}

SignVerdict classify(double re, double bound) {
  if (re - bound > 0.0) return SignVerdict::positive;
  if (re + bound < 0.0) return SignVerdict::negative;
  return SignVerdict::indeterminate;
}

const char* verdict_name(SignVerdict v) {
  switch (v) {
    case SignVerdict::positive: return "positive";
    case SignVerdict::negative: return "negative";
    default: return "indeterminate";
  }
}

const char* status_name(OverallStatus s) {
  switch (s) {
    case OverallStatus::consistent: return "consistent_with_RH_up_to";
    case OverallStatus::violation: return "violation_witness";
    default: return "inconclusive";
  }
}

void check_consecutive(const std::vector<LiResult>& values) {
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (values[i].n != static_cast<long>(i) + 1)
      throw domain_error(
          "coefficient sequence must be indexed by consecutive n starting at 1");
  }
}

}  // namespace

GrowthReport growth_detector(const std::vector<LiResult>& values) {
  if (values.size() < 20)
    throw domain_error("growth detection needs at least 20 consecutive values");
  check_consecutive(values);

  // Top half of the range, skipping exact zeros (log undefined there).
  std::vector<double> ns, logs;
  const std::size_t start = values.size() / 2;
  for (std::size_t i = start; i < values.size(); ++i) {
    double m = abs(values[i].value).to_double();
    if (m == 0.0) continue;
    ns.push_back(static_cast<double>(values[i].n));
    logs.push_back(std::log(m));
  }
  GrowthReport g;
  if (ns.size() < 8) {
    g.note = "too few nonzero values in the top half to estimate a rate";
    return g;
  }

  LineFit lin = fit_line(ns, logs);
  g.rate_estimate = std::exp(lin.slope);

  std::vector<double> logn(ns.size());
  for (std::size_t i = 0; i < ns.size(); ++i) logn[i] = std::log(ns[i]);
  LineFit logfit = fit_line(logn, logs);

  // Channel (a): the sequence is genuinely geometric — a line in n explains
  // it decisively better than a line in log n.
  const bool geometric = lin.rss < 0.25 * logfit.rss &&
                         lin.slope > 3.0 * lin.slope_se && lin.slope > 1e-6;

  // Channel (b): a growing oscillation rides on a smooth trend. First
  // differences of the log-model residuals suppress the trend while keeping
  // most of the oscillation; a significant positive log-slope of the
  // block-RMS envelope above the noise floor marks |ratio| > 1 content.
  bool envelope = false;
  double env_slope = 0.0;
  if (ns.size() >= 32) {
    std::vector<double> diff(ns.size() - 1);
    for (std::size_t i = 0; i + 1 < ns.size(); ++i) {
      double r0 = logs[i] - (logfit.intercept + logfit.slope * logn[i]);
      double r1 = logs[i + 1] - (logfit.intercept + logfit.slope * logn[i + 1]);
      diff[i] = r1 - r0;
    }
    const std::size_t blocks = 8;
    const std::size_t per = diff.size() / blocks;
    std::vector<double> bx, by;
    double last_rms = 0.0;
    for (std::size_t b = 0; b < blocks; ++b) {
      const std::size_t lo = b * per;
      const std::size_t hi = (b + 1 == blocks) ? diff.size() : lo + per;
      double s = 0.0;
      for (std::size_t i = lo; i < hi; ++i) s += diff[i] * diff[i];
      double rms = std::sqrt(s / static_cast<double>(hi - lo));
      if (rms <= 0.0) {
        bx.clear();
        break;
      }
      bx.push_back(0.5 * (ns[lo] + ns[hi - 1]));
      by.push_back(std::log(rms));
      last_rms = rms;
    }
    if (bx.size() == blocks) {
      LineFit env = fit_line(bx, by);
      env_slope = env.slope;
      envelope = env.slope > 3.0 * env.slope_se && last_rms >= 1e-5;
    }
  }

  g.flagged = geometric || envelope;
  std::ostringstream os;
  os << "slope " << lin.slope << " (se " << lin.slope_se << ") over n in ["
     << ns.front() << ", " << ns.back() << "]";
  if (geometric) os << "; geometric signature";
  if (envelope) os << "; growing oscillation envelope (log-RMS slope " << env_slope << ")";
  if (!g.flagged) os << "; consistent with polynomial growth";
  g.note = os.str();
  return g;
}

CriterionReport verdict(const std::vector<LiResult>& values, double a) {
  if (a == 0.5 || !std::isfinite(a))
    throw domain_error("criterion is undefined at a = 1/2");
  if (values.empty()) throw domain_error("criterion needs at least one value");
  check_consecutive(values);
  const bool flipped = a > 0.5;

  CriterionReport rep;
  rep.a = a;
  if (flipped) rep.warning = kFlipWarning;

  rep.records.reserve(values.size());
  for (const LiResult& v : values) {
    CriterionRecord rec;
    rec.n = v.n;
    rec.re_lambda = v.value.re().to_double();
    rec.error_bound = v.error_bound.to_double();
    rec.verdict = classify(rec.re_lambda, rec.error_bound);
    rep.records.push_back(rec);
  }

  // A record supports the criterion when its proven sign matches the
  // regime's inequality; the opposite proven sign is a witness against it.
  const SignVerdict supporting =
      flipped ? SignVerdict::negative : SignVerdict::positive;
  const SignVerdict violating =
      flipped ? SignVerdict::positive : SignVerdict::negative;

  long prefix = 0;
  bool prefix_alive = true;
  long witness = 0;
  for (const CriterionRecord& rec : rep.records) {
    if (prefix_alive && rec.verdict == supporting)
      prefix = rec.n;
    else
      prefix_alive = false;
    if (witness == 0 && rec.verdict == violating) witness = rec.n;
  }
  rep.consistent_up_to = prefix;
  rep.violation_witness = witness;
  if (witness != 0)
    rep.status = OverallStatus::violation;
  else if (prefix == rep.records.back().n)
    rep.status = OverallStatus::consistent;
  else
    rep.status = OverallStatus::inconclusive;

  if (values.size() >= 20) {
    rep.growth = growth_detector(values);
  } else {
    rep.growth.note = "growth detection skipped: fewer than 20 values";
  }
  return rep;
}

MonotonicityReport monotonicity_report(const std::vector<LiResult>& values) {
  if (values.size() < 2)
    throw domain_error("monotonicity report needs at least two values");
  MonotonicityReport m;
  m.increasing_up_to = values.front().n;
  for (std::size_t i = 1; i < values.size(); ++i) {
    if (values[i].value.re() > values[i - 1].value.re()) {
      m.increasing_up_to = values[i].n;
    } else {
      m.first_descent = values[i].n;
      break;
    }
  }
  return m;
}

std::string criterion_report_to_json(const CriterionReport& r) {
  nlohmann::ordered_json j;
  j["a"] = r.a;
  j["status"] = status_name(r.status);
  j["consistent_up_to"] = r.consistent_up_to;
  if (r.violation_witness != 0) j["violation_witness"] = r.violation_witness;
  j["growth"] = {{"rate_estimate", r.growth.rate_estimate},
                 {"flagged", r.growth.flagged},
                 {"note", r.growth.note}};
  if (!r.warning.empty()) j["warning"] = r.warning;
  nlohmann::ordered_json recs = nlohmann::ordered_json::array();
  for (const CriterionRecord& rec : r.records) {
    recs.push_back({{"n", rec.n},
                    {"re_lambda", rec.re_lambda},
                    {"error_bound", rec.error_bound},
                    {"verdict", verdict_name(rec.verdict)}});
  }
  j["records"] = std::move(recs);
  return j.dump(2);
}

} // namespace licrit
