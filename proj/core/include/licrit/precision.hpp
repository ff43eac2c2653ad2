#pragma once

#include <cmath>
#include <optional>

namespace licrit {

// Working-precision schedule for the coefficient computations. The binomial
// expansion routes lose about log2(1+|1-2a|) bits per index step to
// cancellation (the pole and prime-sum blocks both grow like |(1-a)/a|^n and
// cancel), so the width grows linearly in n with that slope.
struct PrecisionPolicy {
  unsigned base_bits = 128;
  // Forced width (set from the CLI --bits flag or the LICRIT_PRECISION_BITS
  // environment variable); when present it wins over the schedule.
  std::optional<unsigned> override_bits;

  unsigned bits(long n, double a) const {
    if (override_bits) return *override_bits < 24 ? 24u : *override_bits;
    double nn = std::fabs(static_cast<double>(n));
    double growth = nn * (1.0 + std::log2(1.0 + std::fabs(1.0 - 2.0 * a)));
    double b = static_cast<double>(base_bits) + std::ceil(growth);
    if (b < static_cast<double>(base_bits)) b = static_cast<double>(base_bits);
    return static_cast<unsigned>(b);
  }
};

} // namespace licrit
