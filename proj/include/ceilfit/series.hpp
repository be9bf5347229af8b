#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace ceilfit {

// Performance is measured in percentage points. Files may not exceed 100;
// the fitter lets the ceiling run up to kPerformanceCap.
inline constexpr double kPerformanceMax = 100.0;
inline constexpr double kPerformanceCap = 110.0;

// One (cumulative compute, performance) observation.
struct CurvePoint {
  double x = 0.0;  // exaFLOPs
  double y = 0.0;  // performance points
  std::optional<std::int64_t> step;

  friend bool operator==(const CurvePoint&, const CurvePoint&) = default;
};

struct RunSeries {
  std::string run_id;
  std::vector<CurvePoint> points;

  friend bool operator==(const RunSeries&, const RunSeries&) = default;
};

// Throws InputDomainError unless x is finite, nonnegative and nondecreasing
// and every y lies in [0, kPerformanceCap].
void validate(const RunSeries& run);

}  // namespace ceilfit
