#include "ceilfit/series.hpp"

#include <cmath>
#include <string>

#include "ceilfit/error.hpp"

namespace ceilfit {

void validate(const RunSeries& run) {
  double prev_x = 0.0;
  for (std::size_t i = 0; i < run.points.size(); ++i) {
    const auto& p = run.points[i];
    const std::string where = "point " + std::to_string(i);
    if (!std::isfinite(p.x) || p.x < 0.0) {
      throw InputDomainError(where + ": compute must be finite and nonnegative");
    }
    if (i > 0 && p.x < prev_x) throw InputDomainError(where + ": compute decreases");
    if (!std::isfinite(p.y) || p.y < 0.0 || p.y > kPerformanceCap) {
      throw InputDomainError(where + ": performance outside [0, 110]");
    }
    prev_x = p.x;
  }
}

}  // namespace ceilfit
