#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "ceilfit/scaling.hpp"
#include "ceilfit/series.hpp"

namespace ceilfit {

// Seeded generator of noisy sigmoid runs with labeled outliers.
struct SynthSpec {
  SigmoidParams params;
  std::vector<double> x_grid;  // exaFLOPs; empty selects default_log_grid(params.c_mid)
  double noise_sigma = 0.0;
  double outlier_fraction = 0.0;
  double outlier_shift = 0.0;
  std::uint64_t seed = 0;
};

// Throws InputDomainError for sigma < 0, fraction outside [0, 0.5), a
// non-finite shift, or a grid that is empty-after-default, negative or unsorted.
void validate(const SynthSpec& spec);

// `n` log-spaced points from lo_factor*c_mid to hi_factor*c_mid inclusive.
std::vector<double> default_log_grid(double c_mid, std::size_t n = 20, double lo_factor = 0.1,
                                     double hi_factor = 10.0);

struct SynthRun {
  RunSeries run;
  std::vector<std::size_t> outlier_indices;  // ascending
};

// Draw order: one gaussian per point, then a partial Fisher-Yates pick of
// floor(n * fraction) indices, then one sign per picked index in ascending
// order. Values are clamped to [0, 100].
SynthRun synthesize(const SynthSpec& spec);

}  // namespace ceilfit
