#pragma once

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

namespace ceilfit {

struct LossPoint {
  double x = 0.0;     // SFT compute, exaFLOPs
  double loss = 0.0;  // validation loss

  friend bool operator==(const LossPoint&, const LossPoint&) = default;
};

struct LossSeries {
  std::vector<LossPoint> points;

  friend bool operator==(const LossSeries&, const LossSeries&) = default;
};

// x strictly increasing, losses finite and nonnegative.
void validate(const LossSeries& series);

struct PhaseThresholds {
  double delta = 0.02;  // stable band above the minimum
  double delta2 = 0.1;  // severe-overfitting onset
};

void validate(const PhaseThresholds& thr);

enum class PhaseLabel { kAdaptive, kStable, kMildOverfit, kSevereOverfit, kIndeterminate };

std::string_view to_string(PhaseLabel label);

struct LossMinimum {
  std::size_t index = 0;
  double x = 0.0;
  double loss = 0.0;
};

// Global minimum; ties go to the earliest point.
LossMinimum min_val_loss(const LossSeries& series);

// Labels every checkpoint relative to the minimum loss L_min:
//   Stable         L <= (1 + delta) L_min
//   Adaptive       before the first Stable point
//   Mild/Severe    after the last Stable point, split at (1 + delta2) L_min
//   Indeterminate  above the stable band but between two Stable points
// Comparisons are on L / L_min with 1e-12 relative slack so that rescaling the
// losses cannot flip a label through rounding.
std::vector<PhaseLabel> classify_phases(const LossSeries& series, const PhaseThresholds& thr = {});

struct PhaseInterval {
  PhaseLabel label = PhaseLabel::kIndeterminate;
  std::size_t first = 0;  // point indices, inclusive
  std::size_t last = 0;
  double x_begin = 0.0;
  double x_end = 0.0;

  friend bool operator==(const PhaseInterval&, const PhaseInterval&) = default;
};

// One interval per maximal run of equal labels, in order.
std::vector<PhaseInterval> phase_boundaries(std::span<const PhaseLabel> labels,
                                            const LossSeries& series);

// Trailing-window median of the losses (window 1 is the identity).
LossSeries smooth_trailing_median(const LossSeries& series, std::size_t window);

}  // namespace ceilfit
