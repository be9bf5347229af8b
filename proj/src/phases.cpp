#include "ceilfit/phases.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "ceilfit/error.hpp"
#include "ceilfit/robust_fit.hpp"

namespace ceilfit {

namespace {

constexpr double kRatioSlack = 1e-12;

}  // namespace

void validate(const LossSeries& series) {
  for (std::size_t i = 0; i < series.points.size(); ++i) {
    const auto& p = series.points[i];
    const std::string where = "loss point " + std::to_string(i);
    if (!std::isfinite(p.x) || p.x < 0.0) throw InputDomainError(where + ": bad compute value");
    if (!std::isfinite(p.loss) || p.loss < 0.0) throw InputDomainError(where + ": bad loss");
    if (i > 0 && !(p.x > series.points[i - 1].x)) {
      throw InputDomainError(where + ": compute must be strictly increasing");
    }
  }
}

void validate(const PhaseThresholds& thr) {
  if (!(thr.delta > 0.0 && thr.delta < thr.delta2) || !std::isfinite(thr.delta2)) {
    throw InputDomainError("phase thresholds need 0 < delta < delta2");
  }
}

std::string_view to_string(PhaseLabel label) {
  switch (label) {
    case PhaseLabel::kAdaptive: return "Adaptive";
    case PhaseLabel::kStable: return "Stable";
    case PhaseLabel::kMildOverfit: return "Mild";
    case PhaseLabel::kSevereOverfit: return "Severe";
    case PhaseLabel::kIndeterminate: return "Indeterminate";
  }
  return "?";
}

LossMinimum min_val_loss(const LossSeries& series) {
  if (series.points.empty()) throw InputDomainError("empty loss series");
  LossMinimum m{0, series.points[0].x, series.points[0].loss};
  for (std::size_t i = 1; i < series.points.size(); ++i) {
    if (series.points[i].loss < m.loss) m = {i, series.points[i].x, series.points[i].loss};
  }
  return m;
}

std::vector<PhaseLabel> classify_phases(const LossSeries& series, const PhaseThresholds& thr) {
  validate(thr);
  validate(series);
  if (series.points.size() < 2) throw InsufficientDataError("phase labels need at least 2 points");
  const double l_min = min_val_loss(series).loss;
  const std::size_t n = series.points.size();

  // With L_min == 0 only exact zeros are stable and any positive loss is severe.
  auto stable = [&](double loss) {
    if (l_min == 0.0) return loss == 0.0;
    return loss / l_min <= (1.0 + thr.delta) * (1.0 + kRatioSlack);
  };
  auto severe = [&](double loss) {
    if (l_min == 0.0) return loss > 0.0;
    return loss / l_min >= (1.0 + thr.delta2) * (1.0 - kRatioSlack);
  };

  std::size_t first = n;
  std::size_t last = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (stable(series.points[i].loss)) {
      first = std::min(first, i);
      last = i;
    }
  }

  std::vector<PhaseLabel> labels(n, PhaseLabel::kIndeterminate);
  for (std::size_t i = 0; i < n; ++i) {
    const double loss = series.points[i].loss;
    if (stable(loss)) {
      labels[i] = PhaseLabel::kStable;
    } else if (i < first) {
      labels[i] = PhaseLabel::kAdaptive;
    } else if (i > last) {
      labels[i] = severe(loss) ? PhaseLabel::kSevereOverfit : PhaseLabel::kMildOverfit;
    }
  }
  return labels;
}

std::vector<PhaseInterval> phase_boundaries(std::span<const PhaseLabel> labels,
                                            const LossSeries& series) {
  if (labels.size() != series.points.size()) {
    throw InputDomainError("labels and loss series differ in length");
  }
  std::vector<PhaseInterval> out;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (!out.empty() && out.back().label == labels[i]) {
      out.back().last = i;
      out.back().x_end = series.points[i].x;
    } else {
      out.push_back({labels[i], i, i, series.points[i].x, series.points[i].x});
    }
  }
  return out;
}

LossSeries smooth_trailing_median(const LossSeries& series, std::size_t window) {
  if (window == 0) throw InputDomainError("smoothing window must be at least 1");
  LossSeries out = series;
  std::vector<double> buf;
  for (std::size_t i = 0; i < series.points.size(); ++i) {
    const std::size_t begin = i + 1 >= window ? i + 1 - window : 0;
    buf.clear();
    for (std::size_t k = begin; k <= i; ++k) buf.push_back(series.points[k].loss);
    out.points[i].loss = median(buf);
  }
  return out;
}

}  // namespace ceilfit
