#include "ceilfit/synth.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "ceilfit/error.hpp"
#include "ceilfit/rng.hpp"

namespace ceilfit {

void validate(const SynthSpec& spec) {
  validate(spec.params, CeilingMode::kUnconstrained);
  if (!(spec.noise_sigma >= 0.0) || !std::isfinite(spec.noise_sigma)) {
    throw InputDomainError("synth: noise_sigma must be finite and >= 0");
  }
  if (!(spec.outlier_fraction >= 0.0 && spec.outlier_fraction < 0.5)) {
    throw InputDomainError("synth: outlier_fraction must lie in [0, 0.5)");
  }
  if (!std::isfinite(spec.outlier_shift)) throw InputDomainError("synth: outlier_shift not finite");
  for (std::size_t i = 0; i < spec.x_grid.size(); ++i) {
    const double x = spec.x_grid[i];
    if (!std::isfinite(x) || x < 0.0) throw InputDomainError("synth: grid values must be >= 0");
    if (i > 0 && x < spec.x_grid[i - 1]) throw InputDomainError("synth: grid must be sorted");
  }
}

std::vector<double> default_log_grid(double c_mid, std::size_t n, double lo_factor,
                                     double hi_factor) {
  if (!(c_mid > 0.0) || !(lo_factor > 0.0) || !(hi_factor > lo_factor) || n < 2) {
    throw InputDomainError("log grid: need c_mid > 0, 0 < lo < hi, n >= 2");
  }
  const double a = std::log(lo_factor * c_mid);
  const double b = std::log(hi_factor * c_mid);
  std::vector<double> xs(n);
  for (std::size_t i = 0; i < n; ++i) {
    xs[i] = std::exp(a + (b - a) * static_cast<double>(i) / static_cast<double>(n - 1));
  }
  return xs;
}

SynthRun synthesize(const SynthSpec& spec) {
  validate(spec);
  const auto grid = spec.x_grid.empty() ? default_log_grid(spec.params.c_mid) : spec.x_grid;
  const std::size_t n = grid.size();
  Rng rng(spec.seed);

  SynthRun out;
  out.run.points.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double noise = rng.gaussian() * spec.noise_sigma;
    out.run.points[i] = {grid[i], eval_sigmoid(spec.params, grid[i]) + noise, std::nullopt};
  }

  const auto k = static_cast<std::size_t>(std::floor(static_cast<double>(n) * spec.outlier_fraction));
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  for (std::size_t i = 0; i < k; ++i) {
    const auto j = i + static_cast<std::size_t>(rng.below(n - i));
    std::swap(perm[i], perm[j]);
  }
  out.outlier_indices.assign(perm.begin(), perm.begin() + static_cast<std::ptrdiff_t>(k));
  std::sort(out.outlier_indices.begin(), out.outlier_indices.end());
  for (auto idx : out.outlier_indices) {
    out.run.points[idx].y += rng.coin() ? spec.outlier_shift : -spec.outlier_shift;
  }
  for (auto& p : out.run.points) p.y = std::clamp(p.y, 0.0, kPerformanceMax);
  return out;
}

}  // namespace ceilfit
