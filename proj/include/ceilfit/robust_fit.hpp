#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "ceilfit/scaling.hpp"
#include "ceilfit/series.hpp"

namespace ceilfit {

struct FitConfig {
  double train_fraction = 0.85;
  double z_threshold = 3.5;  // tau
  bool use_lts = false;
  double lts_alpha = 0.85;
  int max_outlier_rounds = 10;
  int nls_max_iters = 200;
  double nls_tolerance = 1e-8;
  int multistart_count = 16;  // jittered starts added to the fixed 27-point grid
  std::uint64_t seed = 0;
  CeilingMode ceiling_mode = CeilingMode::kConstrained;
  std::optional<double> fixed_p_start;  // pins P_start (RL curves anchored at P_sft)

  friend bool operator==(const FitConfig&, const FitConfig&) = default;
};

void validate(const FitConfig& cfg);

// Box for the fitted parameters. In constrained mode the ceiling is further
// limited to [p_start, ceiling_max].
struct ParamBounds {
  double p_start_min = 0.0;
  double p_start_max = kPerformanceCap;
  double ceiling_min = 0.0;
  double ceiling_max = kPerformanceCap;
  double c_mid_min = 1e-3;
  double c_mid_max = 1e6;
  double steepness_min = 1e-2;
  double steepness_max = 1e2;
  CeilingMode mode = CeilingMode::kConstrained;
  std::optional<double> fixed_p_start;
};

ParamBounds bounds_for(const FitConfig& cfg);

struct NlsOptions {
  int max_iters = 200;
  double tolerance = 1e-8;
};

struct NlsResult {
  SigmoidParams params;
  bool converged = false;
  double cost = 0.0;  // sum of squared residuals
  int iterations = 0;
};

// ---------------------------------------------------------------------------
// Robust statistics
// ---------------------------------------------------------------------------

// Median; even lengths average the two central order statistics.
double median(std::span<const double> values);

// median(|v - median(v)|). Throws InputDomainError when empty.
double mad(std::span<const double> values);

inline constexpr double kModifiedZScale = 0.6745;

// 0.6745 * (r - median(r)) / MAD. Throws DegenerateScaleError when
// MAD <= scale_floor (the default floor only catches an exact zero).
std::vector<double> modified_z_scores(std::span<const double> residuals,
                                      double scale_floor = 0.0);

// ---------------------------------------------------------------------------
// Fitting
// ---------------------------------------------------------------------------

// Sum of squared residuals of `params` over `points`, in index order.
double sum_squared_residuals(const SigmoidParams& params, std::span<const CurvePoint> points);

// Bounded Levenberg-Marquardt from a single start. c_mid and steepness move in
// log space; p_start and the ceiling are clamped to the box with an active set.
// Deterministic given init. Throws InsufficientDataError for fewer than 4 points.
NlsResult fit_sigmoid_nls(std::span<const CurvePoint> points, const SigmoidParams& init,
                          const ParamBounds& bounds, const NlsOptions& options = {});

// Starting points used by the multistart fitter, grid first, then seeded jitter.
std::vector<SigmoidParams> multistart_inits(std::span<const CurvePoint> points,
                                            const FitConfig& cfg);

// Best of fit_sigmoid_nls over multistart_inits: lowest cost, lower index on ties.
NlsResult fit_sigmoid_multistart(std::span<const CurvePoint> points, const FitConfig& cfg);

enum class RemovalStage { kModifiedZ, kTrimmed };

struct Removal {
  std::size_t index = 0;  // into the training split
  RemovalStage stage = RemovalStage::kModifiedZ;
  int round = 0;          // Stage-1 round (1-based); 0 for trimmed points
  double score = 0.0;     // |M_i| for Stage-1, squared residual for trimmed points

  friend bool operator==(const Removal&, const Removal&) = default;
};

struct FitResult {
  SigmoidParams params;
  std::vector<std::size_t> inlier_indices;  // ascending, into the training split
  std::vector<Removal> removed_outliers;
  std::optional<double> r2_train;  // absent when inlier targets have zero variance
  std::optional<double> rmse_val;  // absent when the validation split is empty
  bool converged = false;
  int rounds_used = 0;
  bool truncated = false;  // Stage-1 stopped to keep at least 5 active points
  std::vector<double> lts_objective_trace;  // trimmed objective before/after each C-step
  std::size_t n_train = 0;
  std::size_t n_val = 0;
  std::vector<std::string> warnings;
  FitConfig config;

  friend bool operator==(const FitResult&, const FitResult&) = default;
};

// Chronological split: the first ceil(n * fraction) points train, the rest validate.
// Requires >= 5 points sorted by x.
std::pair<RunSeries, RunSeries> split_train_val(const RunSeries& points, double train_fraction);

inline constexpr std::size_t kMinActivePoints = 5;

// Stage-1: repeated multistart fit and Modified-Z rejection on the active set.
FitResult iterative_outlier_fit(const RunSeries& train, const FitConfig& cfg);

// Stage-2: Least Trimmed Squares by concentration steps from `init`.
// h = floor(n * lts_alpha) must be >= 4.
FitResult lts_fit(const RunSeries& train, const FitConfig& cfg, const SigmoidParams& init);

// Split, Stage-1, optional Stage-2, then metrics. Requires >= 6 points.
FitResult robust_fit_pipeline(const RunSeries& points, const FitConfig& cfg);

struct FitMetrics {
  std::optional<double> r2_train;
  std::optional<double> rmse_val;
};

// R^2 over `train` (about the mean of y) and RMSE over `val`.
FitMetrics fit_metrics(const SigmoidParams& params, std::span<const CurvePoint> train,
                       std::span<const CurvePoint> val);

}  // namespace ceilfit
