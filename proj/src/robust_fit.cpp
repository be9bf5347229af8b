#include "ceilfit/robust_fit.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

#include "ceilfit/error.hpp"
#include "ceilfit/rng.hpp"

namespace ceilfit {

namespace {

using Vec4 = std::array<double, 4>;
using Jacobian = Eigen::Matrix<double, Eigen::Dynamic, 4>;

// Internal coordinates u:
//   u0 = p_start
//   u1 = plasticity (constrained) or ceiling (unconstrained)
//   u2 = ln c_mid
//   u3 = ln steepness
// All bounds are boxes in u, except that the plasticity upper bound moves with u0.
class Reparam {
 public:
  explicit Reparam(const ParamBounds& b) : b_(b) {
    if (b_.fixed_p_start && (*b_.fixed_p_start < b_.p_start_min ||
                             *b_.fixed_p_start > b_.p_start_max)) {
      throw InputDomainError("pinned p_start outside bounds");
    }
  }

  bool fixed(int j) const { return j == 0 && b_.fixed_p_start.has_value(); }

  Vec4 to_internal(const SigmoidParams& p) const {
    const double ps = b_.fixed_p_start.value_or(p.p_start);
    const double second = constrained() ? p.ceiling - ps : p.ceiling;
    return {ps, second, std::log(p.c_mid), std::log(p.steepness)};
  }

  SigmoidParams to_params(const Vec4& u) const {
    SigmoidParams p;
    p.p_start = u[0];
    p.ceiling = constrained() ? u[0] + u[1] : u[1];
    // exp(log(bound)) can overshoot the bound by an ulp.
    p.c_mid = std::clamp(std::exp(u[2]), b_.c_mid_min, b_.c_mid_max);
    p.steepness = std::clamp(std::exp(u[3]), b_.steepness_min, b_.steepness_max);
    return p;
  }

  void bounds(const Vec4& u, Vec4& lo, Vec4& hi) const {
    if (b_.fixed_p_start) {
      lo[0] = hi[0] = *b_.fixed_p_start;
    } else {
      lo[0] = b_.p_start_min;
      hi[0] = b_.p_start_max;
    }
    if (constrained()) {
      lo[1] = std::max(0.0, b_.ceiling_min - u[0]);
      hi[1] = std::max(lo[1], b_.ceiling_max - u[0]);
    } else {
      lo[1] = b_.ceiling_min;
      hi[1] = b_.ceiling_max;
    }
    lo[2] = std::log(b_.c_mid_min);
    hi[2] = std::log(b_.c_mid_max);
    lo[3] = std::log(b_.steepness_min);
    hi[3] = std::log(b_.steepness_max);
  }

  Vec4 project(Vec4 u) const {
    Vec4 lo{}, hi{};
    bounds(u, lo, hi);
    u[0] = std::clamp(u[0], lo[0], hi[0]);
    bounds(u, lo, hi);  // plasticity box depends on the clamped p_start
    for (int j = 1; j < 4; ++j) u[j] = std::clamp(u[j], lo[j], hi[j]);
    return u;
  }

  // Chain rule from natural-parameter gradient to internal coordinates.
  Vec4 internal_gradient(const std::array<double, 4>& g, const SigmoidParams& p) const {
    if (constrained()) {
      return {g[0] + g[1], g[1], g[2] * p.c_mid, g[3] * p.steepness};
    }
    return {g[0], g[1], g[2] * p.c_mid, g[3] * p.steepness};
  }

 private:
  bool constrained() const { return b_.mode == CeilingMode::kConstrained; }
  ParamBounds b_;
};

// Residuals y - P(x) and the model Jacobian dP/du. Returns the sum of squares.
double evaluate(const Reparam& rp, const Vec4& u, std::span<const CurvePoint> pts,
                Eigen::VectorXd& r, Jacobian& G) {
  const SigmoidParams p = rp.to_params(u);
  const auto n = static_cast<Eigen::Index>(pts.size());
  r.resize(n);
  G.resize(n, 4);
  double cost = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto& pt = pts[static_cast<std::size_t>(i)];
    r[i] = pt.y - eval_sigmoid(p, pt.x);
    cost += r[i] * r[i];
    const Vec4 gi = rp.internal_gradient(sigmoid_gradient(p, pt.x), p);
    for (int j = 0; j < 4; ++j) G(i, j) = gi[j];
  }
  return cost;
}

bool at_bound(double v, double bound) {
  return std::fabs(v - bound) <= 1e-12 * (1.0 + std::fabs(bound));
}

double quantile_sorted(const std::vector<double>& sorted, double q) {
  const double idx = q * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(idx));
  const auto hi = static_cast<std::size_t>(std::ceil(idx));
  return sorted[lo] + (sorted[hi] - sorted[lo]) * (idx - static_cast<double>(lo));
}

std::size_t floor_fraction(std::size_t n, double fraction) {
  // Guard against 20 * 0.85 landing a hair below 17.
  return static_cast<std::size_t>(std::floor(static_cast<double>(n) * fraction + 1e-9));
}

std::size_t ceil_fraction(std::size_t n, double fraction) {
  return static_cast<std::size_t>(std::ceil(static_cast<double>(n) * fraction - 1e-9));
}

std::vector<CurvePoint> subset(const std::vector<CurvePoint>& pts,
                               const std::vector<std::size_t>& idx) {
  std::vector<CurvePoint> out;
  out.reserve(idx.size());
  for (auto i : idx) out.push_back(pts[i]);
  return out;
}

// The MAD is treated as zero below this fraction of the target scale; a
// noise-free fit leaves residuals at round-off level.
double mad_floor(std::span<const CurvePoint> pts) {
  double ymax = 1.0;
  for (const auto& p : pts) ymax = std::max(ymax, std::fabs(p.y));
  return 1e-7 * ymax;
}

bool within(const SigmoidParams& p, const ParamBounds& b) {
  if (b.fixed_p_start) {
    if (p.p_start != *b.fixed_p_start) return false;
  } else if (p.p_start < b.p_start_min || p.p_start > b.p_start_max) {
    return false;
  }
  if (p.ceiling < b.ceiling_min || p.ceiling > b.ceiling_max) return false;
  if (b.mode == CeilingMode::kConstrained && p.ceiling < p.p_start) return false;
  return p.c_mid >= b.c_mid_min && p.c_mid <= b.c_mid_max && p.steepness >= b.steepness_min &&
         p.steepness <= b.steepness_max;
}

void require_points(std::size_t have, std::size_t need, const char* what) {
  if (have < need) {
    throw InsufficientDataError(std::string(what) + ": need at least " + std::to_string(need) +
                                " points, got " + std::to_string(have));
  }
}

}  // namespace

// ---------------------------------------------------------------------------

void validate(const FitConfig& c) {
  if (!(c.train_fraction > 0.0 && c.train_fraction <= 1.0)) {
    throw InputDomainError("train_fraction must be in (0, 1]");
  }
  if (!(c.z_threshold > 0.0)) throw InputDomainError("z_threshold must be positive");
  if (!(c.lts_alpha > 0.5 && c.lts_alpha <= 1.0)) {
    throw InputDomainError("lts_alpha must be in (0.5, 1]");
  }
  if (c.max_outlier_rounds < 1 || c.nls_max_iters < 1 || c.multistart_count < 1) {
    throw InputDomainError("iteration and start counts must be at least 1");
  }
  if (!(c.nls_tolerance > 0.0)) throw InputDomainError("nls_tolerance must be positive");
  if (c.fixed_p_start &&
      !(*c.fixed_p_start >= 0.0 && *c.fixed_p_start <= kPerformanceCap)) {
    throw InputDomainError("pinned p_start outside [0, 110]");
  }
}

ParamBounds bounds_for(const FitConfig& cfg) {
  ParamBounds b;
  b.mode = cfg.ceiling_mode;
  b.fixed_p_start = cfg.fixed_p_start;
  return b;
}

double median(std::span<const double> values) {
  if (values.empty()) throw InputDomainError("median of an empty sequence");
  std::vector<double> v(values.begin(), values.end());
  const std::size_t mid = v.size() / 2;
  std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid), v.end());
  double med = v[mid];
  if (v.size() % 2 == 0) {
    const double lower = *std::max_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid));
    med = 0.5 * (lower + med);
  }
  return med;
}

double mad(std::span<const double> values) {
  if (values.empty()) throw InputDomainError("MAD of an empty sequence");
  const double med = median(values);
  std::vector<double> dev;
  dev.reserve(values.size());
  for (double v : values) dev.push_back(std::fabs(v - med));
  return median(dev);
}

std::vector<double> modified_z_scores(std::span<const double> residuals, double scale_floor) {
  if (residuals.empty()) throw InputDomainError("no residuals");
  const double med = median(residuals);
  const double scale = mad(residuals);
  if (!(scale > scale_floor)) throw DegenerateScaleError("MAD is zero; scores undefined");
  std::vector<double> z;
  z.reserve(residuals.size());
  for (double r : residuals) z.push_back(kModifiedZScale * (r - med) / scale);
  return z;
}

double sum_squared_residuals(const SigmoidParams& params, std::span<const CurvePoint> points) {
  double s = 0.0;
  for (const auto& p : points) {
    const double r = p.y - eval_sigmoid(params, p.x);
    s += r * r;
  }
  return s;
}

NlsResult fit_sigmoid_nls(std::span<const CurvePoint> points, const SigmoidParams& init,
                          const ParamBounds& bounds, const NlsOptions& options) {
  require_points(points.size(), 4, "sigmoid fit");
  validate(init, CeilingMode::kUnconstrained);
  const Reparam rp(bounds);

  double ymax = 1.0;
  for (const auto& p : points) ymax = std::max(ymax, std::fabs(p.y));
  const double negligible = static_cast<double>(points.size()) * std::pow(1e-12 * ymax, 2);

  Vec4 u = rp.project(rp.to_internal(init));
  Eigen::VectorXd r, r_new;
  Jacobian G, G_new;
  double cost = evaluate(rp, u, points, r, G);
  Eigen::Matrix4d JtJ = G.transpose() * G;
  Eigen::Vector4d g = G.transpose() * r;

  double lambda = 1e-3 * std::max(JtJ.diagonal().maxCoeff(), 1e-12);
  double nu = 2.0;
  bool converged = false;
  int it = 0;
  for (; it < options.max_iters; ++it) {
    if (cost <= negligible) {
      converged = true;
      break;
    }
    Vec4 lo{}, hi{};
    rp.bounds(u, lo, hi);
    std::vector<int> free;
    for (int j = 0; j < 4; ++j) {
      if (rp.fixed(j)) continue;
      if (at_bound(u[j], lo[j]) && g[j] < 0.0) continue;  // descent pushes below the box
      if (at_bound(u[j], hi[j]) && g[j] > 0.0) continue;
      free.push_back(j);
    }
    if (free.empty()) {
      converged = true;
      break;
    }

    const auto nf = static_cast<Eigen::Index>(free.size());
    Eigen::MatrixXd M(nf, nf);
    Eigen::VectorXd rhs(nf);
    for (Eigen::Index a = 0; a < nf; ++a) {
      rhs[a] = g[free[a]];
      for (Eigen::Index b = 0; b < nf; ++b) M(a, b) = JtJ(free[a], free[b]);
      M(a, a) += lambda * std::max(JtJ(free[a], free[a]), 1e-12);
    }
    const Eigen::VectorXd delta = M.ldlt().solve(rhs);

    Vec4 trial = u;
    for (Eigen::Index a = 0; a < nf; ++a) trial[free[a]] += delta[a];
    trial = rp.project(trial);

    Eigen::Vector4d step;
    bool tiny_step = true;
    for (int j = 0; j < 4; ++j) {
      step[j] = trial[j] - u[j];
      if (std::fabs(step[j]) > options.tolerance * std::max(std::fabs(u[j]), 1.0)) {
        tiny_step = false;
      }
    }
    if (tiny_step) {
      converged = true;
      break;
    }

    const double predicted = 2.0 * step.dot(g) - (G * step).squaredNorm();
    const double trial_cost = evaluate(rp, trial, points, r_new, G_new);
    if (trial_cost < cost) {
      const double gain = cost - trial_cost;
      const double rho = predicted > 0.0 ? gain / predicted : 1.0;
      const double relative = gain / cost;
      u = trial;
      cost = trial_cost;
      r.swap(r_new);
      G.swap(G_new);
      JtJ = G.transpose() * G;
      g = G.transpose() * r;
      lambda *= std::max(1.0 / 3.0, 1.0 - std::pow(2.0 * rho - 1.0, 3));
      nu = 2.0;
      if (relative <= options.tolerance) {
        ++it;
        converged = true;
        break;
      }
    } else {
      lambda *= nu;
      nu *= 2.0;
      if (lambda > 1e30) {
        converged = true;  // no descent direction left at this point
        break;
      }
    }
  }

  NlsResult out;
  out.params = rp.to_params(u);
  out.converged = converged;
  out.cost = cost;
  out.iterations = it;
  // The log-space round trip can move a feasible start by an ulp; never hand
  // back something worse than the caller's own point.
  if (within(init, bounds)) {
    const double init_cost = sum_squared_residuals(init, points);
    if (init_cost <= out.cost) {
      out.params = init;
      out.cost = init_cost;
    }
  }
  return out;
}

std::vector<SigmoidParams> multistart_inits(std::span<const CurvePoint> points,
                                            const FitConfig& cfg) {
  require_points(points.size(), 1, "multistart");
  const ParamBounds b = bounds_for(cfg);
  double ymin = points.front().y;
  double ymax = points.front().y;
  std::vector<double> xs;
  for (const auto& p : points) {
    ymin = std::min(ymin, p.y);
    ymax = std::max(ymax, p.y);
    if (p.x > 0.0) xs.push_back(p.x);
  }
  std::sort(xs.begin(), xs.end());
  auto clamp_c = [&](double c) { return std::clamp(c, b.c_mid_min, b.c_mid_max); };
  std::array<double, 3> c_grid{1.0, 1.0, 1.0};
  if (!xs.empty()) {
    c_grid = {clamp_c(quantile_sorted(xs, 0.25)), clamp_c(quantile_sorted(xs, 0.5)),
              clamp_c(quantile_sorted(xs, 0.75))};
  }
  const double p_start = cfg.fixed_p_start.value_or(ymin);
  const double top = std::max(ymax, p_start);

  auto make = [&](double ps, double a, double c, double s) {
    SigmoidParams p;
    p.p_start = std::clamp(ps, b.p_start_min, b.p_start_max);
    p.ceiling = std::clamp(a, b.ceiling_min, b.ceiling_max);
    if (cfg.ceiling_mode == CeilingMode::kConstrained) p.ceiling = std::max(p.ceiling, p.p_start);
    p.c_mid = clamp_c(c);
    p.steepness = std::clamp(s, b.steepness_min, b.steepness_max);
    return p;
  };

  std::vector<SigmoidParams> inits;
  for (double lift : {0.0, 1.0, 3.0}) {
    for (double c : c_grid) {
      for (double s : {0.5, 1.0, 2.0}) inits.push_back(make(p_start, top + lift, c, s));
    }
  }
  Rng rng(cfg.seed);
  for (int k = 0; k < cfg.multistart_count; ++k) {
    const double ps = cfg.fixed_p_start ? *cfg.fixed_p_start : ymin - rng.uniform(0.0, 2.0);
    const double a = top + rng.uniform(0.0, 5.0);
    const double c = c_grid[1] * std::exp(1.5 * rng.gaussian());
    const double s = std::exp(rng.uniform(std::log(0.3), std::log(4.0)));
    inits.push_back(make(ps, a, c, s));
  }
  return inits;
}

NlsResult fit_sigmoid_multistart(std::span<const CurvePoint> points, const FitConfig& cfg) {
  require_points(points.size(), 4, "sigmoid fit");
  const ParamBounds b = bounds_for(cfg);
  const NlsOptions opt{cfg.nls_max_iters, cfg.nls_tolerance};
  std::optional<NlsResult> best;
  for (const auto& init : multistart_inits(points, cfg)) {
    NlsResult r = fit_sigmoid_nls(points, init, b, opt);
    if (!best || r.cost < best->cost) best = r;
  }
  return *best;
}

std::pair<RunSeries, RunSeries> split_train_val(const RunSeries& points, double train_fraction) {
  require_points(points.points.size(), 5, "train/validation split");
  if (!(train_fraction > 0.0 && train_fraction <= 1.0)) {
    throw InputDomainError("train_fraction must be in (0, 1]");
  }
  for (std::size_t i = 1; i < points.points.size(); ++i) {
    if (points.points[i].x < points.points[i - 1].x) {
      throw InputDomainError("points must be ordered by compute; point " + std::to_string(i) +
                             " decreases");
    }
  }
  const std::size_t n_train = std::max<std::size_t>(1, ceil_fraction(points.points.size(), train_fraction));
  RunSeries train{points.run_id, {}};
  RunSeries val{points.run_id, {}};
  const auto split = points.points.begin() + static_cast<std::ptrdiff_t>(n_train);
  train.points.assign(points.points.begin(), split);
  val.points.assign(split, points.points.end());
  return {train, val};
}

FitResult iterative_outlier_fit(const RunSeries& train, const FitConfig& cfg) {
  validate(cfg);
  require_points(train.points.size(), kMinActivePoints, "outlier rejection");
  const double floor = mad_floor(train.points);

  FitResult res;
  res.config = cfg;
  res.n_train = train.points.size();
  std::vector<std::size_t> active(train.points.size());
  std::iota(active.begin(), active.end(), std::size_t{0});

  bool settled = false;
  for (int round = 1; round <= cfg.max_outlier_rounds; ++round) {
    const auto pts = subset(train.points, active);
    const NlsResult fit = fit_sigmoid_multistart(pts, cfg);
    res.params = fit.params;
    res.converged = fit.converged;
    res.rounds_used = round;

    std::vector<double> resid;
    resid.reserve(pts.size());
    for (const auto& p : pts) resid.push_back(p.y - eval_sigmoid(fit.params, p.x));
    std::vector<double> z;
    try {
      z = modified_z_scores(resid, floor);
    } catch (const DegenerateScaleError&) {
      settled = true;
      break;
    }

    std::vector<std::size_t> keep;
    std::vector<Removal> dropped;
    for (std::size_t k = 0; k < active.size(); ++k) {
      if (std::fabs(z[k]) > cfg.z_threshold) {
        dropped.push_back({active[k], RemovalStage::kModifiedZ, round, std::fabs(z[k])});
      } else {
        keep.push_back(active[k]);
      }
    }
    if (dropped.empty()) {
      settled = true;
      break;
    }
    if (keep.size() < kMinActivePoints) {
      res.truncated = true;
      settled = true;
      break;
    }
    res.removed_outliers.insert(res.removed_outliers.end(), dropped.begin(), dropped.end());
    active = std::move(keep);
  }
  if (!settled) {
    // Round cap reached right after a removal: refit on what is left.
    const NlsResult fit = fit_sigmoid_multistart(subset(train.points, active), cfg);
    res.params = fit.params;
    res.converged = fit.converged;
    res.rounds_used += 1;
  }
  res.inlier_indices = active;
  if (cfg.ceiling_mode == CeilingMode::kUnconstrained && res.params.ceiling < res.params.p_start) {
    res.warnings.push_back("fitted ceiling is below p_start (degrading run)");
  }
  const auto m = fit_metrics(res.params, subset(train.points, active), {});
  res.r2_train = m.r2_train;
  return res;
}

FitResult lts_fit(const RunSeries& train, const FitConfig& cfg, const SigmoidParams& init) {
  validate(cfg);
  const std::size_t n = train.points.size();
  require_points(n, kMinActivePoints, "least trimmed squares");
  const std::size_t h = floor_fraction(n, cfg.lts_alpha);
  if (h < 4) {
    throw InsufficientDataError("least trimmed squares: h = " + std::to_string(h) +
                                " is below the 4 fitted parameters");
  }
  const ParamBounds b = bounds_for(cfg);
  const NlsOptions opt{cfg.nls_max_iters, cfg.nls_tolerance};

  // Selection: h smallest squared residuals, ties to the lower index. Returns
  // the chosen indices in ascending order plus their summed squares.
  auto select = [&](const SigmoidParams& p, double& trimmed) {
    std::vector<double> sq(n);
    for (std::size_t i = 0; i < n; ++i) {
      const double r = train.points[i].y - eval_sigmoid(p, train.points[i].x);
      sq[i] = r * r;
    }
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t c) { return sq[a] < sq[c]; });
    order.resize(h);
    std::sort(order.begin(), order.end());
    trimmed = 0.0;
    for (auto i : order) trimmed += sq[i];  // index order, matching the NLS cost
    return std::make_pair(order, sq);
  };

  FitResult res;
  res.config = cfg;
  res.n_train = n;
  SigmoidParams theta = init;
  if (cfg.fixed_p_start) theta.p_start = *cfg.fixed_p_start;
  double trimmed = 0.0;
  auto [chosen, sq] = select(theta, trimmed);
  res.lts_objective_trace.push_back(trimmed);
  bool converged = false;
  bool nls_converged = true;
  int steps = 0;
  for (; steps < cfg.nls_max_iters; ++steps) {
    const NlsResult fit = fit_sigmoid_nls(subset(train.points, chosen), theta, b, opt);
    nls_converged = fit.converged;
    const SigmoidParams prev = theta;
    theta = fit.params;
    double next_trimmed = 0.0;
    auto [next, next_sq] = select(theta, next_trimmed);
    const double slack = 4.0 * std::numeric_limits<double>::epsilon() * trimmed;
    if (next_trimmed > trimmed + slack) {
      throw std::logic_error("C-step increased the trimmed objective");
    }
    res.lts_objective_trace.push_back(next_trimmed);
    trimmed = next_trimmed;
    const bool same_set = next == chosen;
    chosen = std::move(next);
    sq = std::move(next_sq);

    const std::array<double, 4> a = {prev.p_start, prev.ceiling, std::log(prev.c_mid),
                                     std::log(prev.steepness)};
    const std::array<double, 4> c = {theta.p_start, theta.ceiling, std::log(theta.c_mid),
                                     std::log(theta.steepness)};
    bool still = true;
    for (int j = 0; j < 4; ++j) {
      if (std::fabs(c[j] - a[j]) > cfg.nls_tolerance * std::max(std::fabs(a[j]), 1.0)) {
        still = false;
      }
    }
    if (same_set || still) {
      ++steps;
      converged = true;
      break;
    }
  }

  res.params = theta;
  res.converged = converged && nls_converged;
  res.rounds_used = steps;
  res.inlier_indices = chosen;
  std::size_t k = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (k < chosen.size() && chosen[k] == i) {
      ++k;
      continue;
    }
    res.removed_outliers.push_back({i, RemovalStage::kTrimmed, 0, sq[i]});
  }
  if (cfg.ceiling_mode == CeilingMode::kUnconstrained && theta.ceiling < theta.p_start) {
    res.warnings.push_back("fitted ceiling is below p_start (degrading run)");
  }
  res.r2_train = fit_metrics(theta, subset(train.points, chosen), {}).r2_train;
  return res;
}

FitResult robust_fit_pipeline(const RunSeries& points, const FitConfig& cfg) {
  validate(cfg);
  require_points(points.points.size(), 6, "robust fit");
  auto [train, val] = split_train_val(points, cfg.train_fraction);

  FitResult res = iterative_outlier_fit(train, cfg);
  if (cfg.use_lts) {
    RunSeries inliers{train.run_id, subset(train.points, res.inlier_indices)};
    FitResult stage2 = lts_fit(inliers, cfg, res.params);
    std::vector<std::size_t> mapped;
    mapped.reserve(stage2.inlier_indices.size());
    for (auto i : stage2.inlier_indices) mapped.push_back(res.inlier_indices[i]);
    for (auto rem : stage2.removed_outliers) {
      rem.index = res.inlier_indices[rem.index];
      res.removed_outliers.push_back(rem);
    }
    res.params = stage2.params;
    res.converged = res.converged && stage2.converged;
    res.inlier_indices = std::move(mapped);
    res.lts_objective_trace = std::move(stage2.lts_objective_trace);
    res.warnings.insert(res.warnings.end(), stage2.warnings.begin(), stage2.warnings.end());
  }
  const auto m = fit_metrics(res.params, subset(train.points, res.inlier_indices), val.points);
  res.r2_train = m.r2_train;
  res.rmse_val = m.rmse_val;
  res.n_train = train.points.size();
  res.n_val = val.points.size();
  // Warnings from Stage-1 and Stage-2 can repeat.
  std::sort(res.warnings.begin(), res.warnings.end());
  res.warnings.erase(std::unique(res.warnings.begin(), res.warnings.end()), res.warnings.end());
  return res;
}

FitMetrics fit_metrics(const SigmoidParams& params, std::span<const CurvePoint> train,
                       std::span<const CurvePoint> val) {
  if (train.empty()) throw InsufficientDataError("fit metrics: empty training set");
  FitMetrics m;
  {
    double mean = 0.0;
    for (const auto& p : train) mean += p.y;
    mean /= static_cast<double>(train.size());
    double ss_tot = 0.0;
    for (const auto& p : train) ss_tot += (p.y - mean) * (p.y - mean);
    if (ss_tot > 0.0) m.r2_train = 1.0 - sum_squared_residuals(params, train) / ss_tot;
  }
  if (!val.empty()) {
    m.rmse_val = std::sqrt(sum_squared_residuals(params, val) / static_cast<double>(val.size()));
  }
  return m;
}

}  // namespace ceilfit
