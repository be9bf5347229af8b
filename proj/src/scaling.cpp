#include "ceilfit/scaling.hpp"

#include <cmath>

#include "ceilfit/error.hpp"

namespace ceilfit {

namespace {

// Logistic form: with z = B * ln(x / C), the curve weight is s = 1 / (1 + e^-z).
// Returns {s, 1 - s}, both computed without cancellation.
struct Weight {
  double s;
  double one_minus_s;
};

Weight weight(const SigmoidParams& p, double x) {
  if (x == 0.0) return {0.0, 1.0};
  const double z = p.steepness * std::log(x / p.c_mid);
  if (z >= 0.0) {
    const double e = std::exp(-z);
    return {1.0 / (1.0 + e), e / (1.0 + e)};
  }
  const double e = std::exp(z);
  return {e / (1.0 + e), 1.0 / (1.0 + e)};
}

void check_x(double x) {
  if (!(x >= 0.0) || !std::isfinite(x)) {
    throw InputDomainError("compute x must be finite and nonnegative");
  }
}

}  // namespace

void validate(const SigmoidParams& p, CeilingMode mode) {
  if (!std::isfinite(p.p_start) || !std::isfinite(p.ceiling) || !std::isfinite(p.c_mid) ||
      !std::isfinite(p.steepness)) {
    throw InputDomainError("sigmoid parameters must be finite");
  }
  if (p.c_mid <= 0.0) throw InputDomainError("c_mid must be positive");
  if (p.steepness <= 0.0) throw InputDomainError("steepness must be positive");
  if (mode == CeilingMode::kConstrained && p.ceiling < p.p_start) {
    throw InputDomainError("ceiling below p_start in constrained mode");
  }
}

double eval_sigmoid(const SigmoidParams& p, double x) {
  check_x(x);
  const Weight w = weight(p, x);
  return p.p_start + (p.ceiling - p.p_start) * w.s;
}

std::array<double, 4> sigmoid_gradient(const SigmoidParams& p, double x) {
  check_x(x);
  const Weight w = weight(p, x);
  if (x == 0.0) return {1.0, 0.0, 0.0, 0.0};
  const double span = p.ceiling - p.p_start;
  const double bell = w.s * w.one_minus_s;  // ds/dz
  return {
      w.one_minus_s,
      w.s,
      -span * bell * p.steepness / p.c_mid,
      span * bell * std::log(x / p.c_mid),
  };
}

double DecompositionRecord::delta_rl(double x_rl) const {
  if (x_rl == 0.0) return 0.0;
  return eval_sigmoid(rl_params, x_rl) - p_sft;
}

DecompositionRecord decompose(double p0, double x_sft, double p_sft, const SigmoidParams& rl_fit,
                              const std::vector<double>& rl_grid) {
  if (!std::isfinite(p0) || !std::isfinite(p_sft)) {
    throw InputDomainError("performance values must be finite");
  }
  check_x(x_sft);
  if (std::fabs(rl_fit.p_start - p_sft) > kAnchorTolerance) {
    throw ContractError("RL curve must start at P_sft");
  }
  DecompositionRecord r;
  r.p0 = p0;
  r.x_sft = x_sft;
  r.p_sft = p_sft;
  r.delta_sft = p_sft - p0;
  r.rl_params = rl_fit;
  r.pl_rl = ceiling(rl_fit) - p_sft;
  r.a_post = p_sft + r.pl_rl;  // identity holds bit-exactly; equals the ceiling to 1 ulp
  r.delta_rl_at[0.0] = 0.0;
  for (double x : rl_grid) r.delta_rl_at[x] = r.delta_rl(x);
  return r;
}

}  // namespace ceilfit
