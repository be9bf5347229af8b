#pragma once

#include <array>
#include <map>
#include <string>
#include <vector>

namespace ceilfit {

// Sigmoidal power law in compute x (exaFLOPs):
//
//   P(x) = p_start + (ceiling - p_start) / (1 + (x / c_mid)^(-steepness))
//
// p_start is the x -> 0+ limit and ceiling the x -> inf limit.
struct SigmoidParams {
  double p_start = 0.0;
  double ceiling = 0.0;
  double c_mid = 1.0;
  double steepness = 1.0;

  friend bool operator==(const SigmoidParams&, const SigmoidParams&) = default;
};

enum class CeilingMode {
  kConstrained,    // ceiling >= p_start
  kUnconstrained,  // degrading runs allowed; callers should warn when ceiling < p_start
};

// Throws InputDomainError on non-finite fields, c_mid <= 0, steepness <= 0,
// or (constrained mode) ceiling < p_start.
void validate(const SigmoidParams& p, CeilingMode mode = CeilingMode::kConstrained);

// x must be >= 0; x == 0 yields p_start by continuous extension.
double eval_sigmoid(const SigmoidParams& p, double x);

// dP/d(p_start, ceiling, c_mid, steepness) at x. Same domain as eval_sigmoid.
std::array<double, 4> sigmoid_gradient(const SigmoidParams& p, double x);

inline double ceiling(const SigmoidParams& p) { return p.ceiling; }
inline double plasticity(const SigmoidParams& p) { return p.ceiling - p.p_start; }

// One SFT-then-RL configuration broken into base, SFT gain, and RL headroom.
struct DecompositionRecord {
  double p0 = 0.0;
  double x_sft = 0.0;
  double p_sft = 0.0;
  double delta_sft = 0.0;
  SigmoidParams rl_params;
  double pl_rl = 0.0;
  double a_post = 0.0;
  std::map<double, double> delta_rl_at;  // x_rl -> P_rl(x_rl) - p_sft

  // RL gain at an arbitrary RL compute.
  double delta_rl(double x_rl) const;
};

inline constexpr double kAnchorTolerance = 1e-9;

// rl_fit.p_start must equal p_sft within kAnchorTolerance (ContractError otherwise).
// delta_rl_at is filled for x_rl = 0 plus every value in rl_grid.
DecompositionRecord decompose(double p0, double x_sft, double p_sft, const SigmoidParams& rl_fit,
                              const std::vector<double>& rl_grid = {});

}  // namespace ceilfit
