#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace ceilfit {

// Dense transformer shape used by the per-token cost model. kv_total_dim is
// the summed width of all K (or all V) heads, so grouped-query attention
// shows up as kv_total_dim < hidden_size.
struct ModelConfig {
  std::int64_t num_layers = 0;
  std::int64_t hidden_size = 0;
  std::int64_t ffn_intermediate = 0;
  std::int64_t vocab_size = 0;
  std::int64_t kv_total_dim = 0;

  friend bool operator==(const ModelConfig&, const ModelConfig&) = default;
};

// Throws InputDomainError when a field is nonpositive or kv_total_dim > hidden_size.
void validate(const ModelConfig& cfg);

enum class Algorithm { kSft, kGrpo, kDapo, kHybrid, kUpt };

std::string_view to_string(Algorithm a);
// Accepts the canonical names (SFT, GRPO, DAPO, Hybrid, UPT) case-insensitively,
// plus LUFFY and SRFT as aliases of Hybrid.
std::optional<Algorithm> parse_algorithm(std::string_view name);

// One optimizer step. Fields that do not apply to `algorithm` must be zero.
struct StepSpec {
  Algorithm algorithm = Algorithm::kSft;
  std::int64_t batch = 0;              // B, or B_gen for DAPO
  std::int64_t update_batch = 0;       // B_train (DAPO)
  std::int64_t sampling_rounds = 0;    // K (DAPO)
  std::int64_t group_size = 0;         // G
  std::int64_t expert_per_prompt = 0;  // N (Hybrid)
  std::int64_t on_policy_kept = 0;     // N_on (UPT)
  std::int64_t off_policy_kept = 0;    // N_off (UPT)
  double avg_seq_len = 0.0;            // S (SFT, GRPO, DAPO)
  double avg_on_len = 0.0;             // S_on (Hybrid, UPT)
  double avg_off_len = 0.0;            // S_off (Hybrid, UPT)

  friend bool operator==(const StepSpec&, const StepSpec&) = default;
};

// Checks counts, lengths, and the "irrelevant fields are zero" rule.
void validate(const StepSpec& step);

inline constexpr double kFlopsPerExaflop = 1e18;

// Floating-point operation count. Always finite and nonnegative.
class FlopCount {
 public:
  constexpr FlopCount() = default;
  explicit FlopCount(double flops);

  constexpr double value() const { return value_; }
  constexpr double exaflops() const { return value_ / kFlopsPerExaflop; }

  friend constexpr bool operator==(FlopCount, FlopCount) = default;
  friend constexpr auto operator<=>(FlopCount, FlopCount) = default;

 private:
  double value_ = 0.0;
};

// Exaflops rendered with one decimal, ties to even on the exact binary value.
std::string format_exaflops(FlopCount f);

FlopCount forward_flops_per_token(const ModelConfig& cfg, double seq_len);
FlopCount train_flops_per_token(const ModelConfig& cfg, double seq_len);

FlopCount sft_step_flops(const ModelConfig& cfg, std::int64_t batch, double avg_seq_len);
FlopCount grpo_step_flops(const ModelConfig& cfg, std::int64_t batch, std::int64_t group_size,
                          double avg_seq_len);
FlopCount dapo_step_flops(const ModelConfig& cfg, std::int64_t sampling_rounds,
                          std::int64_t gen_batch, std::int64_t train_batch,
                          std::int64_t group_size, double avg_seq_len);
// LUFFY and SRFT share this cost model.
FlopCount hybrid_step_flops(const ModelConfig& cfg, std::int64_t batch, std::int64_t group_size,
                            std::int64_t expert_per_prompt, double avg_on_len,
                            double avg_off_len);
FlopCount upt_step_flops(const ModelConfig& cfg, std::int64_t group_size,
                         std::int64_t on_kept, std::int64_t off_kept, double avg_on_len,
                         double avg_off_len);

// Dispatches on step.algorithm after validating the step.
FlopCount step_flops(const ModelConfig& cfg, const StepSpec& step);

// Running totals: element i is the sum of step_flops over steps[0..i].
std::vector<FlopCount> accumulate_run_flops(const ModelConfig& cfg,
                                            std::span<const StepSpec> steps);

}  // namespace ceilfit
