#include "ceilfit/flops.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <string>

#include "ceilfit/error.hpp"

namespace ceilfit {

namespace {

// Per-step products stay exact in long double (64-bit mantissa) as long as
// they are integral and below 2^64, which covers realistic single steps.
using Wide = long double;

void require(bool ok, const char* what) {
  if (!ok) throw InputDomainError(what);
}

void require_length(double s, const char* what) {
  if (!std::isfinite(s) || s < 1.0) throw InputDomainError(what);
}

Wide dense_flops(const ModelConfig& c) {
  const Wide l = c.num_layers;
  const Wide h = c.hidden_size;
  const Wide mlp = 3 * h * static_cast<Wide>(c.ffn_intermediate);
  const Wide attn_linear = 2 * h * (h + static_cast<Wide>(c.kv_total_dim));
  const Wide vocab = 2 * static_cast<Wide>(c.vocab_size) * h;
  return 2 * (l * (mlp + attn_linear) + vocab);
}

Wide forward_token(const ModelConfig& c, double seq_len) {
  return dense_flops(c) + 4 * static_cast<Wide>(seq_len) * c.num_layers * c.hidden_size;
}

// Tokens times per-token forward cost at that length.
Wide token_cost(const ModelConfig& c, Wide sequences, double seq_len) {
  return sequences * static_cast<Wide>(seq_len) * forward_token(c, seq_len);
}

FlopCount finish(Wide v) {
  return FlopCount(static_cast<double>(v));
}

}  // namespace

void validate(const ModelConfig& cfg) {
  require(cfg.num_layers > 0, "num_layers must be positive");
  require(cfg.hidden_size > 0, "hidden_size must be positive");
  require(cfg.ffn_intermediate > 0, "ffn_intermediate must be positive");
  require(cfg.vocab_size > 0, "vocab_size must be positive");
  require(cfg.kv_total_dim > 0, "kv_total_dim must be positive");
  require(cfg.kv_total_dim <= cfg.hidden_size, "kv_total_dim must not exceed hidden_size");
}

std::string_view to_string(Algorithm a) {
  switch (a) {
    case Algorithm::kSft: return "SFT";
    case Algorithm::kGrpo: return "GRPO";
    case Algorithm::kDapo: return "DAPO";
    case Algorithm::kHybrid: return "Hybrid";
    case Algorithm::kUpt: return "UPT";
  }
  return "?";
}

std::optional<Algorithm> parse_algorithm(std::string_view name) {
  std::string up(name);
  std::transform(up.begin(), up.end(), up.begin(),
                 [](unsigned char ch) { return static_cast<char>(std::toupper(ch)); });
  if (up == "SFT") return Algorithm::kSft;
  if (up == "GRPO") return Algorithm::kGrpo;
  if (up == "DAPO") return Algorithm::kDapo;
  if (up == "HYBRID" || up == "LUFFY" || up == "SRFT") return Algorithm::kHybrid;
  if (up == "UPT") return Algorithm::kUpt;
  return std::nullopt;
}

void validate(const StepSpec& s) {
  require(s.batch >= 0 && s.update_batch >= 0 && s.sampling_rounds >= 0 && s.group_size >= 0 &&
              s.expert_per_prompt >= 0 && s.on_policy_kept >= 0 && s.off_policy_kept >= 0,
          "step counts must be nonnegative");
  require(std::isfinite(s.avg_seq_len) && std::isfinite(s.avg_on_len) &&
              std::isfinite(s.avg_off_len) && s.avg_seq_len >= 0 && s.avg_on_len >= 0 &&
              s.avg_off_len >= 0,
          "sequence lengths must be finite and nonnegative");

  // Which fields each algorithm reads: batch, update_batch, sampling_rounds,
  // group_size, expert_per_prompt, on_kept, off_kept, seq, on, off.
  using Mask = std::array<bool, 10>;
  Mask used{};
  switch (s.algorithm) {
    case Algorithm::kSft: used = {true, false, false, false, false, false, false, true, false, false}; break;
    case Algorithm::kGrpo: used = {true, false, false, true, false, false, false, true, false, false}; break;
    case Algorithm::kDapo: used = {true, true, true, true, false, false, false, true, false, false}; break;
    case Algorithm::kHybrid: used = {true, false, false, true, true, false, false, false, true, true}; break;
    case Algorithm::kUpt: used = {false, false, false, true, false, true, true, false, true, true}; break;
  }
  const std::array<bool, 10> nonzero = {
      s.batch != 0,          s.update_batch != 0,    s.sampling_rounds != 0,
      s.group_size != 0,     s.expert_per_prompt != 0, s.on_policy_kept != 0,
      s.off_policy_kept != 0, s.avg_seq_len != 0,    s.avg_on_len != 0,
      s.avg_off_len != 0};
  static constexpr std::array<const char*, 10> kNames = {
      "batch",          "update_batch",    "sampling_rounds", "group_size",
      "expert_per_prompt", "on_policy_kept", "off_policy_kept", "avg_seq_len",
      "avg_on_len",     "avg_off_len"};
  for (std::size_t i = 0; i < used.size(); ++i) {
    if (nonzero[i] && !used[i]) {
      throw InputDomainError(std::string(kNames[i]) + " does not apply to algorithm " +
                             std::string(to_string(s.algorithm)));
    }
  }
}

FlopCount::FlopCount(double flops) : value_(flops) {
  if (!std::isfinite(flops) || flops < 0.0) {
    throw InputDomainError("FLOP count must be finite and nonnegative");
  }
}

std::string format_exaflops(FlopCount f) {
  std::array<char, 64> buf{};
  auto res = std::to_chars(buf.data(), buf.data() + buf.size(), f.exaflops(),
                           std::chars_format::fixed, 1);
  return std::string(buf.data(), res.ptr);
}

FlopCount forward_flops_per_token(const ModelConfig& cfg, double seq_len) {
  validate(cfg);
  require_length(seq_len, "seq_len must be at least 1");
  return finish(forward_token(cfg, seq_len));
}

FlopCount train_flops_per_token(const ModelConfig& cfg, double seq_len) {
  validate(cfg);
  require_length(seq_len, "seq_len must be at least 1");
  return finish(3 * forward_token(cfg, seq_len));
}

FlopCount sft_step_flops(const ModelConfig& cfg, std::int64_t batch, double avg_seq_len) {
  validate(cfg);
  require(batch >= 1, "SFT batch must be at least 1");
  require_length(avg_seq_len, "avg_seq_len must be at least 1");
  return finish(3 * token_cost(cfg, batch, avg_seq_len));
}

FlopCount grpo_step_flops(const ModelConfig& cfg, std::int64_t batch, std::int64_t group_size,
                          double avg_seq_len) {
  validate(cfg);
  require(batch >= 1, "GRPO batch must be at least 1");
  require(group_size >= 1, "group_size must be at least 1");
  require_length(avg_seq_len, "avg_seq_len must be at least 1");
  return finish(4 * token_cost(cfg, static_cast<Wide>(batch) * group_size, avg_seq_len));
}

FlopCount dapo_step_flops(const ModelConfig& cfg, std::int64_t sampling_rounds,
                          std::int64_t gen_batch, std::int64_t train_batch,
                          std::int64_t group_size, double avg_seq_len) {
  validate(cfg);
  require(sampling_rounds >= 1, "sampling_rounds must be at least 1");
  require(gen_batch >= 1, "generation batch must be at least 1");
  require(group_size >= 1, "group_size must be at least 1");
  require(train_batch >= 1, "training batch must be at least 1");
  require(static_cast<Wide>(train_batch) <= static_cast<Wide>(sampling_rounds) * gen_batch,
          "training batch exceeds sampling_rounds * generation batch");
  require_length(avg_seq_len, "avg_seq_len must be at least 1");
  const Wide sequences =
      (static_cast<Wide>(sampling_rounds) * gen_batch + 3 * static_cast<Wide>(train_batch)) *
      group_size;
  return finish(token_cost(cfg, sequences, avg_seq_len));
}

FlopCount hybrid_step_flops(const ModelConfig& cfg, std::int64_t batch, std::int64_t group_size,
                            std::int64_t expert_per_prompt, double avg_on_len,
                            double avg_off_len) {
  validate(cfg);
  require(batch >= 1, "batch must be at least 1");
  require(group_size >= 1, "group_size must be at least 1");
  require(expert_per_prompt >= 0, "expert_per_prompt must be nonnegative");
  require_length(avg_on_len, "avg_on_len must be at least 1");
  Wide total = token_cost(cfg, static_cast<Wide>(batch) * group_size, avg_on_len);
  if (expert_per_prompt > 0) {
    require_length(avg_off_len, "avg_off_len must be at least 1");
    total += token_cost(cfg, static_cast<Wide>(batch) * expert_per_prompt, avg_off_len);
  }
  return finish(4 * total);
}

FlopCount upt_step_flops(const ModelConfig& cfg, std::int64_t group_size,
                         std::int64_t on_kept, std::int64_t off_kept, double avg_on_len,
                         double avg_off_len) {
  validate(cfg);
  require(group_size >= 1, "group_size must be at least 1");
  require(on_kept >= 0 && off_kept >= 0, "kept sample counts must be nonnegative");
  require_length(avg_on_len, "avg_on_len must be at least 1");
  const Wide generation = token_cost(cfg, group_size, avg_on_len);
  Wide update = token_cost(cfg, on_kept, avg_on_len);
  if (off_kept > 0) {
    require_length(avg_off_len, "avg_off_len must be at least 1");
    update += token_cost(cfg, off_kept, avg_off_len);
  }
  return finish(generation + 3 * update);
}

FlopCount step_flops(const ModelConfig& cfg, const StepSpec& s) {
  validate(s);
  switch (s.algorithm) {
    case Algorithm::kSft: return sft_step_flops(cfg, s.batch, s.avg_seq_len);
    case Algorithm::kGrpo: return grpo_step_flops(cfg, s.batch, s.group_size, s.avg_seq_len);
    case Algorithm::kDapo:
      return dapo_step_flops(cfg, s.sampling_rounds, s.batch, s.update_batch, s.group_size,
                             s.avg_seq_len);
    case Algorithm::kHybrid:
      return hybrid_step_flops(cfg, s.batch, s.group_size, s.expert_per_prompt, s.avg_on_len,
                               s.avg_off_len);
    case Algorithm::kUpt:
      return upt_step_flops(cfg, s.group_size, s.on_policy_kept, s.off_policy_kept,
                            s.avg_on_len, s.avg_off_len);
  }
  throw InputDomainError("unknown algorithm");
}

std::vector<FlopCount> accumulate_run_flops(const ModelConfig& cfg,
                                            std::span<const StepSpec> steps) {
  if (steps.empty()) throw InputDomainError("step sequence is empty");
  std::vector<FlopCount> out;
  out.reserve(steps.size());
  Wide running = 0;
  for (const auto& s : steps) {
    running += static_cast<Wide>(step_flops(cfg, s).value());
    out.emplace_back(static_cast<double>(running));
  }
  return out;
}

}  // namespace ceilfit
