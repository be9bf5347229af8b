#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace ceilfit {

// One row of the ceiling/plasticity table. Fit-derived columns are optional so
// the same record can carry observation-only rows (e.g. a min-loss/max-score pair).
struct ConfigSummary {
  std::string config_name;
  std::int64_t sft_step = 0;
  double x_sft = 0.0;  // exaFLOPs
  bool use_lts = false;
  std::optional<double> pl_rl;
  std::optional<double> c_mid;
  std::optional<double> steepness;
  std::optional<double> p_sft;
  std::optional<double> a_post;
  std::optional<double> min_val_loss;
  std::optional<double> max_p_post;

  friend bool operator==(const ConfigSummary&, const ConfigSummary&) = default;
};

// Throws ContractError when p_sft, pl_rl and a_post are all present and
// a_post != p_sft + pl_rl beyond `tolerance`.
void check_identity(const ConfigSummary& row, double tolerance = 1e-9);

// Product-moment correlation. Needs equal lengths >= 3 and nonzero variance
// in both inputs (UndefinedCorrelationError otherwise).
double pearson(std::span<const double> xs, std::span<const double> ys);

struct WinRate {
  std::int64_t successes = 0;
  std::int64_t attempts = 0;
  double rate = 0.0;
};

WinRate win_rate(std::int64_t successes, std::int64_t attempts);

enum class ReportFormat { kCsv, kMarkdown, kJson };

std::optional<ReportFormat> parse_report_format(std::string_view name);

// Column headers of the ceiling table, in output order.
const std::vector<std::string>& report_columns();

// Rows sorted by (config_name, sft_step). CSV and markdown round numbers to one
// decimal (ties to even); JSON keeps full precision plus the optional fields.
std::string build_report(std::span<const ConfigSummary> rows, ReportFormat format);

// Inverse of the CSV report (values come back at one-decimal precision).
std::vector<ConfigSummary> read_report_csv(std::istream& in);
// Inverse of the JSON report; lossless.
std::vector<ConfigSummary> read_report_json(std::istream& in);

enum class CeilingSource {
  kPreferFitted,    // a_post when present, else max_p_post
  kPreferObserved,  // max_p_post when present, else a_post
};

struct LossCeilingPair {
  std::string config_name;
  std::int64_t sft_step = 0;
  double min_val_loss = 0.0;
  double ceiling = 0.0;
  bool observed = false;  // true when the ceiling came from max_p_post
};

struct CorrelationResult {
  double r = 0.0;
  std::vector<LossCeilingPair> pairs;
};

// Pearson r between minimum validation loss and ceiling over every row that
// carries both. Needs at least 3 such rows.
CorrelationResult ceiling_loss_correlation(std::span<const ConfigSummary> rows,
                                           CeilingSource source = CeilingSource::kPreferFitted);

// One decimal, round-half-to-even on the exact binary value.
std::string format_one_decimal(double v);

}  // namespace ceilfit
