#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "ceilfit/analysis.hpp"
#include "ceilfit/flops.hpp"
#include "ceilfit/phases.hpp"
#include "ceilfit/robust_fit.hpp"
#include "ceilfit/series.hpp"
#include "ceilfit/table.hpp"

// On-disk formats. Compute is always exaFLOPs unless a column is explicitly
// named x_flops. Every reader rejects invalid input with a ParseError naming
// the offending row/column or key.
namespace ceilfit {

enum class TableFormat { kCsv, kJsonl };

std::optional<TableFormat> parse_table_format(std::string_view name);
// ".jsonl"/".ndjson" select JSON lines, anything else CSV.
TableFormat format_for_path(const std::filesystem::path& path);
Table read_table(std::istream& in, TableFormat format);

// ---------------------------------------------------------------------------
// Step-level training logs
// ---------------------------------------------------------------------------

// Fallbacks for StepSpec columns absent from a log. A log without an
// "algorithm" column needs `algorithm` set here.
struct StepDefaults {
  std::optional<Algorithm> algorithm;
  StepSpec fields;  // algorithm member ignored
};

struct StepRecord {
  std::int64_t step = 0;
  StepSpec spec;
  std::optional<double> performance;
  std::optional<double> val_loss;
};

// One record per optimizer step, steps strictly increasing. A record with
// step 0 is an evaluation of the starting model and costs nothing.
struct RawTrainLog {
  std::vector<StepRecord> records;
};

RawTrainLog parse_train_log(std::istream& in, TableFormat format, const StepDefaults& defaults = {});
RawTrainLog parse_train_log(const Table& table, const StepDefaults& defaults = {});

// Cumulative compute at every record (aligned with log.records).
std::vector<FlopCount> cumulative_log_flops(const ModelConfig& cfg, const RawTrainLog& log);

// Where compute comes from when a series file has only step-level columns.
struct ComputeSource {
  const ModelConfig* model = nullptr;
  StepDefaults defaults;
};

// ---------------------------------------------------------------------------
// Run series and loss series
// ---------------------------------------------------------------------------

// Accepted shapes: (x_exaflops | x_flops | step + StepSpec columns) + performance.
// Rows without a performance value are skipped in the step-level shape.
RunSeries parse_run_series(std::istream& in, TableFormat format, std::string run_id = {},
                           const ComputeSource& compute = {});
RunSeries read_run_series(const std::filesystem::path& path, const ComputeSource& compute = {});
void write_run_series(std::ostream& out, const RunSeries& run, TableFormat format);

// Same shapes with a val_loss column.
LossSeries parse_loss_series(std::istream& in, TableFormat format,
                             const ComputeSource& compute = {});
LossSeries read_loss_series(const std::filesystem::path& path, const ComputeSource& compute = {});

// ---------------------------------------------------------------------------
// Key-value configuration files ("key = value", '#' comments)
// ---------------------------------------------------------------------------

struct KeyValue {
  std::string key;
  std::string value;
  std::size_t line = 0;
};

// Duplicate keys: the last occurrence wins and a warning is appended.
std::vector<KeyValue> read_key_values(std::istream& in, std::vector<std::string>* warnings);

ModelConfig parse_model_config(std::istream& in, std::vector<std::string>* warnings = nullptr);
ModelConfig read_model_config(const std::filesystem::path& path,
                              std::vector<std::string>* warnings = nullptr);

// Starts from `base` and overrides whatever keys the file sets.
FitConfig parse_fit_config(std::istream& in, FitConfig base = {},
                           std::vector<std::string>* warnings = nullptr);

// ---------------------------------------------------------------------------
// Fit artifacts
// ---------------------------------------------------------------------------

inline constexpr std::string_view kArtifactVersion = "1";

// Report metadata carried next to a fit.
struct ArtifactContext {
  std::optional<std::string> config_name;
  std::optional<std::int64_t> sft_step;
  std::optional<double> x_sft;
  std::optional<double> min_val_loss;
  std::optional<double> max_p_post;

  friend bool operator==(const ArtifactContext&, const ArtifactContext&) = default;
};

struct FitArtifact {
  std::string run_id;
  FitResult result;
  ArtifactContext context;

  friend bool operator==(const FitArtifact&, const FitArtifact&) = default;
};

std::string fit_artifact_json(const FitArtifact& artifact);
void write_fit_artifact(const FitArtifact& artifact, std::ostream& out);
void write_fit_artifact(const FitArtifact& artifact, const std::filesystem::path& path);
FitArtifact read_fit_artifact(std::istream& in);
FitArtifact read_fit_artifact(const std::filesystem::path& path);

// Table row for a fitted RL curve: p_sft is the curve's start, a_post its ceiling.
ConfigSummary summarize(const FitArtifact& artifact);

// Summary rows from CSV/JSON lines keyed by ConfigSummary field names (only
// config_name is required), or from a JSON report when the file ends in .json.
std::vector<ConfigSummary> read_summaries(const std::filesystem::path& path);
std::vector<ConfigSummary> parse_summaries(std::istream& in, TableFormat format);

}  // namespace ceilfit
