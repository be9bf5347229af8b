#include "commands.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <istream>
#include <memory>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include <CLI11.hpp>
#include <json.hpp>

#include "ceilfit/analysis.hpp"
#include "ceilfit/error.hpp"
#include "ceilfit/flops.hpp"
#include "ceilfit/io.hpp"
#include "ceilfit/phases.hpp"
#include "ceilfit/robust_fit.hpp"
#include "ceilfit/rng.hpp"
#include "ceilfit/scaling.hpp"
#include "ceilfit/synth.hpp"

namespace ceilfit::cli {

namespace {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

// Bad flag values that only show up after parsing.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Io {
  std::istream& in;
  std::ostream& out;
  std::ostream& err;
  std::string out_path;

  std::ostream& human() const { return out_path.empty() ? err : out; }

  void emit(const std::string& text) const {
    if (out_path.empty()) {
      out << text;
      return;
    }
    std::ofstream f(out_path, std::ios::binary);
    if (!f) throw ParseError("cannot write " + out_path);
    f << text;
    if (!f) throw ParseError("failed writing " + out_path);
  }
};

std::string algorithm_check(const std::string& name) {
  return parse_algorithm(name) ? std::string() : "unknown algorithm '" + name + "'";
}

std::string format_check(const std::string& name) {
  return parse_table_format(name) ? std::string() : "unknown table format '" + name + "'";
}

TableFormat table_format(const std::string& flag, const fs::path& path) {
  if (!flag.empty()) return *parse_table_format(flag);
  return format_for_path(path);
}

std::string fmt(double v) { return format_double(v); }

std::string opt_fmt(const std::optional<double>& v) { return v ? fmt(*v) : "n/a"; }

// ---------------------------------------------------------------------------
// Shared flag groups
// ---------------------------------------------------------------------------

// Model config plus StepSpec defaults, for logs that carry steps instead of compute.
struct ComputeFlags {
  std::string model_path;
  std::string algorithm;
  StepSpec fields;
  std::optional<ModelConfig> model;

  void add(CLI::App& app, bool model_required) {
    auto* m = app.add_option("--model", model_path, "Model architecture config (key = value)");
    if (model_required) m->required();
    m->check(CLI::ExistingFile);
    app.add_option("--algorithm", algorithm, "Default algorithm for rows without one")
        ->check(CLI::Validator(algorithm_check, "ALGORITHM"));
    app.add_option("--batch", fields.batch, "B (B_gen for DAPO)");
    app.add_option("--update-batch", fields.update_batch, "B_train (DAPO)");
    app.add_option("--sampling-rounds", fields.sampling_rounds, "K (DAPO)");
    app.add_option("--group-size", fields.group_size, "G");
    app.add_option("--expert-per-prompt", fields.expert_per_prompt, "N (Hybrid)");
    app.add_option("--on-kept", fields.on_policy_kept, "N_on (UPT)");
    app.add_option("--off-kept", fields.off_policy_kept, "N_off (UPT)");
    app.add_option("--seq-len", fields.avg_seq_len, "S");
    app.add_option("--on-len", fields.avg_on_len, "S_on");
    app.add_option("--off-len", fields.avg_off_len, "S_off");
  }

  StepDefaults defaults() const {
    StepDefaults d;
    if (!algorithm.empty()) d.algorithm = parse_algorithm(algorithm);
    d.fields = fields;
    return d;
  }

  ComputeSource source() {
    if (!model_path.empty() && !model) model = read_model_config(model_path);
    return {model ? &*model : nullptr, defaults()};
  }
};

struct FitFlags {
  std::string config_path;
  FitConfig flagged;
  std::string ceiling_mode;
  double fixed_p_start = 0.0;
  std::vector<std::function<void(FitConfig&)>> apply;

  template <typename T>
  void bind(CLI::App& app, const std::string& name, T FitConfig::*member, const std::string& help) {
    auto* opt = app.add_option(name, flagged.*member, help);
    apply.push_back([this, opt, member](FitConfig& c) {
      if (opt->count() > 0) c.*member = flagged.*member;
    });
  }

  void add(CLI::App& app, bool allow_pin) {
    app.add_option("--fit-config", config_path, "Fit config file (key = value)")
        ->check(CLI::ExistingFile);
    bind(app, "--train-fraction", &FitConfig::train_fraction, "Chronological training share");
    bind(app, "--z-threshold", &FitConfig::z_threshold, "Modified Z-score cutoff");
    bind(app, "--alpha", &FitConfig::lts_alpha, "LTS retained fraction");
    bind(app, "--max-rounds", &FitConfig::max_outlier_rounds, "Outlier-removal round cap");
    bind(app, "--max-iters", &FitConfig::nls_max_iters, "Levenberg-Marquardt iteration cap");
    bind(app, "--tolerance", &FitConfig::nls_tolerance, "Levenberg-Marquardt tolerance");
    bind(app, "--multistart", &FitConfig::multistart_count, "Jittered starts beyond the grid");
    bind(app, "--seed", &FitConfig::seed, "Seed for jittered starts");
    auto* lts = app.add_flag("--use-lts,!--no-lts", flagged.use_lts, "Run the LTS stage");
    apply.push_back([this, lts](FitConfig& c) {
      if (lts->count() > 0) c.use_lts = flagged.use_lts;
    });
    auto* mode = app.add_option("--ceiling-mode", ceiling_mode, "constrained or unconstrained")
                     ->check(CLI::IsMember({"constrained", "unconstrained"}));
    apply.push_back([this, mode](FitConfig& c) {
      if (mode->count() > 0) {
        c.ceiling_mode = ceiling_mode == "constrained" ? CeilingMode::kConstrained
                                                       : CeilingMode::kUnconstrained;
      }
    });
    if (allow_pin) {
      auto* pin = app.add_option("--fixed-p-start", fixed_p_start, "Pin P_start");
      apply.push_back([this, pin](FitConfig& c) {
        if (pin->count() > 0) c.fixed_p_start = fixed_p_start;
      });
    }
  }

  FitConfig resolve(std::ostream& human) const {
    FitConfig c;
    if (!config_path.empty()) {
      std::ifstream in(config_path, std::ios::binary);
      if (!in) throw ParseError("cannot open " + config_path);
      std::vector<std::string> warnings;
      try {
        c = parse_fit_config(in, c, &warnings);
      } catch (const ParseError& e) {
        throw ParseError(config_path + ": " + e.what());
      }
      for (const auto& w : warnings) human << "warning: " << config_path << ": " << w << '\n';
    }
    for (const auto& f : apply) f(c);
    try {
      validate(c);
    } catch (const InputDomainError& e) {
      throw UsageError(e.what());
    }
    return c;
  }
};

RunSeries load_run(const std::string& path, const std::string& format, const std::string& run_id,
                   ComputeFlags& compute, std::istream& in) {
  const auto src = compute.source();
  if (path == "-") {
    const auto f = format.empty() ? TableFormat::kCsv : *parse_table_format(format);
    return parse_run_series(in, f, run_id.empty() ? "stdin" : run_id, src);
  }
  std::ifstream file(path, std::ios::binary);
  if (!file) throw ParseError("cannot open " + path);
  try {
    return parse_run_series(file, table_format(format, path),
                            run_id.empty() ? fs::path(path).stem().string() : run_id, src);
  } catch (const ParseError& e) {
    throw ParseError(path + ": " + e.what());
  }
}

void print_fit_summary(std::ostream& h, const FitResult& r) {
  const auto& p = r.params;
  h << "P_start = " << fmt(p.p_start) << '\n'
    << "A       = " << fmt(p.ceiling) << '\n'
    << "C_mid   = " << fmt(p.c_mid) << " exaFLOPs\n"
    << "B       = " << fmt(p.steepness) << '\n'
    << "PL      = " << fmt(plasticity(p)) << '\n'
    << "R2 (train inliers) = " << opt_fmt(r.r2_train) << '\n'
    << "RMSE (validation)  = " << opt_fmt(r.rmse_val) << '\n'
    << "train/val = " << r.n_train << '/' << r.n_val << ", rounds = " << r.rounds_used
    << ", converged = " << (r.converged ? "yes" : "no") << '\n';
  h << "removed " << r.removed_outliers.size() << " point(s)";
  if (!r.removed_outliers.empty()) {
    h << ':';
    for (const auto& rem : r.removed_outliers) {
      h << ' ' << rem.index << (rem.stage == RemovalStage::kModifiedZ ? "(z)" : "(lts)");
    }
  }
  h << '\n';
  if (r.truncated) h << "note: outlier removal stopped early to keep 5 points\n";
  for (const auto& w : r.warnings) h << "warning: " << w << '\n';
}

// ---------------------------------------------------------------------------
// Subcommands
// ---------------------------------------------------------------------------

struct FlopsCmd {
  ComputeFlags compute;
  std::string log_path;
  std::string format;

  void add(CLI::App& app) {
    compute.add(app, true);
    app.add_option("log", log_path, "Step-level training log (CSV or JSON lines)")
        ->required()
        ->check(CLI::ExistingFile);
    app.add_option("--format", format, "csv or jsonl (default: from extension)")
        ->check(CLI::Validator(format_check, "FORMAT"));
  }

  void run(Io& io) {
    const auto src = compute.source();
    std::ifstream in(log_path, std::ios::binary);
    if (!in) throw ParseError("cannot open " + log_path);
    RawTrainLog log;
    try {
      log = parse_train_log(in, table_format(format, log_path), src.defaults);
    } catch (const ParseError& e) {
      throw ParseError(log_path + ": " + e.what());
    }
    if (log.records.empty()) throw InsufficientDataError(log_path + ": log has no step records");
    const auto cum = cumulative_log_flops(*src.model, log);
    std::ostringstream os;
    os << "step,step_flops,cumulative_exaflops\n";
    for (std::size_t i = 0; i < log.records.size(); ++i) {
      const auto& rec = log.records[i];
      const double step = rec.step > 0 ? step_flops(*src.model, rec.spec).value() : 0.0;
      os << rec.step << ',' << fmt(step) << ',' << fmt(cum[i].exaflops()) << '\n';
    }
    io.emit(os.str());
    io.human() << log.records.size() << " record(s), total " << format_exaflops(cum.back())
               << " exaFLOPs\n";
  }
};

struct FitCmd {
  ComputeFlags compute;
  FitFlags fit;
  std::string run_path;
  std::string format;
  std::string run_id;
  ArtifactContext ctx;
  std::string config_name;
  std::int64_t sft_step = 0;
  double x_sft = 0.0;
  double min_val_loss = 0.0;
  double max_p_post = 0.0;
  CLI::Option* o_name = nullptr;
  CLI::Option* o_step = nullptr;
  CLI::Option* o_xsft = nullptr;
  CLI::Option* o_loss = nullptr;
  CLI::Option* o_post = nullptr;

  void add(CLI::App& app) {
    app.add_option("run", run_path, "Run series file, or - for stdin")->required();
    app.add_option("--format", format, "csv or jsonl (default: from extension)")
        ->check(CLI::Validator(format_check, "FORMAT"));
    app.add_option("--run-id", run_id, "Run identifier (default: file stem)");
    fit.add(app, true);
    compute.add(app, false);
    o_name = app.add_option("--config-name", config_name, "Report label (SFT data)");
    o_step = app.add_option("--sft-step", sft_step, "SFT step the run starts from");
    o_xsft = app.add_option("--x-sft", x_sft, "SFT compute in exaFLOPs");
    o_loss = app.add_option("--min-val-loss", min_val_loss, "Minimum SFT validation loss");
    o_post = app.add_option("--max-p-post", max_p_post, "Best observed post-training score");
  }

  ArtifactContext context() const {
    ArtifactContext c;
    if (o_name->count()) c.config_name = config_name;
    if (o_step->count()) c.sft_step = sft_step;
    if (o_xsft->count()) c.x_sft = x_sft;
    if (o_loss->count()) c.min_val_loss = min_val_loss;
    if (o_post->count()) c.max_p_post = max_p_post;
    return c;
  }

  void run(Io& io) {
    const FitConfig cfg = fit.resolve(io.human());
    const RunSeries series = load_run(run_path, format, run_id, compute, io.in);
    FitArtifact artifact{series.run_id, robust_fit_pipeline(series, cfg), context()};
    io.emit(fit_artifact_json(artifact));
    io.human() << "run " << artifact.run_id << ": " << series.points.size() << " point(s)\n";
    print_fit_summary(io.human(), artifact.result);
  }
};

struct PhasesCmd {
  ComputeFlags compute;
  std::string log_path;
  std::string format;
  PhaseThresholds thr;
  std::size_t smooth = 1;

  void add(CLI::App& app) {
    app.add_option("log", log_path, "Validation-loss log (CSV or JSON lines)")
        ->required()
        ->check(CLI::ExistingFile);
    app.add_option("--format", format, "csv or jsonl (default: from extension)")
        ->check(CLI::Validator(format_check, "FORMAT"));
    app.add_option("--delta", thr.delta, "Stable band above the minimum")->capture_default_str();
    app.add_option("--delta2", thr.delta2, "Severe-overfitting onset")->capture_default_str();
    app.add_option("--smooth", smooth, "Trailing median window (1 = none)")
        ->check(CLI::PositiveNumber);
    compute.add(app, false);
  }

  void run(Io& io) {
    try {
      validate(thr);
    } catch (const InputDomainError& e) {
      throw UsageError(e.what());
    }
    const auto src = compute.source();
    std::ifstream in(log_path, std::ios::binary);
    if (!in) throw ParseError("cannot open " + log_path);
    LossSeries raw;
    try {
      raw = parse_loss_series(in, table_format(format, log_path), src);
    } catch (const ParseError& e) {
      throw ParseError(log_path + ": " + e.what());
    }
    const LossSeries series = smooth_trailing_median(raw, smooth);
    const auto labels = classify_phases(series, thr);
    std::ostringstream os;
    os << "x_exaflops,val_loss,label\n";
    for (std::size_t i = 0; i < series.points.size(); ++i) {
      os << fmt(series.points[i].x) << ',' << fmt(series.points[i].loss) << ','
         << to_string(labels[i]) << '\n';
    }
    io.emit(os.str());
    const auto m = min_val_loss(series);
    auto& h = io.human();
    h << "min val loss " << fmt(m.loss) << " at x = " << fmt(m.x) << " (point " << m.index
      << "), delta = " << fmt(thr.delta) << ", delta2 = " << fmt(thr.delta2) << '\n';
    for (const auto& iv : phase_boundaries(labels, series)) {
      h << to_string(iv.label) << ": points " << iv.first << '-' << iv.last << ", x in ["
        << fmt(iv.x_begin) << ", " << fmt(iv.x_end) << "]\n";
    }
  }
};

struct DecomposeCmd {
  ComputeFlags compute;
  FitFlags fit;
  double p0 = 0.0;
  std::string sft_path;
  std::string rl_path;
  double p_sft = 0.0;
  double x_sft = 0.0;
  std::string config_name;
  std::int64_t sft_step = 0;
  std::string fit_out;
  CLI::Option* o_psft = nullptr;
  CLI::Option* o_xsft = nullptr;
  CLI::Option* o_name = nullptr;
  CLI::Option* o_step = nullptr;

  void add(CLI::App& app) {
    app.add_option("--p0", p0, "Base-model performance")->required();
    app.add_option("--sft-run", sft_path, "SFT run series")->required()->check(CLI::ExistingFile);
    app.add_option("--rl-run", rl_path, "RL run series (compute from the RL start)")
        ->required()
        ->check(CLI::ExistingFile);
    o_psft = app.add_option("--p-sft", p_sft, "SFT endpoint performance (default: last SFT point)");
    o_xsft = app.add_option("--x-sft", x_sft, "SFT compute (default: last SFT point)");
    o_name = app.add_option("--config-name", config_name, "Report label (SFT data)");
    o_step = app.add_option("--sft-step", sft_step, "SFT step of the endpoint");
    app.add_option("--fit-out", fit_out, "Also write the RL fit artifact here");
    fit.add(app, false);
    compute.add(app, false);
  }

  void run(Io& io) {
    auto& h = io.human();
    FitConfig cfg = fit.resolve(h);
    const RunSeries sft = load_run(sft_path, "", "", compute, io.in);
    const RunSeries rl = load_run(rl_path, "", "", compute, io.in);
    const double ps = o_psft->count() ? p_sft : sft.points.back().y;
    const double xs = o_xsft->count() ? x_sft : sft.points.back().x;
    if (!(p0 >= 0.0 && p0 <= kPerformanceMax)) throw UsageError("--p0 must lie in [0, 100]");
    if (!(ps >= 0.0 && ps <= kPerformanceMax)) throw UsageError("--p-sft must lie in [0, 100]");
    if (std::fabs(rl.points.front().y - ps) > 0.5) {
      h << "warning: first RL point " << fmt(rl.points.front().y) << " differs from P_sft "
        << fmt(ps) << " by more than 0.5\n";
    }
    cfg.fixed_p_start = ps;
    const FitResult res = robust_fit_pipeline(rl, cfg);
    std::vector<double> grid;
    for (const auto& p : rl.points) grid.push_back(p.x);
    const DecompositionRecord rec = decompose(p0, xs, ps, res.params, grid);

    FitArtifact artifact{rl.run_id, res, {}};
    if (o_name->count()) artifact.context.config_name = config_name;
    if (o_step->count()) artifact.context.sft_step = sft_step;
    artifact.context.x_sft = xs;
    if (!fit_out.empty()) write_fit_artifact(artifact, fs::path(fit_out));

    ordered_json j;
    j["format_version"] = kArtifactVersion;
    j["p0"] = rec.p0;
    j["x_sft"] = rec.x_sft;
    j["p_sft"] = rec.p_sft;
    j["delta_sft"] = rec.delta_sft;
    j["rl_params"] = {{"p_start", rec.rl_params.p_start},
                      {"ceiling", rec.rl_params.ceiling},
                      {"c_mid", rec.rl_params.c_mid},
                      {"steepness", rec.rl_params.steepness}};
    j["pl_rl"] = rec.pl_rl;
    j["a_post"] = rec.a_post;
    j["delta_rl_at"] = ordered_json::array();
    for (const auto& [x, d] : rec.delta_rl_at) j["delta_rl_at"].push_back({{"x", x}, {"delta", d}});
    j["r2_train"] = res.r2_train ? ordered_json(*res.r2_train) : ordered_json(nullptr);
    j["rmse_val"] = res.rmse_val ? ordered_json(*res.rmse_val) : ordered_json(nullptr);
    j["removed_outliers"] = res.removed_outliers.size();
    j["warnings"] = res.warnings;
    io.emit(j.dump(2) + "\n");

    const ConfigSummary row = summarize(artifact);
    h << "P0 = " << fmt(rec.p0) << ", dP_sft = " << fmt(rec.delta_sft) << ", PL_rl = "
      << fmt(rec.pl_rl) << ", A_post = " << fmt(rec.a_post) << '\n';
    h << build_report(std::span<const ConfigSummary>(&row, 1), ReportFormat::kMarkdown);
    for (const auto& w : res.warnings) h << "warning: " << w << '\n';
  }
};

struct CorrelateCmd {
  std::string path;
  std::string source = "fitted";

  void add(CLI::App& app) {
    app.add_option("summaries", path, "Summary rows (CSV, JSON lines, or a JSON report)")
        ->required()
        ->check(CLI::ExistingFile);
    app.add_option("--source", source, "Ceiling column preference: fitted or observed")
        ->check(CLI::IsMember({"fitted", "observed"}))
        ->capture_default_str();
  }

  void run(Io& io) {
    const auto rows = read_summaries(path);
    const auto res = ceiling_loss_correlation(
        rows, source == "fitted" ? CeilingSource::kPreferFitted : CeilingSource::kPreferObserved);
    ordered_json j;
    j["r"] = res.r;
    j["n"] = res.pairs.size();
    j["pairs"] = ordered_json::array();
    for (const auto& p : res.pairs) {
      j["pairs"].push_back({{"config_name", p.config_name},
                            {"sft_step", p.sft_step},
                            {"min_val_loss", p.min_val_loss},
                            {"ceiling", p.ceiling},
                            {"ceiling_source", p.observed ? "max_p_post" : "a_post"}});
    }
    io.emit(j.dump(2) + "\n");
    auto& h = io.human();
    h << "Pearson r = " << fmt(res.r) << " over " << res.pairs.size() << " pair(s)\n";
    for (const auto& p : res.pairs) {
      h << "  " << p.config_name << " step " << p.sft_step << ": loss " << fmt(p.min_val_loss)
        << ", ceiling " << fmt(p.ceiling) << (p.observed ? " (observed)" : " (fitted)") << '\n';
    }
  }
};

struct SynthCmd {
  SynthSpec spec;
  std::vector<double> grid;
  std::size_t points = 20;
  double grid_lo = 0.1;
  double grid_hi = 10.0;
  std::string format = "csv";
  std::string run_id = "synth";
  std::string sidecar;

  void add(CLI::App& app) {
    app.add_option("--p-start", spec.params.p_start, "True P_start")->required();
    app.add_option("--ceiling", spec.params.ceiling, "True A")->required();
    app.add_option("--c-mid", spec.params.c_mid, "True C_mid (exaFLOPs)")->required();
    app.add_option("--steepness", spec.params.steepness, "True B")->required();
    app.add_option("--sigma", spec.noise_sigma, "Gaussian noise sd")->capture_default_str();
    app.add_option("--outlier-fraction", spec.outlier_fraction, "Share of shifted points")
        ->capture_default_str();
    app.add_option("--outlier-shift", spec.outlier_shift, "Outlier displacement")
        ->capture_default_str();
    app.add_option("--seed", spec.seed, "Generator seed")->capture_default_str();
    app.add_option("--grid", grid, "Explicit x values (comma separated)")->delimiter(',');
    app.add_option("--points", points, "Default grid size")->capture_default_str();
    app.add_option("--grid-lo", grid_lo, "Default grid start, in units of C_mid")
        ->capture_default_str();
    app.add_option("--grid-hi", grid_hi, "Default grid end, in units of C_mid")
        ->capture_default_str();
    app.add_option("--format", format, "csv or jsonl")
        ->check(CLI::Validator(format_check, "FORMAT"))
        ->capture_default_str();
    app.add_option("--run-id", run_id, "Run identifier")->capture_default_str();
    app.add_option("--sidecar", sidecar, "Outlier index file (default: <out>.outliers)");
  }

  void run(Io& io) {
    SynthRun s;
    try {
      spec.x_grid = grid.empty() ? default_log_grid(spec.params.c_mid, points, grid_lo, grid_hi)
                                 : grid;
      s = synthesize(spec);
    } catch (const InputDomainError& e) {
      throw UsageError(e.what());
    }
    s.run.run_id = run_id;
    std::ostringstream os;
    write_run_series(os, s.run, *parse_table_format(format));
    io.emit(os.str());
    std::string side = sidecar;
    if (side.empty() && !io.out_path.empty()) side = io.out_path + ".outliers";
    if (!side.empty()) {
      std::ofstream f(side, std::ios::binary);
      if (!f) throw ParseError("cannot write " + side);
      f << "index\n";
      for (auto i : s.outlier_indices) f << i << '\n';
    }
    io.human() << "synthesized " << s.run.points.size() << " point(s), "
               << s.outlier_indices.size() << " outlier(s), rng " << Rng::kName << '\n';
  }
};

struct ReportCmd {
  std::string dir;
  std::string format = "csv";

  void add(CLI::App& app) {
    app.add_option("dir", dir, "Directory of fit artifacts (*.json)")->required();
    app.add_option("--format", format, "csv, markdown, or json")
        ->check(CLI::IsMember({"csv", "markdown", "md", "json"}))
        ->capture_default_str();
  }

  void run(Io& io) {
    if (!fs::is_directory(dir)) throw ParseError("not a directory: " + dir);
    std::vector<fs::path> files;
    for (const auto& e : fs::directory_iterator(dir)) {
      if (e.is_regular_file() && e.path().extension() == ".json") files.push_back(e.path());
    }
    std::sort(files.begin(), files.end());
    if (files.empty()) throw InsufficientDataError("no fit artifacts (*.json) in " + dir);
    std::vector<ConfigSummary> rows;
    for (const auto& f : files) {
      rows.push_back(summarize(read_fit_artifact(f)));
      check_identity(rows.back());
    }
    io.emit(build_report(rows, *parse_report_format(format)));
    io.human() << rows.size() << " artifact(s) summarized\n";
  }
};

}  // namespace

int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out,
        std::ostream& err) {
  CLI::App app{"Compute-performance scaling analysis: FLOPs, robust sigmoid fits, phases, reports",
               "ceilfit"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "Help for every subcommand");
  std::string out_path;

  FlopsCmd flops;
  FitCmd fit;
  PhasesCmd phases;
  DecomposeCmd decomp;
  CorrelateCmd corr;
  SynthCmd synth;
  ReportCmd report;
  std::function<void(Io&)> action;

  auto sub = [&](const char* name, const char* help, auto& cmd) {
    auto* s = app.add_subcommand(name, help);
    cmd.add(*s);
    s->add_option("--out", out_path, "Machine-readable output file (default: stdout)");
    s->callback([&action, &cmd] { action = [&cmd](Io& io) { cmd.run(io); }; });
  };
  sub("flops", "Per-step and cumulative FLOPs of a training log", flops);
  sub("fit", "Robust sigmoid fit of a run series", fit);
  sub("phases", "Label validation-loss checkpoints", phases);
  sub("decompose", "Split post-training performance into SFT gain and RL plasticity", decomp);
  sub("correlate", "Pearson r between minimum loss and ceiling", corr);
  sub("synth", "Seeded synthetic run with labeled outliers", synth);
  sub("report", "Ceiling table from a directory of fit artifacts", report);

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == static_cast<int>(CLI::ExitCodes::Success)) {
      app.exit(e, out, err);
      return kExitOk;
    }
    err << "usage error: " << e.what() << '\n';
    err << "run with --help for usage\n";
    return kExitUsage;
  }

  Io io{in, out, err, out_path};
  try {
    action(io);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitDataError;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << '\n';
    return kExitDataError;
  }
  return kExitOk;
}

}  // namespace ceilfit::cli
