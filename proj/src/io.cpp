#include "ceilfit/io.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "ceilfit/error.hpp"
#include "ceilfit/rng.hpp"

namespace ceilfit {

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

std::ifstream open_input(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open " + path.string());
  return in;
}

// Integer StepSpec columns, then real-valued ones.
const std::vector<std::pair<const char*, std::int64_t StepSpec::*>>& count_columns() {
  static const std::vector<std::pair<const char*, std::int64_t StepSpec::*>> cols = {
      {"batch", &StepSpec::batch},
      {"update_batch", &StepSpec::update_batch},
      {"sampling_rounds", &StepSpec::sampling_rounds},
      {"group_size", &StepSpec::group_size},
      {"expert_per_prompt", &StepSpec::expert_per_prompt},
      {"on_policy_kept", &StepSpec::on_policy_kept},
      {"off_policy_kept", &StepSpec::off_policy_kept},
  };
  return cols;
}

const std::vector<std::pair<const char*, double StepSpec::*>>& length_columns() {
  static const std::vector<std::pair<const char*, double StepSpec::*>> cols = {
      {"avg_seq_len", &StepSpec::avg_seq_len},
      {"avg_on_len", &StepSpec::avg_on_len},
      {"avg_off_len", &StepSpec::avg_off_len},
  };
  return cols;
}

enum class ComputeShape { kExaflops, kFlops, kSteps };

ComputeShape detect_shape(const Table& t) {
  const bool exa = t.has("x_exaflops");
  const bool raw = t.has("x_flops");
  if (exa && raw) throw ParseError("both x_exaflops and x_flops columns present");
  if (exa) return ComputeShape::kExaflops;
  if (raw) return ComputeShape::kFlops;
  if (t.has("step")) return ComputeShape::kSteps;
  throw ParseError("missing compute column: need x_exaflops, x_flops, or step");
}

// Compute (exaFLOPs) per row for whichever shape the table uses. For the step
// shape the value is the cumulative compute through that row's step.
std::vector<double> row_compute(const Table& t, const ComputeSource& src) {
  std::vector<double> xs(t.rows.size());
  switch (detect_shape(t)) {
    case ComputeShape::kExaflops:
    case ComputeShape::kFlops: {
      const bool raw = t.has("x_flops");
      const char* col = raw ? "x_flops" : "x_exaflops";
      for (std::size_t i = 0; i < t.rows.size(); ++i) {
        const RowReader r(t, i);
        const double v = r.required_number(col);
        if (v < 0.0) r.fail(col, "compute must be nonnegative");
        xs[i] = raw ? v / kFlopsPerExaflop : v;
      }
      break;
    }
    case ComputeShape::kSteps: {
      if (src.model == nullptr) {
        throw ParseError("step-level log needs a model config to compute FLOPs");
      }
      const RawTrainLog log = parse_train_log(t, src.defaults);
      const auto cum = cumulative_log_flops(*src.model, log);
      for (std::size_t i = 0; i < cum.size(); ++i) xs[i] = cum[i].exaflops();
      break;
    }
  }
  return xs;
}

const char* stage_name(RemovalStage s) {
  return s == RemovalStage::kModifiedZ ? "modified_z" : "trimmed";
}

RemovalStage parse_stage(const std::string& s) {
  if (s == "modified_z") return RemovalStage::kModifiedZ;
  if (s == "trimmed") return RemovalStage::kTrimmed;
  throw ParseError("fit artifact: unknown removal stage '" + s + "'");
}

template <typename T>
ordered_json opt_json(const std::optional<T>& v) {
  return v ? ordered_json(*v) : ordered_json(nullptr);
}

template <typename T>
std::optional<T> opt_get(const json& obj, const char* key) {
  auto it = obj.find(key);
  if (it == obj.end() || it->is_null()) return std::nullopt;
  return it->get<T>();
}

ordered_json config_json(const FitConfig& c) {
  ordered_json j;
  j["train_fraction"] = c.train_fraction;
  j["z_threshold"] = c.z_threshold;
  j["use_lts"] = c.use_lts;
  j["lts_alpha"] = c.lts_alpha;
  j["max_outlier_rounds"] = c.max_outlier_rounds;
  j["nls_max_iters"] = c.nls_max_iters;
  j["nls_tolerance"] = c.nls_tolerance;
  j["multistart_count"] = c.multistart_count;
  j["seed"] = c.seed;
  j["ceiling_mode"] =
      c.ceiling_mode == CeilingMode::kConstrained ? "constrained" : "unconstrained";
  j["fixed_p_start"] = opt_json(c.fixed_p_start);
  return j;
}

CeilingMode parse_ceiling_mode(const std::string& s) {
  if (s == "constrained") return CeilingMode::kConstrained;
  if (s == "unconstrained") return CeilingMode::kUnconstrained;
  throw ParseError("unknown ceiling_mode '" + s + "'");
}

FitConfig config_from_json(const json& j) {
  FitConfig c;
  c.train_fraction = j.at("train_fraction").get<double>();
  c.z_threshold = j.at("z_threshold").get<double>();
  c.use_lts = j.at("use_lts").get<bool>();
  c.lts_alpha = j.at("lts_alpha").get<double>();
  c.max_outlier_rounds = j.at("max_outlier_rounds").get<int>();
  c.nls_max_iters = j.at("nls_max_iters").get<int>();
  c.nls_tolerance = j.at("nls_tolerance").get<double>();
  c.multistart_count = j.at("multistart_count").get<int>();
  c.seed = j.at("seed").get<std::uint64_t>();
  c.ceiling_mode = parse_ceiling_mode(j.at("ceiling_mode").get<std::string>());
  c.fixed_p_start = opt_get<double>(j, "fixed_p_start");
  return c;
}

}  // namespace

std::optional<TableFormat> parse_table_format(std::string_view name) {
  if (name == "csv") return TableFormat::kCsv;
  if (name == "jsonl" || name == "ndjson") return TableFormat::kJsonl;
  return std::nullopt;
}

TableFormat format_for_path(const std::filesystem::path& path) {
  const auto ext = path.extension().string();
  return (ext == ".jsonl" || ext == ".ndjson") ? TableFormat::kJsonl : TableFormat::kCsv;
}

Table read_table(std::istream& in, TableFormat format) {
  return format == TableFormat::kCsv ? read_csv(in) : read_jsonl(in);
}

RawTrainLog parse_train_log(const Table& t, const StepDefaults& defaults) {
  if (!t.has("step")) throw ParseError("training log needs a step column");
  RawTrainLog log;
  for (std::size_t i = 0; i < t.rows.size(); ++i) {
    const RowReader r(t, i);
    StepRecord rec;
    rec.step = r.required_integer("step");
    if (rec.step < 0) r.fail("step", "must be nonnegative");
    if (!log.records.empty() && rec.step <= log.records.back().step) {
      r.fail("step", "steps must be strictly increasing");
    }

    StepSpec s = defaults.fields;
    if (auto name = r.text("algorithm")) {
      auto a = parse_algorithm(*name);
      if (!a) r.fail("algorithm", "unknown algorithm '" + std::string(*name) + "'");
      s.algorithm = *a;
    } else if (defaults.algorithm) {
      s.algorithm = *defaults.algorithm;
    } else {
      r.fail("algorithm", "missing and no default algorithm given");
    }
    for (const auto& [col, member] : count_columns()) {
      if (auto v = r.integer(col)) {
        if (*v < 0) r.fail(col, "must be nonnegative");
        s.*member = *v;
      }
    }
    for (const auto& [col, member] : length_columns()) {
      if (auto v = r.number(col)) {
        if (*v < 0.0) r.fail(col, "must be nonnegative");
        s.*member = *v;
      }
    }
    rec.spec = s;
    if (rec.step > 0) {
      try {
        // Probe the cost formula's preconditions too, with a trivial model.
        validate(s);
        step_flops(ModelConfig{1, 1, 1, 1, 1}, s);
      } catch (const InputDomainError& e) {
        throw ParseError(r.where() + ": " + e.what());
      }
    }
    rec.performance = r.number("performance");
    rec.val_loss = r.number("val_loss");
    log.records.push_back(rec);
  }
  return log;
}

RawTrainLog parse_train_log(std::istream& in, TableFormat format, const StepDefaults& defaults) {
  return parse_train_log(read_table(in, format), defaults);
}

std::vector<FlopCount> cumulative_log_flops(const ModelConfig& cfg, const RawTrainLog& log) {
  validate(cfg);
  std::vector<FlopCount> out;
  out.reserve(log.records.size());
  long double running = 0;
  for (const auto& rec : log.records) {
    if (rec.step > 0) running += step_flops(cfg, rec.spec).value();
    out.emplace_back(static_cast<double>(running));
  }
  return out;
}

RunSeries parse_run_series(std::istream& in, TableFormat format, std::string run_id,
                           const ComputeSource& compute) {
  const Table t = read_table(in, format);
  if (!t.has("performance")) throw ParseError("missing column 'performance'");
  const bool step_shape = detect_shape(t) == ComputeShape::kSteps;
  const auto xs = row_compute(t, compute);
  RunSeries run;
  run.run_id = std::move(run_id);
  for (std::size_t i = 0; i < t.rows.size(); ++i) {
    const RowReader r(t, i);
    std::optional<double> y = step_shape ? r.number("performance")
                                         : std::optional<double>(r.required_number("performance"));
    if (!y) continue;
    if (*y < 0.0 || *y > kPerformanceMax) r.fail("performance", "outside [0, 100]");
    CurvePoint p{xs[i], *y, r.integer("step")};
    if (!run.points.empty() && p.x < run.points.back().x) {
      r.fail(step_shape ? "step" : (t.has("x_flops") ? "x_flops" : "x_exaflops"),
             "compute decreases");
    }
    run.points.push_back(p);
  }
  if (run.points.empty()) throw ParseError("run series has no performance points");
  return run;
}

RunSeries read_run_series(const std::filesystem::path& path, const ComputeSource& compute) {
  auto in = open_input(path);
  try {
    return parse_run_series(in, format_for_path(path), path.stem().string(), compute);
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

void write_run_series(std::ostream& out, const RunSeries& run, TableFormat format) {
  const bool with_step = std::any_of(run.points.begin(), run.points.end(),
                                     [](const CurvePoint& p) { return p.step.has_value(); });
  if (format == TableFormat::kCsv) {
    out << "x_exaflops,performance" << (with_step ? ",step" : "") << '\n';
    for (const auto& p : run.points) {
      out << format_double(p.x) << ',' << format_double(p.y);
      if (with_step) {
        out << ',';
        if (p.step) out << *p.step;
      }
      out << '\n';
    }
    return;
  }
  for (const auto& p : run.points) {
    ordered_json j;
    j["x_exaflops"] = p.x;
    j["performance"] = p.y;
    if (p.step) j["step"] = *p.step;
    out << j.dump() << '\n';
  }
}

LossSeries parse_loss_series(std::istream& in, TableFormat format, const ComputeSource& compute) {
  const Table t = read_table(in, format);
  if (!t.has("val_loss")) throw ParseError("missing column 'val_loss'");
  const bool step_shape = detect_shape(t) == ComputeShape::kSteps;
  const auto xs = row_compute(t, compute);
  LossSeries s;
  for (std::size_t i = 0; i < t.rows.size(); ++i) {
    const RowReader r(t, i);
    auto loss = step_shape ? r.number("val_loss")
                           : std::optional<double>(r.required_number("val_loss"));
    if (!loss) continue;
    if (*loss < 0.0) r.fail("val_loss", "must be nonnegative");
    if (!s.points.empty() && !(xs[i] > s.points.back().x)) {
      r.fail(step_shape ? "step" : "x_exaflops", "compute must be strictly increasing");
    }
    s.points.push_back({xs[i], *loss});
  }
  if (s.points.empty()) throw ParseError("loss series has no val_loss points");
  return s;
}

LossSeries read_loss_series(const std::filesystem::path& path, const ComputeSource& compute) {
  auto in = open_input(path);
  try {
    return parse_loss_series(in, format_for_path(path), compute);
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

std::vector<KeyValue> read_key_values(std::istream& in, std::vector<std::string>* warnings) {
  std::vector<KeyValue> out;
  std::string line;
  std::size_t line_no = 0;
  auto trim = [](std::string s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return std::string();
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
  };
  while (std::getline(in, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ParseError("line " + std::to_string(line_no) + ": expected 'key = value'");
    }
    KeyValue kv{trim(line.substr(0, eq)), trim(line.substr(eq + 1)), line_no};
    if (kv.key.empty()) throw ParseError("line " + std::to_string(line_no) + ": empty key");
    if (kv.value.empty()) {
      throw ParseError("line " + std::to_string(line_no) + ", key '" + kv.key + "': empty value");
    }
    auto dup = std::find_if(out.begin(), out.end(),
                            [&](const KeyValue& o) { return o.key == kv.key; });
    if (dup != out.end()) {
      if (warnings) {
        warnings->push_back("line " + std::to_string(line_no) + ": duplicate key '" + kv.key +
                            "' overrides line " + std::to_string(dup->line));
      }
      *dup = kv;
    } else {
      out.push_back(kv);
    }
  }
  return out;
}

ModelConfig parse_model_config(std::istream& in, std::vector<std::string>* warnings) {
  static const std::map<std::string, std::int64_t ModelConfig::*> kKeys = {
      {"num_layers", &ModelConfig::num_layers},
      {"hidden_size", &ModelConfig::hidden_size},
      {"ffn_intermediate", &ModelConfig::ffn_intermediate},
      {"vocab_size", &ModelConfig::vocab_size},
      {"kv_total_dim", &ModelConfig::kv_total_dim},
  };
  ModelConfig cfg;
  std::map<std::string, bool> seen;
  for (const auto& kv : read_key_values(in, warnings)) {
    auto it = kKeys.find(kv.key);
    const std::string where = "line " + std::to_string(kv.line) + ", key '" + kv.key + "'";
    if (it == kKeys.end()) throw ParseError(where + ": unknown model config key");
    auto v = parse_int(kv.value);
    if (!v) throw ParseError(where + ": not an integer: '" + kv.value + "'");
    if (*v <= 0) throw ParseError(where + ": must be positive");
    cfg.*(it->second) = *v;
    seen[kv.key] = true;
  }
  for (const auto& [key, member] : kKeys) {
    if (!seen.count(key)) throw ParseError("model config: missing key '" + key + "'");
  }
  try {
    validate(cfg);
  } catch (const InputDomainError& e) {
    throw ParseError(std::string("model config: ") + e.what());
  }
  return cfg;
}

ModelConfig read_model_config(const std::filesystem::path& path,
                              std::vector<std::string>* warnings) {
  auto in = open_input(path);
  try {
    return parse_model_config(in, warnings);
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

FitConfig parse_fit_config(std::istream& in, FitConfig base, std::vector<std::string>* warnings) {
  FitConfig c = std::move(base);
  for (const auto& kv : read_key_values(in, warnings)) {
    const std::string where = "line " + std::to_string(kv.line) + ", key '" + kv.key + "'";
    auto num = [&] {
      auto v = parse_double(kv.value);
      if (!v) throw ParseError(where + ": not a number: '" + kv.value + "'");
      return *v;
    };
    auto integer = [&] {
      auto v = parse_int(kv.value);
      if (!v) throw ParseError(where + ": not an integer: '" + kv.value + "'");
      return *v;
    };
    if (kv.key == "train_fraction") {
      c.train_fraction = num();
    } else if (kv.key == "z_threshold") {
      c.z_threshold = num();
    } else if (kv.key == "use_lts") {
      auto b = parse_bool(kv.value);
      if (!b) throw ParseError(where + ": not a boolean");
      c.use_lts = *b;
    } else if (kv.key == "lts_alpha") {
      c.lts_alpha = num();
    } else if (kv.key == "max_outlier_rounds") {
      c.max_outlier_rounds = static_cast<int>(integer());
    } else if (kv.key == "nls_max_iters") {
      c.nls_max_iters = static_cast<int>(integer());
    } else if (kv.key == "nls_tolerance") {
      c.nls_tolerance = num();
    } else if (kv.key == "multistart_count") {
      c.multistart_count = static_cast<int>(integer());
    } else if (kv.key == "seed") {
      auto v = integer();
      if (v < 0) throw ParseError(where + ": must be nonnegative");
      c.seed = static_cast<std::uint64_t>(v);
    } else if (kv.key == "ceiling_mode") {
      try {
        c.ceiling_mode = parse_ceiling_mode(kv.value);
      } catch (const ParseError& e) {
        throw ParseError(where + ": " + e.what());
      }
    } else if (kv.key == "fixed_p_start") {
      c.fixed_p_start = num();
    } else {
      throw ParseError(where + ": unknown fit config key");
    }
  }
  try {
    validate(c);
  } catch (const InputDomainError& e) {
    throw ParseError(std::string("fit config: ") + e.what());
  }
  return c;
}

std::string fit_artifact_json(const FitArtifact& a) {
  const FitResult& r = a.result;
  ordered_json j;
  j["format_version"] = kArtifactVersion;
  j["run_id"] = a.run_id;
  j["rng"] = Rng::kName;
  j["params"] = {{"p_start", r.params.p_start},
                 {"ceiling", r.params.ceiling},
                 {"c_mid", r.params.c_mid},
                 {"steepness", r.params.steepness}};
  j["plasticity"] = plasticity(r.params);
  j["metrics"] = {{"r2_train", opt_json(r.r2_train)},
                  {"r2_scope", "inliers"},
                  {"rmse_val", opt_json(r.rmse_val)}};
  j["n_train"] = r.n_train;
  j["n_val"] = r.n_val;
  j["inlier_indices"] = r.inlier_indices;
  j["removed_outliers"] = ordered_json::array();
  for (const auto& rem : r.removed_outliers) {
    j["removed_outliers"].push_back({{"index", rem.index},
                                     {"stage", stage_name(rem.stage)},
                                     {"round", rem.round},
                                     {"score", rem.score}});
  }
  j["converged"] = r.converged;
  j["rounds_used"] = r.rounds_used;
  j["truncated"] = r.truncated;
  j["lts_objective_trace"] = r.lts_objective_trace;
  j["warnings"] = r.warnings;
  j["config"] = config_json(r.config);
  j["context"] = {{"config_name", opt_json(a.context.config_name)},
                  {"sft_step", opt_json(a.context.sft_step)},
                  {"x_sft", opt_json(a.context.x_sft)},
                  {"min_val_loss", opt_json(a.context.min_val_loss)},
                  {"max_p_post", opt_json(a.context.max_p_post)}};
  return j.dump(2) + "\n";
}

void write_fit_artifact(const FitArtifact& artifact, std::ostream& out) {
  out << fit_artifact_json(artifact);
}

void write_fit_artifact(const FitArtifact& artifact, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ParseError("cannot write " + path.string());
  write_fit_artifact(artifact, out);
  if (!out) throw ParseError("failed writing " + path.string());
}

FitArtifact read_fit_artifact(std::istream& in) {
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("fit artifact: ") + e.what());
  }
  if (!j.is_object() || !j.contains("format_version")) {
    throw ParseError("fit artifact: missing format_version");
  }
  if (!j["format_version"].is_string() || j["format_version"].get<std::string>() != kArtifactVersion) {
    throw VersionError("fit artifact: unsupported format_version " + j["format_version"].dump());
  }
  FitArtifact a;
  try {
    a.run_id = j.at("run_id").get<std::string>();
    FitResult& r = a.result;
    const auto& p = j.at("params");
    r.params = {p.at("p_start").get<double>(), p.at("ceiling").get<double>(),
                p.at("c_mid").get<double>(), p.at("steepness").get<double>()};
    const auto& m = j.at("metrics");
    r.r2_train = opt_get<double>(m, "r2_train");
    r.rmse_val = opt_get<double>(m, "rmse_val");
    r.n_train = j.at("n_train").get<std::size_t>();
    r.n_val = j.at("n_val").get<std::size_t>();
    r.inlier_indices = j.at("inlier_indices").get<std::vector<std::size_t>>();
    for (const auto& rem : j.at("removed_outliers")) {
      r.removed_outliers.push_back({rem.at("index").get<std::size_t>(),
                                    parse_stage(rem.at("stage").get<std::string>()),
                                    rem.at("round").get<int>(), rem.at("score").get<double>()});
    }
    r.converged = j.at("converged").get<bool>();
    r.rounds_used = j.at("rounds_used").get<int>();
    r.truncated = j.at("truncated").get<bool>();
    r.lts_objective_trace = j.at("lts_objective_trace").get<std::vector<double>>();
    r.warnings = j.at("warnings").get<std::vector<std::string>>();
    r.config = config_from_json(j.at("config"));
    const auto& c = j.at("context");
    a.context.config_name = opt_get<std::string>(c, "config_name");
    a.context.sft_step = opt_get<std::int64_t>(c, "sft_step");
    a.context.x_sft = opt_get<double>(c, "x_sft");
    a.context.min_val_loss = opt_get<double>(c, "min_val_loss");
    a.context.max_p_post = opt_get<double>(c, "max_p_post");
  } catch (const json::exception& e) {
    throw ParseError(std::string("fit artifact: ") + e.what());
  }
  return a;
}

FitArtifact read_fit_artifact(const std::filesystem::path& path) {
  auto in = open_input(path);
  try {
    return read_fit_artifact(in);
  } catch (const VersionError& e) {
    throw VersionError(path.string() + ": " + e.what());
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

ConfigSummary summarize(const FitArtifact& a) {
  const auto& p = a.result.params;
  ConfigSummary s;
  s.config_name = a.context.config_name.value_or(a.run_id);
  s.sft_step = a.context.sft_step.value_or(0);
  s.x_sft = a.context.x_sft.value_or(0.0);
  s.use_lts = a.result.config.use_lts;
  s.p_sft = p.p_start;
  s.pl_rl = plasticity(p);
  s.a_post = *s.p_sft + *s.pl_rl;
  s.c_mid = p.c_mid;
  s.steepness = p.steepness;
  s.min_val_loss = a.context.min_val_loss;
  s.max_p_post = a.context.max_p_post;
  return s;
}

std::vector<ConfigSummary> parse_summaries(std::istream& in, TableFormat format) {
  const Table t = read_table(in, format);
  if (!t.has("config_name")) throw ParseError("summaries need a config_name column");
  std::vector<ConfigSummary> rows;
  for (std::size_t i = 0; i < t.rows.size(); ++i) {
    const RowReader r(t, i);
    ConfigSummary s;
    s.config_name = r.required_text("config_name");
    s.sft_step = r.integer("sft_step").value_or(0);
    s.x_sft = r.number("x_sft").value_or(0.0);
    s.use_lts = r.boolean("use_lts").value_or(false);
    s.pl_rl = r.number("pl_rl");
    s.c_mid = r.number("c_mid");
    s.steepness = r.number("steepness");
    s.p_sft = r.number("p_sft");
    s.a_post = r.number("a_post");
    s.min_val_loss = r.number("min_val_loss");
    s.max_p_post = r.number("max_p_post");
    rows.push_back(std::move(s));
  }
  return rows;
}

std::vector<ConfigSummary> read_summaries(const std::filesystem::path& path) {
  auto in = open_input(path);
  try {
    if (path.extension() == ".json") return read_report_json(in);
    std::ostringstream buf;
    buf << in.rdbuf();
    std::istringstream text(buf.str());
    const auto format = format_for_path(path);
    if (format == TableFormat::kCsv) {
      // A CSV ceiling report is accepted as-is.
      std::string header;
      std::getline(text, header);
      if (!header.empty() && header.back() == '\r') header.pop_back();
      std::string expected;
      for (const auto& c : report_columns()) expected += (expected.empty() ? "" : ",") + csv_field(c);
      text.seekg(0);
      if (header == expected) return read_report_csv(text);
    }
    return parse_summaries(text, format);
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

}  // namespace ceilfit
