#include <doctest.h>

#include <fstream>
#include <sstream>

#include "ceilfit/error.hpp"
#include "ceilfit/io.hpp"
#include "support.hpp"

using namespace ceilfit;
using testing::Gen;

namespace {

RunSeries parse(const std::string& text, TableFormat fmt = TableFormat::kCsv,
                const ComputeSource& src = {}) {
  std::istringstream in(text);
  return parse_run_series(in, fmt, "r", src);
}

std::string parse_error(const std::string& text) {
  try {
    parse(text);
  } catch (const ParseError& e) {
    return e.what();
  }
  return {};
}

RunSeries random_run(Gen& g) {
  RunSeries r;
  r.run_id = "run";
  const auto n = g.integer(1, 40);
  double x = 0.0;
  const bool steps = g.coin();
  for (int i = 0; i < n; ++i) {
    x += g.coin() ? g.log_real(1e-6, 1e4) : 0.0;
    CurvePoint p{x, g.real(0.0, 100.0), std::nullopt};
    if (steps) p.step = i * 10;
    r.points.push_back(p);
  }
  return r;
}

FitArtifact random_artifact(Gen& g) {
  FitArtifact a;
  a.run_id = "run-" + std::to_string(g.integer(0, 999));
  auto& f = a.result;
  f.params = g.sigmoid();
  f.n_train = static_cast<std::size_t>(g.integer(5, 60));
  f.n_val = static_cast<std::size_t>(g.integer(0, 10));
  for (std::size_t i = 0; i < f.n_train; ++i) {
    if (g.integer(0, 9) == 0) {
      const bool trimmed = g.coin();
      f.removed_outliers.push_back({i, trimmed ? RemovalStage::kTrimmed : RemovalStage::kModifiedZ,
                                    trimmed ? 0 : static_cast<int>(g.integer(1, 10)),
                                    g.real(0, 50)});
    } else {
      f.inlier_indices.push_back(i);
    }
  }
  if (g.coin()) f.r2_train = g.real(-1, 1);
  if (f.n_val > 0) f.rmse_val = g.real(0, 5);
  f.converged = g.coin();
  f.rounds_used = static_cast<int>(g.integer(1, 10));
  f.truncated = g.coin();
  for (int i = 0, n = static_cast<int>(g.integer(0, 6)); i < n; ++i) {
    f.lts_objective_trace.push_back(g.real(0, 100));
  }
  if (g.coin()) f.warnings.push_back("note \"quoted\"\nline");
  f.config.train_fraction = g.real(0.5, 1.0);
  f.config.use_lts = !f.lts_objective_trace.empty();
  f.config.lts_alpha = g.real(0.5, 1.0);
  f.config.seed = g.bits();
  f.config.multistart_count = static_cast<int>(g.integer(0, 32));
  f.config.ceiling_mode = g.coin() ? CeilingMode::kConstrained : CeilingMode::kUnconstrained;
  if (g.coin()) f.config.fixed_p_start = f.params.p_start;
  if (g.coin()) a.context.config_name = "Easy102K";
  if (g.coin()) a.context.sft_step = g.integer(0, 10000);
  if (g.coin()) a.context.x_sft = g.real(0, 2000);
  if (g.coin()) a.context.min_val_loss = g.real(0.1, 2);
  if (g.coin()) a.context.max_p_post = g.real(0, 100);
  return a;
}

}  // namespace

TEST_CASE("two-row CSV") {
  const auto r = parse("x_exaflops,performance\n0.0,46.1\n34.9,70.1\n");
  REQUIRE(r.points.size() == 2);
  CHECK(r.points[0] == CurvePoint{0.0, 46.1, std::nullopt});
  CHECK(r.points[1] == CurvePoint{34.9, 70.1, std::nullopt});
  CHECK(r.run_id == "r");
}

TEST_CASE("decreasing compute is rejected with the row named") {
  const auto msg = parse_error("x_exaflops,performance\n1.0,50\n3.0,52\n2.0,53\n");
  CHECK(msg.find("row 3") != std::string::npos);
  CHECK(msg.find("x_exaflops") != std::string::npos);
}

TEST_CASE("malformed runs") {
  CHECK(parse_error("x_exaflops,performance\n1.0,101\n").find("performance") != std::string::npos);
  CHECK_FALSE(parse_error("x_exaflops,performance\n1.0,-1\n").empty());
  CHECK_FALSE(parse_error("x_exaflops,performance\n1.0,abc\n").empty());
  CHECK_FALSE(parse_error("x_exaflops,performance\n1.0,inf\n").empty());
  CHECK_FALSE(parse_error("x_exaflops\n1.0\n").empty());
  CHECK_FALSE(parse_error("x_exaflops,x_flops,performance\n1,1,1\n").empty());
  CHECK_FALSE(parse_error("performance\n1\n").empty());
  CHECK_FALSE(parse_error("x_exaflops,performance\n-1.0,5\n").empty());
  CHECK(parse("x_exaflops,performance\n1.0,100\n").points[0].y == 100.0);
}

TEST_CASE("raw FLOPs are converted to exaFLOPs") {
  const auto r = parse("x_flops,performance\n2.5e18,10\n");
  CHECK(r.points[0].x == 2.5);
}

TEST_CASE("CSV and JSON lines agree") {
  const auto a = parse("x_exaflops,performance,step\n0,46.1,0\n1.5,50,\n");
  const auto b = parse(
      "{\"x_exaflops\": 0, \"performance\": 46.1, \"step\": 0}\n\n"
      "{\"x_exaflops\": 1.5, \"performance\": 50, \"step\": null}\n",
      TableFormat::kJsonl);
  CHECK(a == b);
  CHECK(a.points[0].step == 0);
  CHECK_FALSE(a.points[1].step.has_value());
  CHECK(format_for_path("a/b.jsonl") == TableFormat::kJsonl);
  CHECK(format_for_path("a/b.csv") == TableFormat::kCsv);
}

TEST_CASE("step-level log with a model config") {
  const auto model = testing::tiny_model();
  ComputeSource src{&model, {}};
  const auto r = parse(
      "step,algorithm,batch,avg_seq_len,performance\n"
      "0,sft,2,1,40\n1,sft,2,1,\n2,sft,2,1,45\n",
      TableFormat::kCsv, src);
  REQUIRE(r.points.size() == 2);
  CHECK(r.points[0].x == 0.0);
  CHECK(r.points[1].x == 264e-18);
  CHECK(r.points[1].step == 2);

  CHECK_THROWS_AS(parse("step,algorithm,batch,avg_seq_len,performance\n1,sft,2,1,4\n"),
                  ParseError);
  CHECK_THROWS_AS(parse("step,algorithm,batch,avg_seq_len,performance\n1,ppo,2,1,4\n",
                        TableFormat::kCsv, src),
                  ParseError);
  CHECK_THROWS_AS(parse("step,algorithm,batch,avg_seq_len,performance\n2,sft,2,1,4\n"
                        "2,sft,2,1,5\n",
                        TableFormat::kCsv, src),
                  ParseError);

  StepDefaults defaults;
  defaults.algorithm = Algorithm::kSft;
  defaults.fields.avg_seq_len = 1;
  std::istringstream in("step,batch\n1,2\n2,2\n");
  const auto log = parse_train_log(in, TableFormat::kCsv, defaults);
  const auto cum = cumulative_log_flops(model, log);
  CHECK(cum[0].value() == 132.0);
  CHECK(cum[1].value() == 264.0);
}

TEST_CASE("loss series") {
  std::istringstream in("x_exaflops,val_loss\n1,0.7\n2,0.6\n");
  const auto s = parse_loss_series(in, TableFormat::kCsv);
  CHECK(s.points.size() == 2);
  std::istringstream dup("x_exaflops,val_loss\n1,0.7\n1,0.6\n");
  CHECK_THROWS_AS(parse_loss_series(dup, TableFormat::kCsv), ParseError);
}

TEST_CASE("model config files") {
  const auto qwen = read_model_config(testing::data_dir() / "qwen2.5-7b.cfg");
  CHECK(qwen == ModelConfig{28, 3584, 18944, 152064, 512});

  std::istringstream neg(
      "num_layers=-1\nhidden_size=1\nffn_intermediate=1\nvocab_size=1\nkv_total_dim=1\n");
  CHECK_THROWS_AS(parse_model_config(neg), ParseError);

  std::vector<std::string> warnings;
  std::istringstream dup(
      "num_layers=2\nnum_layers=3\nhidden_size=1\nffn_intermediate=1\nvocab_size=1\n"
      "kv_total_dim=1\n");
  CHECK(parse_model_config(dup, &warnings).num_layers == 3);
  REQUIRE(warnings.size() == 1);
  CHECK(warnings[0].find("num_layers") != std::string::npos);

  std::istringstream missing("num_layers=2\n");
  try {
    parse_model_config(missing);
    CHECK(false);
  } catch (const ParseError& e) {
    CHECK(std::string(e.what()).find("missing key") != std::string::npos);
  }
  std::istringstream unknown(
      "num_layers=1\nhidden_size=1\nffn_intermediate=1\nvocab_size=1\nkv_total_dim=1\nheads=4\n");
  CHECK_THROWS_AS(parse_model_config(unknown), ParseError);
}

TEST_CASE("fit config files") {
  std::istringstream in(
      "# robust settings\nuse_lts = true\nlts_alpha = 0.9\nseed = 7\n"
      "ceiling_mode = unconstrained\n");
  const auto c = parse_fit_config(in);
  CHECK(c.use_lts);
  CHECK(c.lts_alpha == 0.9);
  CHECK(c.seed == 7);
  CHECK(c.ceiling_mode == CeilingMode::kUnconstrained);
  CHECK(c.train_fraction == 0.85);
  std::istringstream bad("lts_alpha = 1.5\n");
  CHECK_THROWS(parse_fit_config(bad));
  std::istringstream typo("z_treshold = 3\n");
  CHECK_THROWS_AS(parse_fit_config(typo), ParseError);
}

TEST_CASE("run series round-trip") {
  Gen g(61);
  for (int t = 0; t < 100; ++t) {
    const auto run = random_run(g);
    for (auto fmt : {TableFormat::kCsv, TableFormat::kJsonl}) {
      std::ostringstream out;
      write_run_series(out, run, fmt);
      std::istringstream in(out.str());
      CHECK(parse_run_series(in, fmt, "run") == run);
    }
  }
}

TEST_CASE("fit artifact round-trip") {
  Gen g(62);
  for (int t = 0; t < 100; ++t) {
    const auto a = random_artifact(g);
    std::istringstream in(fit_artifact_json(a));
    CHECK(read_fit_artifact(in) == a);
  }
  const auto dir = testing::scratch_dir("io_artifact");
  const auto a = random_artifact(g);
  write_fit_artifact(a, dir / "a.json");
  CHECK(read_fit_artifact(dir / "a.json") == a);
}

TEST_CASE("artifact versioning and corruption") {
  Gen g(63);
  const auto text = fit_artifact_json(random_artifact(g));
  CHECK(text.find("\"format_version\": \"1\"") != std::string::npos);
  std::istringstream cut(text.substr(0, text.size() / 2));
  CHECK_THROWS_AS(read_fit_artifact(cut), ParseError);
  auto v2 = text;
  v2.replace(v2.find("\"1\""), 3, "\"2\"");
  std::istringstream in(v2);
  CHECK_THROWS_AS(read_fit_artifact(in), VersionError);
}

TEST_CASE("summaries from artifacts and files") {
  FitArtifact a;
  a.run_id = "Easy102K-360";
  a.result.params = {70.1, 84.8, 10.0, 0.9};
  a.context.sft_step = 360;
  a.context.x_sft = 34.9;
  const auto s = summarize(a);
  CHECK(s.config_name == "Easy102K-360");
  CHECK(*s.p_sft == 70.1);
  CHECK(*s.a_post == *s.p_sft + *s.pl_rl);
  CHECK(s.sft_step == 360);

  std::istringstream in("config_name,min_val_loss\nA,0.5\n");
  const auto rows = parse_summaries(in, TableFormat::kCsv);
  REQUIRE(rows.size() == 1);
  CHECK(*rows[0].min_val_loss == 0.5);
  CHECK_FALSE(rows[0].a_post.has_value());
}
