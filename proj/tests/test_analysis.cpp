#include <doctest.h>

#include <cmath>
#include <fstream>
#include <sstream>
#include <vector>

#include "ceilfit/analysis.hpp"
#include "ceilfit/error.hpp"
#include "ceilfit/io.hpp"
#include "support.hpp"

using namespace ceilfit;
using testing::Gen;

namespace {

// Two-pass in long double.
double oracle_r(const std::vector<double>& x, const std::vector<double>& y) {
  const auto n = static_cast<long double>(x.size());
  long double mx = 0, my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  long double sxy = 0, sxx = 0, syy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
  }
  return static_cast<double>(sxy / std::sqrt(sxx * syy));
}

ConfigSummary row(std::string name, std::int64_t step, double pl, double p_sft, double a_post) {
  ConfigSummary s;
  s.config_name = std::move(name);
  s.sft_step = step;
  s.x_sft = 0.1 * static_cast<double>(step);
  s.pl_rl = pl;
  s.c_mid = 10.0;
  s.steepness = 1.0;
  s.p_sft = p_sft;
  s.a_post = a_post;
  return s;
}

ConfigSummary random_row(Gen& g) {
  ConfigSummary s;
  s.config_name = "cfg" + std::to_string(g.integer(0, 50));
  if (g.coin()) s.config_name += ",quoted \"name\"";
  s.sft_step = g.integer(0, 100000);
  s.x_sft = g.real(0.0, 5000.0);
  s.use_lts = g.coin();
  auto maybe = [&](double lo, double hi) -> std::optional<double> {
    if (g.integer(0, 4) == 0) return std::nullopt;
    return g.real(lo, hi);
  };
  s.pl_rl = maybe(0, 30);
  s.c_mid = maybe(0.01, 1000);
  s.steepness = maybe(0.1, 5);
  s.p_sft = maybe(0, 80);
  s.a_post = maybe(0, 100);
  s.min_val_loss = maybe(0.1, 2);
  s.max_p_post = maybe(0, 100);
  return s;
}

double round1(double v) { return std::stod(format_one_decimal(v)); }

const std::vector<double> kLoss = {0.70, 0.59, 0.54, 0.50, 0.40};
const std::vector<double> kScore = {24.0, 52.0, 53.2, 55.3, 67.1};

}  // namespace

TEST_CASE("pearson basics") {
  const std::vector<double> a = {1, 2, 3, 4, 5};
  std::vector<double> neg;
  for (double v : a) neg.push_back(-v);
  CHECK(pearson(a, a) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(pearson(a, neg) == doctest::Approx(-1.0).epsilon(1e-15));
  CHECK_THROWS_AS(pearson(std::vector<double>{1, 2}, std::vector<double>{1, 2}),
                  InsufficientDataError);
  CHECK_THROWS_AS(pearson(a, std::vector<double>{1, 2, 3}), InputDomainError);
  CHECK_THROWS_AS(pearson(a, std::vector<double>(5, 3.0)), UndefinedCorrelationError);
}

TEST_CASE("pearson against a long-double oracle with invariances") {
  Gen g(51);
  for (int t = 0; t < 500; ++t) {
    const auto n = static_cast<std::size_t>(g.integer(3, 40));
    std::vector<double> x(n), y(n);
    for (std::size_t i = 0; i < n; ++i) {
      x[i] = g.real(-10, 10);
      y[i] = 0.5 * x[i] + g.real(-5, 5);
    }
    const double r = pearson(x, y);
    CHECK(std::fabs(r - oracle_r(x, y)) <= 1e-12);
    CHECK(std::fabs(r) <= 1.0);
    CHECK(pearson(y, x) == doctest::Approx(r).epsilon(1e-14));
    const double a = g.real(0.1, 10), b = g.real(-50, 50);
    std::vector<double> xa(n);
    for (std::size_t i = 0; i < n; ++i) xa[i] = a * x[i] + b;
    CHECK(std::fabs(pearson(xa, y) - r) <= 1e-10);
    for (auto& v : xa) v = -v;
    CHECK(std::fabs(pearson(xa, y) + r) <= 1e-10);
  }
}

TEST_CASE("minimum loss against best score on the 3B table") {
  const double r = pearson(kLoss, kScore);
  CHECK(std::fabs(r - oracle_r(kLoss, kScore)) <= 1e-12);
  CHECK(r <= -0.90);
  CHECK(r == doctest::Approx(-0.9477).epsilon(5e-4));

  const auto rows = read_summaries(testing::data_dir() / "llama3b_loss_scores.csv");
  REQUIRE(rows.size() == 5);
  const auto res = ceiling_loss_correlation(rows);
  CHECK(res.r == doctest::Approx(r).epsilon(1e-14));
  CHECK(res.pairs.size() == 5);
  for (const auto& p : res.pairs) CHECK(p.observed);
}

TEST_CASE("win rate") {
  CHECK(win_rate(4, 4).rate == 1.0);
  CHECK(win_rate(0, 4).rate == 0.0);
  CHECK(win_rate(1, 4).rate == 0.25);
  CHECK_THROWS_AS(win_rate(5, 4), InputDomainError);
  CHECK_THROWS_AS(win_rate(0, 0), InputDomainError);
  CHECK_THROWS_AS(win_rate(-1, 3), InputDomainError);
}

TEST_CASE("report formats and ordering") {
  const std::vector<ConfigSummary> rows = {row("b", 10, 5.0, 60.0, 65.0),
                                           row("a", 20, 4.0, 50.0, 54.0),
                                           row("a", 5, 3.0, 40.0, 43.0)};
  const auto md = build_report(rows, ReportFormat::kMarkdown);
  std::istringstream lines(md);
  std::string line;
  std::vector<std::string> all;
  while (std::getline(lines, line)) all.push_back(line);
  REQUIRE(all.size() == 5);
  for (const auto& l : all) {
    CHECK(std::count(l.begin(), l.end(), '|') == 10);
  }
  CHECK(all[2].find("| a | 5 |") == 0);
  CHECK(all[3].find("| a | 20 |") == 0);
  CHECK(all[4].find("| b | 10 |") == 0);

  const auto csv = build_report(rows, ReportFormat::kCsv);
  CHECK(csv.rfind("SFT data,SFT Step,SFT Compute (exaFLOPs),Use-LTS,PL_rl,C_mid,B,P_sft,A_post\n",
                  0) == 0);
  CHECK(csv.find("a,5,0.5,FALSE,3.0,10.0,1.0,40.0,43.0\n") != std::string::npos);
  CHECK_THROWS_AS(build_report(std::vector<ConfigSummary>{}, ReportFormat::kCsv),
                  InputDomainError);
  CHECK(parse_report_format("md") == ReportFormat::kMarkdown);
  CHECK_FALSE(parse_report_format("xml").has_value());
}

TEST_CASE("CSV report round-trips at one decimal") {
  Gen g(52);
  for (int t = 0; t < 100; ++t) {
    std::vector<ConfigSummary> rows;
    const auto n = g.integer(1, 8);
    for (int i = 0; i < n; ++i) rows.push_back(random_row(g));
    std::istringstream in(build_report(rows, ReportFormat::kCsv));
    const auto back = read_report_csv(in);
    REQUIRE(back.size() == rows.size());
    // Compare as a multiset keyed on the printed fields.
    for (const auto& src : rows) {
      bool found = false;
      for (const auto& b : back) {
        if (b.config_name != src.config_name || b.sft_step != src.sft_step) continue;
        if (b.x_sft != round1(src.x_sft) || b.use_lts != src.use_lts) continue;
        auto same = [](const std::optional<double>& x, const std::optional<double>& y) {
          return x.has_value() == y.has_value() && (!x || *x == round1(*y));
        };
        if (same(b.pl_rl, src.pl_rl) && same(b.c_mid, src.c_mid) &&
            same(b.steepness, src.steepness) && same(b.p_sft, src.p_sft) &&
            same(b.a_post, src.a_post)) {
          found = true;
        }
      }
      CHECK(found);
    }
  }
}

TEST_CASE("JSON report round-trips losslessly") {
  Gen g(53);
  for (int t = 0; t < 100; ++t) {
    std::vector<ConfigSummary> rows;
    const auto n = g.integer(1, 8);
    for (int i = 0; i < n; ++i) rows.push_back(random_row(g));
    std::istringstream in(build_report(rows, ReportFormat::kJson));
    auto back = read_report_json(in);
    auto key = [](const ConfigSummary& a, const ConfigSummary& b) {
      return std::tie(a.config_name, a.sft_step) < std::tie(b.config_name, b.sft_step);
    };
    std::stable_sort(rows.begin(), rows.end(), key);
    CHECK(back == rows);
  }
  std::istringstream bad(R"({"format_version": "9", "rows": []})");
  CHECK_THROWS_AS(read_report_json(bad), VersionError);
  std::istringstream junk("{not json");
  CHECK_THROWS_AS(read_report_json(junk), ParseError);
}

TEST_CASE("decomposition identity check") {
  CHECK_NOTHROW(check_identity(row("x", 1, 14.7, 70.1, 84.8), 1e-9));
  CHECK_THROWS_AS(check_identity(row("x", 1, 14.7, 70.1, 85.0), 1e-9), ContractError);
  ConfigSummary partial = row("x", 1, 14.7, 70.1, 99.0);
  partial.p_sft.reset();
  CHECK_NOTHROW(check_identity(partial));
}

TEST_CASE("published fit table satisfies the decomposition identity") {
  const auto rows = read_summaries(testing::data_dir() / "published_fits.csv");
  CHECK(rows.size() == 33);
  int lts = 0;
  for (const auto& r : rows) {
    CHECK_NOTHROW(check_identity(r, 0.15));
    if (r.use_lts) ++lts;
  }
  CHECK(lts == 4);
}

TEST_CASE("ceiling and loss correlation selection") {
  std::vector<ConfigSummary> rows;
  for (std::size_t i = 0; i < kLoss.size(); ++i) {
    ConfigSummary s;
    s.config_name = "c" + std::to_string(i);
    s.min_val_loss = kLoss[i];
    s.max_p_post = kScore[i];
    if (i == 0) s.a_post = 30.0;
    rows.push_back(s);
  }
  const auto fitted = ceiling_loss_correlation(rows, CeilingSource::kPreferFitted);
  CHECK(fitted.pairs[0].ceiling == 30.0);
  CHECK_FALSE(fitted.pairs[0].observed);
  const auto observed = ceiling_loss_correlation(rows, CeilingSource::kPreferObserved);
  CHECK(observed.pairs[0].ceiling == 24.0);
  CHECK(observed.r == doctest::Approx(pearson(kLoss, kScore)).epsilon(1e-14));

  const std::vector<ConfigSummary> two(rows.begin(), rows.begin() + 2);
  CHECK_THROWS_AS(ceiling_loss_correlation(two), InsufficientDataError);
  auto flat = rows;
  for (auto& r : flat) r.min_val_loss = 0.5;
  CHECK_THROWS_AS(ceiling_loss_correlation(flat), UndefinedCorrelationError);
}

TEST_CASE("one-decimal formatting") {
  CHECK(format_one_decimal(84.8) == "84.8");
  CHECK(format_one_decimal(0.25) == "0.2");
  CHECK(format_one_decimal(-0.04) == "0.0");
  CHECK(format_one_decimal(14.75) == "14.8");
}
