#include "ceilfit/analysis.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <istream>
#include <sstream>

#include <json.hpp>

#include "ceilfit/error.hpp"
#include "ceilfit/table.hpp"

namespace ceilfit {

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

constexpr const char* kReportVersion = "1";

std::vector<ConfigSummary> sorted_rows(std::span<const ConfigSummary> rows) {
  std::vector<ConfigSummary> out(rows.begin(), rows.end());
  std::stable_sort(out.begin(), out.end(), [](const ConfigSummary& a, const ConfigSummary& b) {
    if (a.config_name != b.config_name) return a.config_name < b.config_name;
    return a.sft_step < b.sft_step;
  });
  return out;
}

std::string opt_decimal(const std::optional<double>& v, std::string_view absent) {
  return v ? format_one_decimal(*v) : std::string(absent);
}

std::vector<std::string> cells(const ConfigSummary& r, std::string_view absent) {
  return {r.config_name,
          std::to_string(r.sft_step),
          format_one_decimal(r.x_sft),
          r.use_lts ? "TRUE" : "FALSE",
          opt_decimal(r.pl_rl, absent),
          opt_decimal(r.c_mid, absent),
          opt_decimal(r.steepness, absent),
          opt_decimal(r.p_sft, absent),
          opt_decimal(r.a_post, absent)};
}

std::string markdown_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '|') out.push_back('\\');
    out.push_back(c);
  }
  return out;
}

ordered_json opt_json(const std::optional<double>& v) {
  return v ? ordered_json(*v) : ordered_json(nullptr);
}

std::optional<double> opt_from_json(const json& row, const char* key) {
  auto it = row.find(key);
  if (it == row.end() || it->is_null()) return std::nullopt;
  if (!it->is_number()) throw ParseError(std::string("report field '") + key + "' is not a number");
  return it->get<double>();
}

}  // namespace

void check_identity(const ConfigSummary& row, double tolerance) {
  if (row.p_sft && row.pl_rl && row.a_post &&
      std::fabs(*row.p_sft + *row.pl_rl - *row.a_post) > tolerance) {
    throw ContractError(row.config_name + " step " + std::to_string(row.sft_step) +
                        ": a_post differs from p_sft + pl_rl");
  }
}

double pearson(std::span<const double> xs, std::span<const double> ys) {
  if (xs.size() != ys.size()) throw InputDomainError("pearson: sequences differ in length");
  if (xs.size() < 3) throw InsufficientDataError("pearson: need at least 3 pairs");
  const auto n = static_cast<double>(xs.size());
  double mx = 0.0;
  double my = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (!std::isfinite(xs[i]) || !std::isfinite(ys[i])) {
      throw InputDomainError("pearson: non-finite input");
    }
    mx += xs[i];
    my += ys[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0;
  double syy = 0.0;
  double sxy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double dx = xs[i] - mx;
    const double dy = ys[i] - my;
    sxx += dx * dx;
    syy += dy * dy;
    sxy += dx * dy;
  }
  if (sxx == 0.0 || syy == 0.0) throw UndefinedCorrelationError("pearson: zero variance");
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

WinRate win_rate(std::int64_t successes, std::int64_t attempts) {
  if (attempts < 1) throw InputDomainError("win rate: attempts must be at least 1");
  if (successes < 0 || successes > attempts) {
    throw InputDomainError("win rate: successes must lie in [0, attempts]");
  }
  return {successes, attempts, static_cast<double>(successes) / static_cast<double>(attempts)};
}

std::optional<ReportFormat> parse_report_format(std::string_view name) {
  if (name == "csv") return ReportFormat::kCsv;
  if (name == "markdown" || name == "md") return ReportFormat::kMarkdown;
  if (name == "json") return ReportFormat::kJson;
  return std::nullopt;
}

const std::vector<std::string>& report_columns() {
  static const std::vector<std::string> cols = {
      "SFT data", "SFT Step", "SFT Compute (exaFLOPs)", "Use-LTS", "PL_rl",
      "C_mid",    "B",        "P_sft",                  "A_post"};
  return cols;
}

std::string format_one_decimal(double v) {
  std::array<char, 64> buf{};
  auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v, std::chars_format::fixed, 1);
  std::string s(buf.data(), res.ptr);
  if (s == "-0.0") s = "0.0";
  return s;
}

std::string build_report(std::span<const ConfigSummary> rows, ReportFormat format) {
  if (rows.empty()) throw InputDomainError("report needs at least one row");
  const auto sorted = sorted_rows(rows);
  std::ostringstream out;
  switch (format) {
    case ReportFormat::kCsv: {
      const auto& cols = report_columns();
      for (std::size_t i = 0; i < cols.size(); ++i) out << (i ? "," : "") << csv_field(cols[i]);
      out << '\n';
      for (const auto& r : sorted) {
        const auto c = cells(r, "");
        for (std::size_t i = 0; i < c.size(); ++i) out << (i ? "," : "") << csv_field(c[i]);
        out << '\n';
      }
      break;
    }
    case ReportFormat::kMarkdown: {
      out << '|';
      for (const auto& c : report_columns()) out << ' ' << c << " |";
      out << "\n|";
      for (std::size_t i = 0; i < report_columns().size(); ++i) out << "---|";
      out << '\n';
      for (const auto& r : sorted) {
        out << '|';
        for (const auto& c : cells(r, "-")) out << ' ' << markdown_escape(c) << " |";
        out << '\n';
      }
      break;
    }
    case ReportFormat::kJson: {
      ordered_json doc;
      doc["format_version"] = kReportVersion;
      doc["columns"] = report_columns();
      doc["rows"] = ordered_json::array();
      for (const auto& r : sorted) {
        ordered_json row;
        row["config_name"] = r.config_name;
        row["sft_step"] = r.sft_step;
        row["x_sft"] = r.x_sft;
        row["use_lts"] = r.use_lts;
        row["pl_rl"] = opt_json(r.pl_rl);
        row["c_mid"] = opt_json(r.c_mid);
        row["steepness"] = opt_json(r.steepness);
        row["p_sft"] = opt_json(r.p_sft);
        row["a_post"] = opt_json(r.a_post);
        row["min_val_loss"] = opt_json(r.min_val_loss);
        row["max_p_post"] = opt_json(r.max_p_post);
        doc["rows"].push_back(std::move(row));
      }
      out << doc.dump(2) << '\n';
      break;
    }
  }
  return out.str();
}

std::vector<ConfigSummary> read_report_csv(std::istream& in) {
  const Table t = read_csv(in);
  if (t.columns != report_columns()) throw ParseError("CSV header is not the ceiling-table schema");
  const auto& cols = report_columns();
  std::vector<ConfigSummary> rows;
  for (std::size_t i = 0; i < t.rows.size(); ++i) {
    const RowReader r(t, i);
    ConfigSummary s;
    s.config_name = r.required_text(cols[0]);
    s.sft_step = r.required_integer(cols[1]);
    s.x_sft = r.required_number(cols[2]);
    auto lts = r.boolean(cols[3]);
    if (!lts) r.fail(cols[3], "missing value");
    s.use_lts = *lts;
    s.pl_rl = r.number(cols[4]);
    s.c_mid = r.number(cols[5]);
    s.steepness = r.number(cols[6]);
    s.p_sft = r.number(cols[7]);
    s.a_post = r.number(cols[8]);
    rows.push_back(std::move(s));
  }
  return rows;
}

std::vector<ConfigSummary> read_report_json(std::istream& in) {
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("report JSON: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("format_version") || !doc.contains("rows")) {
    throw ParseError("report JSON: missing format_version or rows");
  }
  if (doc["format_version"] != kReportVersion) {
    throw VersionError("report JSON: unsupported format_version " + doc["format_version"].dump());
  }
  std::vector<ConfigSummary> rows;
  try {
    for (const auto& row : doc.at("rows")) {
      ConfigSummary s;
      s.config_name = row.at("config_name").get<std::string>();
      s.sft_step = row.at("sft_step").get<std::int64_t>();
      s.x_sft = row.at("x_sft").get<double>();
      s.use_lts = row.at("use_lts").get<bool>();
      s.pl_rl = opt_from_json(row, "pl_rl");
      s.c_mid = opt_from_json(row, "c_mid");
      s.steepness = opt_from_json(row, "steepness");
      s.p_sft = opt_from_json(row, "p_sft");
      s.a_post = opt_from_json(row, "a_post");
      s.min_val_loss = opt_from_json(row, "min_val_loss");
      s.max_p_post = opt_from_json(row, "max_p_post");
      rows.push_back(std::move(s));
    }
  } catch (const json::exception& e) {
    throw ParseError(std::string("report JSON: ") + e.what());
  }
  return rows;
}

CorrelationResult ceiling_loss_correlation(std::span<const ConfigSummary> rows,
                                           CeilingSource source) {
  CorrelationResult res;
  for (const auto& r : rows) {
    if (!r.min_val_loss) continue;
    const auto& first = source == CeilingSource::kPreferFitted ? r.a_post : r.max_p_post;
    const auto& second = source == CeilingSource::kPreferFitted ? r.max_p_post : r.a_post;
    const auto& chosen = first ? first : second;
    if (!chosen) continue;
    const bool observed = (&chosen == &r.max_p_post);
    res.pairs.push_back({r.config_name, r.sft_step, *r.min_val_loss, *chosen, observed});
  }
  if (res.pairs.size() < 3) {
    throw InsufficientDataError("correlation needs at least 3 rows with both a minimum loss and "
                                "a ceiling; found " + std::to_string(res.pairs.size()));
  }
  std::vector<double> xs;
  std::vector<double> ys;
  for (const auto& p : res.pairs) {
    xs.push_back(p.min_val_loss);
    ys.push_back(p.ceiling);
  }
  res.r = pearson(xs, ys);
  return res;
}

}  // namespace ceilfit
