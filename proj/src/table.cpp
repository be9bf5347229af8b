#include "ceilfit/table.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <istream>

#include <json.hpp>

#include "ceilfit/error.hpp"

namespace ceilfit {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  return s;
}

bool blank(std::string_view s) {
  return std::all_of(s.begin(), s.end(),
                     [](char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\n'; });
}

// Reads one logical CSV record (quoted fields may span lines).
bool next_record(std::istream& in, std::vector<std::string>& fields, std::size_t& line_no) {
  fields.clear();
  std::string line;
  do {
    if (!std::getline(in, line)) return false;
    ++line_no;
  } while (blank(line));

  std::string cur;
  bool quoted = false;
  std::size_t i = 0;
  for (;;) {
    if (i >= line.size()) {
      if (!quoted) break;
      // Embedded line break inside quotes.
      if (!std::getline(in, line)) {
        throw ParseError("line " + std::to_string(line_no) + ": unterminated quoted field");
      }
      ++line_no;
      cur.push_back('\n');
      i = 0;
      continue;
    }
    const char c = line[i++];
    if (quoted) {
      if (c == '"') {
        if (i < line.size() && line[i] == '"') {
          cur.push_back('"');
          ++i;
        } else {
          quoted = false;
        }
      } else {
        cur.push_back(c);
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(std::move(cur));
      cur.clear();
    } else if (c == '\r' && i == line.size()) {
      // CRLF
    } else {
      cur.push_back(c);
    }
  }
  fields.push_back(std::move(cur));
  return true;
}

}  // namespace

std::optional<std::size_t> Table::column(std::string_view name) const {
  for (std::size_t i = 0; i < columns.size(); ++i) {
    if (columns[i] == name) return i;
  }
  return std::nullopt;
}

Table read_csv(std::istream& in) {
  Table t;
  std::size_t line_no = 0;
  std::vector<std::string> fields;
  if (!next_record(in, fields, line_no)) throw ParseError("CSV input has no header row");
  for (auto& f : fields) {
    std::string name(trim(f));
    if (name.empty()) throw ParseError("CSV header has an empty column name");
    if (t.has(name)) throw ParseError("CSV header repeats column '" + name + "'");
    t.columns.push_back(std::move(name));
  }
  while (next_record(in, fields, line_no)) {
    if (fields.size() != t.columns.size()) {
      throw ParseError("row " + std::to_string(t.rows.size() + 1) + " (line " +
                       std::to_string(line_no) + "): expected " +
                       std::to_string(t.columns.size()) + " fields, found " +
                       std::to_string(fields.size()));
    }
    std::vector<std::optional<std::string>> row;
    row.reserve(fields.size());
    for (auto& f : fields) {
      if (trim(f).empty()) {
        row.emplace_back(std::nullopt);
      } else {
        row.emplace_back(std::move(f));
      }
    }
    t.rows.push_back(std::move(row));
  }
  return t;
}

Table read_jsonl(std::istream& in) {
  using nlohmann::json;
  Table t;
  std::vector<json> objects;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (blank(line)) continue;
    json obj;
    try {
      obj = json::parse(line);
    } catch (const json::parse_error& e) {
      throw ParseError("record " + std::to_string(objects.size() + 1) + " (line " +
                       std::to_string(line_no) + "): invalid JSON: " + e.what());
    }
    if (!obj.is_object()) {
      throw ParseError("record " + std::to_string(objects.size() + 1) + ": not a JSON object");
    }
    for (const auto& [key, value] : obj.items()) {
      if (!t.has(key)) t.columns.push_back(key);
    }
    objects.push_back(std::move(obj));
  }
  for (std::size_t r = 0; r < objects.size(); ++r) {
    std::vector<std::optional<std::string>> row(t.columns.size());
    for (std::size_t c = 0; c < t.columns.size(); ++c) {
      auto it = objects[r].find(t.columns[c]);
      if (it == objects[r].end() || it->is_null()) continue;
      if (it->is_string()) {
        row[c] = it->get<std::string>();
      } else if (it->is_number() || it->is_boolean()) {
        row[c] = it->dump();
      } else {
        throw ParseError("record " + std::to_string(r + 1) + ", key '" + t.columns[c] +
                         "': nested values are not supported");
      }
    }
    t.rows.push_back(std::move(row));
  }
  return t;
}

std::optional<std::string_view> RowReader::text(std::string_view col) const {
  auto c = table_.column(col);
  if (!c) return std::nullopt;
  const auto& cell = table_.rows[row_][*c];
  if (!cell) return std::nullopt;
  return std::string_view(*cell);
}

std::string RowReader::required_text(std::string_view col) const {
  auto v = text(col);
  if (!v) fail(col, "missing value");
  return std::string(*v);
}

std::optional<double> RowReader::number(std::string_view col) const {
  auto v = text(col);
  if (!v) return std::nullopt;
  auto d = parse_double(*v);
  if (!d) fail(col, "not a finite number: '" + std::string(*v) + "'");
  return d;
}

double RowReader::required_number(std::string_view col) const {
  auto v = number(col);
  if (!v) fail(col, "missing value");
  return *v;
}

std::optional<std::int64_t> RowReader::integer(std::string_view col) const {
  auto v = text(col);
  if (!v) return std::nullopt;
  auto d = parse_int(*v);
  if (!d) fail(col, "not an integer: '" + std::string(*v) + "'");
  return d;
}

std::int64_t RowReader::required_integer(std::string_view col) const {
  auto v = integer(col);
  if (!v) fail(col, "missing value");
  return *v;
}

std::optional<bool> RowReader::boolean(std::string_view col) const {
  auto v = text(col);
  if (!v) return std::nullopt;
  auto b = parse_bool(*v);
  if (!b) fail(col, "not a boolean: '" + std::string(*v) + "'");
  return b;
}

std::string RowReader::where() const { return "row " + std::to_string(row_ + 1); }

void RowReader::fail(std::string_view col, const std::string& why) const {
  throw ParseError(where() + ", column '" + std::string(col) + "': " + why);
}

std::optional<double> parse_double(std::string_view s) {
  s = trim(s);
  if (s.empty()) return std::nullopt;
  double v = 0.0;
  const char* end = s.data() + s.size();
  auto res = std::from_chars(s.data(), end, v, std::chars_format::general);
  if (res.ec != std::errc() || res.ptr != end || !std::isfinite(v)) return std::nullopt;
  return v;
}

std::optional<std::int64_t> parse_int(std::string_view s) {
  s = trim(s);
  if (s.empty()) return std::nullopt;
  std::int64_t v = 0;
  const char* end = s.data() + s.size();
  auto res = std::from_chars(s.data(), end, v);
  if (res.ec != std::errc() || res.ptr != end) return std::nullopt;
  return v;
}

std::optional<bool> parse_bool(std::string_view s) {
  s = trim(s);
  std::string low(s);
  std::transform(low.begin(), low.end(), low.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (low == "true" || low == "1") return true;
  if (low == "false" || low == "0") return false;
  return std::nullopt;
}

std::string format_double(double v) {
  std::array<char, 64> buf{};
  auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), res.ptr);
}

std::string csv_field(std::string_view s) {
  if (s.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(s);
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

}  // namespace ceilfit
