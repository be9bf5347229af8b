#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace ceilfit {

// A header plus string cells, shared by the CSV and JSON-lines readers.
// Missing cells (empty CSV fields, absent or null JSON keys) are nullopt.
struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<std::optional<std::string>>> rows;

  std::optional<std::size_t> column(std::string_view name) const;
  bool has(std::string_view name) const { return column(name).has_value(); }
};

// RFC 4180 subset: header row mandatory, comma separator, double-quote quoting,
// CRLF tolerated, blank lines skipped.
Table read_csv(std::istream& in);

// One JSON object per non-blank line; columns are the union of keys in
// first-seen order. Nested values are rejected.
Table read_jsonl(std::istream& in);

// Typed, error-reporting access to one row. Messages name the 1-based data
// row and the column.
class RowReader {
 public:
  RowReader(const Table& table, std::size_t row) : table_(table), row_(row) {}

  std::optional<std::string_view> text(std::string_view col) const;
  std::string required_text(std::string_view col) const;
  std::optional<double> number(std::string_view col) const;
  double required_number(std::string_view col) const;
  std::optional<std::int64_t> integer(std::string_view col) const;
  std::int64_t required_integer(std::string_view col) const;
  std::optional<bool> boolean(std::string_view col) const;

  [[noreturn]] void fail(std::string_view col, const std::string& why) const;
  std::string where() const;

 private:
  const Table& table_;
  std::size_t row_;
};

// Locale-independent parsing. Whole string must be consumed; surrounding
// blanks are ignored; non-finite values are rejected.
std::optional<double> parse_double(std::string_view s);
std::optional<std::int64_t> parse_int(std::string_view s);
std::optional<bool> parse_bool(std::string_view s);

// Shortest decimal string that reads back to the same double.
std::string format_double(double v);

// Quotes a CSV field when it contains a comma, quote, or line break.
std::string csv_field(std::string_view s);

}  // namespace ceilfit
