#pragma once
// Minimal numeric CSV reading/writing shared by the trace, analysis and
// learning-curve files. Lines starting with '#' are comments.

#include <cstddef>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace strider::csv {

class CsvError : public std::runtime_error {
 public:
  CsvError(std::string source, std::size_t row, std::size_t column, const std::string& what);
  std::size_t row() const { return row_; }
  std::size_t column() const { return column_; }

 private:
  std::size_t row_;
  std::size_t column_;
};

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
  std::vector<std::string> comments;

  bool has_column(std::string_view name) const;
  // Throws CsvError naming the missing column.
  std::size_t column(std::string_view name) const;
  std::vector<double> column_values(std::string_view name) const;
};

// Header line required; every data cell must parse as a double. Row numbers in
// errors are 1-based physical line numbers, columns 1-based.
Table read_numeric(std::istream& in, std::string_view source = "<stream>");

std::vector<std::string> split(std::string_view line, char sep = ',');

// Shortest round-trippable decimal form; used for every numeric cell so the
// same values always produce the same bytes.
std::string num(double v);

std::string join(const std::vector<std::string>& cells, char sep = ',');

}  // namespace strider::csv
