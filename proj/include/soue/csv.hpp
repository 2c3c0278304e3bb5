#pragma once

#include <cstddef>
#include <filesystem>
#include <istream>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace soue {

/// Splits one CSV record. Double-quoted fields may contain commas and `""` escapes.
std::vector<std::string> split_csv_line(std::string_view line);

/// Reads a headered CSV stream and resolves columns by name.
class CsvReader {
 public:
  /// Reads the header and checks that every name in `required` is present.
  CsvReader(std::istream& in, std::string source, const std::vector<std::string>& required);

  /// Advances to the next non-blank record. Returns false at end of input.
  bool next();

  const std::string& field(std::string_view column) const;
  std::size_t line() const { return line_; }
  const std::string& source() const { return source_; }

  /// Throws ParseError tagged with the current line.
  [[noreturn]] void fail(const std::string& what) const;

  double field_as_double(std::string_view column) const;
  long long field_as_integer(std::string_view column) const;

 private:
  std::istream& in_;
  std::string source_;
  std::vector<std::string> header_;
  std::vector<std::string> row_;
  std::size_t line_ = 0;
};

/// Shortest decimal text that parses back to exactly `value`.
std::string format_double(double value);

/// Parses a whole-string decimal number, or returns nullopt.
std::optional<double> parse_double(std::string_view text);

/// Writes `content` to a sibling temp file, then renames it over `path`.
void write_file_atomic(const std::filesystem::path& path, std::string_view content);

/// Compares identifiers numerically when both are unsigned integers, otherwise lexically.
bool natural_less(std::string_view a, std::string_view b);

struct NaturalLess {
  bool operator()(std::string_view a, std::string_view b) const { return natural_less(a, b); }
};

}  // namespace soue
