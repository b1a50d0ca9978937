#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace gridpanel {

struct CsvTable {
  std::filesystem::path source;
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;

  std::optional<std::size_t> column(std::string_view name) const;
  // Throws SchemaError naming the file and the missing column.
  std::size_t require_column(std::string_view name) const;
};

// Permissive RFC-4180-ish reader: quoted fields with "" escapes, optional
// trailing CR, ragged rows preserved (row-level validation happens later).
// Throws IoError if the file cannot be read and SchemaError if it is empty.
CsvTable read_csv_file(const std::filesystem::path& path);
CsvTable read_csv_text(std::string_view text, std::filesystem::path source = "<memory>");

// Shortest decimal form that parses back to exactly the same double.
std::string format_double(double value);
// Strict full-string parse; leading/trailing whitespace and a leading '+' are
// tolerated, anything else unparsed is a failure.
bool parse_double(std::string_view text, double& out);
bool parse_int64(std::string_view text, std::int64_t& out);

std::string csv_escape(std::string_view field);

class CsvWriter {
 public:
  CsvWriter(const std::filesystem::path& path, std::span<const std::string> columns);
  ~CsvWriter();
  void row(std::span<const std::string> fields);
  void close();

 private:
  std::ofstream out_;
  std::filesystem::path path_;
  std::size_t n_columns_ = 0;
  bool closed_ = false;
};

}  // namespace gridpanel
