#include "gridpanel/csv.hpp"

#include <charconv>
#include <sstream>

#include "gridpanel/errors.hpp"

namespace gridpanel {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  return s;
}

// Parses one record starting at pos; advances pos past the record terminator.
std::vector<std::string> parse_record(std::string_view text, std::size_t& pos) {
  std::vector<std::string> fields;
  std::string field;
  bool quoted = false;
  while (pos < text.size()) {
    char c = text[pos];
    if (quoted) {
      if (c == '"') {
        if (pos + 1 < text.size() && text[pos + 1] == '"') {
          field += '"';
          ++pos;
        } else {
          quoted = false;
        }
      } else {
        field += c;
      }
      ++pos;
      continue;
    }
    if (c == '"' && field.empty()) {
      quoted = true;
      ++pos;
    } else if (c == ',') {
      fields.push_back(std::move(field));
      field.clear();
      ++pos;
    } else if (c == '\n') {
      ++pos;
      break;
    } else if (c == '\r') {
      ++pos;
      if (pos < text.size() && text[pos] == '\n') ++pos;
      break;
    } else {
      field += c;
      ++pos;
    }
  }
  fields.push_back(std::move(field));
  return fields;
}

}  // namespace

std::optional<std::size_t> CsvTable::column(std::string_view name) const {
  for (std::size_t i = 0; i < columns.size(); ++i) {
    if (columns[i] == name) return i;
  }
  return std::nullopt;
}

std::size_t CsvTable::require_column(std::string_view name) const {
  if (auto idx = column(name)) return *idx;
  throw SchemaError(source.string() + ": missing required column '" + std::string(name) + "'");
}

CsvTable read_csv_text(std::string_view text, std::filesystem::path source) {
  CsvTable table;
  table.source = std::move(source);
  std::size_t pos = 0;
  if (pos >= text.size()) {
    throw SchemaError(table.source.string() + ": empty file, expected a header row");
  }
  table.columns = parse_record(text, pos);
  for (auto& c : table.columns) c = std::string(trim(c));
  while (pos < text.size()) {
    std::size_t start = pos;
    auto fields = parse_record(text, pos);
    if (fields.size() == 1 && fields[0].empty() && pos >= text.size()) break;  // trailing newline
    (void)start;
    table.rows.push_back(std::move(fields));
  }
  return table;
}

CsvTable read_csv_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw IoError("read failure on " + path.string());
  return read_csv_text(buf.str(), path);
}

std::string format_double(double value) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, res.ptr);
}

bool parse_double(std::string_view text, double& out) {
  std::string_view s = trim(text);
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  if (s.empty()) return false;
  auto res = std::from_chars(s.data(), s.data() + s.size(), out);
  return res.ec == std::errc() && res.ptr == s.data() + s.size();
}

bool parse_int64(std::string_view text, std::int64_t& out) {
  std::string_view s = trim(text);
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  if (s.empty()) return false;
  auto res = std::from_chars(s.data(), s.data() + s.size(), out);
  return res.ec == std::errc() && res.ptr == s.data() + s.size();
}

std::string csv_escape(std::string_view field) {
  bool needs_quote = field.find_first_of(",\"\n\r") != std::string_view::npos;
  if (!needs_quote) return std::string(field);
  std::string quoted = "\"";
  for (char c : field) {
    if (c == '"') quoted += '"';
    quoted += c;
  }
  quoted += '"';
  return quoted;
}

CsvWriter::CsvWriter(const std::filesystem::path& path, std::span<const std::string> columns)
    : out_(path, std::ios::binary), path_(path), n_columns_(columns.size()) {
  if (!out_) throw IoError("cannot open " + path.string() + " for writing");
  row(columns);
}

CsvWriter::~CsvWriter() {
  if (!closed_) {
    out_.flush();
  }
}

void CsvWriter::row(std::span<const std::string> fields) {
  if (fields.size() != n_columns_) {
    throw Error(ErrorClass::Internal,
                "csv row width " + std::to_string(fields.size()) + " != header width " +
                    std::to_string(n_columns_) + " in " + path_.string());
  }
  std::string line;
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) line += ',';
    line += csv_escape(fields[i]);
  }
  line += '\n';
  out_.write(line.data(), std::streamsize(line.size()));
  if (!out_) throw IoError("write failure on " + path_.string());
}

void CsvWriter::close() {
  if (closed_) return;
  out_.flush();
  out_.close();
  if (out_.fail()) throw IoError("close failure on " + path_.string());
  closed_ = true;
}

}  // namespace gridpanel
