#include "heavytail/csv.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <string_view>

#include "heavytail/errors.hpp"

namespace heavytail {

namespace {

std::vector<std::string_view> split_fields(std::string_view line, char delimiter,
                                           std::vector<std::string_view>& out) {
  out.clear();
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = line.find(delimiter, start);
    if (pos == std::string_view::npos) {
      out.push_back(line.substr(start));
      break;
    }
    out.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
  return out;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) {
    s.remove_prefix(1);
  }
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return s;
}

bool parse_double(std::string_view field, double& out) {
  field = trim(field);
  if (field.empty()) return false;
  const char* begin = field.data();
  const char* end = begin + field.size();
  const auto [ptr, ec] = std::from_chars(begin, end, out);
  return ec == std::errc{} && ptr == end && std::isfinite(out);
}

}  // namespace

CsvReadResult load_csv(const std::string& path, std::span<const std::size_t> columns,
                       const CsvOptions& options) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open csv file: " + path);

  CsvReadResult result;
  std::vector<double> values;
  std::vector<std::string_view> fields;
  std::vector<std::size_t> selected(columns.begin(), columns.end());
  std::string line;
  bool first_line = true;
  std::size_t rows = 0;
  double parsed = 0.0;

  while (std::getline(in, line)) {
    if (line.empty() || (line.size() == 1 && line[0] == '\r')) continue;
    split_fields(line, options.delimiter, fields);
    if (first_line && selected.empty()) {
      // Default selection: every column of the first record.
      selected.resize(fields.size());
      for (std::size_t i = 0; i < fields.size(); ++i) selected[i] = i;
    }
    bool ok = true;
    const std::size_t row_start = values.size();
    for (std::size_t col : selected) {
      if (col >= fields.size() || !parse_double(fields[col], parsed)) {
        ok = false;
        break;
      }
      values.push_back(parsed);
    }
    if (!ok) {
      values.resize(row_start);
      if (first_line) {
        result.header_detected = true;
      } else {
        ++result.skipped_rows;
      }
    } else {
      ++rows;
    }
    first_line = false;
  }

  if (rows == 0) throw DataError("no usable rows in csv file: " + path);
  SampleMatrix m(rows, selected.size());
  m.data() = std::move(values);
  result.data = std::move(m);
  return result;
}

void save_csv(const std::string& path, const SampleMatrix& m,
              std::span<const std::string> column_names, const CsvOptions& options) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot open for writing: " + path);
  std::string header;
  for (std::size_t c = 0; c < m.cols(); ++c) {
    if (c > 0) header += options.delimiter;
    header += c < column_names.size() ? column_names[c] : "x" + std::to_string(c);
  }
  out << header << "\n";
  char buf[64];
  std::string line;
  for (std::size_t r = 0; r < m.rows(); ++r) {
    line.clear();
    for (std::size_t c = 0; c < m.cols(); ++c) {
      if (c > 0) line += options.delimiter;
      const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), m(r, c));
      line.append(buf, ptr);
      (void)ec;
    }
    line += '\n';
    out << line;
  }
}

}  // namespace heavytail
