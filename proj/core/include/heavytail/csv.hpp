#pragma once

#include <span>
#include <string>
#include <vector>

#include "heavytail/matrix.hpp"

namespace heavytail {

struct CsvOptions {
  char delimiter = ',';
};

struct CsvReadResult {
  SampleMatrix data;
  std::size_t skipped_rows = 0;  // unparsable or short rows, counted not fatal
  bool header_detected = false;
};

// Loads the selected zero-based columns (all columns when empty). A
// non-numeric first line is treated as a header; rows whose selected cells
// fail to parse as finite reals are skipped and counted.
CsvReadResult load_csv(const std::string& path,
                       std::span<const std::size_t> columns = {},
                       const CsvOptions& options = {});

// Writes with shortest round-trip formatting, so a reload reproduces the
// exact doubles. Default column names are x0, x1, ...
void save_csv(const std::string& path, const SampleMatrix& m,
              std::span<const std::string> column_names = {},
              const CsvOptions& options = {});

}  // namespace heavytail
