#pragma once

#include <string>
#include <vector>

#include "gkp/hp.hpp"

namespace gkp {

/// SHA-256 digest as lowercase hex; used for content-addressed cache keys.
std::string sha256_hex(const std::string& data);

/// Write-temp-then-rename so concurrent readers never observe partial files.
void atomic_write_file(const std::string& path, const std::string& content);

/// Whole-file read; missing file -> empty optional semantics via bool return.
bool read_file(const std::string& path, std::string& out);

void ensure_directory(const std::string& path);

/// Fixed 25-significant-digit decimal form used by every emitted file and
/// cache record, so reruns are byte-identical at equal precision.
std::string to_decimal(const HPReal& x);

/// Plot-ready CSV: '#'-prefixed header lines (config echo), one column-name
/// row, then data rows. Cells are written verbatim.
class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> columns);
  void add_row(std::vector<std::string> cells);
  size_t rows() const { return rows_.size(); }
  std::string str(const std::vector<std::string>& header_lines) const;

 private:
  std::vector<std::string> columns_;
  std::vector<std::vector<std::string>> rows_;
};

}  // namespace gkp
