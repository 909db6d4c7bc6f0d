#include "gapflight/csv.hpp"

#include <cstdio>
#include <stdexcept>

namespace gapflight {

CsvWriter::CsvWriter(const std::string& path, const std::vector<std::string>& columns) {
  open(path, columns);
}

void CsvWriter::open(const std::string& path, const std::vector<std::string>& columns) {
  out_.open(path, std::ios::trunc);
  if (!out_) throw std::runtime_error("cannot open csv for writing: " + path);
  n_cols_ = columns.size();
  for (size_t i = 0; i < columns.size(); ++i) {
    if (i) out_ << ',';
    out_ << columns[i];
  }
  out_ << '\n';
}

std::string CsvWriter::format_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.10g", v);
  return buf;
}

void CsvWriter::write_row(const std::vector<double>& cells) {
  if (cells.size() != n_cols_) throw std::runtime_error("csv row width mismatch");
  for (size_t i = 0; i < cells.size(); ++i) {
    if (i) out_ << ',';
    out_ << format_number(cells[i]);
  }
  out_ << '\n';
}

void CsvWriter::write_raw_row(const std::vector<std::string>& cells) {
  if (cells.size() != n_cols_) throw std::runtime_error("csv row width mismatch");
  for (size_t i = 0; i < cells.size(); ++i) {
    if (i) out_ << ',';
    out_ << cells[i];
  }
  out_ << '\n';
}

}  // namespace gapflight
