#pragma once

#include <fstream>
#include <string>
#include <vector>

namespace gapflight {

// Small CSV emitter with deterministic number formatting ("%.10g"), so repeated
// runs with the same seed produce byte-identical files.
class CsvWriter {
 public:
  CsvWriter() = default;
  CsvWriter(const std::string& path, const std::vector<std::string>& columns);

  void open(const std::string& path, const std::vector<std::string>& columns);
  bool is_open() const { return out_.is_open(); }

  void write_row(const std::vector<double>& cells);
  // Mixed row: strings are written verbatim (caller is responsible for quoting).
  void write_raw_row(const std::vector<std::string>& cells);
  void flush() { out_.flush(); }

  static std::string format_number(double v);

 private:
  std::ofstream out_;
  size_t n_cols_ = 0;
};

}  // namespace gapflight
