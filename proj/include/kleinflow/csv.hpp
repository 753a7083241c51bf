#pragma once

#include <cstdio>
#include <fstream>
#include <initializer_list>
#include <stdexcept>
#include <string>
#include <vector>

namespace kleinflow {

inline std::string format_g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

/// Ordered CSV emission: '#' comment lines, one mandatory header row, then
/// data rows; LF line endings, 17 significant digits.
class CsvWriter {
public:
  explicit CsvWriter(const std::string& path) : out_(path, std::ios::binary) {
    if (!out_) throw std::runtime_error("cannot open for writing: " + path);
  }

  void comment(const std::string& line) { out_ << "# " << line << "\n"; }

  void header(const std::vector<std::string>& cols) { write_cells(cols); }

  void row(std::initializer_list<double> values) {
    std::string line;
    bool first = true;
    for (double v : values) {
      if (!first) line += ',';
      line += format_g17(v);
      first = false;
    }
    out_ << line << "\n";
  }

  void row_cells(const std::vector<std::string>& cells) { write_cells(cells); }

private:
  void write_cells(const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) out_ << ',';
      out_ << cells[i];
    }
    out_ << "\n";
  }

  std::ofstream out_;
};

}  // namespace kleinflow
