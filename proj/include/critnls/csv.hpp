#ifndef CRITNLS_CSV_HPP
#define CRITNLS_CSV_HPP

#include <cstdio>
#include <fstream>
#include <string>
#include <vector>

#include "critnls/errors.hpp"

namespace critnls {

// shortest round-trip-exact decimal; byte-stable for identical doubles
inline std::string fmt_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

// Column-checked CSV emitter: header first, every row the same width,
// doubles printed with fmt_double so identical runs give identical bytes.
class CsvWriter {
 public:
  explicit CsvWriter(const std::string& path) : out_(path), path_(path) {
    if (!out_) throw Error(ErrorCode::IOFailure, "cannot open " + path);
  }

  void header(const std::vector<std::string>& cols) {
    ncols_ = cols.size();
    for (std::size_t i = 0; i < cols.size(); ++i)
      out_ << (i ? "," : "") << cols[i];
    out_ << "\n";
  }

  void row(const std::vector<std::string>& cells) {
    if (cells.size() != ncols_)
      throw Error(ErrorCode::IOFailure,
                  path_ + ": row width " + std::to_string(cells.size()) +
                      " != header width " + std::to_string(ncols_));
    for (std::size_t i = 0; i < cells.size(); ++i)
      out_ << (i ? "," : "") << cells[i];
    out_ << "\n";
  }

  void row(const std::vector<double>& vals) {
    std::vector<std::string> cells;
    cells.reserve(vals.size());
    for (double v : vals) cells.push_back(fmt_double(v));
    row(cells);
  }

 private:
  std::ofstream out_;
  std::string path_;
  std::size_t ncols_ = 0;
};

}  // namespace critnls

#endif  // CRITNLS_CSV_HPP
