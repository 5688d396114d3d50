#pragma once

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace abqfe {

// %.17g round-trips every double exactly through strtod, keeping CSV bodies
// byte-identical across reruns with the same seed.
inline std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline std::string fmt_int(std::int64_t v) { return std::to_string(v); }

// Row-oriented CSV writer with a mandatory header. Cells are pre-rendered
// strings; LF line endings regardless of platform.
class CsvWriter {
 public:
  CsvWriter(const std::string& path, std::vector<std::string> columns)
      : path_(path), columns_(std::move(columns)), out_(path, std::ios::binary) {
    if (!out_) throw std::runtime_error("cannot open output file: " + path);
    write_row(columns_);
  }

  void row(const std::vector<std::string>& cells) {
    if (cells.size() != columns_.size())
      throw std::runtime_error("csv row width mismatch in " + path_);
    write_row(cells);
    ++rows_;
  }

  std::int64_t rows() const { return rows_; }
  const std::string& path() const { return path_; }
  const std::vector<std::string>& columns() const { return columns_; }

  void close() { out_.close(); }

 private:
  void write_row(const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) out_ << ',';
      out_ << cells[i];
    }
    out_ << '\n';
  }

  std::string path_;
  std::vector<std::string> columns_;
  std::ofstream out_;
  std::int64_t rows_ = 0;
};

}  // namespace abqfe
