#include "zrplab/csv.hpp"

#include <cstdio>

#include "zrplab/errors.hpp"

namespace zrplab {

std::string format_double(double v) {
  char buf[40];
  // Shortest representation that round-trips: try increasing precision.
  for (int prec = 1; prec <= 17; ++prec) {
    std::snprintf(buf, sizeof(buf), "%.*g", prec, v);
    double back = 0.0;
    std::sscanf(buf, "%lf", &back);
    if (back == v) return buf;
  }
  return buf;
}

CsvWriter::CsvWriter() : to_memory_(true) {}

CsvWriter::CsvWriter(const std::string& path) : file_(path, std::ios::binary) {
  if (!file_) throw Error("cannot open output file: " + path);
}

CsvWriter CsvWriter::in_memory() { return CsvWriter(); }

void CsvWriter::put(const std::string& s) {
  if (to_memory_)
    buffer_ += s;
  else
    file_ << s;
}

void CsvWriter::comment(const std::string& text) { put("# " + text + "\n"); }

void CsvWriter::header(std::initializer_list<const char*> names) {
  bool first = true;
  for (const char* n : names) {
    if (!first) put(",");
    put(n);
    first = false;
  }
  put("\n");
}

void CsvWriter::field(double v) {
  if (row_open_) put(",");
  put(format_double(v));
  row_open_ = true;
}

void CsvWriter::field(long long v) {
  if (row_open_) put(",");
  put(std::to_string(v));
  row_open_ = true;
}

void CsvWriter::field(const std::string& v) {
  if (row_open_) put(",");
  put(v);
  row_open_ = true;
}

void CsvWriter::end_row() {
  put("\n");
  row_open_ = false;
}

std::string CsvWriter::str() const { return buffer_; }

}  // namespace zrplab
