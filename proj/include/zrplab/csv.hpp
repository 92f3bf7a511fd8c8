#pragma once

#include <cstdint>
#include <fstream>
#include <initializer_list>
#include <string>

namespace zrplab {

/// Shortest round-trip decimal representation ("%.17g" trimmed) so identical
/// values serialize to identical bytes regardless of worker count.
std::string format_double(double v);

/// Minimal CSV writer: "# ..." comment lines, one header line, then rows.
class CsvWriter {
public:
  explicit CsvWriter(const std::string& path);

  void comment(const std::string& text);
  void header(std::initializer_list<const char*> names);

  void field(double v);
  void field(long long v);
  void field(const std::string& v);
  void end_row();

  std::string str() const;  // only for in-memory writers
  static CsvWriter in_memory();

private:
  CsvWriter();
  std::ofstream file_;
  std::string buffer_;
  bool to_memory_ = false;
  bool row_open_ = false;
  void put(const std::string& s);
};

}  // namespace zrplab
