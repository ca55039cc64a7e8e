#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace tmac {

// Shortest round-trip representation with '.' as decimal separator,
// independent of the global locale.
std::string format_number(double v);
std::string format_number(long long v);
inline std::string format_number(int v) { return format_number(static_cast<long long>(v)); }

class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> header) : header_(std::move(header)) {}

  // Throws std::invalid_argument when the width differs from the header.
  void add_row(std::vector<std::string> row);

  const std::vector<std::string>& header() const { return header_; }
  const std::vector<std::vector<std::string>>& rows() const { return rows_; }

  void write(std::ostream& out) const;
  std::string str() const;

 private:
  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

}  // namespace tmac
