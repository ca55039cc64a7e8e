#include "tmac/csv.hpp"

#include <array>
#include <charconv>
#include <sstream>
#include <stdexcept>

namespace tmac {

std::string format_number(double v) {
  std::array<char, 64> buf{};
  auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  if (ec != std::errc()) throw std::runtime_error("format_number: conversion failed");
  return std::string(buf.data(), end);
}

std::string format_number(long long v) {
  std::array<char, 32> buf{};
  auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  if (ec != std::errc()) throw std::runtime_error("format_number: conversion failed");
  return std::string(buf.data(), end);
}

void CsvTable::add_row(std::vector<std::string> row) {
  if (row.size() != header_.size()) {
    throw std::invalid_argument("CsvTable: row width does not match header");
  }
  rows_.push_back(std::move(row));
}

void CsvTable::write(std::ostream& out) const {
  auto line = [&out](const std::vector<std::string>& cells) {
    for (std::size_t k = 0; k < cells.size(); ++k) {
      if (k) out << ',';
      out << cells[k];
    }
    out << '\n';
  };
  line(header_);
  for (const auto& r : rows_) line(r);
}

std::string CsvTable::str() const {
  std::ostringstream out;
  write(out);
  return out.str();
}

}  // namespace tmac
