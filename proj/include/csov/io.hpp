#pragma once

#include <string>
#include <vector>

namespace csov {

// "%.17g", so the same value always prints the same bytes
std::string format_double(double v);

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  void add_row(std::vector<std::string> row);
  std::string str() const;
};

// Writes to a temporary sibling and renames it over `path`.
void write_atomic(const std::string& path, const std::string& content);

// "lo:hi:n" -> n evenly spaced values (n >= 1; n == 1 gives lo)
std::vector<double> parse_range(const std::string& text);
std::vector<double> linspace(double lo, double hi, int n);

}  // namespace csov
