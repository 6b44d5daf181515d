#pragma once

#include <span>
#include <string>
#include <vector>

namespace qtop {

/// Round-trip-safe real formatting: 17 significant digits, '.' separator.
std::string format_real(double x);

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> columns;
};

/// Writes header + column-major data; every cell through format_real.
void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& columns);

/// Reads a numeric CSV with a header row into column-major form.
CsvTable read_csv(const std::string& path);

void write_text_file(const std::string& path, const std::string& content);
std::string read_text_file(const std::string& path);

/// Minimal dependency-free SVG polyline chart.
void write_svg_chart(const std::string& path, std::span<const double> x,
                     std::span<const double> y, const std::string& title);

}  // namespace qtop
