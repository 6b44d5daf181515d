#include "qtop/csv.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "qtop/errors.hpp"

namespace qtop {

std::string format_real(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& columns) {
  if (header.size() != columns.size()) {
    throw ValidationError("csv header and column counts differ");
  }
  const std::size_t rows = columns.empty() ? 0 : columns.front().size();
  for (const auto& c : columns) {
    if (c.size() != rows) throw ValidationError("csv columns have unequal lengths");
  }
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path);
  for (std::size_t c = 0; c < header.size(); ++c) {
    out << (c ? "," : "") << header[c];
  }
  out << "\n";
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < columns.size(); ++c) {
      out << (c ? "," : "") << format_real(columns[c][r]);
    }
    out << "\n";
  }
  if (!out) throw IoError("write failed for " + path);
}

CsvTable read_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  CsvTable table;
  std::string line;
  if (!std::getline(in, line)) throw ValidationError("empty csv " + path);
  if (line.size() >= 3 && line.compare(0, 3, "\xEF\xBB\xBF") == 0) line.erase(0, 3);
  {
    std::istringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) table.header.push_back(cell);
  }
  table.columns.resize(table.header.size());
  int row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (line.empty()) continue;
    std::istringstream ss(line);
    std::string cell;
    std::size_t c = 0;
    while (std::getline(ss, cell, ',')) {
      if (c >= table.columns.size()) {
        throw ValidationError(path + " row " + std::to_string(row) + " has extra cells");
      }
      try {
        table.columns[c].push_back(std::stod(cell));
      } catch (const std::exception&) {
        throw ValidationError(path + " row " + std::to_string(row) + ": cannot parse '" + cell +
                              "'");
      }
      ++c;
    }
    if (c != table.columns.size()) {
      throw ValidationError(path + " row " + std::to_string(row) + " is short");
    }
  }
  return table;
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path);
  out << content;
  if (!out) throw IoError("write failed for " + path);
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_svg_chart(const std::string& path, std::span<const double> x,
                     std::span<const double> y, const std::string& title) {
  if (x.size() != y.size() || x.empty()) {
    throw ValidationError("svg chart needs equal-length nonempty series");
  }
  const double xmin = *std::min_element(x.begin(), x.end());
  const double xmax = *std::max_element(x.begin(), x.end());
  const double ymin = std::min(0.0, *std::min_element(y.begin(), y.end()));
  const double ymax = std::max(1e-300, *std::max_element(y.begin(), y.end()));
  const double w = 640, h = 400, pad = 40;
  auto px = [&](double v) { return pad + (v - xmin) / (xmax - xmin + 1e-300) * (w - 2 * pad); };
  auto py = [&](double v) { return h - pad - (v - ymin) / (ymax - ymin + 1e-300) * (h - 2 * pad); };
  std::ostringstream svg;
  svg << "<svg xmlns='http://www.w3.org/2000/svg' width='" << w << "' height='" << h << "'>\n";
  svg << "<rect width='100%' height='100%' fill='white'/>\n";
  svg << "<text x='" << w / 2 << "' y='20' text-anchor='middle' font-size='14'>" << title
      << "</text>\n";
  svg << "<polyline fill='none' stroke='black' stroke-width='1' points='";
  for (std::size_t j = 0; j < x.size(); ++j) {
    svg << px(x[j]) << "," << py(y[j]) << " ";
  }
  svg << "'/>\n</svg>\n";
  write_text_file(path, svg.str());
}

}  // namespace qtop
