#include "fconv/report_io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>
#include <vector>

namespace fconv {

namespace {

void ensure_parent(const std::filesystem::path& path) {
  const auto dir = path.parent_path();
  if (!dir.empty()) std::filesystem::create_directories(dir);
}

std::ofstream open_out(const std::filesystem::path& path) {
  ensure_parent(path);
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path.string());
  return out;
}

double parse_field(std::string_view field, const std::filesystem::path& path, std::size_t line) {
  double v = 0.0;
  const auto* begin = field.data();
  const auto* end = begin + field.size();
  const auto [ptr, ec] = std::from_chars(begin, end, v);
  if (ec != std::errc{} || ptr != end)
    throw std::runtime_error(path.string() + ":" + std::to_string(line) + ": bad number '" +
                             std::string(field) + "'");
  return v;
}

}  // namespace

std::string format_double(double v) {
  char buf[32];
  for (int precision = 15; precision <= 17; ++precision) {
    std::snprintf(buf, sizeof buf, "%.*g", precision, v);
    double back = 0.0;
    std::from_chars(buf, buf + std::char_traits<char>::length(buf), back);
    if (back == v || (std::isnan(back) && std::isnan(v))) break;
  }
  return buf;
}

void write_samples_csv(const std::filesystem::path& path, const GridFunction& g) {
  auto out = open_out(path);
  out << "x,value\n";
  for (int j = 0; j < g.size(); ++j)
    out << format_double(g.abscissa(j)) << ',' << format_double(g[j]) << '\n';
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

GridFunction read_samples_csv(const std::filesystem::path& path, const Partition& partition,
                              int samples_per_cell) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open for reading: " + path.string());
  std::string line;
  if (!std::getline(in, line) || line != "x,value")
    throw std::runtime_error(path.string() + ": missing 'x,value' header");

  const GridFunction grid = GridFunction::zero(partition, samples_per_cell);
  std::vector<double> values;
  values.reserve(static_cast<std::size_t>(grid.size()));
  const double span = partition.length();
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos)
      throw std::runtime_error(path.string() + ":" + std::to_string(lineno) + ": expected 2 fields");
    const double x = parse_field(std::string_view(line).substr(0, comma), path, lineno);
    const double v = parse_field(std::string_view(line).substr(comma + 1), path, lineno);
    const auto j = static_cast<int>(values.size());
    if (j >= grid.size())
      throw std::runtime_error(path.string() + ": more rows than grid samples");
    if (std::abs(x - grid.abscissa(j)) > 1e-12 * std::max(1.0, span))
      throw std::runtime_error(path.string() + ":" + std::to_string(lineno) +
                               ": abscissa does not match the grid");
    values.push_back(v);
  }
  if (static_cast<int>(values.size()) != grid.size())
    throw std::runtime_error(path.string() + ": fewer rows than grid samples");
  return GridFunction(partition, samples_per_cell, std::move(values));
}

void write_matrix_csv(const std::filesystem::path& path, std::span<const double> values, int rows,
                      int cols) {
  if (rows < 0 || cols < 0 || values.size() != static_cast<std::size_t>(rows) * cols)
    throw std::invalid_argument("matrix dimensions do not match the value count");
  auto out = open_out(path);
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) {
      if (c) out << ',';
      out << format_double(values[static_cast<std::size_t>(r) * cols + c]);
    }
    out << '\n';
  }
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

void write_json(const std::filesystem::path& path, const nlohmann::json& j) {
  auto out = open_out(path);
  out << j.dump(2) << '\n';
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

}  // namespace fconv
