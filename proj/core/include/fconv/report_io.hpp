#pragma once

#include <filesystem>
#include <span>
#include <string>

#include <nlohmann/json.hpp>

#include "fconv/grid_function.hpp"

namespace fconv {

/// Shortest decimal form that round-trips a double exactly.
std::string format_double(double v);

/// Two-column CSV, header "x,value", one row per fine grid sample.
void write_samples_csv(const std::filesystem::path& path, const GridFunction& g);

/// Reads a file produced by write_samples_csv back onto the given grid.
/// The abscissae must match the grid and the values round-trip bit-exact.
GridFunction read_samples_csv(const std::filesystem::path& path, const Partition& partition,
                              int samples_per_cell);

/// Row-major matrix as CSV, no header.
void write_matrix_csv(const std::filesystem::path& path, std::span<const double> values, int rows,
                      int cols);

/// Pretty-printed JSON with a trailing newline. Creates parent directories.
void write_json(const std::filesystem::path& path, const nlohmann::json& j);

}  // namespace fconv
