#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "ftjc/observables.hpp"

namespace ftjc {

/// Shortest decimal text that parses back to the same double.
std::string format_double(double x);

/// Tab-separated table with one header line.
struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
};

std::string render_table(const Table& table);
/// Throws Error{io} on malformed text.
Table parse_table(std::string_view text);

/// First line: resolution and ranges; then one line per imaginary-axis row.
std::string render_husimi(const HusimiGrid& grid);
HusimiGrid parse_husimi(std::string_view text);

/// Lower-case hex SHA-256 digest.
std::string sha256_hex(std::string_view bytes);

/// Both throw Error{io} on failure.
void write_text_file(const std::filesystem::path& path, std::string_view content);
std::string read_text_file(const std::filesystem::path& path);

}  // namespace ftjc
