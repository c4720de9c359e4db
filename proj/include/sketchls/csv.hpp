#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "sketchls/linalg.hpp"

namespace sketchls::csv {

/// Numeric table with a header row.
struct Table {
    std::vector<std::string> header;
    Matrix values;
};

/// Parses RFC-4180 text whose fields (after the header) are all numeric.
/// Throws ParseError naming the 1-based line and column.
Table parse(const std::string& text, const std::string& source = "<memory>");
Table read(const std::filesystem::path& path);

/// Shortest round-tripping decimal (17 significant digits).
std::string format_double(double v);

/// Quotes a field when it contains a comma, quote or newline.
std::string escape(const std::string& field);

/// Writes via a temporary file in the same directory and renames it into place.
void write_atomic(const std::filesystem::path& path, const std::string& contents);

std::string render(const std::vector<std::string>& header, const Matrix& values);

}  // namespace sketchls::csv
