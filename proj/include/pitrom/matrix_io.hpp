#pragma once

#include "pitrom/linalg.hpp"

#include <filesystem>
#include <iosfwd>
#include <string>

namespace pitrom {

/// Full-precision (17 significant digits) decimal formatting used by every
/// text file the toolkit writes, so that identical runs produce identical
/// bytes.
std::string format_double(double value);

/// Plain-text matrix format: first line "rows cols", then one row per line
/// with whitespace-separated full-precision values.
void write_matrix(std::ostream& out, const Matrix& m);
void write_matrix(const std::filesystem::path& path, const Matrix& m);

Matrix read_matrix(std::istream& in);
Matrix read_matrix(const std::filesystem::path& path);

}  // namespace pitrom
