#pragma once

#include <string>
#include <vector>

#include "mdlcomp/types.hpp"

namespace mdlcomp::io {

/// Headerless comma-separated numeric matrix; every row must have the same
/// number of cells.
Matrix read_matrix_csv(const std::string& path);

/// A vector stored either as one value per line or as a single row.
Vector read_vector_csv(const std::string& path);

void write_matrix_csv(const std::string& path, const Matrix& m);
void write_vector_csv(const std::string& path, const Vector& v);

/// Decimal with 12 significant digits; "inf", "-inf", "nan" for non-finite.
std::string format_number(double value);

/// Splits one CSV line on commas and trims surrounding whitespace.
std::vector<std::string> split_csv_line(const std::string& line);

/// Parses a whole cell as a double; throws InputError otherwise.
double parse_number(const std::string& cell);

void write_text_file(const std::string& path, const std::string& content);

}  // namespace mdlcomp::io
