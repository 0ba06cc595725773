#pragma once

// Matrix files: JSON {"n": N, "rows": [[...], ...]} (canonical) or CSV with
// 2N rows of 2N comma-separated decimals.

#include <string>

#include "symland/sympcore.hpp"

namespace symland {

enum class MatrixFormat { Json, Csv };

/// Parses "json" / "csv"; throws ValidationError otherwise.
MatrixFormat parse_format(const std::string& name);

/// Picks the format from the file extension (.csv -> CSV, else JSON).
MatrixFormat format_for_path(const std::string& path);

/// Reads a square even-dimension matrix. IoError if the file cannot be
/// opened, ValidationError on malformed content, DimensionError on shape.
Mat read_matrix(const std::string& path);
Mat read_matrix(const std::string& path, MatrixFormat format);

Mat parse_matrix_json(const std::string& text);
Mat parse_matrix_csv(const std::string& text);

std::string matrix_to_json(const Mat& m);
std::string matrix_to_csv(const Mat& m);

void write_matrix(const std::string& path, const Mat& m, MatrixFormat format);

/// Writes through a temporary file in the same directory, then renames.
void write_text_atomic(const std::string& path, const std::string& text);

}  // namespace symland
