#pragma once

#include <string>

#include "tenet/model.hpp"

namespace tenet {

// Delimited text, row-major. Separators: whitespace and commas. Lines that
// are empty or start with '#' are skipped, as is a leading header line whose
// first token is not a number.
Matrix read_matrix(const std::string& path);

// single column (or one value per line)
Vector read_vector(const std::string& path);

// shortest exact decimal form; identical bytes for identical doubles
std::string format_double(double x);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

}  // namespace tenet
