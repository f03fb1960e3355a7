#include "tenet/io.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <vector>

#include "tenet/errors.hpp"

namespace tenet {

namespace {

std::vector<std::string> tokenize(const std::string& line) {
  std::string cleaned = line;
  for (char& ch : cleaned)
    if (ch == ',' || ch == '\t' || ch == ';') ch = ' ';
  std::istringstream in(cleaned);
  std::vector<std::string> tokens;
  std::string tok;
  while (in >> tok) tokens.push_back(tok);
  return tokens;
}

bool parse_double(const std::string& tok, double& out) {
  char* end = nullptr;
  out = std::strtod(tok.c_str(), &end);
  return end != nullptr && *end == '\0' && end != tok.c_str();
}

std::vector<std::vector<double>> read_rows(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open " + path);
  std::vector<std::vector<double>> rows;
  std::string line;
  bool first_content = true;
  while (std::getline(in, line)) {
    const auto tokens = tokenize(line);
    if (tokens.empty() || tokens[0][0] == '#') continue;
    std::vector<double> row;
    row.reserve(tokens.size());
    bool ok = true;
    for (const auto& tok : tokens) {
      double v;
      if (!parse_double(tok, v)) {
        ok = false;
        break;
      }
      row.push_back(v);
    }
    if (!ok) {
      if (first_content) {  // header line
        first_content = false;
        continue;
      }
      throw ConfigError("non-numeric value in " + path + ": " + line);
    }
    first_content = false;
    if (!rows.empty() && row.size() != rows.front().size())
      throw ConfigError("ragged rows in " + path);
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw ConfigError("no data rows in " + path);
  return rows;
}

}  // namespace

Matrix read_matrix(const std::string& path) {
  const auto rows = read_rows(path);
  Matrix X(rows.size(), rows.front().size());
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < rows.front().size(); ++j) X(i, j) = rows[i][j];
  return X;
}

Vector read_vector(const std::string& path) {
  const auto rows = read_rows(path);
  if (rows.front().size() != 1) throw ConfigError(path + " must have one column");
  Vector v(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) v[i] = rows[i][0];
  return v;
}

std::string format_double(double x) {
  char buf[64];
  for (int precision = 1; precision <= 17; ++precision) {
    std::snprintf(buf, sizeof(buf), "%.*g", precision, x);
    if (std::strtod(buf, nullptr) == x) break;
  }
  return buf;
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open " + path);
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write " + path);
  out << content;
}

}  // namespace tenet
