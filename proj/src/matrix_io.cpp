#include "symland/matrix_io.hpp"

#include "json.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <fmt/format.h>

namespace symland {
namespace {

using nlohmann::json;

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "' for reading");
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw IoError("error while reading '" + path + "'");
  return buf.str();
}

void check_shape(const Mat& m) {
  if (m.rows() == 0 || m.rows() != m.cols() || m.rows() % 2 != 0) {
    throw DimensionError(
        fmt::format("matrix must be 2N x 2N with N >= 1, got {}x{}", m.rows(), m.cols()));
  }
}

}  // namespace

MatrixFormat parse_format(const std::string& name) {
  if (name == "json") return MatrixFormat::Json;
  if (name == "csv") return MatrixFormat::Csv;
  throw ValidationError("unknown format '" + name + "' (expected json or csv)");
}

MatrixFormat format_for_path(const std::string& path) {
  const auto ext = std::filesystem::path(path).extension().string();
  return (ext == ".csv" || ext == ".CSV") ? MatrixFormat::Csv : MatrixFormat::Json;
}

Mat read_matrix(const std::string& path) { return read_matrix(path, format_for_path(path)); }

Mat read_matrix(const std::string& path, MatrixFormat format) {
  const std::string text = slurp(path);
  return format == MatrixFormat::Csv ? parse_matrix_csv(text) : parse_matrix_json(text);
}

Mat parse_matrix_json(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ValidationError(std::string("malformed JSON: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("rows") || !doc["rows"].is_array()) {
    throw ValidationError("matrix JSON must be an object with a \"rows\" array");
  }
  const auto& rows = doc["rows"];
  const auto dim = static_cast<Eigen::Index>(rows.size());
  Mat m(dim, dim);
  for (Eigen::Index i = 0; i < dim; ++i) {
    const auto& row = rows[static_cast<std::size_t>(i)];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != dim) {
      throw DimensionError(fmt::format("row {} does not have {} entries", i, dim));
    }
    for (Eigen::Index j = 0; j < dim; ++j) {
      const auto& v = row[static_cast<std::size_t>(j)];
      if (!v.is_number()) throw ValidationError(fmt::format("entry ({}, {}) is not a number", i, j));
      m(i, j) = v.get<double>();
    }
  }
  check_shape(m);
  if (doc.contains("n")) {
    if (!doc["n"].is_number_integer() || doc["n"].get<long>() * 2 != dim) {
      throw DimensionError(fmt::format("\"n\" does not match a {}x{} matrix", dim, dim));
    }
  }
  return m;
}

Mat parse_matrix_csv(const std::string& text) {
  std::vector<std::vector<double>> rows;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    std::vector<double> row;
    std::istringstream cells(line);
    std::string cell;
    while (std::getline(cells, cell, ',')) {
      try {
        std::size_t used = 0;
        row.push_back(std::stod(cell, &used));
        if (cell.find_first_not_of(" \t", used) != std::string::npos) throw std::invalid_argument(cell);
      } catch (const std::exception&) {
        throw ValidationError("CSV cell '" + cell + "' is not a number");
      }
    }
    rows.push_back(std::move(row));
  }
  const auto dim = static_cast<Eigen::Index>(rows.size());
  Mat m(dim, dim);
  for (Eigen::Index i = 0; i < dim; ++i) {
    if (static_cast<Eigen::Index>(rows[i].size()) != dim) {
      throw DimensionError(fmt::format("CSV row {} has {} entries, expected {}", i, rows[i].size(), dim));
    }
    for (Eigen::Index j = 0; j < dim; ++j) m(i, j) = rows[i][j];
  }
  check_shape(m);
  return m;
}

std::string matrix_to_json(const Mat& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  json doc = {{"n", m.rows() / 2}, {"rows", std::move(rows)}};
  return doc.dump(2) + "\n";
}

std::string matrix_to_csv(const Mat& m) {
  std::string out;
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if (j) out += ',';
      out += fmt::format("{:.17g}", m(i, j));
    }
    out += '\n';
  }
  return out;
}

void write_matrix(const std::string& path, const Mat& m, MatrixFormat format) {
  write_text_atomic(path, format == MatrixFormat::Csv ? matrix_to_csv(m) : matrix_to_json(m));
}

void write_text_atomic(const std::string& path, const std::string& text) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  const fs::path tmp = target.parent_path() / (target.filename().string() + ".tmp");
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open '" + tmp.string() + "' for writing");
    out << text;
    out.flush();
    if (!out) throw IoError("error while writing '" + tmp.string() + "'");
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw IoError("cannot move output into place at '" + path + "'");
  }
}

}  // namespace symland
