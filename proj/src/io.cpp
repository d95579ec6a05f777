#include "bifuse/io.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace bifuse {

namespace {

double parse_field(const std::string& field, size_t line, size_t col,
                   const std::string& path) {
  try {
    size_t used = 0;
    const double v = std::stod(field, &used);
    while (used < field.size() &&
           (field[used] == ' ' || field[used] == '\t' || field[used] == '\r')) {
      ++used;
    }
    if (used != field.size()) throw std::invalid_argument("trailing characters");
    return v;
  } catch (const std::exception&) {
    throw input_error(path + ": line " + std::to_string(line) + ", field " +
                      std::to_string(col) + ": cannot parse '" + field +
                      "' as a number");
  }
}

void atomic_replace(const std::string& path, const std::string& content) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw input_error("cannot open '" + tmp + "' for writing");
    out << content;
    if (!out) throw input_error("failed writing '" + tmp + "'");
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw input_error("cannot rename '" + tmp + "' to '" + path + "'");
}

}  // namespace

Matrix read_csv_matrix(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw input_error("cannot open '" + path + "'");

  std::vector<std::vector<double>> rows;
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<double> row;
    std::stringstream ss(line);
    std::string field;
    size_t col = 0;
    while (std::getline(ss, field, ',')) {
      ++col;
      row.push_back(parse_field(field, line_no, col, path));
    }
    if (!rows.empty() && row.size() != rows.front().size()) {
      throw input_error(path + ": line " + std::to_string(line_no) + " has " +
                        std::to_string(row.size()) + " fields, expected " +
                        std::to_string(rows.front().size()));
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw input_error(path + ": empty matrix");

  Matrix M(rows.size(), rows.front().size());
  for (size_t r = 0; r < rows.size(); ++r) {
    for (size_t c = 0; c < rows[r].size(); ++c) {
      M(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = rows[r][c];
    }
  }
  return M;
}

void write_csv_matrix(const std::string& path, const Matrix& M) {
  std::string content;
  content.reserve(static_cast<size_t>(M.size()) * 24);
  char buf[40];
  for (Eigen::Index r = 0; r < M.rows(); ++r) {
    for (Eigen::Index c = 0; c < M.cols(); ++c) {
      std::snprintf(buf, sizeof(buf), "%.17g", M(r, c));
      if (c) content += ',';
      content += buf;
    }
    content += '\n';
  }
  atomic_replace(path, content);
}

nlohmann::json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw input_error("cannot open '" + path + "'");
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw input_error(path + ": " + e.what());
  }
}

void write_json_atomic(const std::string& path, const nlohmann::json& j) {
  atomic_replace(path, j.dump(2) + "\n");
}

nlohmann::json assignment_to_json(const ClusterAssignment& a) {
  return nlohmann::json{{"row_labels", a.row_labels},
                        {"col_labels", a.col_labels},
                        {"n_row_clusters", count_clusters(a.row_labels)},
                        {"n_col_clusters", count_clusters(a.col_labels)}};
}

ClusterAssignment assignment_from_json(const nlohmann::json& j) {
  ClusterAssignment a;
  try {
    a.row_labels = j.at("row_labels").get<std::vector<int>>();
    a.col_labels = j.at("col_labels").get<std::vector<int>>();
  } catch (const nlohmann::json::exception& e) {
    throw input_error(std::string("bad cluster file: ") + e.what());
  }
  return a;
}

}  // namespace bifuse
