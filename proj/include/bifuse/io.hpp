#pragma once

#include <string>

#include <json.hpp>

#include "bifuse/types.hpp"

namespace bifuse {

/// Headerless comma-separated matrix, one row per line. Parse failures
/// raise input_error naming the line and field.
Matrix read_csv_matrix(const std::string& path);

/// Writes with 17 significant digits and LF line endings, atomically
/// (temporary file + rename).
void write_csv_matrix(const std::string& path, const Matrix& M);

nlohmann::json read_json_file(const std::string& path);
void write_json_atomic(const std::string& path, const nlohmann::json& j);

nlohmann::json assignment_to_json(const ClusterAssignment& a);
ClusterAssignment assignment_from_json(const nlohmann::json& j);

}  // namespace bifuse
