#pragma once

#include <json.hpp>
#include <string>

#include "hypernorm/common.hpp"

namespace hypernorm {

enum class ScalarKind { real, complex };

// Dense matrix tagged with its scalar kind. Real matrices keep a zero imaginary part.
struct Matrix {
  ScalarKind kind = ScalarKind::real;
  CMat data;

  Matrix() = default;
  explicit Matrix(const RMat& m) : kind(ScalarKind::real), data(m.cast<cplx>()) {}
  explicit Matrix(const CMat& m) : kind(ScalarKind::complex), data(m) {}

  Eigen::Index rows() const { return data.rows(); }
  Eigen::Index cols() const { return data.cols(); }
  bool is_real() const { return kind == ScalarKind::real; }
  RMat real() const;  // throws if complex with nonzero imaginary part
};

// {"rows","cols","scalar":"real"|"complex","data":[[...]]}, complex entries as [re, im].
nlohmann::json matrix_to_json(const Matrix& m);
Matrix matrix_from_json(const nlohmann::json& j);

Matrix read_matrix_file(const std::string& path);
void write_matrix_file(const std::string& path, const Matrix& m);

nlohmann::json read_json_file(const std::string& path);
void write_json_file(const std::string& path, const nlohmann::json& j);

}  // namespace hypernorm
