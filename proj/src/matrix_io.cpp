#include "hypernorm/matrix_io.hpp"

#include <cmath>
#include <fstream>

namespace hypernorm {

using nlohmann::json;

RMat Matrix::real() const {
  if (kind == ScalarKind::complex)
    require(data.imag().cwiseAbs().maxCoeff() == 0.0, "expected a real matrix");
  return data.real();
}

json matrix_to_json(const Matrix& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if (m.is_real())
        row.push_back(m.data(i, j).real());
      else
        row.push_back(json::array({m.data(i, j).real(), m.data(i, j).imag()}));
    }
    rows.push_back(row);
  }
  return json{{"rows", m.rows()}, {"cols", m.cols()}, {"scalar", m.is_real() ? "real" : "complex"}, {"data", rows}};
}

Matrix matrix_from_json(const json& j) {
  require(j.is_object() && j.contains("rows") && j.contains("cols") && j.contains("data"),
          "matrix json: missing rows/cols/data");
  int rows = j.at("rows").get<int>();
  int cols = j.at("cols").get<int>();
  require(rows >= 0 && cols >= 0, "matrix json: negative size");
  std::string scalar = j.value("scalar", "real");
  require(scalar == "real" || scalar == "complex", "matrix json: scalar must be real or complex");
  const json& data = j.at("data");
  require(data.is_array() && static_cast<int>(data.size()) == rows, "matrix json: row count mismatch");
  Matrix m;
  m.kind = scalar == "real" ? ScalarKind::real : ScalarKind::complex;
  m.data = CMat::Zero(rows, cols);
  for (int i = 0; i < rows; ++i) {
    const json& row = data[i];
    require(row.is_array() && static_cast<int>(row.size()) == cols, "matrix json: column count mismatch");
    for (int c = 0; c < cols; ++c) {
      const json& e = row[c];
      cplx v;
      if (m.kind == ScalarKind::real) {
        require(e.is_number(), "matrix json: real entry must be a number");
        v = e.get<double>();
      } else {
        require(e.is_array() && e.size() == 2, "matrix json: complex entry must be [re, im]");
        v = cplx(e[0].get<double>(), e[1].get<double>());
      }
      require(std::isfinite(v.real()) && std::isfinite(v.imag()), "matrix json: non-finite entry");
      m.data(i, c) = v;
    }
  }
  return m;
}

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  require(in.good(), "cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw PreconditionError("malformed json in " + path + ": " + e.what());
  }
}

void write_json_file(const std::string& path, const json& j) {
  std::ofstream out(path);
  require(out.good(), "cannot write " + path);
  out << j.dump(2) << "\n";
}

Matrix read_matrix_file(const std::string& path) {
  try {
    return matrix_from_json(read_json_file(path));
  } catch (const json::exception& e) {
    throw PreconditionError("malformed matrix file " + path + ": " + e.what());
  }
}

void write_matrix_file(const std::string& path, const Matrix& m) { write_json_file(path, matrix_to_json(m)); }

}  // namespace hypernorm
