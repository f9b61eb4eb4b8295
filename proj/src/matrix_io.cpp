#include "pitrom/matrix_io.hpp"

#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>

namespace pitrom {

std::string format_double(double value) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

void write_matrix(std::ostream& out, const Matrix& m) {
  out << m.rows() << ' ' << m.cols() << '\n';
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if (j) out << ' ';
      out << format_double(m(i, j));
    }
    out << '\n';
  }
}

void write_matrix(const std::filesystem::path& path, const Matrix& m) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("write_matrix: cannot open " + path.string());
  write_matrix(out, m);
  if (!out) throw std::runtime_error("write_matrix: write failed for " + path.string());
}

Matrix read_matrix(std::istream& in) {
  Eigen::Index rows = 0, cols = 0;
  if (!(in >> rows >> cols) || rows < 0 || cols < 0)
    throw std::runtime_error("read_matrix: malformed header");
  Matrix m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index j = 0; j < cols; ++j)
      if (!(in >> m(i, j))) throw std::runtime_error("read_matrix: truncated data");
  return m;
}

Matrix read_matrix(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("read_matrix: cannot open " + path.string());
  return read_matrix(in);
}

}  // namespace pitrom
