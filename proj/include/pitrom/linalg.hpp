#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>

#include <stdexcept>
#include <string>

namespace pitrom {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Thrown when a linear solve cannot reach the requested residual within its
/// iteration budget. Carries the relative residual that was achieved.
class ConvergenceError : public std::runtime_error {
public:
  ConvergenceError(const std::string& what, double achieved, int iterations)
      : std::runtime_error(what), achieved_(achieved), iterations_(iterations) {}

  double achieved_residual() const { return achieved_; }
  int iterations() const { return iterations_; }

private:
  double achieved_;
  int iterations_;
};

/// Sparse symmetric positive-definite matrix in compressed row storage.
/// Construction checks symmetry (1e-12 relative), a strictly positive
/// diagonal, and drops explicitly stored zeros.
class SpdMatrix {
public:
  using Storage = Eigen::SparseMatrix<double, Eigen::RowMajor>;

  explicit SpdMatrix(Storage matrix);

  static SpdMatrix identity(int n);

  int dim() const { return static_cast<int>(matrix_.rows()); }
  const Storage& storage() const { return matrix_; }

  Vector apply(const Vector& x) const { return matrix_ * x; }
  double inner(const Vector& x, const Vector& y) const { return x.dot(matrix_ * y); }
  double norm(const Vector& x) const;

  /// b - A x with extended-precision row accumulation, so residual checks are
  /// not limited by the double-precision evaluation noise of A x.
  Vector residual(const Vector& b, const Vector& x) const;

  /// this + factor * other (same dimension required).
  SpdMatrix plus_scaled(const SpdMatrix& other, double factor) const;

private:
  Storage matrix_;
};

struct SvdResult {
  Matrix left;             // rows x rank, column-orthonormal
  Vector singular_values;  // nonincreasing, strictly positive
  Matrix right;            // cols x rank, column-orthonormal

  int rank() const { return static_cast<int>(singular_values.size()); }
};

/// Truncation rule for truncated_svd: a fixed rank cap or a relative
/// singular-value threshold.
class SvdTruncation {
public:
  enum class Kind { rank_cap, rel_tol };

  static SvdTruncation rank_cap(int rank);
  static SvdTruncation rel_tol(double tol);

  Kind kind() const { return kind_; }
  int rank() const { return rank_; }
  double tol() const { return tol_; }

private:
  SvdTruncation(Kind kind, int rank, double tol) : kind_(kind), rank_(rank), tol_(tol) {}
  Kind kind_;
  int rank_;
  double tol_;
};

/// Truncated singular value decomposition with a deterministic sign
/// convention: the first nonzero entry of every left singular vector is
/// nonnegative. With rel_tol(t) only singular values above t * sigma_1 are
/// kept; a zero matrix yields an empty (rank 0) result.
SvdResult truncated_svd(const Matrix& a, const SvdTruncation& mode);

/// Largest r with sigma_r > rel_tol * sigma_1 (0 for a zero matrix).
int numerical_rank(const Matrix& a, double rel_tol);

/// Column-orthonormal matrix spanning the numerical range of v. Columns whose
/// residual after projection onto the accepted columns has norm at most
/// tol * (largest input column norm) are dropped.
Matrix orthonormalize(const Matrix& v, double tol);

/// Preconditioned conjugate gradients with a Jacobi preconditioner and an
/// iteration cap of 10 * dim. On success the true residual satisfies
/// |A x - b| <= rel_tol * |b|; otherwise a ConvergenceError carrying the
/// achieved residual is thrown.
Vector spd_solve(const SpdMatrix& a, const Vector& b, double rel_tol);

/// Factorization-backed solver for repeated right-hand sides with one matrix:
/// sparse LDLT on the symmetrically Jacobi-scaled matrix plus iterative
/// refinement until the true residual meets the requested tolerance.
class SpdSolver {
public:
  explicit SpdSolver(SpdMatrix matrix);

  const SpdMatrix& matrix() const { return matrix_; }
  Vector solve(const Vector& b, double rel_tol) const;

private:
  SpdMatrix matrix_;
  Vector scale_;  // diag(A)^{-1/2}
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> factorization_;
};

}  // namespace pitrom
