#include "pitrom/linalg.hpp"

#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace pitrom {

namespace {

// Symmetry and diagonal checks shared by all SpdMatrix constructions.
void validate_spd_storage(const SpdMatrix::Storage& m) {
  if (m.rows() != m.cols()) throw std::invalid_argument("SpdMatrix: matrix must be square");
  if (m.rows() < 1) throw std::invalid_argument("SpdMatrix: dimension must be at least 1");

  double max_abs = 0.0;
  for (int k = 0; k < m.outerSize(); ++k)
    for (SpdMatrix::Storage::InnerIterator it(m, k); it; ++it) {
      if (!std::isfinite(it.value())) throw std::invalid_argument("SpdMatrix: non-finite entry");
      max_abs = std::max(max_abs, std::abs(it.value()));
    }

  SpdMatrix::Storage diff = SpdMatrix::Storage(m.transpose()) - m;
  double max_skew = 0.0;
  for (int k = 0; k < diff.outerSize(); ++k)
    for (SpdMatrix::Storage::InnerIterator it(diff, k); it; ++it)
      max_skew = std::max(max_skew, std::abs(it.value()));
  if (max_skew > 1e-12 * std::max(max_abs, 1e-300))
    throw std::invalid_argument("SpdMatrix: matrix is not symmetric");

  for (int i = 0; i < m.rows(); ++i)
    if (m.coeff(i, i) <= 0.0)
      throw std::invalid_argument("SpdMatrix: diagonal must be strictly positive");
}

}  // namespace

SpdMatrix::SpdMatrix(Storage matrix) : matrix_(std::move(matrix)) {
  matrix_.prune([](int, int, double v) { return v != 0.0; });
  matrix_.makeCompressed();
  validate_spd_storage(matrix_);
}

SpdMatrix SpdMatrix::identity(int n) {
  Storage m(n, n);
  m.setIdentity();
  return SpdMatrix(std::move(m));
}

double SpdMatrix::norm(const Vector& x) const {
  double q = inner(x, x);
  return q > 0.0 ? std::sqrt(q) : 0.0;
}

Vector SpdMatrix::residual(const Vector& b, const Vector& x) const {
  Vector r(dim());
  for (int row = 0; row < dim(); ++row) {
    long double acc = static_cast<long double>(b(row));
    for (Storage::InnerIterator it(matrix_, row); it; ++it)
      acc -= static_cast<long double>(it.value()) * static_cast<long double>(x(it.col()));
    r(row) = static_cast<double>(acc);
  }
  return r;
}

SpdMatrix SpdMatrix::plus_scaled(const SpdMatrix& other, double factor) const {
  if (other.dim() != dim()) throw std::invalid_argument("SpdMatrix: dimension mismatch");
  Storage sum = matrix_ + factor * other.matrix_;
  return SpdMatrix(std::move(sum));
}

SvdTruncation SvdTruncation::rank_cap(int rank) {
  if (rank < 1) throw std::invalid_argument("SvdTruncation: rank must be at least 1");
  return SvdTruncation(Kind::rank_cap, rank, 0.0);
}

SvdTruncation SvdTruncation::rel_tol(double tol) {
  if (!(tol > 0.0 && tol < 1.0)) throw std::invalid_argument("SvdTruncation: tol must be in (0,1)");
  return SvdTruncation(Kind::rel_tol, 0, tol);
}

namespace {

// Thin SVD; Jacobi for small problems, divide-and-conquer otherwise.
void thin_svd(const Matrix& a, Matrix& u, Vector& sigma, Matrix& v) {
  if (std::min(a.rows(), a.cols()) <= 16) {
    Eigen::JacobiSVD<Matrix> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
    u = svd.matrixU();
    sigma = svd.singularValues();
    v = svd.matrixV();
  } else {
    Eigen::BDCSVD<Matrix> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
    u = svd.matrixU();
    sigma = svd.singularValues();
    v = svd.matrixV();
  }
}

}  // namespace

SvdResult truncated_svd(const Matrix& a, const SvdTruncation& mode) {
  if (a.rows() < 1 || a.cols() < 1) throw std::invalid_argument("truncated_svd: empty matrix");
  if (!a.allFinite()) throw std::invalid_argument("truncated_svd: non-finite entries");

  Matrix u, v;
  Vector sigma;
  thin_svd(a, u, sigma, v);

  const int min_dim = static_cast<int>(sigma.size());
  int r = 0;
  if (mode.kind() == SvdTruncation::Kind::rank_cap) {
    r = mode.rank();
    if (r > min_dim) {
      std::fprintf(stderr, "truncated_svd: requested rank %d exceeds min dimension %d, clamping\n",
                   r, min_dim);
      r = min_dim;
    }
    // Never keep exact zeros; they carry no direction information.
    while (r > 0 && sigma(r - 1) == 0.0) --r;
  } else {
    const double s1 = min_dim > 0 ? sigma(0) : 0.0;
    if (s1 > 0.0) {
      const double cut = mode.tol() * s1;
      while (r < min_dim && sigma(r) > cut) ++r;
    }
  }

  SvdResult result;
  result.left = u.leftCols(r);
  result.singular_values = sigma.head(r);
  result.right = v.leftCols(r);

  // Deterministic sign fix: first nonzero entry of each left vector >= 0.
  for (int c = 0; c < r; ++c) {
    for (int i = 0; i < result.left.rows(); ++i) {
      const double x = result.left(i, c);
      if (x != 0.0) {
        if (x < 0.0) {
          result.left.col(c) = -result.left.col(c);
          result.right.col(c) = -result.right.col(c);
        }
        break;
      }
    }
  }
  return result;
}

int numerical_rank(const Matrix& a, double rel_tol) {
  if (!(rel_tol > 0.0 && rel_tol < 1.0))
    throw std::invalid_argument("numerical_rank: rel_tol must be in (0,1)");
  Eigen::BDCSVD<Matrix> svd(a);
  const Vector& sigma = svd.singularValues();
  if (sigma.size() == 0 || sigma(0) <= 0.0) return 0;
  const double cut = rel_tol * sigma(0);
  int r = 0;
  while (r < sigma.size() && sigma(r) > cut) ++r;
  return r;
}

Matrix orthonormalize(const Matrix& v, double tol) {
  if (!(tol > 0.0)) throw std::invalid_argument("orthonormalize: tol must be positive");

  double max_col_norm = 0.0;
  for (int c = 0; c < v.cols(); ++c) max_col_norm = std::max(max_col_norm, v.col(c).norm());

  Matrix q(v.rows(), v.cols());
  int kept = 0;
  for (int c = 0; c < v.cols(); ++c) {
    Vector w = v.col(c);
    // Modified Gram-Schmidt with one re-orthogonalization pass.
    for (int pass = 0; pass < 2; ++pass)
      for (int j = 0; j < kept; ++j) w -= q.col(j).dot(w) * q.col(j);
    const double norm = w.norm();
    if (norm > tol * max_col_norm) q.col(kept++) = w / norm;
  }
  return q.leftCols(kept);
}

Vector spd_solve(const SpdMatrix& a, const Vector& b, double rel_tol) {
  if (!(rel_tol > 0.0 && rel_tol < 1.0))
    throw std::invalid_argument("spd_solve: rel_tol must be in (0,1)");
  if (b.size() != a.dim()) throw std::invalid_argument("spd_solve: size mismatch");

  const double b_norm = b.norm();
  Vector x = Vector::Zero(a.dim());
  if (b_norm == 0.0) return x;

  Vector inv_diag(a.dim());
  for (int i = 0; i < a.dim(); ++i) inv_diag(i) = 1.0 / a.storage().coeff(i, i);

  const int cap = 10 * a.dim();
  Vector r = b;
  Vector z = inv_diag.asDiagonal() * r;
  Vector p = z;
  double rz = r.dot(z);

  for (int iter = 1; iter <= cap; ++iter) {
    const Vector ap = a.apply(p);
    const double p_ap = p.dot(ap);
    if (!(p_ap > 0.0))
      throw std::runtime_error("spd_solve: matrix is not positive definite along search direction");
    const double alpha = rz / p_ap;
    x += alpha * p;
    r -= alpha * ap;

    if (r.norm() <= rel_tol * b_norm) {
      // Recurrence residual can drift; accept only the true residual.
      Vector r_true = a.residual(b, x);
      if (r_true.norm() <= rel_tol * b_norm) return x;
      r = std::move(r_true);
      z = inv_diag.asDiagonal() * r;
      p = z;
      rz = r.dot(z);
      continue;
    }

    z = inv_diag.asDiagonal() * r;
    const double rz_next = r.dot(z);
    p = z + (rz_next / rz) * p;
    rz = rz_next;
  }

  const double achieved = a.residual(b, x).norm() / b_norm;
  throw ConvergenceError("spd_solve: conjugate gradients did not converge", achieved, cap);
}

SpdSolver::SpdSolver(SpdMatrix matrix) : matrix_(std::move(matrix)) {
  const int n = matrix_.dim();
  scale_.resize(n);
  for (int i = 0; i < n; ++i) scale_(i) = 1.0 / std::sqrt(matrix_.storage().coeff(i, i));

  Eigen::SparseMatrix<double> scaled =
      scale_.asDiagonal() * Eigen::SparseMatrix<double>(matrix_.storage()) * scale_.asDiagonal();
  factorization_.compute(scaled);
  if (factorization_.info() != Eigen::Success)
    throw std::runtime_error("SpdSolver: sparse LDLT factorization failed");
}

Vector SpdSolver::solve(const Vector& b, double rel_tol) const {
  if (!(rel_tol > 0.0 && rel_tol < 1.0))
    throw std::invalid_argument("SpdSolver: rel_tol must be in (0,1)");
  if (b.size() != matrix_.dim()) throw std::invalid_argument("SpdSolver: size mismatch");

  const double b_norm = b.norm();
  if (b_norm == 0.0) return Vector::Zero(matrix_.dim());

  Vector x = scale_.asDiagonal() * factorization_.solve((scale_.asDiagonal() * b).eval());
  double best = std::numeric_limits<double>::infinity();
  int no_progress = 0;

  const int max_rounds = 10;
  for (int round = 0; round < max_rounds; ++round) {
    const Vector r = matrix_.residual(b, x);
    const double rel = r.norm() / b_norm;
    if (rel <= rel_tol) return x;
    if (rel < best) {
      best = rel;
      no_progress = 0;
    } else if (++no_progress >= 2) {
      break;
    }
    x += scale_.asDiagonal() * factorization_.solve((scale_.asDiagonal() * r).eval());
  }

  const double achieved = matrix_.residual(b, x).norm() / b_norm;
  throw ConvergenceError("SpdSolver: iterative refinement stalled", std::min(best, achieved),
                         max_rounds);
}

}  // namespace pitrom
