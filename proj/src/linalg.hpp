#ifndef TRAJMAP_SRC_LINALG_HPP
#define TRAJMAP_SRC_LINALG_HPP

#include <cstddef>
#include <span>
#include <vector>

namespace trajmap::detail {

/// Small dense row-major matrix. Sized for polynomial design matrices.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols, 0.0) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

/// AᵀA for a tall matrix.
Matrix gram(const Matrix& a);

/// Eigenvalues of a symmetric matrix by cyclic Jacobi rotations, ascending.
std::vector<double> symmetric_eigenvalues(Matrix s);

/// 2-norm condition number of AᵀA (λmax/λmin); +inf when singular.
double normal_condition(const Matrix& a);

/// Least-squares solve of A·x ≈ b for each right-hand side via Householder QR.
/// A must have full column rank (checked by the caller).
std::vector<std::vector<double>> least_squares(Matrix a, std::vector<std::vector<double>> rhs);

}  // namespace trajmap::detail

#endif  // TRAJMAP_SRC_LINALG_HPP
