#pragma once

#include <span>
#include <vector>

namespace mhdmg::linalg {

using Vector = std::vector<double>;

struct Triplet {
  int row;
  int col;
  double value;
};

/// Compressed sparse row matrix; column indices are sorted and unique per row.
class CsrMatrix {
 public:
  CsrMatrix() = default;
  CsrMatrix(int rows, int cols, std::vector<int> row_ptr, std::vector<int> col_idx,
            std::vector<double> values);

  /// Duplicate entries are summed; explicit zeros are kept.
  static CsrMatrix from_triplets(int rows, int cols, std::vector<Triplet> entries);
  static CsrMatrix identity(int n);

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  int nnz() const { return static_cast<int>(col_idx_.size()); }

  std::span<const int> row_ptr() const { return row_ptr_; }
  std::span<const int> col_idx() const { return col_idx_; }
  std::span<const double> values() const { return values_; }
  std::span<double> values() { return values_; }

  /// Position of (i, j) in values(), or -1 when structurally absent.
  int find(int i, int j) const;
  double at(int i, int j) const;

  void multiply(std::span<const double> x, std::span<double> y) const;
  /// y += alpha * A x
  void multiply_add(double alpha, std::span<const double> x, std::span<double> y) const;
  void multiply_transpose(std::span<const double> x, std::span<double> y) const;
  /// r = b - A x
  void residual(std::span<const double> b, std::span<const double> x, std::span<double> r) const;

  CsrMatrix transpose() const;
  void set_zero();

 private:
  int rows_ = 0;
  int cols_ = 0;
  std::vector<int> row_ptr_{0};
  std::vector<int> col_idx_;
  std::vector<double> values_;
};

double dot(std::span<const double> a, std::span<const double> b);
double norm2(std::span<const double> a);
/// y += alpha * x
void axpy(double alpha, std::span<const double> x, std::span<double> y);

}  // namespace mhdmg::linalg
