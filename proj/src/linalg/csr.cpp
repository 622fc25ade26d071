#include "mhdmg/linalg/csr.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "mhdmg/error.hpp"

namespace mhdmg::linalg {

CsrMatrix::CsrMatrix(int rows, int cols, std::vector<int> row_ptr, std::vector<int> col_idx,
                     std::vector<double> values)
    : rows_(rows),
      cols_(cols),
      row_ptr_(std::move(row_ptr)),
      col_idx_(std::move(col_idx)),
      values_(std::move(values)) {
  if (static_cast<int>(row_ptr_.size()) != rows_ + 1 || col_idx_.size() != values_.size() ||
      row_ptr_.back() != static_cast<int>(col_idx_.size())) {
    throw InvalidArgument("CsrMatrix: inconsistent arrays");
  }
  for (int i = 0; i < rows_; ++i) {
    for (int k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k) {
      if (col_idx_[k] < 0 || col_idx_[k] >= cols_) throw InvalidArgument("CsrMatrix: column out of range");
      if (k > row_ptr_[i] && col_idx_[k] <= col_idx_[k - 1]) {
        throw InvalidArgument("CsrMatrix: columns not sorted/unique in row " + std::to_string(i));
      }
    }
  }
}

CsrMatrix CsrMatrix::from_triplets(int rows, int cols, std::vector<Triplet> entries) {
  std::sort(entries.begin(), entries.end(), [](const Triplet& a, const Triplet& b) {
    return a.row != b.row ? a.row < b.row : a.col < b.col;
  });
  std::vector<int> ptr(rows + 1, 0), idx;
  std::vector<double> val;
  idx.reserve(entries.size());
  val.reserve(entries.size());
  int last_row = -1, last_col = -1;
  for (const auto& t : entries) {
    if (t.row < 0 || t.row >= rows || t.col < 0 || t.col >= cols) {
      throw InvalidArgument("from_triplets: index out of range");
    }
    if (t.row == last_row && t.col == last_col) {
      val.back() += t.value;
      continue;
    }
    idx.push_back(t.col);
    val.push_back(t.value);
    ++ptr[t.row + 1];
    last_row = t.row;
    last_col = t.col;
  }
  for (int i = 0; i < rows; ++i) ptr[i + 1] += ptr[i];
  CsrMatrix m;
  m.rows_ = rows;
  m.cols_ = cols;
  m.row_ptr_ = std::move(ptr);
  m.col_idx_ = std::move(idx);
  m.values_ = std::move(val);
  return m;
}

CsrMatrix CsrMatrix::identity(int n) {
  std::vector<int> ptr(n + 1), idx(n);
  for (int i = 0; i <= n; ++i) ptr[i] = i;
  for (int i = 0; i < n; ++i) idx[i] = i;
  return CsrMatrix(n, n, std::move(ptr), std::move(idx), std::vector<double>(n, 1.0));
}

int CsrMatrix::find(int i, int j) const {
  const auto begin = col_idx_.begin() + row_ptr_[i];
  const auto end = col_idx_.begin() + row_ptr_[i + 1];
  const auto it = std::lower_bound(begin, end, j);
  if (it == end || *it != j) return -1;
  return static_cast<int>(it - col_idx_.begin());
}

double CsrMatrix::at(int i, int j) const {
  const int k = find(i, j);
  return k < 0 ? 0.0 : values_[k];
}

void CsrMatrix::multiply(std::span<const double> x, std::span<double> y) const {
  for (int i = 0; i < rows_; ++i) {
    double s = 0.0;
    for (int k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k) s += values_[k] * x[col_idx_[k]];
    y[i] = s;
  }
}

void CsrMatrix::multiply_add(double alpha, std::span<const double> x, std::span<double> y) const {
  for (int i = 0; i < rows_; ++i) {
    double s = 0.0;
    for (int k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k) s += values_[k] * x[col_idx_[k]];
    y[i] += alpha * s;
  }
}

void CsrMatrix::multiply_transpose(std::span<const double> x, std::span<double> y) const {
  std::fill(y.begin(), y.end(), 0.0);
  for (int i = 0; i < rows_; ++i) {
    const double xi = x[i];
    if (xi == 0.0) continue;
    for (int k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k) y[col_idx_[k]] += values_[k] * xi;
  }
}

void CsrMatrix::residual(std::span<const double> b, std::span<const double> x,
                         std::span<double> r) const {
  for (int i = 0; i < rows_; ++i) {
    double s = b[i];
    for (int k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k) s -= values_[k] * x[col_idx_[k]];
    r[i] = s;
  }
}

CsrMatrix CsrMatrix::transpose() const {
  std::vector<int> ptr(cols_ + 1, 0);
  for (int c : col_idx_) ++ptr[c + 1];
  for (int j = 0; j < cols_; ++j) ptr[j + 1] += ptr[j];
  std::vector<int> idx(col_idx_.size());
  std::vector<double> val(values_.size());
  std::vector<int> next(ptr.begin(), ptr.end() - 1);
  for (int i = 0; i < rows_; ++i) {
    for (int k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k) {
      const int pos = next[col_idx_[k]]++;
      idx[pos] = i;
      val[pos] = values_[k];
    }
  }
  CsrMatrix t;
  t.rows_ = cols_;
  t.cols_ = rows_;
  t.row_ptr_ = std::move(ptr);
  t.col_idx_ = std::move(idx);
  t.values_ = std::move(val);
  return t;
}

void CsrMatrix::set_zero() { std::fill(values_.begin(), values_.end(), 0.0); }

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double norm2(std::span<const double> a) { return std::sqrt(dot(a, a)); }

void axpy(double alpha, std::span<const double> x, std::span<double> y) {
  for (std::size_t i = 0; i < x.size(); ++i) y[i] += alpha * x[i];
}

}  // namespace mhdmg::linalg
