#pragma once

#include <memory>
#include <span>

#include "mhdmg/linalg/csr.hpp"

namespace mhdmg::linalg {

/// Sparse LU with a fill-reducing column ordering. Throws SingularMatrix with
/// the failing pivot position.
class SparseLu {
 public:
  explicit SparseLu(const CsrMatrix& a);
  ~SparseLu();
  SparseLu(SparseLu&&) noexcept;
  SparseLu& operator=(SparseLu&&) noexcept;

  int size() const { return n_; }
  void solve(std::span<const double> b, std::span<double> x) const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
  int n_ = 0;
};

}  // namespace mhdmg::linalg
