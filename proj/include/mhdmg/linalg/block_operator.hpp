#pragma once

#include <span>
#include <vector>

#include "mhdmg/linalg/csr.hpp"

namespace mhdmg::linalg {

/// The 4x4 saddle-point operator built from its six nonzero blocks; the
/// off-diagonal constraint blocks B^T and C^T are applied as transposes.
/// `pr_diagonal` holds the (p, r) diagonal, nonzero only on constrained rows.
class BlockOperator {
 public:
  BlockOperator(CsrMatrix F, CsrMatrix Z, CsrMatrix Y, CsrMatrix D, CsrMatrix B, CsrMatrix C,
                std::vector<double> pr_diagonal);

  int size() const { return nu_ + nb_ + np_ + nr_; }
  void apply(std::span<const double> x, std::span<double> y) const;

  const CsrMatrix& F() const { return F_; }
  const CsrMatrix& Z() const { return Z_; }
  const CsrMatrix& Y() const { return Y_; }
  const CsrMatrix& D() const { return D_; }
  const CsrMatrix& B() const { return B_; }
  const CsrMatrix& C() const { return C_; }

 private:
  CsrMatrix F_, Z_, Y_, D_, B_, C_;
  std::vector<double> pr_diag_;
  int nu_, nb_, np_, nr_;
};

}  // namespace mhdmg::linalg
