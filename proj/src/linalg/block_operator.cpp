#include "mhdmg/linalg/block_operator.hpp"

#include "mhdmg/error.hpp"

namespace mhdmg::linalg {

BlockOperator::BlockOperator(CsrMatrix F, CsrMatrix Z, CsrMatrix Y, CsrMatrix D, CsrMatrix B, CsrMatrix C,
                             std::vector<double> pr_diagonal)
    : F_(std::move(F)),
      Z_(std::move(Z)),
      Y_(std::move(Y)),
      D_(std::move(D)),
      B_(std::move(B)),
      C_(std::move(C)),
      pr_diag_(std::move(pr_diagonal)),
      nu_(F_.rows()),
      nb_(D_.rows()),
      np_(B_.rows()),
      nr_(C_.rows()) {
  const bool ok = F_.cols() == nu_ && Z_.rows() == nu_ && Z_.cols() == nb_ && Y_.rows() == nb_ &&
                  Y_.cols() == nu_ && D_.cols() == nb_ && B_.cols() == nu_ && C_.cols() == nb_ &&
                  static_cast<int>(pr_diag_.size()) == np_ + nr_;
  if (!ok) throw InvalidArgument("BlockOperator: nonconforming blocks");
}

void BlockOperator::apply(std::span<const double> x, std::span<double> y) const {
  const auto xu = x.subspan(0, nu_), xb = x.subspan(nu_, nb_);
  const auto xp = x.subspan(nu_ + nb_, np_), xr = x.subspan(nu_ + nb_ + np_, nr_);
  auto yu = y.subspan(0, nu_), yb = y.subspan(nu_, nb_);
  auto yp = y.subspan(nu_ + nb_, np_), yr = y.subspan(nu_ + nb_ + np_, nr_);
  Vector tu(nu_), tb(nb_);
  F_.multiply(xu, yu);
  Z_.multiply_add(1.0, xb, yu);
  B_.multiply_transpose(xp, tu);
  axpy(1.0, tu, yu);
  Y_.multiply(xu, yb);
  D_.multiply_add(1.0, xb, yb);
  C_.multiply_transpose(xr, tb);
  axpy(1.0, tb, yb);
  B_.multiply(xu, yp);
  C_.multiply(xb, yr);
  for (int i = 0; i < np_; ++i) yp[i] += pr_diag_[i] * xp[i];
  for (int i = 0; i < nr_; ++i) yr[i] += pr_diag_[np_ + i] * xr[i];
}

}  // namespace mhdmg::linalg
