#include "mhdmg/linalg/dense_lu.hpp"

#include <cmath>

#include "mhdmg/error.hpp"

namespace mhdmg::linalg {

DenseLu::DenseLu(const Eigen::MatrixXd& a, double tolerance) : tolerance_(tolerance) {
  if (a.rows() != a.cols()) throw InvalidArgument("DenseLu: matrix not square");
  if (a.rows() == 0) throw InvalidArgument("DenseLu: empty matrix");
  lu_.compute(a);
  const auto& m = lu_.matrixLU();
  double mx = 0.0, mn = INFINITY;
  for (int i = 0; i < m.rows(); ++i) {
    const double d = std::abs(m(i, i));
    mx = std::max(mx, d);
    mn = std::min(mn, d);
  }
  pivot_ratio_ = mx > 0.0 ? mn / mx : 0.0;
  singular_ = !(pivot_ratio_ > tolerance_) || !std::isfinite(pivot_ratio_);
}

int DenseLu::rank_estimate(const Eigen::MatrixXd& a) const {
  Eigen::FullPivLU<Eigen::MatrixXd> full(a);
  full.setThreshold(tolerance_);
  return static_cast<int>(full.rank());
}

void DenseLu::solve(std::span<const double> b, std::span<double> x) const {
  if (singular_) throw SingularMatrix("DenseLu: singular matrix", -1);
  Eigen::Map<const Eigen::VectorXd> bm(b.data(), size());
  Eigen::Map<Eigen::VectorXd> xm(x.data(), size());
  xm = lu_.solve(bm);
}

Eigen::VectorXd DenseLu::solve(const Eigen::VectorXd& b) const {
  if (singular_) throw SingularMatrix("DenseLu: singular matrix", -1);
  return lu_.solve(b);
}

}  // namespace mhdmg::linalg
