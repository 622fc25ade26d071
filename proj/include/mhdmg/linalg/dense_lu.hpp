#pragma once

#include <Eigen/Dense>
#include <span>

namespace mhdmg::linalg {

/// Partial-pivoting LU of a small dense matrix. A pivot whose magnitude falls
/// below `tolerance` times the largest pivot marks the matrix singular.
class DenseLu {
 public:
  static constexpr double kDefaultTolerance = 1e-12;

  DenseLu() = default;
  explicit DenseLu(const Eigen::MatrixXd& a, double tolerance = kDefaultTolerance);

  int size() const { return static_cast<int>(lu_.rows()); }
  bool singular() const { return singular_; }
  /// Smallest relative pivot magnitude.
  double pivot_ratio() const { return pivot_ratio_; }
  /// Numerical rank from a full-pivoting factorization at the same tolerance.
  int rank_estimate(const Eigen::MatrixXd& a) const;

  /// Throws SingularMatrix when the factorization is singular.
  void solve(std::span<const double> b, std::span<double> x) const;
  Eigen::VectorXd solve(const Eigen::VectorXd& b) const;

 private:
  Eigen::PartialPivLU<Eigen::MatrixXd> lu_;
  double tolerance_ = kDefaultTolerance;
  double pivot_ratio_ = 0.0;
  bool singular_ = true;
};

}  // namespace mhdmg::linalg
