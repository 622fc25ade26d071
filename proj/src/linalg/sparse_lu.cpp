#include "mhdmg/linalg/sparse_lu.hpp"

#include <Eigen/OrderingMethods>
#include <Eigen/SparseCore>
#include <Eigen/SparseLU>
#include <regex>
#include <string>

#include "mhdmg/error.hpp"

namespace mhdmg::linalg {

struct SparseLu::Impl {
  Eigen::SparseLU<Eigen::SparseMatrix<double, Eigen::ColMajor>, Eigen::COLAMDOrdering<int>> lu;
};

namespace {

long failing_position(const std::string& message) {
  static const std::regex number("([0-9]+)\\s*$");
  std::smatch m;
  if (std::regex_search(message, m, number)) return std::stol(m[1]);
  return -1;
}

}  // namespace

SparseLu::SparseLu(const CsrMatrix& a) : impl_(std::make_unique<Impl>()), n_(a.rows()) {
  if (a.rows() != a.cols()) throw InvalidArgument("SparseLu: matrix not square");
  Eigen::SparseMatrix<double, Eigen::RowMajor> rm(a.rows(), a.cols());
  std::vector<Eigen::Triplet<double>> t;
  t.reserve(a.nnz());
  const auto rp = a.row_ptr();
  const auto ci = a.col_idx();
  const auto v = a.values();
  for (int i = 0; i < a.rows(); ++i)
    for (int k = rp[i]; k < rp[i + 1]; ++k)
      if (v[k] != 0.0) t.emplace_back(i, ci[k], v[k]);
  Eigen::SparseMatrix<double, Eigen::ColMajor> cm(a.rows(), a.cols());
  cm.setFromTriplets(t.begin(), t.end());
  cm.makeCompressed();
  impl_->lu.analyzePattern(cm);
  impl_->lu.factorize(cm);
  if (impl_->lu.info() != Eigen::Success) {
    const std::string msg = impl_->lu.lastErrorMessage();
    throw SingularMatrix("sparse LU failed: " + msg, failing_position(msg));
  }
}

SparseLu::~SparseLu() = default;
SparseLu::SparseLu(SparseLu&&) noexcept = default;
SparseLu& SparseLu::operator=(SparseLu&&) noexcept = default;

void SparseLu::solve(std::span<const double> b, std::span<double> x) const {
  Eigen::Map<const Eigen::VectorXd> bm(b.data(), n_);
  Eigen::Map<Eigen::VectorXd> xm(x.data(), n_);
  xm = impl_->lu.solve(bm);
}

}  // namespace mhdmg::linalg
