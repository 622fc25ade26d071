#include "mhdmg/linalg/matrix_market.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "mhdmg/error.hpp"

namespace mhdmg::linalg {

void write_matrix_market(const CsrMatrix& a, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open " + path + " for writing");
  out << "%%MatrixMarket matrix coordinate real general\n";
  out << a.rows() << ' ' << a.cols() << ' ' << a.nnz() << '\n';
  const auto rp = a.row_ptr();
  const auto ci = a.col_idx();
  const auto v = a.values();
  char buf[64];
  for (int i = 0; i < a.rows(); ++i) {
    for (int k = rp[i]; k < rp[i + 1]; ++k) {
      std::snprintf(buf, sizeof buf, "%.17g", v[k]);
      out << i + 1 << ' ' << ci[k] + 1 << ' ' << buf << '\n';
    }
  }
  if (!out) throw IoError("write failed for " + path);
}

CsrMatrix read_matrix_market(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  std::string line;
  std::getline(in, line);
  if (line.rfind("%%MatrixMarket matrix coordinate real general", 0) != 0) {
    throw IoError(path + ": unsupported Matrix Market header");
  }
  while (std::getline(in, line) && !line.empty() && line[0] == '%') {
  }
  std::istringstream head(line);
  int rows = 0, cols = 0, nnz = 0;
  if (!(head >> rows >> cols >> nnz)) throw IoError(path + ": bad size line");
  std::vector<Triplet> t;
  t.reserve(nnz);
  for (int k = 0; k < nnz; ++k) {
    int i = 0, j = 0;
    double v = 0.0;
    if (!(in >> i >> j >> v)) throw IoError(path + ": truncated entries");
    t.push_back({i - 1, j - 1, v});
  }
  return CsrMatrix::from_triplets(rows, cols, std::move(t));
}

}  // namespace mhdmg::linalg
