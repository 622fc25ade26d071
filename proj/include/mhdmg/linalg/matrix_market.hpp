#pragma once

#include <string>

#include "mhdmg/linalg/csr.hpp"

namespace mhdmg::linalg {

/// Coordinate real general format, 1-based indices, 17 significant digits.
void write_matrix_market(const CsrMatrix& a, const std::string& path);
CsrMatrix read_matrix_market(const std::string& path);

}  // namespace mhdmg::linalg
