#pragma once

#include <vector>

#include "mhdmg/fem/basis.hpp"
#include "mhdmg/fem/layout.hpp"
#include "mhdmg/linalg/csr.hpp"

namespace mhdmg::multigrid {

/// Throws InvalidArgument unless `fine` is the uniform refinement of `coarse`.
void check_nested(const mesh::Mesh& coarse, const mesh::Mesh& fine);

/// Interpolation of one space from coarse to fine coefficients. P1 acts on
/// vertex nodes, P2 on interleaved (x, y) velocity nodes, Nedelec on edge
/// moments. Every coarse finite element function is reproduced exactly.
linalg::CsrMatrix build_interpolation(const fem::SpaceLayout& coarse, const fem::SpaceLayout& fine,
                                      fem::SpaceKind kind);

/// Block-diagonal interpolation diag(P_u, P_B, P_p, P_r) on the full unknown.
linalg::CsrMatrix block_interpolation(const fem::SpaceLayout& coarse, const fem::SpaceLayout& fine);

/// A constraint DoF fixed to zero by pinning on the fine level, together with
/// the range of its field. Corrections in that field are shifted by a constant
/// so the pinned value stays zero; constants are in the kernel of the
/// constraint gradients, so this is the same correction up to its nullspace.
struct PinnedDof {
  int dof;
  int begin;
  int end;
};

/// Homogeneous-correction interpolation: rows of fine-constrained DoFs and
/// columns of coarse-constrained DoFs are dropped, then pins are enforced.
linalg::CsrMatrix constrain_interpolation(const linalg::CsrMatrix& P, const std::vector<char>& coarse_fixed,
                                          const std::vector<char>& fine_fixed, const std::vector<PinnedDof>& pins);

/// Coarse finite element interpolant of a fine state: nodal values at coarse
/// P1/P2 nodes and tangential moments along coarse edges.
fem::StateVector restrict_state(const fem::StateVector& fine, std::shared_ptr<const fem::SpaceLayout> coarse);

}  // namespace mhdmg::multigrid
