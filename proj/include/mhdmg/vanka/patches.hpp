#pragma once

#include <string>
#include <vector>

#include "mhdmg/fem/assembly.hpp"
#include "mhdmg/fem/layout.hpp"

namespace mhdmg::vanka {

enum class Variant { segregated, purist, coupled };
enum class PatchKind { segregated_fluid, segregated_em, purist_pressure, purist_multiplier, coupled, custom };

/// Topological patches use the closure of the seed's vertex star. The
/// algebraic mode instead takes the sparsity of the seed constraint rows,
/// which for purist patches reproduces the segregated construction.
enum class BuildMode { topological, algebraic };

struct PatchSpec {
  PatchKind kind = PatchKind::coupled;
  int seed = -1;          // master vertex id
  std::vector<int> dofs;  // ascending global DoFs; constraint DoFs come last
  int n_constraint = 0;   // trailing constraint DoFs
  bool regularized = false;
};

Variant parse_variant(const std::string& name);
std::string to_string(Variant v);
std::string to_string(PatchKind k);

/// One patch per free seed constraint DoF (pairs for coupled). DoFs eliminated
/// by boundary conditions are excluded; seeds without a free constraint DoF
/// produce no patch.
std::vector<PatchSpec> build_patches(const fem::BlockSystem& system, Variant variant,
                                     BuildMode mode = BuildMode::topological);

/// A single patch holding every free DoF (exact block solver, for testing).
PatchSpec whole_domain_patch(const fem::BlockSystem& system);

}  // namespace mhdmg::vanka
