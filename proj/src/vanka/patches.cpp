#include "mhdmg/vanka/patches.hpp"

#include <algorithm>

#include "mhdmg/error.hpp"

namespace mhdmg::vanka {

Variant parse_variant(const std::string& name) {
  if (name == "segregated") return Variant::segregated;
  if (name == "purist") return Variant::purist;
  if (name == "coupled") return Variant::coupled;
  throw InvalidArgument("unknown Vanka variant '" + name + "' (expected segregated, purist or coupled)");
}

std::string to_string(Variant v) {
  switch (v) {
    case Variant::segregated: return "segregated";
    case Variant::purist: return "purist";
    case Variant::coupled: return "coupled";
  }
  return "?";
}

std::string to_string(PatchKind k) {
  switch (k) {
    case PatchKind::segregated_fluid: return "segregated_fluid";
    case PatchKind::segregated_em: return "segregated_em";
    case PatchKind::purist_pressure: return "purist_pressure";
    case PatchKind::purist_multiplier: return "purist_multiplier";
    case PatchKind::coupled: return "coupled";
    case PatchKind::custom: return "custom";
  }
  return "?";
}

namespace {

struct SeedDofs {
  std::vector<int> u;
  std::vector<int> B;
};

SeedDofs closure_dofs(const fem::SpaceLayout& L, int seed) {
  const auto star = L.mesh().vertex_star_closure(seed);
  SeedDofs s;
  for (int v : star.vertices) {
    s.u.push_back(L.u_vertex_dof(v, 0));
    s.u.push_back(L.u_vertex_dof(v, 1));
  }
  for (int e : star.edges) {
    s.u.push_back(L.u_edge_dof(e, 0));
    s.u.push_back(L.u_edge_dof(e, 1));
    s.B.push_back(L.B_dof(e));
  }
  return s;
}

void row_columns(const linalg::CsrMatrix& A, int row, int lo, int hi, std::vector<int>& out) {
  for (int k = A.row_ptr()[row]; k < A.row_ptr()[row + 1]; ++k) {
    const int c = A.col_idx()[k];
    if (c >= lo && c < hi) out.push_back(c);
  }
}

PatchSpec make(PatchKind kind, int seed, std::vector<int> field, std::vector<int> constraints,
               const std::vector<char>& constrained) {
  PatchSpec p;
  p.kind = kind;
  p.seed = seed;
  std::sort(field.begin(), field.end());
  field.erase(std::unique(field.begin(), field.end()), field.end());
  for (int d : field)
    if (constrained.empty() || !constrained[d]) p.dofs.push_back(d);
  if (p.dofs.empty()) throw InvalidArgument("Vanka seed " + std::to_string(seed) + " has no free field DoFs");
  std::sort(constraints.begin(), constraints.end());
  for (int d : constraints) p.dofs.push_back(d);
  p.n_constraint = static_cast<int>(constraints.size());
  p.regularized = kind == PatchKind::purist_pressure;
  return p;
}

}  // namespace

std::vector<PatchSpec> build_patches(const fem::BlockSystem& system, Variant variant, BuildMode mode) {
  const auto& L = *system.layout;
  const auto& m = L.mesh();
  const auto& A = system.matrix;
  const auto& fixed = system.constrained;
  auto is_free = [&](int d) { return fixed.empty() || !fixed[d]; };
  const int u0 = L.offset(fem::Field::velocity), b0 = L.offset(fem::Field::magnetic);
  const int p0 = L.offset(fem::Field::pressure);

  std::vector<PatchSpec> fluid, em, out;
  for (int v = 0; v < m.n_vertices(); ++v) {
    if (m.vertex_master(v) != v) continue;
    const int pd = L.p_dof(v), rd = L.r_dof(v);
    const bool p_free = is_free(pd), r_free = is_free(rd);
    if (!p_free && !r_free) continue;

    SeedDofs topo;
    if (mode == BuildMode::topological) topo = closure_dofs(L, v);
    // sparsity of the seed rows: p couples to u, r couples to B
    std::vector<int> p_row, r_row;
    row_columns(A, pd, u0, b0, p_row);
    row_columns(A, rd, b0, p0, r_row);

    switch (variant) {
      case Variant::segregated:
        if (p_free) fluid.push_back(make(PatchKind::segregated_fluid, v, p_row, {pd}, fixed));
        if (r_free) em.push_back(make(PatchKind::segregated_em, v, topo.B.empty() ? r_row : topo.B, {rd}, fixed));
        break;
      case Variant::purist: {
        if (mode == BuildMode::algebraic) {
          if (p_free) fluid.push_back(make(PatchKind::purist_pressure, v, p_row, {pd}, fixed));
          if (r_free) em.push_back(make(PatchKind::purist_multiplier, v, r_row, {rd}, fixed));
          break;
        }
        std::vector<int> field = topo.u;
        field.insert(field.end(), topo.B.begin(), topo.B.end());
        if (p_free) fluid.push_back(make(PatchKind::purist_pressure, v, field, {pd}, fixed));
        if (r_free) em.push_back(make(PatchKind::purist_multiplier, v, field, {rd}, fixed));
        break;
      }
      case Variant::coupled: {
        std::vector<int> field;
        if (mode == BuildMode::algebraic) {
          field = p_row;
          field.insert(field.end(), r_row.begin(), r_row.end());
        } else {
          field = topo.u;
          field.insert(field.end(), topo.B.begin(), topo.B.end());
        }
        std::vector<int> cons;
        if (p_free) cons.push_back(pd);
        if (r_free) cons.push_back(rd);
        out.push_back(make(PatchKind::coupled, v, field, cons, fixed));
        break;
      }
    }
  }
  // canonical order: all pressure-seeded patches, then all multiplier-seeded
  for (auto& p : fluid) out.push_back(std::move(p));
  for (auto& p : em) out.push_back(std::move(p));
  return out;
}

PatchSpec whole_domain_patch(const fem::BlockSystem& system) {
  PatchSpec p;
  p.kind = PatchKind::custom;
  const auto& L = *system.layout;
  const int p0 = L.offset(fem::Field::pressure);
  for (int d = 0; d < L.size(); ++d) {
    if (!system.constrained.empty() && system.constrained[d]) continue;
    p.dofs.push_back(d);
    if (d >= p0) ++p.n_constraint;
  }
  return p;
}

}  // namespace mhdmg::vanka
