#include "mhdmg/fem/bcs.hpp"

#include <string>

#include "mhdmg/error.hpp"
#include "mhdmg/fem/projection.hpp"

namespace mhdmg::fem {

BcSet BcSet::homogeneous() const {
  BcSet h = *this;
  for (auto& d : h.dirichlet) d.second = 0.0;
  if (h.pinned_pressure) h.pinned_pressure->second = 0.0;
  if (h.pinned_multiplier) h.pinned_multiplier->second = 0.0;
  return h;
}

ResolvedBcs resolve(const SpaceLayout& layout, const BcSet& bc) {
  ResolvedBcs r;
  const int n = layout.size();
  r.mask.assign(n, 0);
  r.values.assign(n, 0.0);
  auto add = [&](int dof, double v) {
    if (dof < 0 || dof >= n) throw InvalidArgument("boundary condition on nonexistent DoF " + std::to_string(dof));
    if (r.mask[dof]) throw InvalidArgument("DoF " + std::to_string(dof) + " constrained twice");
    r.mask[dof] = 1;
    r.values[dof] = v;
    ++r.count;
  };
  for (const auto& [dof, v] : bc.dirichlet) add(dof, v);
  const int nv = layout.mesh().n_vertices();
  if (bc.pinned_pressure) {
    const int v = bc.pinned_pressure->first;
    if (v < 0 || v >= nv) throw InvalidArgument("pressure pin on nonexistent vertex");
    add(layout.p_dof(v), bc.pinned_pressure->second);
  }
  if (bc.pinned_multiplier) {
    const int v = bc.pinned_multiplier->first;
    if (v < 0 || v >= nv) throw InvalidArgument("multiplier pin on nonexistent vertex");
    add(layout.r_dof(v), bc.pinned_multiplier->second);
  }
  return r;
}

void apply_bcs(BlockSystem& system, const BcSet& bc) {
  const auto res = resolve(*system.layout, bc);
  auto& A = system.matrix;
  const auto rp = A.row_ptr();
  const auto ci = A.col_idx();
  auto vals = A.values();
  for (int i = 0; i < A.rows(); ++i) {
    if (res.mask[i]) {
      for (int k = rp[i]; k < rp[i + 1]; ++k) vals[k] = ci[k] == i ? 1.0 : 0.0;
      system.rhs[i] = res.values[i];
      continue;
    }
    for (int k = rp[i]; k < rp[i + 1]; ++k) {
      if (res.mask[ci[k]]) {
        system.rhs[i] -= vals[k] * res.values[ci[k]];
        vals[k] = 0.0;
      }
    }
  }
  if (system.constrained.empty()) {
    system.constrained = res.mask;
  } else {
    for (int i = 0; i < A.rows(); ++i) system.constrained[i] |= res.mask[i];
  }
  system.revision = next_revision();
}

void impose(StateVector& x, const BcSet& bc) {
  const auto res = resolve(*x.layout, bc);
  for (int i = 0; i < x.layout->size(); ++i)
    if (res.mask[i]) x.data[i] = res.values[i];
}

BcSet make_bcs(const SpaceLayout& layout, const BoundarySpec& spec) {
  const auto& m = layout.mesh();
  const auto& d = spec.data;
  BcSet bc;
  for (int v = 0; v < m.n_vertices(); ++v) {
    if (m.vertex_master(v) != v) continue;
    const auto sides = m.vertex_sides(v);
    const auto& x = m.vertex(v);
    if (sides & spec.u_sides) {
      const Vec2 u = d.u ? d.u(x.x, x.y) : Vec2{0, 0};
      bc.dirichlet.emplace_back(layout.u_vertex_dof(v, 0), u[0]);
      bc.dirichlet.emplace_back(layout.u_vertex_dof(v, 1), u[1]);
    }
    if (sides & spec.r_sides) bc.dirichlet.emplace_back(layout.r_dof(v), d.r ? d.r(x.x, x.y) : 0.0);
  }
  for (int e = 0; e < m.n_edges(); ++e) {
    if (m.edge_master(e) != e) continue;
    const auto side = m.edge_side(e);
    if (side & spec.u_sides) {
      const auto& a = m.vertex(m.edge(e)[0]);
      const auto& b = m.vertex(m.edge(e)[1]);
      const double mx = 0.5 * (a.x + b.x), my = 0.5 * (a.y + b.y);
      const Vec2 u = d.u ? d.u(mx, my) : Vec2{0, 0};
      bc.dirichlet.emplace_back(layout.u_edge_dof(e, 0), u[0]);
      bc.dirichlet.emplace_back(layout.u_edge_dof(e, 1), u[1]);
    }
    if (side & spec.B_sides) bc.dirichlet.emplace_back(layout.B_dof(e), d.B ? edge_moment(m, e, d.B) : 0.0);
  }
  if (spec.pressure_pin) {
    const int v = m.nearest_vertex(*spec.pressure_pin);
    const auto& x = m.vertex(v);
    bc.pinned_pressure = std::make_pair(v, d.p ? d.p(x.x, x.y) : 0.0);
  }
  return bc;
}

}  // namespace mhdmg::fem
