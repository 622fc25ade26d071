#include "mhdmg/fem/layout.hpp"

#include "mhdmg/error.hpp"

namespace mhdmg::fem {

SpaceLayout::SpaceLayout(std::shared_ptr<const mesh::Mesh> mesh) : mesh_(std::move(mesh)) {
  const auto& m = *mesh_;
  vertex_node_.assign(m.n_vertices(), -1);
  for (int v = 0; v < m.n_vertices(); ++v) {
    if (m.vertex_master(v) == v) vertex_node_[v] = n_vertex_nodes_++;
  }
  for (int v = 0; v < m.n_vertices(); ++v) vertex_node_[v] = vertex_node_[m.vertex_master(v)];
  edge_node_.assign(m.n_edges(), -1);
  for (int e = 0; e < m.n_edges(); ++e) {
    if (m.edge_master(e) == e) edge_node_[e] = n_edge_nodes_++;
  }
  for (int e = 0; e < m.n_edges(); ++e) edge_node_[e] = edge_node_[m.edge_master(e)];

  cell_dofs_.resize(m.n_cells());
  for (int c = 0; c < m.n_cells(); ++c) {
    const auto& t = m.cell(c);
    const auto& ce = m.cell_edges(c);
    CellDofs cd;
    for (int k = 0; k < 3; ++k) {
      cd.dofs[kLocalU + 2 * k] = u_vertex_dof(t[k], 0);
      cd.dofs[kLocalU + 2 * k + 1] = u_vertex_dof(t[k], 1);
      cd.dofs[kLocalU + 6 + 2 * k] = u_edge_dof(ce[k], 0);
      cd.dofs[kLocalU + 6 + 2 * k + 1] = u_edge_dof(ce[k], 1);
      cd.dofs[kLocalB + k] = B_dof(ce[k]);
      cd.dofs[kLocalP + k] = p_dof(t[k]);
      cd.dofs[kLocalR + k] = r_dof(t[k]);
      cd.edge_sign[k] = t[(k + 1) % 3] < t[(k + 2) % 3] ? 1.0 : -1.0;
    }
    cell_dofs_[c] = cd;
  }
}

int SpaceLayout::offset(Field f) const {
  switch (f) {
    case Field::velocity: return 0;
    case Field::magnetic: return n_u();
    case Field::pressure: return n_u() + n_B();
    case Field::multiplier: return n_u() + n_B() + n_p();
  }
  throw InvalidArgument("unknown field");
}

int SpaceLayout::block_size(Field f) const {
  switch (f) {
    case Field::velocity: return n_u();
    case Field::magnetic: return n_B();
    case Field::pressure: return n_p();
    case Field::multiplier: return n_r();
  }
  throw InvalidArgument("unknown field");
}

Field SpaceLayout::field_of(int dof) const {
  if (dof < 0 || dof >= size()) throw InvalidArgument("dof out of range");
  if (dof < offset(Field::magnetic)) return Field::velocity;
  if (dof < offset(Field::pressure)) return Field::magnetic;
  if (dof < offset(Field::multiplier)) return Field::pressure;
  return Field::multiplier;
}

}  // namespace mhdmg::fem
