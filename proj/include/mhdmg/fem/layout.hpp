#pragma once

#include <array>
#include <memory>
#include <span>
#include <vector>

#include "mhdmg/mesh.hpp"

namespace mhdmg::fem {

enum class Field { velocity = 0, magnetic = 1, pressure = 2, multiplier = 3 };

/// Number of local degrees of freedom on one cell: vector P2 (12),
/// lowest-order Nedelec (3), P1 pressure (3), P1 multiplier (3).
inline constexpr int kCellDofs = 21;
inline constexpr int kLocalU = 0;
inline constexpr int kLocalB = 12;
inline constexpr int kLocalP = 15;
inline constexpr int kLocalR = 18;

struct CellDofs {
  std::array<int, kCellDofs> dofs;
  /// +1 when the local edge direction agrees with the canonical orientation.
  std::array<double, 3> edge_sign;
};

/// Global numbering of the concatenated unknown x = (u, B, p, r). Velocity
/// components are interleaved per P2 node; P2 nodes are vertices then edges.
class SpaceLayout {
 public:
  explicit SpaceLayout(std::shared_ptr<const mesh::Mesh> mesh);

  const mesh::Mesh& mesh() const { return *mesh_; }
  const std::shared_ptr<const mesh::Mesh>& mesh_ptr() const { return mesh_; }

  int n_vertex_nodes() const { return n_vertex_nodes_; }
  int n_edge_nodes() const { return n_edge_nodes_; }
  int vertex_node(int raw_vertex) const { return vertex_node_[raw_vertex]; }
  int edge_node(int raw_edge) const { return edge_node_[raw_edge]; }

  int n_u() const { return 2 * (n_vertex_nodes_ + n_edge_nodes_); }
  int n_B() const { return n_edge_nodes_; }
  int n_p() const { return n_vertex_nodes_; }
  int n_r() const { return n_vertex_nodes_; }
  int size() const { return n_u() + n_B() + n_p() + n_r(); }
  int offset(Field f) const;
  int block_size(Field f) const;
  Field field_of(int dof) const;

  int u_vertex_dof(int raw_vertex, int comp) const { return 2 * vertex_node_[raw_vertex] + comp; }
  int u_edge_dof(int raw_edge, int comp) const {
    return 2 * (n_vertex_nodes_ + edge_node_[raw_edge]) + comp;
  }
  int B_dof(int raw_edge) const { return n_u() + edge_node_[raw_edge]; }
  int p_dof(int raw_vertex) const { return n_u() + n_B() + vertex_node_[raw_vertex]; }
  int r_dof(int raw_vertex) const { return n_u() + n_B() + n_p() + vertex_node_[raw_vertex]; }

  const CellDofs& cell_dofs(int c) const { return cell_dofs_[c]; }

 private:
  std::shared_ptr<const mesh::Mesh> mesh_;
  int n_vertex_nodes_ = 0;
  int n_edge_nodes_ = 0;
  std::vector<int> vertex_node_;
  std::vector<int> edge_node_;
  std::vector<CellDofs> cell_dofs_;
};

/// Block coefficient vector (x_u, x_B, x_p, x_r).
struct StateVector {
  std::shared_ptr<const SpaceLayout> layout;
  std::vector<double> data;

  StateVector() = default;
  explicit StateVector(std::shared_ptr<const SpaceLayout> l)
      : layout(std::move(l)), data(static_cast<std::size_t>(layout->size()), 0.0) {}

  std::span<double> block(Field f) {
    return {data.data() + layout->offset(f), static_cast<std::size_t>(layout->block_size(f))};
  }
  std::span<const double> block(Field f) const {
    return {data.data() + layout->offset(f), static_cast<std::size_t>(layout->block_size(f))};
  }
};

}  // namespace mhdmg::fem
