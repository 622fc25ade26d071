#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace mhdmg::mesh {

struct Point {
  double x = 0.0;
  double y = 0.0;
};

/// Boundary sides as bit flags. Vertices may carry two flags (corners);
/// edges carry at most one.
enum Side : std::uint8_t {
  kInterior = 0,
  kLeft = 1,
  kRight = 2,
  kBottom = 4,
  kTop = 8,
};
using SideMask = std::uint8_t;
constexpr SideMask kAllSides = kLeft | kRight | kBottom | kTop;

enum class MeshKind { diagonal, crossed };

struct MeshFamily {
  MeshKind kind = MeshKind::diagonal;
  int nx = 1;
  int ny = 1;
  double x0 = 0.0, x1 = 1.0;
  double y0 = 0.0, y1 = 1.0;
};

/// Parent entities of a uniformly refined mesh. Child vertex v sits either on
/// parent vertex `vertex_parent_vertex[v]` or at the midpoint of parent edge
/// `vertex_parent_edge[v]` (the other entry is -1).
struct Lineage {
  std::vector<int> cell_parent;
  std::vector<int> vertex_parent_vertex;
  std::vector<int> vertex_parent_edge;
};

struct StarClosure {
  std::vector<int> cells;
  std::vector<int> edges;
  std::vector<int> vertices;
};

/// Conforming triangulation of a rectangle with canonical edge orientation
/// (lower vertex id to higher vertex id) and optional periodic identification
/// of the x = x0 and x = x1 sides.
///
/// Periodicity is topological: every vertex and edge has a master entity and
/// downstream numbering only ever uses masters. Geometry is kept unmerged so
/// each cell still sees its true coordinates.
class Mesh {
 public:
  Mesh() = default;

  static Mesh build_structured(const MeshFamily& family);
  /// Arbitrary triangulation of the family's rectangle (kind, nx, ny unused).
  /// Cells must be positively oriented.
  static Mesh from_cells(const MeshFamily& domain, std::vector<Point> vertices,
                         std::vector<std::array<int, 3>> cells);

  int n_vertices() const { return static_cast<int>(vertices_.size()); }
  int n_edges() const { return static_cast<int>(edges_.size()); }
  int n_cells() const { return static_cast<int>(cells_.size()); }

  const std::vector<Point>& vertices() const { return vertices_; }
  const Point& vertex(int v) const { return vertices_[v]; }
  const std::array<int, 3>& cell(int c) const { return cells_[c]; }
  /// Local edge k of a cell is opposite local vertex k.
  const std::array<int, 3>& cell_edges(int c) const { return cell_edges_[c]; }
  const std::array<int, 2>& edge(int e) const { return edges_[e]; }

  SideMask vertex_sides(int v) const { return vertex_sides_[v]; }
  SideMask edge_side(int e) const { return edge_sides_[e]; }

  double signed_area(int c) const;
  double domain_area() const;
  double shortest_edge() const;
  const MeshFamily& family() const { return family_; }

  bool periodic_x() const { return periodic_x_; }
  int vertex_master(int v) const { return vertex_master_[v]; }
  int edge_master(int e) const { return edge_master_[e]; }
  int n_vertex_identifications() const;
  int n_edge_identifications() const;

  const std::optional<Lineage>& lineage() const { return lineage_; }
  int refinement_level() const { return refinement_level_; }

  /// Cells containing v together with their edges and vertices. Periodic
  /// images are followed, so a seed on an identified side sees both halves.
  StarClosure vertex_star_closure(int v) const;
  /// Cells incident to vertex v (through masters).
  const std::vector<int>& vertex_cells(int v) const { return vertex_cells_[vertex_master_[v]]; }

  /// Vertex id nearest to p (ties resolved by lowest id); masters only.
  int nearest_vertex(const Point& p) const;
  /// Vertex at p within tolerance, or -1.
  int find_vertex(const Point& p, double tol = 1e-12) const;

  void write_text(std::ostream& out) const;

  friend Mesh refine_uniform(const Mesh& m);
  friend Mesh apply_periodic_x(const Mesh& m);

 private:
  void build_edges();
  void build_vertex_cells();

  MeshFamily family_;
  std::vector<Point> vertices_;
  std::vector<std::array<int, 3>> cells_;
  std::vector<std::array<int, 3>> cell_edges_;
  std::vector<std::array<int, 2>> edges_;
  std::vector<SideMask> vertex_sides_;
  std::vector<SideMask> edge_sides_;
  std::vector<int> vertex_master_;
  std::vector<int> edge_master_;
  std::vector<std::vector<int>> vertex_cells_;
  bool periodic_x_ = false;
  std::optional<Lineage> lineage_;
  int refinement_level_ = 0;
};

/// Red refinement: every cell splits into four, edges split at midpoints.
Mesh refine_uniform(const Mesh& m);

/// Identifies the x = x1 side with the x = x0 side. Idempotent.
Mesh apply_periodic_x(const Mesh& m);

}  // namespace mhdmg::mesh
