#include "mhdmg/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <tuple>

#include "mhdmg/error.hpp"

namespace mhdmg::mesh {

namespace {

SideMask classify(const MeshFamily& f, const Point& p) {
  const double tol = 1e-12 * std::max(f.x1 - f.x0, f.y1 - f.y0);
  SideMask s = kInterior;
  if (std::abs(p.x - f.x0) < tol) s |= kLeft;
  if (std::abs(p.x - f.x1) < tol) s |= kRight;
  if (std::abs(p.y - f.y0) < tol) s |= kBottom;
  if (std::abs(p.y - f.y1) < tol) s |= kTop;
  return s;
}

}  // namespace

Mesh Mesh::build_structured(const MeshFamily& family) {
  if (family.nx < 1 || family.ny < 1) {
    throw InvalidArgument("structured mesh needs nx, ny >= 1");
  }
  if (!(family.x1 > family.x0) || !(family.y1 > family.y0)) {
    throw InvalidArgument("structured mesh needs a nondegenerate rectangle");
  }
  Mesh m;
  m.family_ = family;
  const int nx = family.nx, ny = family.ny;
  const double hx = (family.x1 - family.x0) / nx;
  const double hy = (family.y1 - family.y0) / ny;
  auto grid = [nx](int i, int j) { return j * (nx + 1) + i; };
  for (int j = 0; j <= ny; ++j) {
    for (int i = 0; i <= nx; ++i) {
      // Pin the far sides exactly so periodic matching is bitwise.
      const double x = (i == nx) ? family.x1 : family.x0 + i * hx;
      const double y = (j == ny) ? family.y1 : family.y0 + j * hy;
      m.vertices_.push_back({x, y});
    }
  }
  if (family.kind == MeshKind::crossed) {
    for (int j = 0; j < ny; ++j) {
      for (int i = 0; i < nx; ++i) {
        m.vertices_.push_back({family.x0 + (i + 0.5) * hx, family.y0 + (j + 0.5) * hy});
      }
    }
  }
  const int n_grid = (nx + 1) * (ny + 1);
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      const int v00 = grid(i, j), v10 = grid(i + 1, j);
      const int v01 = grid(i, j + 1), v11 = grid(i + 1, j + 1);
      if (family.kind == MeshKind::diagonal) {
        m.cells_.push_back({v00, v10, v11});
        m.cells_.push_back({v00, v11, v01});
      } else {
        const int c = n_grid + j * nx + i;
        m.cells_.push_back({v00, v10, c});
        m.cells_.push_back({v10, v11, c});
        m.cells_.push_back({v11, v01, c});
        m.cells_.push_back({v01, v00, c});
      }
    }
  }
  for (const auto& p : m.vertices_) m.vertex_sides_.push_back(classify(family, p));
  m.build_edges();
  m.vertex_master_.resize(m.n_vertices());
  for (int v = 0; v < m.n_vertices(); ++v) m.vertex_master_[v] = v;
  m.edge_master_.resize(m.n_edges());
  for (int e = 0; e < m.n_edges(); ++e) m.edge_master_[e] = e;
  m.build_vertex_cells();
  return m;
}

Mesh Mesh::from_cells(const MeshFamily& domain, std::vector<Point> vertices,
                      std::vector<std::array<int, 3>> cells) {
  if (!(domain.x1 > domain.x0) || !(domain.y1 > domain.y0)) {
    throw InvalidArgument("from_cells: degenerate domain");
  }
  Mesh m;
  m.family_ = domain;
  m.vertices_ = std::move(vertices);
  m.cells_ = std::move(cells);
  for (const auto& c : m.cells_) {
    for (int v : c) {
      if (v < 0 || v >= m.n_vertices()) throw InvalidArgument("from_cells: vertex id out of range");
    }
  }
  for (int c = 0; c < m.n_cells(); ++c) {
    if (!(m.signed_area(c) > 0.0)) throw InvalidArgument("from_cells: cell " + std::to_string(c) + " not positively oriented");
  }
  for (const auto& p : m.vertices_) m.vertex_sides_.push_back(classify(domain, p));
  m.build_edges();
  m.vertex_master_.resize(m.n_vertices());
  for (int v = 0; v < m.n_vertices(); ++v) m.vertex_master_[v] = v;
  m.edge_master_.resize(m.n_edges());
  for (int e = 0; e < m.n_edges(); ++e) m.edge_master_[e] = e;
  m.build_vertex_cells();
  return m;
}

void Mesh::build_edges() {
  struct Incidence {
    int lo, hi, cell, local;
  };
  std::vector<Incidence> inc;
  inc.reserve(3 * cells_.size());
  for (int c = 0; c < n_cells(); ++c) {
    const auto& t = cells_[c];
    for (int k = 0; k < 3; ++k) {
      const int a = t[(k + 1) % 3], b = t[(k + 2) % 3];
      inc.push_back({std::min(a, b), std::max(a, b), c, k});
    }
  }
  std::sort(inc.begin(), inc.end(), [](const Incidence& l, const Incidence& r) {
    return std::tie(l.lo, l.hi, l.cell) < std::tie(r.lo, r.hi, r.cell);
  });
  edges_.clear();
  cell_edges_.assign(cells_.size(), {-1, -1, -1});
  for (std::size_t i = 0; i < inc.size(); ++i) {
    if (i == 0 || inc[i].lo != inc[i - 1].lo || inc[i].hi != inc[i - 1].hi) {
      edges_.push_back({inc[i].lo, inc[i].hi});
    }
    cell_edges_[inc[i].cell][inc[i].local] = n_edges() - 1;
  }
  edge_sides_.assign(edges_.size(), kInterior);
  for (int e = 0; e < n_edges(); ++e) {
    edge_sides_[e] = vertex_sides_[edges_[e][0]] & vertex_sides_[edges_[e][1]];
  }
}

void Mesh::build_vertex_cells() {
  vertex_cells_.assign(vertices_.size(), {});
  for (int c = 0; c < n_cells(); ++c) {
    for (int v : cells_[c]) {
      auto& list = vertex_cells_[vertex_master_[v]];
      if (list.empty() || list.back() != c) list.push_back(c);
    }
  }
}

double Mesh::signed_area(int c) const {
  const auto& t = cells_[c];
  const Point& a = vertices_[t[0]];
  const Point& b = vertices_[t[1]];
  const Point& d = vertices_[t[2]];
  return 0.5 * ((b.x - a.x) * (d.y - a.y) - (b.y - a.y) * (d.x - a.x));
}

double Mesh::domain_area() const {
  double s = 0.0;
  for (int c = 0; c < n_cells(); ++c) s += signed_area(c);
  return s;
}

double Mesh::shortest_edge() const {
  double h = std::numeric_limits<double>::infinity();
  for (const auto& e : edges_) {
    const Point& a = vertices_[e[0]];
    const Point& b = vertices_[e[1]];
    h = std::min(h, std::hypot(b.x - a.x, b.y - a.y));
  }
  return h;
}

int Mesh::n_vertex_identifications() const {
  int n = 0;
  for (int v = 0; v < n_vertices(); ++v) n += vertex_master_[v] != v;
  return n;
}

int Mesh::n_edge_identifications() const {
  int n = 0;
  for (int e = 0; e < n_edges(); ++e) n += edge_master_[e] != e;
  return n;
}

StarClosure Mesh::vertex_star_closure(int v) const {
  if (v < 0 || v >= n_vertices()) {
    throw InvalidArgument("vertex_star_closure: invalid vertex id " + std::to_string(v));
  }
  StarClosure s;
  s.cells = vertex_cells(v);
  for (int c : s.cells) {
    for (int k = 0; k < 3; ++k) {
      s.vertices.push_back(vertex_master_[cells_[c][k]]);
      s.edges.push_back(edge_master_[cell_edges_[c][k]]);
    }
  }
  auto uniq = [](std::vector<int>& x) {
    std::sort(x.begin(), x.end());
    x.erase(std::unique(x.begin(), x.end()), x.end());
  };
  uniq(s.vertices);
  uniq(s.edges);
  return s;
}

int Mesh::nearest_vertex(const Point& p) const {
  int best = -1;
  double best_d = std::numeric_limits<double>::infinity();
  for (int v = 0; v < n_vertices(); ++v) {
    if (vertex_master_[v] != v) continue;
    const double d = std::hypot(vertices_[v].x - p.x, vertices_[v].y - p.y);
    if (d < best_d - 1e-14) {
      best_d = d;
      best = v;
    }
  }
  return best;
}

int Mesh::find_vertex(const Point& p, double tol) const {
  for (int v = 0; v < n_vertices(); ++v) {
    if (std::hypot(vertices_[v].x - p.x, vertices_[v].y - p.y) <= tol) return vertex_master_[v];
  }
  return -1;
}

void Mesh::write_text(std::ostream& out) const {
  out.precision(17);
  out << "# mhdmg mesh\n";
  out << "vertices " << n_vertices() << "\n";
  for (int v = 0; v < n_vertices(); ++v) {
    out << vertices_[v].x << ' ' << vertices_[v].y << ' ' << int(vertex_sides_[v]) << ' '
        << vertex_master_[v] << "\n";
  }
  out << "cells " << n_cells() << "\n";
  for (const auto& c : cells_) out << c[0] << ' ' << c[1] << ' ' << c[2] << "\n";
  out << "edges " << n_edges() << "\n";
  for (int e = 0; e < n_edges(); ++e) {
    out << edges_[e][0] << ' ' << edges_[e][1] << ' ' << int(edge_sides_[e]) << ' '
        << edge_master_[e] << "\n";
  }
}

Mesh refine_uniform(const Mesh& m) {
  Mesh r;
  r.family_ = m.family_;
  r.refinement_level_ = m.refinement_level_ + 1;
  const int nv = m.n_vertices();
  r.vertices_ = m.vertices_;
  Lineage lin;
  lin.vertex_parent_vertex.resize(nv + m.n_edges(), -1);
  lin.vertex_parent_edge.resize(nv + m.n_edges(), -1);
  for (int v = 0; v < nv; ++v) lin.vertex_parent_vertex[v] = v;
  for (int e = 0; e < m.n_edges(); ++e) {
    const Point& a = m.vertices_[m.edges_[e][0]];
    const Point& b = m.vertices_[m.edges_[e][1]];
    r.vertices_.push_back({0.5 * (a.x + b.x), 0.5 * (a.y + b.y)});
    lin.vertex_parent_edge[nv + e] = e;
  }
  // Boundary tags are inherited from the raw (unidentified) parent so that
  // periodic re-identification below starts from the plain rectangle tags.
  r.vertex_sides_.resize(r.vertices_.size());
  for (int v = 0; v < nv; ++v) r.vertex_sides_[v] = classify(m.family_, m.vertices_[v]);
  for (int e = 0; e < m.n_edges(); ++e) {
    r.vertex_sides_[nv + e] = classify(m.family_, r.vertices_[nv + e]);
  }
  for (int c = 0; c < m.n_cells(); ++c) {
    const auto& t = m.cells_[c];
    const auto& ce = m.cell_edges_[c];
    const int m0 = nv + ce[0], m1 = nv + ce[1], m2 = nv + ce[2];
    r.cells_.push_back({t[0], m2, m1});
    r.cells_.push_back({m2, t[1], m0});
    r.cells_.push_back({m1, m0, t[2]});
    r.cells_.push_back({m0, m1, m2});
    for (int k = 0; k < 4; ++k) lin.cell_parent.push_back(c);
  }
  r.build_edges();
  r.vertex_master_.resize(r.n_vertices());
  for (int v = 0; v < r.n_vertices(); ++v) r.vertex_master_[v] = v;
  r.edge_master_.resize(r.n_edges());
  for (int e = 0; e < r.n_edges(); ++e) r.edge_master_[e] = e;
  r.build_vertex_cells();
  r.lineage_ = std::move(lin);
  if (m.periodic_x_) {
    Mesh p = apply_periodic_x(r);
    return p;
  }
  return r;
}

Mesh apply_periodic_x(const Mesh& m) {
  Mesh r = m;
  const auto& f = m.family_;
  const double tol = 1e-10 * std::max(f.x1 - f.x0, f.y1 - f.y0);
  std::vector<int> left, right;
  for (int v = 0; v < m.n_vertices(); ++v) {
    const Point& p = m.vertices_[v];
    if (std::abs(p.x - f.x0) < tol) left.push_back(v);
    if (std::abs(p.x - f.x1) < tol) right.push_back(v);
  }
  auto by_y = [&](int a, int b) { return m.vertices_[a].y < m.vertices_[b].y; };
  std::sort(left.begin(), left.end(), by_y);
  std::sort(right.begin(), right.end(), by_y);
  if (left.size() != right.size()) {
    throw InvalidArgument("apply_periodic_x: left and right sides have different vertex counts");
  }
  for (std::size_t i = 0; i < left.size(); ++i) {
    if (std::abs(m.vertices_[left[i]].y - m.vertices_[right[i]].y) > tol) {
      throw InvalidArgument("apply_periodic_x: left and right sides are not congruent");
    }
    r.vertex_master_[right[i]] = left[i];
    r.vertex_master_[left[i]] = left[i];
  }
  // Edge partners: a right-side edge maps onto the left edge joining the
  // partner vertices. Orientation must agree for Nedelec signs to match.
  std::vector<int> partner(m.n_vertices(), -1);
  for (std::size_t i = 0; i < left.size(); ++i) partner[right[i]] = left[i];
  std::vector<int> left_edges;
  for (int e = 0; e < m.n_edges(); ++e) {
    const auto& ed = m.edges_[e];
    if ((classify(f, m.vertices_[ed[0]]) & kLeft) && (classify(f, m.vertices_[ed[1]]) & kLeft)) {
      left_edges.push_back(e);
    }
  }
  for (int e = 0; e < m.n_edges(); ++e) {
    const auto& ed = m.edges_[e];
    if (!((classify(f, m.vertices_[ed[0]]) & kRight) && (classify(f, m.vertices_[ed[1]]) & kRight))) {
      continue;
    }
    const int a = partner[ed[0]], b = partner[ed[1]];
    int match = -1;
    for (int le : left_edges) {
      const auto& l = m.edges_[le];
      if (l[0] == a && l[1] == b) match = le;
      if (l[0] == b && l[1] == a) {
        throw InvalidArgument("apply_periodic_x: identified edges have opposite orientation");
      }
    }
    if (match < 0) throw InvalidArgument("apply_periodic_x: no partner for a right-side edge");
    r.edge_master_[e] = match;
  }
  for (int v : left) r.vertex_sides_[v] &= static_cast<SideMask>(~(kLeft | kRight));
  for (int v : right) r.vertex_sides_[v] &= static_cast<SideMask>(~(kLeft | kRight));
  for (int e = 0; e < r.n_edges(); ++e) {
    r.edge_sides_[e] &= static_cast<SideMask>(~(kLeft | kRight));
  }
  r.periodic_x_ = true;
  r.build_vertex_cells();
  return r;
}

}  // namespace mhdmg::mesh
