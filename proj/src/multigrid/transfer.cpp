#include "mhdmg/multigrid/transfer.hpp"

#include <cmath>
#include <map>
#include <unordered_map>

#include "mhdmg/error.hpp"

namespace mhdmg::multigrid {

namespace {

constexpr double kDropTolerance = 1e-15;

using Row = std::vector<std::pair<int, double>>;

linalg::CsrMatrix rows_to_csr(int cols, const std::vector<Row>& rows) {
  std::vector<int> rp{0}, ci;
  std::vector<double> va;
  for (const auto& r : rows) {
    std::map<int, double> acc;
    for (const auto& [c, v] : r) acc[c] += v;
    for (const auto& [c, v] : acc) {
      if (std::abs(v) < kDropTolerance) continue;
      ci.push_back(c);
      va.push_back(v);
    }
    rp.push_back(static_cast<int>(ci.size()));
  }
  return linalg::CsrMatrix(static_cast<int>(rows.size()), cols, std::move(rp), std::move(ci), std::move(va));
}

mesh::Point midpoint(const mesh::Point& a, const mesh::Point& b) { return {0.5 * (a.x + b.x), 0.5 * (a.y + b.y)}; }

}  // namespace

void check_nested(const mesh::Mesh& coarse, const mesh::Mesh& fine) {
  const auto& lin = fine.lineage();
  if (!lin || static_cast<int>(lin->cell_parent.size()) != fine.n_cells() ||
      fine.n_cells() != 4 * coarse.n_cells() || fine.n_vertices() != coarse.n_vertices() + coarse.n_edges() ||
      fine.refinement_level() != coarse.refinement_level() + 1)
    throw InvalidArgument("multigrid levels are not nested: the fine mesh is not a uniform refinement of the coarse one");
  for (int v = 0; v < coarse.n_vertices(); ++v) {
    const auto& a = coarse.vertex(v);
    const auto& b = fine.vertex(v);
    if (std::abs(a.x - b.x) > 1e-12 || std::abs(a.y - b.y) > 1e-12)
      throw InvalidArgument("multigrid levels are not nested: vertex positions differ");
  }
}

linalg::CsrMatrix build_interpolation(const fem::SpaceLayout& coarse, const fem::SpaceLayout& fine,
                                      fem::SpaceKind kind) {
  check_nested(coarse.mesh(), fine.mesh());
  const auto& fm = fine.mesh();
  const auto& parent = fm.lineage()->cell_parent;
  const int uoff = 0, boff = fine.n_u(), poff = fine.n_u() + fine.n_B();
  const int cb = coarse.n_u(), cp = coarse.n_u() + coarse.n_B();

  int n_rows = 0, n_cols = 0;
  switch (kind) {
    case fem::SpaceKind::p1: n_rows = fine.n_p(); n_cols = coarse.n_p(); break;
    case fem::SpaceKind::p2: n_rows = fine.n_u(); n_cols = coarse.n_u(); break;
    case fem::SpaceKind::nedelec: n_rows = fine.n_B(); n_cols = coarse.n_B(); break;
  }
  std::vector<Row> rows(n_rows);
  std::vector<char> done(n_rows, 0);

  fem::PointBasis pb;
  for (int c = 0; c < fm.n_cells(); ++c) {
    const int C = parent[c];
    const auto gC = fem::cell_geometry(coarse, C);
    const auto& dC = coarse.cell_dofs(C).dofs;
    const auto& fd = fine.cell_dofs(c).dofs;
    const auto& tri = fm.cell(c);
    const auto& ce = fm.cell_edges(c);
    for (int k = 0; k < 3; ++k) {
      const auto& a = fm.vertex(tri[(k + 1) % 3]);
      const auto& b = fm.vertex(tri[(k + 2) % 3]);
      switch (kind) {
        case fem::SpaceKind::p1: {
          const int row = fd[fem::kLocalP + k] - poff;
          if (done[row]) break;
          done[row] = 1;
          fem::tabulate(gC, fem::barycentric(gC, fm.vertex(tri[k])), pb);
          for (int l = 0; l < 3; ++l) rows[row].push_back({dC[fem::kLocalP + l] - cp, pb.p1[l]});
          break;
        }
        case fem::SpaceKind::p2: {
          // vertex node k and edge node k of the fine cell
          const mesh::Point pts[2] = {fm.vertex(tri[k]), midpoint(a, b)};
          const int nodes[2] = {k, 3 + k};
          for (int s = 0; s < 2; ++s) {
            const int row0 = fd[fem::kLocalU + 2 * nodes[s]] - uoff;
            if (done[row0]) continue;
            fem::tabulate(gC, fem::barycentric(gC, pts[s]), pb);
            for (int comp = 0; comp < 2; ++comp) {
              done[row0 + comp] = 1;
              for (int n = 0; n < 6; ++n) rows[row0 + comp].push_back({dC[fem::kLocalU + 2 * n + comp], pb.p2[n]});
            }
          }
          break;
        }
        case fem::SpaceKind::nedelec: {
          const int row = fd[fem::kLocalB + k] - boff;
          if (done[row]) break;
          done[row] = 1;
          // tangential component is constant along the edge, so the moment is
          // the midpoint value dotted with the canonical edge vector
          const auto& ed = fm.edge(ce[k]);
          const auto& lo = fm.vertex(ed[0]);
          const auto& hi = fm.vertex(ed[1]);
          const double tx = hi.x - lo.x, ty = hi.y - lo.y;
          fem::tabulate(gC, fem::barycentric(gC, midpoint(lo, hi)), pb);
          for (int l = 0; l < 3; ++l)
            rows[row].push_back({dC[fem::kLocalB + l] - cb, pb.ned[l][0] * tx + pb.ned[l][1] * ty});
          break;
        }
      }
    }
  }
  return rows_to_csr(n_cols, rows);
}

linalg::CsrMatrix block_interpolation(const fem::SpaceLayout& coarse, const fem::SpaceLayout& fine) {
  const auto Pu = build_interpolation(coarse, fine, fem::SpaceKind::p2);
  const auto Pb = build_interpolation(coarse, fine, fem::SpaceKind::nedelec);
  const auto Pp = build_interpolation(coarse, fine, fem::SpaceKind::p1);
  std::vector<linalg::Triplet> t;
  auto add = [&t](const linalg::CsrMatrix& P, int r0, int c0) {
    for (int i = 0; i < P.rows(); ++i)
      for (int k = P.row_ptr()[i]; k < P.row_ptr()[i + 1]; ++k)
        t.push_back({r0 + i, c0 + P.col_idx()[k], P.values()[k]});
  };
  using fem::Field;
  add(Pu, fine.offset(Field::velocity), coarse.offset(Field::velocity));
  add(Pb, fine.offset(Field::magnetic), coarse.offset(Field::magnetic));
  add(Pp, fine.offset(Field::pressure), coarse.offset(Field::pressure));
  add(Pp, fine.offset(Field::multiplier), coarse.offset(Field::multiplier));
  return linalg::CsrMatrix::from_triplets(fine.size(), coarse.size(), std::move(t));
}

linalg::CsrMatrix constrain_interpolation(const linalg::CsrMatrix& P, const std::vector<char>& coarse_fixed,
                                          const std::vector<char>& fine_fixed, const std::vector<PinnedDof>& pins) {
  const auto rp = P.row_ptr();
  const auto ci = P.col_idx();
  const auto va = P.values();
  auto free_row = [&](int i) {
    Row r;
    if (!fine_fixed.empty() && fine_fixed[i]) return r;
    for (int k = rp[i]; k < rp[i + 1]; ++k)
      if (coarse_fixed.empty() || !coarse_fixed[ci[k]]) r.push_back({ci[k], va[k]});
    return r;
  };
  std::vector<Row> rows(P.rows());
  for (int i = 0; i < P.rows(); ++i) rows[i] = free_row(i);
  for (const auto& pin : pins) {
    Row shift;
    for (int k = rp[pin.dof]; k < rp[pin.dof + 1]; ++k)
      if (coarse_fixed.empty() || !coarse_fixed[ci[k]]) shift.push_back({ci[k], va[k]});
    for (int i = pin.begin; i < pin.end; ++i) {
      if (i == pin.dof || (!fine_fixed.empty() && fine_fixed[i])) continue;
      for (const auto& [c, v] : shift) rows[i].push_back({c, -v});
    }
    rows[pin.dof].clear();
  }
  return rows_to_csr(P.cols(), rows);
}

fem::StateVector restrict_state(const fem::StateVector& fine, std::shared_ptr<const fem::SpaceLayout> coarse) {
  const auto& F = *fine.layout;
  const auto& C = *coarse;
  const auto& fm = F.mesh();
  const auto& cm = C.mesh();
  check_nested(cm, fm);
  fem::StateVector out(coarse);
  const int nv = cm.n_vertices();
  for (int v = 0; v < nv; ++v) {
    if (cm.vertex_master(v) != v) continue;
    for (int c = 0; c < 2; ++c) out.data[C.u_vertex_dof(v, c)] = fine.data[F.u_vertex_dof(v, c)];
    out.data[C.p_dof(v)] = fine.data[F.p_dof(v)];
    out.data[C.r_dof(v)] = fine.data[F.r_dof(v)];
  }
  std::unordered_map<long long, int> fine_edge;
  for (int e = 0; e < fm.n_edges(); ++e) {
    const auto& ed = fm.edge(e);
    fine_edge[static_cast<long long>(ed[0]) * fm.n_vertices() + ed[1]] = e;
  }
  auto lookup = [&](int a, int b) {
    if (a > b) std::swap(a, b);
    return fine_edge.at(static_cast<long long>(a) * fm.n_vertices() + b);
  };
  for (int e = 0; e < cm.n_edges(); ++e) {
    if (cm.edge_master(e) != e) continue;
    const int m = nv + e;  // fine vertex at the midpoint of coarse edge e
    for (int c = 0; c < 2; ++c) out.data[C.u_edge_dof(e, c)] = fine.data[F.u_vertex_dof(m, c)];
    const int a = cm.edge(e)[0], b = cm.edge(e)[1];
    // canonical directions a -> m and b -> m, since midpoint ids exceed coarse ids
    out.data[C.B_dof(e)] = fine.data[F.B_dof(lookup(a, m))] - fine.data[F.B_dof(lookup(b, m))];
  }
  return out;
}

}  // namespace mhdmg::multigrid
