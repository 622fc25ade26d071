#include "mhdmg/fem/assembly.hpp"

#include <algorithm>
#include <array>
#include <atomic>

#include "mhdmg/error.hpp"
#include "mhdmg/fem/basis.hpp"
#include "mhdmg/fem/bcs.hpp"
#include "mhdmg/fem/quadrature.hpp"

namespace mhdmg::fem {

namespace {

Field local_field(int i) {
  if (i < kLocalB) return Field::velocity;
  if (i < kLocalP) return Field::magnetic;
  if (i < kLocalR) return Field::pressure;
  return Field::multiplier;
}

using LocalMatrix = std::array<std::array<double, kCellDofs>, kCellDofs>;

struct LocalCoupling {
  std::array<std::array<bool, kCellDofs>, kCellDofs> on{};
  LocalCoupling() {
    for (int i = 0; i < kCellDofs; ++i)
      for (int j = 0; j < kCellDofs; ++j) on[i][j] = block_is_coupled(local_field(i), local_field(j));
  }
};

const LocalCoupling& local_coupling() {
  static const LocalCoupling lc;
  return lc;
}

}  // namespace

bool block_is_coupled(Field row, Field col) {
  const bool row_field = row == Field::velocity || row == Field::magnetic;
  const bool col_field = col == Field::velocity || col == Field::magnetic;
  if (row_field && col_field) return true;
  if (row == Field::velocity && col == Field::pressure) return true;
  if (row == Field::pressure && col == Field::velocity) return true;
  if (row == Field::magnetic && col == Field::multiplier) return true;
  if (row == Field::multiplier && col == Field::magnetic) return true;
  return false;
}

linalg::CsrMatrix BlockSystem::block(Field row, Field col) const {
  const int r0 = layout->offset(row), nr = layout->block_size(row);
  const int c0 = layout->offset(col), nc = layout->block_size(col);
  std::vector<int> ptr(nr + 1, 0), idx;
  std::vector<double> val;
  const auto rp = matrix.row_ptr();
  const auto ci = matrix.col_idx();
  const auto vv = matrix.values();
  for (int i = 0; i < nr; ++i) {
    for (int k = rp[r0 + i]; k < rp[r0 + i + 1]; ++k) {
      if (ci[k] >= c0 && ci[k] < c0 + nc) {
        idx.push_back(ci[k] - c0);
        val.push_back(vv[k]);
      }
    }
    ptr[i + 1] = static_cast<int>(idx.size());
  }
  return linalg::CsrMatrix(nr, nc, std::move(ptr), std::move(idx), std::move(val));
}

linalg::BlockOperator make_block_operator(const BlockSystem& s) {
  const auto& L = *s.layout;
  const int p0 = L.offset(Field::pressure);
  std::vector<double> diag(L.n_p() + L.n_r(), 0.0);
  for (int i = 0; i < static_cast<int>(diag.size()); ++i) diag[i] = s.matrix.at(p0 + i, p0 + i);
  return linalg::BlockOperator(s.block(Field::velocity, Field::velocity), s.block(Field::velocity, Field::magnetic),
                               s.block(Field::magnetic, Field::velocity), s.block(Field::magnetic, Field::magnetic),
                               s.block(Field::pressure, Field::velocity), s.block(Field::multiplier, Field::magnetic),
                               std::move(diag));
}

Assembler::Assembler(std::shared_ptr<const SpaceLayout> layout, int quadrature_degree)
    : layout_(std::move(layout)), degree_(quadrature_degree) {
  if (!layout_) throw InvalidArgument("Assembler: null layout");
  triangle_rule(degree_);
  const auto& L = *layout_;
  const int n = L.size();
  const auto& lc = local_coupling();
  std::vector<std::vector<int>> rows(n);
  for (int c = 0; c < L.mesh().n_cells(); ++c) {
    const auto& d = L.cell_dofs(c).dofs;
    for (int i = 0; i < kCellDofs; ++i)
      for (int j = 0; j < kCellDofs; ++j)
        if (lc.on[i][j]) rows[d[i]].push_back(d[j]);
  }
  for (int i = L.offset(Field::pressure); i < n; ++i) rows[i].push_back(i);
  std::vector<int> ptr(n + 1, 0), idx;
  for (int i = 0; i < n; ++i) {
    auto& r = rows[i];
    std::sort(r.begin(), r.end());
    r.erase(std::unique(r.begin(), r.end()), r.end());
    idx.insert(idx.end(), r.begin(), r.end());
    ptr[i + 1] = static_cast<int>(idx.size());
    std::vector<int>().swap(r);
  }
  std::vector<double> val(idx.size(), 0.0);
  pattern_ = linalg::CsrMatrix(n, n, std::move(ptr), std::move(idx), std::move(val));
}

void Assembler::assemble(const StateVector& x, const Physics& phys, Mode mode, std::vector<double>* vec,
                         linalg::CsrMatrix* mat) const {
  const auto& L = *layout_;
  if (x.layout.get() != layout_.get() && (!x.layout || x.layout->size() != L.size())) {
    throw InvalidArgument("assemble: state layout mismatch");
  }
  if (static_cast<int>(x.data.size()) != L.size()) throw InvalidArgument("assemble: state size mismatch");
  if (!phys.mass_reference.empty() && static_cast<int>(phys.mass_reference.size()) != L.size()) {
    throw InvalidArgument("assemble: mass reference size mismatch");
  }
  if (!phys.explicit_load.empty() && static_cast<int>(phys.explicit_load.size()) != L.size()) {
    throw InvalidArgument("assemble: explicit load size mismatch");
  }
  if (!phys.discrete_load.empty() && static_cast<int>(phys.discrete_load.size()) != L.size()) {
    throw InvalidArgument("assemble: discrete load size mismatch");
  }
  const bool spatial = mode == Mode::spatial;
  const bool jac = mode == Mode::jacobian;
  const double theta = spatial ? 1.0 : phys.theta;
  const double alpha = spatial ? 0.0 : phys.alpha;
  const double inv_re = 1.0 / phys.Re, inv_rem = 1.0 / phys.Re_m;
  const bool have_ref = !phys.mass_reference.empty();
  const auto& rule = triangle_rule(degree_);
  const auto& lc = local_coupling();

  std::array<double, kCellDofs> xl{}, xs{}, R{};
  LocalMatrix K;
  PointBasis pb;
  for (int cell = 0; cell < L.mesh().n_cells(); ++cell) {
    const auto& d = L.cell_dofs(cell).dofs;
    const CellGeometry geo = cell_geometry(L, cell);
    for (int i = 0; i < kCellDofs; ++i) {
      xl[i] = x.data[d[i]];
      xs[i] = have_ref ? phys.mass_reference[d[i]] : 0.0;
    }
    R.fill(0.0);
    if (jac) {
      for (auto& row : K) row.fill(0.0);
    }
    for (int q = 0; q < rule.size(); ++q) {
      tabulate(geo, rule.points[q], pb);
      const double w = rule.weights[q] * geo.area;
      double u[2] = {0, 0}, us[2] = {0, 0}, gu[2][2] = {{0, 0}, {0, 0}};
      for (int n = 0; n < 6; ++n) {
        for (int c = 0; c < 2; ++c) {
          const double a = xl[2 * n + c];
          u[c] += a * pb.p2[n];
          us[c] += xs[2 * n + c] * pb.p2[n];
          gu[c][0] += a * pb.p2_grad[n][0];
          gu[c][1] += a * pb.p2_grad[n][1];
        }
      }
      double B[2] = {0, 0}, Bs[2] = {0, 0}, j = 0;
      for (int k = 0; k < 3; ++k) {
        const double b = xl[kLocalB + k];
        B[0] += b * pb.ned[k][0];
        B[1] += b * pb.ned[k][1];
        Bs[0] += xs[kLocalB + k] * pb.ned[k][0];
        Bs[1] += xs[kLocalB + k] * pb.ned[k][1];
        j += b * pb.ned_curl[k];
      }
      double p = 0, gr[2] = {0, 0};
      for (int l = 0; l < 3; ++l) {
        p += xl[kLocalP + l] * pb.p1[l];
        gr[0] += xl[kLocalR + l] * pb.p1_grad[l][0];
        gr[1] += xl[kLocalR + l] * pb.p1_grad[l][1];
      }
      Vec2 f{0, 0}, gf{0, 0};
      if (phys.f || phys.g) {
        const mesh::Point pt = geo.map(rule.points[q]);
        if (phys.f) f = phys.f(pt.x, pt.y);
        if (phys.g) gf = phys.g(pt.x, pt.y);
      }
      const double divu = gu[0][0] + gu[1][1];
      const double lor[2] = {j * B[1], -j * B[0]};
      const double bperp[2] = {B[1], -B[0]};
      const double uxb = u[0] * B[1] - u[1] * B[0];

      for (int n = 0; n < 6; ++n) {
        const double phi = pb.p2[n];
        const Vec2& dphi = pb.p2_grad[n];
        for (int c = 0; c < 2; ++c) {
          const double visc = (gu[c][0] + gu[0][c]) * dphi[0] + (gu[c][1] + gu[1][c]) * dphi[1];
          const double conv = u[0] * gu[c][0] + u[1] * gu[c][1];
          double r = theta * (inv_re * visc + (conv + lor[c] - f[c]) * phi) + alpha * (u[c] - us[c]) * phi;
          if (!spatial) r -= p * dphi[c];
          R[2 * n + c] += w * r;
        }
      }
      for (int k = 0; k < 3; ++k) {
        const Vec2& psi = pb.ned[k];
        const double chi = pb.ned_curl[k];
        double r = theta * (inv_rem * j * chi - uxb * chi - (gf[0] * psi[0] + gf[1] * psi[1])) +
                   alpha * ((B[0] - Bs[0]) * psi[0] + (B[1] - Bs[1]) * psi[1]);
        if (!spatial) r -= gr[0] * psi[0] + gr[1] * psi[1];
        R[kLocalB + k] += w * r;
      }
      if (!spatial) {
        for (int l = 0; l < 3; ++l) {
          R[kLocalP + l] -= w * pb.p1[l] * divu;
          R[kLocalR + l] -= w * (pb.p1_grad[l][0] * B[0] + pb.p1_grad[l][1] * B[1]);
        }
      }
      if (!jac) continue;

      for (int n = 0; n < 6; ++n) {
        const double phin = pb.p2[n];
        const Vec2& dn = pb.p2_grad[n];
        for (int m = 0; m < 6; ++m) {
          const double phim = pb.p2[m];
          const Vec2& dm = pb.p2_grad[m];
          const double lap = dm[0] * dn[0] + dm[1] * dn[1];
          const double adv = (u[0] * dm[0] + u[1] * dm[1]) * phin;
          const double mass = phim * phin;
          for (int dd = 0; dd < 2; ++dd) {
            for (int c = 0; c < 2; ++c) {
              double v = inv_re * dm[dd] * dn[c] + phim * gu[dd][c] * phin;
              if (c == dd) v += inv_re * lap + adv;
              v *= theta;
              if (c == dd) v += alpha * mass;
              K[2 * n + dd][2 * m + c] += w * v;
            }
          }
        }
        for (int k = 0; k < 3; ++k) {
          const double chi = pb.ned_curl[k];
          const Vec2& psi = pb.ned[k];
          const double jp[2] = {psi[1], -psi[0]};
          for (int dd = 0; dd < 2; ++dd) {
            const double v = theta * (chi * bperp[dd] + j * jp[dd]) * phin;
            K[2 * n + dd][kLocalB + k] += w * v;
            // -(u x B) curl c, differentiated in u
            K[kLocalB + k][2 * n + dd] -= w * theta * chi * phin * bperp[dd];
          }
        }
        for (int l = 0; l < 3; ++l) {
          for (int dd = 0; dd < 2; ++dd) {
            const double v = -pb.p1[l] * dn[dd];
            K[2 * n + dd][kLocalP + l] += w * v;
            K[kLocalP + l][2 * n + dd] += w * v;
          }
        }
      }
      for (int k = 0; k < 3; ++k) {
        const Vec2& pk = pb.ned[k];
        const double ck = pb.ned_curl[k];
        for (int l = 0; l < 3; ++l) {
          const Vec2& pl = pb.ned[l];
          const double cl = pb.ned_curl[l];
          const double v = theta * (inv_rem * cl * ck - (u[0] * pl[1] - u[1] * pl[0]) * ck) +
                           alpha * (pl[0] * pk[0] + pl[1] * pk[1]);
          K[kLocalB + k][kLocalB + l] += w * v;
          const double cg = -(pb.p1_grad[l][0] * pk[0] + pb.p1_grad[l][1] * pk[1]);
          K[kLocalB + k][kLocalR + l] += w * cg;
          K[kLocalR + l][kLocalB + k] += w * cg;
        }
      }
    }
    if (vec) {
      const double s = jac ? -1.0 : 1.0;
      for (int i = 0; i < kCellDofs; ++i) (*vec)[d[i]] += s * R[i];
    }
    if (jac) {
      auto vals = mat->values();
      for (int i = 0; i < kCellDofs; ++i) {
        for (int jj = 0; jj < kCellDofs; ++jj) {
          if (!lc.on[i][jj]) continue;
          const int pos = mat->find(d[i], d[jj]);
          vals[pos] += K[i][jj];
        }
      }
    }
  }
  if (vec && !phys.discrete_load.empty()) {
    const double s = jac ? -theta : theta;
    for (std::size_t i = 0; i < vec->size(); ++i) (*vec)[i] += s * phys.discrete_load[i];
  }
  if (vec && !spatial && !phys.explicit_load.empty()) {
    const double s = jac ? -1.0 : 1.0;
    for (std::size_t i = 0; i < vec->size(); ++i) (*vec)[i] += s * phys.explicit_load[i];
  }
}

std::vector<double> Assembler::residual(const StateVector& x, const Physics& phys, const BcSet* bc) const {
  std::vector<double> r(layout_->size(), 0.0);
  assemble(x, phys, Mode::residual, &r, nullptr);
  if (bc) {
    const auto res = resolve(*layout_, *bc);
    for (int i = 0; i < layout_->size(); ++i)
      if (res.mask[i]) r[i] = 0.0;
  }
  return r;
}

std::vector<double> Assembler::spatial_terms(const StateVector& x, const Physics& phys) const {
  std::vector<double> r(layout_->size(), 0.0);
  assemble(x, phys, Mode::spatial, &r, nullptr);
  return r;
}

std::uint64_t next_revision() {
  static std::atomic<std::uint64_t> counter{0};
  return ++counter;
}

BlockSystem Assembler::jacobian(const StateVector& x, const Physics& phys) const {
  BlockSystem s;
  s.layout = layout_;
  s.matrix = pattern_;
  s.rhs.assign(layout_->size(), 0.0);
  assemble(x, phys, Mode::jacobian, &s.rhs, &s.matrix);
  s.revision = next_revision();
  return s;
}

linalg::CsrMatrix Assembler::nedelec_mass() const {
  const auto& L = *layout_;
  const auto& rule = triangle_rule(degree_);
  std::vector<linalg::Triplet> t;
  t.reserve(static_cast<std::size_t>(L.mesh().n_cells()) * 9);
  PointBasis pb;
  const int off = L.offset(Field::magnetic);
  for (int c = 0; c < L.mesh().n_cells(); ++c) {
    const auto& d = L.cell_dofs(c).dofs;
    const CellGeometry g = cell_geometry(L, c);
    double m[3][3] = {};
    for (int q = 0; q < rule.size(); ++q) {
      tabulate(g, rule.points[q], pb);
      const double w = rule.weights[q] * g.area;
      for (int k = 0; k < 3; ++k)
        for (int l = 0; l < 3; ++l) m[k][l] += w * (pb.ned[k][0] * pb.ned[l][0] + pb.ned[k][1] * pb.ned[l][1]);
    }
    for (int k = 0; k < 3; ++k)
      for (int l = 0; l < 3; ++l) t.push_back({d[kLocalB + k] - off, d[kLocalB + l] - off, m[k][l]});
  }
  return linalg::CsrMatrix::from_triplets(L.n_B(), L.n_B(), std::move(t));
}

linalg::CsrMatrix Assembler::p1_mass() const {
  const auto& L = *layout_;
  std::vector<linalg::Triplet> t;
  t.reserve(static_cast<std::size_t>(L.mesh().n_cells()) * 9);
  for (int c = 0; c < L.mesh().n_cells(); ++c) {
    const auto& tri = L.mesh().cell(c);
    const double a = L.mesh().signed_area(c);
    for (int k = 0; k < 3; ++k)
      for (int l = 0; l < 3; ++l)
        t.push_back({L.vertex_node(tri[k]), L.vertex_node(tri[l]), a * (k == l ? 2.0 : 1.0) / 12.0});
  }
  return linalg::CsrMatrix::from_triplets(L.n_p(), L.n_p(), std::move(t));
}

}  // namespace mhdmg::fem
