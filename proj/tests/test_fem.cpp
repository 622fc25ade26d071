#include <gtest/gtest.h>

#include <Eigen/Dense>
#include <cmath>

#include "helpers.hpp"
#include "mhdmg/error.hpp"
#include "mhdmg/fem/assembly.hpp"
#include "mhdmg/fem/basis.hpp"
#include "mhdmg/fem/bcs.hpp"
#include "mhdmg/fem/projection.hpp"
#include "mhdmg/fem/quadrature.hpp"

using namespace mhdmg;
using namespace mhdmg::fem;
using mhdmg::testing::layout_for;
using mhdmg::testing::random_vector;
using mhdmg::testing::square_mesh;

namespace {

double factorial(int n) { return n <= 1 ? 1.0 : n * factorial(n - 1); }

std::vector<double> matvec(const linalg::CsrMatrix& a, const std::vector<double>& x) {
  std::vector<double> y(a.rows());
  a.multiply(x, y);
  return y;
}

double rel_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double num = 0, den = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    num += (a[i] - b[i]) * (a[i] - b[i]);
    den += b[i] * b[i];
  }
  return std::sqrt(num / den);
}

Physics sample_physics() {
  Physics ph;
  ph.Re = 3.0;
  ph.Re_m = 7.0;
  ph.f = [](double x, double y) { return Vec2{std::sin(x + y), x * y}; };
  ph.g = [](double x, double y) { return Vec2{x - y, std::cos(x)}; };
  return ph;
}

}  // namespace

TEST(Quadrature, RulesIntegrateMonomialsExactly) {
  for (int degree : {2, 6, 8}) {
    const auto& rule = triangle_rule(degree);
    EXPECT_GE(rule.degree, degree);
    for (int a = 0; a <= degree; ++a) {
      for (int b = 0; a + b <= degree; ++b) {
        for (int c = 0; a + b + c <= degree; ++c) {
          double s = 0;
          for (int q = 0; q < rule.size(); ++q) {
            const auto& l = rule.points[q];
            s += rule.weights[q] * std::pow(l[0], a) * std::pow(l[1], b) * std::pow(l[2], c);
          }
          const double exact = 2.0 * factorial(a) * factorial(b) * factorial(c) / factorial(a + b + c + 2);
          EXPECT_NEAR(s, exact, 1e-15) << degree << ": " << a << b << c;
        }
      }
    }
  }
  EXPECT_THROW(triangle_rule(9), InvalidArgument);
}

TEST(Quadrature, GaussLegendreUnit) {
  const auto& r = gauss_legendre_unit(4);
  for (int p = 0; p <= 7; ++p) {
    double s = 0;
    for (std::size_t q = 0; q < r.points.size(); ++q) s += r.weights[q] * std::pow(r.points[q], p);
    EXPECT_NEAR(s, 1.0 / (p + 1), 1e-15);
  }
}

TEST(Basis, P1IsNodalAtVertices) {
  const auto L = layout_for(square_mesh(2));
  const auto g = cell_geometry(*L, 3);
  PointBasis pb;
  for (int k = 0; k < 3; ++k) {
    std::array<double, 3> l{0, 0, 0};
    l[k] = 1;
    tabulate(g, l, pb);
    for (int j = 0; j < 3; ++j) EXPECT_DOUBLE_EQ(pb.p1[j], k == j ? 1.0 : 0.0);
    const auto back = barycentric(g, g.x[k]);
    for (int j = 0; j < 3; ++j) EXPECT_NEAR(back[j], k == j ? 1.0 : 0.0, 1e-15);
  }
}

TEST(Basis, P2PartitionOfUnity) {
  const auto L = layout_for(square_mesh(3, mesh::MeshKind::crossed));
  for (int c = 0; c < L->mesh().n_cells(); c += 5) {
    const auto t = eval_basis(*L, SpaceKind::p2, c, triangle_rule(6));
    for (std::size_t q = 0; q < t.values.size(); ++q) {
      double s = 0, gx = 0, gy = 0;
      for (int i = 0; i < 6; ++i) {
        s += t.values[q][i];
        gx += t.grads[q][i][0];
        gy += t.grads[q][i][1];
      }
      EXPECT_NEAR(s, 1.0, 1e-14);
      EXPECT_NEAR(gx, 0.0, 1e-12);
      EXPECT_NEAR(gy, 0.0, 1e-12);
    }
  }
}

TEST(Basis, NedelecMomentsAreKronecker) {
  const auto L = layout_for(square_mesh(3, mesh::MeshKind::crossed, -1, 1));
  const auto& m = L->mesh();
  const auto& gl = gauss_legendre_unit(3);
  PointBasis pb;
  for (int c = 0; c < m.n_cells(); ++c) {
    const auto g = cell_geometry(*L, c);
    for (int e = 0; e < 3; ++e) {
      const int edge = m.cell_edges(c)[e];
      const auto& a = m.vertex(m.edge(edge)[0]);
      const auto& b = m.vertex(m.edge(edge)[1]);
      for (int k = 0; k < 3; ++k) {
        double s = 0;
        for (std::size_t q = 0; q < gl.points.size(); ++q) {
          const double t = gl.points[q];
          tabulate(g, barycentric(g, {a.x + t * (b.x - a.x), a.y + t * (b.y - a.y)}), pb);
          s += gl.weights[q] * (pb.ned[k][0] * (b.x - a.x) + pb.ned[k][1] * (b.y - a.y));
        }
        EXPECT_NEAR(s, k == e ? 1.0 : 0.0, 1e-14);
      }
    }
  }
}

TEST(Basis, RejectsInvalidCell) {
  const auto L = layout_for(square_mesh(1));
  EXPECT_THROW(eval_basis(*L, SpaceKind::p1, 2, triangle_rule(2)), InvalidArgument);
}

TEST(Layout, BlockSizes) {
  const auto L = layout_for(square_mesh(4));
  const auto& m = L->mesh();
  EXPECT_EQ(L->n_u(), 2 * (m.n_vertices() + m.n_edges()));
  EXPECT_EQ(L->n_B(), m.n_edges());
  EXPECT_EQ(L->n_p(), m.n_vertices());
  EXPECT_EQ(L->n_r(), m.n_vertices());
  EXPECT_EQ(L->offset(Field::multiplier) + L->n_r(), L->size());
  StateVector x(L);
  EXPECT_EQ(x.block(Field::velocity).size() + x.block(Field::magnetic).size() + x.block(Field::pressure).size() +
                x.block(Field::multiplier).size(),
            x.data.size());
  const auto Lp = layout_for(std::make_shared<const mesh::Mesh>(
      mesh::apply_periodic_x(mesh::Mesh::build_structured({mesh::MeshKind::crossed, 4, 4, -1, 1, -1, 1}))));
  EXPECT_EQ(Lp->n_p(), Lp->mesh().n_vertices() - Lp->mesh().n_vertex_identifications());
  EXPECT_EQ(Lp->n_B(), Lp->mesh().n_edges() - Lp->mesh().n_edge_identifications());
}

TEST(Assembly, ZeroStateZeroResidual) {
  const auto L = layout_for(square_mesh(3));
  const Assembler A(L);
  const auto r = A.residual(StateVector(L), Physics{});
  for (double v : r) EXPECT_EQ(v, 0.0);
}

class JacobianConsistency : public ::testing::TestWithParam<std::tuple<int, bool>> {};

TEST_P(JacobianConsistency, FiniteDifferenceMatchesJacobian) {
  const auto [n, transient] = GetParam();
  const auto L = layout_for(square_mesh(n, mesh::MeshKind::diagonal, -0.5, 0.5));
  const Assembler A(L);
  Physics ph = sample_physics();
  if (transient) {
    ph.alpha = 1.5 / 0.1;
    ph.theta = 0.5;
    ph.mass_reference = random_vector(L->size(), 99);
    ph.explicit_load = random_vector(L->size(), 98);
  }
  for (unsigned trial = 0; trial < 10; ++trial) {
    StateVector x(L);
    x.data = random_vector(L->size(), 10 + trial);
    const auto sys = A.jacobian(x, ph);
    const auto r0 = A.residual(x, ph);
    for (int i = 0; i < L->size(); ++i) EXPECT_NEAR(sys.rhs[i], -r0[i], 1e-14 * (1 + std::abs(r0[i])));
    const auto d = random_vector(L->size(), 1000 + trial);
    const double eps = 1e-7;
    StateVector xp = x;
    for (int i = 0; i < L->size(); ++i) xp.data[i] += eps * d[i];
    const auto r1 = A.residual(xp, ph);
    std::vector<double> fd(L->size());
    for (int i = 0; i < L->size(); ++i) fd[i] = (r1[i] - r0[i]) / eps;
    EXPECT_LE(rel_diff(fd, matvec(sys.matrix, d)), 1e-5);
  }
}

INSTANTIATE_TEST_SUITE_P(Meshes, JacobianConsistency,
                         ::testing::Combine(::testing::Values(4, 8), ::testing::Bool()));

TEST(Assembly, LinearizationAboutZeroIsStokes) {
  const auto L = layout_for(square_mesh(4));
  const Assembler A(L);
  const auto sys = A.jacobian(StateVector(L), Physics{});
  const auto Z = sys.block(Field::velocity, Field::magnetic);
  const auto Y = sys.block(Field::magnetic, Field::velocity);
  for (double v : Z.values()) EXPECT_EQ(v, 0.0);
  for (double v : Y.values()) EXPECT_EQ(v, 0.0);
  const auto F = sys.block(Field::velocity, Field::velocity);
  for (int i = 0; i < F.rows(); ++i)
    for (int j = 0; j < i; ++j) EXPECT_NEAR(F.at(i, j), F.at(j, i), 1e-13);
}

TEST(Assembly, ConstraintBlocksAreTransposes) {
  const auto L = layout_for(square_mesh(3));
  const Assembler A(L);
  StateVector x(L);
  x.data = random_vector(L->size(), 5);
  const auto sys = A.jacobian(x, sample_physics());
  const auto B = sys.block(Field::pressure, Field::velocity);
  const auto Bt = sys.block(Field::velocity, Field::pressure).transpose();
  const auto C = sys.block(Field::multiplier, Field::magnetic);
  const auto Ct = sys.block(Field::magnetic, Field::multiplier).transpose();
  ASSERT_EQ(B.nnz(), Bt.nnz());
  for (int k = 0; k < B.nnz(); ++k) EXPECT_EQ(B.values()[k], Bt.values()[k]);
  for (int k = 0; k < C.nnz(); ++k) EXPECT_EQ(C.values()[k], Ct.values()[k]);
  for (auto [r, c] : {std::pair{Field::pressure, Field::pressure}, {Field::pressure, Field::multiplier},
                      {Field::multiplier, Field::pressure}, {Field::multiplier, Field::multiplier}}) {
    const auto blk = sys.block(r, c);
    for (double v : blk.values()) EXPECT_EQ(v, 0.0);
  }
}

TEST(Assembly, GradientConstraintOnSingleCell) {
  const auto m = std::make_shared<const mesh::Mesh>(mesh::Mesh::from_cells(
      {mesh::MeshKind::diagonal, 1, 1, 0, 2, 0, 1}, {{0.2, 0.1}, {1.7, 0.3}, {0.6, 0.9}}, {{{0, 1, 2}}}));
  const auto L = layout_for(m);
  const Assembler A(L);
  const auto sys = A.jacobian(StateVector(L), Physics{});
  const auto C = sys.block(Field::multiplier, Field::magnetic);
  const Vec2 Bc{1.0, -2.0};
  const auto Bh = interpolate(L, {{}, [&](double, double) { return Bc; }, {}, {}});
  const auto b = Bh.block(Field::magnetic);
  const std::vector<double> bv(b.begin(), b.end());
  const auto Cb = matvec(C, bv);
  const auto g = cell_geometry(*L, 0);
  for (int i = 0; i < 3; ++i) {
    const double hand = -g.area * (g.grad_lambda[i][0] * Bc[0] + g.grad_lambda[i][1] * Bc[1]);
    EXPECT_NEAR(Cb[L->vertex_node(m->cell(0)[i])], hand, 1e-14);
  }
}

TEST(Assembly, DivergenceFreeQuadraticIsInKernel) {
  for (auto kind : {mesh::MeshKind::diagonal, mesh::MeshKind::crossed}) {
    const auto L = layout_for(square_mesh(5, kind, -1, 1));
    const Assembler A(L);
    const auto sys = A.jacobian(StateVector(L), Physics{});
    const auto Bd = sys.block(Field::pressure, Field::velocity);
    const auto x = interpolate(L, {[](double x, double y) {
                                     return Vec2{x * x + 2 * x * y + 3 * y * y, -2 * x * y - y * y};
                                   },
                                   {}, {}, {}});
    const auto u = x.block(Field::velocity);
    const auto div = matvec(Bd, {u.begin(), u.end()});
    for (double v : div) EXPECT_NEAR(v, 0.0, 1e-12);
  }
}

TEST(Assembly, ExactSequenceGradientMapsToStiffness) {
  const auto L = layout_for(square_mesh(4, mesh::MeshKind::diagonal, -1, 1));
  const auto& m = L->mesh();
  const Assembler A(L);
  const auto C = A.jacobian(StateVector(L), Physics{}).block(Field::multiplier, Field::magnetic);
  Eigen::MatrixXd G = Eigen::MatrixXd::Zero(L->n_B(), L->n_p());
  for (int e = 0; e < m.n_edges(); ++e) {
    G(L->edge_node(e), L->vertex_node(m.edge(e)[1])) += 1.0;
    G(L->edge_node(e), L->vertex_node(m.edge(e)[0])) -= 1.0;
  }
  Eigen::MatrixXd K = Eigen::MatrixXd::Zero(L->n_p(), L->n_p());
  for (int c = 0; c < m.n_cells(); ++c) {
    const auto g = cell_geometry(*L, c);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j)
        K(L->vertex_node(m.cell(c)[i]), L->vertex_node(m.cell(c)[j])) +=
            g.area * (g.grad_lambda[i][0] * g.grad_lambda[j][0] + g.grad_lambda[i][1] * g.grad_lambda[j][1]);
  }
  Eigen::MatrixXd Cd = Eigen::MatrixXd::Zero(C.rows(), C.cols());
  for (int i = 0; i < C.rows(); ++i)
    for (int k = C.row_ptr()[i]; k < C.row_ptr()[i + 1]; ++k) Cd(i, C.col_idx()[k]) = C.values()[k];
  EXPECT_LT((Cd * G + K).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(Assembly, HigherQuadratureChangesNothing) {
  const auto L = layout_for(square_mesh(4, mesh::MeshKind::crossed, -1, 1));
  StateVector x(L);
  x.data = random_vector(L->size(), 77);
  Physics ph;
  ph.Re = 5;
  ph.Re_m = 2;
  ph.alpha = 3;
  const auto a6 = Assembler(L, 6).jacobian(x, ph);
  const auto a8 = Assembler(L, 8).jacobian(x, ph);
  for (int k = 0; k < a6.matrix.nnz(); ++k) EXPECT_NEAR(a6.matrix.values()[k], a8.matrix.values()[k], 1e-12);
  for (int i = 0; i < L->size(); ++i) EXPECT_NEAR(a6.rhs[i], a8.rhs[i], 1e-12);
}

TEST(Assembly, SpatialTermsSplitTheResidual) {
  const auto L = layout_for(square_mesh(3));
  const Assembler A(L);
  StateVector x(L);
  x.data = random_vector(L->size(), 3);
  Physics ph = sample_physics();
  const auto full = A.residual(x, ph);
  Physics half = ph;
  half.theta = 0.5;
  half.explicit_load = A.spatial_terms(x, ph);
  for (auto& v : half.explicit_load) v *= 0.5;
  const auto split = A.residual(x, half);
  for (int i = 0; i < L->size(); ++i) EXPECT_NEAR(split[i], full[i], 1e-12);
}

TEST(NedelecMass, ReferenceTriangle) {
  const auto m = std::make_shared<const mesh::Mesh>(
      mesh::Mesh::from_cells({mesh::MeshKind::diagonal, 1, 1, 0, 1, 0, 1}, {{0, 0}, {1, 0}, {0, 1}}, {{{0, 1, 2}}}));
  const auto L = layout_for(m);
  const auto M = Assembler(L).nedelec_mass();
  const double ref[3][3] = {{1.0 / 6, 0, 0}, {0, 1.0 / 3, 1.0 / 6}, {0, 1.0 / 6, 1.0 / 3}};
  for (int k = 0; k < 3; ++k)
    for (int l = 0; l < 3; ++l)
      EXPECT_NEAR(M.at(L->edge_node(m->cell_edges(0)[k]), L->edge_node(m->cell_edges(0)[l])), ref[k][l], 1e-15);
}

TEST(NedelecMass, PositiveDefiniteOnEightByEight) {
  const auto L = layout_for(square_mesh(8));
  const auto M = Assembler(L).nedelec_mass();
  Eigen::MatrixXd D = Eigen::MatrixXd::Zero(M.rows(), M.cols());
  for (int i = 0; i < M.rows(); ++i)
    for (int k = M.row_ptr()[i]; k < M.row_ptr()[i + 1]; ++k) D(i, M.col_idx()[k]) = M.values()[k];
  EXPECT_LT((D - D.transpose()).cwiseAbs().maxCoeff(), 1e-16);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(D);
  EXPECT_GT(es.eigenvalues().minCoeff(), 0.0);
}

TEST(NedelecMass, QuadraticFormIsSquaredNorm) {
  const auto L = layout_for(square_mesh(4, mesh::MeshKind::crossed, -1, 1));
  const auto M = Assembler(L).nedelec_mass();
  StateVector x(L);
  const auto v = random_vector(L->n_B(), 8);
  std::copy(v.begin(), v.end(), x.block(Field::magnetic).begin());
  const auto Mv = matvec(M, v);
  double form = 0;
  for (int i = 0; i < L->n_B(); ++i) form += v[i] * Mv[i];
  const auto& rule = triangle_rule(8);
  PointBasis pb;
  double norm2 = 0;
  for (int c = 0; c < L->mesh().n_cells(); ++c) {
    const auto g = cell_geometry(*L, c);
    for (int q = 0; q < rule.size(); ++q) {
      tabulate(g, rule.points[q], pb);
      const auto pv = evaluate(x, c, pb);
      norm2 += rule.weights[q] * g.area * (pv.B[0] * pv.B[0] + pv.B[1] * pv.B[1]);
    }
  }
  EXPECT_NEAR(form, norm2, 1e-13 * norm2);
}

TEST(Bcs, AllDirichletVelocityCount) {
  const auto L = layout_for(square_mesh(6));
  const auto& m = L->mesh();
  BoundarySpec spec;
  spec.u_sides = mesh::kAllSides;
  const auto bc = make_bcs(*L, spec);
  int bv = 0, be = 0;
  for (int v = 0; v < m.n_vertices(); ++v) bv += m.vertex_sides(v) != mesh::kInterior;
  for (int e = 0; e < m.n_edges(); ++e) be += m.edge_side(e) != mesh::kInterior;
  EXPECT_EQ(static_cast<int>(bc.dirichlet.size()), 2 * (bv + be));
}

TEST(Bcs, PressurePinRemovesOneRow) {
  const auto L = layout_for(square_mesh(4, mesh::MeshKind::diagonal, -0.5, 0.5));
  BoundarySpec spec;
  spec.pressure_pin = mesh::Point{0, 0};
  const auto bc = make_bcs(*L, spec);
  EXPECT_TRUE(bc.dirichlet.empty());
  ASSERT_TRUE(bc.pinned_pressure.has_value());
  auto sys = Assembler(L).jacobian(StateVector(L), Physics{});
  apply_bcs(sys, bc);
  int constrained_p = 0;
  for (int i = L->offset(Field::pressure); i < L->offset(Field::multiplier); ++i) constrained_p += sys.constrained[i];
  EXPECT_EQ(constrained_p, 1);
  const int row = L->p_dof(bc.pinned_pressure->first);
  EXPECT_EQ(sys.matrix.at(row, row), 1.0);
}

TEST(Bcs, ApplyIsIdempotentAndSymmetric) {
  const auto L = layout_for(square_mesh(4, mesh::MeshKind::diagonal, -0.5, 0.5));
  BoundarySpec spec;
  spec.u_sides = spec.B_sides = spec.r_sides = mesh::kAllSides;
  spec.data.u = [](double x, double y) { return Vec2{1 + x, y * y}; };
  spec.data.B = [](double x, double) { return Vec2{1, x}; };
  spec.pressure_pin = mesh::Point{0, 0};
  const auto bc = make_bcs(*L, spec);
  StateVector x(L);
  x.data = random_vector(L->size(), 4);
  auto once = Assembler(L).jacobian(x, sample_physics());
  apply_bcs(once, bc);
  auto twice = once;
  apply_bcs(twice, bc);
  for (int k = 0; k < once.matrix.nnz(); ++k) EXPECT_EQ(once.matrix.values()[k], twice.matrix.values()[k]);
  EXPECT_EQ(once.rhs, twice.rhs);
  const auto res = resolve(*L, bc);
  for (int i = 0; i < L->size(); ++i) {
    if (!res.mask[i]) continue;
    EXPECT_EQ(once.rhs[i], res.values[i]);
    for (int k = once.matrix.row_ptr()[i]; k < once.matrix.row_ptr()[i + 1]; ++k) {
      const int j = once.matrix.col_idx()[k];
      EXPECT_EQ(once.matrix.values()[k], i == j ? 1.0 : 0.0);
      EXPECT_EQ(once.matrix.at(j, i), i == j ? 1.0 : 0.0);
    }
  }
}

TEST(Bcs, RejectsInvalidSets) {
  const auto L = layout_for(square_mesh(2));
  BcSet bad;
  bad.dirichlet = {{L->size(), 0.0}};
  EXPECT_THROW(resolve(*L, bad), InvalidArgument);
  BcSet dup;
  dup.dirichlet = {{3, 0.0}, {3, 1.0}};
  EXPECT_THROW(resolve(*L, dup), InvalidArgument);
  BcSet pin;
  pin.dirichlet = {{L->p_dof(0), 0.0}};
  pin.pinned_pressure = std::make_pair(0, 0.0);
  EXPECT_THROW(resolve(*L, pin), InvalidArgument);
}

TEST(Projection, ConstantsAndLinearsReproduced) {
  const auto L = layout_for(square_mesh(5, mesh::MeshKind::crossed, -1, 1));
  const auto one = project_to_p1(*L, [](int, const PointBasis&, const mesh::Point&) { return 1.0; });
  for (double v : one) EXPECT_NEAR(v, 1.0, 1e-13);
  const auto lin = project_to_p1(*L, [](int, const PointBasis&, const mesh::Point& p) { return p.x + 2 * p.y; });
  const auto& m = L->mesh();
  for (int v = 0; v < m.n_vertices(); ++v)
    EXPECT_NEAR(lin[L->vertex_node(v)], m.vertex(v).x + 2 * m.vertex(v).y, 1e-13);
  const auto p0 = project_to_p0(*L, [](int, const PointBasis&, const mesh::Point& p) { return p.x; });
  for (int c = 0; c < m.n_cells(); ++c) {
    const auto& t = m.cell(c);
    EXPECT_NEAR(p0[c], (m.vertex(t[0]).x + m.vertex(t[1]).x + m.vertex(t[2]).x) / 3.0, 1e-14);
  }
}

TEST(Projection, InterpolantReproducesPolynomials) {
  const auto L = layout_for(square_mesh(3, mesh::MeshKind::diagonal, -1, 1));
  const AnalyticState f{[](double x, double y) { return Vec2{x * x - y, x * y}; },
                        [](double x, double y) { return Vec2{1 - 2 * y, 3 + 2 * x}; },
                        [](double x, double y) { return 1 + x - y; }, [](double x, double) { return x; }};
  const auto s = interpolate(L, f);
  for (const auto& p : {mesh::Point{0.1, 0.2}, mesh::Point{-0.7, 0.33}, mesh::Point{0.9, -0.95}}) {
    const auto v = evaluate_at(s, p);
    const auto u = f.u(p.x, p.y), B = f.B(p.x, p.y);
    EXPECT_NEAR(v.u[0], u[0], 1e-13);
    EXPECT_NEAR(v.u[1], u[1], 1e-13);
    EXPECT_NEAR(v.B[0], B[0], 1e-13);
    EXPECT_NEAR(v.B[1], B[1], 1e-13);
    EXPECT_NEAR(v.curl_B, 4.0, 1e-12);
    EXPECT_NEAR(v.p, f.p(p.x, p.y), 1e-13);
  }
  EXPECT_THROW(evaluate_at(s, {2, 0}), InvalidArgument);
}
