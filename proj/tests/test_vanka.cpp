#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>
#include <random>
#include <map>
#include <set>

#include "helpers.hpp"
#include "mhdmg/error.hpp"
#include "mhdmg/linalg/dense_lu.hpp"
#include "mhdmg/vanka/patches.hpp"
#include "mhdmg/vanka/smoother.hpp"

using namespace mhdmg;
using namespace mhdmg::vanka;
using mhdmg::testing::bc_system;
using mhdmg::testing::layout_for;
using mhdmg::testing::random_vector;
using mhdmg::testing::square_mesh;

namespace {

std::shared_ptr<const fem::BlockSystem> shared_system(int n, double scale, unsigned seed = 7) {
  const auto L = layout_for(square_mesh(n));
  return std::make_shared<const fem::BlockSystem>(bc_system(L, random_vector(L->size(), seed, scale)));
}

std::vector<int> field_part(const PatchSpec& p) {
  return {p.dofs.begin(), p.dofs.end() - p.n_constraint};
}

// Velocity and magnetic DoFs of every cell containing v, by scanning all cells.
std::set<int> brute_force_field_dofs(const fem::SpaceLayout& L, int v) {
  std::set<int> out;
  const auto& m = L.mesh();
  for (int c = 0; c < m.n_cells(); ++c) {
    const auto& cell = m.cell(c);
    if (std::find(cell.begin(), cell.end(), v) == cell.end()) continue;
    const auto& d = L.cell_dofs(c).dofs;
    for (int k = 0; k < fem::kLocalP; ++k) out.insert(d[k]);
  }
  return out;
}

bool interior(const mesh::Mesh& m, int v) { return m.vertex_sides(v) == mesh::kInterior; }

int count_free(const fem::BlockSystem& s, fem::Field f) {
  int n = 0;
  const int lo = s.layout->offset(f);
  for (int i = lo; i < lo + s.layout->block_size(f); ++i) n += !s.constrained[i];
  return n;
}

}  // namespace

TEST(VankaPatches, CountsWithoutBoundaryConditions) {
  const auto L = layout_for(square_mesh(4));
  fem::StateVector x(L);
  const auto sys = fem::Assembler(L).jacobian(x, fem::Physics{});
  const int nv = L->mesh().n_vertices();
  EXPECT_EQ(build_patches(sys, Variant::purist).size(), 2u * nv);
  EXPECT_EQ(build_patches(sys, Variant::coupled).size(), 1u * nv);
  EXPECT_EQ(build_patches(sys, Variant::segregated).size(), 2u * nv);
}

TEST(VankaPatches, CountsFollowFreeConstraintDofs) {
  const auto sys = shared_system(6, 0.0);
  const int np = count_free(*sys, fem::Field::pressure), nr = count_free(*sys, fem::Field::multiplier);
  EXPECT_EQ(np, 7 * 7 - 1);
  EXPECT_EQ(nr, 5 * 5);
  EXPECT_EQ(build_patches(*sys, Variant::segregated).size(), std::size_t(np + nr));
  EXPECT_EQ(build_patches(*sys, Variant::purist).size(), std::size_t(np + nr));
  // the pinned centre vertex keeps a free multiplier, so every vertex seeds a patch
  EXPECT_EQ(build_patches(*sys, Variant::coupled).size(), std::size_t(7 * 7));
}

TEST(VankaPatches, CoupledInteriorPatchMatchesBruteForce) {
  const auto sys = shared_system(6, 0.0);
  const auto& L = *sys->layout;
  int checked = 0;
  for (const auto& p : build_patches(*sys, Variant::coupled)) {
    auto expect = brute_force_field_dofs(L, p.seed);
    const auto full = expect.size();
    std::erase_if(expect, [&](int d) { return sys->constrained[d] != 0; });
    const auto got = field_part(p);
    EXPECT_EQ(std::set<int>(got.begin(), got.end()), expect) << "seed " << p.seed;
    if (expect.size() == full && p.n_constraint == 2) {
      // 7 vertices and 12 edges carry P2 nodes, 12 edges carry Nedelec DoFs
      EXPECT_EQ(p.dofs.size(), 2u * (7 + 12) + 12 + 2);
      ++checked;
    }
  }
  // vertices two layers inside a 6x6 grid, minus the pinned centre
  EXPECT_EQ(checked, 3 * 3 - 1);
}

TEST(VankaPatches, PuristAndCoupledShareFieldSets) {
  for (int n : {4, 8, 16, 32}) {
    const auto L = layout_for(square_mesh(n));
    fem::StateVector x(L);
    auto sys = fem::Assembler(L).jacobian(x, fem::Physics{});
    const auto coupled = build_patches(sys, Variant::coupled);
    const auto purist = build_patches(sys, Variant::purist);
    std::map<int, std::vector<int>> by_seed;
    for (const auto& p : coupled) by_seed[p.seed] = field_part(p);
    std::map<int, int> seen;
    for (const auto& p : purist) {
      EXPECT_EQ(field_part(p), by_seed.at(p.seed));
      EXPECT_EQ(p.n_constraint, 1);
      ++seen[p.seed];
    }
    for (const auto& [seed, count] : seen) EXPECT_EQ(count, 2) << seed;
  }
}

TEST(VankaPatches, AlgebraicPuristReproducesSegregated) {
  const auto sys = shared_system(6, 0.3);
  const auto seg = build_patches(*sys, Variant::segregated);
  const auto alg = build_patches(*sys, Variant::purist, BuildMode::algebraic);
  ASSERT_EQ(seg.size(), alg.size());
  for (std::size_t i = 0; i < seg.size(); ++i) {
    EXPECT_EQ(seg[i].seed, alg[i].seed);
    EXPECT_EQ(seg[i].dofs, alg[i].dofs);
  }
  // purist patches built topologically are strictly larger
  const auto topo = build_patches(*sys, Variant::purist);
  for (std::size_t i = 0; i < seg.size(); ++i) EXPECT_GT(topo[i].dofs.size(), seg[i].dofs.size());
}

TEST(VankaPatches, ConstraintDofsCoveredOncePerFamily) {
  const auto sys = shared_system(5, 0.0);
  const auto& L = *sys->layout;
  for (auto v : {Variant::segregated, Variant::purist, Variant::coupled}) {
    std::vector<int> hits(L.size(), 0);
    for (const auto& p : build_patches(*sys, v))
      for (auto it = p.dofs.end() - p.n_constraint; it != p.dofs.end(); ++it) ++hits[*it];
    for (int d = L.offset(fem::Field::pressure); d < L.size(); ++d)
      EXPECT_EQ(hits[d], sys->constrained[d] ? 0 : 1) << to_string(v) << " dof " << d;
  }
}

TEST(VankaPatches, ParsesVariantNames) {
  EXPECT_EQ(parse_variant("coupled"), Variant::coupled);
  EXPECT_EQ(to_string(parse_variant("purist")), "purist");
  EXPECT_THROW(parse_variant("diagonal"), InvalidArgument);
}

TEST(VankaSmoother, PatchMatrixIsGatherOfGlobalEntries) {
  const auto sys = shared_system(4, 0.4);
  for (auto v : {Variant::segregated, Variant::purist, Variant::coupled}) {
    for (const auto& p : build_patches(*sys, v)) {
      const auto M = patch_matrix(*sys, p);
      for (std::size_t i = 0; i < p.dofs.size(); ++i)
        for (std::size_t j = 0; j < p.dofs.size(); ++j)
          ASSERT_EQ(M(i, j), sys->matrix.at(p.dofs[i], p.dofs[j]));
    }
  }
}

TEST(VankaSmoother, RegularizationAddsScaledNedelecMass) {
  const auto sys = shared_system(4, 0.4);
  const auto Mn = fem::Assembler(sys->layout).nedelec_mass();
  const int b0 = sys->layout->offset(fem::Field::magnetic);
  const auto p = build_patches(*sys, Variant::purist)[5];
  const auto plain = patch_matrix(*sys, p);
  const auto reg = patch_matrix(*sys, p, &Mn, 2.5);
  for (std::size_t i = 0; i < p.dofs.size(); ++i)
    for (std::size_t j = 0; j < p.dofs.size(); ++j) {
      const int a = p.dofs[i], b = p.dofs[j];
      const bool bb = sys->layout->field_of(a) == fem::Field::magnetic && sys->layout->field_of(b) == fem::Field::magnetic;
      EXPECT_NEAR(reg(i, j) - plain(i, j), bb ? 2.5 * Mn.at(a - b0, b - b0) : 0.0, 1e-14);
    }
}

TEST(VankaSmoother, UnregularizedPuristPressurePatchIsSingular) {
  // zero interior state (the Newton initial guess with homogeneous data)
  const auto sys = shared_system(8, 0.0);
  const auto Mn = fem::Assembler(sys->layout).nedelec_mass();
  const auto& m = sys->layout->mesh();
  int tested = 0;
  for (const auto& p : build_patches(*sys, Variant::purist)) {
    if (p.kind != PatchKind::purist_pressure || !interior(m, p.seed)) continue;
    const auto plain = patch_matrix(*sys, p);
    const linalg::DenseLu lu(plain);
    EXPECT_TRUE(lu.singular()) << "seed " << p.seed;
    EXPECT_EQ(lu.rank_estimate(plain), plain.rows() - 1);
    EXPECT_FALSE(linalg::DenseLu(patch_matrix(*sys, p, &Mn, 1.0)).singular());
    ++tested;
  }
  EXPECT_GT(tested, 10);
}

TEST(VankaSmoother, MultiplierPatchesAreNonsingularWithoutRegularization) {
  const auto sys = shared_system(8, 0.0);
  for (const auto& p : build_patches(*sys, Variant::purist))
    if (p.kind == PatchKind::purist_multiplier) EXPECT_FALSE(linalg::DenseLu(patch_matrix(*sys, p)).singular());
}

TEST(VankaSmoother, AllVariantsFactorizeOnStokesLimit) {
  const auto sys = shared_system(8, 0.0);
  const auto Mn = fem::Assembler(sys->layout).nedelec_mass();
  for (auto v : {Variant::segregated, Variant::purist, Variant::coupled})
    EXPECT_NO_THROW(PatchSmoother(sys, build_patches(*sys, v), &Mn)) << to_string(v);
}

TEST(VankaSmoother, SingularPatchErrorNamesSeed) {
  const auto sys = shared_system(6, 0.0);
  auto patches = build_patches(*sys, Variant::purist);
  for (auto& p : patches) p.regularized = false;
  try {
    PatchSmoother s(sys, patches, nullptr);
    FAIL() << "expected a singular patch";
  } catch (const SingularMatrix& e) {
    EXPECT_NE(std::string(e.what()).find("seed vertex"), std::string::npos);
    EXPECT_GE(e.position(), 0);
  }
}

TEST(VankaSmoother, ZeroResidualIsFixedPoint) {
  const auto sys = shared_system(6, 0.3);
  const auto Mn = fem::Assembler(sys->layout).nedelec_mass();
  const PatchSmoother s(sys, build_patches(*sys, Variant::coupled), &Mn);
  auto x = random_vector(sys->matrix.rows(), 3);
  for (int i = 0; i < sys->matrix.rows(); ++i)
    if (sys->constrained[i]) x[i] = 0.0;
  std::vector<double> b(x.size());
  sys->matrix.multiply(x, b);
  auto y = x;
  s.additive_sweep(b, y);
  for (std::size_t i = 0; i < x.size(); ++i) EXPECT_NEAR(y[i], x[i], 1e-12);
  s.smooth({2.0, 8.0, 3}, b, y);
  for (std::size_t i = 0; i < x.size(); ++i) EXPECT_NEAR(y[i], x[i], 1e-11);
}

TEST(VankaSmoother, WholeDomainPatchSolvesExactly) {
  const auto sys = shared_system(3, 0.3);
  const PatchSmoother s(sys, {whole_domain_patch(*sys)}, nullptr);
  auto b = random_vector(sys->matrix.rows(), 5);
  // homogeneous constrained rows: the patch leaves those DoFs at zero
  for (std::size_t i = 0; i < b.size(); ++i)
    if (sys->constrained[i]) b[i] = 0.0;
  std::vector<double> x(b.size(), 0.0), r(b.size());
  s.additive_sweep(b, x);
  sys->matrix.residual(b, x, r);
  EXPECT_LT(linalg::norm2(r), 1e-10 * linalg::norm2(b));
}

TEST(VankaSmoother, DisjointPatchesGiveBlockJacobi) {
  // 6-DoF toy system split into {0, 2, 4} and {1, 3, 5}
  const Eigen::MatrixXd A = (Eigen::MatrixXd(6, 6) << 4, 1, 0.5, 0, 0.2, 0,  //
                             1, 5, 0, 0.3, 0, 0.1,                          //
                             0.5, 0, 6, 1, 0.4, 0,                          //
                             0, 0.2, 1, 4, 0, 0.6,                          //
                             0.1, 0, 0.3, 0, 3, 1,                          //
                             0, 0.5, 0, 0.7, 1, 5)
                                .finished();
  std::vector<linalg::Triplet> t;
  for (int i = 0; i < 6; ++i)
    for (int j = 0; j < 6; ++j)
      if (A(i, j) != 0.0) t.push_back({i, j, A(i, j)});
  auto sys = std::make_shared<fem::BlockSystem>();
  sys->matrix = linalg::CsrMatrix::from_triplets(6, 6, t);
  PatchSpec even, odd;
  even.dofs = {0, 2, 4};
  odd.dofs = {1, 3, 5};
  const PatchSmoother s(sys, {even, odd}, nullptr);
  const std::vector<double> b{1, -2, 3, 0.5, -1, 2};
  std::vector<double> x{0.1, 0.2, -0.3, 0.4, 0.0, -0.1};

  // oracle: x + blockdiag(A_ee, A_oo)^{-1} (b - A x) in the permuted basis
  Eigen::VectorXd xe = Eigen::Map<const Eigen::VectorXd>(x.data(), 6);
  const Eigen::VectorXd r = Eigen::Map<const Eigen::VectorXd>(b.data(), 6) - A * xe;
  Eigen::VectorXd expect = xe;
  for (const auto& idx : {std::vector<int>{0, 2, 4}, std::vector<int>{1, 3, 5}}) {
    Eigen::Matrix3d blk;
    Eigen::Vector3d rb;
    for (int i = 0; i < 3; ++i) {
      rb[i] = r[idx[i]];
      for (int j = 0; j < 3; ++j) blk(i, j) = A(idx[i], idx[j]);
    }
    const Eigen::Vector3d d = blk.inverse() * rb;
    for (int i = 0; i < 3; ++i) expect[idx[i]] += d[i];
  }
  s.additive_sweep(b, x);
  for (int i = 0; i < 6; ++i) EXPECT_NEAR(x[i], expect[i], 1e-14);
}

TEST(VankaSmoother, SweepIndependentOfPatchOrder) {
  const auto sys = shared_system(6, 0.3);
  const auto Mn = fem::Assembler(sys->layout).nedelec_mass();
  auto patches = build_patches(*sys, Variant::purist);
  const PatchSmoother a(sys, patches, &Mn);
  std::mt19937 rng(11);
  std::shuffle(patches.begin(), patches.end(), rng);
  const PatchSmoother b(sys, patches, &Mn);
  const auto rhs = random_vector(sys->matrix.rows(), 9);
  std::vector<double> za(rhs.size()), zb(rhs.size());
  a.precondition(rhs, za);
  b.precondition(rhs, zb);
  EXPECT_LE(linalg::norm2(std::vector<double>([&] {
              std::vector<double> d(za.size());
              for (std::size_t i = 0; i < d.size(); ++i) d[i] = za[i] - zb[i];
              return d;
            }())),
            1e-13 * linalg::norm2(za));
}

TEST(VankaSmoother, SmoothIsLinear) {
  const auto sys = shared_system(6, 0.3);
  const auto Mn = fem::Assembler(sys->layout).nedelec_mass();
  const PatchSmoother s(sys, build_patches(*sys, Variant::coupled), &Mn);
  const int n = sys->matrix.rows();
  const auto b1 = random_vector(n, 1), b2 = random_vector(n, 2);
  const auto x1 = random_vector(n, 3), x2 = random_vector(n, 4);
  const double al = 0.7, be = -1.3;
  const linalg::ChebyshevParams cheb{2.0, 8.0, 2};
  auto y1 = x1, y2 = x2;
  s.smooth(cheb, b1, y1);
  s.smooth(cheb, b2, y2);
  std::vector<double> b(n), y(n);
  for (int i = 0; i < n; ++i) {
    b[i] = al * b1[i] + be * b2[i];
    y[i] = al * x1[i] + be * x2[i];
  }
  s.smooth(cheb, b, y);
  double scale = 0.0;
  for (int i = 0; i < n; ++i) scale = std::max(scale, std::abs(y[i]));
  for (int i = 0; i < n; ++i) EXPECT_NEAR(y[i], al * y1[i] + be * y2[i], 1e-12 * scale);
}

TEST(VankaSmoother, StaleSystemIsRejected) {
  const auto L = layout_for(square_mesh(4));
  auto sys = std::make_shared<fem::BlockSystem>(bc_system(L, std::vector<double>(L->size(), 0.0)));
  const PatchSmoother s(sys, build_patches(*sys, Variant::coupled), nullptr);
  std::vector<double> r(sys->matrix.rows(), 1.0), z(r.size());
  EXPECT_NO_THROW(s.precondition(r, z));
  fem::apply_bcs(*sys, fem::BcSet{});
  EXPECT_THROW(s.precondition(r, z), InvalidArgument);
}

TEST(VankaSmoother, DiagnosticsReportSizes) {
  const auto sys = shared_system(4, 0.0);
  const auto patches = build_patches(*sys, Variant::coupled);
  const PatchSmoother s(sys, patches, nullptr);
  const auto d = s.diagnostics();
  ASSERT_EQ(d.size(), patches.size());
  for (std::size_t i = 0; i < d.size(); ++i) {
    EXPECT_EQ(d[i].size, static_cast<int>(patches[i].dofs.size()));
    EXPECT_GT(d[i].pivot_ratio, 1e-12);
  }
}
