#include <gtest/gtest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "helpers.hpp"
#include "mhdmg/bench/config.hpp"
#include "mhdmg/bench/diagnostics.hpp"
#include "mhdmg/bench/hartmann.hpp"
#include "mhdmg/bench/island.hpp"
#include "mhdmg/bench/report.hpp"
#include "mhdmg/bench/runs.hpp"
#include "mhdmg/error.hpp"
#include "mhdmg/fem/projection.hpp"
#include "mhdmg/linalg/csr.hpp"

using namespace mhdmg;
using namespace mhdmg::bench;

namespace {

constexpr double kPi = 3.14159265358979323846;

// Closed forms written out independently of the library.
double ref_u1(double Re, double Re_m, double y) {
  const double ha = std::sqrt(Re * Re_m);
  const double G = 2 * ha * std::sinh(ha / 2) / (Re * (std::cosh(ha / 2) - 1));
  return G * Re / (2 * ha * std::tanh(ha / 2)) * (1 - std::cosh(y * ha) / std::cosh(ha / 2));
}

// Max-norm: with unit edge moments the Nedelec rows scale like h, so the
// l2 norm of the magnetic block does not shrink even for a consistent state.
double residual_norm(const fem::Assembler& as, const fem::StateVector& x, const fem::Physics& ph,
                     const fem::BcSet& bcs) {
  double m = 0.0;
  for (double v : as.residual(x, ph, &bcs)) m = std::max(m, std::abs(v));
  return m;
}

}  // namespace

TEST(HartmannProblem, MatchesIndependentClosedForm) {
  for (double re : {4.0, 64.0}) {
    for (double rm : {4.0, 16.0}) {
      const Hartmann h{re, rm};
      for (double y : {-0.5, -0.3, 0.0, 0.1, 0.45, 0.5}) EXPECT_NEAR(h.u1(y), ref_u1(re, rm, y), 1e-12) << y;
    }
  }
}

TEST(HartmannProblem, WallValuesVanish) {
  const Hartmann h{16, 64};
  for (double y : {-0.5, 0.5}) {
    EXPECT_NEAR(h.u1(y), 0.0, 1e-13);
    EXPECT_NEAR(h.B1(y), 0.0, 1e-13);
  }
  EXPECT_DOUBLE_EQ(h.exact().r(0.2, 0.3), 0.0);
  EXPECT_NEAR(h.exact().p(0.0, 0.0), 0.0, 1e-15);
}

TEST(HartmannProblem, SatisfiesOneDimensionalEquations) {
  // -(1/Re) u1'' - G - B1' = 0 and (1/Re_m) B1'' + u1' = 0, by central differences
  const Hartmann h{16, 4};
  const double d = 1e-4;
  for (double y : {-0.4, -0.1, 0.0, 0.25, 0.4}) {
    const double u2 = (h.u1(y + d) - 2 * h.u1(y) + h.u1(y - d)) / (d * d);
    const double u1p = (h.u1(y + d) - h.u1(y - d)) / (2 * d);
    const double b1p = (h.B1(y + d) - h.B1(y - d)) / (2 * d);
    const double b2 = (h.B1(y + d) - 2 * h.B1(y) + h.B1(y - d)) / (d * d);
    EXPECT_NEAR(-u2 / h.Re - h.G() - b1p, 0.0, 1e-5) << y;
    EXPECT_NEAR(b2 / h.Re_m + u1p, 0.0, 1e-5) << y;
    EXPECT_NEAR(h.dB1(y), b1p, 1e-6);
  }
}

TEST(HartmannProblem, LargeHartmannNumberStaysFinite) {
  const Hartmann h{2000, 2000};
  EXPECT_TRUE(std::isfinite(h.u1(0.0)));
  EXPECT_TRUE(std::isfinite(h.u1(0.49)));
  EXPECT_GT(h.u1(0.0), 0.0);
}

TEST(HartmannProblem, InterpolantResidualVanishesUnderRefinement) {
  const Hartmann h{4, 4};
  double prev = 0.0;
  for (int n : {4, 8, 16, 32}) {
    auto L = mhdmg::testing::layout_for(std::make_shared<const mesh::Mesh>(mesh::Mesh::build_structured(Hartmann::domain(n))));
    fem::Assembler as(L);
    const auto bcs = fem::make_bcs(*L, h.boundary());
    auto x = fem::interpolate(L, h.exact());
    fem::impose(x, bcs);
    const double r = residual_norm(as, x, h.physics(), bcs);
    if (prev > 0.0) EXPECT_LT(r, 0.6 * prev) << n;
    prev = r;
  }
}

TEST(HartmannProblem, RejectsBadInput) {
  EXPECT_THROW(Hartmann::domain(0), InvalidArgument);
  EXPECT_THROW((Hartmann{0.0, 4.0}.physics()), InvalidArgument);
}

TEST(IslandProblem, EquilibriumIsDivergenceFreeAndBalanced) {
  const Island isl;
  const auto eq = isl.equilibrium();
  const double d = 1e-5;
  for (auto [x, y] : {std::pair{0.1, 0.2}, std::pair{-0.7, 0.4}, std::pair{0.33, -0.9}}) {
    const double div = (eq.B(x + d, y)[0] - eq.B(x - d, y)[0] + eq.B(x, y + d)[1] - eq.B(x, y - d)[1]) / (2 * d);
    EXPECT_NEAR(div, 0.0, 1e-8);
    // grad p = j (B2, -B1) with j = dB2/dx - dB1/dy
    const auto B = eq.B(x, y);
    const double j = (eq.B(x + d, y)[1] - eq.B(x - d, y)[1] - eq.B(x, y + d)[0] + eq.B(x, y - d)[0]) / (2 * d);
    EXPECT_NEAR(j, isl.equilibrium_curl_B()(x, y), 1e-6);
    const double px = (eq.p(x + d, y) - eq.p(x - d, y)) / (2 * d);
    const double py = (eq.p(x, y + d) - eq.p(x, y - d)) / (2 * d);
    EXPECT_NEAR(px + j * B[1], 0.0, 1e-6);
    EXPECT_NEAR(py - j * B[0], 0.0, 1e-6);
  }
}

TEST(IslandProblem, CurlAtOriginMatchesClosedForm) {
  const Island isl;
  const double k = isl.k;
  EXPECT_NEAR(isl.equilibrium_curl_B()(0.0, 0.0), -2 * kPi * (1 - k) / (1 + k), 1e-12);
  // projected curl of the interpolant converges to it
  double prev = 1e9;
  for (int n : {16, 32, 64}) {
    auto L = mhdmg::testing::layout_for(std::make_shared<const mesh::Mesh>(Island::mesh(n)));
    const auto x = fem::interpolate(L, isl.equilibrium());
    const double err = std::abs(projected_curl_at(x, {0, 0}) + 2 * kPi * (1 - k) / (1 + k));
    EXPECT_LT(err, prev);
    prev = err;
  }
  EXPECT_LT(prev, 0.02);
}

TEST(IslandProblem, EquilibriumResidualVanishesUnderRefinement) {
  const Island isl;
  double prev = 0.0;
  for (int n : {8, 16, 32}) {
    auto L = mhdmg::testing::layout_for(std::make_shared<const mesh::Mesh>(Island::mesh(n)));
    fem::Assembler as(L);
    Island eq = isl;
    eq.epsilon = 0.0;
    const auto bcs = fem::make_bcs(*L, eq.boundary());
    auto x = fem::interpolate(L, eq.equilibrium());
    fem::impose(x, bcs);
    const double r = residual_norm(as, x, eq.physics(), bcs);
    if (prev > 0.0) EXPECT_LT(r, 0.6 * prev) << n;
    prev = r;
  }
}

TEST(IslandProblem, MeshIsCrossedAndPeriodic) {
  const auto m = Island::mesh(4);
  EXPECT_EQ(m.n_cells(), 4 * 16);
  EXPECT_TRUE(m.periodic_x());
  EXPECT_GE(m.find_vertex({0, 0}), 0);
}

TEST(Diagnostics, FieldErrorsVanishForRepresentableFields) {
  auto L = mhdmg::testing::layout_for(mhdmg::testing::square_mesh(3));
  fem::AnalyticState s;
  s.u = [](double x, double y) { return fem::Vec2{x * x - y, 2 * x * y}; };
  s.B = [](double x, double y) { return fem::Vec2{1 - y, 2 + x}; };  // lowest-order Nedelec field
  s.p = [](double x, double y) { return 3 * x - y + 7; };
  s.r = [](double x, double) { return x; };
  const auto x = fem::interpolate(L, s);
  const auto e = field_errors(x, s, [](double, double) { return 2.0; });
  EXPECT_LT(e.u_l2, 1e-13);
  EXPECT_LT(e.p_l2, 1e-13);
  EXPECT_LT(e.B_l2, 1e-13);
  EXPECT_LT(e.curl_B_l2, 1e-13);
  EXPECT_LT(e.r_l2, 1e-13);
}

TEST(Diagnostics, PressureErrorIgnoresConstantShift) {
  auto L = mhdmg::testing::layout_for(mhdmg::testing::square_mesh(2));
  fem::AnalyticState s;
  s.p = [](double x, double) { return x; };
  const auto x = fem::interpolate(L, s);
  fem::AnalyticState shifted = s;
  shifted.p = [](double x, double) { return x + 5; };
  EXPECT_LT(field_errors(x, shifted, nullptr).p_l2, 1e-13);
}

TEST(Diagnostics, CflOfUnitFlowIsStepOverShortestEdge) {
  auto m = std::make_shared<const mesh::Mesh>(Island::mesh(8));
  auto L = mhdmg::testing::layout_for(m);
  fem::AnalyticState s;
  s.u = [](double, double) { return fem::Vec2{1.0, 0.0}; };
  const auto c = cfl_numbers(fem::interpolate(L, s), 0.1);
  EXPECT_NEAR(c.u_max, 1.0, 1e-13);
  EXPECT_NEAR(c.fluid, 0.1 / m->shortest_edge(), 1e-12);
  EXPECT_DOUBLE_EQ(c.alfven, 0.0);
}

TEST(Diagnostics, IslandEquilibriumFieldMaxima) {
  const Island isl;
  auto L = mhdmg::testing::layout_for(std::make_shared<const mesh::Mesh>(Island::mesh(64)));
  const auto c = cfl_numbers(fem::interpolate(L, isl.equilibrium()), 0.1);
  EXPECT_DOUBLE_EQ(c.fluid, 0.0);
  double dense = 0.0;
  const int n = 2001;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const double x = -1 + 2.0 * i / (n - 1), y = -1 + 2.0 * j / (n - 1);
      const auto B = isl.equilibrium().B(x, y);
      dense = std::max(dense, std::hypot(B[0], B[1]));
    }
  }
  EXPECT_NEAR(c.B_max, dense, 0.01 * dense);
}

TEST(Diagnostics, ReconnectionRateScaling) {
  EXPECT_DOUBLE_EQ(reconnection_rate(3.0, 1.0, 16.0), 0.5);
  EXPECT_DOUBLE_EQ(reconnection_rate(1.0, 1.0, 5000.0), 0.0);
}

TEST(Diagnostics, ProjectedCurlRequiresVertex) {
  auto L = mhdmg::testing::layout_for(mhdmg::testing::square_mesh(2));
  fem::StateVector x(L);
  EXPECT_THROW(projected_curl_at(x, {0.3, 0.3}), InvalidArgument);
  EXPECT_DOUBLE_EQ(projected_curl_at(x, {0.5, 0.5}), 0.0);
}

TEST(Report, EmptyTablesHaveHeaderOnly) {
  std::ostringstream a, b, c, d, e;
  write_csv(a, std::vector<SolveRecord>{});
  write_csv(b, std::vector<StageRecord>{});
  write_csv(c, std::vector<TimeRecord>{});
  write_csv(d, std::vector<NewtonRecord>{});
  write_csv(e, std::vector<ErrorRecord>{});
  EXPECT_EQ(a.str(),
            "re,rem,mesh,coarse,levels,variant,status,newton_steps,linear_iterations,mean_linear_iterations,"
            "final_residual,seconds\n");
  EXPECT_EQ(b.str(), "coarse,ha,re,rem,status,newton_steps,mean_linear_iterations,seconds\n");
  EXPECT_EQ(c.str(),
            "step,time,newton_steps,linear_iterations,fluid_cfl,alfven_cfl,u_max,b_max,curl_origin,"
            "reconnection_rate,seconds\n");
  EXPECT_EQ(d.str(), "context,step,residual,linear_rtol,linear_iterations,linear_residual,seconds\n");
  EXPECT_EQ(e.str(), "mesh,h,u_l2,p_l2,b_l2,curl_b_l2,b_hcurl,r_l2\n");
}

TEST(Report, RealsRoundTripExactly) {
  const double v = 0.1 + 0.2;
  std::ostringstream out;
  write_csv(out, std::vector<ErrorRecord>{{8, 0.125, v, 1.0 / 3.0, 0, 0, 0, 0}});
  std::istringstream in(out.str());
  std::string header, row;
  std::getline(in, header);
  std::getline(in, row);
  std::vector<std::string> cells;
  std::stringstream ss(row);
  for (std::string c; std::getline(ss, c, ',');) cells.push_back(c);
  ASSERT_EQ(cells.size(), 8u);
  EXPECT_EQ(cells[0], "8");
  EXPECT_EQ(std::stod(cells[2]), v);
  EXPECT_EQ(std::stod(cells[3]), 1.0 / 3.0);
}

TEST(Report, DeterministicAndSavedToDisk) {
  std::vector<StageRecord> rows{{15, 16, 16, 16, "converged", 4, 7.25, 1.5}};
  std::ostringstream a, b;
  write_csv(a, rows);
  write_csv(b, rows);
  EXPECT_EQ(a.str(), b.str());
  const auto path = (std::filesystem::temp_directory_path() / "mhdmg_report_test.csv").string();
  save_csv(path, rows);
  std::ifstream in(path);
  std::stringstream got;
  got << in.rdbuf();
  EXPECT_EQ(got.str(), a.str());
  std::filesystem::remove(path);
  EXPECT_THROW(save_csv("/nonexistent-dir/x.csv", rows), IoError);
}

TEST(Config, SetsAndValidatesKeys) {
  RunConfig c;
  c.set("coarse", "4");
  c.set("mesh", "16");
  c.set("cycle", "3,1");
  c.set("cheb", "1.5,16");
  c.set("variant", "purist");
  c.set("newton-rtol", "1e-8");
  c.set("re-list", "4,16");
  c.set("ew", "true");
  EXPECT_EQ(c.resolved_levels(), 3);
  c.validate();
  const auto s = c.solver();
  EXPECT_EQ(s.levels, 3);
  EXPECT_EQ(s.finest(), 16);
  EXPECT_EQ(s.cycle.pre, 3);
  EXPECT_EQ(s.cycle.post, 1);
  EXPECT_DOUBLE_EQ(s.cycle.cheb_b, 16.0);
  EXPECT_EQ(s.cycle.variant, vanka::Variant::purist);
  EXPECT_DOUBLE_EQ(s.newton.rtol, 1e-8);
  EXPECT_EQ(s.newton.linear_mode, driver::LinearTolMode::eisenstat_walker);
  EXPECT_EQ(c.table_parameters().size(), 6u);
  EXPECT_THROW(c.set("bogus", "1"), InvalidArgument);
  EXPECT_THROW(c.set("coarse", "4x"), InvalidArgument);
  EXPECT_THROW(c.set("cycle", "1"), InvalidArgument);
  c.set("mesh", "20");
  EXPECT_THROW(c.validate(), InvalidArgument);
}

TEST(Config, VariantDefaultsSelectTunedIntervals) {
  RunConfig c;
  for (auto [name, a, b] : {std::tuple{"segregated", 1.5, 8.0}, std::tuple{"purist", 1.5, 16.0},
                            std::tuple{"coupled", 2.0, 8.0}}) {
    c.set("variant", name);
    EXPECT_DOUBLE_EQ(c.solver().cycle.cheb_a, a);
    EXPECT_DOUBLE_EQ(c.solver().cycle.cheb_b, b);
  }
  const auto isl = island_defaults().island();
  EXPECT_EQ(isl.solver.cycle.pre, 3);
  EXPECT_DOUBLE_EQ(isl.solver.cycle.cheb_b, 10.0);
  EXPECT_EQ(isl.solver.finest(), 80);
  EXPECT_DOUBLE_EQ(isl.problem.Re_m, 5000.0);
}

TEST(Config, LoadsYaml) {
  const auto path = (std::filesystem::temp_directory_path() / "mhdmg_config_test.yaml").string();
  {
    std::ofstream out(path);
    out << "coarse: 6\nlevels: 2\nvariants: [segregated, coupled]\nre_list: [4, 64]\ndt: 0.05\n";
  }
  RunConfig c;
  c.load_yaml(path);
  EXPECT_EQ(c.coarse, 6);
  EXPECT_EQ(c.levels, 2);
  EXPECT_EQ(c.variants, (std::vector<std::string>{"segregated", "coupled"}));
  EXPECT_EQ(c.re_list, (std::vector<double>{4, 64}));
  EXPECT_DOUBLE_EQ(c.dt, 0.05);
  {
    std::ofstream out(path);
    out << "nope: 1\n";
  }
  EXPECT_THROW(c.load_yaml(path), InvalidArgument);
  std::filesystem::remove(path);
  EXPECT_THROW(c.load_yaml(path), IoError);
}

TEST(Runs, SmallHartmannSolveConverges) {
  auto s = hartmann_settings();
  s.coarse = 4;
  s.levels = 2;
  std::vector<NewtonRecord> log;
  const auto o = solve_hartmann({4, 4}, s, nullptr, [&](const NewtonRecord& r) { log.push_back(r); });
  EXPECT_EQ(o.record.status, "converged");
  EXPECT_EQ(o.record.mesh, 8);
  EXPECT_EQ(static_cast<int>(log.size()), o.record.newton_steps);
  EXPECT_GT(o.record.mean_linear_iterations, 0.0);
}

TEST(Runs, TableRecordsFailuresAndContinues) {
  auto s = hartmann_settings();
  s.coarse = 4;
  s.levels = 2;
  s.newton.max_steps = 1;  // every cell stops early
  const auto rows = run_hartmann_table({{4, 4}, {16, 16}}, {vanka::Variant::segregated, vanka::Variant::coupled}, s);
  ASSERT_EQ(rows.size(), 4u);
  for (const auto& r : rows) EXPECT_EQ(r.status, "max_steps");
  EXPECT_EQ(rows[1].variant, "coupled");
  EXPECT_DOUBLE_EQ(rows[2].Re, 16.0);
}

TEST(Runs, ContinuationReportsEveryAttemptedStage) {
  auto s = hartmann_settings();
  s.coarse = 4;
  s.levels = 2;
  const auto rows = run_continuation(driver::hartmann_path(4, 4, 12), s);
  ASSERT_FALSE(rows.empty());
  EXPECT_DOUBLE_EQ(rows[0].Ha, 4.0);
  for (std::size_t i = 0; i + 1 < rows.size(); ++i) EXPECT_EQ(rows[i].status, "converged");
}

TEST(Runs, VerificationErrorsDecrease) {
  const auto rows = run_verification({4, 4}, {4, 8, 16});
  ASSERT_EQ(rows.size(), 3u);
  for (std::size_t i = 1; i < rows.size(); ++i) {
    EXPECT_LT(rows[i].u_l2, rows[i - 1].u_l2 / 3.5);
    EXPECT_LT(rows[i].B_l2, rows[i - 1].B_l2 / 1.7);
    EXPECT_LT(rows[i].r_l2, 1e-8);
  }
}
