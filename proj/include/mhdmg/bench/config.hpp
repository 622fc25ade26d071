#pragma once

#include <string>
#include <vector>

#include "mhdmg/bench/runs.hpp"

namespace mhdmg::bench {

/// Every knob the command-line runs expose. Keys are the long flag names
/// with '-' replaced by '_' and can be set from YAML or key/value strings.
struct RunConfig {
  int coarse = 15;
  int levels = 4;
  int mesh = 0;  // finest cells per side; when set it fixes the number of levels
  std::string variant = "coupled";
  std::string preconditioner = "multigrid";
  int pre = 2;
  int post = 2;
  double cheb_a = 0.0;  // 0 selects the variant default
  double cheb_b = 0.0;
  double newton_rtol = 1e-5;
  double newton_atol = 1e-10;
  int newton_max_steps = 20;
  double linear_rtol = 1e-6;
  double linear_atol = 1e-6;
  int linear_max_iterations = 200;
  bool ew = false;

  double re = 4.0;
  double rem = 4.0;
  std::vector<double> re_list = {4, 16, 64};
  std::vector<double> rem_list = {4, 16, 64};
  std::vector<std::string> variants = {"segregated", "purist", "coupled"};

  double ha_start = 16.0;
  double ha_step = 16.0;
  double ha_max = 256.0;

  std::vector<int> meshes = {8, 16, 32, 64};
  std::string mesh_kind = "diagonal";

  double dt = 0.1;
  double t_final = 10.0;
  double epsilon = -0.01;
  double k = 0.2;
  int substeps = 10;

  /// Parses `value` for `key`; throws InvalidArgument on an unknown key or bad value.
  void set(const std::string& key, const std::string& value);
  /// Reads a flat YAML mapping of the same keys (lists as sequences).
  void load_yaml(const std::string& path);
  void validate() const;
  /// Levels implied by `mesh` (if set) or `levels`.
  int resolved_levels() const;

  SolverSettings solver() const;
  /// Table rows in sweep order: Re_m outer, Re inner.
  std::vector<std::pair<double, double>> table_parameters() const;
  std::vector<vanka::Variant> table_variants() const;
  std::vector<driver::ContinuationStage> continuation_plan() const;
  IslandSettings island() const;
};

/// Applies the island defaults (80 x 80 crossed from a 20 x 20 base,
/// V(3,3), Chebyshev [2, 10], Re = Re_m = 5000) to a fresh config.
RunConfig island_defaults();

}  // namespace mhdmg::bench
