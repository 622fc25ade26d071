#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace mhdmg::bench {

/// One Newton solve of a Hartmann problem.
struct SolveRecord {
  double Re = 0.0;
  double Re_m = 0.0;
  int mesh = 0;  // finest cells per side
  int coarse = 0;
  int levels = 0;
  std::string variant;
  std::string status;
  int newton_steps = 0;
  int linear_iterations = 0;
  double mean_linear_iterations = 0.0;
  double final_residual = 0.0;
  double seconds = 0.0;
};

struct StageRecord {
  int coarse = 0;
  double Ha = 0.0;
  double Re = 0.0;
  double Re_m = 0.0;
  std::string status;
  int newton_steps = 0;
  double mean_linear_iterations = 0.0;
  double seconds = 0.0;
};

struct TimeRecord {
  int step = 0;
  double time = 0.0;
  int newton_steps = 0;
  int linear_iterations = 0;
  double fluid_cfl = 0.0;
  double alfven_cfl = 0.0;
  double u_max = 0.0;
  double B_max = 0.0;
  double curl_origin = 0.0;
  double reconnection_rate = 0.0;
  double seconds = 0.0;
};

struct NewtonRecord {
  std::string context;
  int step = 0;
  double residual = 0.0;
  double linear_rtol = 0.0;
  int linear_iterations = 0;
  double linear_residual = 0.0;
  double seconds = 0.0;
};

struct ErrorRecord {
  int mesh = 0;
  double h = 0.0;
  double u_l2 = 0.0;
  double p_l2 = 0.0;
  double B_l2 = 0.0;
  double curl_B_l2 = 0.0;
  double B_hcurl = 0.0;
  double r_l2 = 0.0;
};

/// Header line plus one row per record; reals carry 17 significant digits.
void write_csv(std::ostream& out, const std::vector<SolveRecord>& rows);
void write_csv(std::ostream& out, const std::vector<StageRecord>& rows);
void write_csv(std::ostream& out, const std::vector<TimeRecord>& rows);
void write_csv(std::ostream& out, const std::vector<NewtonRecord>& rows);
void write_csv(std::ostream& out, const std::vector<ErrorRecord>& rows);

/// Writes to `path`; throws IoError on failure.
template <class Record>
void save_csv(const std::string& path, const std::vector<Record>& rows);

/// Reals formatted with %.17g.
std::string format_real(double v);

}  // namespace mhdmg::bench
