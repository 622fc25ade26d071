#include "mhdmg/bench/report.hpp"

#include <cstdio>
#include <fstream>
#include <ostream>

#include "mhdmg/error.hpp"

namespace mhdmg::bench {

std::string format_real(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace {

class Row {
 public:
  explicit Row(std::ostream& out) : out_(out) {}
  ~Row() { out_ << '\n'; }
  Row& operator<<(double v) { return put(format_real(v)); }
  Row& operator<<(int v) { return put(std::to_string(v)); }
  Row& operator<<(const std::string& v) { return put(v); }

 private:
  Row& put(const std::string& s) {
    if (!first_) out_ << ',';
    first_ = false;
    out_ << s;
    return *this;
  }
  std::ostream& out_;
  bool first_ = true;
};

}  // namespace

void write_csv(std::ostream& out, const std::vector<SolveRecord>& rows) {
  out << "re,rem,mesh,coarse,levels,variant,status,newton_steps,linear_iterations,mean_linear_iterations,"
         "final_residual,seconds\n";
  for (const auto& r : rows)
    Row(out) << r.Re << r.Re_m << r.mesh << r.coarse << r.levels << r.variant << r.status << r.newton_steps
             << r.linear_iterations << r.mean_linear_iterations << r.final_residual << r.seconds;
}

void write_csv(std::ostream& out, const std::vector<StageRecord>& rows) {
  out << "coarse,ha,re,rem,status,newton_steps,mean_linear_iterations,seconds\n";
  for (const auto& r : rows)
    Row(out) << r.coarse << r.Ha << r.Re << r.Re_m << r.status << r.newton_steps << r.mean_linear_iterations
             << r.seconds;
}

void write_csv(std::ostream& out, const std::vector<TimeRecord>& rows) {
  out << "step,time,newton_steps,linear_iterations,fluid_cfl,alfven_cfl,u_max,b_max,curl_origin,"
         "reconnection_rate,seconds\n";
  for (const auto& r : rows)
    Row(out) << r.step << r.time << r.newton_steps << r.linear_iterations << r.fluid_cfl << r.alfven_cfl << r.u_max
             << r.B_max << r.curl_origin << r.reconnection_rate << r.seconds;
}

void write_csv(std::ostream& out, const std::vector<NewtonRecord>& rows) {
  out << "context,step,residual,linear_rtol,linear_iterations,linear_residual,seconds\n";
  for (const auto& r : rows)
    Row(out) << r.context << r.step << r.residual << r.linear_rtol << r.linear_iterations << r.linear_residual
             << r.seconds;
}

void write_csv(std::ostream& out, const std::vector<ErrorRecord>& rows) {
  out << "mesh,h,u_l2,p_l2,b_l2,curl_b_l2,b_hcurl,r_l2\n";
  for (const auto& r : rows)
    Row(out) << r.mesh << r.h << r.u_l2 << r.p_l2 << r.B_l2 << r.curl_B_l2 << r.B_hcurl << r.r_l2;
}

template <class Record>
void save_csv(const std::string& path, const std::vector<Record>& rows) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot open '" + path + "' for writing");
  write_csv(f, rows);
  f.flush();
  if (!f) throw IoError("failed writing '" + path + "'");
}

template void save_csv(const std::string&, const std::vector<SolveRecord>&);
template void save_csv(const std::string&, const std::vector<StageRecord>&);
template void save_csv(const std::string&, const std::vector<TimeRecord>&);
template void save_csv(const std::string&, const std::vector<NewtonRecord>&);
template void save_csv(const std::string&, const std::vector<ErrorRecord>&);

}  // namespace mhdmg::bench
