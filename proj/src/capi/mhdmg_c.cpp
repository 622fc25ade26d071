#include "mhdmg/mhdmg.h"

#include <cstdio>
#include <fstream>
#include <memory>
#include <sstream>
#include <string>

#include "mhdmg/bench/config.hpp"
#include "mhdmg/bench/diagnostics.hpp"
#include "mhdmg/bench/report.hpp"
#include "mhdmg/bench/runs.hpp"
#include "mhdmg/error.hpp"

struct mhdmg_config {
  mhdmg::bench::RunConfig cfg;
  bool island = false;
  mhdmg_progress_fn progress = nullptr;
  void* user = nullptr;
};

struct mhdmg_result {
  std::string main_csv;
  std::string newton_csv;
  std::size_t main_rows = 0;
  std::size_t newton_rows = 0;
  std::string summary;
};

namespace {

thread_local std::string last_error;

mhdmg_status fail(mhdmg_status s, const std::string& msg) {
  last_error = msg;
  return s;
}

template <class F>
mhdmg_status guarded(F&& body) {
  try {
    body();
    last_error.clear();
    return MHDMG_OK;
  } catch (const mhdmg::InvalidArgument& e) {
    return fail(MHDMG_INVALID_ARGUMENT, e.what());
  } catch (const mhdmg::IoError& e) {
    return fail(MHDMG_IO_ERROR, e.what());
  } catch (const mhdmg::SingularMatrix& e) {
    return fail(MHDMG_SINGULAR_MATRIX, e.what());
  } catch (const mhdmg::NonlinearDivergence& e) {
    return fail(MHDMG_NONLINEAR_DIVERGENCE, e.what());
  } catch (const mhdmg::LinearSolverFailure& e) {
    return fail(MHDMG_LINEAR_SOLVER_FAILURE, e.what());
  } catch (const std::exception& e) {
    return fail(MHDMG_INTERNAL_ERROR, e.what());
  } catch (...) {
    return fail(MHDMG_INTERNAL_ERROR, "unknown exception");
  }
}

template <class Record>
std::string csv(const std::vector<Record>& rows) {
  std::ostringstream out;
  mhdmg::bench::write_csv(out, rows);
  return out.str();
}

/// Forwards one record as its CSV row without the header.
template <class Record>
void emit(const mhdmg_config& c, const Record& r) {
  if (!c.progress) return;
  const auto text = csv(std::vector<Record>{r});
  const auto first = text.find('\n');
  auto row = text.substr(first + 1);
  if (!row.empty() && row.back() == '\n') row.pop_back();
  c.progress(row.c_str(), c.user);
}

std::string fmt(const char* f, double a) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

void run(const mhdmg_config& c, mhdmg_run_kind kind, mhdmg_result& res) {
  namespace b = mhdmg::bench;
  const auto& cfg = c.cfg;
  cfg.validate();
  std::vector<b::NewtonRecord> newton;
  auto log = [&newton](const b::NewtonRecord& r) { newton.push_back(r); };
  switch (kind) {
    case MHDMG_RUN_HARTMANN: {
      const b::Hartmann h{cfg.re, cfg.rem};
      const auto o = b::solve_hartmann(h, cfg.solver(), nullptr, log);
      emit(c, o.record);
      res.main_csv = csv(std::vector<b::SolveRecord>{o.record});
      res.main_rows = 1;
      const auto e = b::field_errors(o.state, h.exact(), h.exact_curl_B());
      res.summary = "hartmann " + o.record.status + ": " + std::to_string(o.record.newton_steps) + " Newton steps, " +
                    fmt("%.2f", o.record.mean_linear_iterations) + " linear iterations per step, u L2 error " +
                    fmt("%.3e", e.u_l2);
      break;
    }
    case MHDMG_RUN_TABLE: {
      const auto rows = b::run_hartmann_table(cfg.table_parameters(), cfg.table_variants(), cfg.solver(),
                                              [&c](const b::SolveRecord& r) { emit(c, r); }, log);
      res.main_csv = csv(rows);
      res.main_rows = rows.size();
      std::size_t ok = 0;
      for (const auto& r : rows) ok += r.status == "converged";
      res.summary = "table: " + std::to_string(ok) + " of " + std::to_string(rows.size()) + " solves converged";
      break;
    }
    case MHDMG_RUN_CONTINUATION: {
      const auto rows = b::run_continuation(cfg.continuation_plan(), cfg.solver(),
                                            [&c](const b::StageRecord& r) { emit(c, r); }, log);
      res.main_csv = csv(rows);
      res.main_rows = rows.size();
      double best = 0.0;
      for (const auto& r : rows)
        if (r.status == "converged") best = r.Ha;
      res.summary = "continuation: maximum converged Ha " + fmt("%g", best) + " with a " + std::to_string(cfg.coarse) +
                    "x" + std::to_string(cfg.coarse) + " coarsest grid";
      break;
    }
    case MHDMG_RUN_ISLAND: {
      const auto o = b::run_island(cfg.island(), [&c](const b::TimeRecord& r) { emit(c, r); }, log);
      res.main_csv = csv(o.steps);
      res.main_rows = o.steps.size();
      double peak = 0.0, t_peak = 0.0;
      for (const auto& r : o.steps)
        if (r.reconnection_rate > peak) peak = r.reconnection_rate, t_peak = r.time;
      res.summary = "island: " + std::to_string(o.steps.size() - 1) + " steps, peak reconnection rate " +
                    fmt("%.4e", peak) + " at t = " + fmt("%g", t_peak) +
                    (o.failure.empty() ? std::string() : ", stopped early: " + o.failure);
      break;
    }
    case MHDMG_RUN_VERIFY: {
      const auto kindm = cfg.mesh_kind == "crossed" ? mhdmg::mesh::MeshKind::crossed : mhdmg::mesh::MeshKind::diagonal;
      const auto rows = b::run_verification({cfg.re, cfg.rem}, cfg.meshes, kindm);
      for (const auto& r : rows) emit(c, r);
      res.main_csv = csv(rows);
      res.main_rows = rows.size();
      res.summary = "verify: " + std::to_string(rows.size()) + " meshes";
      break;
    }
    default:
      throw mhdmg::InvalidArgument("unknown run kind " + std::to_string(static_cast<int>(kind)));
  }
  res.newton_csv = csv(newton);
  res.newton_rows = newton.size();
}

}  // namespace

extern "C" {

const char* mhdmg_last_error(void) { return last_error.c_str(); }

const char* mhdmg_status_string(mhdmg_status s) {
  switch (s) {
    case MHDMG_OK: return "ok";
    case MHDMG_INVALID_ARGUMENT: return "invalid argument";
    case MHDMG_IO_ERROR: return "i/o error";
    case MHDMG_SINGULAR_MATRIX: return "singular matrix";
    case MHDMG_NONLINEAR_DIVERGENCE: return "nonlinear divergence";
    case MHDMG_LINEAR_SOLVER_FAILURE: return "linear solver failure";
    case MHDMG_INTERNAL_ERROR: return "internal error";
  }
  return "unknown status";
}

const char* mhdmg_version(void) { return "1.0.0"; }

mhdmg_status mhdmg_config_create(int island, mhdmg_config** out) {
  if (!out) return fail(MHDMG_INVALID_ARGUMENT, "null output pointer");
  return guarded([&] {
    auto* c = new mhdmg_config;
    c->island = island != 0;
    if (c->island) c->cfg = mhdmg::bench::island_defaults();
    *out = c;
  });
}

void mhdmg_config_free(mhdmg_config* cfg) { delete cfg; }

mhdmg_status mhdmg_config_set(mhdmg_config* cfg, const char* key, const char* value) {
  if (!cfg || !key || !value) return fail(MHDMG_INVALID_ARGUMENT, "null argument");
  return guarded([&] { cfg->cfg.set(key, value); });
}

mhdmg_status mhdmg_config_load(mhdmg_config* cfg, const char* yaml_path) {
  if (!cfg || !yaml_path) return fail(MHDMG_INVALID_ARGUMENT, "null argument");
  return guarded([&] { cfg->cfg.load_yaml(yaml_path); });
}

mhdmg_status mhdmg_config_set_progress(mhdmg_config* cfg, mhdmg_progress_fn fn, void* user) {
  if (!cfg) return fail(MHDMG_INVALID_ARGUMENT, "null config");
  cfg->progress = fn;
  cfg->user = user;
  return MHDMG_OK;
}

mhdmg_status mhdmg_run(const mhdmg_config* cfg, mhdmg_run_kind kind, mhdmg_result** out) {
  if (!cfg || !out) return fail(MHDMG_INVALID_ARGUMENT, "null argument");
  *out = nullptr;
  return guarded([&] {
    auto res = std::make_unique<mhdmg_result>();
    run(*cfg, kind, *res);
    *out = res.release();
  });
}

void mhdmg_result_free(mhdmg_result* res) { delete res; }

size_t mhdmg_result_rows(const mhdmg_result* res, mhdmg_table table) {
  if (!res) return 0;
  return table == MHDMG_TABLE_NEWTON ? res->newton_rows : res->main_rows;
}

const char* mhdmg_result_csv(const mhdmg_result* res, mhdmg_table table) {
  if (!res) return "";
  return table == MHDMG_TABLE_NEWTON ? res->newton_csv.c_str() : res->main_csv.c_str();
}

mhdmg_status mhdmg_result_write(const mhdmg_result* res, mhdmg_table table, const char* path) {
  if (!res || !path) return fail(MHDMG_INVALID_ARGUMENT, "null argument");
  std::ofstream out(path);
  if (!out) return fail(MHDMG_IO_ERROR, std::string("cannot open '") + path + "' for writing");
  out << mhdmg_result_csv(res, table);
  if (!out) return fail(MHDMG_IO_ERROR, std::string("write to '") + path + "' failed");
  last_error.clear();
  return MHDMG_OK;
}

const char* mhdmg_result_summary(const mhdmg_result* res) { return res ? res->summary.c_str() : ""; }

}  // extern "C"
