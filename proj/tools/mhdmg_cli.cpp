#include <CLI11.hpp>

#include <cstdio>
#include <map>
#include <string>
#include <vector>

#include "mhdmg/mhdmg.h"

namespace {

struct Verb {
  const char* name;
  const char* help;
  mhdmg_run_kind kind;
};

const Verb kVerbs[] = {
    {"hartmann", "solve one Hartmann problem", MHDMG_RUN_HARTMANN},
    {"hartmann-table", "sweep (Re, Re_m) and Vanka variants on the Hartmann problem", MHDMG_RUN_TABLE},
    {"continuation", "continue in the Hartmann number until Newton fails", MHDMG_RUN_CONTINUATION},
    {"island", "transient island coalescence with reconnection diagnostics", MHDMG_RUN_ISLAND},
    {"verify", "Hartmann discretization errors on a mesh sequence (direct solver)", MHDMG_RUN_VERIFY},
};

// Long flags forwarded to the configuration, with their help text.
const std::vector<std::pair<const char*, const char*>> kOptions = {
    {"mesh", "finest mesh cells per side (sets the number of levels)"},
    {"coarse", "coarsest mesh cells per side"},
    {"levels", "number of mesh levels"},
    {"cycle", "pre,post smoothing steps of the V-cycle"},
    {"cheb", "a,b Chebyshev interval"},
    {"variant", "Vanka variant: segregated, purist or coupled"},
    {"preconditioner", "multigrid, relaxation or direct"},
    {"pre", "pre-smoothing steps"},
    {"post", "post-smoothing steps"},
    {"cheb-a", "Chebyshev interval lower end (0 = variant default)"},
    {"cheb-b", "Chebyshev interval upper end"},
    {"newton-rtol", "required relative reduction of the nonlinear residual"},
    {"newton-atol", "absolute nonlinear residual target"},
    {"newton-max-steps", "Newton step cap"},
    {"linear-rtol", "FGMRES relative tolerance"},
    {"linear-atol", "FGMRES absolute tolerance"},
    {"linear-max-iterations", "FGMRES iteration cap"},
    {"ew", "Eisenstat-Walker linear tolerances (true/false)"},
    {"re", "fluid Reynolds number"},
    {"rem", "magnetic Reynolds number"},
    {"re-list", "comma-separated Re values for the table"},
    {"rem-list", "comma-separated Re_m values for the table"},
    {"variants", "comma-separated variants for the table"},
    {"ha-start", "first Hartmann number of the continuation"},
    {"ha-step", "Hartmann number increment"},
    {"ha-max", "largest Hartmann number attempted"},
    {"meshes", "comma-separated mesh sizes for verify"},
    {"mesh-kind", "diagonal or crossed (verify)"},
    {"dt", "time step"},
    {"tfinal", "final time"},
    {"epsilon", "island perturbation amplitude"},
    {"k", "island equilibrium parameter"},
    {"substeps", "Crank-Nicolson start-up sub-steps"},
};

void print_row(const char* row, void*) {
  std::fprintf(stderr, "%s\n", row);
}

int check(mhdmg_status s, const char* what) {
  if (s == MHDMG_OK) return 0;
  std::fprintf(stderr, "error: %s: %s (%s)\n", what, mhdmg_last_error(), mhdmg_status_string(s));
  return 1 + static_cast<int>(s);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Monolithic multigrid solver for 2D incompressible resistive MHD"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(mhdmg_version()));

  struct Parsed {
    std::string config, out, newton_log;
    bool quiet = false;
    std::map<std::string, std::string> values;
  };
  std::map<std::string, Parsed> parsed;
  std::map<CLI::App*, const Verb*> verbs;
  for (const auto& v : kVerbs) {
    auto* sub = app.add_subcommand(v.name, v.help);
    auto& p = parsed[v.name];
    sub->add_option("--config", p.config, "YAML file of option values (overrides flags)")->check(CLI::ExistingFile);
    sub->add_option("-o,--out", p.out, "CSV output path (stdout when omitted)");
    sub->add_option("--newton-log", p.newton_log, "CSV of every Newton step");
    sub->add_flag("-q,--quiet", p.quiet, "no per-row progress on stderr");
    for (const auto& [name, help] : kOptions) sub->add_option(std::string("--") + name, p.values[name], help);
    verbs[sub] = &v;
  }
  CLI11_PARSE(app, argc, argv);

  CLI::App* chosen = app.get_subcommands().front();
  const Verb& verb = *verbs.at(chosen);
  Parsed& p = parsed.at(verb.name);

  mhdmg_config* cfg = nullptr;
  if (int rc = check(mhdmg_config_create(verb.kind == MHDMG_RUN_ISLAND, &cfg), "config")) return rc;
  // flags first; a config file given alongside them takes precedence
  int rc = 0;
  for (const auto& [name, help] : kOptions) {
    if (rc || chosen->count(std::string("--") + name) == 0) continue;
    rc = check(mhdmg_config_set(cfg, name, p.values[name].c_str()), name);
  }
  if (!rc && !p.config.empty()) rc = check(mhdmg_config_load(cfg, p.config.c_str()), "config file");
  if (!p.quiet && !rc) mhdmg_config_set_progress(cfg, print_row, nullptr);

  mhdmg_result* res = nullptr;
  if (!rc) rc = check(mhdmg_run(cfg, verb.kind, &res), verb.name);
  if (!rc) {
    if (p.out.empty())
      std::fputs(mhdmg_result_csv(res, MHDMG_TABLE_MAIN), stdout);
    else
      rc = check(mhdmg_result_write(res, MHDMG_TABLE_MAIN, p.out.c_str()), "output");
    if (!rc && !p.newton_log.empty()) rc = check(mhdmg_result_write(res, MHDMG_TABLE_NEWTON, p.newton_log.c_str()), "newton log");
    if (!rc) std::fprintf(stderr, "%s\n", mhdmg_result_summary(res));
  }
  mhdmg_result_free(res);
  mhdmg_config_free(cfg);
  return rc;
}
