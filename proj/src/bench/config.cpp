#include "mhdmg/bench/config.hpp"

#include <yaml-cpp/yaml.h>

#include <charconv>
#include <functional>
#include <map>
#include <sstream>

#include "mhdmg/error.hpp"

namespace mhdmg::bench {

namespace {

double to_double(const std::string& key, const std::string& v) {
  try {
    std::size_t used = 0;
    const double d = std::stod(v, &used);
    if (used == v.size()) return d;
  } catch (const std::exception&) {
  }
  throw InvalidArgument("option '" + key + "' expects a number, got '" + v + "'");
}

int to_int(const std::string& key, const std::string& v) {
  int out = 0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size())
    throw InvalidArgument("option '" + key + "' expects an integer, got '" + v + "'");
  return out;
}

bool to_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "on" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "off" || v == "no") return false;
  throw InvalidArgument("option '" + key + "' expects true or false, got '" + v + "'");
}

std::vector<std::string> split(const std::string& v) {
  std::vector<std::string> out;
  std::stringstream ss(v);
  for (std::string item; std::getline(ss, item, ',');)
    if (!item.empty()) out.push_back(item);
  return out;
}

template <class T, class F>
std::vector<T> to_list(const std::string& key, const std::string& v, F convert) {
  std::vector<T> out;
  for (const auto& item : split(v)) out.push_back(convert(key, item));
  if (out.empty()) throw InvalidArgument("option '" + key + "' expects a non-empty comma-separated list");
  return out;
}

using Setter = std::function<void(RunConfig&, const std::string&, const std::string&)>;

const std::map<std::string, Setter>& setters() {
  static const std::map<std::string, Setter> table = [] {
    std::map<std::string, Setter> m;
    auto real = [&m](const char* k, double RunConfig::*f) {
      m[k] = [f](RunConfig& c, const std::string& key, const std::string& v) { c.*f = to_double(key, v); };
    };
    auto integer = [&m](const char* k, int RunConfig::*f) {
      m[k] = [f](RunConfig& c, const std::string& key, const std::string& v) { c.*f = to_int(key, v); };
    };
    auto text = [&m](const char* k, std::string RunConfig::*f) {
      m[k] = [f](RunConfig& c, const std::string&, const std::string& v) { c.*f = v; };
    };
    integer("coarse", &RunConfig::coarse);
    integer("levels", &RunConfig::levels);
    integer("mesh", &RunConfig::mesh);
    m["cycle"] = [](RunConfig& c, const std::string& key, const std::string& v) {
      const auto n = to_list<int>(key, v, to_int);
      if (n.size() != 2) throw InvalidArgument("option 'cycle' expects pre,post");
      c.pre = n[0];
      c.post = n[1];
    };
    m["cheb"] = [](RunConfig& c, const std::string& key, const std::string& v) {
      const auto ab = to_list<double>(key, v, to_double);
      if (ab.size() != 2) throw InvalidArgument("option 'cheb' expects a,b");
      c.cheb_a = ab[0];
      c.cheb_b = ab[1];
    };
    text("variant", &RunConfig::variant);
    text("preconditioner", &RunConfig::preconditioner);
    integer("pre", &RunConfig::pre);
    integer("post", &RunConfig::post);
    real("cheb_a", &RunConfig::cheb_a);
    real("cheb_b", &RunConfig::cheb_b);
    real("newton_rtol", &RunConfig::newton_rtol);
    real("newton_atol", &RunConfig::newton_atol);
    integer("newton_max_steps", &RunConfig::newton_max_steps);
    real("linear_rtol", &RunConfig::linear_rtol);
    real("linear_atol", &RunConfig::linear_atol);
    integer("linear_max_iterations", &RunConfig::linear_max_iterations);
    m["ew"] = [](RunConfig& c, const std::string& key, const std::string& v) { c.ew = to_bool(key, v); };
    real("re", &RunConfig::re);
    real("rem", &RunConfig::rem);
    m["re_list"] = [](RunConfig& c, const std::string& key, const std::string& v) {
      c.re_list = to_list<double>(key, v, to_double);
    };
    m["rem_list"] = [](RunConfig& c, const std::string& key, const std::string& v) {
      c.rem_list = to_list<double>(key, v, to_double);
    };
    m["variants"] = [](RunConfig& c, const std::string& key, const std::string& v) {
      c.variants = to_list<std::string>(key, v, [](const std::string&, const std::string& s) { return s; });
    };
    real("ha_start", &RunConfig::ha_start);
    real("ha_step", &RunConfig::ha_step);
    real("ha_max", &RunConfig::ha_max);
    m["meshes"] = [](RunConfig& c, const std::string& key, const std::string& v) {
      c.meshes = to_list<int>(key, v, to_int);
    };
    text("mesh_kind", &RunConfig::mesh_kind);
    real("dt", &RunConfig::dt);
    real("t_final", &RunConfig::t_final);
    real("tfinal", &RunConfig::t_final);
    real("epsilon", &RunConfig::epsilon);
    real("k", &RunConfig::k);
    integer("substeps", &RunConfig::substeps);
    return m;
  }();
  return table;
}

std::string scalar_or_list(const std::string& key, const YAML::Node& node) {
  if (node.IsScalar()) return node.as<std::string>();
  if (node.IsSequence()) {
    std::string out;
    for (const auto& item : node) {
      if (!item.IsScalar()) throw InvalidArgument("option '" + key + "' must be a flat list");
      out += (out.empty() ? "" : ",") + item.as<std::string>();
    }
    return out;
  }
  throw InvalidArgument("option '" + key + "' must be a scalar or a list");
}

}  // namespace

void RunConfig::set(const std::string& key, const std::string& value) {
  std::string k = key;
  for (auto& ch : k)
    if (ch == '-') ch = '_';
  const auto it = setters().find(k);
  if (it == setters().end()) throw InvalidArgument("unknown option '" + key + "'");
  it->second(*this, k, value);
}

void RunConfig::load_yaml(const std::string& path) {
  YAML::Node root;
  try {
    root = YAML::LoadFile(path);
  } catch (const YAML::BadFile&) {
    throw IoError("cannot read config file '" + path + "'");
  } catch (const YAML::Exception& e) {
    throw InvalidArgument("malformed config file '" + path + "': " + e.what());
  }
  if (root.IsNull()) return;
  if (!root.IsMap()) throw InvalidArgument("config file '" + path + "' must hold a mapping");
  for (const auto& kv : root) {
    const auto key = kv.first.as<std::string>();
    set(key, scalar_or_list(key, kv.second));
  }
}

int RunConfig::resolved_levels() const {
  if (mesh <= 0) return levels;
  int l = 1;
  for (int n = coarse; n < mesh; n *= 2) ++l;
  if ((coarse << (l - 1)) != mesh)
    throw InvalidArgument("mesh " + std::to_string(mesh) + " is not the coarse mesh " + std::to_string(coarse) +
                          " refined a whole number of times");
  return l;
}

void RunConfig::validate() const {
  if (coarse < 1 || levels < 1 || mesh < 0) throw InvalidArgument("coarse and levels must be positive");
  resolved_levels();
  if (pre < 0 || post < 0 || pre + post == 0) throw InvalidArgument("pre and post smoothing counts must be non-negative and not both zero");
  if ((cheb_a != 0.0 || cheb_b != 0.0) && !(cheb_a > 0.0 && cheb_b >= cheb_a))
    throw InvalidArgument("Chebyshev interval must satisfy 0 < cheb_a <= cheb_b");
  if (!(re > 0.0 && rem > 0.0)) throw InvalidArgument("Re and Re_m must be positive");
  if (!(dt > 0.0 && t_final >= 0.0) || substeps < 1) throw InvalidArgument("dt, t_final and substeps must be positive");
  for (int n : meshes)
    if (n < 1) throw InvalidArgument("mesh sizes must be positive");
  vanka::parse_variant(variant);
  parse_preconditioner(preconditioner);
  for (const auto& v : variants) vanka::parse_variant(v);
  if (mesh_kind != "diagonal" && mesh_kind != "crossed") throw InvalidArgument("mesh_kind must be diagonal or crossed");
  driver::validate(solver().newton);
}

SolverSettings RunConfig::solver() const {
  SolverSettings s;
  s.preconditioner = parse_preconditioner(preconditioner);
  s.cycle = default_cycle(vanka::parse_variant(variant), pre, post);
  if (cheb_a > 0.0) {
    s.cycle.cheb_a = cheb_a;
    s.cycle.cheb_b = cheb_b;
  }
  s.coarse = coarse;
  s.levels = resolved_levels();
  s.newton.rtol = newton_rtol;
  s.newton.atol = newton_atol;
  s.newton.max_steps = newton_max_steps;
  s.newton.linear = {linear_rtol, linear_atol, linear_max_iterations};
  s.newton.linear_mode = ew ? driver::LinearTolMode::eisenstat_walker : driver::LinearTolMode::fixed;
  return s;
}

std::vector<std::pair<double, double>> RunConfig::table_parameters() const {
  std::vector<std::pair<double, double>> out;
  for (double rm : rem_list)
    for (double r : re_list) out.push_back({r, rm});
  return out;
}

std::vector<vanka::Variant> RunConfig::table_variants() const {
  std::vector<vanka::Variant> out;
  for (const auto& v : variants) out.push_back(vanka::parse_variant(v));
  return out;
}

std::vector<driver::ContinuationStage> RunConfig::continuation_plan() const {
  return driver::hartmann_path(ha_start, ha_step, ha_max);
}

IslandSettings RunConfig::island() const {
  IslandSettings s = island_settings();
  s.problem.k = k;
  s.problem.epsilon = epsilon;
  s.problem.Re = re;
  s.problem.Re_m = rem;
  s.coarse = coarse;
  s.levels = resolved_levels();
  s.dt = dt;
  s.t_final = t_final;
  s.startup_substeps = substeps;
  s.solver = solver();
  return s;
}

RunConfig island_defaults() {
  RunConfig c;
  const auto s = island_settings();
  c.coarse = s.coarse;
  c.levels = s.levels;
  c.pre = s.solver.cycle.pre;
  c.post = s.solver.cycle.post;
  c.cheb_a = s.solver.cycle.cheb_a;
  c.cheb_b = s.solver.cycle.cheb_b;
  c.newton_rtol = s.solver.newton.rtol;
  c.newton_atol = s.solver.newton.atol;
  c.linear_rtol = s.solver.newton.linear.rtol;
  c.linear_atol = s.solver.newton.linear.atol;
  c.linear_max_iterations = s.solver.newton.linear.max_iterations;
  c.re = s.problem.Re;
  c.rem = s.problem.Re_m;
  c.epsilon = s.problem.epsilon;
  c.k = s.problem.k;
  c.dt = s.dt;
  c.t_final = s.t_final;
  c.substeps = s.startup_substeps;
  return c;
}

}  // namespace mhdmg::bench
