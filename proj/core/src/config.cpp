#include "crkfr/config.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "crkfr/errors.hpp"

namespace crkfr {

namespace pt = boost::property_tree;

const std::vector<std::string>& config_keys() {
  static const std::vector<std::string> keys = {
      "run.problem",           "run.final_time",         "run.max_steps",
      "run.seed",              "run.threads",            "mesh.nx",
      "mesh.ny",               "scheme.degree",          "scheme.points",
      "scheme.correction",     "scheme.tableau",         "scheme.dissipation",
      "scheme.trace",          "scheme.cfl_safety",      "scheme.cfl",
      "scheme.dt_speed",       "scheme.dt_include_ghost", "limiter.blend",
      "limiter.flux_limiter",  "limiter.scaling_limiter", "limiter.alpha_min",
      "limiter.alpha_max",     "limiter.sharpness",      "limiter.threshold_scale",
      "limiter.threshold_exponent", "limiter.smooth",    "limiter.mh_max_halvings",
      "boundary.left",         "boundary.right",         "boundary.bottom",
      "boundary.top",          "boundary.treatment",     "physics.gamma",
      "physics.source",        "physics.nu_t",           "physics.velocity",
      "output.dump",           "output.report",          "output.dump_interval",
      "output.log_every",
  };
  return keys;
}

namespace {

bool parse_bool(const std::string& key, std::string v) {
  std::transform(v.begin(), v.end(), v.begin(), [](unsigned char c) { return std::tolower(c); });
  if (v == "true" || v == "on" || v == "yes" || v == "1") return true;
  if (v == "false" || v == "off" || v == "no" || v == "0") return false;
  throw ConfigError(key + ": expected a boolean, got '" + v + "'");
}

double parse_num(const std::string& key, const std::string& v) {
  std::size_t pos = 0;
  double d = 0.0;
  try {
    d = std::stod(v, &pos);
  } catch (const std::exception&) {
    pos = 0;
  }
  if (pos == 0 || pos != v.size()) throw ConfigError(key + ": expected a number, got '" + v + "'");
  return d;
}

long parse_int(const std::string& key, const std::string& v) {
  std::size_t pos = 0;
  long d = 0;
  try {
    d = std::stol(v, &pos);
  } catch (const std::exception&) {
    pos = 0;
  }
  if (pos == 0 || pos != v.size()) throw ConfigError(key + ": expected an integer, got '" + v + "'");
  return d;
}

RunConfig from_tree(pt::ptree tree, const std::vector<std::string>& overrides) {
  for (const auto& o : overrides) {
    const auto eq = o.find('=');
    if (eq == std::string::npos || eq == 0) throw ConfigError("override '" + o + "' is not section.key=value");
    const std::string key = o.substr(0, eq);
    if (key.find('.') == std::string::npos) throw ConfigError("override key '" + key + "' needs a section");
    tree.put(key, o.substr(eq + 1));
  }
  const auto& known = config_keys();
  const std::set<std::string> known_set(known.begin(), known.end());
  std::set<std::string> sections;
  for (const auto& k : known) sections.insert(k.substr(0, k.find('.')));
  for (const auto& [sec, body] : tree) {
    if (!sections.count(sec)) throw ConfigError("unknown section [" + sec + "]");
    if (!body.data().empty()) throw ConfigError("key '" + sec + "' outside of a section");
    for (const auto& [key, val] : body) {
      if (!known_set.count(sec + "." + key)) throw ConfigError("unknown key '" + key + "' in [" + sec + "]");
      (void)val;
    }
  }
  auto get = [&](const std::string& k) { return tree.get_optional<std::string>(k); };

  RunConfig c;
  if (const auto v = get("run.problem")) c.problem = *v;
  else throw ConfigError("missing required key run.problem");
  problem_info(c.problem);
  if (const auto v = get("run.final_time")) c.final_time = parse_num("run.final_time", *v);
  if (const auto v = get("run.max_steps")) c.max_steps = parse_int("run.max_steps", *v);
  if (const auto v = get("run.seed")) c.seed = static_cast<std::uint64_t>(parse_int("run.seed", *v));
  if (const auto v = get("run.threads")) c.scheme.threads = static_cast<int>(parse_int("run.threads", *v));
  if (const auto v = get("mesh.nx")) c.nx = static_cast<int>(parse_int("mesh.nx", *v));
  if (const auto v = get("mesh.ny")) c.ny = static_cast<int>(parse_int("mesh.ny", *v));
  if (c.nx < 0 || c.ny < 0) throw ConfigError("mesh sizes must be positive");

  auto& s = c.scheme;
  if (const auto v = get("scheme.degree")) s.degree = static_cast<int>(parse_int("scheme.degree", *v));
  if (const auto v = get("scheme.points")) {
    try {
      s.points = parse_point_set(*v);
    } catch (const std::exception&) {
      throw ConfigError("scheme.points: unknown point set '" + *v + "'");
    }
  }
  if (const auto v = get("scheme.correction")) {
    const std::string expect = s.points == PointSet::GL ? "radau" : "g2";
    if (*v != expect)
      throw ConfigError("scheme.correction '" + *v + "' is not available with " +
                        std::string(to_string(s.points)) + " points (use " + expect + ")");
  }
  if (s.degree < 0 || s.degree > kMaxDegree) throw ConfigError("scheme.degree out of range");
  if (s.points == PointSet::GLL && s.degree == 0) throw ConfigError("GLL points need degree >= 1");
  if (const auto v = get("scheme.tableau")) {
    s.tableau = *v;
    tableau_by_name(*v);
  } else if (s.degree > 3) {
    throw ConfigError("no built-in tableau of order " + std::to_string(s.degree + 1) + "; set scheme.tableau");
  }
  if (const auto v = get("scheme.dissipation")) s.dissipation = parse_dissipation(*v);
  if (const auto v = get("scheme.trace")) s.trace = parse_trace_mode(*v);
  if (const auto v = get("scheme.cfl_safety")) s.cfl_safety = parse_num("scheme.cfl_safety", *v);
  if (!(s.cfl_safety > 0.0 && s.cfl_safety <= 1.0)) throw ConfigError("scheme.cfl_safety must lie in (0, 1]");
  if (const auto v = get("scheme.cfl")) s.cfl_override = parse_num("scheme.cfl", *v);
  if (const auto v = get("scheme.dt_speed")) s.dt_speed = parse_dt_speed(*v);
  if (const auto v = get("scheme.dt_include_ghost")) s.dt_include_ghost = parse_bool("scheme.dt_include_ghost", *v);
  if (s.dissipation != Dissipation::D2)
    c.warnings.push_back("non-default dissipation model " + std::string(to_string(s.dissipation)));
  if (s.trace != TraceMode::EA) c.warnings.push_back("non-default trace mode " + std::string(to_string(s.trace)));
  if (!s.tableau.empty() && tableau_by_name(s.tableau).order != s.degree + 1)
    c.warnings.push_back("tableau " + s.tableau + " does not have order degree+1");

  auto& l = c.limiter;
  if (const auto v = get("limiter.blend")) l.blend = parse_blend_kind(*v);
  if (const auto v = get("limiter.flux_limiter")) l.flux_limiter = parse_bool("limiter.flux_limiter", *v);
  if (const auto v = get("limiter.scaling_limiter")) l.scaling_limiter = parse_bool("limiter.scaling_limiter", *v);
  if (const auto v = get("limiter.alpha_min")) l.indicator.alpha_min = parse_num("limiter.alpha_min", *v);
  if (const auto v = get("limiter.alpha_max")) l.indicator.alpha_max = parse_num("limiter.alpha_max", *v);
  if (const auto v = get("limiter.sharpness")) l.indicator.sharpness = parse_num("limiter.sharpness", *v);
  if (const auto v = get("limiter.threshold_scale"))
    l.indicator.threshold_scale = parse_num("limiter.threshold_scale", *v);
  if (const auto v = get("limiter.threshold_exponent"))
    l.indicator.threshold_exponent = parse_num("limiter.threshold_exponent", *v);
  if (const auto v = get("limiter.smooth")) l.indicator.smooth = parse_bool("limiter.smooth", *v);
  if (const auto v = get("limiter.mh_max_halvings"))
    l.mh_max_halvings = static_cast<int>(parse_int("limiter.mh_max_halvings", *v));
  if (!(l.indicator.alpha_max > 0.0 && l.indicator.alpha_max <= 1.0))
    throw ConfigError("limiter.alpha_max must lie in (0, 1]");

  const char* sides[4] = {"boundary.left", "boundary.right", "boundary.bottom", "boundary.top"};
  for (int i = 0; i < 4; ++i)
    if (const auto v = get(sides[i])) c.boundary[i] = parse_boundary_kind(*v);
  if (const auto v = get("boundary.treatment")) c.treatment = parse_boundary_treatment(*v);

  if (const auto v = get("physics.gamma")) {
    c.physics.gamma = parse_num("physics.gamma", *v);
    if (!(*c.physics.gamma > 1.0)) throw ConfigError("physics.gamma must exceed 1");
  }
  if (const auto v = get("physics.source")) c.physics.source = parse_bool("physics.source", *v);
  if (const auto v = get("physics.nu_t")) c.physics.nu_t = parse_num("physics.nu_t", *v);
  if (const auto v = get("physics.velocity")) c.physics.velocity = parse_num("physics.velocity", *v);

  if (const auto v = get("output.dump")) c.output.dump = *v;
  if (const auto v = get("output.report")) c.output.report = *v;
  if (const auto v = get("output.dump_interval")) c.output.dump_interval = parse_num("output.dump_interval", *v);
  if (const auto v = get("output.log_every")) c.output.log_every = static_cast<int>(parse_int("output.log_every", *v));
  return c;
}

pt::ptree read_tree(std::istream& in, const std::string& name) {
  pt::ptree tree;
  try {
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError(name + ": " + e.message() + " (line " + std::to_string(e.line()) + ")");
  }
  return tree;
}

}  // namespace

RunConfig parse_config(const std::string& path, const std::vector<std::string>& overrides) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config " + path);
  return from_tree(read_tree(in, path), overrides);
}

RunConfig parse_config_text(const std::string& text, const std::vector<std::string>& overrides) {
  std::istringstream in(text);
  return from_tree(read_tree(in, "<config>"), overrides);
}

}  // namespace crkfr
