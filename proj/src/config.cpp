#include "anw/config.hpp"

#include "anw/qpm.hpp"

#include <yaml-cpp/yaml.h>

#include <charconv>
#include <cmath>
#include <map>
#include <set>

namespace anw {

ConfigError::ConfigError(int line, std::string key, const std::string& message)
    : std::runtime_error((line > 0 ? "line " + std::to_string(line) + ": " : std::string()) +
                         (key.empty() ? std::string() : key + ": ") + message),
      line_(line),
      key_(std::move(key)) {}

std::string_view to_string(LoPolicy policy) {
  switch (policy) {
    case LoPolicy::uniform: return "uniform";
    case LoPolicy::sum: return "sum";
    case LoPolicy::max: return "max";
    case LoPolicy::all: return "all";
  }
  return "";
}

LoPolicy lo_policy_from_string(std::string_view name) {
  for (auto p : {LoPolicy::uniform, LoPolicy::sum, LoPolicy::max, LoPolicy::all})
    if (to_string(p) == name) return p;
  throw std::invalid_argument("unknown LO policy '" + std::string(name) + "'");
}

std::string_view to_string(OutputFormat format) { return format == OutputFormat::csv ? "csv" : "json"; }

OutputFormat output_format_from_string(std::string_view name) {
  if (name == "csv") return OutputFormat::csv;
  if (name == "json") return OutputFormat::json;
  throw std::invalid_argument("unknown output format '" + std::string(name) + "'");
}

double OptimizeConfig::eta_max_for(int n_guides) const {
  if (eta_max) return *eta_max;
  return n_guides <= 5 ? 0.038 : 0.035;
}

std::vector<double> RunConfig::z_grid() const {
  if (!z_range) return z_values;
  std::vector<double> out(z_range->steps);
  for (int i = 0; i < z_range->steps; ++i) out[i] = z_range->at(i);
  return out;
}

CouplingProfile RunConfig::coupling_profile() const {
  if (lattice.kind == ProfileKind::custom) return build_coupling_profile(lattice.kind, lattice.n_guides, lattice.c0, lattice.weights);
  return build_coupling_profile(lattice.kind, lattice.n_guides, lattice.c0);
}

std::vector<RunConfig::LabeledPump> RunConfig::pump_profiles() const {
  std::vector<LabeledPump> out;
  if (pump.dphi_minus.empty()) {
    out.push_back({"", build_pump_profile(pump.pattern, lattice.n_guides, pump.eta, pump.phases)});
    return out;
  }
  for (double d : pump.dphi_minus) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, d);
    out.push_back({"dphi_minus=" + std::string(buf, res.ptr),
                   build_pump_profile(pump.pattern, lattice.n_guides, pump.eta, alternating_phases(pump.dphi_plus, d))});
  }
  return out;
}

namespace {

int line_of(const YAML::Node& n) { return n.Mark().line >= 0 ? n.Mark().line + 1 : 0; }

void check_keys(const YAML::Node& map, const std::string& section, const std::set<std::string>& allowed) {
  if (!map.IsMap()) throw ConfigError(line_of(map), section, "expected a mapping");
  for (const auto& kv : map) {
    const auto key = kv.first.as<std::string>();
    if (!allowed.count(key))
      throw ConfigError(line_of(kv.first), section.empty() ? key : section + "." + key, "unknown key");
  }
}

template <class T>
T scalar(const YAML::Node& n, const std::string& key) {
  if (!n.IsScalar()) throw ConfigError(line_of(n), key, "expected a scalar");
  try {
    return n.as<T>();
  } catch (const YAML::BadConversion&) {
    throw ConfigError(line_of(n), key, "cannot read '" + n.Scalar() + "'");
  }
}

double number(const YAML::Node& n, const std::string& key) {
  const double x = scalar<double>(n, key);
  if (!std::isfinite(x)) throw ConfigError(line_of(n), key, "must be finite");
  return x;
}

std::vector<double> number_list(const YAML::Node& n, const std::string& key) {
  std::vector<double> out;
  if (n.IsNull()) return out;
  if (n.IsScalar()) return {number(n, key)};
  if (!n.IsSequence()) throw ConfigError(line_of(n), key, "expected a number or a list of numbers");
  for (const auto& e : n) out.push_back(number(e, key));
  return out;
}

GridRange range(const YAML::Node& n, const std::string& key) {
  check_keys(n, key, {"start", "stop", "steps"});
  for (const char* k : {"start", "stop", "steps"})
    if (!n[k]) throw ConfigError(line_of(n), key, std::string("missing '") + k + "'");
  try {
    return GridRange(number(n["start"], key + ".start"), number(n["stop"], key + ".stop"),
                     scalar<int>(n["steps"], key + ".steps"));
  } catch (const std::invalid_argument& e) {
    throw ConfigError(line_of(n), key, e.what());
  }
}

template <class F>
auto enum_value(const YAML::Node& n, const std::string& key, F&& from_string) {
  const auto s = scalar<std::string>(n, key);
  try {
    return from_string(s);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(line_of(n), key, e.what());
  }
}

}  // namespace

RunConfig parse_config(std::string_view text) {
  YAML::Node root;
  try {
    root = YAML::Load(std::string(text));
  } catch (const YAML::ParserException& e) {
    throw ConfigError(e.mark.line + 1, "", e.msg);
  }
  if (!root.IsMap()) throw ConfigError(1, "", "configuration must be a mapping");
  check_keys(root, "", {"lattice", "pump", "z", "qpm", "cluster", "sweep", "optimize", "output", "seed"});

  RunConfig cfg;
  std::map<std::string, int> lines;

  const auto lat = root["lattice"];
  if (!lat) throw ConfigError(0, "lattice", "section is required");
  check_keys(lat, "lattice", {"kind", "n_guides", "c0", "weights"});
  for (const char* k : {"kind", "n_guides", "c0"})
    if (!lat[k]) throw ConfigError(line_of(lat), std::string("lattice.") + k, "is required");
  cfg.lattice.kind = enum_value(lat["kind"], "lattice.kind", profile_kind_from_string);
  cfg.lattice.n_guides = scalar<int>(lat["n_guides"], "lattice.n_guides");
  lines["lattice.n_guides"] = line_of(lat["n_guides"]);
  cfg.lattice.c0 = number(lat["c0"], "lattice.c0");
  lines["lattice.c0"] = line_of(lat["c0"]);
  if (lat["weights"]) {
    cfg.lattice.weights = number_list(lat["weights"], "lattice.weights");
    lines["lattice.weights"] = line_of(lat["weights"]);
  }

  if (const auto p = root["pump"]) {
    check_keys(p, "pump", {"pattern", "eta", "phases", "dphi_plus", "dphi_minus"});
    lines["pump"] = line_of(p);
    if (p["pattern"]) cfg.pump.pattern = enum_value(p["pattern"], "pump.pattern", pump_pattern_from_string);
    if (p["eta"]) cfg.pump.eta = number(p["eta"], "pump.eta");
    if (p["phases"]) cfg.pump.phases = number_list(p["phases"], "pump.phases");
    if (p["dphi_plus"]) cfg.pump.dphi_plus = number(p["dphi_plus"], "pump.dphi_plus");
    if (p["dphi_minus"]) cfg.pump.dphi_minus = number_list(p["dphi_minus"], "pump.dphi_minus");
  }

  if (const auto z = root["z"]) {
    lines["z"] = line_of(z);
    if (z.IsMap())
      cfg.z_range = range(z, "z");
    else
      cfg.z_values = number_list(z, "z");
  }

  if (const auto q = root["qpm"]) {
    check_keys(q, "qpm", {"target_mode", "duty"});
    if (q["target_mode"]) {
      cfg.qpm.target_mode = scalar<int>(q["target_mode"], "qpm.target_mode") - 1;
      lines["qpm.target_mode"] = line_of(q["target_mode"]);
    }
    if (q["duty"]) {
      cfg.qpm.duty = number(q["duty"], "qpm.duty");
      lines["qpm.duty"] = line_of(q["duty"]);
    }
  }

  if (const auto c = root["cluster"]) {
    check_keys(c, "cluster", {"graph", "lo_policy", "theta"});
    if (c["graph"]) {
      cfg.cluster.graph = scalar<std::string>(c["graph"], "cluster.graph");
      if (cfg.cluster.graph != "linear") throw ConfigError(line_of(c["graph"]), "cluster.graph", "only 'linear' is supported");
    }
    if (c["lo_policy"]) cfg.cluster.lo_policy = enum_value(c["lo_policy"], "cluster.lo_policy", lo_policy_from_string);
    if (c["theta"]) cfg.cluster.theta = number(c["theta"], "cluster.theta");
  }

  if (const auto s = root["sweep"]) {
    check_keys(s, "sweep", {"c0", "eta"});
    if (s["c0"]) cfg.sweep.c0 = range(s["c0"], "sweep.c0");
    if (s["eta"]) cfg.sweep.eta = range(s["eta"], "sweep.eta");
  }

  if (const auto o = root["optimize"]) {
    check_keys(o, "optimize", {"eta_max", "parents", "population", "generations", "initial_sigma"});
    if (o["eta_max"]) cfg.optimize.eta_max = number(o["eta_max"], "optimize.eta_max");
    if (o["parents"]) cfg.optimize.parents = scalar<int>(o["parents"], "optimize.parents");
    if (o["population"]) cfg.optimize.population = scalar<int>(o["population"], "optimize.population");
    if (o["generations"]) cfg.optimize.generations = scalar<int>(o["generations"], "optimize.generations");
    if (o["initial_sigma"]) cfg.optimize.initial_sigma = number(o["initial_sigma"], "optimize.initial_sigma");
    lines["optimize"] = line_of(o);
  }

  if (const auto out = root["output"]) {
    check_keys(out, "output", {"format", "path"});
    if (out["format"]) cfg.output.format = enum_value(out["format"], "output.format", output_format_from_string);
    if (out["path"]) cfg.output.path = scalar<std::string>(out["path"], "output.path");
  }

  if (const auto seed = root["seed"]) cfg.seed = scalar<std::uint64_t>(seed, "seed");

  // Referential and physical validity.
  const int n = cfg.lattice.n_guides;
  if (n < 1) throw ConfigError(lines["lattice.n_guides"], "lattice.n_guides", "must be >= 1");
  if (!(cfg.lattice.c0 > 0.0)) throw ConfigError(lines["lattice.c0"], "lattice.c0", "must be > 0");
  if (cfg.lattice.kind == ProfileKind::custom) {
    if (static_cast<int>(cfg.lattice.weights.size()) != n - 1)
      throw ConfigError(lines["lattice.weights"], "lattice.weights", "custom lattice needs n_guides - 1 weights");
  } else if (!cfg.lattice.weights.empty()) {
    throw ConfigError(lines["lattice.weights"], "lattice.weights", "only allowed for the custom kind");
  }
  try {
    cfg.coupling_profile();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(lines["lattice.c0"], "lattice", e.what());
  }
  if (cfg.pump.eta < 0.0) throw ConfigError(lines["pump"], "pump.eta", "must be >= 0");
  if (!cfg.pump.dphi_minus.empty()) {
    if (cfg.pump.pattern != PumpPattern::flat_alternating_general)
      throw ConfigError(lines["pump"], "pump.dphi_minus", "requires pattern flat_alternating_general");
    if (!cfg.pump.phases.empty())
      throw ConfigError(lines["pump"], "pump.phases", "give either phases or dphi_minus, not both");
  }
  try {
    cfg.pump_profiles();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(lines["pump"], "pump", e.what());
  }
  for (double z : cfg.z_grid())
    if (z < 0.0) throw ConfigError(lines["z"], "z", "distances must be >= 0");
  if (cfg.qpm.target_mode) {
    const int k = *cfg.qpm.target_mode;
    if (k < 0 || k >= n)
      throw ConfigError(lines["qpm.target_mode"], "qpm.target_mode", "must lie in 1.." + std::to_string(n));
    try {
      qpm_grating_for(supermode_basis(cfg.coupling_profile()), k, cfg.qpm.duty);
    } catch (const std::invalid_argument& e) {
      throw ConfigError(lines["qpm.target_mode"], "qpm", e.what());
    }
  }
  if (!(cfg.qpm.duty > 0.0 && cfg.qpm.duty < 1.0))
    throw ConfigError(lines["qpm.duty"], "qpm.duty", "must lie in (0, 1)");
  if (cfg.optimize.eta_max && !(*cfg.optimize.eta_max > 0.0))
    throw ConfigError(lines["optimize"], "optimize.eta_max", "must be > 0");
  try {
    EsConfig{cfg.optimize.parents, cfg.optimize.population, cfg.optimize.generations, cfg.optimize.initial_sigma,
             cfg.seed}
        .validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(lines["optimize"], "optimize", e.what());
  }
  return cfg;
}

namespace {

std::string shortest(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

void emit_list(YAML::Emitter& out, const std::vector<double>& xs) {
  out << YAML::Flow << YAML::BeginSeq;
  for (double x : xs) out << shortest(x);
  out << YAML::EndSeq;
}

void emit_range(YAML::Emitter& out, const GridRange& r) {
  out << YAML::Flow << YAML::BeginMap;
  out << YAML::Key << "start" << YAML::Value << shortest(r.min);
  out << YAML::Key << "stop" << YAML::Value << shortest(r.max);
  out << YAML::Key << "steps" << YAML::Value << r.steps;
  out << YAML::EndMap;
}

}  // namespace

std::string serialize_config(const RunConfig& cfg) {
  YAML::Emitter out;
  out << YAML::BeginMap;

  out << YAML::Key << "lattice" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "kind" << YAML::Value << std::string(to_string(cfg.lattice.kind));
  out << YAML::Key << "n_guides" << YAML::Value << cfg.lattice.n_guides;
  out << YAML::Key << "c0" << YAML::Value << shortest(cfg.lattice.c0);
  if (!cfg.lattice.weights.empty()) {
    out << YAML::Key << "weights" << YAML::Value;
    emit_list(out, cfg.lattice.weights);
  }
  out << YAML::EndMap;

  out << YAML::Key << "pump" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "pattern" << YAML::Value << std::string(to_string(cfg.pump.pattern));
  out << YAML::Key << "eta" << YAML::Value << shortest(cfg.pump.eta);
  out << YAML::Key << "phases" << YAML::Value;
  emit_list(out, cfg.pump.phases);
  out << YAML::Key << "dphi_plus" << YAML::Value << shortest(cfg.pump.dphi_plus);
  out << YAML::Key << "dphi_minus" << YAML::Value;
  emit_list(out, cfg.pump.dphi_minus);
  out << YAML::EndMap;

  out << YAML::Key << "z" << YAML::Value;
  if (cfg.z_range)
    emit_range(out, *cfg.z_range);
  else
    emit_list(out, cfg.z_values);

  out << YAML::Key << "qpm" << YAML::Value << YAML::BeginMap;
  if (cfg.qpm.target_mode) out << YAML::Key << "target_mode" << YAML::Value << *cfg.qpm.target_mode + 1;
  out << YAML::Key << "duty" << YAML::Value << shortest(cfg.qpm.duty);
  out << YAML::EndMap;

  out << YAML::Key << "cluster" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "graph" << YAML::Value << cfg.cluster.graph;
  out << YAML::Key << "lo_policy" << YAML::Value << std::string(to_string(cfg.cluster.lo_policy));
  out << YAML::Key << "theta" << YAML::Value << shortest(cfg.cluster.theta);
  out << YAML::EndMap;

  if (cfg.sweep.c0 || cfg.sweep.eta) {
    out << YAML::Key << "sweep" << YAML::Value << YAML::BeginMap;
    if (cfg.sweep.c0) {
      out << YAML::Key << "c0" << YAML::Value;
      emit_range(out, *cfg.sweep.c0);
    }
    if (cfg.sweep.eta) {
      out << YAML::Key << "eta" << YAML::Value;
      emit_range(out, *cfg.sweep.eta);
    }
    out << YAML::EndMap;
  }

  out << YAML::Key << "optimize" << YAML::Value << YAML::BeginMap;
  if (cfg.optimize.eta_max) out << YAML::Key << "eta_max" << YAML::Value << shortest(*cfg.optimize.eta_max);
  out << YAML::Key << "parents" << YAML::Value << cfg.optimize.parents;
  out << YAML::Key << "population" << YAML::Value << cfg.optimize.population;
  out << YAML::Key << "generations" << YAML::Value << cfg.optimize.generations;
  out << YAML::Key << "initial_sigma" << YAML::Value << shortest(cfg.optimize.initial_sigma);
  out << YAML::EndMap;

  out << YAML::Key << "output" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "format" << YAML::Value << std::string(to_string(cfg.output.format));
  if (!cfg.output.path.empty()) out << YAML::Key << "path" << YAML::Value << cfg.output.path;
  out << YAML::EndMap;

  out << YAML::Key << "seed" << YAML::Value << cfg.seed;
  out << YAML::EndMap;
  return std::string(out.c_str()) + "\n";
}

}  // namespace anw
