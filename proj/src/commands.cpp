#include "anw/commands.hpp"

#include "anw/cluster.hpp"
#include "anw/decomp.hpp"
#include "anw/optimize.hpp"
#include "anw/propagate.hpp"
#include "anw/qpm.hpp"

#include <json.hpp>

#include <charconv>
#include <fstream>
#include <ostream>
#include <sstream>

namespace anw {

std::string_view to_string(Command cmd) {
  switch (cmd) {
    case Command::supermodes: return "supermodes";
    case Command::propagate: return "propagate";
    case Command::squeezing: return "squeezing";
    case Command::cluster: return "cluster";
    case Command::sweep: return "sweep";
    case Command::optimize: return "optimize";
    case Command::qpm: return "qpm";
  }
  return "";
}

const std::vector<Command>& all_commands() {
  static const std::vector<Command> cmds = {Command::supermodes, Command::propagate, Command::squeezing,
                                            Command::cluster,    Command::sweep,     Command::optimize,
                                            Command::qpm};
  return cmds;
}

Command command_from_string(std::string_view name) {
  for (auto c : all_commands())
    if (to_string(c) == name) return c;
  throw std::invalid_argument("unknown command '" + std::string(name) + "'");
}

namespace {

std::string num(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

std::vector<double> need_z(const RunConfig& cfg) {
  auto zs = cfg.z_grid();
  if (zs.empty()) throw ConfigError(0, "z", "this command needs at least one propagation distance");
  return zs;
}

PumpProfile single_pump(const std::vector<RunConfig::LabeledPump>& pumps) {
  if (pumps.size() != 1) throw ConfigError(0, "pump.dphi_minus", "this command takes a single pump configuration");
  return pumps.front().profile;
}

SymplecticPropagator evolve(const RunConfig& cfg, const CouplingProfile& prof, const PumpProfile& pump, double z) {
  if (cfg.qpm.target_mode) {
    const auto grating = qpm_grating_for(supermode_basis(prof), *cfg.qpm.target_mode, cfg.qpm.duty);
    return qpm_propagator(prof, pump, grating, z);
  }
  return propagator(drift_generator(prof, pump), z);
}

void add_index_columns(Table& t, const std::string& prefix, int n) {
  for (int i = 1; i <= n; ++i) t.columns.push_back(prefix + std::to_string(i));
}

Table supermodes_table(const RunConfig& cfg) {
  const auto basis = supermode_basis(cfg.coupling_profile());
  const int n = basis.size();
  Table t{{"k", "lambda"}, {}};
  add_index_columns(t, "m_", n);
  for (int k = 0; k < n; ++k) {
    std::vector<Cell> row = {static_cast<long long>(k + 1), basis.eigenvalue(k)};
    for (int j = 0; j < n; ++j) row.push_back(basis.modes()(k, j));
    t.rows.push_back(std::move(row));
  }
  return t;
}

Table propagate_table(const RunConfig& cfg) {
  const auto prof = cfg.coupling_profile();
  const auto pump = single_pump(cfg.pump_profiles());
  const int n = prof.n_guides();
  Table t{{"z", "row"}, {}};
  add_index_columns(t, "c_", 2 * n);
  for (double z : need_z(cfg)) {
    const auto cov = covariance_from(evolve(cfg, prof, pump, z));
    for (int r = 0; r < 2 * n; ++r) {
      std::vector<Cell> row = {z, static_cast<long long>(r + 1)};
      for (int c = 0; c < 2 * n; ++c) row.push_back(cov.matrix()(r, c));
      t.rows.push_back(std::move(row));
    }
  }
  return t;
}

Table squeezing_table(const RunConfig& cfg) {
  const auto prof = cfg.coupling_profile();
  const auto pumps = cfg.pump_profiles();
  const auto zs = need_z(cfg);
  Table t{{"z", "series", "value"}, {}};
  for (const auto& p : pumps) {
    const std::string prefix = p.label.empty() ? "" : p.label + "|";
    for (double z : zs) {
      const auto bm = bloch_messiah(evolve(cfg, prof, p.profile, z));
      for (int m = 0; m < bm.k_diag.size(); ++m)
        t.rows.push_back({z, prefix + "K2_m" + std::to_string(m + 1), std::exp(-2.0 * bm.k_diag(m))});
    }
  }
  return t;
}

void cluster_rows(Table& t, double z, const std::string& policy, const std::vector<double>& theta,
                  const std::vector<double>& var) {
  const int n = static_cast<int>(var.size());
  for (int i = 0; i < n; ++i) t.rows.push_back({z, policy + "|theta_" + std::to_string(i + 1), theta[i]});
  for (int i = 0; i < n; ++i) t.rows.push_back({z, policy + "|V_" + std::to_string(i + 1), var[i]});
  if (n < 2) return;
  const auto rep = vlf_check(var);
  for (const auto& p : rep.pairs) {
    const std::string pair = std::to_string(p.first + 1) + "_" + std::to_string(p.first + 2);
    t.rows.push_back({z, policy + "|vlf_sum_" + pair, p.sum});
    t.rows.push_back({z, policy + "|vlf_margin_" + pair, p.bound - p.sum});
  }
  t.rows.push_back({z, policy + "|vlf_all_violated", static_cast<long long>(rep.all_violated)});
  t.rows.push_back({z, policy + "|sufficient", static_cast<long long>(rep.sufficient)});
}

Table cluster_table(const RunConfig& cfg) {
  const auto prof = cfg.coupling_profile();
  const auto pump = single_pump(cfg.pump_profiles());
  const int n = prof.n_guides();
  const auto spec = linear_cluster(n, cfg.cluster.theta);
  const auto pol = cfg.cluster.lo_policy;
  Table t{{"z", "series", "value"}, {}};
  for (double z : need_z(cfg)) {
    const auto cov = covariance_from(evolve(cfg, prof, pump, z));
    if (pol == LoPolicy::uniform || pol == LoPolicy::all)
      cluster_rows(t, z, "uniform", spec.lo_phases(), nullifier_variances(cov, spec));
    for (auto obj : {LoObjective::sum, LoObjective::max}) {
      if (pol != LoPolicy::all && !(pol == LoPolicy::sum && obj == LoObjective::sum) &&
          !(pol == LoPolicy::max && obj == LoObjective::max))
        continue;
      LoOptConfig lc;
      lc.objective = obj;
      lc.seed = cfg.seed;
      const auto res = optimize_lo_phases(cov, spec, lc);
      cluster_rows(t, z, std::string(to_string(obj)), res.theta, res.variances);
    }
  }
  return t;
}

Table sweep_table(const RunConfig& cfg) {
  if (!cfg.sweep.c0 || !cfg.sweep.eta) throw ConfigError(0, "sweep", "sweep needs both sweep.c0 and sweep.eta ranges");
  if (cfg.lattice.kind == ProfileKind::custom) throw ConfigError(0, "lattice.kind", "sweep needs a built-in lattice");
  if (!cfg.pump.dphi_minus.empty()) throw ConfigError(0, "pump.dphi_minus", "sweep takes a single pump configuration");
  const auto zs = need_z(cfg);
  if (zs.size() != 1) throw ConfigError(0, "z", "sweep evaluates a single propagation distance");
  SweepGrid grid{*cfg.sweep.c0, *cfg.sweep.eta, zs.front(), cfg.lattice.n_guides, cfg.pump.pattern, cfg.pump.phases,
                 cfg.lattice.kind};
  const auto rows = sweep_nullifiers(grid, linear_cluster(cfg.lattice.n_guides, cfg.cluster.theta));
  Table t{{"c0", "eta"}, {}};
  add_index_columns(t, "V_", cfg.lattice.n_guides);
  t.columns.push_back("cluster");
  for (const auto& r : rows) {
    std::vector<Cell> row = {r.c0, r.eta};
    for (double v : r.variances) row.push_back(v);
    row.push_back(static_cast<long long>(r.cluster));
    t.rows.push_back(std::move(row));
  }
  return t;
}

Table optimize_table(const RunConfig& cfg) {
  if (cfg.pump.pattern != PumpPattern::flat_uniform)
    throw ConfigError(0, "pump.pattern", "pump optimization is defined for flat_uniform pumps");
  const double phi = cfg.pump.phases.empty() ? 0.0 : cfg.pump.phases.front();
  const auto basis = supermode_basis(cfg.coupling_profile());
  const int n = basis.size();
  const EsConfig es{cfg.optimize.parents, cfg.optimize.population, cfg.optimize.generations,
                    cfg.optimize.initial_sigma, cfg.seed};
  const auto rows = optimize_eta_over_z(basis, need_z(cfg), cfg.optimize.eta_max_for(n), es,
                                        linear_cluster(n, cfg.cluster.theta), phi);
  Table t{{"z", "eta", "fitness"}, {}};
  add_index_columns(t, "V_", n);
  t.columns.push_back("cluster");
  for (const auto& r : rows) {
    std::vector<Cell> row = {r.z, r.eta, r.fitness};
    for (double v : r.variances) row.push_back(v);
    row.push_back(static_cast<long long>(r.cluster));
    t.rows.push_back(std::move(row));
  }
  return t;
}

Table qpm_table(const RunConfig& cfg) {
  if (!cfg.qpm.target_mode) throw ConfigError(0, "qpm.target_mode", "the qpm command needs a target supermode");
  const auto prof = cfg.coupling_profile();
  const auto pump = single_pump(cfg.pump_profiles());
  const auto basis = supermode_basis(prof);
  const auto grating = qpm_grating_for(basis, *cfg.qpm.target_mode, cfg.qpm.duty);
  const int n = basis.size();
  bool approx = true;
  try {
    qpm_approx_gain(basis, pump, grating, 0.0);
  } catch (const std::invalid_argument&) {
    approx = false;
  }
  Table t{{"z", "series", "value"}, {}};
  for (double z : need_z(cfg)) {
    const auto cov = covariance_from(qpm_propagator(prof, pump, grating, z));
    const RVector exact = supermode_block_gains(cov.matrix(), basis);
    for (int k = 0; k < n; ++k) t.rows.push_back({z, "exact|m" + std::to_string(k + 1), exact(k)});
    if (approx) {
      const RVector a = qpm_approx_gain(basis, pump, grating, z);
      for (int k = 0; k < n; ++k) t.rows.push_back({z, "approx|m" + std::to_string(k + 1), a(k)});
    }
  }
  return t;
}

std::string cell_text(const Cell& c) {
  if (const auto* d = std::get_if<double>(&c)) return num(*d);
  if (const auto* i = std::get_if<long long>(&c)) return std::to_string(*i);
  const auto& s = std::get<std::string>(c);
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char ch : s) q += ch == '"' ? std::string("\"\"") : std::string(1, ch);
  return q + "\"";
}

}  // namespace

Table compute_table(Command cmd, const RunConfig& cfg) {
  switch (cmd) {
    case Command::supermodes: return supermodes_table(cfg);
    case Command::propagate: return propagate_table(cfg);
    case Command::squeezing: return squeezing_table(cfg);
    case Command::cluster: return cluster_table(cfg);
    case Command::sweep: return sweep_table(cfg);
    case Command::optimize: return optimize_table(cfg);
    case Command::qpm: return qpm_table(cfg);
  }
  throw std::invalid_argument("unknown command");
}

std::string render(const Table& table, Command cmd, const RunConfig& cfg) {
  const std::string config = serialize_config(cfg);
  if (cfg.output.format == OutputFormat::json) {
    nlohmann::ordered_json j;
    j["tool"] = kToolName;
    j["version"] = kToolVersion;
    j["command"] = to_string(cmd);
    j["config"] = config;
    j["columns"] = table.columns;
    auto rows = nlohmann::ordered_json::array();
    for (const auto& r : table.rows) {
      auto row = nlohmann::ordered_json::array();
      for (const auto& c : r) std::visit([&](const auto& v) { row.push_back(v); }, c);
      rows.push_back(std::move(row));
    }
    j["rows"] = std::move(rows);
    return j.dump(2) + "\n";
  }
  std::ostringstream os;
  os << "# " << kToolName << " " << kToolVersion << "\n";
  os << "# command: " << to_string(cmd) << "\n";
  os << "# config:\n";
  std::istringstream lines(config);
  for (std::string line; std::getline(lines, line);) os << (line.empty() ? "#" : "# " + line) << "\n";
  for (std::size_t i = 0; i < table.columns.size(); ++i) os << (i ? "," : "") << table.columns[i];
  os << "\n";
  for (const auto& r : table.rows) {
    for (std::size_t i = 0; i < r.size(); ++i) os << (i ? "," : "") << cell_text(r[i]);
    os << "\n";
  }
  return os.str();
}

std::string echoed_config(std::string_view rendered) {
  if (!rendered.empty() && rendered.front() == '{')
    return nlohmann::json::parse(rendered).at("config").get<std::string>();
  std::istringstream in{std::string(rendered)};
  std::string out;
  bool inside = false;
  for (std::string line; std::getline(in, line);) {
    if (line.empty() || line[0] != '#') break;
    if (line == "# config:") {
      inside = true;
      continue;
    }
    if (!inside) continue;
    out += (line.size() > 2 ? line.substr(2) : std::string()) + "\n";
  }
  return out;
}

int run_command(Command cmd, const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  try {
    const std::string text = render(compute_table(cmd, cfg), cmd, cfg);
    if (cfg.output.path.empty()) {
      out << text;
    } else {
      std::ofstream f(cfg.output.path, std::ios::binary);
      if (!f) {
        err << "error: cannot open " << cfg.output.path << " for writing\n";
        return kExitFailure;
      }
      f << text;
    }
    return kExitOk;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const InvariantError& e) {
    err << "numerical invariant failure: " << e.what() << "\n";
    return kExitInvariant;
  } catch (const std::invalid_argument& e) {
    err << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitFailure;
  }
}

}  // namespace anw
