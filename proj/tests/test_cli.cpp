#include "anw/commands.hpp"

#include <doctest.h>

#include <cmath>
#include <map>
#include <set>
#include <sstream>

using namespace anw;

namespace {

const char* kWorkingPoint = R"(
lattice:
  kind: homogeneous
  n_guides: 5
  c0: 0.16
pump:
  pattern: flat_uniform
  eta: 0.06
  phases: [-1.5707963267948966]
z: [20]
)";

int config_error_line(const std::string& text) {
  try {
    parse_config(text);
  } catch (const ConfigError& e) {
    return e.line();
  }
  return -1;
}

// (series -> value) for one z of a long-format table.
std::map<std::string, double> series_at(const Table& t, double z) {
  std::map<std::string, double> out;
  for (const auto& r : t.rows)
    if (std::get<double>(r[0]) == z) {
      const auto* i = std::get_if<long long>(&r[2]);
      out[std::get<std::string>(r[1])] = i ? static_cast<double>(*i) : std::get<double>(r[2]);
    }
  return out;
}

}  // namespace

TEST_SUITE("cli") {
  TEST_CASE("minimal config gets defaults") {
    const auto cfg = parse_config("lattice: {kind: homogeneous, n_guides: 5, c0: 0.24}\n"
                                  "pump: {pattern: flat_uniform, eta: 0.015}\n"
                                  "z: 20\n");
    CHECK(cfg.qpm.duty == 0.5);
    CHECK_FALSE(cfg.qpm.target_mode.has_value());
    CHECK(cfg.output.format == OutputFormat::csv);
    CHECK(cfg.seed == 42);
    CHECK(cfg.z_grid() == std::vector<double>{20.0});
    CHECK(cfg.cluster.lo_policy == LoPolicy::all);
    CHECK(cfg.optimize.eta_max_for(5) == 0.038);
    CHECK(cfg.optimize.eta_max_for(15) == 0.035);
  }

  TEST_CASE("validation errors carry line and key") {
    CHECK_THROWS_AS(parse_config("lattice: {kind: homogeneous, n_guides: 4, c0: 0.1}\n"
                                 "pump: {pattern: central_only, eta: 0.01}\n"),
                    ConfigError);
    CHECK(config_error_line("lattice:\n  kind: homogeneous\n  n_guides: 4\n  c0: -0.1\n") == 4);
    CHECK(config_error_line("lattice:\n  kind: homogeneous\n  n_guides: 4\n  c0: 0.1\n  colour: red\n") == 5);
    CHECK(config_error_line("lattice: {kind: homogeneous, n_guides: 4, c0: 0.1}\nextra: 1\n") == 2);
    CHECK(config_error_line("lattice:\n  kind: hexagonal\n  n_guides: 4\n  c0: 0.1\n") == 2);
    CHECK(config_error_line("lattice:\n  kind: homogeneous\n  n_guides: four\n  c0: 0.1\n") == 3);
    CHECK(config_error_line("lattice: [1, 2\n") > 0);
    CHECK(config_error_line("pump: {eta: 0.1}\n") == 0);
    try {
      parse_config("lattice: {kind: homogeneous, n_guides: 4, c0: 0.1}\nqpm:\n  target_mode: 7\n");
      FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
      CHECK(e.key() == "qpm.target_mode");
      CHECK(e.line() == 3);
    }
    CHECK_THROWS_AS(parse_config("lattice: {kind: homogeneous, n_guides: 5, c0: 0.1}\nqpm: {target_mode: 3}\n"),
                    ConfigError);
    CHECK_THROWS_AS(parse_config("lattice: {kind: custom, n_guides: 4, c0: 0.1, weights: [1, 2]}\n"), ConfigError);
    CHECK_NOTHROW(parse_config("lattice: {kind: custom, n_guides: 4, c0: 0.1, weights: [1, 2, 1]}\n"));
    CHECK_THROWS_AS(parse_config("lattice: {kind: homogeneous, n_guides: 4, c0: 0.1}\nz: [-1]\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("lattice: {kind: homogeneous, n_guides: 4, c0: 0.1}\nz: {start: 5, stop: 1, steps: 3}\n"),
                    ConfigError);
    CHECK_THROWS_AS(parse_config("lattice: {kind: homogeneous, n_guides: 4, c0: 0.1}\n"
                                 "pump: {pattern: flat_uniform, dphi_minus: [0, 1]}\n"),
                    ConfigError);
    CHECK_THROWS_AS(parse_config("lattice: {kind: homogeneous, n_guides: 4, c0: 0.1}\noptimize: {parents: 20}\n"),
                    ConfigError);
    CHECK_THROWS_AS(parse_config("lattice: {kind: homogeneous, n_guides: 4, c0: 0.1}\noutput: {format: xml}\n"),
                    ConfigError);
  }

  TEST_CASE("serialization round-trips") {
    const std::vector<std::string> texts = {
        kWorkingPoint,
        "lattice: {kind: custom, n_guides: 4, c0: 0.1, weights: [1, 0.5, 1]}\n"
        "pump: {pattern: flat_alternating_general, eta: 0.015, dphi_plus: -1.5707963267948966, dphi_minus: [0, 0.1]}\n"
        "z: {start: 0, stop: 50, steps: 11}\n"
        "qpm: {target_mode: 1, duty: 0.4}\n"
        "cluster: {lo_policy: max, theta: 0.3}\n"
        "sweep: {c0: {start: 0.02, stop: 0.2, steps: 4}, eta: {start: 0, stop: 0.06, steps: 3}}\n"
        "optimize: {eta_max: 0.035, generations: 17, initial_sigma: 0.1}\n"
        "output: {format: json, path: out.json}\n"
        "seed: 18446744073709551615\n",
        "lattice: {kind: square_root, n_guides: 1, c0: 0.3}\n",
    };
    for (const auto& text : texts) {
      const auto cfg = parse_config(text);
      const auto again = parse_config(serialize_config(cfg));
      CHECK(again == cfg);
      CHECK(serialize_config(again) == serialize_config(cfg));
    }
  }

  TEST_CASE("supermodes of a single guide") {
    const auto t = compute_table(Command::supermodes, parse_config("lattice: {kind: homogeneous, n_guides: 1, c0: 0.2}\n"));
    REQUIRE(t.rows.size() == 1);
    CHECK(t.columns == std::vector<std::string>{"k", "lambda", "m_1"});
    CHECK(std::get<double>(t.rows[0][1]) == 0.0);
    CHECK(std::get<double>(t.rows[0][2]) == 1.0);
  }

  TEST_CASE("cluster command at the working point") {
    auto cfg = parse_config(kWorkingPoint);
    const auto t = compute_table(Command::cluster, cfg);
    const auto s = series_at(t, 20.0);
    const double expect[5] = {0.34, 0.42, 0.40, 0.42, 0.34};
    for (int i = 0; i < 5; ++i) {
      CHECK(std::abs(s.at("uniform|V_" + std::to_string(i + 1)) - expect[i]) < 0.03);
      CHECK(std::abs(s.at("sum|V_" + std::to_string(i + 1)) - expect[i]) < 0.03);
      CHECK(s.count("max|V_" + std::to_string(i + 1)) == 1);
    }
    CHECK(s.at("uniform|vlf_all_violated") == 1.0);
    CHECK(s.at("uniform|vlf_margin_1_2") == doctest::Approx(std::sqrt(8.0 / 3.0) - s.at("uniform|vlf_sum_1_2")));

    cfg.cluster.lo_policy = LoPolicy::uniform;
    const auto only = series_at(compute_table(Command::cluster, cfg), 20.0);
    CHECK(only.count("sum|V_1") == 0);
    CHECK(only.at("uniform|V_1") == s.at("uniform|V_1"));
  }

  TEST_CASE("squeezing series per pump phase") {
    const auto cfg = parse_config(
        "lattice: {kind: homogeneous, n_guides: 5, c0: 0.24}\n"
        "pump: {pattern: flat_alternating_general, eta: 0.015, dphi_plus: -1.5707963267948966,"
        " dphi_minus: [0, 0.39269908169872414, 0.7853981633974483, 1.1780972450961724, 1.5707963267948966]}\n"
        "z: {start: 0, stop: 40, steps: 9}\n");
    const auto t = compute_table(Command::squeezing, cfg);
    CHECK(t.columns == std::vector<std::string>{"z", "series", "value"});
    std::map<std::string, int> counts;
    for (const auto& r : t.rows) ++counts[std::get<std::string>(r[1])];
    CHECK(counts.size() == 25);
    for (const auto& [name, c] : counts) CHECK(c == 9);
    // Alternating-pi end of the family: every supermode at exp(-4 eta z).
    for (const auto& r : t.rows) {
      const auto& name = std::get<std::string>(r[1]);
      if (name.rfind("dphi_minus=1.57", 0) != 0) continue;
      CHECK(std::get<double>(r[2]) == doctest::Approx(std::exp(-4 * 0.015 * std::get<double>(r[0]))).epsilon(1e-8));
    }
  }

  TEST_CASE("sweep, optimize and qpm tables") {
    auto cfg = parse_config(std::string(kWorkingPoint) +
                            "sweep: {c0: {start: 0.08, stop: 0.16, steps: 3}, eta: {start: 0, stop: 0.06, steps: 4}}\n");
    const auto sw = compute_table(Command::sweep, cfg);
    CHECK(sw.rows.size() == 12);
    CHECK(sw.columns.back() == "cluster");
    CHECK(std::get<long long>(sw.rows.back().back()) == 1);

    cfg.optimize.generations = 30;
    cfg.optimize.eta_max = 0.038;
    cfg.z_values = {20.0, 30.0};
    const auto op = compute_table(Command::optimize, cfg);
    CHECK(op.rows.size() == 2);
    for (const auto& r : op.rows) CHECK(std::get<double>(r[1]) <= 0.038);

    auto q = parse_config("lattice: {kind: homogeneous, n_guides: 5, c0: 0.24}\n"
                          "pump: {pattern: flat_uniform, eta: 0.015, phases: [-1.5707963267948966]}\n"
                          "z: [0, 10, 20]\nqpm: {target_mode: 1}\n");
    const auto qt = compute_table(Command::qpm, q);
    CHECK(qt.rows.size() == 30);
    const auto s = series_at(qt, 20.0);
    CHECK(s.at("exact|m1") > s.at("exact|m2"));
    CHECK(s.at("approx|m1") == doctest::Approx(4 * 0.015 * 20 / 3.14159265358979323846));
  }

  TEST_CASE("rendered output echoes a re-parseable config") {
    auto cfg = parse_config(std::string(kWorkingPoint) + "cluster: {lo_policy: uniform}\n");
    for (auto fmt : {OutputFormat::csv, OutputFormat::json}) {
      cfg.output.format = fmt;
      const auto text = render(compute_table(Command::cluster, cfg), Command::cluster, cfg);
      CHECK(parse_config(echoed_config(text)) == cfg);
      if (fmt == OutputFormat::csv) {
        CHECK(text.rfind("# anw 1.0.0\n# command: cluster\n", 0) == 0);
      } else {
        CHECK(text.find("\"version\": \"1.0.0\"") != std::string::npos);
      }
    }
  }

  TEST_CASE("same config and seed give byte-identical output") {
    auto cfg = parse_config(kWorkingPoint);
    cfg.optimize.generations = 25;
    for (auto cmd : {Command::cluster, Command::optimize, Command::propagate}) {
      std::ostringstream a, b, err;
      CHECK(run_command(cmd, cfg, a, err) == kExitOk);
      CHECK(run_command(cmd, cfg, b, err) == kExitOk);
      CHECK(a.str() == b.str());
      CHECK_FALSE(a.str().empty());
    }
  }

  TEST_CASE("exit codes") {
    std::ostringstream out, err;
    const auto base = parse_config("lattice: {kind: homogeneous, n_guides: 3, c0: 0.1}\n");
    CHECK(run_command(Command::supermodes, base, out, err) == kExitOk);
    CHECK(run_command(Command::propagate, base, out, err) == kExitConfig);
    CHECK(run_command(Command::sweep, base, out, err) == kExitConfig);
    CHECK(run_command(Command::qpm, base, out, err) == kExitConfig);
    const auto blow = parse_config("lattice: {kind: homogeneous, n_guides: 3, c0: 0.1}\n"
                                   "pump: {pattern: flat_uniform, eta: 0.5}\nz: [400]\n");
    CHECK(run_command(Command::propagate, blow, out, err) == kExitInvariant);
    CHECK(err.str().find("invariant") != std::string::npos);
  }
}
