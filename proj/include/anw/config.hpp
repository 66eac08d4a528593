#pragma once

#include "anw/lattice.hpp"
#include "anw/optimize.hpp"
#include "anw/pump.hpp"

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace anw {

/// Bad configuration text or values. line is 1-based, 0 when unknown.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(int line, std::string key, const std::string& message);
  int line() const { return line_; }
  const std::string& key() const { return key_; }

 private:
  int line_;
  std::string key_;
};

struct LatticeConfig {
  ProfileKind kind = ProfileKind::homogeneous;
  int n_guides = 0;
  double c0 = 0.0;
  std::vector<double> weights;  ///< custom kind only, length N-1

  bool operator==(const LatticeConfig&) const = default;
};

struct PumpConfig {
  PumpPattern pattern = PumpPattern::flat_uniform;
  double eta = 0.0;
  std::vector<double> phases;
  /// Series of half-difference phases for flat_alternating_general; each
  /// value gives phases (dphi_plus - d, dphi_plus + d).
  double dphi_plus = 0.0;
  std::vector<double> dphi_minus;

  bool operator==(const PumpConfig&) const = default;
};

struct QpmConfig {
  std::optional<int> target_mode;  ///< 0-based in memory, 1-based in files
  double duty = 0.5;

  bool operator==(const QpmConfig&) const = default;
};

enum class LoPolicy { uniform, sum, max, all };

std::string_view to_string(LoPolicy policy);
LoPolicy lo_policy_from_string(std::string_view name);

struct ClusterConfig {
  std::string graph = "linear";
  LoPolicy lo_policy = LoPolicy::all;
  double theta = 0.0;  ///< uniform LO phase

  bool operator==(const ClusterConfig&) const = default;
};

struct SweepConfig {
  std::optional<GridRange> c0;
  std::optional<GridRange> eta;

  bool operator==(const SweepConfig&) const = default;
};

struct OptimizeConfig {
  std::optional<double> eta_max;
  int parents = 3;
  int population = 12;
  int generations = 200;
  double initial_sigma = 0.25;

  bool operator==(const OptimizeConfig&) const = default;
  /// 0.038 up to five guides, 0.035 above, unless set.
  double eta_max_for(int n_guides) const;
};

enum class OutputFormat { csv, json };

std::string_view to_string(OutputFormat format);
OutputFormat output_format_from_string(std::string_view name);

struct OutputConfig {
  OutputFormat format = OutputFormat::csv;
  std::string path;

  bool operator==(const OutputConfig&) const = default;
};

struct RunConfig {
  LatticeConfig lattice;
  PumpConfig pump;
  std::vector<double> z_values;
  std::optional<GridRange> z_range;
  QpmConfig qpm;
  ClusterConfig cluster;
  SweepConfig sweep;
  OptimizeConfig optimize;
  OutputConfig output;
  std::uint64_t seed = 42;

  bool operator==(const RunConfig&) const = default;

  std::vector<double> z_grid() const;
  CouplingProfile coupling_profile() const;

  struct LabeledPump {
    std::string label;  ///< empty for a single pump
    PumpProfile profile;
  };
  std::vector<LabeledPump> pump_profiles() const;
};

/// YAML mapping with sections lattice, pump, z, qpm, cluster, sweep,
/// optimize, output and the scalar seed. Unknown keys are errors.
RunConfig parse_config(std::string_view text);

/// Canonical text that parses back to an equal RunConfig.
std::string serialize_config(const RunConfig& cfg);

}  // namespace anw
