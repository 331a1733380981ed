#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "lh/harness.hpp"

namespace lh {

/// Experiment config JSON. Keys:
///   experiment  commutator | square | adapted-lp | carleson | pointwise-beta | beta-carleson | cover | norm
///   spec        field spec object (see FieldSpec::from_json_text); defaults to the sinusoidal eps0 = 0.05 field
///   p           number or list                 n        number or list of grid sizes
///   l_list      commutator scales              trials   ensemble size (default 64)
///   seed        root seed (default 0)          out      output directory (default ".")
///   band        {"k_lo", "k_hi"}               cone     half-angle slope (default 1)
///   zero_mean_lines, method (ensemble_max | power_p), op (norm experiment)
///   pairs, k_list, tile_l_list, j0_max, decay_N (pointwise-beta)
///   count, m, j0_max (beta-carleson)           scenarios, q (cover)
struct ExperimentConfig {
  std::string experiment;
  FieldSpec spec;
  std::vector<double> p{2.0};
  std::vector<int> n{128};
  std::vector<int> l_list;
  int trials = 64;
  std::uint64_t seed = 0;
  std::string out = ".";
  InputFamily family;
  NormMethod method = NormMethod::EnsembleMax;
  std::string op = "Hv";
  int pairs = 50;
  std::vector<int> k_list{3, 4};
  std::vector<int> tile_l_list{1, 2};
  int j0_max = 4;
  int decay_N = 10;
  int count = 16;
  int m = 10;
  int scenarios = 200;
  double q = 2.0;
};

/// Parse and validate; throws ConfigError with the offending key.
ExperimentConfig parse_experiment_config(const std::string& text);
std::string to_json_text(const ExperimentConfig& cfg);

struct ExperimentOutput {
  /// Trial records (every experiment except cover).
  std::vector<TrialRecord> records;
  /// Covering reports (cover only).
  std::vector<CoveringReport> covering;
  /// Summary JSON: max, mean, slope (decay runs), stability, plus experiment details.
  std::string summary;
};

ExperimentOutput run_experiment(const ExperimentConfig& cfg);

/// Human-readable plan for --dry-run.
std::string describe_plan(const ExperimentConfig& cfg);

}  // namespace lh
