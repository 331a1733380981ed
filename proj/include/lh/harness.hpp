#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "lh/beta.hpp"
#include "lh/covering.hpp"
#include "lh/tiles.hpp"
#include "lh/transforms.hpp"

namespace lh {

/// One harness measurement; ratio = out_norm / in_norm.
struct TrialRecord {
  std::string experiment;
  std::uint64_t seed = 0;
  int n = 0;
  double p = 2.0;
  std::optional<int> l;
  double in_norm = 0.0;
  double out_norm = 0.0;
  double ratio = 0.0;
};

/// Header experiment,seed,n,p,l,in_norm,out_norm,ratio; an optional leading "#" timestamp line.
void write_records_csv(std::ostream& out, const std::vector<TrialRecord>& records, bool timestamp = true);

/// Linear operator on grid functions with its adjoint.
struct OperatorHandle {
  std::string id;
  std::function<GridFunction(const GridFunction&)> apply;
  std::function<GridFunction(const GridFunction&)> adjoint;
};

/// Ids: Identity, Scale:<c>, RowHilbert, Hv, Hl:<l>, Pk:<k>, PtildeK:<k>, PtildeKAdj:<k>,
/// POmega:l=<l>,i=<i>, Cone, Main, Comm:l=<l> (a bare integer also works for one-parameter ids).
OperatorHandle make_operator(const std::string& id, std::shared_ptr<const FieldOperators> ops);

/// Distribution of random inputs: unit-L2 band-limited functions on a cone band.
struct InputFamily {
  ConeSpec cone;
  Band band;
  bool zero_mean_lines = false;
};

/// Input number `trial` of the family; independent of n once the band is resolved.
GridFunction family_input(const InputFamily& family, std::uint64_t seed, int trial, int n);

enum class NormMethod { EnsembleMax, PowerP };
NormMethod parse_norm_method(const std::string& name);

/// Lower bound on the p -> p norm.
struct NormEstimate {
  std::string id;
  double p = 2.0;
  int n = 0;
  NormMethod method = NormMethod::EnsembleMax;
  double value = 0.0;
  int trials = 0;
  std::uint64_t seed = 0;
  std::vector<TrialRecord> records;
};

/// ensemble_max: best ratio over the family. power_p: continues from the best trial with
/// f <- |T*(|Tf|^(p-1) sgn Tf)|^(p'-1) sgn(.), normalized, until the ratio moves < 1e-4 or 50 steps.
NormEstimate estimate_norm(const OperatorHandle& op, double p, int n, int trials, std::uint64_t seed,
                           NormMethod method, const InputFamily& family, const std::string& experiment = "norm");

struct DecayFit {
  std::vector<int> l;
  std::vector<double> norms;
  double slope = 0.0;
  double intercept = 0.0;
  /// RMS residual of the log2 fit.
  double residual = 0.0;
};

/// Least squares of log2(norm) against l; needs >= 4 points with positive norms.
DecayFit fit_decay(const std::vector<int>& l_values, const std::vector<double>& norms);

struct EnsembleStats {
  int count = 0;
  double min = 0.0;
  double max = 0.0;
  double mean = 0.0;
};
EnsembleStats ensemble_stats(const std::vector<double>& ratios);

struct CommutatorReport {
  /// Per-l ensemble maxima; the fit uses l >= 1 only.
  std::vector<int> l;
  std::vector<double> norms;
  std::optional<DecayFit> fit;
  /// eps0 = 0 and constant u: the slope is not meaningful.
  bool null_run = false;
  std::vector<TrialRecord> records;
};

CommutatorReport run_commutator_decay(const FieldSpec& spec, double p, int n, const std::vector<int>& l_list,
                                      int trials, std::uint64_t seed, const InputFamily& family);

/// Per-grid ensemble statistics and the relative move of the maximum from the first to the last grid.
struct GridSweep {
  std::vector<int> n;
  std::vector<EnsembleStats> stats;
  double stability = 0.0;
};

struct SquareFunctionReport {
  GridSweep sweep;
  std::string warning;
  std::vector<TrialRecord> records;
};

/// ||(sum_k |H_v P_k f|^2)^(1/2)||_p / ||f||_p over the family at every grid size.
SquareFunctionReport run_square_function(const FieldSpec& spec, double p, const std::vector<int>& n_list,
                                         int trials, std::uint64_t seed, const InputFamily& family);

struct AdaptedLPReport {
  GridSweep forward;
  GridSweep adjoint;
  /// Largest max/min over both families and all grids.
  double bracket_ratio = 0.0;
  /// Largest relative endpoint move between the first and last grid.
  double endpoint_move = 0.0;
  std::vector<TrialRecord> records;
};

/// ||(sum_k |Ptilde_k f|^2)^(1/2)||_p / ||f||_p and the same for Ptilde_k^*.
AdaptedLPReport run_adapted_lp(const FieldSpec& spec, double p, const std::vector<int>& n_list, int trials,
                               std::uint64_t seed, const InputFamily& family);

struct CarlesonReport {
  std::vector<double> gaps;
  double max_gap = 0.0;
  std::vector<TrialRecord> records;
};

/// Identity gap of the fiber quadrature against ||H_v f||_2; records carry LHS as in_norm, RHS as out_norm.
CarlesonReport run_carleson(const FieldSpec& spec, int n, int trials, std::uint64_t seed, const InputFamily& family);

/// A level curve parameter paired with a tile it crosses.
struct BetaPair {
  Tile tile;
  double t = 0.0;
};

/// `count` pairs: tiles drawn from the (k, l) lists and t from the level values through the tile.
std::vector<BetaPair> pointwise_beta_family(const FieldSpec& spec, int count, std::uint64_t seed,
                                            const std::vector<int>& k_list, const std::vector<int>& l_list);

struct PointwiseBetaRow {
  BetaPair pair;
  double lhs = 0.0;
  double rhs = 0.0;
  /// lhs / rhs, or empty when rhs vanishes.
  std::optional<double> ratio;
  /// lhs / (2^k 2^(-3l/2)).
  double lhs_scaled = 0.0;
};

struct PointwiseBetaReport {
  std::vector<PointwiseBetaRow> rows;
  double max_ratio = 0.0;
  double max_lhs_scaled = 0.0;
  int skipped = 0;
  std::vector<std::string> log;
  std::vector<TrialRecord> records;
};

/// max over Gamma_t cap s of |phi_s^t - Ptilde_k phi_s^t| against
/// 2^(-3l/2) 2^k sum_{j0} beta_j0(J^D) / <j0>^N, with the frozen packet phi_s^t.
PointwiseBetaReport run_pointwise_beta(const FieldSpec& spec, int n, const std::vector<BetaPair>& pairs,
                                       int j0_max, int decay_N = 10);

struct BetaCarlesonReport {
  /// max over functions, J and j0 of carleson_sum / (j0^3 lip^2).
  double constant = 0.0;
  std::vector<TrialRecord> records;
};

/// Random Lipschitz functions sampled with 2^m + 1 nodes; J ranges over dyadic intervals
/// holding at least 16 cells.
BetaCarlesonReport run_beta_carleson(std::uint64_t seed, int count, int m, int j0_max);

struct CoverCorpusReport {
  std::vector<CoveringReport> reports;
  /// Per lemma (incomparable, density, population) maximum ratio.
  double max_ratio[3] = {0.0, 0.0, 0.0};
  bool all_finite = true;
  int hypothesis_failures = 0;
};

/// Scenario i uses lemma i mod 3 and seed derive_seed(seed, ., i).
CoverCorpusReport run_cover_corpus(int n, int count, std::uint64_t seed, double q = 2.0);

}  // namespace lh
