// Acceptance checks: one PASS/FAIL line per criterion.
//   acceptance            run all
//   acceptance 3 8        run the listed criteria
// Exit status is 1 when any selected criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <memory>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "lh/config.hpp"
#include "lh/harness.hpp"
#include "lh/transforms.hpp"

using namespace lh;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, double a) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

std::string g(double v) { return fmt("%.3g", v); }

FieldSpec default_field() { return parse_experiment_config(R"({"experiment": "square"})").spec; }

double rel_move(double a, double b) { return std::fabs(b - a) / a; }

Outcome lp_reconstruction() {
  const int n = 128;
  const LPRange r = lp_range(n);
  double worst = 0.0;
  for (int t = 0; t < 64; ++t) {
    const GridFunction f = random_bandlimited(derive_seed(1, 1, t), n, {}, {r.k_min, r.k_max});
    GridFunction sum(n);
    for (int k = r.k_min; k <= r.k_max; ++k) sum += P_k(f, k);
    worst = std::max(worst, l2_norm(sum - f));
  }
  return {worst <= 1e-10, "max ||sum P_k f - f|| = " + g(worst) + " (tol 1e-10, 64 trials, n=128)"};
}

Outcome constant_isometry() {
  const int n = 128;
  const FieldOperators ops(one_variable_field(SlopeFunction::constant(0.0)), n);
  RandomOptions opts;
  opts.zero_mean_lines = true;
  double worst = 0.0;
  for (int t = 0; t < 32; ++t) {
    const GridFunction f = random_bandlimited(derive_seed(2, 1, t), n, {}, {1, 5}, opts);
    worst = std::max(worst, std::fabs(l2_norm(ops.H_v(f)) / l2_norm(f) - 1.0));
  }
  return {worst <= 1e-6, "max |ratio - 1| = " + g(worst) + " (tol 1e-6, 32 trials, n=128)"};
}

double commutation_error(const FieldSpec& spec, int n) {
  const FieldOperators ops(spec, n);
  const LPRange r = lp_range(n);
  double worst = 0.0;
  for (int t = 0; t < 8; ++t) {
    const GridFunction f = random_bandlimited(derive_seed(3, 1, t), n, {}, {1, 5});
    const GridFunction hf = ops.H_v(f);
    for (int k = r.k_min; k <= r.k_max; ++k)
      worst = std::max(worst, l2_norm(ops.H_v(P_k(f, k)) - P_k(hf, k)) / l2_norm(f));
  }
  return worst;
}

Outcome one_variable_commutation() {
  const FieldSpec spec = one_variable_field(SlopeFunction::steps({0.0, 0.3, 0.7}, {0.25, -0.5, 0.75}));
  const double c256 = commutation_error(spec, 256);
  const double c512 = commutation_error(spec, 512);
  return {c256 <= 1e-2 && c512 < c256,
          "relative commutator " + g(c256) + " at n=256, " + g(c512) + " at n=512 (need <= 1e-2 and decrease)"};
}

Outcome carleson_identity() {
  InputFamily fam;
  fam.band = {1, 4};
  const std::vector<FieldSpec> specs = {
      one_variable_field(SlopeFunction::steps({0.0, 0.5}, {std::sqrt(2.0) - 1.0, -(std::sqrt(3.0) - 1.0) / 2.0})),
      one_variable_field(SlopeFunction::steps({0.0, 0.3, 0.7},
                                              {0.1 * std::sqrt(5.0), -0.2 * std::sqrt(7.0), 0.5 * std::sqrt(0.5)})),
      one_variable_field(SlopeFunction::constant(std::sqrt(2.0) - 1.0)),
  };
  double worst = 0.0;
  for (const FieldSpec& s : specs) worst = std::max(worst, run_carleson(s, 128, 8, 4, fam).max_gap);
  return {worst <= 1e-3, "max relative gap " + g(worst) + " (tol 1e-3, 8 seeds x 3 fields, n=128)"};
}

Outcome adapted_lp() {
  InputFamily fam;
  fam.band = {1, 4};
  double bracket = 0.0, move = 0.0;
  for (double p : {1.6, 2.0, 3.0}) {
    const AdaptedLPReport rep = run_adapted_lp(default_field(), p, {128, 256}, 64, 5, fam);
    bracket = std::max(bracket, rep.bracket_ratio);
    move = std::max(move, rep.endpoint_move);
  }
  return {bracket <= 25.0 && move < 0.2,
          "C/c = " + g(bracket) + " (<= 25), endpoint move " + g(move) + " (< 0.2), p in {1.6, 2, 3}"};
}

Outcome commutator_decay() {
  InputFamily fam;
  fam.band = {1, 5};
  const std::vector<int> ls{1, 2, 3, 4, 5, 6};
  const FieldSpec spec = default_field();
  const CommutatorReport rep = run_commutator_decay(spec, 2.0, 256, ls, 16, 6, fam);
  FieldSpec flat = spec;
  flat.eps0 = 0.0;
  const CommutatorReport null_rep = run_commutator_decay(flat, 2.0, 256, ls, 16, 6, fam);
  const double null_max = *std::max_element(null_rep.norms.begin(), null_rep.norms.end());
  if (!rep.fit) return {false, "no decay fit"};
  const bool ok = rep.fit->slope <= -0.3 && rep.fit->residual <= 0.15 && null_max <= 5e-3;
  return {ok, "slope " + g(rep.fit->slope) + " (<= -0.3), residual " + g(rep.fit->residual) +
                  " (<= 0.15), null max " + g(null_max) + " (<= 5e-3)"};
}

Outcome square_function() {
  InputFamily fam;
  fam.band = {1, 4};
  double worst = 0.0, largest = 0.0;
  bool finite = true;
  for (double p : {1.6, 2.0, 3.0}) {
    const SquareFunctionReport rep = run_square_function(default_field(), p, {128, 256}, 64, 7, fam);
    for (const EnsembleStats& s : rep.sweep.stats) {
      finite = finite && std::isfinite(s.max);
      largest = std::max(largest, s.max);
    }
    worst = std::max(worst, rep.sweep.stability);
  }
  return {finite && worst < 0.2, "max ratio " + g(largest) + ", move n=128->256 " + g(worst) + " (< 0.2)"};
}

Outcome wave_packets() {
  const int n = 128;
  double norm_err = 0.0;
  int normalized = 0;
  for (int l : {0, 1, 2})
    for (int k : {2, 3, 4})
      for (int i = 0; i < DyadicInterval::count(l) && normalized < 100; ++i)
        for (int p : {0, 3}) {
          const Tile s{k, {l, i}, p, p + 1};
          if (normalized >= 100 || !tile_resolvable(s, n)) continue;
          norm_err = std::max(norm_err, std::fabs(l2_norm(wave_packet(s, n)) - 1.0));
          ++normalized;
        }

  // Support lemma over 20 tiles whose curved packets do not vanish identically.
  const FieldOperators ops(default_field(), n);
  double lemma = 0.0, built = 0.0;
  int family = 0;
  for (int l : {0, 1, 2})
    for (int k : {3, 4})
      for (int i = 0; i < DyadicInterval::count(l) && family < 20; ++i) {
        const Tile s{k, {l, i}, 1, 2};
        if (!tile_resolvable(s, n)) continue;
        const SupportLeak a = support_leak(s, ops, lemma_support_window(s));
        if (a.peak < 1e-8) continue;
        lemma = std::max(lemma, a.ratio);
        built = std::max(built, support_leak(s, ops, curved_support_window(s)).ratio);
        ++family;
      }
  const bool ok = normalized == 100 && norm_err <= 1e-6 && family == 20 && lemma <= 1e-3;
  return {ok, "max | ||phi_s|| - 1 | = " + g(norm_err) + " over " + std::to_string(normalized) +
                  " tiles; off omega_s2 sup/peak " + g(lemma) + " (tol 1e-3) over " + std::to_string(family) +
                  " tiles; off constructed window " + g(built)};
}

Outcome jones_beta() {
  const LipschitzSample line = LipschitzSample::from_function([](double x) { return 0.37 * x + 0.1; }, 12);
  double linear = 0.0;
  for (const BetaRow& r : beta_table(line, 4)) linear = std::max(linear, r.beta);
  const double c10 = run_beta_carleson(9, 16, 10, 4).constant;
  const double c11 = run_beta_carleson(9, 16, 11, 4).constant;
  const double drift = rel_move(c10, c11);
  const bool ok = linear <= 1e-12 && std::isfinite(c10) && std::isfinite(c11) && drift <= 0.2;
  return {ok, "linear max beta " + g(linear) + "; Carleson constant " + g(c10) + " (m=10), " + g(c11) +
                  " (m=11), drift " + g(drift) + " (<= 0.2)"};
}

Outcome pointwise_beta() {
  // Four periods of g: curvature inside a tile is resolved on every grid.
  const FieldSpec spec = sinusoidal_field(0.05, default_field().u, 4);
  const auto pairs = pointwise_beta_family(spec, 50, 10, {3, 4}, {1, 2});
  const PointwiseBetaReport a = run_pointwise_beta(spec, 128, pairs, 4, 10);
  const PointwiseBetaReport b = run_pointwise_beta(spec, 256, pairs, 4, 10);
  FieldSpec flat = spec;
  flat.eps0 = 0.0;
  const auto flat_pairs = pointwise_beta_family(flat, 50, 10, {3, 4}, {1, 2});
  const PointwiseBetaReport z = run_pointwise_beta(flat, 128, flat_pairs, 4, 10);
  const double drift = rel_move(a.max_ratio, b.max_ratio);
  const bool ok = pairs.size() == 50 && std::isfinite(a.max_ratio) && std::isfinite(b.max_ratio) &&
                  a.max_ratio > 0.0 && drift <= 0.3 && z.max_lhs_scaled <= 5e-3;
  return {ok, "max ratio " + g(a.max_ratio) + " (n=128), " + g(b.max_ratio) + " (n=256), drift " + g(drift) +
                  " (<= 0.3); null scaled LHS " + g(z.max_lhs_scaled) + " (<= 5e-3)"};
}

Outcome covering() {
  const CoverCorpusReport a = run_cover_corpus(512, 200, 11);
  const CoverCorpusReport b = run_cover_corpus(1024, 200, 11);
  double drift = 0.0;
  std::string maxima;
  for (int i = 0; i < 3; ++i) {
    drift = std::max(drift, rel_move(a.max_ratio[i], b.max_ratio[i]));
    maxima += (i ? ", " : "") + g(a.max_ratio[i]) + "->" + g(b.max_ratio[i]);
  }
  const bool ok = a.all_finite && b.all_finite && a.hypothesis_failures == 0 && drift <= 0.2;
  return {ok, "lemma maxima 512->1024 " + maxima + ", drift " + g(drift) + " (<= 0.2), hypothesis failures " +
                  std::to_string(a.hypothesis_failures)};
}

std::string experiment_bytes(const std::string& config) {
  const ExperimentConfig cfg = parse_experiment_config(config);
  const ExperimentOutput out = run_experiment(cfg);
  std::ostringstream os;
  if (cfg.experiment == "cover") write_covering_csv(os, out.covering);
  else write_records_csv(os, out.records, false);
  return os.str() + out.summary;
}

Outcome determinism() {
  const std::vector<std::string> configs = {
      R"({"experiment": "commutator", "n": 32, "l_list": [1, 2, 3, 4], "trials": 4, "seed": 3})",
      R"({"experiment": "square", "n": [32, 64], "p": [1.6, 3], "trials": 4, "seed": 3})",
      R"({"experiment": "adapted-lp", "n": [32, 64], "p": [2], "trials": 4, "seed": 3})",
      R"({"experiment": "carleson", "n": 32, "trials": 4, "seed": 3, "band": {"k_lo": 1, "k_hi": 2},
          "spec": {"eps0": 0, "g_coeffs": [], "u": {"type": "steps", "data": {"breaks": [0, 0.5], "values": [0.3, -0.2]}}}})",
      R"({"experiment": "pointwise-beta", "n": [64], "pairs": 6, "k_list": [3], "tile_l_list": [1], "seed": 3})",
      R"({"experiment": "beta-carleson", "count": 3, "m": 8, "seed": 3})",
      R"({"experiment": "cover", "n": [128], "scenarios": 6, "seed": 3})",
      R"({"experiment": "norm", "n": 32, "op": "Hv", "method": "power_p", "p": [3], "trials": 4, "seed": 3})",
  };
  int mismatches = 0;
  for (const std::string& c : configs) {
    set_thread_count(1);
    const std::string a = experiment_bytes(c);
    const std::string b = experiment_bytes(c);
    set_thread_count(4);
    const std::string d = experiment_bytes(c);
    if (a != b || a != d) ++mismatches;
  }
  set_thread_count(0);
  return {mismatches == 0, std::to_string(configs.size()) + " experiments x (rerun, threads 1/4): " +
                               std::to_string(mismatches) + " mismatches"};
}

struct Criterion {
  int id;
  const char* name;
  double budget_s;
  std::function<Outcome()> run;
};

}  // namespace

int main(int argc, char** argv) {
  const std::vector<Criterion> all = {
      {1, "LP reconstruction", 10, lp_reconstruction},
      {2, "constant-field isometry", 60, constant_isometry},
      {3, "one-variable commutation", 300, one_variable_commutation},
      {4, "Carleson identity", 120, carleson_identity},
      {5, "adapted LP equivalence", 600, adapted_lp},
      {6, "commutator decay", 1200, commutator_decay},
      {7, "square function", 600, square_function},
      {8, "wave packets", 300, wave_packets},
      {9, "Jones beta", 120, jones_beta},
      {10, "pointwise beta", 900, pointwise_beta},
      {11, "covering verifiers", 900, covering},
      {12, "determinism", 120, determinism},
  };
  std::set<int> selected;
  for (int i = 1; i < argc; ++i) selected.insert(std::atoi(argv[i]));

  bool all_pass = true;
  for (const Criterion& c : all) {
    if (!selected.empty() && !selected.count(c.id)) continue;
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("error: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool pass = o.pass && secs <= c.budget_s;
    all_pass = all_pass && pass;
    std::printf("%s %2d %s: %s [%.1f s of %.0f s]\n", pass ? "PASS" : "FAIL", c.id, c.name, o.detail.c_str(), secs,
                c.budget_s);
    std::fflush(stdout);
  }
  return all_pass ? 0 : 1;
}
