#include "lh/config.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include "json.hpp"

namespace lh {

using nlohmann::json;

namespace {

const std::set<std::string> kExperiments = {"commutator", "square", "adapted-lp", "carleson", "pointwise-beta",
                                            "beta-carleson", "cover", "norm"};

const std::set<std::string> kKeys = {"experiment", "spec", "p", "n", "l_list", "trials", "seed", "out", "band",
                                     "cone", "zero_mean_lines", "method", "op", "pairs", "k_list", "tile_l_list",
                                     "j0_max", "decay_N", "count", "m", "scenarios", "q"};

template <class T>
std::vector<T> scalar_or_list(const json& j, const std::string& key) {
  if (j.is_array()) {
    if (j.empty()) throw ConfigError("'" + key + "' must not be empty");
    return j.get<std::vector<T>>();
  }
  return {j.get<T>()};
}

FieldSpec default_field() { return sinusoidal_field(0.05, SlopeFunction::steps({0.0, 0.5}, {0.25, -0.375})); }

json fit_json(const DecayFit& f) {
  return {{"slope", f.slope}, {"intercept", f.intercept}, {"residual", f.residual}};
}

json stats_json(const EnsembleStats& s) {
  return {{"count", s.count}, {"min", s.min}, {"max", s.max}, {"mean", s.mean}};
}

json sweep_json(const GridSweep& s) {
  json runs = json::array();
  for (std::size_t i = 0; i < s.n.size(); ++i) {
    json r = stats_json(s.stats[i]);
    r["n"] = s.n[i];
    runs.push_back(r);
  }
  return {{"grids", runs}, {"stability", s.stability}};
}

double mean_of(const std::vector<TrialRecord>& records) {
  double sum = 0.0;
  int c = 0;
  for (const auto& r : records)
    if (std::isfinite(r.ratio)) {
      sum += r.ratio;
      ++c;
    }
  return c ? sum / c : 0.0;
}

double max_of(const std::vector<TrialRecord>& records) {
  double m = 0.0;
  for (const auto& r : records)
    if (std::isfinite(r.ratio)) m = std::max(m, r.ratio);
  return m;
}

constexpr const char* kSemantics =
    "ratios are empirical lower bounds on operator norms; acceptance binds the maximum and its stability "
    "under grid refinement";

}  // namespace

ExperimentConfig parse_experiment_config(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config JSON: ") + e.what());
  }
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  for (const auto& item : j.items())
    if (!kKeys.count(item.key())) throw ConfigError("config: unknown key '" + item.key() + "'");

  ExperimentConfig cfg;
  try {
    cfg.experiment = j.at("experiment").get<std::string>();
    if (!kExperiments.count(cfg.experiment)) throw ConfigError("config: unknown experiment '" + cfg.experiment + "'");
    cfg.spec = j.contains("spec") ? FieldSpec::from_json_text(j.at("spec").dump()) : default_field();
    if (j.contains("p")) cfg.p = scalar_or_list<double>(j.at("p"), "p");
    if (j.contains("n")) cfg.n = scalar_or_list<int>(j.at("n"), "n");
    if (j.contains("l_list")) cfg.l_list = j.at("l_list").get<std::vector<int>>();
    cfg.trials = j.value("trials", cfg.trials);
    cfg.seed = j.value("seed", cfg.seed);
    cfg.out = j.value("out", cfg.out);
    if (j.contains("band")) {
      cfg.family.band.k_lo = j.at("band").at("k_lo").get<int>();
      cfg.family.band.k_hi = j.at("band").at("k_hi").get<int>();
    }
    cfg.family.cone.half_angle_slope = j.value("cone", 1.0);
    cfg.family.zero_mean_lines = j.value("zero_mean_lines", false);
    if (j.contains("method")) cfg.method = parse_norm_method(j.at("method").get<std::string>());
    cfg.op = j.value("op", cfg.op);
    cfg.pairs = j.value("pairs", cfg.pairs);
    if (j.contains("k_list")) cfg.k_list = j.at("k_list").get<std::vector<int>>();
    if (j.contains("tile_l_list")) cfg.tile_l_list = j.at("tile_l_list").get<std::vector<int>>();
    cfg.j0_max = j.value("j0_max", cfg.j0_max);
    cfg.decay_N = j.value("decay_N", cfg.decay_N);
    cfg.count = j.value("count", cfg.count);
    cfg.m = j.value("m", cfg.m);
    cfg.scenarios = j.value("scenarios", cfg.scenarios);
    cfg.q = j.value("q", cfg.q);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }

  cfg.spec.validate(256);
  for (double p : cfg.p)
    if (!(p > 1.0) || !std::isfinite(p)) throw ConfigError("config: every p must lie in (1, inf)");
  for (int n : cfg.n) check_grid_size(n);
  if (cfg.trials < 1) throw ConfigError("config: trials must be >= 1");
  if (cfg.family.band.k_lo < 0 || cfg.family.band.k_hi < cfg.family.band.k_lo)
    throw ConfigError("config: band must satisfy 0 <= k_lo <= k_hi");
  for (int n : cfg.n)
    if ((1 << cfg.family.band.k_hi) > n / 4) throw ConfigError("config: band.k_hi too large for n=" + std::to_string(n));
  if (!(cfg.family.cone.half_angle_slope > 0.0 && cfg.family.cone.half_angle_slope <= 1.0))
    throw ConfigError("config: cone must lie in (0, 1]");
  if (cfg.experiment == "commutator") {
    if (cfg.l_list.size() < 4) throw ConfigError("config: commutator needs l_list with at least 4 entries");
    for (int l : cfg.l_list)
      if (l < -2) throw ConfigError("config: l_list entries must be >= -2");
  }
  if (cfg.experiment == "carleson" && cfg.spec.eps0 != 0.0 && !cfg.spec.g.empty())
    throw ConfigError("config: carleson needs a one-variable field (eps0 = 0)");
  if (cfg.j0_max < 1) throw ConfigError("config: j0_max must be >= 1");
  if (cfg.pairs < 0 || cfg.count < 1 || cfg.scenarios < 0) throw ConfigError("config: negative count");
  if (cfg.m < 5 || cfg.m > 20) throw ConfigError("config: m must lie in [5, 20]");
  if (!(cfg.q > 1.0)) throw ConfigError("config: q must exceed 1");
  if (cfg.experiment == "norm") {
    auto ops = std::make_shared<const FieldOperators>(cfg.spec, cfg.n.front());
    make_operator(cfg.op, ops);
  }
  return cfg;
}

std::string to_json_text(const ExperimentConfig& cfg) {
  json j;
  j["experiment"] = cfg.experiment;
  j["spec"] = json::parse(cfg.spec.to_json_text());
  j["p"] = cfg.p;
  j["n"] = cfg.n;
  j["l_list"] = cfg.l_list;
  j["trials"] = cfg.trials;
  j["seed"] = cfg.seed;
  j["out"] = cfg.out;
  j["band"] = {{"k_lo", cfg.family.band.k_lo}, {"k_hi", cfg.family.band.k_hi}};
  j["cone"] = cfg.family.cone.half_angle_slope;
  j["zero_mean_lines"] = cfg.family.zero_mean_lines;
  j["method"] = cfg.method == NormMethod::EnsembleMax ? "ensemble_max" : "power_p";
  j["op"] = cfg.op;
  j["pairs"] = cfg.pairs;
  j["k_list"] = cfg.k_list;
  j["tile_l_list"] = cfg.tile_l_list;
  j["j0_max"] = cfg.j0_max;
  j["decay_N"] = cfg.decay_N;
  j["count"] = cfg.count;
  j["m"] = cfg.m;
  j["scenarios"] = cfg.scenarios;
  j["q"] = cfg.q;
  return j.dump(2);
}

ExperimentOutput run_experiment(const ExperimentConfig& cfg) {
  ExperimentOutput out;
  json summary;
  summary["experiment"] = cfg.experiment;
  summary["semantics"] = kSemantics;
  json runs = json::array();
  double stability = 0.0;
  const std::string& e = cfg.experiment;

  if (e == "commutator") {
    std::optional<double> slope;
    for (int n : cfg.n)
      for (double p : cfg.p) {
        const CommutatorReport rep = run_commutator_decay(cfg.spec, p, n, cfg.l_list, cfg.trials, cfg.seed, cfg.family);
        json r = {{"n", n}, {"p", p}, {"l", rep.l}, {"norms", rep.norms}, {"null_run", rep.null_run}};
        if (rep.fit) {
          r["fit"] = fit_json(*rep.fit);
          if (!slope || rep.fit->slope > *slope) slope = rep.fit->slope;
        }
        runs.push_back(r);
        out.records.insert(out.records.end(), rep.records.begin(), rep.records.end());
      }
    summary["slope"] = slope ? json(*slope) : json(nullptr);
  } else if (e == "square") {
    for (double p : cfg.p) {
      const SquareFunctionReport rep = run_square_function(cfg.spec, p, cfg.n, cfg.trials, cfg.seed, cfg.family);
      json r = sweep_json(rep.sweep);
      r["p"] = p;
      if (!rep.warning.empty()) r["warning"] = rep.warning;
      stability = std::max(stability, rep.sweep.stability);
      runs.push_back(r);
      out.records.insert(out.records.end(), rep.records.begin(), rep.records.end());
    }
  } else if (e == "adapted-lp") {
    for (double p : cfg.p) {
      const AdaptedLPReport rep = run_adapted_lp(cfg.spec, p, cfg.n, cfg.trials, cfg.seed, cfg.family);
      runs.push_back({{"p", p},
                      {"forward", sweep_json(rep.forward)},
                      {"adjoint", sweep_json(rep.adjoint)},
                      {"bracket_ratio", rep.bracket_ratio},
                      {"endpoint_move", rep.endpoint_move}});
      stability = std::max(stability, rep.endpoint_move);
      out.records.insert(out.records.end(), rep.records.begin(), rep.records.end());
    }
  } else if (e == "carleson") {
    for (int n : cfg.n) {
      const CarlesonReport rep = run_carleson(cfg.spec, n, cfg.trials, cfg.seed, cfg.family);
      runs.push_back({{"n", n}, {"gaps", rep.gaps}, {"max_gap", rep.max_gap}});
      out.records.insert(out.records.end(), rep.records.begin(), rep.records.end());
    }
  } else if (e == "pointwise-beta") {
    const auto pairs = pointwise_beta_family(cfg.spec, cfg.pairs, cfg.seed, cfg.k_list, cfg.tile_l_list);
    std::vector<double> maxima;
    for (int n : cfg.n) {
      const PointwiseBetaReport rep = run_pointwise_beta(cfg.spec, n, pairs, cfg.j0_max, cfg.decay_N);
      runs.push_back({{"n", n},
                      {"max_ratio", rep.max_ratio},
                      {"max_lhs_scaled", rep.max_lhs_scaled},
                      {"skipped", rep.skipped},
                      {"log", rep.log}});
      maxima.push_back(rep.max_ratio);
      out.records.insert(out.records.end(), rep.records.begin(), rep.records.end());
    }
    if (maxima.size() >= 2 && maxima.front() > 0.0) stability = std::fabs(maxima.back() - maxima.front()) / maxima.front();
  } else if (e == "beta-carleson") {
    const BetaCarlesonReport rep = run_beta_carleson(cfg.seed, cfg.count, cfg.m, cfg.j0_max);
    runs.push_back({{"m", cfg.m}, {"constant", rep.constant}});
    out.records = rep.records;
  } else if (e == "cover") {
    std::vector<double> maxima;
    for (int n : cfg.n) {
      const CoverCorpusReport rep = run_cover_corpus(n, cfg.scenarios, cfg.seed, cfg.q);
      runs.push_back({{"n", n},
                      {"max_ratio", {{"incomparable", rep.max_ratio[0]}, {"density", rep.max_ratio[1]},
                                     {"population", rep.max_ratio[2]}}},
                      {"all_finite", rep.all_finite},
                      {"hypothesis_failures", rep.hypothesis_failures}});
      maxima.push_back(std::max({rep.max_ratio[0], rep.max_ratio[1], rep.max_ratio[2]}));
      out.covering.insert(out.covering.end(), rep.reports.begin(), rep.reports.end());
    }
    if (maxima.size() >= 2 && maxima.front() > 0.0) stability = std::fabs(maxima.back() - maxima.front()) / maxima.front();
    double mx = 0.0, sum = 0.0;
    int c = 0;
    for (const auto& r : out.covering)
      if (std::isfinite(r.ratio)) {
        mx = std::max(mx, r.ratio);
        sum += r.ratio;
        ++c;
      }
    summary["max"] = mx;
    summary["mean"] = c ? sum / c : 0.0;
  } else if (e == "norm") {
    for (int n : cfg.n) {
      auto ops = std::make_shared<const FieldOperators>(cfg.spec, n);
      const OperatorHandle op = make_operator(cfg.op, ops);
      for (double p : cfg.p) {
        const NormEstimate est = estimate_norm(op, p, n, cfg.trials, cfg.seed, cfg.method, cfg.family);
        runs.push_back({{"n", n}, {"p", p}, {"value", est.value}});
        out.records.insert(out.records.end(), est.records.begin(), est.records.end());
      }
    }
  }

  if (!summary.contains("max")) {
    summary["max"] = max_of(out.records);
    summary["mean"] = mean_of(out.records);
  }
  summary["stability"] = stability;
  summary["runs"] = runs;
  out.summary = summary.dump(2);
  return out;
}

std::string describe_plan(const ExperimentConfig& cfg) {
  std::ostringstream os;
  os << "experiment " << cfg.experiment << "\n";
  os << "grids:";
  for (int n : cfg.n) os << ' ' << n;
  os << "\np:";
  for (double p : cfg.p) os << ' ' << p;
  os << "\ntrials " << cfg.trials << ", seed " << cfg.seed << "\n";
  os << "outputs: " << cfg.out << "/" << cfg.experiment << ".csv, " << cfg.out << "/" << cfg.experiment
     << "_summary.json\n";
  os << "resolved config:\n" << to_json_text(cfg) << "\n";
  return os.str();
}

}  // namespace lh
