#include <cmath>
#include <memory>
#include <sstream>

#include "doctest.h"
#include "lh/config.hpp"
#include "lh/harness.hpp"

using namespace lh;

namespace {

std::shared_ptr<const FieldOperators> flat_ops(int n) {
  return std::make_shared<const FieldOperators>(one_variable_field(SlopeFunction::constant(0.0)), n);
}

}  // namespace

TEST_CASE("decay fit recovers a synthetic slope") {
  std::vector<int> l{1, 2, 3, 4, 5, 6};
  std::vector<double> norms;
  for (int v : l) norms.push_back(3.0 * std::pow(2.0, -0.7 * v));
  const DecayFit fit = fit_decay(l, norms);
  CHECK(fit.slope == doctest::Approx(-0.7));
  CHECK(fit.intercept == doctest::Approx(std::log2(3.0)));
  CHECK(fit.residual < 1e-12);

  CHECK_THROWS_AS(fit_decay({1, 2, 3}, {1.0, 0.5, 0.25}), ConfigError);
  CHECK_THROWS_AS(fit_decay({1, 2, 3, 4}, {1.0, 0.0, 0.25, 0.1}), NumericalError);
}

TEST_CASE("norm estimates of known operators") {
  const auto ops = flat_ops(32);
  InputFamily fam;
  for (double p : {1.6, 2.0, 3.0}) {
    const NormEstimate id = estimate_norm(make_operator("Identity", ops), p, 32, 4, 1, NormMethod::EnsembleMax, fam);
    CHECK(id.value == doctest::Approx(1.0).epsilon(1e-12));
    const NormEstimate two = estimate_norm(make_operator("Scale:2", ops), p, 32, 4, 1, NormMethod::PowerP, fam);
    CHECK(two.value == doctest::Approx(2.0).epsilon(1e-12));
  }
  fam.zero_mean_lines = true;
  const NormEstimate h = estimate_norm(make_operator("RowHilbert", ops), 2.0, 32, 8, 3, NormMethod::PowerP, fam);
  CHECK(h.value == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(h.records.size() == 8u);
}

TEST_CASE("operator ids") {
  const auto ops = flat_ops(32);
  for (const char* id : {"Identity", "Hv", "Hl:1", "Pk:2", "PtildeK:2", "PtildeKAdj:2", "POmega:l=1,i=3", "Cone",
                         "Main", "Comm:l=1", "Comm:2"})
    CHECK_NOTHROW(make_operator(id, ops));
  CHECK_THROWS_AS(make_operator("Nope", ops), ConfigError);
  CHECK_THROWS_AS(make_operator("Pk:x", ops), ConfigError);
}

TEST_CASE("family inputs do not depend on the grid") {
  InputFamily fam;
  const Spectrum a = forward(family_input(fam, 9, 2, 32));
  const Spectrum b = forward(family_input(fam, 9, 2, 64));
  double diff = 0.0;
  for (int x = -16; x < 16; ++x)
    for (int y = -16; y < 16; ++y) diff = std::max(diff, std::abs(a.at(x, y) - b.at(x, y)));
  CHECK(diff < 1e-14);
}

TEST_CASE("ensemble statistics") {
  const EnsembleStats s = ensemble_stats({1.0, 3.0, 2.0});
  CHECK(s.count == 3);
  CHECK(s.min == 1.0);
  CHECK(s.max == 3.0);
  CHECK(s.mean == doctest::Approx(2.0));
}

TEST_CASE("records csv") {
  TrialRecord r{"square", 4, 32, 2.0, std::nullopt, 1.0, 0.5, 0.5};
  std::ostringstream out;
  write_records_csv(out, {r}, false);
  CHECK(out.str() == "experiment,seed,n,p,l,in_norm,out_norm,ratio\nsquare,4,32,2,,1,0.5,0.5\n");
}

TEST_CASE("commutator null run") {
  const FieldSpec spec = one_variable_field(SlopeFunction::constant(0.0));
  const CommutatorReport rep = run_commutator_decay(spec, 2.0, 32, {1, 2, 3, 4}, 2, 0, {});
  CHECK(rep.null_run);
  for (double v : rep.norms) CHECK(v < 1e-12);
}

TEST_CASE("experiment configs") {
  const ExperimentConfig cfg = parse_experiment_config(R"({"experiment": "square", "p": [2, 3], "n": 32})");
  CHECK(cfg.p.size() == 2u);
  CHECK(cfg.n == std::vector<int>{32});
  CHECK(parse_experiment_config(to_json_text(cfg)).p == cfg.p);

  CHECK_THROWS_AS(parse_experiment_config("{"), ConfigError);
  CHECK_THROWS_AS(parse_experiment_config(R"({"experiment": "nope"})"), ConfigError);
  CHECK_THROWS_AS(parse_experiment_config(R"({"experiment": "square", "bogus": 1})"), ConfigError);
  CHECK_THROWS_AS(parse_experiment_config(R"({"experiment": "square", "p": 1.0})"), ConfigError);
  CHECK_THROWS_AS(parse_experiment_config(R"({"experiment": "square", "n": 48})"), ConfigError);
  CHECK_THROWS_AS(parse_experiment_config(R"({"experiment": "commutator", "l_list": [1, 2]})"), ConfigError);
}

TEST_CASE("small experiment runs are deterministic across thread counts") {
  const ExperimentConfig cfg =
      parse_experiment_config(R"({"experiment": "square", "p": [2], "n": [32], "trials": 6, "seed": 4})");
  set_thread_count(1);
  const ExperimentOutput a = run_experiment(cfg);
  set_thread_count(4);
  const ExperimentOutput b = run_experiment(cfg);
  set_thread_count(0);
  std::ostringstream sa, sb;
  write_records_csv(sa, a.records, false);
  write_records_csv(sb, b.records, false);
  CHECK(sa.str() == sb.str());
  CHECK(a.summary == b.summary);
}
