#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "lh/beta.hpp"
#include "lh/config.hpp"
#include "lh/covering.hpp"
#include "lh/harness.hpp"
#include "lh/tiles.hpp"
#include "lh/transforms.hpp"

namespace fs = std::filesystem;
using namespace lh;

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitNumeric = 3;

std::string read_text(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write '" + path + "'");
  out << text;
}

bool ends_with(const std::string& s, const std::string& suffix) {
  return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

FieldSpec load_field(const std::string& path) {
  if (path.empty()) return sinusoidal_field(0.05, SlopeFunction::steps({0.0, 0.5}, {0.25, -0.375}));
  FieldSpec spec = FieldSpec::from_json_text(read_text(path));
  spec.validate(256);
  return spec;
}

std::vector<double> parse_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      out.push_back(std::stod(item));
    } catch (const std::exception&) {
      throw ConfigError("bad number '" + item + "'");
    }
  }
  return out;
}

struct Globals {
  int threads = 0;
  bool dry_run = false;
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Directional Hilbert transform toolkit on the discrete torus"};
  app.require_subcommand(1);
  Globals g;
  app.add_option("--threads", g.threads, "Worker threads (default: LH_THREADS, else all cores)")->check(CLI::PositiveNumber);
  app.add_flag("--dry-run", g.dry_run, "Validate and print the plan without computing");

  // field make | check | curves
  auto* field = app.add_subcommand("field", "Build, check or dump field specs");
  field->require_subcommand(1);
  double eps0 = 0.05;
  int g_frequency = 1;
  std::string u_values = "0.25,-0.375", u_breaks = "0,0.5", g_kind = "sinusoidal", field_out, field_in;
  auto* field_make = field->add_subcommand("make", "Write a field spec JSON");
  field_make->add_option("--eps0", eps0, "Perturbation size");
  field_make->add_option("--u-values", u_values, "Slope values, comma separated");
  field_make->add_option("--u-breaks", u_breaks, "Step breakpoints in [0,1), comma separated");
  field_make->add_option("--g", g_kind, "Perturbation: sinusoidal | none")->check(CLI::IsMember({"sinusoidal", "none"}));
  field_make->add_option("--frequency", g_frequency, "Periods of the sinusoid in x2")->check(CLI::PositiveNumber);
  field_make->add_option("--out", field_out, "Output path")->required();
  auto* field_check = field->add_subcommand("check", "Validate a field spec");
  field_check->add_option("--config", field_in, "Field spec JSON")->required();
  int curve_count = 16, curve_samples = 256;
  auto* field_curves = field->add_subcommand("curves", "Dump sampled level curves as CSV");
  field_curves->add_option("--config", field_in, "Field spec JSON");
  field_curves->add_option("--count", curve_count, "Number of level values t = i / count");
  field_curves->add_option("--samples", curve_samples, "Samples per curve");
  field_curves->add_option("--out", field_out, "Output CSV")->required();

  // op apply
  auto* op = app.add_subcommand("op", "Apply an operator to a grid function");
  op->require_subcommand(1);
  std::string op_id, op_in, op_out, op_field;
  bool op_adjoint = false;
  auto* op_apply = op->add_subcommand("apply", "Apply an operator to an LHG2 grid");
  op_apply->add_option("--id", op_id, "Operator id, e.g. Hv, Pk:4, PtildeK:4, POmega:l=2,i=5, Comm:l=3")->required();
  op_apply->add_option("--in", op_in, "Input LHG2 file")->required();
  op_apply->add_option("--out", op_out, "Output path (.lhg2 or .csv)")->required();
  op_apply->add_option("--field", op_field, "Field spec JSON (default: sinusoidal eps0 = 0.05)");
  op_apply->add_flag("--adjoint", op_adjoint, "Apply the adjoint instead");

  // norm estimate
  auto* norm = app.add_subcommand("norm", "Operator norm estimation");
  norm->require_subcommand(1);
  std::string norm_id = "Hv", norm_field, norm_method = "ensemble_max", norm_out;
  int norm_n = 128, norm_trials = 16;
  double norm_p = 2.0;
  std::uint64_t norm_seed = 0;
  int band_lo = 1, band_hi = 3;
  auto* norm_est = norm->add_subcommand("estimate", "Lower bound on the p -> p norm");
  norm_est->add_option("--id", norm_id, "Operator id");
  norm_est->add_option("--field", norm_field, "Field spec JSON");
  norm_est->add_option("--n", norm_n, "Grid size");
  norm_est->add_option("--p", norm_p, "Exponent");
  norm_est->add_option("--trials", norm_trials, "Ensemble size");
  norm_est->add_option("--seed", norm_seed, "Root seed");
  norm_est->add_option("--method", norm_method, "ensemble_max | power_p");
  norm_est->add_option("--band-lo", band_lo, "Lowest dyadic band of the inputs");
  norm_est->add_option("--band-hi", band_hi, "Highest dyadic band of the inputs");
  norm_est->add_option("--out", norm_out, "Output directory (CSV + summary); stdout when empty");

  // exp <name>
  auto* exp = app.add_subcommand("exp", "Run a named experiment from a JSON config");
  exp->require_subcommand(1);
  std::string exp_config, exp_out;
  std::uint64_t exp_seed = 0;
  int exp_n = 0;
  std::vector<CLI::App*> exp_subs;
  for (const char* name : {"commutator", "square", "adapted-lp", "carleson", "pointwise-beta", "beta-carleson", "cover"}) {
    auto* sub = exp->add_subcommand(name, std::string("Experiment ") + name);
    sub->add_option("--config", exp_config, "Experiment config JSON")->required();
    sub->add_option("--out", exp_out, "Output directory (overrides config)");
    sub->add_option("--seed", exp_seed, "Root seed (overrides config)");
    sub->add_option("--n", exp_n, "Single grid size (overrides config)");
    exp_subs.push_back(sub);
  }

  // beta table
  auto* beta = app.add_subcommand("beta", "Jones beta numbers");
  beta->require_subcommand(1);
  std::uint64_t beta_seed = 0;
  int beta_m = 10, beta_j0 = 4;
  std::string beta_out;
  auto* beta_table_cmd = beta->add_subcommand("table", "Beta table of a random Lipschitz function");
  beta_table_cmd->add_option("--seed", beta_seed, "Seed of the random function");
  beta_table_cmd->add_option("--m", beta_m, "2^m + 1 sample nodes");
  beta_table_cmd->add_option("--j0", beta_j0, "Largest j0");
  beta_table_cmd->add_option("--out", beta_out, "Output CSV (stdout when empty)");

  // cover verify
  auto* cover = app.add_subcommand("cover", "Covering lemma verifiers");
  cover->require_subcommand(1);
  std::string cover_config, cover_out, cover_lemma = "density";
  int cover_n = 512, cover_random = 0;
  std::uint64_t cover_seed = 0;
  double cover_q = 2.0;
  auto* cover_verify = cover->add_subcommand("verify", "Verify a scenario JSON or a random corpus");
  cover_verify->add_option("--config", cover_config, "Scenario JSON");
  cover_verify->add_option("--random", cover_random, "Generate this many random scenarios instead");
  cover_verify->add_option("--lemma", cover_lemma, "Lemma of the random scenarios (incomparable|density|population|all)");
  cover_verify->add_option("--seed", cover_seed, "Root seed of the random scenarios");
  cover_verify->add_option("--q", cover_q, "Exponent q");
  cover_verify->add_option("--n", cover_n, "Rasterization grid");
  cover_verify->add_option("--out", cover_out, "Report CSV (stdout when empty)");

  // tiles dump | check
  auto* tiles = app.add_subcommand("tiles", "Tile families");
  tiles->require_subcommand(1);
  int tile_l = 1, tile_n = 128, tile_window = 0;
  std::string tile_k = "3,4", tile_out;
  auto* tiles_dump = tiles->add_subcommand("dump", "Write tile rectangles as CSV");
  auto* tiles_check = tiles->add_subcommand("check", "Check packet normalization and the frame identity");
  for (auto* sub : {tiles_dump, tiles_check}) {
    sub->add_option("--l", tile_l, "Slope generation l");
    sub->add_option("--k", tile_k, "Scales k, comma separated");
    sub->add_option("--window", tile_window, "Lattice window per axis (0 = all)");
  }
  tiles_dump->add_option("--out", tile_out, "Output CSV (stdout when empty)");
  tiles_check->add_option("--n", tile_n, "Grid size");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    if (g.threads > 0) set_thread_count(g.threads);

    if (field->parsed()) {
      if (field_make->parsed()) {
        const std::vector<double> values = parse_list(u_values);
        const std::vector<double> breaks = parse_list(u_breaks);
        SlopeFunction u = values.size() == 1 && breaks.size() <= 1 ? SlopeFunction::constant(values[0])
                                                                   : SlopeFunction::steps(breaks, values);
        FieldSpec spec = g_kind == "sinusoidal" ? sinusoidal_field(eps0, u, g_frequency) : one_variable_field(u);
        if (g_kind == "none") spec.eps0 = eps0;
        spec.validate(256);
        if (g.dry_run) {
          std::cout << spec.to_json_text() << "\n";
          return 0;
        }
        write_text(field_out, spec.to_json_text() + "\n");
      } else if (field_check->parsed()) {
        const FieldSpec spec = load_field(field_in);
        std::cout << "ok: eps0=" << spec.eps0 << " sup|u|=" << spec.u.sup_norm() << " sup|grad g|<=" << spec.grad_g_bound()
                  << " u=" << (spec.u.piecewise_constant() ? "steps" : "smooth") << "\n";
      } else if (field_curves->parsed()) {
        const FieldSpec spec = load_field(field_in);
        if (curve_count < 1 || curve_samples < 2) throw ConfigError("count and samples must be positive");
        if (g.dry_run) {
          std::cout << curve_count << " curves x " << curve_samples << " samples -> " << field_out << "\n";
          return 0;
        }
        std::ostringstream os;
        os << "t,x1,x2\n";
        char buf[96];
        for (int i = 0; i < curve_count; ++i) {
          const LevelCurve c = level_curve(spec, static_cast<double>(i) / curve_count, curve_samples);
          for (std::size_t q = 0; q < c.x1.size(); ++q) {
            std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g\n", c.t, c.x1[q], c.x2[q]);
            os << buf;
          }
        }
        write_text(field_out, os.str());
      }
      return 0;
    }

    if (op->parsed()) {
      const FieldSpec spec = load_field(op_field);
      const GridFunction f = read_lhg2(op_in);
      auto ops = std::make_shared<const FieldOperators>(spec, f.n());
      const OperatorHandle handle = make_operator(op_id, ops);
      if (g.dry_run) {
        std::cout << "apply " << (op_adjoint ? "adjoint of " : "") << op_id << " at n=" << f.n() << " -> " << op_out << "\n";
        return 0;
      }
      const GridFunction out = op_adjoint ? handle.adjoint(f) : handle.apply(f);
      if (!out.all_finite()) throw NumericalError(op_id + ": non-finite output");
      if (ends_with(op_out, ".csv")) {
        std::ofstream os(op_out);
        if (!os) throw ConfigError("cannot write '" + op_out + "'");
        write_grid_csv(os, out);
      } else {
        write_lhg2(op_out, out);
      }
      return 0;
    }

    if (norm->parsed()) {
      const FieldSpec spec = load_field(norm_field);
      auto ops = std::make_shared<const FieldOperators>(spec, norm_n);
      const OperatorHandle handle = make_operator(norm_id, ops);
      const NormMethod method = parse_norm_method(norm_method);
      InputFamily family;
      family.band = {band_lo, band_hi};
      if ((1 << band_hi) > norm_n / 4 || band_lo < 0 || band_hi < band_lo) throw ConfigError("bad input band");
      if (g.dry_run) {
        std::cout << "estimate " << norm_id << " p=" << norm_p << " n=" << norm_n << " trials=" << norm_trials << "\n";
        return 0;
      }
      const NormEstimate est = estimate_norm(handle, norm_p, norm_n, norm_trials, norm_seed, method, family);
      nlohmann::json summary = {{"id", est.id}, {"p", est.p}, {"n", est.n}, {"method", norm_method},
                                {"value", est.value}, {"trials", est.trials}, {"seed", est.seed}};
      if (norm_out.empty()) {
        std::cout << summary.dump(2) << "\n";
      } else {
        fs::create_directories(norm_out);
        std::ofstream csv(fs::path(norm_out) / "norm.csv");
        write_records_csv(csv, est.records);
        write_text((fs::path(norm_out) / "norm_summary.json").string(), summary.dump(2) + "\n");
      }
      return 0;
    }

    if (exp->parsed()) {
      ExperimentConfig cfg = parse_experiment_config(read_text(exp_config));
      std::string chosen;
      for (auto* sub : exp_subs)
        if (sub->parsed()) chosen = sub->get_name();
      if (cfg.experiment != chosen)
        throw ConfigError("config experiment '" + cfg.experiment + "' does not match subcommand '" + chosen + "'");
      if (!exp_out.empty()) cfg.out = exp_out;
      if (exp->get_subcommand(chosen)->count("--seed")) cfg.seed = exp_seed;
      if (exp_n > 0) {
        check_grid_size(exp_n);
        cfg.n = {exp_n};
      }
      if (g.dry_run) {
        std::cout << describe_plan(cfg);
        return 0;
      }
      const ExperimentOutput result = run_experiment(cfg);
      fs::create_directories(cfg.out);
      std::ofstream csv(fs::path(cfg.out) / (cfg.experiment + ".csv"), std::ios::binary);
      if (cfg.experiment == "cover") write_covering_csv(csv, result.covering);
      else write_records_csv(csv, result.records);
      write_text((fs::path(cfg.out) / (cfg.experiment + "_summary.json")).string(), result.summary + "\n");
      return 0;
    }

    if (beta->parsed()) {
      if (beta_m < 2 || beta_m > 20 || beta_j0 < 1) throw ConfigError("beta table: need 2 <= m <= 20 and j0 >= 1");
      if (g.dry_run) {
        std::cout << "beta table seed=" << beta_seed << " nodes=" << (1 << beta_m) + 1 << " j0<=" << beta_j0 << "\n";
        return 0;
      }
      const auto rows = beta_table(random_lipschitz(beta_seed, beta_m), beta_j0);
      if (beta_out.empty()) {
        write_beta_csv(std::cout, rows);
      } else {
        std::ofstream os(beta_out, std::ios::binary);
        if (!os) throw ConfigError("cannot write '" + beta_out + "'");
        write_beta_csv(os, rows);
      }
      return 0;
    }

    if (cover->parsed()) {
      check_grid_size(cover_n);
      std::vector<Scenario> scenarios;
      if (!cover_config.empty()) {
        scenarios.push_back(Scenario::from_json_text(read_text(cover_config)));
      } else if (cover_random > 0) {
        if (!(cover_q > 1.0)) throw ConfigError("q must exceed 1");
        for (int i = 0; i < cover_random; ++i) {
          const CoveringLemma lemma =
              cover_lemma == "all" ? static_cast<CoveringLemma>(i % 3) : parse_covering_lemma(cover_lemma);
          scenarios.push_back(random_scenario(derive_seed(cover_seed, 0xC04BULL, i), lemma, cover_q));
        }
      } else {
        throw ConfigError("cover verify needs --config or --random");
      }
      if (g.dry_run) {
        std::cout << scenarios.size() << " scenario(s) at n=" << cover_n << "\n";
        return 0;
      }
      std::vector<CoveringReport> reports;
      for (const auto& s : scenarios) reports.push_back(verify_covering(s, cover_n));
      if (cover_out.empty()) {
        write_covering_csv(std::cout, reports);
      } else {
        std::ofstream os(cover_out, std::ios::binary);
        if (!os) throw ConfigError("cannot write '" + cover_out + "'");
        write_covering_csv(os, reports);
      }
      return 0;
    }

    if (tiles->parsed()) {
      TileSetSpec ts;
      ts.l = tile_l;
      for (double k : parse_list(tile_k)) ts.k_list.push_back(static_cast<int>(k));
      ts.pos_window = tile_window;
      const std::vector<Tile> family = make_tiles(ts);
      if (g.dry_run) {
        std::cout << family.size() << " tiles\n";
        return 0;
      }
      if (tiles_dump->parsed()) {
        std::ostringstream os;
        os << "k,l,omega_i,p1,p2,c1,c2,width,length,slope\n";
        char buf[256];
        for (const Tile& s : family) {
          const Point c = tile_center(s);
          std::snprintf(buf, sizeof buf, "%d,%d,%d,%d,%d,%.17g,%.17g,%.17g,%.17g,%.17g\n", s.k, s.l(), s.omega.i, s.p1,
                        s.p2, c.x1, c.x2, s.width(), s.length(), s.slope());
          os << buf;
        }
        if (tile_out.empty()) std::cout << os.str();
        else write_text(tile_out, os.str());
      } else {
        check_grid_size(tile_n);
        double worst = 0.0;
        int checked = 0;
        for (const Tile& s : family) {
          if (!tile_resolvable(s, tile_n)) continue;
          worst = std::max(worst, std::fabs(l2_norm(wave_packet(s, tile_n)) - 1.0));
          ++checked;
        }
        std::cout << "checked " << checked << " of " << family.size() << " tiles, max | ||phi_s||_2 - 1 | = " << worst
                  << "\n";
        if (worst > 1e-6) throw NumericalError("packet normalization off by " + std::to_string(worst));
      }
      return 0;
    }
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::domain_error& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return kExitNumeric;
  }
  return 0;
}
