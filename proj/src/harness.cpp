#include "lh/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <limits>
#include <numeric>
#include <ostream>
#include <random>
#include <sstream>

#include "lh/bumps.hpp"
#include "lh/quadrature.hpp"

namespace lh {

namespace {

constexpr std::uint64_t kInputStream = 0x1A9EULL;
constexpr std::uint64_t kBetaStream = 0xBE7AULL;
constexpr std::uint64_t kPairStream = 0x9A1DULL;
constexpr std::uint64_t kCorpusStream = 0xC04BULL;

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

TrialRecord make_record(const std::string& experiment, std::uint64_t seed, int n, double p, std::optional<int> l,
                        double in_norm, double out_norm) {
  TrialRecord r;
  r.experiment = experiment;
  r.seed = seed;
  r.n = n;
  r.p = p;
  r.l = l;
  r.in_norm = in_norm;
  r.out_norm = out_norm;
  r.ratio = in_norm > 0.0 ? out_norm / in_norm : std::numeric_limits<double>::infinity();
  return r;
}

/// "3" or "l=2,i=5" -> key/value pairs; a bare value gets the key "".
std::vector<std::pair<std::string, std::string>> parse_params(const std::string& text) {
  std::vector<std::pair<std::string, std::string>> out;
  if (text.empty()) return out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto eq = item.find('=');
    if (eq == std::string::npos) out.emplace_back("", item);
    else out.emplace_back(item.substr(0, eq), item.substr(eq + 1));
  }
  return out;
}

int to_int(const std::string& id, const std::string& v) {
  try {
    std::size_t used = 0;
    const int x = std::stoi(v, &used);
    if (used != v.size()) throw std::invalid_argument(v);
    return x;
  } catch (const std::exception&) {
    throw ConfigError("operator id '" + id + "': '" + v + "' is not an integer");
  }
}

int single_param(const std::string& id, const std::vector<std::pair<std::string, std::string>>& params,
                 const std::string& key) {
  if (params.size() != 1 || !(params[0].first.empty() || params[0].first == key))
    throw ConfigError("operator id '" + id + "' needs one parameter " + key);
  return to_int(id, params[0].second);
}

GridFunction signed_power(const GridFunction& f, double exponent) {
  GridFunction out(f.n());
  for (std::size_t i = 0; i < f.size(); ++i) {
    const double a = std::abs(f.values()[i]);
    out.values()[i] = a > 0.0 ? f.values()[i] * std::pow(a, exponent - 1.0) : cplx(0.0);
  }
  return out;
}

double relative_move(double from, double to) { return from != 0.0 ? std::fabs(to - from) / std::fabs(from) : 0.0; }

}  // namespace

void write_records_csv(std::ostream& out, const std::vector<TrialRecord>& records, bool timestamp) {
  if (timestamp) {
    const std::time_t now = std::time(nullptr);
    char buf[64];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
    out << "# generated " << buf << "\n";
  }
  out << "experiment,seed,n,p,l,in_norm,out_norm,ratio\n";
  for (const auto& r : records) {
    out << r.experiment << ',' << r.seed << ',' << r.n << ',' << format_double(r.p) << ',';
    if (r.l) out << *r.l;
    out << ',' << format_double(r.in_norm) << ',' << format_double(r.out_norm) << ',' << format_double(r.ratio)
        << '\n';
  }
}

OperatorHandle make_operator(const std::string& id, std::shared_ptr<const FieldOperators> ops) {
  const auto colon = id.find(':');
  const std::string name = id.substr(0, colon);
  const auto params = parse_params(colon == std::string::npos ? "" : id.substr(colon + 1));
  const auto need_none = [&] {
    if (!params.empty()) throw ConfigError("operator id '" + id + "' takes no parameters");
  };
  const auto need_ops = [&] {
    if (!ops) throw ConfigError("operator id '" + id + "' needs a field");
  };
  OperatorHandle h;
  h.id = id;
  const auto identity = [](const GridFunction& f) { return f; };

  if (name == "Identity") {
    need_none();
    h.apply = h.adjoint = identity;
  } else if (name == "Scale") {
    if (params.size() != 1) throw ConfigError("Scale needs one parameter");
    double c = 0.0;
    try {
      c = std::stod(params[0].second);
    } catch (const std::exception&) {
      throw ConfigError("Scale: bad factor '" + params[0].second + "'");
    }
    h.apply = h.adjoint = [c](const GridFunction& f) { return cplx(c) * f; };
  } else if (name == "RowHilbert") {
    need_none();
    h.apply = [](const GridFunction& f) {
      return multiplier_apply(f, [](int xi1, int) { return cplx(0.0, xi1 > 0 ? -1.0 : xi1 < 0 ? 1.0 : 0.0); });
    };
    h.adjoint = [](const GridFunction& f) {
      return multiplier_apply(f, [](int xi1, int) { return cplx(0.0, xi1 > 0 ? 1.0 : xi1 < 0 ? -1.0 : 0.0); });
    };
  } else if (name == "Hv") {
    need_none();
    need_ops();
    h.apply = [ops](const GridFunction& f) { return ops->H_v(f); };
    h.adjoint = [ops](const GridFunction& f) { return ops->H_v_adjoint(f); };
  } else if (name == "Hl") {
    need_ops();
    const int l = single_param(id, params, "l");
    h.apply = [ops, l](const GridFunction& f) { return ops->H_l(f, l); };
    h.adjoint = [ops, l](const GridFunction& f) { return ops->H_l_adjoint(f, l); };
  } else if (name == "Pk") {
    const int k = single_param(id, params, "k");
    h.apply = h.adjoint = [k](const GridFunction& f) { return P_k(f, k); };
  } else if (name == "PtildeK" || name == "PtildeKAdj") {
    need_ops();
    const int k = single_param(id, params, "k");
    auto fwd = [ops, k](const GridFunction& f) { return ops->Ptilde(f, k); };
    auto adj = [ops, k](const GridFunction& f) { return ops->Ptilde_adjoint(f, k); };
    if (name == "PtildeK") {
      h.apply = fwd;
      h.adjoint = adj;
    } else {
      h.apply = adj;
      h.adjoint = fwd;
    }
  } else if (name == "POmega") {
    DyadicInterval omega;
    bool has_l = false, has_i = false;
    for (const auto& [key, value] : params) {
      if (key == "l") {
        omega.l = to_int(id, value);
        has_l = true;
      } else if (key == "i") {
        omega.i = to_int(id, value);
        has_i = true;
      } else {
        throw ConfigError("POmega: unknown parameter '" + key + "'");
      }
    }
    if (!has_l || !has_i) throw ConfigError("POmega needs l=<l>,i=<i>");
    if (!omega.valid()) throw ConfigError("POmega: interval outside [-2, 2]");
    h.apply = h.adjoint = [omega](const GridFunction& f) { return P_omega(f, omega); };
  } else if (name == "Cone") {
    need_none();
    h.apply = h.adjoint = [](const GridFunction& f) { return cone_project(f); };
  } else if (name == "Main") {
    need_none();
    need_ops();
    h.apply = [ops](const GridFunction& f) { return ops->main_term(f); };
    h.adjoint = [ops](const GridFunction& f) { return ops->main_term_adjoint(f); };
  } else if (name == "Comm") {
    need_ops();
    const int l = single_param(id, params, "l");
    if (l < -2) throw ConfigError("Comm: l must be >= -2");
    h.apply = [ops, l](const GridFunction& f) { return ops->commutator_term(f, l); };
    h.adjoint = [ops, l](const GridFunction& f) { return ops->commutator_term_adjoint(f, l); };
  } else {
    throw ConfigError("unknown operator id '" + id + "'");
  }
  return h;
}

GridFunction family_input(const InputFamily& family, std::uint64_t seed, int trial, int n) {
  RandomOptions opts;
  opts.zero_mean_lines = family.zero_mean_lines;
  return random_bandlimited(derive_seed(seed, kInputStream, static_cast<std::uint64_t>(trial)), n, family.cone,
                            family.band, opts);
}

NormMethod parse_norm_method(const std::string& name) {
  if (name == "ensemble_max") return NormMethod::EnsembleMax;
  if (name == "power_p") return NormMethod::PowerP;
  throw ConfigError("unknown norm method '" + name + "' (ensemble_max|power_p)");
}

NormEstimate estimate_norm(const OperatorHandle& op, double p, int n, int trials, std::uint64_t seed,
                           NormMethod method, const InputFamily& family, const std::string& experiment) {
  if (trials < 1) throw ConfigError("estimate_norm: trials must be >= 1");
  if (!(p > 1.0) || !std::isfinite(p)) throw ConfigError("estimate_norm: p must lie in (1, inf)");
  NormEstimate est;
  est.id = op.id;
  est.p = p;
  est.n = n;
  est.method = method;
  est.trials = trials;
  est.seed = seed;
  std::vector<double> in(trials), out(trials);
  std::vector<std::string> errors(trials);
  parallel_for(trials, [&](std::int64_t t) {
    try {
      const GridFunction f = family_input(family, seed, static_cast<int>(t), n);
      in[t] = lp_norm(f, p);
      const GridFunction g = op.apply(f);
      if (!g.all_finite()) throw NumericalError("non-finite operator output");
      out[t] = lp_norm(g, p);
    } catch (const std::exception& e) {
      errors[t] = e.what();
    }
  });
  for (int t = 0; t < trials; ++t)
    if (!errors[t].empty())
      throw NumericalError(op.id + " trial " + std::to_string(t) + " (seed " + std::to_string(seed) + "): " + errors[t]);
  int best = 0;
  for (int t = 0; t < trials; ++t) {
    est.records.push_back(make_record(experiment, seed, n, p, std::nullopt, in[t], out[t]));
    if (est.records.back().ratio > est.records[best].ratio) best = t;
  }
  est.value = est.records[best].ratio;
  if (method == NormMethod::EnsembleMax) return est;

  GridFunction f = family_input(family, seed, best, n);
  const double q = p / (p - 1.0);
  double previous = est.value;
  for (int iter = 0; iter < 50; ++iter) {
    const GridFunction g = op.apply(f);
    GridFunction next = p == 2.0 ? op.adjoint(g) : signed_power(op.adjoint(signed_power(g, p - 1.0)), q - 1.0);
    const double norm = lp_norm(next, p);
    if (!(norm > 0.0) || !next.all_finite()) break;
    next *= cplx(1.0 / norm);
    f = std::move(next);
    const double ratio = lp_norm(op.apply(f), p) / lp_norm(f, p);
    if (!std::isfinite(ratio)) throw NumericalError(op.id + ": power iteration diverged");
    est.value = std::max(est.value, ratio);
    if (std::fabs(ratio - previous) < 1e-4 * std::max(previous, 1e-300)) break;
    previous = ratio;
  }
  return est;
}

DecayFit fit_decay(const std::vector<int>& l_values, const std::vector<double>& norms) {
  if (l_values.size() != norms.size()) throw ConfigError("fit_decay: size mismatch");
  if (l_values.size() < 4) throw ConfigError("fit_decay: need at least 4 points");
  DecayFit fit;
  fit.l = l_values;
  fit.norms = norms;
  const double m = static_cast<double>(norms.size());
  double sx = 0.0, sy = 0.0;
  std::vector<double> y(norms.size());
  for (std::size_t i = 0; i < norms.size(); ++i) {
    if (!(norms[i] > 0.0)) throw NumericalError("fit_decay: nonpositive norm at l=" + std::to_string(l_values[i]));
    y[i] = std::log2(norms[i]);
    sx += l_values[i];
    sy += y[i];
  }
  const double mx = sx / m, my = sy / m;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < norms.size(); ++i) {
    sxx += (l_values[i] - mx) * (l_values[i] - mx);
    sxy += (l_values[i] - mx) * (y[i] - my);
  }
  if (sxx == 0.0) throw ConfigError("fit_decay: l values must not all coincide");
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  double ss = 0.0;
  for (std::size_t i = 0; i < norms.size(); ++i) {
    const double r = y[i] - (fit.intercept + fit.slope * l_values[i]);
    ss += r * r;
  }
  fit.residual = std::sqrt(ss / m);
  return fit;
}

EnsembleStats ensemble_stats(const std::vector<double>& ratios) {
  EnsembleStats s;
  s.count = static_cast<int>(ratios.size());
  if (ratios.empty()) return s;
  s.min = *std::min_element(ratios.begin(), ratios.end());
  s.max = *std::max_element(ratios.begin(), ratios.end());
  double sum = 0.0;
  for (double r : ratios) sum += r;
  s.mean = sum / ratios.size();
  return s;
}

CommutatorReport run_commutator_decay(const FieldSpec& spec, double p, int n, const std::vector<int>& l_list,
                                      int trials, std::uint64_t seed, const InputFamily& family) {
  if (l_list.size() < 4) throw ConfigError("commutator decay needs at least 4 values of l");
  if (trials < 1) throw ConfigError("trials must be >= 1");
  for (int l : l_list)
    if (l < -2) throw ConfigError("commutator decay: l must be >= -2");
  const FieldOperators ops(spec, n);
  CommutatorReport rep;
  rep.l = l_list;
  rep.null_run = spec.eps0 == 0.0 || spec.g.empty();
  const std::size_t L = l_list.size();
  std::vector<double> in(L * trials), out(L * trials);
  std::vector<GridFunction> inputs(trials);
  parallel_for(trials, [&](std::int64_t t) { inputs[t] = family_input(family, seed, static_cast<int>(t), n); });
  parallel_for(static_cast<std::int64_t>(L * trials), [&](std::int64_t idx) {
    const std::size_t li = static_cast<std::size_t>(idx) / trials;
    const int t = static_cast<int>(idx % trials);
    in[idx] = lp_norm(inputs[t], p);
    out[idx] = lp_norm(ops.commutator_term(inputs[t], l_list[li]), p);
  });
  for (std::size_t li = 0; li < L; ++li) {
    double best = 0.0;
    for (int t = 0; t < trials; ++t) {
      const std::size_t idx = li * trials + t;
      rep.records.push_back(make_record("commutator", seed, n, p, l_list[li], in[idx], out[idx]));
      best = std::max(best, rep.records.back().ratio);
    }
    rep.norms.push_back(best);
  }
  std::vector<int> fl;
  std::vector<double> fn;
  for (std::size_t li = 0; li < L; ++li)
    if (l_list[li] >= 1) {
      fl.push_back(l_list[li]);
      fn.push_back(rep.norms[li]);
    }
  const bool positive = std::all_of(fn.begin(), fn.end(), [](double v) { return v > 0.0; });
  if (!rep.null_run && fl.size() >= 4 && positive) rep.fit = fit_decay(fl, fn);
  return rep;
}

namespace {

GridSweep sweep_from(const std::vector<int>& n_list, const std::vector<std::vector<double>>& ratios) {
  GridSweep s;
  s.n = n_list;
  for (const auto& r : ratios) s.stats.push_back(ensemble_stats(r));
  if (s.stats.size() >= 2) s.stability = relative_move(s.stats.front().max, s.stats.back().max);
  return s;
}

GridFunction root_sum_squares(const std::vector<GridFunction>& parts, int n) {
  GridFunction out(n);
  for (std::size_t i = 0; i < out.size(); ++i) {
    double acc = 0.0;
    for (const auto& part : parts) acc += std::norm(part.values()[i]);
    out.values()[i] = std::sqrt(acc);
  }
  return out;
}

}  // namespace

SquareFunctionReport run_square_function(const FieldSpec& spec, double p, const std::vector<int>& n_list,
                                         int trials, std::uint64_t seed, const InputFamily& family) {
  if (n_list.empty()) throw ConfigError("square function: empty grid list");
  if (trials < 1) throw ConfigError("trials must be >= 1");
  SquareFunctionReport rep;
  if (p <= 1.5) rep.warning = "p <= 3/2 lies outside the proven range; exploratory run";
  std::vector<std::vector<double>> ratios;
  for (int n : n_list) {
    const FieldOperators ops(spec, n);
    std::vector<double> in(trials), out(trials);
    parallel_for(trials, [&](std::int64_t t) {
      const GridFunction f = family_input(family, seed, static_cast<int>(t), n);
      in[t] = lp_norm(f, p);
      if (in[t] == 0.0) return;
      out[t] = lp_norm(root_sum_squares(ops.hilbert_bands(f), n), p);
    });
    std::vector<double> r;
    for (int t = 0; t < trials; ++t) {
      if (in[t] == 0.0) continue;
      rep.records.push_back(make_record("square", seed, n, p, std::nullopt, in[t], out[t]));
      r.push_back(rep.records.back().ratio);
    }
    ratios.push_back(r);
  }
  rep.sweep = sweep_from(n_list, ratios);
  return rep;
}

AdaptedLPReport run_adapted_lp(const FieldSpec& spec, double p, const std::vector<int>& n_list, int trials,
                               std::uint64_t seed, const InputFamily& family) {
  if (!(p > 1.0) || !std::isfinite(p)) throw ConfigError("adapted LP: p must lie in (1, inf)");
  if (n_list.empty()) throw ConfigError("adapted LP: empty grid list");
  if (trials < 1) throw ConfigError("trials must be >= 1");
  AdaptedLPReport rep;
  std::vector<std::vector<double>> fwd_ratios, adj_ratios;
  for (int n : n_list) {
    const FieldOperators ops(spec, n);
    const LPRange range = lp_range(n);
    std::vector<double> in(trials), fwd(trials), adj(trials);
    parallel_for(trials, [&](std::int64_t t) {
      const GridFunction f = family_input(family, seed, static_cast<int>(t), n);
      std::vector<GridFunction> a, b;
      for (int k = range.k_min; k <= range.k_max; ++k) {
        a.push_back(ops.Ptilde(f, k));
        b.push_back(ops.Ptilde_adjoint(f, k));
      }
      in[t] = lp_norm(f, p);
      fwd[t] = lp_norm(root_sum_squares(a, n), p);
      adj[t] = lp_norm(root_sum_squares(b, n), p);
    });
    std::vector<double> rf, ra;
    for (int t = 0; t < trials; ++t) {
      rep.records.push_back(make_record("adapted-lp", seed, n, p, std::nullopt, in[t], fwd[t]));
      rf.push_back(rep.records.back().ratio);
      rep.records.push_back(make_record("adapted-lp-adjoint", seed, n, p, std::nullopt, in[t], adj[t]));
      ra.push_back(rep.records.back().ratio);
    }
    fwd_ratios.push_back(rf);
    adj_ratios.push_back(ra);
  }
  rep.forward = sweep_from(n_list, fwd_ratios);
  rep.adjoint = sweep_from(n_list, adj_ratios);
  for (const GridSweep* s : {&rep.forward, &rep.adjoint}) {
    for (const auto& st : s->stats)
      rep.bracket_ratio = std::max(rep.bracket_ratio, st.min > 0.0 ? st.max / st.min : std::numeric_limits<double>::infinity());
    if (s->stats.size() >= 2) {
      rep.endpoint_move = std::max(rep.endpoint_move, relative_move(s->stats.front().min, s->stats.back().min));
      rep.endpoint_move = std::max(rep.endpoint_move, relative_move(s->stats.front().max, s->stats.back().max));
    }
  }
  return rep;
}

CarlesonReport run_carleson(const FieldSpec& spec, int n, int trials, std::uint64_t seed, const InputFamily& family) {
  if (spec.eps0 != 0.0 && !spec.g.empty()) throw ConfigError("carleson experiment needs a one-variable field (eps0 = 0)");
  if (trials < 1) throw ConfigError("trials must be >= 1");
  const FieldOperators ops(spec, n);
  std::vector<double> lhs(trials), rhs(trials);
  for (int t = 0; t < trials; ++t) {
    const GridFunction f = cone_project(family_input(family, seed, t, n), family.cone);
    lhs[t] = l2_norm(ops.H_v(f));
    rhs[t] = lhs[t] == 0.0 ? 0.0 : carleson_fiber_norm(f, spec.u);
  }
  CarlesonReport rep;
  for (int t = 0; t < trials; ++t) {
    rep.records.push_back(make_record("carleson", seed, n, 2.0, std::nullopt, lhs[t], rhs[t]));
    const double gap = lhs[t] == 0.0 ? 0.0 : std::fabs(lhs[t] - rhs[t]) / lhs[t];
    rep.gaps.push_back(gap);
    rep.max_gap = std::max(rep.max_gap, gap);
  }
  return rep;
}

std::vector<BetaPair> pointwise_beta_family(const FieldSpec& spec, int count, std::uint64_t seed,
                                            const std::vector<int>& k_list, const std::vector<int>& l_list) {
  if (k_list.empty() || l_list.empty()) throw ConfigError("pointwise beta family: empty k or l list");
  std::vector<BetaPair> out;
  for (int i = 0; static_cast<int>(out.size()) < count; ++i) {
    if (i > 64 * count + 64) throw NumericalError("pointwise beta family: too many rejected draws");
    std::mt19937_64 rng(derive_seed(seed, kPairStream, static_cast<std::uint64_t>(i)));
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const int k = k_list[static_cast<std::size_t>(unit(rng) * k_list.size()) % k_list.size()];
    const int l = l_list[static_cast<std::size_t>(unit(rng) * l_list.size()) % l_list.size()];
    if (k < l - 1) continue;
    const double t = unit(rng);
    const double slope = -spec.u(t);
    const int count_l = DyadicInterval::count(l);
    const int oi = std::clamp(static_cast<int>(std::floor((slope + 2.0) * std::ldexp(1.0, l))), 0, count_l - 1);
    Tile s{k, {l, oi}, 0, 0};
    const TileLattice lat = tile_lattice(k, l);
    s.p2 = static_cast<int>(unit(rng) * lat.count2) % lat.count2;
    double best = std::numeric_limits<double>::infinity();
    int best_p1 = 0;
    for (int p1 = 0; p1 < lat.count1; ++p1) {
      s.p1 = p1;
      const Point c = tile_center(s);
      const double d = std::fabs(wrap_half(level_x1(spec, t, c.x2) - c.x1));
      if (d < best) {
        best = d;
        best_p1 = p1;
      }
    }
    s.p1 = best_p1;
    if (curve_in_tile(spec, t, s).points.empty()) continue;
    out.push_back({s, t});
  }
  return out;
}

PointwiseBetaReport run_pointwise_beta(const FieldSpec& spec, int n, const std::vector<BetaPair>& pairs, int j0_max,
                                       int decay_N) {
  if (j0_max < 1) throw ConfigError("pointwise beta: j0_max must be >= 1");
  PointwiseBetaReport rep;
  std::vector<std::optional<PointwiseBetaRow>> rows(pairs.size());
  std::vector<std::string> why(pairs.size());
  int samples = 64;
  while (samples < 4 * n) samples *= 2;
  parallel_for(static_cast<std::int64_t>(pairs.size()), [&](std::int64_t idx) {
    const BetaPair& pr = pairs[idx];
    const Tile& s = pr.tile;
    try {
      if (!tile_resolvable(s, n)) throw ConfigError("tile not resolvable at this grid");
      const CurvePiece piece = curve_in_tile(spec, pr.t, s);
      if (piece.points.empty()) throw ConfigError("level curve misses the tile");
      const CurveBeta cb = curve_beta(spec, pr.t, s, j0_max);
      const OffgridSampler phi(frozen_packet(s, spec, pr.t, n));
      const std::vector<cplx> proj = adapted_on_curve(
          spec, [&phi](Point x) { return phi(x); }, piece.t_lift, piece.b, s.k, AdaptedProfile::Reproducing, samples);
      PointwiseBetaRow row;
      row.pair = pr;
      for (std::size_t q = 0; q < piece.points.size(); ++q)
        row.lhs = std::max(row.lhs, std::abs(phi(piece.points[q]) - proj[q]));
      const double scale = std::ldexp(1.0, s.k) * std::pow(2.0, -1.5 * s.l());
      double sum = 0.0;
      for (int j0 = 1; j0 <= j0_max; ++j0)
        sum += cb.beta[j0 - 1] / std::pow(std::sqrt(1.0 + double(j0) * j0), decay_N);
      row.rhs = scale * sum;
      if (row.rhs > 0.0) row.ratio = row.lhs / row.rhs;
      row.lhs_scaled = row.lhs / scale;
      rows[idx] = row;
    } catch (const ConfigError& e) {
      why[idx] = e.what();
    }
  });
  for (std::size_t idx = 0; idx < pairs.size(); ++idx) {
    if (!rows[idx]) {
      ++rep.skipped;
      rep.log.push_back("pair " + std::to_string(idx) + " skipped: " + why[idx]);
      continue;
    }
    const PointwiseBetaRow& row = *rows[idx];
    rep.rows.push_back(row);
    if (row.ratio) rep.max_ratio = std::max(rep.max_ratio, *row.ratio);
    rep.max_lhs_scaled = std::max(rep.max_lhs_scaled, row.lhs_scaled);
    rep.records.push_back(make_record("pointwise-beta", idx, n, 2.0, row.pair.tile.l(), row.rhs, row.lhs));
  }
  return rep;
}

BetaCarlesonReport run_beta_carleson(std::uint64_t seed, int count, int m, int j0_max) {
  if (count < 1) throw ConfigError("beta Carleson: count must be >= 1");
  if (j0_max < 1) throw ConfigError("beta Carleson: j0_max must be >= 1");
  if (m < 5) throw ConfigError("beta Carleson: need at least 2^5 cells");
  BetaCarlesonReport rep;
  std::vector<std::vector<double>> sums(count, std::vector<double>(j0_max, 0.0));
  std::vector<double> lips(count);
  parallel_for(count, [&](std::int64_t i) {
    const LipschitzSample a = random_lipschitz(derive_seed(seed, kBetaStream, static_cast<std::uint64_t>(i)), m);
    lips[i] = a.lip();
    for (int j0 = 1; j0 <= j0_max; ++j0)
      for (int level = 0; m - level >= 4; ++level)
        for (int idx = 0; idx < (1 << level); ++idx)
          sums[i][j0 - 1] = std::max(sums[i][j0 - 1], carleson_sum(a, dyadic_piece(a, level, idx), j0));
  });
  for (int i = 0; i < count; ++i)
    for (int j0 = 1; j0 <= j0_max; ++j0) {
      const double denom = double(j0) * j0 * j0 * lips[i] * lips[i];
      rep.records.push_back(make_record("beta-carleson", i, 1 << m, 2.0, j0, denom, sums[i][j0 - 1]));
      rep.constant = std::max(rep.constant, rep.records.back().ratio);
    }
  return rep;
}

CoverCorpusReport run_cover_corpus(int n, int count, std::uint64_t seed, double q) {
  if (count < 0) throw ConfigError("cover corpus: negative count");
  CoverCorpusReport rep;
  rep.reports.resize(count);
  for (int i = 0; i < count; ++i) {
    const auto lemma = static_cast<CoveringLemma>(i % 3);
    const Scenario s = random_scenario(derive_seed(seed, kCorpusStream, static_cast<std::uint64_t>(i)), lemma, q);
    rep.reports[i] = verify_covering(s, n);
  }
  for (const auto& r : rep.reports) {
    if (!std::isfinite(r.ratio)) rep.all_finite = false;
    if (!r.hypotheses_ok) ++rep.hypothesis_failures;
    double& m = rep.max_ratio[static_cast<int>(r.lemma)];
    if (std::isfinite(r.ratio)) m = std::max(m, r.ratio);
  }
  return rep;
}

}  // namespace lh
