#include "lh/transforms.hpp"

#include <cmath>

#include "lh/bumps.hpp"
#include "lh/quadrature.hpp"

namespace lh {

LPRange lp_range(int n) {
  check_grid_size(n);
  return {0, ilog2(n) - 2};
}

GridFunction cone_project(const GridFunction& f, ConeSpec cone) {
  if (!(cone.half_angle_slope > 0.0 && cone.half_angle_slope <= 1.0))
    throw ConfigError("cone half_angle_slope must lie in (0, 1]");
  const double s = cone.half_angle_slope;
  return multiplier_apply(f, [s](int xi1, int xi2) {
    if (xi2 == 0) return cplx(0.0);
    return cplx(std::abs(xi1) <= s * std::abs(xi2) + 1e-12 ? 1.0 : 0.0);
  });
}

GridFunction P_k(const GridFunction& f, int k) {
  const LPRange r = lp_range(f.n());
  if (k < r.k_min || k > r.k_max)
    throw ConfigError("P_k: k=" + std::to_string(k) + " outside [" + std::to_string(r.k_min) + ", " +
                      std::to_string(r.k_max) + "]");
  return multiplier_apply(f, [k](int, int xi2) { return cplx(psi_k(k, xi2)); });
}

GridFunction P_omega(const GridFunction& f, const DyadicInterval& omega) {
  if (!omega.valid()) throw ConfigError("P_omega: interval outside [-2, 2]");
  return multiplier_apply(f, [&omega](int xi1, int xi2) {
    if (xi2 == 0) return cplx(0.0);
    return cplx(beta_omega(omega, static_cast<double>(xi1) / xi2));
  });
}

double hilbert_symbol(double u, int xi1, int xi2) { return xi1 + u * xi2 > 0.0 ? 1.0 : -1.0; }

FieldOperators::FieldOperators(const FieldSpec& spec, int n, OperatorOptions options)
    : spec_(spec), n_(n), options_(options), adapted_(spec, n, options.adapted_path) {
  check_grid_size(n);
  const bool steps = spec.u.piecewise_constant();
  switch (options.engine) {
    case HEngine::Auto: spectral_ = steps; break;
    case HEngine::Spectral:
      if (!steps) throw ConfigError("spectral H engine needs piecewise-constant u");
      spectral_ = true;
      break;
    case HEngine::Quadrature: spectral_ = false; break;
  }
  if (spectral_) pieces_ = slope_pieces(spec, n);
}

template <class SymbolOf>
GridFunction FieldOperators::spectral_select(const GridFunction& f, SymbolOf&& symbol_for_value) const {
  const Spectrum s = forward(f);
  const std::size_t pieces = pieces_.values.size();
  if (pieces == 1) return inverse(multiplier_apply(s, symbol_for_value(pieces_.values[0])));
  GridFunction out(n_);
  for (std::size_t p = 0; p < pieces; ++p) {
    const GridFunction part = inverse(multiplier_apply(s, symbol_for_value(pieces_.values[p])));
    for (std::size_t idx = 0; idx < out.size(); ++idx)
      if (pieces_.label[idx] == static_cast<int>(p)) out.values()[idx] = part.values()[idx];
  }
  return out;
}

template <class SymbolOf>
GridFunction FieldOperators::spectral_select_adjoint(const GridFunction& g, SymbolOf&& symbol_for_value) const {
  // Real symbols: the adjoint of (mask_p o M_p) is M_p o mask_p.
  const std::size_t pieces = pieces_.values.size();
  if (pieces == 1) return multiplier_apply(g, symbol_for_value(pieces_.values[0]));
  Spectrum total(n_);
  for (std::size_t p = 0; p < pieces; ++p) {
    GridFunction masked(n_);
    for (std::size_t idx = 0; idx < masked.size(); ++idx)
      if (pieces_.label[idx] == static_cast<int>(p)) masked.values()[idx] = g.values()[idx];
    const Spectrum part = multiplier_apply(forward(masked), symbol_for_value(pieces_.values[p]));
    for (std::size_t idx = 0; idx < total.coeffs().size(); ++idx) total.coeffs()[idx] += part.coeffs()[idx];
  }
  return inverse(total);
}

namespace {

void check_size(const GridFunction& f, int n) {
  if (f.n() != n) throw ConfigError("operator built for n=" + std::to_string(n) + ", got n=" + std::to_string(f.n()));
}

void check_l_resolvable(int n, int l) {
  if (l > ilog2(n) - 1) throw ConfigError("H_l: scale 2^-l=" + std::to_string(std::ldexp(1.0, -l)) + " below 2/n");
}

}  // namespace

GridFunction FieldOperators::H_l(const GridFunction& f, int l) const {
  check_size(f, n_);
  check_l_resolvable(n_, l);
  if (!spectral_) return H_l_quadrature(f, spec_, l, options_.quad_tail_tol);
  return spectral_select(f, [l](double u) {
    return [u, l](int xi1, int xi2) { return cplx(psi_plus(l, xi1 + u * xi2)); };
  });
}

GridFunction FieldOperators::H_l_adjoint(const GridFunction& g, int l) const {
  check_size(g, n_);
  check_l_resolvable(n_, l);
  if (!spectral_) return H_l_quadrature_adjoint(g, spec_, l, options_.quad_tail_tol);
  return spectral_select_adjoint(g, [l](double u) {
    return [u, l](int xi1, int xi2) { return cplx(psi_plus(l, xi1 + u * xi2)); };
  });
}

GridFunction FieldOperators::H_v(const GridFunction& f) const {
  check_size(f, n_);
  if (spectral_) {
    return spectral_select(f, [](double u) {
      return [u](int xi1, int xi2) { return cplx(hilbert_symbol(u, xi1, xi2)); };
    });
  }
  GridFunction out = f;
  out *= cplx(-1.0);
  for (int l = options_.quad_l_min; l <= ilog2(n_) - 1; ++l) out.axpy(2.0, H_l(f, l));
  return out;
}

GridFunction FieldOperators::H_v_adjoint(const GridFunction& g) const {
  check_size(g, n_);
  if (spectral_) {
    return spectral_select_adjoint(g, [](double u) {
      return [u](int xi1, int xi2) { return cplx(hilbert_symbol(u, xi1, xi2)); };
    });
  }
  GridFunction out = g;
  out *= cplx(-1.0);
  for (int l = options_.quad_l_min; l <= ilog2(n_) - 1; ++l) out.axpy(2.0, H_l_adjoint(g, l));
  return out;
}

GridFunction FieldOperators::Ptilde(const GridFunction& f, int k, AdaptedProfile profile) const {
  return adapted_.apply(f, k, profile);
}

GridFunction FieldOperators::Ptilde_adjoint(const GridFunction& g, int k, AdaptedProfile profile) const {
  return adapted_.adjoint(g, k, profile);
}

namespace {

bool is_zero(const GridFunction& f) {
  for (const auto& v : f.values())
    if (v != cplx(0.0)) return false;
  return true;
}

}  // namespace

GridFunction FieldOperators::commutator_term(const GridFunction& f, int l) const {
  check_size(f, n_);
  if (l < -2) throw ConfigError("commutator_term: l must be >= -2");
  const LPRange r = lp_range(n_);
  GridFunction out(n_);
  for (int k = r.k_min; k <= r.k_max; ++k) {
    if (k - l > ilog2(n_) - 1) continue;
    const GridFunction pk = P_k(f, k);
    if (is_zero(pk)) continue;
    const GridFunction hp = H_l(pk, k - l);
    out += hp;
    out -= adapted_.apply(hp, k, AdaptedProfile::Reproducing);
  }
  return out;
}

GridFunction FieldOperators::commutator_term_adjoint(const GridFunction& g, int l) const {
  check_size(g, n_);
  if (l < -2) throw ConfigError("commutator_term: l must be >= -2");
  const LPRange r = lp_range(n_);
  GridFunction out(n_);
  for (int k = r.k_min; k <= r.k_max; ++k) {
    if (k - l > ilog2(n_) - 1) continue;
    GridFunction w = g;
    w -= adapted_.adjoint(g, k, AdaptedProfile::Reproducing);
    out += P_k(H_l_adjoint(w, k - l), k);
  }
  return out;
}

GridFunction FieldOperators::main_term(const GridFunction& f) const {
  check_size(f, n_);
  const LPRange r = lp_range(n_);
  GridFunction out(n_);
  for (int k = r.k_min; k <= r.k_max; ++k) {
    const GridFunction pk = P_k(f, k);
    if (is_zero(pk)) continue;
    out += adapted_.apply(H_v(pk), k, AdaptedProfile::Reproducing);
  }
  return out;
}

GridFunction FieldOperators::main_term_adjoint(const GridFunction& g) const {
  check_size(g, n_);
  const LPRange r = lp_range(n_);
  GridFunction out(n_);
  for (int k = r.k_min; k <= r.k_max; ++k)
    out += P_k(H_v_adjoint(adapted_.adjoint(g, k, AdaptedProfile::Reproducing)), k);
  return out;
}

GridFunction FieldOperators::lp_remainder(const GridFunction& f) const {
  check_size(f, n_);
  const LPRange r = lp_range(n_);
  GridFunction out(n_);
  for (int k = r.k_min; k <= r.k_max; ++k) {
    const GridFunction pk = P_k(f, k);
    if (is_zero(pk)) continue;
    out -= pk;
    out += adapted_.apply(pk, k, AdaptedProfile::Reproducing);
  }
  return out;
}

std::vector<GridFunction> FieldOperators::hilbert_bands(const GridFunction& f) const {
  check_size(f, n_);
  const LPRange r = lp_range(n_);
  std::vector<GridFunction> out;
  for (int k = r.k_min; k <= r.k_max; ++k) out.push_back(H_v(P_k(f, k)));
  return out;
}

}  // namespace lh
