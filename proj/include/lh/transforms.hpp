#pragma once

#include <memory>
#include <vector>

#include "lh/adapted.hpp"
#include "lh/dyadic.hpp"
#include "lh/fields.hpp"
#include "lh/grid.hpp"

namespace lh {

/// Admissible LP scales at grid size n: 0 <= k <= log2(n) - 2, so 2^k_max = n / 4.
struct LPRange {
  int k_min = 0;
  int k_max = 0;
};
LPRange lp_range(int n);

/// Zero every coefficient with |xi1| > slope |xi2|, and the xi2 = 0 row.
GridFunction cone_project(const GridFunction& f, ConeSpec cone = {});

/// Vertical LP projection: multiplier psi_k(xi2).
GridFunction P_k(const GridFunction& f, int k);

/// Slope-band projection: multiplier beta_omega(xi1 / xi2), xi2 = 0 row zeroed.
GridFunction P_omega(const GridFunction& f, const DyadicInterval& omega);

/// Multiplier of the one-variable Hilbert transform along (1, u): sign(xi1 + u xi2), with 0 sent to -1.
/// It equals -1 + 2 sum_l psi_l^+(xi1 + u xi2) summed over every scale.
double hilbert_symbol(double u, int xi1, int xi2);

enum class HEngine {
  Auto,        ///< Spectral when u is piecewise constant, quadrature otherwise.
  Spectral,    ///< Per slope value multiplier, selected pointwise by u(h(x)); exact.
  Quadrature,  ///< Line quadrature with off-grid sampling; small grids only.
};

struct OperatorOptions {
  HEngine engine = HEngine::Auto;
  /// Smallest l in the quadrature assembly of H_v.
  int quad_l_min = -2;
  double quad_tail_tol = 1e-9;
  AdaptedProjector::Path adapted_path = AdaptedProjector::Path::Auto;
};

/// Operators tied to one field and grid size. Construction precomputes the slope
/// partition and the adapted-projection tables; every method is const and thread-safe.
class FieldOperators {
 public:
  FieldOperators(const FieldSpec& spec, int n, OperatorOptions options = {});

  int n() const { return n_; }
  const FieldSpec& spec() const { return spec_; }
  bool spectral() const { return spectral_; }
  const AdaptedProjector& adapted() const { return adapted_; }

  GridFunction H_l(const GridFunction& f, int l) const;
  GridFunction H_l_adjoint(const GridFunction& g, int l) const;
  /// -f + 2 sum_l H_l f.
  GridFunction H_v(const GridFunction& f) const;
  GridFunction H_v_adjoint(const GridFunction& g) const;

  GridFunction Ptilde(const GridFunction& f, int k, AdaptedProfile profile = AdaptedProfile::Partition) const;
  GridFunction Ptilde_adjoint(const GridFunction& g, int k,
                              AdaptedProfile profile = AdaptedProfile::Partition) const;

  /// sum_k (H_{k-l} P_k f - Ptilde_k H_{k-l} P_k f), l >= -2, with the reproducing profile.
  GridFunction commutator_term(const GridFunction& f, int l) const;
  GridFunction commutator_term_adjoint(const GridFunction& g, int l) const;
  /// sum_k Ptilde_k H_v P_k f with the reproducing profile.
  GridFunction main_term(const GridFunction& f) const;
  GridFunction main_term_adjoint(const GridFunction& g) const;
  /// -sum_k (P_k f - Ptilde_k P_k f); closes the split
  ///   sum_k H_v P_k f = main + remainder + 2 sum_{l >= -2} commutator(l).
  GridFunction lp_remainder(const GridFunction& f) const;

  /// H_v P_k f for every k in the LP range (square-function building block).
  std::vector<GridFunction> hilbert_bands(const GridFunction& f) const;

 private:
  template <class SymbolOf>
  GridFunction spectral_select(const GridFunction& f, SymbolOf&& symbol_for_value) const;
  template <class SymbolOf>
  GridFunction spectral_select_adjoint(const GridFunction& g, SymbolOf&& symbol_for_value) const;

  FieldSpec spec_;
  int n_ = 0;
  OperatorOptions options_;
  bool spectral_ = false;
  SlopePieces pieces_;
  AdaptedProjector adapted_;
};

}  // namespace lh
