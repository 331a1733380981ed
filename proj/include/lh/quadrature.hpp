#pragma once

#include "lh/fields.hpp"
#include "lh/grid.hpp"

namespace lh {

/// Direct quadrature for H_l f(x) = int psi_l^(t) f(x - t v(x)) dt with off-grid sampling.
/// The step 1/(r n) keeps the trapezoid rule alias-free for every grid frequency; the
/// window |t| <= W 2^-l takes W from the L1 tail of psi_0^ below tail_tol.
struct LineQuadrature {
  double step = 0.0;
  std::vector<double> nodes;
  std::vector<cplx> weights;
};

LineQuadrature line_quadrature(int n, int l, double tail_tol);

GridFunction H_l_quadrature(const GridFunction& f, const FieldSpec& spec, int l, double tail_tol = 1e-9);
/// Transpose of the discretized H_l_quadrature (scatter through the interpolation stencils).
GridFunction H_l_quadrature_adjoint(const GridFunction& g, const FieldSpec& spec, int l, double tail_tol = 1e-9);

/// Principal-value line Hilbert transform of the x2-fibers, evaluated by a
/// Gaussian-windowed trapezoid rule: for each xi2 and grid x1,
///   PV int F(x1 - t, xi2) exp(-2 pi i t u(x1) xi2) dt / t,  F = partial Fourier transform in x2.
/// Returns || . ||_2 / pi, which equals ||H_v f||_2 for one-variable fields.
double carleson_fiber_norm(const GridFunction& f, const SlopeFunction& u);

/// |LHS - RHS| / LHS with LHS = ||H_v f||_2 from the operator assembly and RHS the fiber quadrature.
/// Requires eps0 = 0; zero input returns 0.
double carleson_identity_gap(const GridFunction& f, const FieldSpec& spec);

}  // namespace lh
