#pragma once

#include "lh/common.hpp"

namespace lh {

/// C-infinity step: 0 for x <= 0, 1 for x >= 1, built from exp(-1/x).
double smooth_step(double x);

/// Cutoff: 1 on |t| <= 3/2, 0 on |t| >= 2.
double chi(double t);

/// psi0(t) = chi(t) - chi(2t); even, supported in 3/4 <= |t| <= 2, equal to 1 on 1 <= |t| <= 3/2.
double psi0(double t);

/// psi_k(t) = psi0(2^-k t).
double psi_k(int k, double t);

/// One-sided family: psi_l(eta) for eta > 0, zero otherwise.
double psi_plus(int l, double eta);

/// Profile used by the adapted projections.
///  Partition:   psi_k itself (sums to one over k).
///  Reproducing: chi(t/2) - chi(4t) at scale k, equal to 1 on 1/2 <= 2^-k|t| <= 3,
///               so it acts as the identity on every band-k packet.
enum class AdaptedProfile { Partition, Reproducing };

double profile_symbol(AdaptedProfile profile, int k, double t);

/// Support of profile_symbol(profile, 0, .) on t > 0.
struct Support {
  double lo;
  double hi;
};
Support profile_support(AdaptedProfile profile);

/// Slope bump: 1 on |x| <= 1, 0 on |x| >= 2, with a smooth square root.
double beta_bump(double x);
double beta_bump_root(double x);

/// Vertical band bump: 1 on [1, 2], supported in [1/2, 5/2], with a smooth square root.
double beta_tilde(double a);
double beta_tilde_root(double a);

/// Inverse Fourier transform of the one-sided psi0: integral of psi0(eta) exp(2 pi i eta tau) over eta > 0.
cplx psi_check0(double tau);

/// Smallest W (multiple of 1/4) with the L1 tail of psi_check0 beyond |tau| > W below tol.
double psi_check_window(double tol);

}  // namespace lh
