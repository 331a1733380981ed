#pragma once

#include <vector>

namespace lh {

/// Offset of the slope bump: beta_omega(x) = beta(2^(l + kSlopeOffset) (x - c(omega_1))).
constexpr int kSlopeOffset = 3;

/// Dyadic interval [-2 + i 2^-l, -2 + (i + 1) 2^-l] inside [-2, 2].
struct DyadicInterval {
  int l = 0;
  int i = 0;

  /// Number of generation-l intervals in [-2, 2].
  static int count(int l);

  double length() const;
  double left() const;
  double right() const { return left() + length(); }
  double center() const { return left() + 0.5 * length(); }
  /// Right half.
  DyadicInterval omega1() const { return {l + 1, 2 * i + 1}; }
  /// Left half.
  DyadicInterval omega2() const { return {l + 1, 2 * i}; }
  bool contains(double x) const { return x >= left() && x <= right(); }
  bool valid() const;
};

bool operator==(const DyadicInterval& a, const DyadicInterval& b);

/// All intervals of generation l (the family D_l).
std::vector<DyadicInterval> dyadic_family(int l);

/// beta_omega(x); equal to 1 near c(omega_1), supported inside omega_1.
double beta_omega(const DyadicInterval& omega, double x);

}  // namespace lh
