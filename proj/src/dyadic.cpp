#include "lh/dyadic.hpp"

#include <cmath>

#include "lh/bumps.hpp"
#include "lh/common.hpp"

namespace lh {

int DyadicInterval::count(int l) {
  if (l < 0 || l > 24) throw ConfigError("dyadic generation out of range");
  return 4 << l;
}

double DyadicInterval::length() const { return std::ldexp(1.0, -l); }

double DyadicInterval::left() const { return -2.0 + i * length(); }

bool DyadicInterval::valid() const { return l >= 0 && l <= 24 && i >= 0 && i < count(l); }

bool operator==(const DyadicInterval& a, const DyadicInterval& b) { return a.l == b.l && a.i == b.i; }

std::vector<DyadicInterval> dyadic_family(int l) {
  std::vector<DyadicInterval> out;
  const int c = DyadicInterval::count(l);
  out.reserve(c);
  for (int i = 0; i < c; ++i) out.push_back({l, i});
  return out;
}

double beta_omega(const DyadicInterval& omega, double x) {
  return beta_bump(std::ldexp(x - omega.omega1().center(), omega.l + kSlopeOffset));
}

}  // namespace lh
