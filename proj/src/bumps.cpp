#include "lh/bumps.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <vector>

namespace lh {

namespace {

double edge(double x) { return x > 0.0 ? std::exp(-1.0 / x) : 0.0; }

}  // namespace

double smooth_step(double x) {
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  const double a = edge(x);
  const double b = edge(1.0 - x);
  return a / (a + b);
}

double chi(double t) {
  const double a = std::fabs(t);
  if (a <= 1.5) return 1.0;
  if (a >= 2.0) return 0.0;
  return 1.0 - smooth_step((a - 1.5) / 0.5);
}

double psi0(double t) { return chi(t) - chi(2.0 * t); }

double psi_k(int k, double t) { return psi0(std::ldexp(t, -k)); }

double psi_plus(int l, double eta) { return eta > 0.0 ? psi_k(l, eta) : 0.0; }

double profile_symbol(AdaptedProfile profile, int k, double t) {
  const double s = std::ldexp(t, -k);
  if (profile == AdaptedProfile::Partition) return psi0(s);
  return chi(0.5 * s) - chi(4.0 * s);
}

Support profile_support(AdaptedProfile profile) {
  if (profile == AdaptedProfile::Partition) return {0.75, 2.0};
  return {0.375, 4.0};
}

double beta_bump_root(double x) {
  const double a = std::fabs(x);
  if (a <= 1.0) return 1.0;
  if (a >= 2.0) return 0.0;
  return 1.0 - smooth_step(a - 1.0);
}

double beta_bump(double x) {
  const double r = beta_bump_root(x);
  return r * r;
}

double beta_tilde_root(double a) {
  if (a <= 0.5 || a >= 2.5) return 0.0;
  if (a < 1.0) return smooth_step((a - 0.5) / 0.5);
  if (a <= 2.0) return 1.0;
  return 1.0 - smooth_step((a - 2.0) / 0.5);
}

double beta_tilde(double a) {
  const double r = beta_tilde_root(a);
  return r * r;
}

cplx psi_check0(double tau) {
  // psi0 vanishes to all orders at both ends of [3/4, 2], so the trapezoid
  // rule converges super-algebraically.
  constexpr int panels = 4096;
  constexpr double lo = 0.75;
  constexpr double hi = 2.0;
  const double h = (hi - lo) / panels;
  cplx sum = 0.0;
  for (int q = 1; q < panels; ++q) {
    const double eta = lo + q * h;
    sum += psi0(eta) * std::polar(1.0, kTwoPi * eta * tau);
  }
  return sum * h;
}

double psi_check_window(double tol) {
  static std::mutex mutex;
  static std::map<double, double> memo;
  std::lock_guard<std::mutex> lock(mutex);
  auto it = memo.find(tol);
  if (it != memo.end()) return it->second;

  constexpr double step = 1.0 / 64.0;
  constexpr double tau_max = 512.0;
  const int count = static_cast<int>(tau_max / step);
  std::vector<double> mag(count + 1);
  for (int q = 0; q <= count; ++q) mag[q] = std::abs(psi_check0(q * step));
  // Two-sided tail mass, accumulated from the far end.
  double tail = 0.0;
  double window = tau_max;
  for (int q = count; q > 0; --q) {
    tail += 2.0 * mag[q] * step;
    if (tail >= tol) break;
    window = (q - 1) * step;
  }
  window = std::ceil(window * 4.0) / 4.0;
  memo.emplace(tol, window);
  return window;
}

}  // namespace lh
