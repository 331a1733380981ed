#include "lh/tiles.hpp"

#include <algorithm>
#include <cmath>

#include "lh/bumps.hpp"
#include "lh/transforms.hpp"

namespace lh {

double Tile::width() const { return std::ldexp(1.0, -k); }

double Tile::length() const { return std::ldexp(1.0, omega.l - k); }

Rect Tile::rect() const { return Rect{tile_center(*this), length(), width(), slope()}; }

TileLattice tile_lattice(int k, int l) {
  if (l < 0) throw ConfigError("tile lattice: l must be >= 0");
  if (k < l - 1) throw ConfigError("tile lattice: needs k >= l - 1");
  if (k > 20) throw ConfigError("tile lattice: k too large");
  TileLattice lat;
  lat.alpha = std::ldexp(1.0, l - k - 1);
  lat.beta = std::ldexp(1.0, -k - 2);
  lat.count1 = 1 << (k - l + 1);
  lat.count2 = 1 << (k + 2);
  return lat;
}

Point tile_center(const Tile& s) {
  const TileLattice lat = tile_lattice(s.k, s.l());
  const double x1 = s.p1 * lat.alpha;
  const double x2 = s.p2 * lat.beta + s.slope() * x1;
  return {frac(x1), frac(x2)};
}

double multiplier_value(int k, const DyadicInterval& omega, int xi1, int xi2) {
  if (xi2 <= 0) return 0.0;
  const double bt = beta_tilde(std::ldexp(static_cast<double>(xi2), -k));
  if (bt == 0.0) return 0.0;
  return bt * beta_omega(omega, static_cast<double>(xi1) / xi2);
}

Symbol make_multiplier(int k, const DyadicInterval& omega) {
  return [k, omega](int xi1, int xi2) { return cplx(multiplier_value(k, omega, xi1, xi2)); };
}

namespace {

double multiplier_mass(int k, const DyadicInterval& omega, int n) {
  const int xi2_hi = std::min(n / 2 - 1, static_cast<int>(std::ceil(2.5 * std::ldexp(1.0, k))));
  double mass = 0.0;
  for (int xi2 = 1; xi2 <= xi2_hi; ++xi2)
    for (int xi1 = -n / 2 + 1; xi1 < n / 2; ++xi1) mass += multiplier_value(k, omega, xi1, xi2);
  return mass;
}

}  // namespace

bool tile_resolvable(const Tile& s, int n) {
  if (!s.omega.valid() || s.k < s.l() - 1 || s.k < 0) return false;
  const double xi2_max = 2.5 * std::ldexp(1.0, s.k);
  const double slope_max = std::max(std::fabs(s.omega.left()), std::fabs(s.omega.right()));
  return xi2_max < n / 2.0 && slope_max * xi2_max < n / 2.0;
}

GridFunction wave_packet(const Tile& s, int n) {
  check_grid_size(n);
  if (!tile_resolvable(s, n)) throw ConfigError("wave_packet: tile not resolvable on this grid");
  const Point c = tile_center(s);
  Spectrum spec(n);
  const double mass = multiplier_mass(s.k, s.omega, n);
  if (mass == 0.0) throw ConfigError("wave_packet: empty multiplier support");
  for (int a = 0; a < n; ++a) {
    const int xi1 = index_freq(a, n);
    for (int b = 0; b < n; ++b) {
      const int xi2 = index_freq(b, n);
      const double m = multiplier_value(s.k, s.omega, xi1, xi2);
      if (m == 0.0) continue;
      spec.coeffs()[static_cast<std::size_t>(a) * n + b] =
          std::polar(std::sqrt(m / mass), -kTwoPi * (xi1 * c.x1 + xi2 * c.x2));
    }
  }
  return inverse(spec);
}

GridFunction curved_packet(const Tile& s, const FieldOperators& ops) {
  return ops.H_l(wave_packet(s, ops.n()), s.k - s.l());
}

GridFunction frozen_packet(const Tile& s, const FieldSpec& spec, double t, int n) {
  const double u = spec.u(t);
  const int scale = s.k - s.l();
  return multiplier_apply(wave_packet(s, n), [u, scale](int xi1, int xi2) {
    return cplx(psi_plus(scale, xi1 + u * xi2));
  });
}

double chi_weight(const Tile& s, Point x) {
  const Rect r = s.rect();
  const double d1 = wrap_half(x.x1 - r.center.x1);
  const double d2 = wrap_half(x.x2 - r.center.x2);
  const Point e = r.long_dir();
  const Point w = r.short_dir();
  const double a = (d1 * e.x1 + d2 * e.x2) / r.length;
  const double b = (d1 * w.x1 + d2 * w.x2) / r.width;
  return 1.0 / std::sqrt(r.area()) / std::pow(1.0 + a * a + b * b, 5);
}

SlopeWindow curved_support_window(const Tile& s) {
  const double c1 = s.omega.omega1().center();
  const double unit = std::ldexp(1.0, -s.l());
  // |xi1/xi2 - c1| <= 2^(-l-2), xi2 in [2^(k-1), 5 2^(k-1)], xi . v in [3/4, 2] 2^(k-l).
  return {c1 - 0.25 * unit - 4.0 * unit, c1 + 0.25 * unit - 0.3 * unit};
}

SlopeWindow lemma_support_window(const Tile& s) {
  const DyadicInterval w = s.omega.omega2();
  return {w.left(), w.right()};
}

SupportLeak support_leak(const Tile& s, const FieldOperators& ops, SlopeWindow window) {
  const GridFunction phi = curved_packet(s, ops);
  const int n = ops.n();
  const FieldSpec& spec = ops.spec();
  SupportLeak out;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const double a = std::abs(phi(i, j));
      out.peak = std::max(out.peak, a);
      const double slope = -spec.u(spec.h({static_cast<double>(i) / n, static_cast<double>(j) / n}));
      if (slope < window.lo || slope > window.hi) out.off_max = std::max(out.off_max, a);
    }
  out.ratio = out.peak > 0.0 ? out.off_max / out.peak : 0.0;
  return out;
}

std::vector<Tile> make_tiles(const TileSetSpec& spec) {
  std::vector<Tile> out;
  std::vector<int> omegas = spec.omega_indices;
  if (omegas.empty())
    for (int i = 0; i < DyadicInterval::count(spec.l); ++i) omegas.push_back(i);
  for (int k : spec.k_list) {
    const TileLattice lat = tile_lattice(k, spec.l);
    const int w1 = spec.pos_window > 0 ? std::min(spec.pos_window, lat.count1) : lat.count1;
    const int w2 = spec.pos_window > 0 ? std::min(spec.pos_window, lat.count2) : lat.count2;
    for (int i : omegas) {
      const DyadicInterval omega{spec.l, i};
      if (!omega.valid()) throw ConfigError("tile set: omega index out of range");
      for (int p1 = 0; p1 < w1; ++p1)
        for (int p2 = 0; p2 < w2; ++p2) out.push_back({k, omega, p1, p2});
    }
  }
  return out;
}

std::vector<cplx> coefficients(const GridFunction& f, const std::vector<Tile>& tiles) {
  std::vector<cplx> out(tiles.size());
  const int n = f.n();
  const Spectrum fs = forward(f);
  for (std::size_t idx = 0; idx < tiles.size(); ++idx) {
    const Tile& s = tiles[idx];
    if (!tile_resolvable(s, n)) throw ConfigError("coefficients: tile not resolvable on this grid");
  }
  parallel_for(static_cast<std::int64_t>(tiles.size()), [&](std::int64_t idx) {
    const Tile& s = tiles[idx];
    const double mass = multiplier_mass(s.k, s.omega, n);
    const int xi2_hi = std::min(n / 2 - 1, static_cast<int>(std::ceil(2.5 * std::ldexp(1.0, s.k))));
    const Point c = tile_center(s);
    cplx acc = 0.0;
    for (int xi2 = 1; xi2 <= xi2_hi; ++xi2)
      for (int xi1 = -n / 2 + 1; xi1 < n / 2; ++xi1) {
        const double m = multiplier_value(s.k, s.omega, xi1, xi2);
        if (m == 0.0) continue;
        // <f, phi_s> = sum f^(xi) conj(phi_s^(xi)).
        acc += fs.at(xi1, xi2) * std::polar(std::sqrt(m / mass), kTwoPi * (xi1 * c.x1 + xi2 * c.x2));
      }
    out[idx] = acc;
  });
  return out;
}

GridFunction model_sum(const std::vector<cplx>& coeffs, const std::vector<Tile>& tiles, const FieldOperators& ops) {
  if (coeffs.size() != tiles.size()) throw ConfigError("model_sum: coefficient count mismatch");
  const int n = ops.n();
  GridFunction out(n);
  // Sum the straight packets per scale k - l, then push each scale through H_{k-l} once.
  std::vector<std::pair<int, GridFunction>> by_scale;
  for (std::size_t idx = 0; idx < tiles.size(); ++idx) {
    const Tile& s = tiles[idx];
    const int scale = s.k - s.l();
    auto it = std::find_if(by_scale.begin(), by_scale.end(), [scale](const auto& p) { return p.first == scale; });
    if (it == by_scale.end()) {
      by_scale.emplace_back(scale, GridFunction(n));
      it = by_scale.end() - 1;
    }
    it->second.axpy(coeffs[idx], wave_packet(s, n));
  }
  for (const auto& [scale, sum] : by_scale) out += ops.H_l(sum, scale);
  return out;
}

}  // namespace lh
