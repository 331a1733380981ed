#include <cmath>

#include "doctest.h"
#include "lh/tiles.hpp"
#include "lh/transforms.hpp"

using namespace lh;

TEST_CASE("dyadic slope intervals") {
  CHECK(DyadicInterval::count(0) == 4);
  CHECK(DyadicInterval::count(2) == 16);
  const DyadicInterval w{1, 5};
  CHECK(w.left() == 0.5);
  CHECK(w.length() == 0.5);
  CHECK(w.omega1().left() == 0.75);
  CHECK(w.omega2().right() == 0.75);
  CHECK(dyadic_family(2).size() == 16u);
  CHECK_FALSE(DyadicInterval{1, 8}.valid());
  CHECK(beta_omega(w, w.omega1().center()) == 1.0);
  CHECK(beta_omega(w, w.omega2().center()) == 0.0);
}

TEST_CASE("multiplier plateau and support") {
  const DyadicInterval w{1, 4};  // [0, 0.5], right half centered at 0.375
  CHECK(multiplier_value(4, w, 9, 24) == 1.0);
  CHECK(multiplier_value(4, w, 1, 4) == 0.0);
  for (int a = -16; a < 16; ++a)
    for (int b = -16; b < 16; ++b) CHECK(multiplier_value(3, w, a, b) >= 0.0);
}

TEST_CASE("wave packets are normalized translates") {
  const int n = 128;
  int checked = 0;
  for (int l : {1, 2})
    for (int k : {3, 4})
      for (int i = 0; i < DyadicInterval::count(l); ++i) {
        const Tile s{k, {l, i}, 1, 2};
        if (!tile_resolvable(s, n)) continue;
        CHECK(l2_norm(wave_packet(s, n)) == doctest::Approx(1.0).epsilon(1e-10));
        ++checked;
      }
  CHECK(checked > 20);

  const Tile a{3, {1, 5}, 0, 0};
  const Tile b{3, {1, 5}, 1, 0};
  const Point ca = tile_center(a), cb = tile_center(b);
  const Spectrum sa = forward(wave_packet(a, n)), sb = forward(wave_packet(b, n));
  double err = 0.0;
  for (int x = -n / 2; x < n / 2; ++x)
    for (int y = -n / 2; y < n / 2; ++y) {
      const cplx shift = std::polar(1.0, -kTwoPi * (x * (cb.x1 - ca.x1) + y * (cb.x2 - ca.x2)));
      err = std::max(err, std::abs(sb.at(x, y) - sa.at(x, y) * shift));
    }
  CHECK(err < 1e-12);
  CHECK_THROWS_AS(wave_packet(Tile{6, {1, 0}, 0, 0}, 64), ConfigError);
}

TEST_CASE("coefficients of a packet") {
  const int n = 64;
  const Tile s{3, {1, 5}, 1, 1};
  const GridFunction phi = wave_packet(s, n);
  const std::vector<cplx> c = coefficients(phi, {s, Tile{3, {1, 1}, 1, 1}});
  CHECK(std::abs(c[0] - 1.0) < 1e-10);
  CHECK(std::abs(c[1]) < 1e-10);
}

TEST_CASE("chi weight") {
  const Tile s{3, {1, 5}, 2, 1};
  const double peak = 1.0 / std::sqrt(s.area());
  const Point c = tile_center(s);
  CHECK(chi_weight(s, c) == doctest::Approx(peak));
  const Point e = s.rect().long_dir();
  const Point x{c.x1 + s.length() * e.x1, c.x2 + s.length() * e.x2};
  CHECK(chi_weight(s, x) == doctest::Approx(peak / 32.0));
}

TEST_CASE("frozen packet agrees with the curved packet on a constant field") {
  const int n = 64;
  const FieldSpec spec = one_variable_field(SlopeFunction::constant(-0.3));
  const FieldOperators ops(spec, n);
  const Tile s{3, {1, 4}, 1, 2};
  CHECK(l2_norm(curved_packet(s, ops) - frozen_packet(s, spec, 0.2, n)) < 1e-12);
}

TEST_CASE("curved packets vanish off the constructed slope window") {
  const FieldSpec spec = sinusoidal_field(0.05, SlopeFunction::steps({0.0, 0.5}, {0.25, -0.375}));
  const FieldOperators ops(spec, 64);
  const Tile s{3, {2, 7}, 1, 1};
  const SupportLeak leak = support_leak(s, ops, curved_support_window(s));
  CHECK(leak.peak > 0.1);
  CHECK(leak.ratio < 1e-10);
}

TEST_CASE("model sum of a single tile") {
  const FieldSpec spec = sinusoidal_field(0.05, SlopeFunction::steps({0.0, 0.5}, {0.25, -0.375}));
  const FieldOperators ops(spec, 32);
  const Tile s{2, {1, 3}, 0, 1};
  const GridFunction one = model_sum({cplx(0.0, 2.0)}, {s}, ops);
  CHECK(l2_norm(one - cplx(0.0, 2.0) * curved_packet(s, ops)) < 1e-13);
  CHECK(l2_norm(model_sum({}, {}, ops)) == 0.0);
}
