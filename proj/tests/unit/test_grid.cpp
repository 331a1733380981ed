#include <cmath>
#include <cstdio>
#include <sstream>

#include "doctest.h"
#include "lh/bumps.hpp"
#include "lh/grid.hpp"

using namespace lh;

namespace {

GridFunction plane_wave(int n, int xi1, int xi2) {
  GridFunction f(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) f(i, j) = std::polar(1.0, kTwoPi * (xi1 * double(i) + xi2 * double(j)) / n);
  return f;
}

}  // namespace

TEST_CASE("grid sizes") {
  CHECK_NOTHROW(check_grid_size(16));
  CHECK_NOTHROW(check_grid_size(4096));
  CHECK_THROWS_AS(check_grid_size(8), ConfigError);
  CHECK_THROWS_AS(check_grid_size(96), ConfigError);
  CHECK_THROWS_AS(check_grid_size(8192), ConfigError);
}

TEST_CASE("forward transform of a plane wave is a unit coefficient") {
  const int n = 32;
  const Spectrum s = forward(plane_wave(n, 3, -5));
  for (int a = -n / 2; a < n / 2; ++a)
    for (int b = -n / 2; b < n / 2; ++b) {
      const double expect = (a == 3 && b == -5) ? 1.0 : 0.0;
      CHECK(std::abs(s.at(a, b) - expect) < 1e-13);
    }
}

TEST_CASE("inverse undoes forward") {
  const GridFunction f = random_bandlimited(11, 64, {}, {1, 4});
  const GridFunction g = inverse(forward(f));
  CHECK(l2_norm(g - f) < 1e-14);
}

TEST_CASE("Parseval and norms") {
  const GridFunction f = random_bandlimited(3, 64, {}, {1, 4});
  CHECK(l2_norm(f) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(l2_norm(forward(f)) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(lp_norm(f, 2.0) == doctest::Approx(l2_norm(f)).epsilon(1e-12));
  CHECK_THROWS_AS(lp_norm(f, 1.0), std::domain_error);
  CHECK_THROWS_AS(lp_norm(f, INFINITY), std::domain_error);

  GridFunction c(16);
  for (auto& v : c.values()) v = 2.0;
  CHECK(lp_norm(c, 3.0) == doctest::Approx(2.0));
}

TEST_CASE("random band-limited functions sit on the cone band and agree across grids") {
  const Band band{1, 3};
  const GridFunction f = random_bandlimited(5, 64, {}, band);
  const Spectrum s = forward(f);
  for (int a = -32; a < 32; ++a)
    for (int b = -32; b < 32; ++b) {
      if (std::abs(s.at(a, b)) < 1e-13) continue;
      CHECK(std::abs(a) <= std::abs(b));
      CHECK(std::abs(b) >= 2);
      CHECK(std::abs(b) <= 8);
    }
  const Spectrum s2 = forward(random_bandlimited(5, 128, {}, band));
  double diff = 0.0;
  for (int a = -32; a < 32; ++a)
    for (int b = -32; b < 32; ++b) diff = std::max(diff, std::abs(s2.at(a, b) - s.at(a, b)));
  CHECK(diff < 1e-14);
}

TEST_CASE("off-grid sampling of a trigonometric polynomial") {
  const GridFunction f = random_bandlimited(9, 64, {}, {1, 3});
  const OffgridSampler sampler(f);
  const Spectrum s = forward(f);
  double err = 0.0;
  for (int t = 0; t < 50; ++t) {
    const Point x{0.013 + 0.0191 * t, 0.47 - 0.0137 * t};
    err = std::max(err, std::abs(sampler(x) - trig_interpolate(s, x)));
  }
  CHECK(err < 1e-6);
  CHECK(std::abs(sampler({5.0 / 64, 7.0 / 64}) - f(5, 7)) < 1e-12);
}

TEST_CASE("symmetries act as coordinate changes") {
  const int n = 64;
  const GridFunction f = plane_wave(n, 2, 3);
  CHECK(l2_norm(apply_symmetry(f, Symmetry::A, 2.0) - plane_wave(n, 4, 3)) < 1e-12);
  CHECK(l2_norm(apply_symmetry(f, Symmetry::B, 2.0) - plane_wave(n, 2, 6)) < 1e-12);
  CHECK(l2_norm(apply_symmetry(f, Symmetry::C, 1.0) - plane_wave(n, 5, 3)) < 1e-12);
  CHECK(l2_norm(apply_symmetry(f, Symmetry::D, 1.0) - plane_wave(n, 2, 5)) < 1e-12);
  CHECK(symmetry_determinant(Symmetry::A, 4.0) == 4.0);
  CHECK(symmetry_determinant(Symmetry::D, 3.0) == 1.0);
  CHECK_THROWS_AS(apply_symmetry(f, Symmetry::A, 3.0), ConfigError);
  CHECK_THROWS_AS(parse_symmetry("E"), ConfigError);
}

TEST_CASE("lhg2 and csv dumps") {
  const GridFunction f = random_bandlimited(2, 16, {}, {1, 2});
  const std::string path = "lh_unit_roundtrip.lhg2";
  write_lhg2(path, f);
  const GridFunction g = read_lhg2(path);
  std::remove(path.c_str());
  CHECK(g.values() == f.values());

  std::ostringstream out;
  write_grid_csv(out, f);
  CHECK(out.str().rfind("i,j,re,im\n", 0) == 0);
}

TEST_CASE("bump identities") {
  for (double t : {-2.5, -1.7, -1.0, 0.0, 0.3, 1.2, 1.5, 1.9, 2.0, 3.0}) {
    CHECK(chi(t) >= 0.0);
    CHECK(chi(t) <= 1.0);
  }
  CHECK(chi(1.5) == 1.0);
  CHECK(chi(2.0) == 0.0);
  CHECK(psi0(1.2) == 1.0);
  CHECK(psi0(0.7) == 0.0);
  CHECK(psi0(2.1) == 0.0);
  // Telescoping partition of unity on 1 <= |t| <= 2^6.
  for (double t = 1.0; t <= 64.0; t *= 1.093) {
    double s = 0.0;
    for (int k = 0; k <= 6; ++k) s += psi_k(k, t);
    CHECK(s == doctest::Approx(1.0).epsilon(1e-14));
  }
  for (double a = 0.5; a <= 2.5; a += 0.05)
    CHECK(beta_tilde_root(a) * beta_tilde_root(a) == doctest::Approx(beta_tilde(a)).epsilon(1e-14));
  CHECK(profile_symbol(AdaptedProfile::Reproducing, 3, 8.0 * 2.7) == 1.0);
  CHECK(psi_check_window(1e-6) < psi_check_window(1e-9));
}
