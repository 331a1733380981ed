#include <cmath>
#include <sstream>

#include "doctest.h"
#include "lh/beta.hpp"

using namespace lh;

namespace {

// Direct evaluation: least-squares line through the nodes of 3I, then the sup over 3 j0 I.
double beta_brute(const LipschitzSample& a, const Interval& I, int j0) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int m = 0;
  for (int i = 0; i < a.nodes(); ++i) {
    const double x = a.node(i);
    if (x < I.center() - 1.5 * I.len - 1e-12 || x > I.center() + 1.5 * I.len + 1e-12) continue;
    sx += x, sy += a.values[i], sxx += x * x, sxy += x * a.values[i];
    ++m;
  }
  const double alpha = (m * sxy - sx * sy) / (m * sxx - sx * sx);
  const double ac = a.at(I.center());
  double best = 0.0;
  for (int i = 0; i < a.nodes(); ++i) {
    const double x = a.node(i);
    if (std::fabs(x - I.center()) > 1.5 * j0 * I.len + 1e-12) continue;
    best = std::max(best, std::fabs(a.values[i] - ac - alpha * (x - I.center())));
  }
  return best / I.len;
}

}  // namespace

TEST_CASE("beta numbers vanish on lines") {
  const LipschitzSample a = LipschitzSample::from_function([](double x) { return 0.7 * x - 0.2; }, 8);
  CHECK(a.lip() == doctest::Approx(0.7));
  for (const BetaRow& row : beta_table(a, 3)) {
    CHECK(row.beta < 1e-13);
    CHECK(row.alpha == doctest::Approx(0.7));
  }
  CHECK(carleson_sum(a, {0.0, 1.0}, 2) < 1e-24);
}

TEST_CASE("beta of a parabola scales with the interval") {
  const LipschitzSample a = LipschitzSample::from_function([](double x) { return 0.5 * x * x; }, 10);
  const double b1 = beta_j0(a, dyadic_piece(a, 3, 3), 1);
  const double b2 = beta_j0(a, dyadic_piece(a, 4, 6), 1);
  CHECK(b1 > 0.0);
  CHECK(b2 / b1 == doctest::Approx(0.5).epsilon(1e-6));
}

TEST_CASE("beta matches a brute-force evaluation") {
  const LipschitzSample a = random_lipschitz(17, 9);
  CHECK(a.lip() == doctest::Approx(1.0).epsilon(1e-3));
  for (int level : {2, 4, 6})
    for (int index : {0, 1, (1 << level) - 1})
      for (int j0 : {1, 3}) {
        const Interval I = dyadic_piece(a, level, index);
        CHECK(beta_j0(a, I, j0) == doctest::Approx(beta_brute(a, I, j0)).epsilon(1e-9));
      }
}

TEST_CASE("beta numbers grow with the window") {
  const LipschitzSample a = random_lipschitz(3, 10);
  const Interval I = dyadic_piece(a, 4, 7);
  CHECK(beta_j0(a, I, 1) <= beta_j0(a, I, 2));
  CHECK(beta_j0(a, I, 2) <= beta_j0(a, I, 4));
}

TEST_CASE("Haar functions are L2 normalized") {
  const LipschitzSample grid = LipschitzSample::from_function([](double) { return 0.0; }, 6);
  const Interval J = dyadic_piece(grid, 2, 1);
  const std::vector<double> h = haar(grid, J);
  double sum = 0.0, mass = 0.0;
  for (double v : h) sum += v * grid.spacing(), mass += v * v * grid.spacing();
  CHECK(std::fabs(sum) < 1e-12);
  CHECK(mass == doctest::Approx(1.0));
}

TEST_CASE("sample validation and csv") {
  LipschitzSample bad;
  bad.values.assign(10, 0.0);
  CHECK_THROWS_AS(bad.validate(), ConfigError);
  bad.values.assign(9, NAN);
  CHECK_THROWS_AS(bad.validate(), ConfigError);

  std::ostringstream out;
  write_beta_csv(out, beta_table(random_lipschitz(1, 4), 1));
  CHECK(out.str().rfind("I_left,I_len,j0,alpha,beta\n", 0) == 0);
}

TEST_CASE("dyadic cover rule") {
  const Interval J{0.3, 0.01};
  const Interval D = dyadic_cover(J);
  CHECK(D.len > 8 * J.len);
  CHECK(D.len <= 16 * J.len);
  const double overlap = std::min(D.hi(), J.hi()) - std::max(D.lo, J.lo);
  CHECK(overlap >= 0.5 * J.len);
}

TEST_CASE("curve beta numbers of a straight level set") {
  const FieldSpec spec = one_variable_field(SlopeFunction::constant(0.25));
  const Tile s{4, {1, 3}, 1, 1};
  const Point c = tile_center(s);
  const CurveBeta cb = curve_beta(spec, c.x1, s, 3);
  REQUIRE(cb.beta.size() == 3u);
  for (double b : cb.beta) CHECK(b < 1e-10);
}
