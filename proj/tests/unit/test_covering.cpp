#include <cmath>
#include <sstream>

#include "doctest.h"
#include "lh/covering.hpp"

using namespace lh;

namespace {

Rect box(double cx, double cy, double length, double width, double slope = 0.0) {
  return Rect{{cx, cy}, length, width, slope};
}

}  // namespace

TEST_CASE("EX interval") {
  const SlopeInterval ex = ex_interval(box(0.5, 0.5, 0.25, 1.0 / 64, 0.1));
  CHECK(ex.lo == doctest::Approx(0.1 - 0.03125));
  CHECK(ex.hi == doctest::Approx(0.1 + 0.03125));
}

TEST_CASE("rasterization counts grid points") {
  const double h = 1.0 / 128;
  const GridSet s = rasterize(box(0.5 + h, 0.5 + h, 0.25, 0.125), 64);
  CHECK(s.count() == 16 * 8);
  CHECK(s.measure() == doctest::Approx(0.25 * 0.125));
  // Wraps across the boundary.
  CHECK(rasterize(box(h, h, 0.25, 0.125), 64).count() == 16 * 8);

  GridSet u = rasterize(box(0.25 + h, 0.5 + h, 0.25, 0.125), 64);
  u |= rasterize(box(0.75 + h, 0.5 + h, 0.25, 0.125), 64);
  CHECK(u.count() == 2 * 16 * 8);
  u &= s;
  CHECK(u.count() == 0);
}

TEST_CASE("popularity on a constant field") {
  const FieldSpec spec = one_variable_field(SlopeFunction::constant(0.1));
  const Rect r = box(0.3, 0.6, 0.25, 0.125, 0.1);
  CHECK(popularity(spec, r, 64) == doctest::Approx(1.0 / rasterize(r, 64).measure()));
  CHECK(popularity(spec, box(0.3, 0.6, 0.25, 0.125, 0.9), 64) == 0.0);
  CHECK(E_of(spec, r, 64).count() == rasterize(r, 64).count());
}

TEST_CASE("comparability") {
  const Rect big = box(0.5, 0.5, 0.5, 1.0 / 32);
  const Rect small = box(0.52, 0.5, 0.125, 1.0 / 64);
  CHECK(comparable(big, big, 1.0));
  CHECK(comparable(small, big, 10.0));
  CHECK_FALSE(comparable(big, small, 10.0));
  CHECK_FALSE(comparable(box(0.52, 0.5, 0.125, 1.0 / 512), big, 10.0));  // EX too narrow
  CHECK_FALSE(comparable(box(0.9, 0.9, 0.125, 1.0 / 512), big, 1.0));
  CHECK_THROWS_AS(comparable(big, big, 0.5), ConfigError);
}

TEST_CASE("single rectangle saturates the density lemma") {
  Scenario sc;
  sc.lemma = CoveringLemma::Density;
  sc.spec = one_variable_field(SlopeFunction::constant(0.0));
  sc.rects = {box(0.5, 0.5, 0.25, 1.0 / 32)};
  sc.set = sc.rects;
  sc.q = 2.0;
  const CoveringReport rep = verify_covering(sc, 128);
  CHECK(rep.delta == doctest::Approx(1.0));
  CHECK(rep.ratio == doctest::Approx(1.0));
  CHECK(rep.hypotheses_ok);

  sc.rects.clear();
  CHECK(verify_covering(sc, 128).ratio == 0.0);
}

TEST_CASE("scenario json round trip and random scenarios") {
  const Scenario a = random_scenario(5, CoveringLemma::Population, 2.0, 128);
  CHECK_FALSE(a.rects.empty());
  const Scenario b = Scenario::from_json_text(a.to_json_text());
  CHECK(b.to_json_text() == a.to_json_text());
  CHECK(random_scenario(5, CoveringLemma::Population, 2.0, 128).to_json_text() == a.to_json_text());

  const CoveringReport rep = verify_covering(a, 128);
  CHECK(std::isfinite(rep.ratio));
  CHECK(rep.hypotheses_ok);

  std::ostringstream out;
  write_covering_csv(out, {rep});
  CHECK(out.str().rfind("lemma,seed,ratio,hypotheses_ok\n", 0) == 0);

  CHECK(parse_covering_lemma("incomparable") == CoveringLemma::Incomparable);
  CHECK_THROWS_AS(parse_covering_lemma("bogus"), ConfigError);
  CHECK_THROWS_AS(Scenario::from_json_text("{\"lemma\": \"density\"}"), ConfigError);
}

TEST_CASE("incomparable scenarios are pairwise incomparable") {
  const Scenario sc = random_scenario(2, CoveringLemma::Incomparable, 2.0, 128);
  for (std::size_t i = 0; i < sc.rects.size(); ++i)
    for (std::size_t j = 0; j < sc.rects.size(); ++j)
      if (i != j) CHECK_FALSE(comparable(sc.rects[i], sc.rects[j], sc.C));
}
