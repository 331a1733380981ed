#include "lh/covering.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <random>

#include "json.hpp"

namespace lh {

using nlohmann::json;

SlopeInterval ex_interval(const Rect& r) {
  const double half = 0.5 * r.width / r.length;
  return {r.slope - half, r.slope + half};
}

std::int64_t GridSet::count() const {
  std::int64_t c = 0;
  for (auto m : mask) c += m;
  return c;
}

double GridSet::measure() const { return static_cast<double>(count()) / (static_cast<double>(n) * n); }

GridSet& GridSet::operator|=(const GridSet& other) {
  for (std::size_t i = 0; i < mask.size(); ++i) mask[i] |= other.mask[i];
  return *this;
}

GridSet& GridSet::operator&=(const GridSet& other) {
  for (std::size_t i = 0; i < mask.size(); ++i) mask[i] &= other.mask[i];
  return *this;
}

namespace {

void rasterize_into(const Rect& r, int n, GridSet& out) {
  double lo1 = std::numeric_limits<double>::infinity(), hi1 = -lo1, lo2 = lo1, hi2 = -lo1;
  for (const Point& c : r.corners()) {
    lo1 = std::min(lo1, c.x1);
    hi1 = std::max(hi1, c.x1);
    lo2 = std::min(lo2, c.x2);
    hi2 = std::max(hi2, c.x2);
  }
  const int i0 = static_cast<int>(std::floor(lo1 * n)), i1 = static_cast<int>(std::ceil(hi1 * n));
  const int j0 = static_cast<int>(std::floor(lo2 * n)), j1 = static_cast<int>(std::ceil(hi2 * n));
  for (int i = i0; i <= i1; ++i)
    for (int j = j0; j <= j1; ++j)
      if (r.contains_plane({static_cast<double>(i) / n, static_cast<double>(j) / n})) {
        const int a = ((i % n) + n) % n, b = ((j % n) + n) % n;
        out.mask[static_cast<std::size_t>(a) * n + b] = 1;
      }
}

}  // namespace

GridSet rasterize(const Rect& r, int n) {
  GridSet out(n);
  rasterize_into(r, n, out);
  return out;
}

GridSet rasterize(const std::vector<Rect>& rects, int n) {
  GridSet out(n);
  for (const Rect& r : rects) rasterize_into(r, n, out);
  return out;
}

SlopeGrid::SlopeGrid(const FieldSpec& spec, int n) : n_(n), values_(static_cast<std::size_t>(n) * n) {
  check_grid_size(n);
  parallel_for(n, [&](std::int64_t i) {
    for (int j = 0; j < n; ++j)
      values_[static_cast<std::size_t>(i) * n + j] =
          spec.u(spec.h({static_cast<double>(i) / n, static_cast<double>(j) / n}));
  });
  sorted_ = values_;
  std::sort(sorted_.begin(), sorted_.end());
}

double SlopeGrid::preimage_measure(const SlopeInterval& I) const {
  const auto lo = std::lower_bound(sorted_.begin(), sorted_.end(), I.lo);
  const auto hi = std::upper_bound(sorted_.begin(), sorted_.end(), I.hi);
  return static_cast<double>(hi - lo) / sorted_.size();
}

GridSet E_of(const SlopeGrid& slopes, const Rect& r) {
  GridSet out = rasterize(r, slopes.n());
  const SlopeInterval ex = ex_interval(r);
  for (std::size_t idx = 0; idx < out.mask.size(); ++idx)
    if (out.mask[idx] && !ex.contains(slopes.at(idx))) out.mask[idx] = 0;
  return out;
}

GridSet E_of(const FieldSpec& spec, const Rect& r, int n) { return E_of(SlopeGrid(spec, n), r); }

double popularity(const SlopeGrid& slopes, const Rect& r) {
  const double area = rasterize(r, slopes.n()).measure();
  if (area == 0.0) return 0.0;
  return slopes.preimage_measure(ex_interval(r)) / area;
}

double popularity(const FieldSpec& spec, const Rect& r, int n) { return popularity(SlopeGrid(spec, n), r); }

bool comparable(const Rect& r1, const Rect& r2, double C) {
  if (C < 1.0) throw ConfigError("comparable: C must be >= 1");
  if (!ex_interval(r1).contains(ex_interval(r2))) return false;
  Rect big = r2;
  big.length *= C;
  big.width *= C;
  const Point c1 = big.unwrap(r1.center);
  Rect moved = r1;
  moved.center = c1;
  constexpr double slack = 1e-12;
  big.length += slack;
  big.width += slack;
  for (const Point& p : moved.corners())
    if (!big.contains_plane(p)) return false;
  return true;
}

std::string to_string(CoveringLemma lemma) {
  switch (lemma) {
    case CoveringLemma::Incomparable: return "incomparable";
    case CoveringLemma::Density: return "density";
    case CoveringLemma::Population: return "population";
  }
  return "?";
}

CoveringLemma parse_covering_lemma(const std::string& name) {
  if (name == "incomparable") return CoveringLemma::Incomparable;
  if (name == "density") return CoveringLemma::Density;
  if (name == "population") return CoveringLemma::Population;
  throw ConfigError("unknown covering lemma '" + name + "' (incomparable|density|population)");
}

namespace {

json rect_to_json(const Rect& r) {
  return {{"center", {r.center.x1, r.center.x2}}, {"length", r.length}, {"width", r.width}, {"slope", r.slope}};
}

Rect rect_from_json(const json& j) {
  Rect r;
  const auto& c = j.at("center");
  if (!c.is_array() || c.size() != 2) throw ConfigError("rect center must be [x1, x2]");
  r.center = {c[0].get<double>(), c[1].get<double>()};
  r.length = j.at("length").get<double>();
  r.width = j.at("width").get<double>();
  r.slope = j.at("slope").get<double>();
  if (!(r.width > 0.0 && r.width <= r.length)) throw ConfigError("rect needs 0 < width <= length");
  if (!(r.slope >= -1.0 && r.slope <= 1.0)) throw ConfigError("rect slope must lie in [-1, 1]");
  return r;
}

}  // namespace

Scenario Scenario::from_json_text(const std::string& text) {
  Scenario s;
  try {
    const json j = json::parse(text);
    s.lemma = parse_covering_lemma(j.at("lemma").get<std::string>());
    s.seed = j.value("seed", std::uint64_t{0});
    s.spec = FieldSpec::from_json_text(j.at("field").dump());
    s.q = j.value("q", 2.0);
    s.C = j.value("C", 10.0);
    for (const auto& r : j.at("rects")) s.rects.push_back(rect_from_json(r));
    for (const auto& r : j.at("set")) s.set.push_back(rect_from_json(r));
  } catch (const json::exception& e) {
    throw ConfigError(std::string("scenario JSON: ") + e.what());
  }
  if (!(s.q > 1.0)) throw ConfigError("scenario q must exceed 1");
  if (s.C < 1.0) throw ConfigError("scenario C must be >= 1");
  s.spec.validate(256);
  return s;
}

std::string Scenario::to_json_text() const {
  json j;
  j["lemma"] = to_string(lemma);
  j["seed"] = seed;
  j["field"] = json::parse(spec.to_json_text());
  j["q"] = q;
  j["C"] = C;
  j["rects"] = json::array();
  for (const Rect& r : rects) j["rects"].push_back(rect_to_json(r));
  j["set"] = json::array();
  for (const Rect& r : set) j["set"].push_back(rect_to_json(r));
  return j.dump(2);
}

CoveringReport verify_covering(const Scenario& scenario, int n) {
  check_grid_size(n);
  CoveringReport rep;
  rep.lemma = scenario.lemma;
  rep.seed = scenario.seed;
  rep.n = n;
  rep.rect_count = static_cast<int>(scenario.rects.size());
  if (scenario.rects.empty()) return rep;

  const SlopeGrid slopes(scenario.spec, n);
  const GridSet aux = rasterize(scenario.set, n);
  const double aux_measure = aux.measure();
  const auto fail = [&rep](const std::string& why) {
    rep.hypotheses_ok = false;
    if (rep.note.empty()) rep.note = why;
  };
  if (aux_measure == 0.0) fail("auxiliary set has zero measure");

  switch (scenario.lemma) {
    case CoveringLemma::Incomparable: {
      const double width = scenario.rects.front().width;
      double delta = std::numeric_limits<double>::infinity(), lambda = delta, sum_area = 0.0;
      for (std::size_t a = 0; a < scenario.rects.size(); ++a) {
        const Rect& r = scenario.rects[a];
        if (r.width != width) fail("widths are not uniform");
        for (std::size_t b = 0; b < scenario.rects.size(); ++b)
          if (a != b && comparable(r, scenario.rects[b], scenario.C)) fail("family is not pairwise incomparable");
        GridSet cell = rasterize(r, n);
        const double area = cell.measure();
        sum_area += area;
        delta = std::min(delta, area > 0.0 ? slopes.preimage_measure(ex_interval(r)) / area : 0.0);
        cell &= aux;
        lambda = std::min(lambda, area > 0.0 ? cell.measure() / area : 0.0);
      }
      rep.delta = delta;
      rep.lambda = lambda;
      rep.lhs = sum_area;
      if (delta <= 0.0 || lambda <= 0.0) fail("delta or lambda vanishes");
      rep.rhs = aux_measure / (delta * std::pow(lambda, scenario.q));
      break;
    }
    case CoveringLemma::Density: {
      double delta = std::numeric_limits<double>::infinity();
      for (const Rect& r : scenario.rects) {
        GridSet e = E_of(slopes, r);
        e &= aux;
        delta = std::min(delta, aux_measure > 0.0 ? e.measure() / aux_measure : 0.0);
      }
      rep.delta = delta;
      rep.lhs = rasterize(scenario.rects, n).measure();
      if (delta <= 0.0) fail("delta vanishes");
      rep.rhs = std::pow(delta, -scenario.q) * aux_measure;
      break;
    }
    case CoveringLemma::Population: {
      double sigma = std::numeric_limits<double>::infinity(), delta = sigma;
      for (const Rect& r : scenario.rects) {
        GridSet cell = rasterize(r, n);
        const double area = cell.measure();
        sigma = std::min(sigma, area > 0.0 ? slopes.preimage_measure(ex_interval(r)) / area : 0.0);
        cell &= aux;
        delta = std::min(delta, area > 0.0 ? cell.measure() / area : 0.0);
      }
      rep.sigma = sigma;
      rep.delta = delta;
      rep.lhs = rasterize(scenario.rects, n).measure();
      if (sigma <= 0.0 || delta <= 0.0) fail("sigma or delta vanishes");
      if (sigma > 1.0 || delta > 1.0) {
        // The lemma is stated for sigma, delta <= 1; larger measured values are capped.
        sigma = std::min(sigma, 1.0);
        delta = std::min(delta, 1.0);
      }
      rep.rhs = aux_measure / (sigma * delta * delta);
      break;
    }
  }
  rep.ratio = rep.rhs > 0.0 && std::isfinite(rep.rhs) ? rep.lhs / rep.rhs : std::numeric_limits<double>::infinity();
  return rep;
}

namespace {

constexpr std::uint64_t kCoverStream = 0xC0E7ULL;
constexpr double kWidths[] = {1.0 / 128, 1.0 / 64, 1.0 / 32};
constexpr double kLengths[] = {1.0 / 8, 1.0 / 4};
/// Hypothesis floors applied at the reference grid: fraction of R covered by the
/// auxiliary set (or by E(R) cap G for the density lemma).
constexpr double kCoverFloor = 0.25;

double field_slope_at(const FieldSpec& spec, Point x) { return spec.u(spec.h(x)); }

}  // namespace

Scenario random_scenario(std::uint64_t seed, CoveringLemma lemma, double q, int reference_n) {
  std::mt19937_64 rng(derive_seed(seed, kCoverStream, static_cast<std::uint64_t>(lemma)));
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  Scenario s;
  s.lemma = lemma;
  s.seed = seed;
  s.q = q;

  // Two-valued slope function on a sinusoidal field.
  const double brk = 0.3 + 0.4 * unit(rng);
  const double v0 = -0.75 + 1.5 * unit(rng);
  double v1 = -0.75 + 1.5 * unit(rng);
  if (std::fabs(v1 - v0) < 0.2) v1 = v0 + (v0 < 0.0 ? 0.2 : -0.2);
  s.spec = sinusoidal_field(0.05, SlopeFunction::steps({0.0, brk}, {v0, v1}));

  // Auxiliary set: 1 to 3 axis-aligned boxes.
  const int boxes = 1 + static_cast<int>(unit(rng) * 3.0);
  for (int b = 0; b < boxes; ++b) {
    Rect box;
    box.center = {unit(rng), unit(rng)};
    const double a = 0.15 + 0.25 * unit(rng), c = 0.15 + 0.25 * unit(rng);
    box.length = std::max(a, c);
    box.width = std::min(a, c);
    box.slope = 0.0;
    s.set.push_back(box);
  }

  const int candidates = 1 + static_cast<int>(unit(rng) * 64.0);
  const double uniform_width = kWidths[static_cast<int>(unit(rng) * 3.0) % 3];
  std::vector<Rect> pool;
  for (int c = 0; c < candidates; ++c) {
    Rect r;
    const Rect& box = s.set[static_cast<int>(unit(rng) * s.set.size()) % s.set.size()];
    r.center = {box.center.x1 + (unit(rng) - 0.5) * box.length, box.center.x2 + (unit(rng) - 0.5) * box.width};
    r.center = {frac(r.center.x1), frac(r.center.x2)};
    r.width = lemma == CoveringLemma::Incomparable ? uniform_width : kWidths[static_cast<int>(unit(rng) * 3.0) % 3];
    r.length = kLengths[static_cast<int>(unit(rng) * 2.0) % 2];
    const double ex_width = r.width / r.length;
    const double base = field_slope_at(s.spec, r.center);
    r.slope = std::clamp(base + (unit(rng) - 0.5) * 0.6 * ex_width, -1.0, 1.0);
    pool.push_back(r);
  }

  const SlopeGrid slopes(s.spec, reference_n);
  const GridSet aux = rasterize(s.set, reference_n);
  for (const Rect& r : pool) {
    const GridSet cell = rasterize(r, reference_n);
    const double area = cell.measure();
    if (area == 0.0) continue;
    GridSet hit = lemma == CoveringLemma::Density ? E_of(slopes, r) : cell;
    hit &= aux;
    if (hit.measure() < kCoverFloor * area) continue;
    if (slopes.preimage_measure(ex_interval(r)) == 0.0) continue;
    if (lemma == CoveringLemma::Incomparable) {
      bool clash = false;
      for (const Rect& kept : s.rects)
        if (comparable(r, kept, s.C) || comparable(kept, r, s.C)) {
          clash = true;
          break;
        }
      if (clash) continue;
    }
    s.rects.push_back(r);
  }
  return s;
}

void write_covering_csv(std::ostream& out, const std::vector<CoveringReport>& reports) {
  out << "lemma,seed,ratio,hypotheses_ok\n";
  char buf[128];
  for (const auto& r : reports) {
    std::snprintf(buf, sizeof buf, "%s,%llu,%.17g,%d\n", to_string(r.lemma).c_str(),
                  static_cast<unsigned long long>(r.seed), r.ratio, r.hypotheses_ok ? 1 : 0);
    out << buf;
  }
}

}  // namespace lh
