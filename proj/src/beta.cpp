#include "lh/beta.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <random>

namespace lh {

LipschitzSample LipschitzSample::from_function(const std::function<double(double)>& a, int m, double x0,
                                               double x1) {
  if (m < 1 || m > 24) throw ConfigError("LipschitzSample: node exponent out of range");
  if (!(x1 > x0)) throw ConfigError("LipschitzSample: empty domain");
  LipschitzSample s;
  s.x0 = x0;
  s.x1 = x1;
  const int count = (1 << m) + 1;
  s.values.resize(count);
  for (int i = 0; i < count; ++i) s.values[i] = a(x0 + (x1 - x0) * i / (count - 1));
  return s;
}

void LipschitzSample::validate() const {
  const int count = nodes();
  if (count < 3 || !is_power_of_two(count - 1)) throw ConfigError("LipschitzSample: node count must be 2^m + 1");
  for (double v : values)
    if (!std::isfinite(v)) throw ConfigError("LipschitzSample: non-finite value");
}

double LipschitzSample::at(double x) const {
  const double s = (x - x0) / spacing();
  const double fl = std::floor(s);
  const int i = static_cast<int>(fl);
  if (s == fl && i >= 0 && i < nodes()) return values[i];
  const int a = std::clamp(i, 0, nodes() - 2);
  const double w = s - a;
  return (1.0 - w) * values[a] + w * values[a + 1];
}

double LipschitzSample::lip() const {
  double m = 0.0;
  const double h = spacing();
  for (int i = 0; i + 1 < nodes(); ++i) m = std::max(m, std::fabs(values[i + 1] - values[i]) / h);
  return m;
}

namespace {

struct NodeRange {
  int lo = 0;
  int hi = -1;
};

NodeRange nodes_in(const LipschitzSample& a, double lo, double hi) {
  const double h = a.spacing();
  NodeRange r;
  r.lo = std::max(0, static_cast<int>(std::ceil((lo - a.x0) / h - 1e-9)));
  r.hi = std::min(a.nodes() - 1, static_cast<int>(std::floor((hi - a.x0) / h + 1e-9)));
  return r;
}

}  // namespace

Interval dyadic_piece(const LipschitzSample& a, int level, int index) {
  const double len = std::ldexp(a.x1 - a.x0, -level);
  return {a.x0 + index * len, len};
}

double average_slope(const LipschitzSample& a, const Interval& I) {
  const double c = I.center();
  const NodeRange r = nodes_in(a, c - 1.5 * I.len, c + 1.5 * I.len);
  const int count = r.hi - r.lo + 1;
  if (count < 2) throw ConfigError("average_slope: fewer than two nodes in 3I");
  double mx = 0.0, my = 0.0;
  for (int i = r.lo; i <= r.hi; ++i) {
    mx += a.node(i);
    my += a.values[i];
  }
  mx /= count;
  my /= count;
  double sxy = 0.0, sxx = 0.0;
  for (int i = r.lo; i <= r.hi; ++i) {
    const double dx = a.node(i) - mx;
    sxy += dx * (a.values[i] - my);
    sxx += dx * dx;
  }
  return sxy / sxx;
}

double beta_j0(const LipschitzSample& a, const Interval& I, int j0) {
  if (j0 < 1) throw ConfigError("beta_j0: j0 must be >= 1");
  const double alpha = average_slope(a, I);
  const double c = I.center();
  const double ac = a.at(c);
  const NodeRange r = nodes_in(a, c - 1.5 * j0 * I.len, c + 1.5 * j0 * I.len);
  double m = 0.0;
  for (int i = r.lo; i <= r.hi; ++i) m = std::max(m, std::fabs(a.values[i] - ac - alpha * (a.node(i) - c)));
  return m / I.len;
}

double carleson_sum(const LipschitzSample& a, const Interval& J, int j0) {
  const double min_len = 2.0 * a.spacing() * (1.0 - 1e-9);
  double total = 0.0;
  for (int level = 0;; ++level) {
    const double len = std::ldexp(J.len, -level);
    if (len < min_len) break;
    const int pieces = 1 << level;
    for (int i = 0; i < pieces; ++i) {
      const double b = beta_j0(a, {J.lo + i * len, len}, j0);
      total += b * b * len;
    }
  }
  return total / J.len;
}

std::vector<BetaRow> beta_table(const LipschitzSample& a, int j0_max) {
  a.validate();
  if (j0_max < 1) throw ConfigError("beta_table: j0_max must be >= 1");
  std::vector<BetaRow> rows;
  const double min_len = 2.0 * a.spacing() * (1.0 - 1e-9);
  for (int level = 0;; ++level) {
    const Interval first = dyadic_piece(a, level, 0);
    if (first.len < min_len) break;
    for (int i = 0; i < (1 << level); ++i) {
      const Interval I = dyadic_piece(a, level, i);
      const double alpha = average_slope(a, I);
      for (int j0 = 1; j0 <= j0_max; ++j0) rows.push_back({I.lo, I.len, j0, alpha, beta_j0(a, I, j0)});
    }
  }
  return rows;
}

void write_beta_csv(std::ostream& out, const std::vector<BetaRow>& rows) {
  out << "I_left,I_len,j0,alpha,beta\n";
  char buf[160];
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%d,%.17g,%.17g\n", r.left, r.len, r.j0, r.alpha, r.beta);
    out << buf;
  }
}

LipschitzSample random_lipschitz(std::uint64_t seed, int m) {
  constexpr int modes = 8;
  std::mt19937_64 rng(derive_seed(seed, 0xB37AULL, 0));
  std::normal_distribution<double> normal(0.0, 1.0);
  double ca[modes], cb[modes];
  for (int q = 0; q < modes; ++q) {
    ca[q] = normal(rng) / ((q + 1.0) * (q + 1.0));
    cb[q] = normal(rng) / ((q + 1.0) * (q + 1.0));
  }
  auto deriv = [&](double x) {
    double d = 0.0;
    for (int q = 0; q < modes; ++q)
      d += kTwoPi * (q + 1) * (-ca[q] * std::sin(kTwoPi * (q + 1) * x) + cb[q] * std::cos(kTwoPi * (q + 1) * x));
    return d;
  };
  double lip = 0.0;
  for (int i = 0; i <= 65536; ++i) lip = std::max(lip, std::fabs(deriv(i / 65536.0)));
  auto f = [&](double x) {
    double v = 0.0;
    for (int q = 0; q < modes; ++q) v += ca[q] * std::cos(kTwoPi * (q + 1) * x) + cb[q] * std::sin(kTwoPi * (q + 1) * x);
    return v / lip;
  };
  return LipschitzSample::from_function(f, m);
}

std::vector<double> haar(const LipschitzSample& grid, const Interval& J) {
  const double h = grid.spacing();
  if (J.len < 2.0 * h * (1.0 - 1e-9)) throw ConfigError("haar: interval shorter than two node spacings");
  const int cells = grid.nodes() - 1;
  std::vector<double> out(cells, 0.0);
  const double amp = 1.0 / std::sqrt(J.len);
  for (int i = 0; i < cells; ++i) {
    const double mid = grid.node(i) + 0.5 * h;
    if (mid >= J.lo && mid < J.center()) out[i] = amp;
    else if (mid >= J.center() && mid < J.hi()) out[i] = -amp;
  }
  return out;
}

CurvePiece curve_in_tile(const FieldSpec& spec, double t, const Tile& s, int samples) {
  const Rect r = s.rect();
  const double base = level_x1(spec, t, r.center.x2);
  CurvePiece piece;
  piece.t_lift = t + std::round(r.center.x1 - base);
  const double u = spec.u(t);
  const double reach = 0.5 * std::hypot(r.length, r.width);
  for (int q = 0; q <= samples; ++q) {
    const double x2 = r.center.x2 - reach + 2.0 * reach * q / samples;
    const Point p{level_x1(spec, piece.t_lift, x2), x2};
    if (!r.contains_plane(p)) continue;
    piece.points.push_back(p);
    piece.b.push_back(p.x2 - u * p.x1);
  }
  return piece;
}

Interval dyadic_cover(const Interval& J) {
  if (!(J.len > 0.0)) throw ConfigError("dyadic_cover: degenerate interval");
  int j = static_cast<int>(std::ceil(-std::log2(16.0 * J.len)));
  double size = std::ldexp(1.0, -j);
  while (size > 16.0 * J.len) size *= 0.5;
  while (size <= 8.0 * J.len) size *= 2.0;
  if (size > 16.0 * J.len) throw ConfigError("dyadic_cover: no admissible size");
  const double m = std::floor(J.lo / size);
  for (int c = 0; c < 2; ++c) {
    const Interval cand{(m + c) * size, size};
    const double overlap = std::min(J.hi(), cand.hi()) - std::max(J.lo, cand.lo);
    if (overlap >= 0.5 * J.len * (1.0 - 1e-12)) return cand;
  }
  throw ConfigError("dyadic_cover: no admissible dyadic interval");
}

CurveBeta curve_beta(const FieldSpec& spec, double t, const Tile& s, int j0_max, int nodes_per_jd) {
  if (j0_max < 1) throw ConfigError("curve_beta: j0 must be >= 1");
  const CurvePiece piece = curve_in_tile(spec, t, s);
  if (piece.b.empty()) throw ConfigError("curve_beta: level curve misses the tile");
  const auto [lo, hi] = std::minmax_element(piece.b.begin(), piece.b.end());
  CurveBeta out;
  out.t_lift = piece.t_lift;
  out.J = {*lo, *hi - *lo};
  if (!(out.J.len > 0.0)) throw ConfigError("curve_beta: degenerate projection");
  out.JD = dyadic_cover(out.J);
  const double u = spec.u(t);
  const double half = 1.5 * j0_max * out.JD.len;
  const int m = std::max(1, static_cast<int>(std::ceil(std::log2(3.0 * j0_max * nodes_per_jd))));
  const double c = out.JD.center();
  const LipschitzSample graph = LipschitzSample::from_function(
      [&](double b) { return curve_point_at_b(spec, out.t_lift, b).x1 + u * b / (1.0 + u * u); }, m, c - half,
      c + half);
  for (int j0 = 1; j0 <= j0_max; ++j0) out.beta.push_back(beta_j0(graph, out.JD, j0));
  return out;
}

}  // namespace lh
