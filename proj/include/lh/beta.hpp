#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <vector>

#include "lh/fields.hpp"
#include "lh/tiles.hpp"

namespace lh {

/// Closed interval [lo, lo + len].
struct Interval {
  double lo = 0.0;
  double len = 0.0;
  double hi() const { return lo + len; }
  double center() const { return lo + 0.5 * len; }
};

/// Samples of a Lipschitz function at 2^m + 1 equispaced nodes of [x0, x1].
struct LipschitzSample {
  double x0 = 0.0;
  double x1 = 1.0;
  std::vector<double> values;

  static LipschitzSample from_function(const std::function<double(double)>& a, int m, double x0 = 0.0,
                                       double x1 = 1.0);
  int nodes() const { return static_cast<int>(values.size()); }
  double spacing() const { return (x1 - x0) / (nodes() - 1); }
  double node(int i) const { return x0 + i * spacing(); }
  /// Value at x by linear interpolation between nodes (exact at nodes).
  double at(double x) const;
  /// Largest difference quotient between neighbouring nodes.
  double lip() const;
  /// Throws ConfigError unless the node count is 2^m + 1 (m >= 1) and values are finite.
  void validate() const;
};

/// Dyadic interval of generation `level` and index `index` relative to the sample domain.
Interval dyadic_piece(const LipschitzSample& a, int level, int index);

/// Least-squares slope over the nodes of 3I clipped to the domain.
double average_slope(const LipschitzSample& a, const Interval& I);
/// max over nodes x in 3 j0 I (clipped) of |A(x) - A(c_I) - alpha_I (x - c_I)| / |I|.
double beta_j0(const LipschitzSample& a, const Interval& I, int j0);
/// |J|^-1 sum over dyadic I inside J with at least two node spacings of beta_j0(I)^2 |I|.
double carleson_sum(const LipschitzSample& a, const Interval& J, int j0);

struct BetaRow {
  double left = 0.0;
  double len = 0.0;
  int j0 = 0;
  double alpha = 0.0;
  double beta = 0.0;
};

/// Every dyadic I with at least two node spacings and every j0 in 1..j0_max.
std::vector<BetaRow> beta_table(const LipschitzSample& a, int j0_max);
void write_beta_csv(std::ostream& out, const std::vector<BetaRow>& rows);

/// Random smooth sample with measured Lipschitz constant 1 (trigonometric, 8 modes).
LipschitzSample random_lipschitz(std::uint64_t seed, int m);

/// Cell values of the L2-normalized Haar function of J on the node cells of the sample:
/// +|J|^-1/2 on the left half, -|J|^-1/2 on the right half, 0 elsewhere.
std::vector<double> haar(const LipschitzSample& grid, const Interval& J);

/// Beta numbers of the level curve {h = t} near a tile.
struct CurveBeta {
  /// Projection of the curve piece inside the tile onto the b = y2 - u(t) y1 axis.
  Interval J;
  /// Dyadic interval with |J^D| in (8|J|, 16|J|] and |J^D cap J| >= |J|/2 (leftmost on ties).
  Interval JD;
  /// beta[j0 - 1] for j0 = 1..j0_max of the graph b -> v_t-coordinate of the curve.
  std::vector<double> beta;
  /// Level value of the plane lift passing through the tile.
  double t_lift = 0.0;
};

/// Curve points inside the tile: b coordinates of the sampled level curve (plane lift).
struct CurvePiece {
  double t_lift = 0.0;
  std::vector<double> b;
  std::vector<Point> points;
};
CurvePiece curve_in_tile(const FieldSpec& spec, double t, const Tile& s, int samples = 4096);

/// Dyadic J^D for a given J.
Interval dyadic_cover(const Interval& J);

CurveBeta curve_beta(const FieldSpec& spec, double t, const Tile& s, int j0_max, int nodes_per_jd = 64);

}  // namespace lh
