#pragma once

#include <vector>

#include "lh/dyadic.hpp"
#include "lh/fields.hpp"
#include "lh/grid.hpp"

namespace lh {

class FieldOperators;

/// Time-frequency tile: scale k, slope interval omega in D_l, and a lattice position.
struct Tile {
  int k = 0;
  DyadicInterval omega;
  int p1 = 0;
  int p2 = 0;

  int l() const { return omega.l; }
  double width() const;
  double length() const;
  /// Long-side slope -c(omega).
  double slope() const { return -omega.center(); }
  double area() const { return width() * length(); }
  /// Spatial rectangle of the tile.
  Rect rect() const;
};

/// Sheared lattice of tile centers for (k, l): pitch alpha = 2^(l-k-1) along x1 and
/// beta = 2^(-k-2) along x2, sheared to the long-side slope. Two-fold oversampled along
/// the long side and four-fold across, which makes the translates a tight frame of the band.
struct TileLattice {
  double alpha = 0.0;
  double beta = 0.0;
  int count1 = 0;
  int count2 = 0;
  int size() const { return count1 * count2; }
};

/// Needs k >= l - 1 so the lattice closes on the torus.
TileLattice tile_lattice(int k, int l);
Point tile_center(const Tile& s);

/// m_{k,omega}(xi) = beta~(2^-k xi2) beta_omega(xi1 / xi2).
double multiplier_value(int k, const DyadicInterval& omega, int xi1, int xi2);
Symbol make_multiplier(int k, const DyadicInterval& omega);

/// True when the packet spectrum lies inside |xi1|, |xi2| < n/2 and the lattice closes.
bool tile_resolvable(const Tile& s, int n);

/// L2-normalized packet with phi^ = sqrt(m / sum m) exp(-2 pi i xi . c(s)).
GridFunction wave_packet(const Tile& s, int n);

/// int psi_{k-l}^(t) phi_s(x - t v(x)) dt.
GridFunction curved_packet(const Tile& s, const FieldOperators& ops);
/// Same with v(x) frozen to v_t = (1, u(t)): multiplier psi_{k-l}^+(xi . v_t).
GridFunction frozen_packet(const Tile& s, const FieldSpec& spec, double t, int n);

/// |s|^-1/2 / (1 + (a / l_s)^2 + (b / w_s)^2)^5 in the tile frame, nearest periodic image.
double chi_weight(const Tile& s, Point x);

struct SlopeWindow {
  double lo = 0.0;
  double hi = 0.0;
};
/// Interval of slopes -u where psi_{k-l}^+(xi1 + u xi2) can meet the support of m_{k,omega}.
SlopeWindow curved_support_window(const Tile& s);

struct SupportLeak {
  double peak = 0.0;
  /// max |curved packet| over grid points with -u(h(x)) outside the window.
  double off_max = 0.0;
  double ratio = 0.0;
};
SupportLeak support_leak(const Tile& s, const FieldOperators& ops, SlopeWindow window);
/// The window omega_{s,2} of the support lemma.
SlopeWindow lemma_support_window(const Tile& s);

struct TileSetSpec {
  int l = 0;
  std::vector<int> k_list;
  /// Empty means every interval of D_l.
  std::vector<int> omega_indices;
  /// Positions p1 < pos_window, p2 < pos_window (clipped to the lattice); 0 means all.
  int pos_window = 0;
};

std::vector<Tile> make_tiles(const TileSetSpec& spec);

std::vector<cplx> coefficients(const GridFunction& f, const std::vector<Tile>& tiles);
/// sum_s c_s curved_packet(s).
GridFunction model_sum(const std::vector<cplx>& coeffs, const std::vector<Tile>& tiles, const FieldOperators& ops);

}  // namespace lh
