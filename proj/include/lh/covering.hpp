#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "lh/fields.hpp"
#include "lh/grid.hpp"

namespace lh {

/// Closed slope interval.
struct SlopeInterval {
  double lo = 0.0;
  double hi = 0.0;
  bool contains(double s) const { return s >= lo && s <= hi; }
  bool contains(const SlopeInterval& other) const { return other.lo >= lo && other.hi <= hi; }
};

/// EX(R): width w_R / l_R centered at slope(R).
SlopeInterval ex_interval(const Rect& r);

/// Subset of the n x n torus grid; measure = count / n^2.
struct GridSet {
  int n = 0;
  std::vector<std::uint8_t> mask;

  explicit GridSet(int n_ = 0) : n(n_), mask(static_cast<std::size_t>(n_) * n_, 0) {}
  std::int64_t count() const;
  double measure() const;
  GridSet& operator|=(const GridSet& other);
  GridSet& operator&=(const GridSet& other);
};

/// Grid points (i/n, j/n) lying in some periodic image of R.
GridSet rasterize(const Rect& r, int n);
GridSet rasterize(const std::vector<Rect>& rects, int n);

/// u(h(x)) at every grid point, with a sorted copy for interval measures.
class SlopeGrid {
 public:
  SlopeGrid(const FieldSpec& spec, int n);
  int n() const { return n_; }
  double at(std::size_t idx) const { return values_[idx]; }
  /// |{x : u(h(x)) in I}| by grid count.
  double preimage_measure(const SlopeInterval& I) const;

 private:
  int n_ = 0;
  std::vector<double> values_;
  std::vector<double> sorted_;
};

/// E(R) = {x in R : u(h(x)) in EX(R)}.
GridSet E_of(const SlopeGrid& slopes, const Rect& r);
GridSet E_of(const FieldSpec& spec, const Rect& r, int n);
/// |{x : u(h(x)) in EX(R)}| / |R|, the preimage taken over the whole torus.
double popularity(const SlopeGrid& slopes, const Rect& r);
double popularity(const FieldSpec& spec, const Rect& r, int n);

/// R1 <= R2: corners of R1 inside C R2 (same center, both sides scaled by C) and EX(R2) inside EX(R1).
bool comparable(const Rect& r1, const Rect& r2, double C);

enum class CoveringLemma { Incomparable, Density, Population };
std::string to_string(CoveringLemma lemma);
CoveringLemma parse_covering_lemma(const std::string& name);

/// Rectangles plus the auxiliary set of one lemma: F (incomparable), G (density) or H (population).
/// Sets are unions of rectangles, measured by rasterization.
struct Scenario {
  CoveringLemma lemma = CoveringLemma::Density;
  std::uint64_t seed = 0;
  FieldSpec spec;
  std::vector<Rect> rects;
  std::vector<Rect> set;
  double q = 2.0;
  double C = 10.0;

  static Scenario from_json_text(const std::string& text);
  std::string to_json_text() const;
};

struct CoveringReport {
  CoveringLemma lemma = CoveringLemma::Density;
  std::uint64_t seed = 0;
  int n = 0;
  int rect_count = 0;
  double lhs = 0.0;
  double rhs = 0.0;
  /// lhs / rhs; 0 for an empty family.
  double ratio = 0.0;
  /// Measured hypothesis constants: delta, plus lambda (incomparable) or sigma (population).
  double delta = 0.0;
  double lambda = 0.0;
  double sigma = 0.0;
  bool hypotheses_ok = true;
  std::string note;
};

/// Both sides of the lemma by rasterization at grid size n.
///  incomparable: sum |R|      vs |F| / (delta lambda^q),  delta = min pop_R, lambda = min |F cap R| / |R|
///  density:      |union R|    vs delta^-q |G|,            delta = min |E(R) cap G| / |G|
///  population:   |union R|    vs sigma^-1 delta^-2 |H|,   sigma = min pop_R, delta = min |H cap R| / |R|
CoveringReport verify_covering(const Scenario& scenario, int n);

/// Randomized hypothesis-satisfying scenario. The geometry depends only on (seed, lemma, q);
/// rectangles failing the density floors at the reference grid are dropped.
Scenario random_scenario(std::uint64_t seed, CoveringLemma lemma, double q = 2.0, int reference_n = 512);

void write_covering_csv(std::ostream& out, const std::vector<CoveringReport>& reports);

}  // namespace lh
