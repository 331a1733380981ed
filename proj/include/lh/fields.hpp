#pragma once

#include <string>
#include <vector>

#include "lh/common.hpp"

namespace lh {

/// One term Re(c exp(2 pi i (k1 x1 + k2 x2))) of the perturbation g.
struct FourierTerm {
  int k1 = 0;
  int k2 = 0;
  cplx c = 0.0;
};

/// 1-periodic slope function u with values in [-1, 1]: either a trigonometric
/// polynomial or piecewise constant with finitely many jumps.
class SlopeFunction {
 public:
  enum class Kind { Smooth, Steps };

  SlopeFunction() = default;
  static SlopeFunction constant(double value);
  /// u(t) = values[i] on [breaks[i], breaks[i+1]) cyclically; a breakpoint takes the right limit.
  static SlopeFunction steps(std::vector<double> breaks, std::vector<double> values);
  /// u(t) = c0 + sum a_m cos(2 pi m t) + b_m sin(2 pi m t), m starting at 1.
  static SlopeFunction smooth(double c0, std::vector<double> cos_coeffs, std::vector<double> sin_coeffs);

  double operator()(double t) const;
  Kind kind() const { return kind_; }
  bool piecewise_constant() const { return kind_ == Kind::Steps; }

  /// Index of the piece containing t (Steps only).
  int piece(double t) const;
  const std::vector<double>& breaks() const { return breaks_; }
  const std::vector<double>& values() const { return values_; }
  double c0() const { return c0_; }
  const std::vector<double>& cos_coeffs() const { return cos_; }
  const std::vector<double>& sin_coeffs() const { return sin_; }

  /// sup |u| (exact for steps, dense sampling for smooth).
  double sup_norm() const;

 private:
  Kind kind_ = Kind::Smooth;
  std::vector<double> breaks_;
  std::vector<double> values_;
  double c0_ = 0.0;
  std::vector<double> cos_;
  std::vector<double> sin_;
};

struct Gradient {
  double d1 = 0.0;
  double d2 = 0.0;
};

/// The pair (h, u) with h(x) = x1 + eps0 g(x1, x2) and v(x) = (1, u(h(x))).
struct FieldSpec {
  double eps0 = 0.05;
  std::vector<FourierTerm> g;
  SlopeFunction u = SlopeFunction::constant(0.0);

  double g_at(Point x) const;
  Gradient grad_g(Point x) const;
  double h(Point x) const { return x.x1 + eps0 * g_at(x); }
  Gradient grad_h(Point x) const;

  /// sum |c| bounds |g|; sum 2 pi |c| |k| bounds |grad g|.
  double g_bound() const;
  double grad_g_bound() const;
  bool g_depends_on_x1() const;

  /// Check eps0 in [0, 0.1], |u| <= 1 and |grad h - (1,0)| <= eps0 on a dense probe grid.
  /// Throws ConfigError on violation.
  void validate(int probes_per_axis = 1024) const;

  static FieldSpec from_json_text(const std::string& text);
  std::string to_json_text() const;
};

/// Sinusoidal perturbation g(x) = sin(2 pi m x2) / (2 pi m), the standard test case (m = 1).
FieldSpec sinusoidal_field(double eps0, SlopeFunction u, int frequency = 1);
/// eps0 = 0 (h = x1) with the given slope function.
FieldSpec one_variable_field(SlopeFunction u);

/// v(x) = (1, u(h(x))).
Point vector_at(const FieldSpec& spec, Point x);

/// Graph x1 = g_t(x2) of the level set {h = t}.
struct LevelCurve {
  double t = 0.0;
  std::vector<double> x2;
  std::vector<double> x1;
  Point v_t;
  /// (-u(t), 1) / |(-u(t), 1)|.
  Point v_t_perp;
};

/// Root of x1 -> h(x1, x2) - t (safeguarded Newton, tolerance 1e-12, at most 100 iterations).
double level_x1(const FieldSpec& spec, double t, double x2);

LevelCurve level_curve(const FieldSpec& spec, double t, int n_samples);

/// The d with z - d v_t on the level set {h = t}.
double h_t_eval(const FieldSpec& spec, double t, Point z);

/// Point of {h = t} whose coordinate y2 - u(t) y1 equals b.
Point curve_point_at_b(const FieldSpec& spec, double t, double b);

/// Rectangle with long side of slope `slope`.
struct Rect {
  Point center;
  double length = 0.0;
  double width = 0.0;
  double slope = 0.0;

  double area() const { return length * width; }
  /// Unit vectors along the long and short sides.
  Point long_dir() const;
  Point short_dir() const;
  /// Membership for a point of the plane (no periodic wrap).
  bool contains_plane(Point x) const;
  /// Membership for a torus point, using the periodic image nearest the center.
  bool contains(Point x) const;
  /// Periodic image of x nearest the center.
  Point unwrap(Point x) const;
  std::vector<Point> corners() const;
};

/// {x : h(x) in h(R)} intersected with the slab between the long-side lines of R.
class AdaptedRect {
 public:
  AdaptedRect(const FieldSpec& spec, const Rect& rect);

  bool contains(Point x) const;
  double h_lo() const { return h_lo_; }
  double h_hi() const { return h_hi_; }
  const Rect& rect() const { return rect_; }

 private:
  FieldSpec spec_;
  Rect rect_;
  double h_lo_ = 0.0;
  double h_hi_ = 0.0;
  double slab_half_ = 0.0;
};

AdaptedRect adapted_rectangle(const FieldSpec& spec, const Rect& rect);

/// Grid partition by the value of u(h(x)) for piecewise-constant u.
struct SlopePieces {
  /// Distinct slope values, in first-seen order of the step list.
  std::vector<double> values;
  /// label[i * n + j] indexes `values` at the grid point (i/n, j/n).
  std::vector<int> label;
};

SlopePieces slope_pieces(const FieldSpec& spec, int n);

}  // namespace lh
