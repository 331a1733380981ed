#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "lh/common.hpp"

namespace lh {

/// Samples of a function on the n x n periodic unit torus.
/// values[i * n + j] holds f(i/n, j/n); i runs along x1, j along x2.
class GridFunction {
 public:
  GridFunction() = default;
  explicit GridFunction(int n);
  GridFunction(int n, std::vector<cplx> values);

  int n() const { return n_; }
  std::size_t size() const { return values_.size(); }
  const std::vector<cplx>& values() const { return values_; }
  std::vector<cplx>& values() { return values_; }
  cplx* data() { return values_.data(); }
  const cplx* data() const { return values_.data(); }

  cplx operator()(int i, int j) const { return values_[static_cast<std::size_t>(i) * n_ + j]; }
  cplx& operator()(int i, int j) { return values_[static_cast<std::size_t>(i) * n_ + j]; }

  GridFunction& operator+=(const GridFunction& other);
  GridFunction& operator-=(const GridFunction& other);
  GridFunction& operator*=(cplx s);
  /// this += a * other
  void axpy(cplx a, const GridFunction& other);

  bool all_finite() const;

 private:
  int n_ = 0;
  std::vector<cplx> values_;
};

GridFunction operator+(GridFunction a, const GridFunction& b);
GridFunction operator-(GridFunction a, const GridFunction& b);
GridFunction operator*(cplx s, GridFunction a);

/// Fourier coefficients c(xi) = n^-2 sum_x f(x) exp(-2 pi i xi.x), stored at DFT indices.
class Spectrum {
 public:
  Spectrum() = default;
  explicit Spectrum(int n);
  Spectrum(int n, std::vector<cplx> coeffs);

  int n() const { return n_; }
  const std::vector<cplx>& coeffs() const { return coeffs_; }
  std::vector<cplx>& coeffs() { return coeffs_; }

  /// Coefficient at integer frequency (xi1, xi2) in [-n/2, n/2)^2.
  cplx at(int xi1, int xi2) const;
  cplx& at(int xi1, int xi2);

 private:
  int n_ = 0;
  std::vector<cplx> coeffs_;
};

/// Throws ConfigError unless n is a power of two in [16, 4096].
void check_grid_size(int n);

Spectrum forward(const GridFunction& f);
GridFunction inverse(const Spectrum& s);

/// (n^-2 sum |f|^p)^(1/p) for 1 < p < infinity; throws std::domain_error otherwise.
double lp_norm(const GridFunction& f, double p);
double l2_norm(const GridFunction& f);
/// n^-2 sum f conj(g).
cplx inner(const GridFunction& f, const GridFunction& g);
/// sqrt(sum |c|^2).
double l2_norm(const Spectrum& s);

using Symbol = std::function<cplx(int, int)>;

/// Multiply the spectrum by m(xi1, xi2) at every grid frequency.
GridFunction multiplier_apply(const GridFunction& f, const Symbol& m);
Spectrum multiplier_apply(const Spectrum& s, const Symbol& m);

/// Off-grid evaluation: 4x zero-padded spectral oversampling followed by
/// tensor-product 8-point Lagrange interpolation.
class OffgridSampler {
 public:
  static constexpr int kOversample = 4;
  static constexpr int kTaps = 8;

  explicit OffgridSampler(const GridFunction& f);

  int n() const { return n_; }
  cplx operator()(Point x) const;

  /// Interpolation taps of one axis for oversampled coordinate s (in fine-grid units).
  struct Stencil {
    int index[kTaps];
    double weight[kTaps];
  };
  static Stencil stencil(double s, int fine_n);

 private:
  int n_ = 0;
  int fine_ = 0;
  GridFunction coarse_;
  std::vector<cplx> fine_values_;
};

/// Interpolated value of f at x; grid nodes return the stored sample.
cplx sample_offgrid(const GridFunction& f, Point x);

/// Direct trigonometric sum of the DFT interpolant of f at x (O(n^2) per probe).
cplx trig_interpolate(const Spectrum& s, Point x);

struct ConeSpec {
  double half_angle_slope = 1.0;
};

/// Dyadic band of vertical frequencies 2^k_lo <= |xi2| <= 2^k_hi.
struct Band {
  int k_lo = 1;
  int k_hi = 3;
};

struct RandomOptions {
  /// Drop every coefficient with xi1 = 0 (each line along x1 has mean zero).
  bool zero_mean_lines = false;
};

/// Unit-L2 random function with Gaussian coefficients on the admissible cone band.
/// Each coefficient is drawn from a stream keyed by (seed, xi), so the same seed
/// produces the same continuum function on every grid that resolves the band.
GridFunction random_bandlimited(std::uint64_t seed, int n, ConeSpec cone, Band band,
                                RandomOptions options = {});

enum class Symmetry { A, B, C, D };

/// Pull back by the linear map of the symmetry: A: f(lambda x1, x2), B: f(x1, lambda x2),
/// C: f(x1, x2 + lambda x1), D: f(x1 + lambda x2, x2).
/// A and B need lambda = 2^j (j >= 0), C and D an integer lambda.
GridFunction apply_symmetry(const GridFunction& f, Symmetry which, double lambda);

/// Jacobian determinant of the symmetry's linear map (lambda for A, B; 1 for C, D).
double symmetry_determinant(Symmetry which, double lambda);

Symmetry parse_symmetry(const std::string& name);

/// Binary dump: "LHG2", u32 n, 8 zero bytes, then n^2 little-endian float64 (re, im) pairs.
void write_lhg2(const std::string& path, const GridFunction& f);
GridFunction read_lhg2(const std::string& path);
/// CSV with header i,j,re,im.
void write_grid_csv(std::ostream& out, const GridFunction& f);

}  // namespace lh
