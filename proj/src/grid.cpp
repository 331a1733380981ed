#include "lh/grid.hpp"

#include <cmath>
#include <cstring>
#include <fstream>
#include <ostream>
#include <random>

#include "lh/fft.hpp"

namespace lh {

GridFunction::GridFunction(int n) : n_(n), values_(static_cast<std::size_t>(n) * n) {}

GridFunction::GridFunction(int n, std::vector<cplx> values) : n_(n), values_(std::move(values)) {
  if (values_.size() != static_cast<std::size_t>(n) * n)
    throw ConfigError("GridFunction: value count does not match n^2");
}

GridFunction& GridFunction::operator+=(const GridFunction& other) {
  if (other.n_ != n_) throw ConfigError("GridFunction: size mismatch");
  for (std::size_t q = 0; q < values_.size(); ++q) values_[q] += other.values_[q];
  return *this;
}

GridFunction& GridFunction::operator-=(const GridFunction& other) {
  if (other.n_ != n_) throw ConfigError("GridFunction: size mismatch");
  for (std::size_t q = 0; q < values_.size(); ++q) values_[q] -= other.values_[q];
  return *this;
}

GridFunction& GridFunction::operator*=(cplx s) {
  for (auto& v : values_) v *= s;
  return *this;
}

void GridFunction::axpy(cplx a, const GridFunction& other) {
  if (other.n_ != n_) throw ConfigError("GridFunction: size mismatch");
  for (std::size_t q = 0; q < values_.size(); ++q) values_[q] += a * other.values_[q];
}

bool GridFunction::all_finite() const {
  for (const auto& v : values_)
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) return false;
  return true;
}

GridFunction operator+(GridFunction a, const GridFunction& b) { return a += b; }
GridFunction operator-(GridFunction a, const GridFunction& b) { return a -= b; }
GridFunction operator*(cplx s, GridFunction a) { return a *= s; }

Spectrum::Spectrum(int n) : n_(n), coeffs_(static_cast<std::size_t>(n) * n) {}

Spectrum::Spectrum(int n, std::vector<cplx> coeffs) : n_(n), coeffs_(std::move(coeffs)) {
  if (coeffs_.size() != static_cast<std::size_t>(n) * n)
    throw ConfigError("Spectrum: coefficient count does not match n^2");
}

cplx Spectrum::at(int xi1, int xi2) const {
  return coeffs_[static_cast<std::size_t>(freq_index(xi1, n_)) * n_ + freq_index(xi2, n_)];
}

cplx& Spectrum::at(int xi1, int xi2) {
  return coeffs_[static_cast<std::size_t>(freq_index(xi1, n_)) * n_ + freq_index(xi2, n_)];
}

void check_grid_size(int n) {
  if (!is_power_of_two(n) || n < 16 || n > 4096)
    throw ConfigError("grid size must be a power of two in [16, 4096], got " + std::to_string(n));
}

Spectrum forward(const GridFunction& f) {
  std::vector<cplx> c = f.values();
  fft::transform_2d(f.n(), c.data(), fft::Direction::Forward);
  const double scale = 1.0 / (static_cast<double>(f.n()) * f.n());
  for (auto& v : c) v *= scale;
  return Spectrum(f.n(), std::move(c));
}

GridFunction inverse(const Spectrum& s) {
  std::vector<cplx> v = s.coeffs();
  fft::transform_2d(s.n(), v.data(), fft::Direction::Backward);
  return GridFunction(s.n(), std::move(v));
}

double lp_norm(const GridFunction& f, double p) {
  if (!(p > 1.0) || !std::isfinite(p)) throw std::domain_error("lp_norm: p must lie in (1, inf)");
  const int n = f.n();
  std::vector<double> rows(n);
  parallel_for(n, [&](std::int64_t i) {
    double s = 0.0;
    for (int j = 0; j < n; ++j) s += std::pow(std::abs(f(static_cast<int>(i), j)), p);
    rows[i] = s;
  });
  double total = 0.0;
  for (double r : rows) total += r;
  return std::pow(total / (static_cast<double>(n) * n), 1.0 / p);
}

double l2_norm(const GridFunction& f) {
  const int n = f.n();
  std::vector<double> rows(n);
  parallel_for(n, [&](std::int64_t i) {
    double s = 0.0;
    for (int j = 0; j < n; ++j) s += std::norm(f(static_cast<int>(i), j));
    rows[i] = s;
  });
  double total = 0.0;
  for (double r : rows) total += r;
  return std::sqrt(total / (static_cast<double>(n) * n));
}

cplx inner(const GridFunction& f, const GridFunction& g) {
  if (f.n() != g.n()) throw ConfigError("inner: size mismatch");
  const int n = f.n();
  std::vector<cplx> rows(n);
  parallel_for(n, [&](std::int64_t i) {
    cplx s = 0.0;
    for (int j = 0; j < n; ++j) s += f(static_cast<int>(i), j) * std::conj(g(static_cast<int>(i), j));
    rows[i] = s;
  });
  cplx total = 0.0;
  for (const auto& r : rows) total += r;
  return total / (static_cast<double>(n) * n);
}

double l2_norm(const Spectrum& s) {
  double total = 0.0;
  for (const auto& c : s.coeffs()) total += std::norm(c);
  return std::sqrt(total);
}

Spectrum multiplier_apply(const Spectrum& s, const Symbol& m) {
  const int n = s.n();
  Spectrum out(n);
  for (int a = 0; a < n; ++a) {
    const int xi1 = index_freq(a, n);
    for (int b = 0; b < n; ++b) {
      const cplx c = s.coeffs()[static_cast<std::size_t>(a) * n + b];
      if (c == cplx(0.0)) continue;
      const cplx mv = m(xi1, index_freq(b, n));
      if (!std::isfinite(mv.real()) || !std::isfinite(mv.imag()))
        throw NumericalError("multiplier_apply: non-finite symbol value");
      out.coeffs()[static_cast<std::size_t>(a) * n + b] = mv * c;
    }
  }
  return out;
}

GridFunction multiplier_apply(const GridFunction& f, const Symbol& m) {
  return inverse(multiplier_apply(forward(f), m));
}

OffgridSampler::OffgridSampler(const GridFunction& f)
    : n_(f.n()), fine_(f.n() * kOversample), coarse_(f) {
  const Spectrum s = forward(f);
  fine_values_.assign(static_cast<std::size_t>(fine_) * fine_, cplx(0.0));
  for (int a = 0; a < n_; ++a) {
    const int fa = freq_index(index_freq(a, n_), fine_);
    for (int b = 0; b < n_; ++b) {
      const int fb = freq_index(index_freq(b, n_), fine_);
      fine_values_[static_cast<std::size_t>(fa) * fine_ + fb] =
          s.coeffs()[static_cast<std::size_t>(a) * n_ + b];
    }
  }
  fft::transform_2d(fine_, fine_values_.data(), fft::Direction::Backward);
}

OffgridSampler::Stencil OffgridSampler::stencil(double s, int fine_n) {
  Stencil st;
  const double fl = std::floor(s);
  const long base = static_cast<long>(fl) - (kTaps / 2 - 1);
  const double t = s - static_cast<double>(base);
  for (int m = 0; m < kTaps; ++m) {
    double w = 1.0;
    for (int q = 0; q < kTaps; ++q) {
      if (q == m) continue;
      w *= (t - q) / static_cast<double>(m - q);
    }
    st.weight[m] = w;
    long idx = (base + m) % fine_n;
    if (idx < 0) idx += fine_n;
    st.index[m] = static_cast<int>(idx);
  }
  return st;
}

cplx OffgridSampler::operator()(Point x) const {
  const double s1 = frac(x.x1) * n_;
  const double s2 = frac(x.x2) * n_;
  if (s1 == std::floor(s1) && s2 == std::floor(s2))
    return coarse_(static_cast<int>(s1) % n_, static_cast<int>(s2) % n_);
  const Stencil a = stencil(frac(x.x1) * fine_, fine_);
  const Stencil b = stencil(frac(x.x2) * fine_, fine_);
  cplx sum = 0.0;
  for (int p = 0; p < kTaps; ++p) {
    const cplx* row = fine_values_.data() + static_cast<std::size_t>(a.index[p]) * fine_;
    cplx r = 0.0;
    for (int q = 0; q < kTaps; ++q) r += b.weight[q] * row[b.index[q]];
    sum += a.weight[p] * r;
  }
  return sum;
}

cplx sample_offgrid(const GridFunction& f, Point x) { return OffgridSampler(f)(x); }

cplx trig_interpolate(const Spectrum& s, Point x) {
  const int n = s.n();
  std::vector<cplx> e1(n), e2(n);
  for (int a = 0; a < n; ++a) {
    const int xi = index_freq(a, n);
    e1[a] = std::polar(1.0, kTwoPi * xi * x.x1);
    e2[a] = std::polar(1.0, kTwoPi * xi * x.x2);
  }
  cplx sum = 0.0;
  for (int a = 0; a < n; ++a) {
    cplx row = 0.0;
    for (int b = 0; b < n; ++b) row += s.coeffs()[static_cast<std::size_t>(a) * n + b] * e2[b];
    sum += e1[a] * row;
  }
  return sum;
}

GridFunction random_bandlimited(std::uint64_t seed, int n, ConeSpec cone, Band band,
                                RandomOptions options) {
  check_grid_size(n);
  if (!(cone.half_angle_slope > 0.0 && cone.half_angle_slope <= 1.0))
    throw ConfigError("cone half_angle_slope must lie in (0, 1]");
  if (band.k_lo < 0 || band.k_hi < band.k_lo)
    throw ConfigError("band must satisfy 0 <= k_lo <= k_hi");
  if ((std::int64_t{1} << band.k_hi) > n / 4)
    throw ConfigError("band: 2^k_hi must not exceed n/4");
  const int lo = 1 << band.k_lo;
  const int hi = 1 << band.k_hi;
  Spectrum s(n);
  double mass = 0.0;
  for (int xi2 = -hi; xi2 <= hi; ++xi2) {
    const int a2 = std::abs(xi2);
    if (a2 < lo) continue;
    const int w = static_cast<int>(std::floor(cone.half_angle_slope * a2 + 1e-12));
    for (int xi1 = -w; xi1 <= w; ++xi1) {
      if (options.zero_mean_lines && xi1 == 0) continue;
      const std::uint64_t key =
          (static_cast<std::uint64_t>(xi1 + (1 << 20)) << 21) ^ static_cast<std::uint64_t>(xi2 + (1 << 20));
      std::mt19937_64 rng(derive_seed(seed, 0x5EEDULL, key));
      std::normal_distribution<double> normal(0.0, 1.0);
      const double re = normal(rng);
      const double im = normal(rng);
      s.at(xi1, xi2) = cplx(re, im);
      mass += re * re + im * im;
    }
  }
  if (mass == 0.0) throw ConfigError("random_bandlimited: empty admissible frequency set");
  const double scale = 1.0 / std::sqrt(mass);
  for (auto& c : s.coeffs()) c *= scale;
  return inverse(s);
}

namespace {

bool is_integer(double x) { return std::isfinite(x) && x == std::floor(x); }

}  // namespace

double symmetry_determinant(Symmetry which, double lambda) {
  return (which == Symmetry::A || which == Symmetry::B) ? lambda : 1.0;
}

GridFunction apply_symmetry(const GridFunction& f, Symmetry which, double lambda) {
  const int n = f.n();
  GridFunction out(n);
  if (which == Symmetry::A || which == Symmetry::B) {
    if (!is_integer(lambda) || lambda < 1.0 || !is_power_of_two(static_cast<std::int64_t>(lambda)))
      throw ConfigError("symmetry A/B: lambda must be 2^j with j >= 0");
    const std::int64_t m = static_cast<std::int64_t>(lambda);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        out(i, j) = which == Symmetry::A ? f(static_cast<int>((m * i) % n), j)
                                         : f(i, static_cast<int>((m * j) % n));
    return out;
  }
  if (!is_integer(lambda)) throw ConfigError("symmetry C/D: lambda must be an integer");
  std::int64_t m = static_cast<std::int64_t>(lambda) % n;
  if (m < 0) m += n;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      out(i, j) = which == Symmetry::C ? f(i, static_cast<int>((j + m * i) % n))
                                       : f(static_cast<int>((i + m * j) % n), j);
  return out;
}

Symmetry parse_symmetry(const std::string& name) {
  if (name == "A") return Symmetry::A;
  if (name == "B") return Symmetry::B;
  if (name == "C") return Symmetry::C;
  if (name == "D") return Symmetry::D;
  throw ConfigError("unknown symmetry '" + name + "'");
}

namespace {

void put_u32(std::ostream& out, std::uint32_t v) {
  unsigned char b[4];
  for (int q = 0; q < 4; ++q) b[q] = static_cast<unsigned char>((v >> (8 * q)) & 0xFF);
  out.write(reinterpret_cast<const char*>(b), 4);
}

void put_f64(std::ostream& out, double x) {
  std::uint64_t v;
  std::memcpy(&v, &x, sizeof v);
  unsigned char b[8];
  for (int q = 0; q < 8; ++q) b[q] = static_cast<unsigned char>((v >> (8 * q)) & 0xFF);
  out.write(reinterpret_cast<const char*>(b), 8);
}

std::uint64_t get_le(std::istream& in, int bytes) {
  unsigned char b[8] = {};
  in.read(reinterpret_cast<char*>(b), bytes);
  if (!in) throw ConfigError("LHG2: truncated file");
  std::uint64_t v = 0;
  for (int q = bytes - 1; q >= 0; --q) v = (v << 8) | b[q];
  return v;
}

}  // namespace

void write_lhg2(const std::string& path, const GridFunction& f) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot open '" + path + "' for writing");
  out.write("LHG2", 4);
  put_u32(out, static_cast<std::uint32_t>(f.n()));
  const char pad[8] = {};
  out.write(pad, 8);
  for (const auto& v : f.values()) {
    put_f64(out, v.real());
    put_f64(out, v.imag());
  }
  if (!out) throw NumericalError("write failed for '" + path + "'");
}

GridFunction read_lhg2(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open '" + path + "'");
  char magic[4];
  in.read(magic, 4);
  if (!in || std::memcmp(magic, "LHG2", 4) != 0) throw ConfigError("'" + path + "' is not an LHG2 dump");
  const int n = static_cast<int>(get_le(in, 4));
  get_le(in, 8);
  check_grid_size(n);
  std::vector<cplx> values(static_cast<std::size_t>(n) * n);
  for (auto& v : values) {
    std::uint64_t re = get_le(in, 8);
    std::uint64_t im = get_le(in, 8);
    double r, m;
    std::memcpy(&r, &re, sizeof r);
    std::memcpy(&m, &im, sizeof m);
    v = cplx(r, m);
  }
  GridFunction f(n, std::move(values));
  if (!f.all_finite()) throw ConfigError("'" + path + "' contains non-finite values");
  return f;
}

void write_grid_csv(std::ostream& out, const GridFunction& f) {
  out << "i,j,re,im\n";
  char buf[96];
  for (int i = 0; i < f.n(); ++i)
    for (int j = 0; j < f.n(); ++j) {
      std::snprintf(buf, sizeof buf, "%d,%d,%.17g,%.17g\n", i, j, f(i, j).real(), f(i, j).imag());
      out << buf;
    }
}

}  // namespace lh
