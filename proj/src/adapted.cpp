#include "lh/adapted.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>

#include "lh/fft.hpp"

namespace lh {

namespace {

using CMat = Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// Contiguous positive-frequency block [lo, hi] carrying a nonzero profile.
struct MBlock {
  int lo = 1;
  int hi = 0;
  bool empty() const { return hi < lo; }
};

MBlock profile_block(AdaptedProfile profile, int k, int m_cap) {
  const Support s = profile_support(profile);
  MBlock b;
  b.lo = std::max(1, static_cast<int>(std::floor(std::ldexp(s.lo, k))));
  b.hi = std::min(m_cap, static_cast<int>(std::ceil(std::ldexp(s.hi, k))));
  return b;
}

/// Shift every column c of the n x cols matrix in its row variable: column c becomes
/// A(x1 + d[c]) by trigonometric interpolation.
void shift_columns(CMat& a, const std::vector<double>& d, double sign) {
  const int n = static_cast<int>(a.rows());
  const int cols = static_cast<int>(a.cols());
  parallel_for(cols, [&](std::int64_t c) {
    cplx* col = a.data() + c;
    fft::transform_1d(n, col, fft::Direction::Forward, cols);
    for (int r = 0; r < n; ++r) {
      const double phase = sign * kTwoPi * index_freq(r, n) * d[c];
      col[static_cast<std::size_t>(r) * cols] *= std::polar(1.0 / n, phase);
    }
    fft::transform_1d(n, col, fft::Direction::Backward, cols);
  });
}

/// Trigonometric upsampling of each row from n to 2n samples.
CMat upsample_rows(const GridFunction& f) {
  const int n = f.n();
  CMat out = CMat::Zero(n, 2 * n);
  parallel_for(n, [&](std::int64_t i) {
    std::vector<cplx> row(f.data() + i * n, f.data() + (i + 1) * n);
    fft::transform_1d(n, row.data(), fft::Direction::Forward);
    cplx* dst = out.data() + i * 2 * n;
    for (int a = 0; a < n; ++a) dst[freq_index(index_freq(a, n), 2 * n)] = row[a] / static_cast<double>(n);
    fft::transform_1d(2 * n, dst, fft::Direction::Backward);
  });
  return out;
}

/// Adjoint of upsample_rows.
GridFunction upsample_rows_adjoint(CMat& w) {
  const int n = static_cast<int>(w.rows());
  GridFunction out(n);
  parallel_for(n, [&](std::int64_t i) {
    cplx* src = w.data() + i * 2 * n;
    fft::transform_1d(2 * n, src, fft::Direction::Forward);
    cplx* dst = out.data() + i * n;
    for (int a = 0; a < n; ++a) dst[a] = src[freq_index(index_freq(a, n), 2 * n)] / static_cast<double>(n);
    fft::transform_1d(n, dst, fft::Direction::Backward);
  });
  return out;
}

GridFunction profile_multiplier(const GridFunction& f, int k, AdaptedProfile profile) {
  return multiplier_apply(f, [&](int, int xi2) { return cplx(profile_symbol(profile, k, xi2)); });
}

void check_k(int n, int k) {
  if (k < 0 || k > adapted_k_max(n))
    throw ConfigError("adapted projection: k=" + std::to_string(k) + " outside [0, " +
                      std::to_string(adapted_k_max(n)) + "]");
}

/// Real kernel weights K(q) = M^-1 sum_m profile(m) exp(2 pi i m (b - q / M)).
void kernel_weights(const std::vector<double>& prof, int m_cap, int samples, double b, std::vector<double>& out) {
  out.assign(samples, 0.0);
  for (int q = 0; q < samples; ++q) {
    const double d = kTwoPi * (b - static_cast<double>(q) / samples);
    double s = 0.0;
    for (int m = 1; m <= m_cap; ++m)
      if (prof[m] != 0.0) s += 2.0 * prof[m] * std::cos(m * d);
    out[q] = s / samples;
  }
}

}  // namespace

int adapted_k_max(int n) { return ilog2(n) - 2; }

struct AdaptedProjector::FastData {
  SlopePieces pieces;
  std::vector<double> s_shift;  // -eps0 g(y_q) on the 2n-point x2 grid
  std::vector<double> r_shift;  // +eps0 g(x2_l) on the n-point x2 grid
  std::vector<CMat> e;          // per slope value: 2n x 2n, columns m = c - n
  std::vector<CMat> q;          // per slope value: 2n x n
};

AdaptedProjector::AdaptedProjector(const FieldSpec& spec, int n, Path path) : spec_(spec), n_(n) {
  check_grid_size(n);
  const bool fast_ok = !spec.g_depends_on_x1() && spec.u.piecewise_constant();
  if (path == Path::Fast && !fast_ok)
    throw ConfigError("fast adapted path needs g independent of x1 and piecewise-constant u");
  path_ = path == Path::Auto ? (fast_ok ? Path::Fast : Path::General) : path;
  if (path_ != Path::Fast) return;

  fast_ = std::make_unique<FastData>();
  FastData& fd = *fast_;
  fd.pieces = slope_pieces(spec, n);
  const int n2 = 2 * n;
  fd.s_shift.resize(n2);
  fd.r_shift.resize(n);
  std::vector<double> gy(n2), dgy(n2), gx(n);
  for (int q = 0; q < n2; ++q) {
    const Point y{0.0, static_cast<double>(q) / n2};
    gy[q] = spec.g_at(y);
    dgy[q] = spec.grad_g(y).d2;
    fd.s_shift[q] = -spec.eps0 * gy[q];
  }
  for (int l = 0; l < n; ++l) {
    gx[l] = spec.g_at({0.0, static_cast<double>(l) / n});
    fd.r_shift[l] = spec.eps0 * gx[l];
  }
  for (double u : fd.pieces.values) {
    CMat e(n2, n2);
    CMat qm(n2, n);
    for (int qq = 0; qq < n2; ++qq) {
      const double y = static_cast<double>(qq) / n2;
      const double b = y + u * spec.eps0 * gy[qq];
      const double db = 1.0 + u * spec.eps0 * dgy[qq];
      for (int c = 0; c < n2; ++c) e(qq, c) = std::polar(db / n2, -kTwoPi * (c - n) * b);
    }
    for (int c = 0; c < n2; ++c)
      for (int l = 0; l < n; ++l) {
        const double x2 = static_cast<double>(l) / n;
        const double b = x2 + u * spec.eps0 * gx[l];
        qm(c, l) = std::polar(1.0, kTwoPi * (c - n) * b);
      }
    fd.e.push_back(std::move(e));
    fd.q.push_back(std::move(qm));
  }
}

AdaptedProjector::~AdaptedProjector() = default;
AdaptedProjector::AdaptedProjector(AdaptedProjector&&) noexcept = default;
AdaptedProjector& AdaptedProjector::operator=(AdaptedProjector&&) noexcept = default;

GridFunction AdaptedProjector::apply(const GridFunction& f, int k, AdaptedProfile profile) const {
  if (f.n() != n_) throw ConfigError("adapted projection: grid size mismatch");
  check_k(n_, k);
  if (spec_.eps0 == 0.0 || spec_.g.empty()) return profile_multiplier(f, k, profile);
  if (path_ == Path::Fast) return fast_pass(f, k, profile, false);
  return apply_general(f, k, profile);
}

GridFunction AdaptedProjector::adjoint(const GridFunction& g, int k, AdaptedProfile profile) const {
  if (g.n() != n_) throw ConfigError("adapted projection: grid size mismatch");
  check_k(n_, k);
  if (spec_.eps0 == 0.0 || spec_.g.empty()) return profile_multiplier(g, k, profile);
  if (path_ == Path::Fast) return fast_pass(g, k, profile, true);
  return adjoint_general(g, k, profile);
}

GridFunction AdaptedProjector::fast_pass(const GridFunction& in, int k, AdaptedProfile profile,
                                         bool adjoint) const {
  const FastData& fd = *fast_;
  const int n = n_;
  const MBlock blk = profile_block(profile, k, n - 1);
  GridFunction out(n);
  if (blk.empty()) return out;
  // Columns of E/Q for m in [lo, hi] and [-hi, -lo].
  const int width = blk.hi - blk.lo + 1;
  const int pos0 = n + blk.lo;
  const int neg0 = n - blk.hi;
  Eigen::VectorXcd prof_pos(width), prof_neg(width);
  for (int c = 0; c < width; ++c) {
    prof_pos(c) = profile_symbol(profile, k, blk.lo + c);
    prof_neg(c) = profile_symbol(profile, k, -(blk.hi - c));
  }
  const std::size_t nn = static_cast<std::size_t>(n) * n;

  if (!adjoint) {
    CMat f = upsample_rows(in);
    shift_columns(f, fd.s_shift, 1.0);
    for (std::size_t piece = 0; piece < fd.e.size(); ++piece) {
      CMat gp = f * fd.e[piece].middleCols(pos0, width);
      CMat gn = f * fd.e[piece].middleCols(neg0, width);
      gp = gp * prof_pos.asDiagonal();
      gn = gn * prof_neg.asDiagonal();
      CMat r = gp * fd.q[piece].middleRows(pos0, width);
      r.noalias() += gn * fd.q[piece].middleRows(neg0, width);
      shift_columns(r, fd.r_shift, 1.0);
      for (std::size_t idx = 0; idx < nn; ++idx)
        if (fd.pieces.label[idx] == static_cast<int>(piece)) out.values()[idx] = r.data()[idx];
    }
    return out;
  }

  CMat fbar = CMat::Zero(n, 2 * n);
  for (std::size_t piece = 0; piece < fd.e.size(); ++piece) {
    CMat r = CMat::Zero(n, n);
    bool any = false;
    for (std::size_t idx = 0; idx < nn; ++idx)
      if (fd.pieces.label[idx] == static_cast<int>(piece)) {
        r.data()[idx] = in.values()[idx];
        any = true;
      }
    if (!any) continue;
    shift_columns(r, fd.r_shift, -1.0);
    CMat gp = r * fd.q[piece].middleRows(pos0, width).adjoint();
    CMat gn = r * fd.q[piece].middleRows(neg0, width).adjoint();
    gp = gp * prof_pos.asDiagonal();
    gn = gn * prof_neg.asDiagonal();
    fbar.noalias() += gp * fd.e[piece].middleCols(pos0, width).adjoint();
    fbar.noalias() += gn * fd.e[piece].middleCols(neg0, width).adjoint();
  }
  shift_columns(fbar, fd.s_shift, -1.0);
  return upsample_rows_adjoint(fbar);
}

namespace {

constexpr int kGeneralMaxN = 128;
constexpr int kScatterBlocks = 16;

std::vector<double> profile_table(AdaptedProfile profile, int k, int m_cap) {
  std::vector<double> prof(m_cap + 1, 0.0);
  for (int m = 1; m <= m_cap; ++m) prof[m] = profile_symbol(profile, k, m);
  return prof;
}

}  // namespace

GridFunction AdaptedProjector::apply_general(const GridFunction& f, int k, AdaptedProfile profile) const {
  const int n = n_;
  if (n > kGeneralMaxN) throw ConfigError("general adapted path is limited to n <= 128");
  const int samples = 2 * n;
  const int m_cap = samples / 2 - 1;
  const std::vector<double> prof = profile_table(profile, k, m_cap);
  const OffgridSampler sampler(f);
  GridFunction out(n);
  parallel_for(n, [&](std::int64_t i) {
    std::vector<cplx> line(samples);
    for (int j = 0; j < n; ++j) {
      const Point x{static_cast<double>(i) / n, static_cast<double>(j) / n};
      const double t = spec_.h(x);
      const double u = spec_.u(t);
      for (int q = 0; q < samples; ++q)
        line[q] = sampler(curve_point_at_b(spec_, t, static_cast<double>(q) / samples));
      fft::transform_1d(samples, line.data(), fft::Direction::Forward);
      const double bx = x.x2 - u * x.x1;
      cplx acc = 0.0;
      for (int m = 1; m <= m_cap; ++m) {
        if (prof[m] == 0.0) continue;
        acc += prof[m] * (line[m] * std::polar(1.0, kTwoPi * m * bx) +
                          line[samples - m] * std::polar(1.0, -kTwoPi * m * bx));
      }
      out(static_cast<int>(i), j) = acc / static_cast<double>(samples);
    }
  });
  return out;
}

GridFunction AdaptedProjector::adjoint_general(const GridFunction& g, int k, AdaptedProfile profile) const {
  const int n = n_;
  if (n > kGeneralMaxN) throw ConfigError("general adapted path is limited to n <= 128");
  const int samples = 2 * n;
  const int m_cap = samples / 2 - 1;
  const std::vector<double> prof = profile_table(profile, k, m_cap);
  const int fine = n * OffgridSampler::kOversample;
  const std::size_t fine_size = static_cast<std::size_t>(fine) * fine;
  const int blocks = std::min(kScatterBlocks, n);
  const int rows_per_block = n / blocks;
  std::vector<std::vector<cplx>> buffers(blocks);
  parallel_for(blocks, [&](std::int64_t blk) {
    std::vector<cplx>& buf = buffers[blk];
    buf.assign(fine_size, cplx(0.0));
    std::vector<double> kernel;
    for (int i = static_cast<int>(blk) * rows_per_block; i < (static_cast<int>(blk) + 1) * rows_per_block; ++i)
      for (int j = 0; j < n; ++j) {
        const cplx gv = g(i, j);
        if (gv == cplx(0.0)) continue;
        const Point x{static_cast<double>(i) / n, static_cast<double>(j) / n};
        const double t = spec_.h(x);
        const double u = spec_.u(t);
        kernel_weights(prof, m_cap, samples, x.x2 - u * x.x1, kernel);
        for (int q = 0; q < samples; ++q) {
          const Point p = curve_point_at_b(spec_, t, static_cast<double>(q) / samples);
          const auto sa = OffgridSampler::stencil(frac(p.x1) * fine, fine);
          const auto sb = OffgridSampler::stencil(frac(p.x2) * fine, fine);
          const cplx w = kernel[q] * gv;
          for (int a = 0; a < OffgridSampler::kTaps; ++a) {
            cplx* row = buf.data() + static_cast<std::size_t>(sa.index[a]) * fine;
            const cplx wa = w * sa.weight[a];
            for (int b = 0; b < OffgridSampler::kTaps; ++b) row[sb.index[b]] += wa * sb.weight[b];
          }
        }
      }
  });
  std::vector<cplx> total(fine_size, cplx(0.0));
  for (const auto& buf : buffers)
    for (std::size_t idx = 0; idx < fine_size; ++idx) total[idx] += buf[idx];
  fft::transform_2d(fine, total.data(), fft::Direction::Forward);
  GridFunction out(n);
  for (int a = 0; a < n; ++a) {
    const int fa = freq_index(index_freq(a, n), fine);
    for (int b = 0; b < n; ++b) {
      const int fb = freq_index(index_freq(b, n), fine);
      out(a, b) = total[static_cast<std::size_t>(fa) * fine + fb];
    }
  }
  fft::transform_2d(n, out.data(), fft::Direction::Backward);
  out *= cplx(1.0 / (static_cast<double>(n) * n));
  return out;
}

std::vector<cplx> adapted_on_curve(const FieldSpec& spec, const std::function<cplx(Point)>& f, double t,
                                   const std::vector<double>& b_values, int k, AdaptedProfile profile,
                                   int samples) {
  if (samples < 16 || !is_power_of_two(samples)) throw ConfigError("adapted_on_curve: samples must be a power of two >= 16");
  const int m_cap = samples / 2 - 1;
  const std::vector<double> prof = profile_table(profile, k, m_cap);
  std::vector<cplx> line(samples);
  for (int q = 0; q < samples; ++q) line[q] = f(curve_point_at_b(spec, t, static_cast<double>(q) / samples));
  fft::transform_1d(samples, line.data(), fft::Direction::Forward);
  std::vector<cplx> out;
  out.reserve(b_values.size());
  for (double bx : b_values) {
    cplx acc = 0.0;
    for (int m = 1; m <= m_cap; ++m) {
      if (prof[m] == 0.0) continue;
      acc += prof[m] * (line[m] * std::polar(1.0, kTwoPi * m * bx) +
                        line[samples - m] * std::polar(1.0, -kTwoPi * m * bx));
    }
    out.push_back(acc / static_cast<double>(samples));
  }
  return out;
}

}  // namespace lh
