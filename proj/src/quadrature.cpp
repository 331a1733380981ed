#include "lh/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "lh/bumps.hpp"
#include "lh/fft.hpp"
#include "lh/transforms.hpp"

namespace lh {

LineQuadrature line_quadrature(int n, int l, double tail_tol) {
  check_grid_size(n);
  if (l > ilog2(n) - 1) throw ConfigError("H_l: scale 2^-l below 2/n is not resolvable");
  // Grid frequencies satisfy |xi . v| <= n; psi_l lives below 2^(l+1).
  const double band = n + std::ldexp(2.0, l);
  const int r = static_cast<int>(std::floor(band / n)) + 1;
  LineQuadrature q;
  q.step = 1.0 / (static_cast<double>(r) * n);
  const double window = psi_check_window(tail_tol) * std::ldexp(1.0, -l);
  const int m_max = static_cast<int>(std::ceil(window / q.step));
  const double scale = std::ldexp(1.0, l);
  for (int m = -m_max; m <= m_max; ++m) {
    const double t = m * q.step;
    q.nodes.push_back(t);
    q.weights.push_back(q.step * scale * psi_check0(scale * t));
  }
  return q;
}

GridFunction H_l_quadrature(const GridFunction& f, const FieldSpec& spec, int l, double tail_tol) {
  const int n = f.n();
  const LineQuadrature q = line_quadrature(n, l, tail_tol);
  const OffgridSampler sampler(f);
  GridFunction out(n);
  parallel_for(n, [&](std::int64_t i) {
    for (int j = 0; j < n; ++j) {
      const Point x{static_cast<double>(i) / n, static_cast<double>(j) / n};
      const Point v = vector_at(spec, x);
      cplx acc = 0.0;
      for (std::size_t m = 0; m < q.nodes.size(); ++m)
        acc += q.weights[m] * sampler({x.x1 - q.nodes[m] * v.x1, x.x2 - q.nodes[m] * v.x2});
      out(static_cast<int>(i), j) = acc;
    }
  });
  return out;
}

GridFunction H_l_quadrature_adjoint(const GridFunction& g, const FieldSpec& spec, int l, double tail_tol) {
  const int n = g.n();
  const LineQuadrature q = line_quadrature(n, l, tail_tol);
  const int fine = n * OffgridSampler::kOversample;
  const std::size_t fine_size = static_cast<std::size_t>(fine) * fine;
  const int blocks = std::min(16, n);
  const int rows_per_block = n / blocks;
  std::vector<std::vector<cplx>> buffers(blocks);
  parallel_for(blocks, [&](std::int64_t blk) {
    std::vector<cplx>& buf = buffers[blk];
    buf.assign(fine_size, cplx(0.0));
    for (int i = static_cast<int>(blk) * rows_per_block; i < (static_cast<int>(blk) + 1) * rows_per_block; ++i)
      for (int j = 0; j < n; ++j) {
        const cplx gv = g(i, j);
        if (gv == cplx(0.0)) continue;
        const Point x{static_cast<double>(i) / n, static_cast<double>(j) / n};
        const Point v = vector_at(spec, x);
        for (std::size_t m = 0; m < q.nodes.size(); ++m) {
          const double y1 = frac(x.x1 - q.nodes[m] * v.x1) * fine;
          const double y2 = frac(x.x2 - q.nodes[m] * v.x2) * fine;
          const auto sa = OffgridSampler::stencil(y1, fine);
          const auto sb = OffgridSampler::stencil(y2, fine);
          const cplx w = std::conj(q.weights[m]) * gv;
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
    for (int b = 0; b < n; ++b) out(a, b) = total[static_cast<std::size_t>(fa) * fine + freq_index(index_freq(b, n), fine)];
  }
  fft::transform_2d(n, out.data(), fft::Direction::Backward);
  out *= cplx(1.0 / (static_cast<double>(n) * n));
  return out;
}

double carleson_fiber_norm(const GridFunction& f, const SlopeFunction& u) {
  const int n = f.n();
  const int n2 = 2 * n;
  const double h = 1.0 / n2;
  const Spectrum s = forward(f);

  // Grid columns grouped by slope value.
  std::vector<double> slope_values;
  std::vector<std::vector<int>> columns;
  for (int i = 0; i < n; ++i) {
    const double v = u(static_cast<double>(i) / n);
    const auto it = std::find(slope_values.begin(), slope_values.end(), v);
    if (it == slope_values.end()) {
      slope_values.push_back(v);
      columns.push_back({i});
    } else {
      columns[it - slope_values.begin()].push_back(i);
    }
  }

  // Coefficients at roundoff level are not part of the spectrum.
  double peak = 0.0;
  for (const auto& c : s.coeffs()) peak = std::max(peak, std::abs(c));
  const double floor = 1e-13 * peak;
  const auto live = [&](std::size_t idx) { return std::abs(s.coeffs()[idx]) > floor; };
  std::vector<int> fibers;
  for (int b = 0; b < n; ++b) {
    bool any = false;
    for (int a = 0; a < n && !any; ++a) any = live(static_cast<std::size_t>(a) * n + b);
    if (any) fibers.push_back(b);
  }

  std::vector<double> fiber_sums(fibers.size(), 0.0);
  parallel_for(static_cast<std::int64_t>(fibers.size()), [&](std::int64_t fi) {
    const int b = fibers[fi];
    const int xi2 = index_freq(b, n);
    // Fiber F(., xi2) on the 2n grid: spectrum, values and derivative.
    std::vector<cplx> spec2(n2, cplx(0.0));
    std::vector<int> support;
    for (int a = 0; a < n; ++a) {
      const std::size_t idx = static_cast<std::size_t>(a) * n + b;
      if (!live(idx)) continue;
      const int xi1 = index_freq(a, n);
      spec2[freq_index(xi1, n2)] = s.coeffs()[idx];
      support.push_back(xi1);
    }
    std::vector<cplx> fine = spec2, dfine(n2);
    for (int c = 0; c < n2; ++c) dfine[c] = spec2[c] * cplx(0.0, kTwoPi * index_freq(c, n2));
    fft::transform_1d(n2, fine.data(), fft::Direction::Backward);
    fft::transform_1d(n2, dfine.data(), fft::Direction::Backward);

    double sum = 0.0;
    std::vector<cplx> kernel(n2);
    for (std::size_t g = 0; g < slope_values.size(); ++g) {
      const double uu = slope_values[g];
      double a_min = std::numeric_limits<double>::infinity();
      for (int xi1 : support) a_min = std::min(a_min, std::fabs(xi1 + uu * xi2));
      if (a_min == 0.0) throw NumericalError("carleson_fiber_norm: xi1 + u xi2 vanishes on the spectrum");
      const double T = std::max(1.0, 1.1 / a_min);
      const int jmax = static_cast<int>(std::ceil(6.5 * T / h));
      const double k = kTwoPi * uu * xi2;
      // kappa(j) = exp(-i k j h) w(|j| h) / (j h), folded modulo the period 2n;
      // the windowed PV sum at column c is E(0) + sum_j kappa(j) F(c - j).
      std::fill(kernel.begin(), kernel.end(), cplx(0.0));
      for (int j = 1; j <= jmax; ++j) {
        const double t = j * h;
        const double w = std::exp(-(t / T) * (t / T)) / t;
        const cplx ph = std::polar(1.0, -k * t);
        kernel[j % n2] += w * ph;
        kernel[(n2 - j % n2) % n2] -= w * std::conj(ph);
      }
      // Periodic convolution through the DFT of the folded kernel.
      std::vector<cplx> kf = kernel, ff = fine;
      fft::transform_1d(n2, kf.data(), fft::Direction::Forward);
      fft::transform_1d(n2, ff.data(), fft::Direction::Forward);
      for (int c = 0; c < n2; ++c) ff[c] *= kf[c];
      fft::transform_1d(n2, ff.data(), fft::Direction::Backward);
      for (int i : columns[g]) {
        const int c = 2 * i;
        // E(0) = 2 G'(0) with G(t) = F(x1 - t) exp(-i k t).
        const cplx g0 = -dfine[c] - cplx(0.0, k) * fine[c];
        const cplx acc = g0 + ff[c] / static_cast<double>(n2);
        sum += std::norm(h * acc);
      }
    }
    fiber_sums[fi] = sum;
  });
  double total = 0.0;
  for (double v : fiber_sums) total += v;
  return std::sqrt(total / n) / kPi;
}

double carleson_identity_gap(const GridFunction& f, const FieldSpec& spec) {
  if (spec.eps0 != 0.0 && !spec.g.empty()) throw ConfigError("carleson_identity_gap needs a one-variable field (eps0 = 0)");
  const FieldOperators ops(spec, f.n());
  const double lhs = l2_norm(ops.H_v(f));
  if (lhs == 0.0) return 0.0;
  const double rhs = carleson_fiber_norm(f, spec.u);
  return std::fabs(lhs - rhs) / lhs;
}

}  // namespace lh
