#include "lh/fields.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "json.hpp"

namespace lh {

using nlohmann::json;

SlopeFunction SlopeFunction::constant(double value) { return steps({0.0}, {value}); }

SlopeFunction SlopeFunction::steps(std::vector<double> breaks, std::vector<double> values) {
  if (breaks.empty() || breaks.size() != values.size())
    throw ConfigError("step slope function needs matching, nonempty breaks and values");
  for (std::size_t i = 0; i < breaks.size(); ++i) {
    if (!(breaks[i] >= 0.0 && breaks[i] < 1.0)) throw ConfigError("step breaks must lie in [0, 1)");
    if (i > 0 && !(breaks[i] > breaks[i - 1])) throw ConfigError("step breaks must be strictly increasing");
    if (!std::isfinite(values[i])) throw ConfigError("step values must be finite");
  }
  SlopeFunction u;
  u.kind_ = Kind::Steps;
  u.breaks_ = std::move(breaks);
  u.values_ = std::move(values);
  return u;
}

SlopeFunction SlopeFunction::smooth(double c0, std::vector<double> cos_coeffs,
                                    std::vector<double> sin_coeffs) {
  SlopeFunction u;
  u.kind_ = Kind::Smooth;
  u.c0_ = c0;
  u.cos_ = std::move(cos_coeffs);
  u.sin_ = std::move(sin_coeffs);
  return u;
}

int SlopeFunction::piece(double t) const {
  if (kind_ != Kind::Steps) throw ConfigError("piece() needs a piecewise-constant slope function");
  const double s = frac(t);
  auto it = std::upper_bound(breaks_.begin(), breaks_.end(), s);
  if (it == breaks_.begin()) return static_cast<int>(breaks_.size()) - 1;
  return static_cast<int>(it - breaks_.begin()) - 1;
}

double SlopeFunction::operator()(double t) const {
  if (kind_ == Kind::Steps) return values_[piece(t)];
  double v = c0_;
  const double s = frac(t);
  for (std::size_t m = 0; m < cos_.size(); ++m) v += cos_[m] * std::cos(kTwoPi * (m + 1) * s);
  for (std::size_t m = 0; m < sin_.size(); ++m) v += sin_[m] * std::sin(kTwoPi * (m + 1) * s);
  return v;
}

double SlopeFunction::sup_norm() const {
  if (kind_ == Kind::Steps) {
    double m = 0.0;
    for (double v : values_) m = std::max(m, std::fabs(v));
    return m;
  }
  double m = 0.0;
  constexpr int probes = 8192;
  for (int q = 0; q < probes; ++q) m = std::max(m, std::fabs((*this)(static_cast<double>(q) / probes)));
  return m;
}

double FieldSpec::g_at(Point x) const {
  double v = 0.0;
  for (const auto& term : g) {
    const double phase = kTwoPi * (term.k1 * x.x1 + term.k2 * x.x2);
    v += term.c.real() * std::cos(phase) - term.c.imag() * std::sin(phase);
  }
  return v;
}

Gradient FieldSpec::grad_g(Point x) const {
  Gradient d;
  for (const auto& term : g) {
    const double phase = kTwoPi * (term.k1 * x.x1 + term.k2 * x.x2);
    // d/dx Re(c e^{i phase}) = Re(i c e^{i phase}) * dphase/dx
    const double w = -(term.c.real() * std::sin(phase) + term.c.imag() * std::cos(phase));
    d.d1 += w * kTwoPi * term.k1;
    d.d2 += w * kTwoPi * term.k2;
  }
  return d;
}

Gradient FieldSpec::grad_h(Point x) const {
  const Gradient d = grad_g(x);
  return {1.0 + eps0 * d.d1, eps0 * d.d2};
}

double FieldSpec::g_bound() const {
  double b = 0.0;
  for (const auto& term : g) b += std::abs(term.c);
  return b;
}

double FieldSpec::grad_g_bound() const {
  double b = 0.0;
  for (const auto& term : g) b += kTwoPi * std::abs(term.c) * std::hypot(term.k1, term.k2);
  return b;
}

bool FieldSpec::g_depends_on_x1() const {
  for (const auto& term : g)
    if (term.k1 != 0 && term.c != cplx(0.0)) return true;
  return false;
}

void FieldSpec::validate(int probes_per_axis) const {
  if (!(eps0 >= 0.0 && eps0 <= 0.1)) throw ConfigError("eps0 must lie in [0, 0.1]");
  for (const auto& term : g)
    if (!std::isfinite(term.c.real()) || !std::isfinite(term.c.imag()))
      throw ConfigError("g coefficients must be finite");
  if (u.sup_norm() > 1.0 + 1e-12) throw ConfigError("slope function must satisfy |u| <= 1");
  if (eps0 == 0.0 || g.empty()) return;
  double worst = 0.0;
  const double step = 1.0 / probes_per_axis;
  for (int i = 0; i < probes_per_axis; ++i)
    for (int j = 0; j < probes_per_axis; ++j) {
      const Gradient d = grad_g({i * step, j * step});
      worst = std::max(worst, std::hypot(d.d1, d.d2));
    }
  if (eps0 * worst > eps0 * (1.0 + 1e-9))
    throw ConfigError("|grad h - (1,0)| exceeds eps0: |grad g| reaches " + std::to_string(worst));
}

FieldSpec FieldSpec::from_json_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("field spec: ") + e.what());
  }
  try {
    FieldSpec spec;
    spec.eps0 = j.value("eps0", 0.05);
    spec.g.clear();
    if (j.contains("g_coeffs")) {
      for (const auto& row : j.at("g_coeffs")) {
        if (!row.is_array() || row.size() != 4) throw ConfigError("g_coeffs rows must be [k1, k2, re, im]");
        spec.g.push_back({row[0].get<int>(), row[1].get<int>(), cplx(row[2].get<double>(), row[3].get<double>())});
      }
    }
    if (j.contains("u")) {
      const auto& u = j.at("u");
      const std::string type = u.at("type").get<std::string>();
      const auto& data = u.at("data");
      if (type == "steps") {
        spec.u = SlopeFunction::steps(data.at("breaks").get<std::vector<double>>(),
                                      data.at("values").get<std::vector<double>>());
      } else if (type == "smooth") {
        if (data.is_number()) {
          spec.u = SlopeFunction::constant(data.get<double>());
        } else {
          spec.u = SlopeFunction::smooth(data.value("const", 0.0),
                                         data.value("cos", std::vector<double>{}),
                                         data.value("sin", std::vector<double>{}));
        }
      } else {
        throw ConfigError("u.type must be 'smooth' or 'steps'");
      }
    }
    return spec;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("field spec: ") + e.what());
  }
}

std::string FieldSpec::to_json_text() const {
  json j;
  j["eps0"] = eps0;
  json rows = json::array();
  for (const auto& term : g) rows.push_back({term.k1, term.k2, term.c.real(), term.c.imag()});
  j["g_coeffs"] = rows;
  if (u.piecewise_constant()) {
    j["u"] = {{"type", "steps"}, {"data", {{"breaks", u.breaks()}, {"values", u.values()}}}};
  } else {
    j["u"] = {{"type", "smooth"},
              {"data", {{"const", u.c0()}, {"cos", u.cos_coeffs()}, {"sin", u.sin_coeffs()}}}};
  }
  return j.dump();
}

FieldSpec sinusoidal_field(double eps0, SlopeFunction u, int frequency) {
  if (frequency < 1) throw ConfigError("sinusoidal_field: frequency must be >= 1");
  FieldSpec spec;
  spec.eps0 = eps0;
  spec.g = {{0, frequency, cplx(0.0, -1.0 / (kTwoPi * frequency))}};
  spec.u = std::move(u);
  return spec;
}

FieldSpec one_variable_field(SlopeFunction u) {
  FieldSpec spec;
  spec.eps0 = 0.0;
  spec.u = std::move(u);
  return spec;
}

Point vector_at(const FieldSpec& spec, Point x) { return {1.0, spec.u(spec.h(x))}; }

namespace {

/// Root of a strictly increasing function on [lo, hi] by Newton steps that
/// fall back to bisection whenever they leave the bracket.
template <class F, class DF>
double monotone_root(F&& f, DF&& df, double lo, double hi, double x0) {
  double flo = f(lo);
  double fhi = f(hi);
  if (flo > 0.0 || fhi < 0.0) {
    // Widen once: guards rounding at the bracket ends.
    const double pad = 1e-9 + 1e-6 * (hi - lo);
    lo -= pad;
    hi += pad;
    flo = f(lo);
    fhi = f(hi);
    if (flo > 0.0 || fhi < 0.0) throw NumericalError("root bracket does not enclose a sign change");
  }
  double x = std::clamp(x0, lo, hi);
  for (int iter = 0; iter < 100; ++iter) {
    const double fx = f(x);
    if (fx == 0.0) return x;
    if (fx < 0.0) lo = x; else hi = x;
    const double d = df(x);
    double next = x - fx / d;
    if (!(next > lo && next < hi) || !std::isfinite(next)) next = 0.5 * (lo + hi);
    if (std::fabs(next - x) <= 1e-15 * std::max(1.0, std::fabs(x)) || hi - lo <= 1e-15) {
      return next;
    }
    if (std::fabs(fx) <= 1e-14 && std::fabs(next - x) <= 1e-12) return next;
    x = next;
  }
  throw NumericalError("root finder did not converge within 100 iterations");
}

}  // namespace

double level_x1(const FieldSpec& spec, double t, double x2) {
  if (spec.eps0 == 0.0 || spec.g.empty()) return t;
  const double r = spec.eps0 * spec.g_bound();
  auto f = [&](double x1) { return x1 + spec.eps0 * spec.g_at({x1, x2}) - t; };
  auto df = [&](double x1) { return 1.0 + spec.eps0 * spec.grad_g({x1, x2}).d1; };
  return monotone_root(f, df, t - r, t + r, t - spec.eps0 * spec.g_at({t, x2}));
}

LevelCurve level_curve(const FieldSpec& spec, double t, int n_samples) {
  if (n_samples < 16) throw ConfigError("level_curve: n_samples must be at least 16");
  LevelCurve c;
  c.t = t;
  c.x2.resize(n_samples);
  c.x1.resize(n_samples);
  for (int q = 0; q < n_samples; ++q) {
    c.x2[q] = static_cast<double>(q) / n_samples;
    c.x1[q] = level_x1(spec, t, c.x2[q]);
  }
  const double u = spec.u(t);
  c.v_t = {1.0, u};
  const double norm = std::hypot(u, 1.0);
  c.v_t_perp = {-u / norm, 1.0 / norm};
  return c;
}

double h_t_eval(const FieldSpec& spec, double t, Point z) {
  const double u = spec.u(t);
  const double d0 = z.x1 - t;
  if (spec.eps0 == 0.0 || spec.g.empty()) return d0;
  const double r = spec.eps0 * spec.g_bound();
  // phi(d) = t - h(z - d v_t) is increasing in d.
  auto f = [&](double d) { return t - spec.h({z.x1 - d, z.x2 - d * u}); };
  auto df = [&](double d) {
    const Gradient gh = spec.grad_h({z.x1 - d, z.x2 - d * u});
    return gh.d1 + u * gh.d2;
  };
  return monotone_root(f, df, d0 - r, d0 + r, d0 + spec.eps0 * spec.g_at(z));
}

Point curve_point_at_b(const FieldSpec& spec, double t, double b) {
  const double u = spec.u(t);
  if (spec.eps0 == 0.0 || spec.g.empty()) return {t, b + u * t};
  const double r = spec.eps0 * spec.g_bound();
  auto f = [&](double y1) { return spec.h({y1, b + u * y1}) - t; };
  auto df = [&](double y1) {
    const Gradient gh = spec.grad_h({y1, b + u * y1});
    return gh.d1 + u * gh.d2;
  };
  const double y1 = monotone_root(f, df, t - r, t + r, t);
  return {y1, b + u * y1};
}

Point Rect::long_dir() const {
  const double norm = std::hypot(1.0, slope);
  return {1.0 / norm, slope / norm};
}

Point Rect::short_dir() const {
  const double norm = std::hypot(1.0, slope);
  return {-slope / norm, 1.0 / norm};
}

bool Rect::contains_plane(Point x) const {
  const Point e = long_dir();
  const Point w = short_dir();
  const double d1 = x.x1 - center.x1;
  const double d2 = x.x2 - center.x2;
  const double a = d1 * e.x1 + d2 * e.x2;
  const double b = d1 * w.x1 + d2 * w.x2;
  return std::fabs(a) <= 0.5 * length && std::fabs(b) <= 0.5 * width;
}

Point Rect::unwrap(Point x) const {
  return {center.x1 + wrap_half(x.x1 - center.x1), center.x2 + wrap_half(x.x2 - center.x2)};
}

bool Rect::contains(Point x) const { return contains_plane(unwrap(x)); }

std::vector<Point> Rect::corners() const {
  const Point e = long_dir();
  const Point w = short_dir();
  std::vector<Point> out;
  for (int sa : {-1, 1})
    for (int sb : {-1, 1})
      out.push_back({center.x1 + 0.5 * sa * length * e.x1 + 0.5 * sb * width * w.x1,
                     center.x2 + 0.5 * sa * length * e.x2 + 0.5 * sb * width * w.x2});
  return out;
}

AdaptedRect::AdaptedRect(const FieldSpec& spec, const Rect& rect) : spec_(spec), rect_(rect) {
  const auto c = rect.corners();
  // Corner order: (-,-), (-,+), (+,-), (+,+); walk the boundary.
  const Point ring[5] = {c[0], c[2], c[3], c[1], c[0]};
  constexpr int per_side = 256;
  h_lo_ = std::numeric_limits<double>::infinity();
  h_hi_ = -h_lo_;
  double max_side = std::max(rect.length, rect.width);
  for (int s = 0; s < 4; ++s)
    for (int q = 0; q <= per_side; ++q) {
      const double a = static_cast<double>(q) / per_side;
      const Point p{ring[s].x1 + a * (ring[s + 1].x1 - ring[s].x1),
                    ring[s].x2 + a * (ring[s + 1].x2 - ring[s].x2)};
      const double hv = spec.h(p);
      h_lo_ = std::min(h_lo_, hv);
      h_hi_ = std::max(h_hi_, hv);
    }
  double curvature = 0.0;
  for (const auto& term : spec.g)
    curvature += std::abs(term.c) * kTwoPi * kTwoPi * (term.k1 * term.k1 + term.k2 * term.k2);
  const double spacing = max_side / per_side;
  const double pad = spec.eps0 * curvature * spacing * spacing / 8.0 + 1e-12;
  h_lo_ -= pad;
  h_hi_ += pad;
  slab_half_ = 0.5 * rect.width * std::hypot(1.0, rect.slope);
}

bool AdaptedRect::contains(Point x) const {
  const Point y = rect_.unwrap(x);
  const double hv = spec_.h(y);
  if (hv < h_lo_ || hv > h_hi_) return false;
  const double off = y.x2 - rect_.center.x2 - rect_.slope * (y.x1 - rect_.center.x1);
  return std::fabs(off) <= slab_half_ + 1e-12;
}

AdaptedRect adapted_rectangle(const FieldSpec& spec, const Rect& rect) {
  if (!(rect.slope >= -1.0 && rect.slope <= 1.0))
    throw ConfigError("adapted_rectangle: long-side slope must lie in [-1, 1]");
  return AdaptedRect(spec, rect);
}

}  // namespace lh

namespace lh {

SlopePieces slope_pieces(const FieldSpec& spec, int n) {
  if (!spec.u.piecewise_constant()) throw ConfigError("slope_pieces: u must be piecewise constant");
  SlopePieces out;
  std::vector<int> value_of_piece;
  for (double v : spec.u.values()) {
    auto it = std::find(out.values.begin(), out.values.end(), v);
    if (it == out.values.end()) {
      value_of_piece.push_back(static_cast<int>(out.values.size()));
      out.values.push_back(v);
    } else {
      value_of_piece.push_back(static_cast<int>(it - out.values.begin()));
    }
  }
  out.label.resize(static_cast<std::size_t>(n) * n);
  parallel_for(n, [&](std::int64_t i) {
    for (int j = 0; j < n; ++j) {
      const double t = spec.h({static_cast<double>(i) / n, static_cast<double>(j) / n});
      out.label[static_cast<std::size_t>(i) * n + j] = value_of_piece[spec.u.piece(t)];
    }
  });
  return out;
}

}  // namespace lh
