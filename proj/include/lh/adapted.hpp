#pragma once

#include <functional>
#include <memory>
#include <vector>

#include "lh/bumps.hpp"
#include "lh/fields.hpp"
#include "lh/grid.hpp"

namespace lh {

/// Adapted projections along the level curves of h.
///
/// In the coordinates b = y2 - u(t) y1 (constant along v_t) and d = h_t(y) the
/// plane measure is db dd, so the projection reduces to a periodic convolution in b:
///   Ptilde_k f(x) = sum_m profile_k(m) F_t^(m) exp(2 pi i m b(x)),  F_t(b) = f(p_t(b)),
/// where p_t(b) is the point of the level set {h = t} with coordinate b and t = h(x).
class AdaptedProjector {
 public:
  enum class Path { Auto, Fast, General };

  AdaptedProjector(const FieldSpec& spec, int n, Path path = Path::Auto);
  ~AdaptedProjector();
  AdaptedProjector(AdaptedProjector&&) noexcept;
  AdaptedProjector& operator=(AdaptedProjector&&) noexcept;

  int n() const { return n_; }
  const FieldSpec& spec() const { return spec_; }
  /// Fast path: g independent of x1 and u piecewise constant (exact level-curve
  /// change of variables evaluated with two dense products per slope value).
  bool fast() const { return path_ == Path::Fast; }

  GridFunction apply(const GridFunction& f, int k, AdaptedProfile profile) const;
  GridFunction adjoint(const GridFunction& g, int k, AdaptedProfile profile) const;

 private:
  struct FastData;
  GridFunction apply_general(const GridFunction& f, int k, AdaptedProfile profile) const;
  GridFunction adjoint_general(const GridFunction& g, int k, AdaptedProfile profile) const;
  GridFunction fast_pass(const GridFunction& f, int k, AdaptedProfile profile, bool adjoint) const;

  FieldSpec spec_;
  int n_ = 0;
  Path path_ = Path::General;
  std::unique_ptr<FastData> fast_;
};

/// Ptilde_k f at points of a single level curve {h = t}, given by their b coordinates.
/// f is any evaluator on the plane; samples is the number of uniform b nodes.
std::vector<cplx> adapted_on_curve(const FieldSpec& spec, const std::function<cplx(Point)>& f, double t,
                                   const std::vector<double>& b_values, int k, AdaptedProfile profile,
                                   int samples);

/// Largest k accepted at grid size n (2^k <= n / 4).
int adapted_k_max(int n);

}  // namespace lh
