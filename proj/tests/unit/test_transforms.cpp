#include <cmath>

#include "doctest.h"
#include "lh/quadrature.hpp"
#include "lh/transforms.hpp"

using namespace lh;

namespace {

FieldSpec sinusoidal_steps() {
  return sinusoidal_field(0.05, SlopeFunction::steps({0.0, 0.5}, {0.25, -0.375}));
}

double rel(const GridFunction& a, const GridFunction& b) { return l2_norm(a - b) / l2_norm(b); }

}  // namespace

TEST_CASE("vertical LP pieces telescope back to the input") {
  for (int n : {32, 128}) {
    const GridFunction f = random_bandlimited(7, n, {}, {0, ilog2(n) - 3});
    const LPRange r = lp_range(n);
    CHECK(r.k_min == 0);
    CHECK(r.k_max == ilog2(n) - 2);
    GridFunction sum(n);
    for (int k = r.k_min; k <= r.k_max; ++k) sum += P_k(f, k);
    CHECK(l2_norm(sum - f) < 1e-12);
  }
}

TEST_CASE("cone projection is idempotent and kills the cone exterior") {
  GridFunction f(32);
  for (std::size_t i = 0; i < f.size(); ++i) f.values()[i] = std::sin(0.37 * i) + cplx(0.0, std::cos(1.3 * i));
  const GridFunction c = cone_project(f);
  CHECK(l2_norm(cone_project(c) - c) < 1e-14);
  const Spectrum s = forward(c);
  for (int a = -16; a < 16; ++a)
    for (int b = -16; b < 16; ++b)
      if (std::abs(a) > std::abs(b) || b == 0) CHECK(std::abs(s.at(a, b)) < 1e-15);
}

TEST_CASE("H_v with v = (1, 0) is an isometry on mean-zero lines") {
  const FieldOperators ops(one_variable_field(SlopeFunction::constant(0.0)), 64);
  RandomOptions opts;
  opts.zero_mean_lines = true;
  for (int t = 0; t < 4; ++t) {
    const GridFunction f = random_bandlimited(100 + t, 64, {}, {1, 3}, opts);
    CHECK(l2_norm(ops.H_v(f)) == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("H_v of a constant slope is the sign multiplier") {
  const double u = 0.3;
  const FieldOperators ops(one_variable_field(SlopeFunction::constant(u)), 32);
  const GridFunction f = random_bandlimited(4, 32, {}, {1, 3});
  const GridFunction expect =
      multiplier_apply(f, [u](int a, int b) { return cplx(a + u * b > 0.0 ? 1.0 : -1.0); });
  CHECK(l2_norm(ops.H_v(f) - expect) < 1e-13);
}

TEST_CASE("one-variable H_v commutes with P_k") {
  const FieldOperators ops(one_variable_field(SlopeFunction::steps({0.0, 0.3, 0.7}, {0.25, -0.5, 0.75})), 64);
  const GridFunction f = random_bandlimited(8, 64, {}, {1, 4});
  const GridFunction hf = ops.H_v(f);
  for (int k = 0; k <= 4; ++k) CHECK(l2_norm(ops.H_v(P_k(f, k)) - P_k(hf, k)) < 1e-13);
}

TEST_CASE("adjoints pair correctly") {
  const auto check_pair = [](const auto& apply, const auto& adjoint, std::uint64_t seed, int n) {
    const GridFunction f = random_bandlimited(seed, n, {}, {1, 3});
    const GridFunction g = random_bandlimited(seed + 1, n, {}, {1, 3});
    const cplx lhs = inner(apply(f), g);
    const cplx rhs = inner(f, adjoint(g));
    CHECK(std::abs(lhs - rhs) < 1e-12);
  };
  const FieldOperators ops(sinusoidal_steps(), 32);
  check_pair([&](const GridFunction& f) { return ops.H_v(f); },
             [&](const GridFunction& g) { return ops.H_v_adjoint(g); }, 1, 32);
  for (int k = 0; k <= 3; ++k)
    check_pair([&](const GridFunction& f) { return ops.Ptilde(f, k); },
               [&](const GridFunction& g) { return ops.Ptilde_adjoint(g, k); }, 10 + k, 32);
  check_pair([&](const GridFunction& f) { return ops.commutator_term(f, 1); },
             [&](const GridFunction& g) { return ops.commutator_term_adjoint(g, 1); }, 20, 32);
  check_pair([&](const GridFunction& f) { return ops.main_term(f); },
             [&](const GridFunction& g) { return ops.main_term_adjoint(g); }, 30, 32);
}

TEST_CASE("fast and general adapted paths agree") {
  const FieldSpec spec = sinusoidal_steps();
  const AdaptedProjector fast(spec, 32, AdaptedProjector::Path::Fast);
  const AdaptedProjector general(spec, 32, AdaptedProjector::Path::General);
  CHECK(fast.fast());
  CHECK_FALSE(general.fast());
  const GridFunction f = random_bandlimited(5, 32, {}, {1, 3});
  for (int k = 1; k <= 3; ++k) {
    CHECK(rel(fast.apply(f, k, AdaptedProfile::Partition), general.apply(f, k, AdaptedProfile::Partition)) < 1e-5);
    CHECK(rel(fast.adjoint(f, k, AdaptedProfile::Reproducing),
              general.adjoint(f, k, AdaptedProfile::Reproducing)) < 1e-5);
  }
}

TEST_CASE("adapted projection with a flat field is the vertical multiplier") {
  const FieldOperators ops(one_variable_field(SlopeFunction::constant(0.0)), 32);
  const GridFunction f = random_bandlimited(3, 32, {}, {1, 3});
  for (int k = 0; k <= 3; ++k) CHECK(l2_norm(ops.Ptilde(f, k) - P_k(f, k)) < 1e-13);
}

TEST_CASE("main term, remainder and commutators reassemble sum_k H_v P_k") {
  const int n = 32;
  const FieldOperators ops(sinusoidal_steps(), n);
  const GridFunction f = cone_project(random_bandlimited(6, n, {}, {1, 3}));
  GridFunction split = ops.main_term(f) + ops.lp_remainder(f);
  for (int l = -2; l <= ilog2(n); ++l) split.axpy(2.0, ops.commutator_term(f, l));
  GridFunction direct(n);
  for (const GridFunction& band : ops.hilbert_bands(f)) direct += band;
  CHECK(rel(split, direct) < 1e-6);
}

TEST_CASE("quadrature H_l matches the spectral engine") {
  const FieldSpec spec = sinusoidal_steps();
  const FieldOperators ops(spec, 16);
  const GridFunction f = random_bandlimited(2, 16, {}, {1, 2});
  CHECK(rel(H_l_quadrature(f, spec, 1), ops.H_l(f, 1)) < 1e-5);
}

TEST_CASE("Carleson fiber norm equals ||H_v f||") {
  const FieldSpec spec = one_variable_field(SlopeFunction::steps({0.0, 0.5}, {0.4142, -0.366}));
  const GridFunction f = cone_project(random_bandlimited(1, 64, {}, {1, 3}));
  CHECK(carleson_identity_gap(f, spec) < 1e-6);
  CHECK_THROWS_AS(carleson_identity_gap(f, sinusoidal_steps()), ConfigError);
}

TEST_CASE("operator guards") {
  CHECK_THROWS_AS(FieldOperators(sinusoidal_field(0.05, SlopeFunction::smooth(0.0, {0.2}, {})), 32,
                                 {HEngine::Spectral}),
                  ConfigError);
  const FieldOperators ops(sinusoidal_steps(), 32);
  CHECK_THROWS_AS(ops.commutator_term(GridFunction(32), -3), ConfigError);
  CHECK_THROWS_AS(ops.Ptilde(GridFunction(32), 4), ConfigError);
  CHECK_THROWS_AS(ops.H_v(GridFunction(64)), ConfigError);
  CHECK_THROWS_AS(P_omega(GridFunction(32), DyadicInterval{1, 9}), ConfigError);
}
