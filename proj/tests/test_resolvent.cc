#include <doctest.h>

#include <cmath>
#include <complex>
#include <random>

#include "../src/core/bessel.hh"
#include "../src/core/dense.hh"
#include "../src/core/errors.hh"
#include "../src/core/grid.hh"
#include "../src/core/potential.hh"
#include "../src/core/resolvent.hh"
#include "../src/core/symbol.hh"
#include "oracles.hh"

using namespace sh;

namespace {

GridFunction gaussian_rhs(const GridSpec& g, double width) {
  return from_function(g, [width](const std::array<double, 3>& x) {
    double e = 0;
    for (double xi : x) e += xi * xi;
    return cd(std::exp(-e / (2 * width * width)), 0.0);
  });
}

double rel_l2_diff(const GridFunction& a, const GridFunction& b) {
  std::vector<cd> d(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) d[i] = a[i] - b[i];
  const GridFunction diff(a.spec(), std::move(d));
  return lp_norm(diff, 2.0) / std::max(lp_norm(b, 2.0), 1e-300);
}

}  // namespace

TEST_CASE("spectrum distance to the positive half-line") {
  CHECK(spectrum_distance(cd(-1.0, 0.0)) == doctest::Approx(1.0));
  CHECK(spectrum_distance(cd(3.0, 4.0)) == doctest::Approx(4.0));
  CHECK(spectrum_distance(cd(-3.0, 4.0)) == doctest::Approx(5.0));
  CHECK_NOTHROW(check_spectral_point(cd(-1.0, 0.0)));
  CHECK_THROWS_AS(check_spectral_point(cd(2.0, 0.0)), Error);
}

TEST_CASE("free resolvent at z = -1 is minus the order-2 smoothing kernel") {
  // (-1 - xi^2)^{-1} and -(1 + xi^2)^{-1} are the same lattice multiplier.
  const GridSpec g = make_grid(1, 8.0, 256);
  const EllipticSymbol P = polyharmonic_symbol(1, 1);
  const GridFunction u = free_resolvent(P, cd(-1.0, 0.0), delta_at(g, {0, 0, 0}));
  const GridFunction k = bessel_kernel(make_bessel(2.0, 1.0), g);
  for (std::size_t i = 0; i < u.size(); ++i) CHECK(std::abs(u[i] + k[i]) < 1e-12);
  // Which in turn matches the continuum Green function e^{-|x|}/2 away
  // from the box edge.
  std::array<long, 3> idx{long((1.0 + g.r_box) / g.h), 0, 0};
  CHECK(-u[flatten(g, idx)].real() ==
        doctest::Approx(oracle::resolvent_green_1d(1.0)).epsilon(1e-3));
}

TEST_CASE("free resolvent norm saturates the lattice distance bound") {
  const GridSpec g = make_grid(1, 8.0, 64);
  const EllipticSymbol P = polyharmonic_symbol(1, 1);
  std::mt19937 eng(42);
  std::uniform_real_distribution<double> re(-4.0, 4.0), im(0.3, 3.0);
  for (int trial = 0; trial < 10; ++trial) {
    const cd z(re(eng), im(eng));
    // sup over lattice frequencies of |z - P(xi)|^{-1} and its argmax.
    double best = 0.0;
    std::array<long, 3> best_idx{0, 0, 0};
    for (long i = 0; i < g.npoints; ++i) {
      std::array<long, 3> idx{i, 0, 0};
      const double v = 1.0 / std::abs(z - eval_symbol(P, frequency(g, idx)));
      if (v > best) {
        best = v;
        best_idx = idx;
      }
    }
    const auto xi = frequency(g, best_idx);
    const GridFunction mode = from_function(g, [&](const std::array<double, 3>& x) {
      return std::exp(cd(0.0, xi[0] * x[0]));
    });
    const GridFunction u = free_resolvent(P, z, mode);
    CHECK(lp_norm(u, 2.0) / lp_norm(mode, 2.0) == doctest::Approx(best).epsilon(1e-10));
  }
}

TEST_CASE("z on a lattice symbol value is a spectrum hit") {
  const GridSpec g = make_grid(1, 8.0, 64);
  const EllipticSymbol P = polyharmonic_symbol(1, 1);
  std::array<long, 3> idx{g.npoints / 2 + 3, 0, 0};
  const cd z(eval_symbol(P, frequency(g, idx)), 0.0);
  try {
    free_resolvent(P, z, gaussian_rhs(g, 1.0));
    FAIL("expected spectrum_hit");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::spectrum_hit);
  }
}

TEST_CASE("neumann series agrees with the dense solve") {
  const GridSpec g = make_grid(1, 8.0, 64);
  const EllipticSymbol P = polyharmonic_symbol(1, 1);
  const PotentialSpec V = make_shifted_power_potential(-3.0, -1, 0.3);
  const GridFunction f = gaussian_rhs(g, 1.5);
  const cd z(-1.0, 0.0);
  const ResolventResult res = perturbed_resolvent(P, V, z, f, 1e-12, 300);
  CHECK(res.diag.converged);
  CHECK(res.diag.residual < 1e-9);
  CHECK(res.diag.contraction_estimate < 0.9);
  const GridFunction ud = dense_solve(P, V, z, f);
  CHECK(rel_l2_diff(res.u, ud) < 1e-8);
}

TEST_CASE("a too-strong coupling reports divergence instead of lying") {
  const GridSpec g = make_grid(1, 8.0, 64);
  const EllipticSymbol P = polyharmonic_symbol(1, 1);
  const PotentialSpec V = make_constant_potential(-1, 5.0);
  const ResolventResult res =
      perturbed_resolvent(P, V, cd(-1.0, 0.0), gaussian_rhs(g, 1.5), 1e-10, 60);
  CHECK_FALSE(res.diag.converged);
  CHECK(res.diag.contraction_estimate > 1.0);
}

TEST_CASE("resolvent identity on the free and perturbed routes") {
  const GridSpec g = make_grid(1, 8.0, 64);
  const EllipticSymbol P = polyharmonic_symbol(1, 1);
  const GridFunction f = gaussian_rhs(g, 1.2);
  const cd z1(-1.0, 0.0), z2(-2.0, 0.5);

  const GridFunction r1 = free_resolvent(P, z1, f);
  const GridFunction r2 = free_resolvent(P, z2, f);
  const GridFunction r12 = free_resolvent(P, z1, r2);
  GridFunction lhs = add(r1, scale(r2, -1.0));
  GridFunction rhs = scale(r12, z2 - z1);
  CHECK(rel_l2_diff(lhs, rhs) < 1e-11);

  const PotentialSpec V = make_shifted_power_potential(-2.0, -1, 0.2);
  const GridFunction p1 = perturbed_resolvent(P, V, z1, f, 1e-12, 300).u;
  const GridFunction p2 = perturbed_resolvent(P, V, z2, f, 1e-12, 300).u;
  const GridFunction p12 = perturbed_resolvent(P, V, z1, p2, 1e-12, 300).u;
  lhs = add(p1, scale(p2, -1.0));
  rhs = scale(p12, z2 - z1);
  CHECK(rel_l2_diff(lhs, rhs) < 1e-8);
}

TEST_CASE("resolvent powers stack single solves") {
  const GridSpec g = make_grid(1, 8.0, 64);
  const EllipticSymbol P = polyharmonic_symbol(1, 1);
  const PotentialSpec V = make_shifted_power_potential(-2.0, -1, 0.2);
  const GridFunction f = gaussian_rhs(g, 1.2);
  const cd z(-1.5, 0.8);

  const ResolventResult once = perturbed_resolvent(P, V, z, f, 1e-12, 300);
  const ResolventResult k1 = resolvent_power(P, V, z, f, 1, 1e-12, 300);
  CHECK(rel_l2_diff(k1.u, once.u) < 1e-13);

  const ResolventResult twice = perturbed_resolvent(P, V, z, once.u, 1e-12, 300);
  const ResolventResult k2 = resolvent_power(P, V, z, f, 2, 1e-12, 300);
  CHECK(rel_l2_diff(k2.u, twice.u) < 1e-12);
}

TEST_CASE("imaginary lattice shifts conjugate the resolvent exactly") {
  const GridSpec g = make_grid(1, 8.0, 64);
  const EllipticSymbol P = polyharmonic_symbol(1, 1);
  const GridFunction f = gaussian_rhs(g, 1.2);
  const double theta = oracle::pi / g.r_box;  // one frequency step
  const ComplexShift eta{cd(0.0, theta), cd(0, 0), cd(0, 0)};

  CHECK(conjugation_residual(P, make_constant_potential(1, 0.0), cd(-2.0, 0.0), eta, f) < 1e-9);
  CHECK(conjugation_residual(P, make_constant_potential(-1, 0.25), cd(-2.0, 0.0), eta, f,
                             1e-12, 300) < 1e-8);
}

TEST_CASE("off-lattice or real shifts are rejected as non-periodic") {
  const GridSpec g = make_grid(1, 8.0, 64);
  const EllipticSymbol P = polyharmonic_symbol(1, 1);
  const GridFunction f = gaussian_rhs(g, 1.2);
  const PotentialSpec zero = make_constant_potential(1, 0.0);
  try {
    const ComplexShift eta{cd(0.0, 0.37), cd(0, 0), cd(0, 0)};
    conjugation_residual(P, zero, cd(-2.0, 0.0), eta, f);
    FAIL("expected non_periodic_shift");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::non_periodic_shift);
  }
  try {
    const ComplexShift eta{cd(0.4, 0.0), cd(0, 0), cd(0, 0)};
    conjugation_residual(P, zero, cd(-2.0, 0.0), eta, f);
    FAIL("expected non_periodic_shift");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::non_periodic_shift);
  }
}

TEST_CASE("contraction factor vanishes for V = 0 and decays in |z|") {
  const GridSpec g = make_grid(1, 8.0, 128);
  const EllipticSymbol P = polyharmonic_symbol(1, 1);
  CHECK(contraction_factor(P, make_constant_potential(1, 0.0), cd(-1, 0), 1.0, 2, 2, g) == 0.0);
  const PotentialSpec V = make_shifted_power_potential(-3.0, -1, 0.3);
  const double near = contraction_factor(P, V, cd(-1.0, 0.0), 1.0, 2, 2, g);
  const double far = contraction_factor(P, V, cd(-100.0, 0.0), 1.0, 2, 2, g);
  CHECK(near > 0.0);
  CHECK(far < near);
}
