// Acceptance gate: nine independent checks, one printed line each, with the
// tolerances pinned as constants below. Exit code 0 iff every line is PASS.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <functional>
#include <limits>
#include <random>
#include <string>
#include <vector>

#include "../src/core/bessel.hh"
#include "../src/core/dense.hh"
#include "../src/core/errors.hh"
#include "../src/core/fit.hh"
#include "../src/core/grid.hh"
#include "../src/core/heat.hh"
#include "../src/core/potential.hh"
#include "../src/core/resolvent.hh"
#include "../src/core/schechter.hh"
#include "../src/core/symbol.hh"
#include "../src/core/t_operator.hh"

using namespace sh;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// criterion 1: route agreement
constexpr double kRouteRel = 1e-6;
constexpr double kRouteCaseSeconds = 60.0;
// criterion 2: envelope window for the second-order free kernel
constexpr double kEnvelopeCLo = 0.2;
constexpr double kEnvelopeCHi = 0.25;
// criterion 3: increment slope floor and budget
constexpr double kHolderSlopeMin = 0.5;
constexpr double kHolderSeconds = 600.0;
// criterion 4: off-diagonal decay
constexpr double kDgSlopeRef = 0.25;
constexpr double kDgSlopeRelTol = 0.20;
constexpr double kDgR2Min = 0.99;
constexpr double kDgLocalR2Min = 0.95;
// criterion 5 and 6: closed-form exponents
constexpr double kExponentRelTol = 0.05;
// criterion 7: bound ordering
constexpr double kOrderRatioMax = 2.0;
constexpr double kOrderSlopeDeficit = 0.1;
// criterion 8: resolvent suite
constexpr double kLatticeBoundTol = 1e-10;
constexpr double kDenseRelTol = 1e-8;
constexpr double kNeumannTol = 1e-10;
constexpr double kConjFreeTol = 1e-9;
// criterion 9: whole-suite budget
constexpr double kTotalSeconds = 1800.0;

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

GridFunction gaussian_bump(const GridSpec& g, double width) {
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
  const double den = lp_norm(b, 2.0);
  return den > 0 ? lp_norm(diff, 2.0) / den : lp_norm(diff, 2.0);
}

std::vector<double> log_spaced(double lo, double hi, int count) {
  std::vector<double> out;
  for (int i = 0; i < count; ++i)
    out.push_back(lo * std::pow(hi / lo, double(i) / double(count - 1)));
  return out;
}

std::string fmt(const char* f, double a, double b = 0, double c = 0) {
  char buf[160];
  std::snprintf(buf, sizeof buf, f, a, b, c);
  return buf;
}

LinearFit loglog_fit(const std::vector<double>& xs, const std::vector<double>& ys) {
  std::vector<double> lx, ly;
  for (std::size_t i = 0; i < xs.size(); ++i)
    if (ys[i] > 0) {
      lx.push_back(std::log(xs[i]));
      ly.push_back(std::log(ys[i]));
    }
  return linear_fit(lx, ly);
}

// 1. Contour quadrature against the spectral multiplier (V = 0) and the
// dense eigensolver (V != 0), timed per case.
bool criterion_routes(std::string& note) {
  bool ok = true;
  double worst = 0, slowest = 0;
  const PotentialSpec zero = make_constant_potential(1, 0.0);
  {
    const GridSpec g = make_grid(1, 16.0, 256);
    const GridFunction f = gaussian_bump(g, 1.0);
    for (int m : {1, 2}) {
      const EllipticSymbol P = polyharmonic_symbol(m, 1);
      for (double t : {0.1, 0.5, 1.0}) {
        const auto t0 = Clock::now();
        const GridFunction us = semigroup_apply(P, zero, t, f, HeatMethod::spectral);
        const GridFunction uc = semigroup_apply(P, zero, t, f, HeatMethod::contour);
        const double rel = rel_l2_diff(uc, us);
        const double secs = seconds_since(t0);
        worst = std::max(worst, rel);
        slowest = std::max(slowest, secs);
        ok &= rel <= kRouteRel && secs <= kRouteCaseSeconds;
      }
    }
  }
  {
    const GridSpec g = make_grid(1, 8.0, 64);
    const EllipticSymbol P = polyharmonic_symbol(1, 1);
    const PotentialSpec V = make_shifted_power_potential(-3.0, -1, 0.3);
    const GridFunction f = gaussian_bump(g, 1.5);
    for (double t : {0.1, 0.5, 1.0}) {
      const auto t0 = Clock::now();
      const GridFunction ud = semigroup_apply(P, V, t, f, HeatMethod::dense);
      const GridFunction uc = semigroup_apply(P, V, t, f, HeatMethod::contour);
      const double rel = rel_l2_diff(uc, ud);
      const double secs = seconds_since(t0);
      worst = std::max(worst, rel);
      slowest = std::max(slowest, secs);
      ok &= rel <= kRouteRel && secs <= kRouteCaseSeconds;
    }
  }
  note = fmt("max rel %.2e, slowest case %.1f s", worst, slowest);
  return ok;
}

// 2. Gaussian envelope feasibility: order-2 free kernel pins c in
// [0.2, 0.25] at exponent 2; order-4 admits the 4/3 envelope; a mild
// attractive well stays feasible without local growth. Zero violations.
bool criterion_envelope(std::string& note) {
  bool ok = true;
  const GridSpec g = make_grid(1, 16.0, 256);
  const PotentialSpec zero = make_constant_potential(1, 0.0);
  const std::vector<double> ts = {0.5, 1.0, 2.0};

  const auto columns = [&](const EllipticSymbol& P, const PotentialSpec& V,
                           HeatMethod method) {
    std::vector<HeatColumn> cols;
    for (double t : ts)
      cols.push_back({t, {0, 0, 0}, kernel_column(P, V, t, {0, 0, 0}, g, method)});
    return cols;
  };

  const EllipticSymbol P1 = polyharmonic_symbol(1, 1);
  const HeatEnvelopeReport r1 =
      gaussian_envelope_fit(columns(P1, zero, HeatMethod::spectral), 1, 1);
  ok &= r1.feasible && r1.exponent == 2.0 && r1.violations == 0;
  ok &= r1.c_fit >= kEnvelopeCLo && r1.c_fit <= kEnvelopeCHi;

  const EllipticSymbol P2 = polyharmonic_symbol(2, 1);
  const HeatEnvelopeReport r2 =
      gaussian_envelope_fit(columns(P2, zero, HeatMethod::spectral), 2, 1);
  ok &= r2.feasible && r2.exponent == 4.0 / 3.0 && r2.c_fit > 0 && r2.violations == 0;

  const PotentialSpec V = make_shifted_power_potential(-3.0, -1, 0.1);
  const HeatEnvelopeReport r3 =
      gaussian_envelope_fit(columns(P1, V, HeatMethod::contour), 1, 1);
  ok &= r3.feasible && r3.w == 0.0 && r3.violations == 0;

  note = fmt("c_fit %.3f / %.3f / %.3f", r1.c_fit, r2.c_fit, r3.c_fit);
  return ok;
}

// 3. Increment regularity of a perturbed planar kernel. The lattice is
// 64 points per axis: the spacing constraint pins sizes to powers of two,
// so this is the smallest grid at or above the nominal 48 per axis.
bool criterion_holder(std::string& note) {
  const auto t0 = Clock::now();
  const GridSpec g = make_grid(2, 8.0, 64);
  const EllipticSymbol P = polyharmonic_symbol(1, 2);
  const PotentialSpec V = make_shifted_power_potential(-3.0, -1, 0.1);
  const double t = 2.0;
  const GridFunction col = kernel_column(P, V, t, {0, 0, 0}, g, HeatMethod::contour);
  const HolderReport rep = holder_exponent_estimate(col, {0, 0, 0}, t, 1, {1, 2, 3, 4, 5});
  const double secs = seconds_since(t0);
  note = fmt("slope %.3f, r2 %.3f, %.1f s", rep.slope, rep.r2, secs);
  return rep.slope > kHolderSlopeMin && rep.envelope_feasible && secs <= kHolderSeconds;
}

// 4. Off-diagonal mass decay: free second-order flow recovers the
// quadratic-exponent rate 1/4; a singular attractive well under the
// fourth-order flow keeps a positive rate in local mode.
bool criterion_mass_decay(std::string& note) {
  bool ok = true;
  const GridSpec g = make_grid(1, 16.0, 256);
  Region e, f;
  e.kind = Region::Kind::box;
  e.center = {-2.0, 0, 0};
  e.extent = {1.0, 0, 0};
  f.kind = Region::Kind::box;
  f.center = {2.0, 0, 0};
  f.extent = {1.0, 0, 0};
  const std::vector<double> ts = log_spaced(0.1, 0.4, 6);

  const EllipticSymbol P1 = polyharmonic_symbol(1, 1);
  const PotentialSpec zero = make_constant_potential(1, 0.0);
  const DgReport free_rep =
      davies_gaffney_measure(P1, zero, e, f, ts, g, HeatMethod::spectral);
  ok &= std::abs(free_rep.c5 - kDgSlopeRef) <= kDgSlopeRelTol * kDgSlopeRef;
  ok &= free_rep.r2 >= kDgR2Min;

  const EllipticSymbol P2 = polyharmonic_symbol(2, 1);
  const PotentialSpec V = make_power_potential(-0.5, -1, 1.0);
  const DgReport local_rep =
      davies_gaffney_measure(P2, V, e, f, ts, g, HeatMethod::dense, nullptr, true);
  ok &= local_rep.c5 > 0 && local_rep.r2 >= kDgLocalR2Min;

  note = fmt("free c5 %.4f r2 %.4f; local c5 %.4f", free_rep.c5, free_rep.r2,
             local_rep.c5);
  return ok;
}

// 5. Window-norm scaling of power potentials: fitted log-log slope against
// the closed form alpha/r + a + n/t over a widening-window sweep.
bool criterion_window_scaling(std::string& note) {
  struct Tuple {
    double a, alpha, r, t;
  };
  const std::vector<Tuple> tuples = {
      {-0.5, 0.9, 1.0, kInf}, {-0.25, 0.5, 1.0, kInf}, {-0.2, 0.8, 2.0, kInf},
      {-0.6, 0.8, 1.0, 4.0},  {-0.5, 0.75, 1.0, 3.0},  {-0.35, 0.9, 2.0, 6.0},
  };
  const GridSpec g = make_grid(1, 16.0, 1024);
  const std::vector<double> deltas = log_spaced(0.25, 4.0, 8);
  bool ok = true;
  double worst = 0;
  for (const auto& tp : tuples) {
    const PotentialSpec V = make_power_potential(tp.a, 1, 1.0);
    const SchechterParams sp = make_schechter_params(tp.alpha, tp.r, tp.t, 0.0);
    std::vector<double> values;
    for (double d : deltas) values.push_back(schechter_norm(V, sp, d, g));
    const double got = loglog_fit(deltas, values).slope;
    const double want = tp.alpha / tp.r + tp.a + (std::isfinite(tp.t) ? 1.0 / tp.t : 0.0);
    const double err = std::abs(got - want) / std::abs(want);
    worst = std::max(worst, err);
    ok &= err <= kExponentRelTol;
  }
  note = fmt("worst slope error %.2f%%", 100.0 * worst);
  return ok;
}

// 6. Condition-profile exponents: the resolvent-window branch on a power
// potential fits -a - 2m; the trace-window branch at t = n/(2m) lands on an
// exactly zero scale index.
bool criterion_condition_exponents(std::string& note) {
  bool ok = true;

  ConditionSet a5;
  a5.branch = ConditionBranch::a5;
  a5.m = 1;
  a5.n = 1;
  a5.q = a5.p = 2.0;
  a5.s = 1.0;
  a5.alpha = 0.6;
  validate_conditions(a5);
  const GridSpec g = make_grid(1, 8.0, 256);
  const PotentialSpec V = make_power_potential(-0.25, 1, 1.0);
  const ConditionReport rep = check_conditions(a5, V, log_spaced(0.5, 4.0, 10), g);
  const double want = -(-0.25) - 2.0;  // -a - 2m
  ok &= std::abs(rep.fitted_exponent - want) <= kExponentRelTol * std::abs(want);

  ConditionSet a3;
  a3.branch = ConditionBranch::a3;
  a3.m = 1;
  a3.n = 3;
  a3.q = a3.p = 1.2;
  a3.s = 2.0;
  a3.t = 1.5;  // n / (2m)
  a3.sigma = 6.0;
  validate_conditions(a3);
  ok &= s_index(a3) == 0.0;

  note = fmt("fitted %.4f (want %.2f), critical index %.1e", rep.fitted_exponent, want,
             std::abs(s_index(a3)));
  return ok;
}

// 7. Bound ordering across the four branches: one fitted constant per
// branch, measured norms within a factor 2 of constant * bound, and the
// measured width-exponent no more than 0.1 below the predicted one.
bool criterion_bound_ordering(std::string& note) {
  struct Case {
    ConditionSet cs;
    PotentialSpec v;
  };
  std::vector<Case> cases;
  {
    ConditionSet cs;
    cs.branch = ConditionBranch::a2;
    cs.m = 1;
    cs.n = 1;
    cs.s = 0.9;
    cs.q = 1.5;
    cs.p = 2.0;
    cs.alpha = 0.8;
    cases.push_back({cs, make_power_potential(-0.51, 1, 1.0)});
  }
  {
    ConditionSet cs;
    cs.branch = ConditionBranch::a3;
    cs.m = 1;
    cs.n = 1;
    cs.s = 2.0;
    cs.q = cs.p = 2.0;
    cs.t = 12.0;
    cs.sigma = 2.4;
    cases.push_back({cs, make_shifted_power_potential(-3.0, -1, 0.3)});
  }
  {
    ConditionSet cs;
    cs.branch = ConditionBranch::a4;
    cs.m = 1;
    cs.n = 1;
    cs.s = 0.45;
    cs.q = cs.p = 2.0;
    cs.t = 10.0;
    cs.r = 2.5;
    cs.alpha = 0.5;
    cases.push_back({cs, make_power_potential(-0.15, 1, 1.0)});
  }
  {
    ConditionSet cs;
    cs.branch = ConditionBranch::a5;
    cs.m = 1;
    cs.n = 1;
    cs.s = 1.0;
    cs.q = cs.p = 2.0;
    cs.alpha = 0.6;
    cases.push_back({cs, make_power_potential(-0.25, 1, 1.0)});
  }

  // The |x|^{-0.51} window norm converges slowly in h; coarser lattices
  // overstate the theoretical slope by more than the deficit allowance.
  const GridSpec g = make_grid(1, 16.0, 4096);
  const std::vector<double> deltas = log_spaced(0.4, 4.0, 8);
  bool ok = true;
  double worst_ratio = 0, worst_deficit = 0;
  for (const auto& c : cases) {
    validate_conditions(c.cs);
    std::vector<double> emp, theo;
    for (double d : deltas) {
      emp.push_back(empirical_opnorm(c.v, c.cs.s, d, c.cs.p, c.cs.q, 16, g, 1234));
      theo.push_back(theoretical_bound(c.cs, c.v, d, g));
    }
    double log_c = 0;
    for (std::size_t i = 0; i < deltas.size(); ++i) log_c += std::log(emp[i] / theo[i]);
    const double fitted_c = std::exp(log_c / double(deltas.size()));
    double ratio = 0;
    for (std::size_t i = 0; i < deltas.size(); ++i)
      ratio = std::max(ratio, emp[i] / (fitted_c * theo[i]));
    const double emp_slope = loglog_fit(deltas, emp).slope;
    const double theo_slope = loglog_fit(deltas, theo).slope;
    const double deficit = theo_slope - emp_slope;
    worst_ratio = std::max(worst_ratio, ratio);
    worst_deficit = std::max(worst_deficit, deficit);
    ok &= ratio <= kOrderRatioMax && deficit <= kOrderSlopeDeficit;
  }
  note = fmt("worst spread %.3f, worst slope deficit %.3f", worst_ratio, worst_deficit);
  return ok;
}

// 8. Resolvent suite: exact lattice saturation of the free-resolvent bound,
// series-vs-dense agreement under observed contraction, and shift
// conjugation consistency for box-periodic imaginary shifts.
bool criterion_resolvent(std::string& note) {
  bool ok = true;
  const GridSpec g = make_grid(1, 8.0, 64);
  double worst_lattice = 0;
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> re_dist(-4.0, 4.0), im_dist(0.3, 3.0);
  for (int m : {1, 2}) {
    const EllipticSymbol P = polyharmonic_symbol(m, 1);
    for (int trial = 0; trial < 50; ++trial) {
      const cd z(re_dist(rng), im_dist(rng));
      double best = 0;
      std::array<long, 3> best_idx{0, 0, 0};
      std::array<long, 3> idx{0, 0, 0};
      for (long k = 0; k < g.npoints; ++k) {
        idx[0] = k;
        const double val = 1.0 / std::abs(z - cd(eval_symbol(P, frequency(g, idx)), 0));
        if (val > best) {
          best = val;
          best_idx = idx;
        }
      }
      const auto xi = frequency(g, best_idx);
      const GridFunction mode = from_function(g, [&](const std::array<double, 3>& x) {
        return std::exp(cd(0, xi[0] * x[0]));
      });
      const GridFunction u = free_resolvent(P, z, mode);
      const double gap = std::abs(z - cd(eval_symbol(P, xi), 0));
      const double err = std::abs(lp_norm(u, 2.0) / lp_norm(mode, 2.0) * gap - 1.0);
      worst_lattice = std::max(worst_lattice, err);
      ok &= err <= kLatticeBoundTol;
    }
  }

  const EllipticSymbol P = polyharmonic_symbol(1, 1);
  const PotentialSpec V = make_shifted_power_potential(-3.0, -1, 0.3);
  const GridFunction f = gaussian_bump(g, 1.0);
  const cd z(-1.0, 0.0);
  const ResolventResult res = perturbed_resolvent(P, V, z, f, 1e-12, 300);
  ok &= res.diag.converged && res.diag.contraction_estimate < 0.9;
  const double dense_rel = rel_l2_diff(res.u, dense_solve(P, V, z, f));
  ok &= dense_rel <= kDenseRelTol;

  constexpr double kPi = 3.14159265358979323846;
  const PotentialSpec Vc = make_constant_potential(-1, 0.25);
  double worst_free = 0, worst_const = 0;
  for (int k = 1; k <= 5; ++k) {
    const ComplexShift eta{cd(0, kPi * double(k) / g.r_box), cd(0, 0), cd(0, 0)};
    const PotentialSpec zero = make_constant_potential(1, 0.0);
    worst_free = std::max(worst_free,
                          conjugation_residual(P, zero, z, eta, f, kNeumannTol, 200));
    worst_const = std::max(worst_const,
                           conjugation_residual(P, Vc, z, eta, f, kNeumannTol, 200));
  }
  ok &= worst_free < kConjFreeTol && worst_const < 10.0 * kNeumannTol;

  note = fmt("lattice err %.1e, dense rel %.1e, conj %.1e", worst_lattice, dense_rel,
             std::max(worst_free, worst_const));
  return ok;
}

// 9. Cross-module invariants: norm preservation under unimodular
// multipliers, multiplier composition, smoothing-order composition, kernel
// rescaling, window monotonicity and the per-width embedding, the semigroup
// law on both routes, and contour-index stability.
bool criterion_invariants(std::string& note, Clock::time_point suite_start) {
  bool ok = true;

  {  // Parseval via a pure-phase multiplier, plus the identity multiplier.
    const GridSpec g = make_grid(1, 8.0, 128);
    std::mt19937 rng(11);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::vector<cd> vals(g.total());
    for (auto& v : vals) v = cd(u(rng), u(rng));
    const GridFunction f(g, std::move(vals));
    const GridFunction phased = apply_multiplier(f, [](const std::array<double, 3>& xi) {
      return std::exp(cd(0, std::sin(xi[0])));
    });
    ok &= std::abs(lp_norm(phased, 2.0) - lp_norm(f, 2.0)) <= 1e-12 * lp_norm(f, 2.0);
    const GridFunction same =
        apply_multiplier(f, [](const std::array<double, 3>&) { return cd(1, 0); });
    ok &= rel_l2_diff(same, f) <= 1e-12;

    // Composition: two first-derivative passes equal one second derivative.
    const GridFunction smooth = gaussian_bump(g, 1.0);
    const auto d1 = [](const std::array<double, 3>& xi) { return cd(0, xi[0]); };
    const auto d2 = [](const std::array<double, 3>& xi) { return cd(-xi[0] * xi[0], 0); };
    ok &= rel_l2_diff(apply_multiplier(apply_multiplier(smooth, d1), d1),
                      apply_multiplier(smooth, d2)) <= 1e-10;
  }

  {  // Smoothing order composes additively at fixed scale.
    const GridSpec g = make_grid(1, 8.0, 256);
    const GridFunction f = gaussian_bump(g, 1.0);
    const GridFunction two_step =
        apply_bessel(make_bessel(1.3, 1.5), apply_bessel(make_bessel(0.7, 1.5), f));
    const GridFunction one_step = apply_bessel(make_bessel(2.0, 1.5), f);
    ok &= rel_l2_diff(two_step, one_step) <= 1e-12;
  }

  {  // Kernel rescaling identity at a non-unit scale. 2048 points keep the
     // truncation ringing under the contamination gate.
    const BesselKernelReport rep =
        bessel_kernel_checks(make_bessel(2.0, 2.0), make_grid(1, 24.0, 2048));
    ok &= rep.scaling_max_rel_violation < 0.05;
  }

  {  // Window monotonicity in width; embedding across weights for width <= 1.
    const GridSpec g = make_grid(1, 8.0, 512);
    const PotentialSpec V = make_power_potential(-0.3, 1, 1.0);
    const SchechterParams lo = make_schechter_params(0.5, 1.0, kInf, 0.0);
    const SchechterParams hi = make_schechter_params(0.9, 1.0, kInf, 0.0);
    double prev = 0.0;
    for (double d : {0.25, 0.5, 1.0, 2.0}) {
      const double v = schechter_norm(V, lo, d, g);
      ok &= v >= prev * (1.0 - 1e-12);
      prev = v;
    }
    for (double d : {0.25, 0.5, 1.0})
      ok &= schechter_norm(V, hi, d, g) <= schechter_norm(V, lo, d, g) * (1.0 + 1e-9);
  }

  {  // Semigroup law on the spectral and contour routes.
    const GridSpec g = make_grid(1, 8.0, 64);
    const EllipticSymbol P = polyharmonic_symbol(1, 1);
    const PotentialSpec zero = make_constant_potential(1, 0.0);
    const PotentialSpec V = make_shifted_power_potential(-3.0, -1, 0.3);
    const GridFunction f = gaussian_bump(g, 1.2);
    GridFunction half = semigroup_apply(P, zero, 0.4, f, HeatMethod::spectral);
    ok &= rel_l2_diff(semigroup_apply(P, zero, 0.4, half, HeatMethod::spectral),
                      semigroup_apply(P, zero, 0.8, f, HeatMethod::spectral)) <= 1e-12;
    half = semigroup_apply(P, V, 0.4, f, HeatMethod::contour);
    ok &= rel_l2_diff(semigroup_apply(P, V, 0.4, half, HeatMethod::contour),
                      semigroup_apply(P, V, 0.8, f, HeatMethod::contour)) <= 1e-6;

    // Contour-index stability on the same perturbed flow.
    ContourSpec l0, l1;
    l0.l = 0;
    l1.l = 1;
    ok &= rel_l2_diff(semigroup_apply(P, V, 0.5, f, HeatMethod::contour, &l0),
                      semigroup_apply(P, V, 0.5, f, HeatMethod::contour, &l1)) <= 1e-7;
  }

  const double total = seconds_since(suite_start);
  ok &= total <= kTotalSeconds;
  note = fmt("total %.1f s of %.0f budget", total, kTotalSeconds);
  return ok;
}

}  // namespace

int main() {
  const auto suite_start = Clock::now();
  struct Entry {
    int id;
    const char* name;
    std::function<bool(std::string&)> run;
  };
  const std::vector<Entry> entries = {
      {1, "semigroup route agreement", criterion_routes},
      {2, "gaussian envelope feasibility", criterion_envelope},
      {3, "increment regularity", criterion_holder},
      {4, "off-diagonal mass decay", criterion_mass_decay},
      {5, "window norm scaling", criterion_window_scaling},
      {6, "condition profile exponents", criterion_condition_exponents},
      {7, "operator bound ordering", criterion_bound_ordering},
      {8, "resolvent suite", criterion_resolvent},
      {9, "cross-module invariants",
       [&](std::string& note) { return criterion_invariants(note, suite_start); }},
  };

  int failures = 0;
  for (const auto& e : entries) {
    const auto t0 = Clock::now();
    bool ok = false;
    std::string note;
    try {
      ok = e.run(note);
    } catch (const std::exception& ex) {
      ok = false;
      note = std::string("exception: ") + ex.what();
    }
    std::printf("criterion %d  %-30s  %s  (%6.1f s)  %s\n", e.id, e.name,
                ok ? "PASS" : "FAIL", seconds_since(t0), note.c_str());
    std::fflush(stdout);
    if (!ok) ++failures;
  }
  std::printf("%d of 9 criteria passed, total %.1f s\n", 9 - failures,
              seconds_since(suite_start));
  return failures == 0 ? 0 : 1;
}
