#include "t_operator.hh"

#include <algorithm>
#include <cmath>
#include <random>

#include "bessel.hh"
#include "errors.hh"
#include "fit.hh"

namespace sh {

namespace {

double inv(double x) { return std::isinf(x) ? 0.0 : 1.0 / x; }

void check_common(const ConditionSet& cs) {
  require(cs.m >= 1 && cs.m <= 4, ErrorCode::branch_violation, "m out of range [1,4]");
  require(cs.n >= 1 && cs.n <= 3, ErrorCode::branch_violation, "n out of range [1,3]");
  require(std::isfinite(cs.q) && cs.q > 1, ErrorCode::branch_violation,
          "q must lie in (1, inf)");
  require(cs.p >= cs.q, ErrorCode::branch_violation, "p must lie in [q, inf)");
  require(std::isfinite(cs.p), ErrorCode::branch_violation, "p must be finite");
  require(cs.s > 0 && cs.s <= 2 * cs.m + 1e-12, ErrorCode::branch_violation,
          "s must lie in (0, 2m]");
  const double gap = cs.n * (inv(cs.q) - inv(cs.p));
  require(gap >= -1e-12, ErrorCode::branch_violation, "n(1/q - 1/p) must be nonnegative");
  require(gap <= 2 * cs.m - cs.s + 1e-12, ErrorCode::branch_violation,
          "n(1/q - 1/p) must not exceed 2m - s");
  require(cs.constant_product > 0, ErrorCode::invalid_argument,
          "constant_product must be positive");
}

}  // namespace

const char* branch_name(ConditionBranch b) {
  switch (b) {
    case ConditionBranch::a2: return "A2";
    case ConditionBranch::a3: return "A3";
    case ConditionBranch::a4: return "A4";
    case ConditionBranch::a5: return "A5";
  }
  return "A?";
}

void validate_conditions(const ConditionSet& cs) {
  check_common(cs);
  const double n = cs.n;
  switch (cs.branch) {
    case ConditionBranch::a2: {
      if (cs.s < n)
        require(cs.q < n / (n - cs.s), ErrorCode::branch_violation,
                "a2: q must lie in (1, n/(n-s))");
      const double amax = (cs.s - n) * cs.q + n;
      require(cs.alpha > 0 && cs.alpha <= amax + 1e-12, ErrorCode::branch_violation,
              "a2: alpha must lie in (0, (s-n)q + n]");
      break;
    }
    case ConditionBranch::a3: {
      require(cs.t >= 1 && cs.sigma >= 1, ErrorCode::branch_violation,
              "a3: t and sigma must lie in [1, inf]");
      require(std::abs(inv(cs.q) - inv(cs.t) - inv(cs.sigma)) <= 1e-12,
              ErrorCode::branch_violation, "a3: 1/q = 1/t + 1/sigma must hold");
      require(inv(cs.sigma) <= inv(cs.p) + 1e-12, ErrorCode::branch_violation,
              "a3: 1/sigma <= 1/p must hold");
      require(inv(cs.p) <= inv(cs.sigma) + cs.s / n + 1e-12, ErrorCode::branch_violation,
              "a3: 1/p <= 1/sigma + s/n must hold");
      break;
    }
    case ConditionBranch::a4: {
      require(cs.s < 0.5 * n, ErrorCode::branch_violation, "a4: s must lie in (0, n/2)");
      require(cs.q >= 2, ErrorCode::branch_violation, "a4: q must lie in [2, inf)");
      require(cs.t >= cs.q, ErrorCode::branch_violation, "a4: t must lie in [q, inf]");
      require(cs.r >= cs.q && cs.r < 2 * n / (n - 2 * cs.s), ErrorCode::branch_violation,
              "a4: r must lie in [q, 2n/(n-2s))");
      require(std::abs(inv(cs.q) - inv(cs.t) - inv(cs.r)) <= 1e-12,
              ErrorCode::branch_violation, "a4: 1/t + 1/r = 1/q must hold");
      const double amax = n + 0.5 * (2 * cs.s - n) * cs.r;
      require(cs.alpha > 0 && cs.alpha <= amax + 1e-12, ErrorCode::branch_violation,
              "a4: alpha must lie in (0, n + (2s-n)r/2]");
      break;
    }
    case ConditionBranch::a5: {
      require(cs.p == cs.q, ErrorCode::branch_violation, "a5: p = q required");
      require(cs.p > 1 && cs.p <= 2, ErrorCode::branch_violation, "a5: p must lie in (1, 2]");
      require(cs.alpha > 0 && cs.alpha < n, ErrorCode::branch_violation,
              "a5: alpha must lie in (0, n)");
      require(cs.alpha <= cs.p * cs.s + 1e-12, ErrorCode::branch_violation,
              "a5: alpha - n <= p(s-n) + np/p' must hold (alpha <= ps)");
      const double pprime = cs.p / (cs.p - 1);
      require(2 * n > pprime * (n - cs.s), ErrorCode::branch_violation,
              "a5: 2n > p'(n-s) must hold");
      break;
    }
  }
}

double s_index(const ConditionSet& cs) {
  const double n = cs.n;
  switch (cs.branch) {
    case ConditionBranch::a2:
      return cs.s - 2 * cs.m + n * (inv(cs.q) - inv(cs.p)) + (n - cs.s) +
             (cs.alpha - n) / cs.q;
    case ConditionBranch::a3:
      // s - 2m + n(1/q - 1/p) - s(1 - theta) collapses to n/t - 2m once
      // 1/q = 1/t + 1/sigma and theta = (n/s)(1/p - 1/sigma) are substituted.
      return n * inv(cs.t) - 2 * cs.m;
    case ConditionBranch::a4:
      return cs.s - 2 * cs.m + n * (inv(cs.q) - inv(cs.p)) +
             (0.5 * (n - 2 * cs.s) * cs.r + cs.alpha - n) / cs.r;
    case ConditionBranch::a5:
      return cs.alpha / cs.p - 2 * cs.m;
  }
  return 0;
}

double bound_delta_power(const ConditionSet& cs) {
  const double n = cs.n;
  switch (cs.branch) {
    case ConditionBranch::a2:
      return ((n - cs.s) * cs.q + cs.alpha - n) / cs.q;
    case ConditionBranch::a3: {
      const double theta = (n / cs.s) * (inv(cs.p) - inv(cs.sigma));
      return -cs.s * (1.0 - theta);
    }
    case ConditionBranch::a4:
      return (0.5 * (n - 2 * cs.s) * cs.r + cs.alpha - n) / cs.r;
    case ConditionBranch::a5:
      return cs.alpha / cs.p - cs.s;
  }
  return 0;
}

double condition_norm_factor(const ConditionSet& cs, const PotentialSpec& V, double window,
                             const GridSpec& g) {
  const double infinity = std::numeric_limits<double>::infinity();
  switch (cs.branch) {
    case ConditionBranch::a2: {
      const double pprime = std::isinf(cs.p) ? 1.0 : cs.p / (cs.p - 1);
      return schechter_norm(V, make_schechter_params(cs.alpha, cs.q, pprime, 0.0), window, g);
    }
    case ConditionBranch::a3:
      return lebesgue_norm(V, cs.t, g);
    case ConditionBranch::a4:
      return schechter_norm(V, make_schechter_params(cs.alpha, cs.r, cs.t, 0.0), window, g);
    case ConditionBranch::a5:
      return schechter_norm(V, make_schechter_params(cs.alpha, cs.p, infinity, 0.0), window, g);
  }
  return 0;
}

GridFunction apply_T(const PotentialSpec& V, double s, double delta, const GridFunction& f) {
  const BesselParams bp = make_bessel(s, delta);
  const GridFunction vg = sample_potential(V, f.spec());
  return multiply(vg, apply_bessel(bp, f));
}

double empirical_opnorm(const PotentialSpec& V, double s, double delta, double p_in,
                        double q_out, int trials, const GridSpec& g, unsigned seed) {
  require(trials >= 16, ErrorCode::invalid_argument, "opnorm: need at least 16 trials");
  require(p_in >= 1 && q_out >= 1, ErrorCode::invalid_argument, "opnorm: exponents below 1");
  const BesselParams bp = make_bessel(s, delta);
  const GridFunction vg = sample_potential(V, g);
  bool v_zero = true;
  for (std::size_t i = 0; i < vg.size() && v_zero; ++i) v_zero = std::abs(vg[i]) == 0.0;
  if (v_zero) return 0.0;

  const std::vector<cd> bmult = bessel_multiplier(bp, g);
  const auto apply_t = [&](const GridFunction& f) {
    return multiply(vg, apply_multiplier_table(f, bmult));
  };

  // Trial dictionary: Gaussians over a width/center lattice plus the
  // constant. Centers stay in the middle half of the box.
  std::mt19937 eng(seed);
  const int nwidths = 6;
  std::vector<double> widths(nwidths);
  for (int i = 0; i < nwidths; ++i)
    widths[i] = std::exp(std::log(2 * g.h) +
                         (std::log(0.25 * g.r_box) - std::log(2 * g.h)) * i / (nwidths - 1.0));
  const int ncenters = (trials + nwidths - 1) / nwidths;
  std::vector<std::array<double, 3>> centers;
  centers.push_back({0, 0, 0});
  while (int(centers.size()) < ncenters) {
    std::array<double, 3> c{0, 0, 0};
    for (int d = 0; d < g.n; ++d) {
      const long i = g.npoints / 4 + long(eng() % (unsigned long)(g.npoints / 2));
      c[d] = -g.r_box + double(i) * g.h;
    }
    centers.push_back(c);
  }

  double best = 0;
  bool any_input = false;
  GridFunction best_f = constant_function(g, 1.0);
  const auto probe = [&](const GridFunction& f) {
    const double in = lp_norm(f, p_in);
    if (in <= 0) return;
    any_input = true;
    const double out = lp_norm(apply_t(f), q_out);
    if (out / in > best) {
      best = out / in;
      best_f = f;
    }
  };
  probe(constant_function(g, 1.0));
  for (const auto& c : centers)
    for (double w : widths) {
      probe(from_function(g, [&](const std::array<double, 3>& x) {
        double e = 0;
        for (int d = 0; d < g.n; ++d) e += (x[d] - c[d]) * (x[d] - c[d]);
        return cd(std::exp(-e / (2 * w * w)), 0.0);
      }));
    }
  require(any_input, ErrorCode::degenerate_trial, "opnorm: every trial had zero input norm");

  if (p_in == 2.0 && q_out == 2.0) {
    // Power iteration on T*T = B V^2 B (B symmetric, V real).
    std::vector<cd> vsq(vg.size());
    for (std::size_t i = 0; i < vg.size(); ++i) vsq[i] = std::norm(vg[i]);
    GridFunction f = best_f;
    double fn = lp_norm(f, 2);
    if (fn > 0) {
      f = scale(f, 1.0 / fn);
      double lambda = 0;
      for (int it = 0; it < 5000; ++it) {
        GridFunction y = apply_multiplier_table(f, bmult);
        GridFunction z(g, [&] {
          std::vector<cd> vals(y.size());
          for (std::size_t i = 0; i < y.size(); ++i) vals[i] = vsq[i] * y[i];
          return vals;
        }());
        GridFunction w = apply_multiplier_table(z, bmult);
        cd dot = 0;
        for (std::size_t i = 0; i < w.size(); ++i)
          dot += std::conj(f[i]) * w[i];
        const double next = std::max(0.0, dot.real() * std::pow(g.h, g.n));
        const double wn = lp_norm(w, 2);
        if (wn <= 0) break;
        f = scale(w, 1.0 / wn);
        if (it > 2 && std::abs(next - lambda) <= 1e-13 * std::max(next, 1e-300)) {
          lambda = next;
          break;
        }
        lambda = next;
      }
      best = std::max(best, std::sqrt(lambda));
    }
  }
  return best;
}

double theoretical_bound(const ConditionSet& cs, const PotentialSpec& V, double delta,
                         const GridSpec& g) {
  validate_conditions(cs);
  require(std::isfinite(delta) && delta > 0, ErrorCode::invalid_argument,
          "bound: delta must be positive");
  return cs.constant_product * std::pow(delta, bound_delta_power(cs)) *
         condition_norm_factor(cs, V, 1.0 / delta, g);
}

const char* condition_status_name(ConditionStatus s) {
  switch (s) {
    case ConditionStatus::global_ok: return "GLOBAL";
    case ConditionStatus::local_ok: return "LOCAL";
    case ConditionStatus::fail: return "FAIL";
  }
  return "FAIL";
}

ConditionReport check_conditions(const ConditionSet& cs, const PotentialSpec& V,
                                 const std::vector<double>& lambda_abs_grid,
                                 const GridSpec& g) {
  validate_conditions(cs);
  require(lambda_abs_grid.size() >= 8, ErrorCode::invalid_argument,
          "conditions: need at least 8 lambda samples");
  for (std::size_t i = 0; i < lambda_abs_grid.size(); ++i) {
    require(lambda_abs_grid[i] > 0, ErrorCode::invalid_argument, "conditions: lambda <= 0");
    require(i == 0 || lambda_abs_grid[i] > lambda_abs_grid[i - 1],
            ErrorCode::invalid_argument, "conditions: lambda grid must increase");
  }

  ConditionReport rep;
  rep.s_index = s_index(cs);
  const bool window_free = cs.branch == ConditionBranch::a3;
  const double fixed_factor = window_free ? condition_norm_factor(cs, V, 0.0, g) : 0.0;
  for (double lam : lambda_abs_grid) {
    const double factor =
        window_free ? fixed_factor : condition_norm_factor(cs, V, 1.0 / lam, g);
    rep.samples.push_back({lam, cs.constant_product * std::pow(lam, rep.s_index) * factor});
  }

  rep.sup_value = 0;
  bool all_zero = true;
  for (const auto& s : rep.samples) {
    rep.sup_value = std::max(rep.sup_value, s.m_value);
    all_zero = all_zero && s.m_value == 0.0;
  }
  if (all_zero) {
    rep.fitted_exponent = 0;
    rep.status = ConditionStatus::global_ok;
    return rep;
  }

  std::vector<double> lx, ly;
  for (const auto& s : rep.samples)
    if (s.m_value > 0) {
      lx.push_back(std::log(s.lambda_abs));
      ly.push_back(std::log(s.m_value));
    }
  rep.fitted_exponent = lx.size() >= 2 ? linear_fit(lx, ly).slope : 0.0;

  const std::size_t edge = std::min<std::size_t>(4, lx.size());
  double left_slope = 0, right_slope = 0;
  if (edge >= 2) {
    left_slope = linear_fit({lx.begin(), lx.begin() + edge}, {ly.begin(), ly.begin() + edge}).slope;
    right_slope = linear_fit({lx.end() - edge, lx.end()}, {ly.end() - edge, ly.end()}).slope;
  }

  if (rep.sup_value < 1.0 && left_slope >= -0.02 && right_slope <= 0.02) {
    rep.status = ConditionStatus::global_ok;
    rep.local_threshold = 0.0;
    return rep;
  }
  // Running sup from the large-lambda end; first index where the tail stays
  // below 1 gives the threshold w = 2 lambda_j.
  double tail_sup = 0;
  std::ptrdiff_t jfound = -1;
  for (std::ptrdiff_t j = std::ptrdiff_t(rep.samples.size()) - 1; j >= 0; --j) {
    tail_sup = std::max(tail_sup, rep.samples[std::size_t(j)].m_value);
    if (tail_sup < 1.0) jfound = j;
  }
  if (jfound >= 0 && right_slope <= 0.02) {
    rep.status = ConditionStatus::local_ok;
    rep.local_threshold = 2.0 * rep.samples[std::size_t(jfound)].lambda_abs;
  } else {
    rep.status = ConditionStatus::fail;
    rep.local_threshold = 0.0;
  }
  return rep;
}

}  // namespace sh
