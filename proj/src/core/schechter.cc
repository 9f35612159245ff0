#include "schechter.hh"

#include <algorithm>
#include <cmath>

#include "bessel.hh"
#include "errors.hh"
#include "fit.hh"

namespace sh {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kEdgeTol = 1e-12;

double sphere_area(int n) { return n == 1 ? 2.0 : (n == 2 ? 2.0 * kPi : 4.0 * kPi); }

double ball_vol(int n, double rho) { return sphere_area(n) * std::pow(rho, n) / n; }

// int_{|u| < rho} |u|^{q - n} du, optionally with the clamped log(1/|u|)
// factor of the alpha = n weight. Diverges at the origin iff q <= 0.
double radial_power_ball(int n, double q, double rho, bool log_factor) {
  if (q <= 0.0)
    fail(ErrorCode::divergent_local_integral, "window integral diverges at a singular point");
  const double w = sphere_area(n);
  if (!log_factor) return w * std::pow(rho, q) / q;
  const double re = std::min(rho, 1.0);
  return w * (std::pow(re, q) / q) * (std::log(1.0 / re) + 1.0 / q);
}

// int_{|u| < rho} w_alpha(u) du.
double weight_ball(int n, double alpha, double rho) {
  if (alpha > double(n) + kEdgeTol) return ball_vol(n, rho);
  if (std::abs(alpha - double(n)) <= kEdgeTol) return radial_power_ball(n, n, rho, true);
  return radial_power_ball(n, alpha, rho, false);
}

struct LocalIntegrand {
  const PotentialSpec* pot = nullptr;
  double rexp = 1.0;   // exponent on |V|
  double alpha = 1.0;  // weight exponent, ignored when unit_weight
  bool unit_weight = false;
  int n = 1;
  double h = 0.0;
};

double weight_at(const LocalIntegrand& li, double dist) {
  return li.unit_weight ? 1.0 : weight_w(li.alpha, li.n, dist);
}

// int_{|y - x| < delta} |V(y)|^rexp * w(x - y) dy on the cell decomposition
// induced by the lattice spacing h: 4^n midpoint subcells per cell, with the
// weight-singular cell, the potential-singular cell, and the doubly singular
// cell (x = 0) replaced by closed-form ball integrals plus a corner remainder
// evaluated at rho_bar = (h/2)(1 + sqrt(n))/2. x must be a lattice point so a
// singular potential origin lands exactly on a cell center.
double windowed_local_integral(const LocalIntegrand& li, const std::array<double, 3>& x,
                               double delta) {
  const int n = li.n;
  const double h = li.h;
  const double rho = 0.5 * h;
  const double rho_bar = 0.5 * rho * (1.0 + std::sqrt(double(n)));
  const double corner_vol = std::pow(h, n) - ball_vol(n, rho);
  const double d2 = delta * delta;
  const bool vsing = is_singular_at_origin(*li.pot);
  const bool wsing = !li.unit_weight && li.alpha <= double(n) + kEdgeTol;
  const int K = int(std::floor(delta / h)) + 2;
  const double sub_off[4] = {-0.375 * h, -0.125 * h, 0.125 * h, 0.375 * h};
  const double sub_vol = std::pow(0.25 * h, n);

  double acc = 0.0;
  std::array<int, 3> k{0, 0, 0};
  const int k1 = n >= 2 ? K : 0;
  const int k2 = n >= 3 ? K : 0;
  for (k[0] = -K; k[0] <= K; ++k[0]) {
    for (k[1] = -k1; k[1] <= k1; ++k[1]) {
      for (k[2] = -k2; k[2] <= k2; ++k[2]) {
        std::array<double, 3> u{k[0] * h, k[1] * h, k[2] * h};
        double u2 = 0, dmin2 = 0, dmax2 = 0;
        for (int d = 0; d < n; ++d) {
          const double au = std::abs(u[d]);
          u2 += au * au;
          const double lo = std::max(0.0, au - rho);
          dmin2 += lo * lo;
          dmax2 += (au + rho) * (au + rho);
        }
        if (dmin2 >= d2) continue;
        const bool full = dmax2 <= d2;

        const bool origin_cell = k[0] == 0 && k[1] == 0 && k[2] == 0;
        bool vcell = vsing;
        for (int d = 0; d < n && vcell; ++d)
          vcell = std::abs(x[d] - u[d]) <= 1e-9 * h;

        if (origin_cell && vcell) {
          // x = 0 and V singular: both factors blow up in this cell.
          const double ar = li.pot->a * li.rexp;
          const double cr = std::pow(li.pot->c, li.rexp);
          double main;
          if (li.unit_weight || li.alpha > double(n) + kEdgeTol)
            main = cr * radial_power_ball(n, ar + n, rho, false);
          else if (std::abs(li.alpha - double(n)) <= kEdgeTol)
            main = cr * radial_power_ball(n, ar + n, rho, true);
          else
            main = cr * radial_power_ball(n, ar + li.alpha, rho, false);
          acc += main + cr * std::pow(rho_bar, ar) * weight_at(li, rho_bar) * corner_vol;
          continue;
        }
        if (origin_cell && wsing) {
          const double wc = weight_ball(n, li.alpha, rho) +
                            weight_w(li.alpha, n, rho_bar) * corner_vol;
          acc += std::pow(std::abs(eval_potential(*li.pot, x, n)), li.rexp) * wc;
          continue;
        }
        if (vcell) {
          // u = x != 0: potential singularity at a regular weight point.
          if (u2 >= d2) continue;  // center rule for the partial rim
          const double ar = li.pot->a * li.rexp;
          const double cr = std::pow(li.pot->c, li.rexp);
          const double bc = cr * radial_power_ball(n, ar + n, rho, false) +
                            cr * std::pow(rho_bar, ar) * corner_vol;
          acc += weight_at(li, std::sqrt(u2)) * bc;
          continue;
        }

        for (int s = 0, s_end = 1 << (2 * n); s < s_end; ++s) {
          std::array<double, 3> sc = u;
          int code = s;
          double sc2 = 0;
          for (int d = 0; d < n; ++d) {
            sc[d] += sub_off[code & 3];
            code >>= 2;
            sc2 += sc[d] * sc[d];
          }
          if (!full && sc2 >= d2) continue;
          std::array<double, 3> y{x[0] - sc[0], x[1] - sc[1], x[2] - sc[2]};
          const double v = std::abs(eval_potential(*li.pot, y, n));
          acc += std::pow(v, li.rexp) * weight_at(li, std::sqrt(sc2)) * sub_vol;
        }
      }
    }
  }
  return acc;
}

bool at_origin(int n, const std::array<double, 3>& x) {
  for (int d = 0; d < n; ++d)
    if (std::abs(x[d]) > 1e-12) return false;
  return true;
}

// Lattice coordinates within |x|_inf <= xmax.
std::vector<double> axis_points(const GridSpec& g, double xmax) {
  std::vector<double> pts;
  for (long i = 0; i < g.npoints; ++i) {
    const double x = -g.r_box + double(i) * g.h;
    if (std::abs(x) <= xmax + kEdgeTol) pts.push_back(x);
  }
  return pts;
}

std::array<double, 3> snap_to_lattice(const GridSpec& g, const std::array<double, 3>& x) {
  std::array<double, 3> out{0, 0, 0};
  for (int d = 0; d < g.n; ++d) {
    long i = std::lround((x[d] + g.r_box) / g.h);
    i = std::max(0L, std::min(g.npoints - 1, i));
    out[d] = -g.r_box + double(i) * g.h;
  }
  return out;
}

LinearFit loglog_fit(const std::vector<double>& xs, const std::vector<double>& ys) {
  std::vector<double> lx, ly;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (ys[i] > 0) {
      lx.push_back(std::log(xs[i]));
      ly.push_back(std::log(ys[i]));
    }
  }
  require(lx.size() >= 2, ErrorCode::invalid_argument, "log-log fit: too few positive values");
  return linear_fit(lx, ly);
}

}  // namespace

SchechterParams make_schechter_params(double alpha, double r, double t, double S) {
  require(std::isfinite(alpha) && alpha > 0, ErrorCode::invalid_argument,
          "schechter: alpha must be positive");
  require(std::isfinite(r) && r >= 1, ErrorCode::invalid_argument, "schechter: r must be >= 1");
  require(t >= 1, ErrorCode::invalid_argument, "schechter: t must be >= 1 (inf allowed)");
  require(std::isfinite(S), ErrorCode::invalid_argument, "schechter: S must be finite");
  return SchechterParams{alpha, r, t, S};
}

const char* verdict_name(ClassVerdict v) {
  switch (v) {
    case ClassVerdict::in_tilde: return "IN_TILDE";
    case ClassVerdict::in_m: return "IN_M";
    case ClassVerdict::out: return "OUT";
  }
  return "OUT";
}

double schechter_norm(const PotentialSpec& V, const SchechterParams& sp, double delta,
                      const GridSpec& g, bool exclude_divergent_origin,
                      SchechterDiagnostics* diag) {
  make_schechter_params(sp.alpha, sp.r, sp.t, sp.S);
  require(std::isfinite(delta) && delta > 0, ErrorCode::invalid_argument,
          "schechter: delta must be positive");
  require(delta >= 4 * g.h - kEdgeTol, ErrorCode::under_resolved,
          "schechter: delta below 4h");
  const bool tinf = std::isinf(sp.t);
  double xmax = g.r_box - delta;
  if (tinf) xmax = std::min(xmax, 0.8 * g.r_box);
  require(xmax >= 4 * g.h - kEdgeTol, ErrorCode::under_resolved,
          "schechter: evaluation window too small for this delta");

  if (diag) {
    diag->origin_excluded = false;
    diag->log_clamp_active =
        std::abs(sp.alpha - double(g.n)) <= kEdgeTol && delta > 1.0;
  }

  LocalIntegrand li{&V, sp.r, sp.alpha, false, g.n, g.h};
  const std::vector<double> pts = axis_points(g, xmax);
  require(!pts.empty(), ErrorCode::under_resolved, "schechter: empty evaluation window");

  double acc_max = 0.0;
  double acc_sum = 0.0;
  std::array<double, 3> x{0, 0, 0};
  const std::size_t m1 = g.n >= 2 ? pts.size() : 1;
  const std::size_t m2 = g.n >= 3 ? pts.size() : 1;
  for (std::size_t i0 = 0; i0 < pts.size(); ++i0) {
    x[0] = pts[i0];
    for (std::size_t i1 = 0; i1 < m1; ++i1) {
      if (g.n >= 2) x[1] = pts[i1];
      for (std::size_t i2 = 0; i2 < m2; ++i2) {
        if (g.n >= 3) x[2] = pts[i2];
        double local;
        try {
          local = windowed_local_integral(li, x, delta);
        } catch (const Error& e) {
          // Divergence always comes from the potential's singular cell, so
          // every window that covers the origin throws; skip them all when
          // excision was requested.
          if (e.code() == ErrorCode::divergent_local_integral && exclude_divergent_origin) {
            if (diag) diag->origin_excluded = true;
            continue;
          }
          throw;
        }
        const double local_norm = std::pow(local, 1.0 / sp.r);
        if (tinf)
          acc_max = std::max(acc_max, local_norm);
        else
          acc_sum += std::pow(local_norm, sp.t);
      }
    }
  }
  if (tinf) return acc_max;
  return std::pow(std::pow(g.h, g.n) * acc_sum, 1.0 / sp.t);
}

double lebesgue_norm(const PotentialSpec& V, double t, const GridSpec& g) {
  require(t >= 1, ErrorCode::invalid_argument, "lebesgue norm: t must be >= 1 (inf allowed)");
  const bool singular = is_singular_at_origin(V);
  if (std::isinf(t)) {
    require(!singular, ErrorCode::divergent_local_integral,
            "lebesgue norm: sup of an origin-singular potential is infinite");
    double mx = 0;
    std::array<long, 3> idx{0, 0, 0};
    for (std::size_t i = 0; i < g.total(); ++i) {
      unflatten(g, i, idx);
      mx = std::max(mx, std::abs(eval_potential(V, coordinate(g, idx), g.n)));
    }
    return mx;
  }
  const double cell = std::pow(g.h, g.n);
  double acc = 0;
  std::array<long, 3> idx{0, 0, 0};
  for (std::size_t i = 0; i < g.total(); ++i) {
    unflatten(g, i, idx);
    const auto x = coordinate(g, idx);
    if (singular && at_origin(g.n, x)) {
      const double rho = 0.5 * g.h;
      const double rho_bar = 0.5 * rho * (1.0 + std::sqrt(double(g.n)));
      const double ct = std::pow(V.c, t);
      acc += ct * radial_power_ball(g.n, V.a * t + g.n, rho, false) +
             ct * std::pow(rho_bar, V.a * t) * (cell - ball_vol(g.n, rho));
      continue;
    }
    acc += std::pow(std::abs(eval_potential(V, x, g.n)), t) * cell;
  }
  return std::pow(acc, 1.0 / t);
}

SeminormReport scaled_seminorm(const PotentialSpec& V, const SchechterParams& sp,
                               const std::vector<double>& deltas, const GridSpec& g) {
  require(deltas.size() >= 8, ErrorCode::invalid_argument,
          "scaled seminorm: need at least 8 deltas");
  for (std::size_t i = 0; i < deltas.size(); ++i) {
    require(deltas[i] > 0, ErrorCode::invalid_argument, "scaled seminorm: delta <= 0");
    require(i == 0 || deltas[i] > deltas[i - 1], ErrorCode::invalid_argument,
            "scaled seminorm: deltas must increase");
  }
  SeminormReport rep;
  rep.deltas = deltas;
  for (double d : deltas) {
    const double m = schechter_norm(V, sp, d, g);
    rep.values.push_back(m);
    rep.scaled.push_back(std::pow(d, sp.S) * m);
  }
  rep.sup_scaled = *std::max_element(rep.scaled.begin(), rep.scaled.end());
  rep.all_zero = rep.sup_scaled == 0.0;
  if (rep.all_zero) {
    rep.slope = 0.0;
    rep.verdict = ClassVerdict::in_tilde;
    return rep;
  }
  rep.slope = loglog_fit(rep.deltas, rep.scaled).slope;
  if (rep.slope > 0.02)
    rep.verdict = ClassVerdict::in_tilde;
  else if (rep.slope >= -0.02)
    rep.verdict = ClassVerdict::in_m;
  else
    rep.verdict = ClassVerdict::out;
  return rep;
}

MembershipReport power_membership(const PotentialSpec& V, const SchechterParams& sp, int n) {
  make_schechter_params(sp.alpha, sp.r, sp.t, sp.S);
  require(n >= 1 && n <= 3, ErrorCode::invalid_argument, "membership: bad dimension");
  require(V.family == PotentialFamily::power || V.family == PotentialFamily::shifted_power,
          ErrorCode::invalid_argument, "membership: closed form covers the power families only");

  MembershipReport rep;
  const double n_over_t = std::isinf(sp.t) ? 0.0 : double(n) / sp.t;
  const double tol = 1e-12;

  if (V.c == 0.0) {
    rep.admissible = true;
    rep.kato = true;
    rep.verdict = ClassVerdict::in_tilde;
    rep.reason = "zero potential";
    return rep;
  }

  if (V.family == PotentialFamily::power) {
    // Origin-singular: the small-delta slope picks up the local power.
    rep.exponent = sp.S + sp.alpha / sp.r + V.a + n_over_t;
    rep.admissible = sp.alpha < double(n) && V.a > -sp.alpha / sp.r + tol &&
                     V.a < -n_over_t - tol;
    rep.kato = V.a > -sp.alpha && V.a < 0;
    if (!rep.admissible) {
      rep.verdict = ClassVerdict::out;
      rep.reason = "exponent outside the closed-form range (-alpha/r, -n/t)";
      return rep;
    }
  } else {
    // Bounded core: the tail power only gates admissibility; shrinking
    // windows see a bounded potential, so the slope is the weight volume.
    rep.exponent = sp.S + sp.alpha / sp.r;
    rep.admissible = V.a < -n_over_t - tol;
    rep.kato = V.a <= 0;
    if (!rep.admissible) {
      rep.verdict = ClassVerdict::out;
      rep.reason = "shifted power needs a < -n/t";
      return rep;
    }
  }

  if (rep.exponent > tol) {
    rep.verdict = ClassVerdict::in_tilde;
    rep.reason = "scaled seminorm vanishes: small-delta slope > 0";
  } else if (rep.exponent >= -tol) {
    rep.verdict = ClassVerdict::in_m;
    rep.reason = "critical scaling: small-delta slope = 0";
  } else {
    rep.verdict = ClassVerdict::out;
    rep.reason = "scaled seminorm blows up: small-delta slope < 0";
  }
  return rep;
}

KatoReport kato_check(const PotentialSpec& V, double alpha, const std::vector<double>& deltas,
                      const GridSpec& g) {
  require(deltas.size() >= 4, ErrorCode::invalid_argument, "kato: need at least 4 deltas");
  const SchechterParams sp =
      make_schechter_params(alpha, 1.0, std::numeric_limits<double>::infinity(), 0.0);
  KatoReport rep;
  rep.deltas = deltas;
  for (double d : deltas) {
    SchechterDiagnostics diag;
    rep.values.push_back(schechter_norm(V, sp, d, g, true, &diag));
    rep.origin_excluded = rep.origin_excluded || diag.origin_excluded;
  }
  bool all_zero = true;
  for (double v : rep.values) all_zero = all_zero && v == 0.0;
  if (all_zero) {
    rep.slope = 0.0;
    rep.decaying = true;
    return rep;
  }
  rep.slope = loglog_fit(rep.deltas, rep.values).slope;
  // A diverging local integral anywhere already rules the class out.
  rep.decaying = !rep.origin_excluded && rep.slope > 0.02;
  return rep;
}

MorreyReport morrey_norm(const PotentialSpec& V, double p, double lambda_m, const GridSpec& g,
                         int num_radii) {
  require(std::isfinite(p) && p >= 1, ErrorCode::invalid_argument, "morrey: p must be >= 1");
  require(std::isfinite(lambda_m) && lambda_m > 0, ErrorCode::invalid_argument,
          "morrey: lambda must be positive");
  require(num_radii >= 2, ErrorCode::invalid_argument, "morrey: need at least 2 radii");
  const double rmin = 4 * g.h, rmax = 0.2 * g.r_box;
  require(rmin < rmax, ErrorCode::under_resolved, "morrey: grid too coarse for the radius range");

  std::vector<std::array<double, 3>> centers;
  centers.push_back({0, 0, 0});
  for (int d = 0; d < g.n; ++d)
    for (double f : {-0.5, -0.25, 0.25, 0.5}) {
      std::array<double, 3> c{0, 0, 0};
      c[d] = f * g.r_box;
      centers.push_back(snap_to_lattice(g, c));
    }

  LocalIntegrand li{&V, p, 0.0, true, g.n, g.h};
  MorreyReport rep;
  for (int i = 0; i < num_radii; ++i) {
    const double rho =
        std::exp(std::log(rmin) + (std::log(rmax) - std::log(rmin)) * double(i) /
                                      double(num_radii - 1));
    for (const auto& c : centers) {
      bool fits = true;
      for (int d = 0; d < g.n; ++d) fits = fits && std::abs(c[d]) + rho <= g.r_box + kEdgeTol;
      if (!fits) continue;
      const double integral = windowed_local_integral(li, c, rho);
      const double value = std::pow(std::pow(rho, lambda_m - g.n) * integral, 1.0 / p);
      if (value > rep.value) {
        rep.value = value;
        rep.attained_radius = rho;
        rep.attained_center = c;
      }
    }
  }
  return rep;
}

ReverseHolderReport reverse_holder_ratio(const PotentialSpec& V, double p,
                                         const std::vector<Region>& balls, const GridSpec& g) {
  require(std::isfinite(p) && p > 1, ErrorCode::invalid_argument, "reverse holder: p must be > 1");
  require(!balls.empty(), ErrorCode::invalid_argument, "reverse holder: no balls");
  require(!is_zero_potential(V), ErrorCode::invalid_argument,
          "reverse holder: zero potential has no ratio");
  if (V.family != PotentialFamily::tabulated)
    require(V.sign > 0, ErrorCode::sign_error, "reverse holder: potential takes negative values");

  const PotentialSpec unit = make_constant_potential(1, 1.0);
  ReverseHolderReport rep;
  for (const auto& b : balls) {
    require(b.kind == Region::Kind::ball, ErrorCode::invalid_argument,
            "reverse holder: regions must be balls");
    const double rho = b.extent[0];
    require(rho >= 4 * g.h - kEdgeTol, ErrorCode::under_resolved,
            "reverse holder: ball radius below 4h");
    const std::array<double, 3> c = snap_to_lattice(g, b.center);
    for (int d = 0; d < g.n; ++d)
      require(std::abs(c[d]) + rho <= g.r_box + kEdgeTol, ErrorCode::invalid_argument,
              "reverse holder: ball leaves the box");

    if (V.family == PotentialFamily::tabulated) {
      const GridFunction& tab = *V.table;
      const GridSpec& tg = tab.spec();
      for (std::size_t i = 0; i < tab.size(); ++i) {
        std::array<long, 3> idx{0, 0, 0};
        unflatten(tg, i, idx);
        if (!b.contains(tg.n, coordinate(tg, idx))) continue;
        require(tab[i].real() >= -1e-12, ErrorCode::sign_error,
                "reverse holder: potential takes negative values");
      }
    }

    LocalIntegrand num{&V, p, 0.0, true, g.n, g.h};
    LocalIntegrand den{&V, 1.0, 0.0, true, g.n, g.h};
    LocalIntegrand vol{&unit, 1.0, 0.0, true, g.n, g.h};
    const double ip = windowed_local_integral(num, c, rho);
    const double i1 = windowed_local_integral(den, c, rho);
    const double iv = windowed_local_integral(vol, c, rho);
    require(i1 > 0, ErrorCode::invalid_argument, "reverse holder: potential vanishes on a ball");
    const double ratio = std::pow(ip / iv, 1.0 / p) / (i1 / iv);
    rep.per_ball.push_back(ratio);
    rep.max_ratio = std::max(rep.max_ratio, ratio);
  }
  return rep;
}

}  // namespace sh
