#include "heat.hh"

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>
#include <utility>

#include "errors.hh"
#include "resolvent.hh"

namespace sh {

namespace {

constexpr double kPi = 3.14159265358979323846;

double factorial(int k) {
  double f = 1.0;
  for (int j = 2; j <= k; ++j) f *= j;
  return f;
}

// Shared contour driver. node_shift, when given, overrides fixed_shift and
// is evaluated per node; contributions of non-converged nodes are dropped
// and reported, then the whole application fails.
GridFunction contour_apply(const EllipticSymbol& P, const PotentialSpec& V, double t,
                           const GridFunction& f, const ContourSpec& spec,
                           const std::function<ComplexShift(const ContourNode&)>* node_shift,
                           const ComplexShift* fixed_shift, ContourDiagnostics* diag) {
  const int K = contour_resolvent_power(spec, P.n, P.m);
  const auto nodes = contour_nodes(spec, t, P.n, P.m);

  std::vector<cd> acc(f.size(), cd(0.0, 0.0));
  ContourDiagnostics local;
  local.nodes_total = int(nodes.size());

  for (std::size_t j = 0; j < nodes.size(); ++j) {
    ComplexShift eta{cd(0, 0), cd(0, 0), cd(0, 0)};
    const ComplexShift* shift = fixed_shift;
    if (node_shift) {
      eta = (*node_shift)(nodes[j]);
      shift = &eta;
    }
    const cd w = nodes[j].weight * std::exp(-t * nodes[j].lambda);
    require(std::isfinite(w.real()) && std::isfinite(w.imag()),
            ErrorCode::invalid_argument, "contour: non-finite path factor");

    ResolventResult res = resolvent_power(P, V, nodes[j].lambda, f, K,
                                          spec.neumann_tol, spec.max_terms, shift);
    local.max_residual = std::max(local.max_residual, res.diag.residual);
    local.worst_contraction =
        std::max(local.worst_contraction, res.diag.contraction_estimate);
    if (!res.diag.converged) {
      ++local.nodes_failed;
      local.failed_nodes.push_back(int(j));
      continue;
    }
    const auto& uv = res.u.values();
    for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += w * uv[i];
  }

  cd denom = cd(2.0 * kPi, 0.0) * cd(0.0, 1.0);
  for (int j = 0; j < K - 1; ++j) denom *= cd(-t, 0.0);
  const cd pref = cd(factorial(K - 1), 0.0) / denom;
  for (auto& v : acc) v *= pref;

  if (diag) *diag = local;
  if (local.nodes_failed > 0) {
    std::string msg = "contour: resolvent failed at node(s)";
    for (std::size_t j = 0; j < local.failed_nodes.size() && j < 8; ++j)
      msg += " " + std::to_string(local.failed_nodes[j]);
    if (local.failed_nodes.size() > 8) msg += " ...";
    fail(ErrorCode::node_failure, msg);
  }
  return GridFunction(f.spec(), std::move(acc));
}

}  // namespace

int contour_resolvent_power(const ContourSpec& spec, int n, int m) {
  require(n >= 1 && n <= 3 && m >= 1 && m <= 4, ErrorCode::invalid_argument,
          "contour: dimension or order out of range");
  int l = spec.l;
  if (l < 0) {
    l = 0;
    while (2.0 * (l + 1) <= double(n) / (2.0 * m)) ++l;
  }
  require(2.0 * (l + 1) > double(n) / (2.0 * m), ErrorCode::invalid_argument,
          "contour: resolvent power must exceed n/(2m)");
  return 2 * (l + 1);
}

std::vector<ContourNode> contour_nodes(const ContourSpec& spec, double t, int n, int m) {
  require(std::isfinite(t) && t > 0, ErrorCode::invalid_argument,
          "contour: t must be positive");
  require(spec.mu > 0 && spec.mu < 0.5 * kPi, ErrorCode::invalid_argument,
          "contour: opening angle outside (0, pi/2)");
  require(spec.nodes_arc >= 4 && spec.nodes_ray >= 4, ErrorCode::invalid_argument,
          "contour: too few quadrature nodes");
  require(n >= 1 && n <= 3 && m >= 1 && m <= 4, ErrorCode::invalid_argument,
          "contour: dimension or order out of range");
  const double radius = spec.radius > 0 ? spec.radius : 1.0 / t;
  require(std::isfinite(radius) && radius > 0, ErrorCode::invalid_argument,
          "contour: bad radius");

  std::vector<ContourNode> out;
  out.reserve(std::size_t(spec.nodes_arc) + 2 * std::size_t(spec.nodes_ray));

  // Arc theta in [mu, 2pi - mu]: d lambda = i lambda d theta. Traversed
  // counterclockwise, spectrum on the left.
  const QuadratureRule arc =
      map_to_interval(gauss_legendre(spec.nodes_arc), spec.mu, 2.0 * kPi - spec.mu);
  for (std::size_t j = 0; j < arc.nodes.size(); ++j) {
    const cd lam = std::polar(radius, arc.nodes[j]);
    out.push_back({lam, cd(0.0, 1.0) * lam * arc.weights[j]});
  }

  // Rays r = radius * e^u truncated where exp(-t r cos mu) drops below
  // 1e-16 (e^-37); dr = r du absorbs the substitution. The upper ray is
  // traversed inward, hence the sign flip against the outward parameter.
  const double truncation = 37.0 / (t * radius * std::cos(spec.mu));
  const double span = truncation > 1.0 ? std::max(std::log(truncation), 0.1) : 0.1;
  const QuadratureRule ray = map_to_interval(gauss_legendre(spec.nodes_ray), 0.0, span);
  const cd upper = std::polar(1.0, spec.mu);
  const cd lower = std::polar(1.0, -spec.mu);
  for (std::size_t j = 0; j < ray.nodes.size(); ++j) {
    const double r = radius * std::exp(ray.nodes[j]);
    const double w = ray.weights[j] * r;
    out.push_back({r * upper, -upper * w});
    out.push_back({r * lower, lower * w});
  }
  return out;
}

GridFunction semigroup_apply(const EllipticSymbol& P, const PotentialSpec& V, double t,
                             const GridFunction& f, HeatMethod method,
                             const ContourSpec* contour, const ComplexShift* shift,
                             ContourDiagnostics* diag) {
  require(std::isfinite(t) && t > 0, ErrorCode::invalid_argument,
          "heat: t must be positive");
  require(P.n == f.spec().n, ErrorCode::invalid_argument, "heat: dimension mismatch");

  switch (method) {
    case HeatMethod::spectral: {
      require(is_zero_potential(V), ErrorCode::method_unavailable,
              "heat: spectral route needs V = 0");
      std::vector<cd> table = symbol_multiplier(P, f.spec(), shift);
      for (auto& v : table) {
        v = std::exp(-t * v);
        require(std::isfinite(v.real()) && std::isfinite(v.imag()),
                ErrorCode::invalid_argument,
                "heat: spectral factor overflow (shift too large for this t)");
      }
      return apply_multiplier_table(f, table);
    }
    case HeatMethod::dense: {
      require(shift == nullptr, ErrorCode::method_unavailable,
              "heat: dense route has no shift support");
      check_dense_gate(f.spec());
      DenseSemigroup sg(P, V, f.spec());
      return sg.apply(t, f);
    }
    case HeatMethod::contour: {
      const ContourSpec fallback;
      const ContourSpec& cs = contour ? *contour : fallback;
      return contour_apply(P, V, t, f, cs, nullptr, shift, diag);
    }
  }
  fail(ErrorCode::internal, "heat: unknown method");
}

GridFunction kernel_column(const EllipticSymbol& P, const PotentialSpec& V, double t,
                           const std::array<double, 3>& y, const GridSpec& g,
                           HeatMethod method, const ContourSpec* contour,
                           ContourDiagnostics* diag) {
  return semigroup_apply(P, V, t, delta_at(g, y), method, contour, nullptr, diag);
}

GridFunction kernel_column_decay_probe(const EllipticSymbol& P, const PotentialSpec& V,
                                       double t, const std::array<double, 3>& y,
                                       const GridSpec& g, const DecayProbe& probe,
                                       const ContourSpec* contour,
                                       ContourDiagnostics* diag) {
  require(probe.axis >= 0 && probe.axis < P.n, ErrorCode::invalid_argument,
          "decay probe: axis out of range");
  require(probe.direction == 1.0 || probe.direction == -1.0,
          ErrorCode::invalid_argument, "decay probe: direction must be +-1");
  require(std::isfinite(probe.delta) && probe.delta >= 0, ErrorCode::invalid_argument,
          "decay probe: bad delta");
  const ContourSpec fallback;
  const ContourSpec& cs = contour ? *contour : fallback;
  const double root = 1.0 / (2.0 * P.m);
  std::function<ComplexShift(const ContourNode&)> node_shift =
      [&](const ContourNode& node) {
        ComplexShift eta{cd(0, 0), cd(0, 0), cd(0, 0)};
        eta[std::size_t(probe.axis)] =
            cd(-probe.direction * probe.delta * std::pow(std::abs(node.lambda), root), 0.0);
        return eta;
      };
  return contour_apply(P, V, t, delta_at(g, y), cs, &node_shift, nullptr, diag);
}

namespace {

struct SampleSet {
  std::vector<EnvelopeSample> samples;
  std::size_t censored = 0;
};

// Sample |p_t(x, y)| over the interior window. Near-diagonal points
// (|x - y| < 2h) and the outer 10% shell are structural exclusions; only
// values that fall below the relative floor count as censored. phi pairs
// d^gamma with t^{gamma - 1} so gamma = 2m/(2m-1) recovers the usual scale.
SampleSet collect_gaussian_samples(const std::vector<HeatColumn>& columns, int n,
                                   double gamma, double floor_rel) {
  SampleSet out;
  for (const auto& hc : columns) {
    const GridSpec& g = hc.col.spec();
    require(g.n == n, ErrorCode::invalid_argument, "envelope: column dimension mismatch");
    require(std::isfinite(hc.t) && hc.t > 0, ErrorCode::invalid_argument,
            "envelope: bad column time");
    double peak = 0.0;
    for (std::size_t i = 0; i < hc.col.size(); ++i)
      peak = std::max(peak, std::abs(hc.col[i]));
    if (!(peak > 0)) continue;
    const double floor_abs = floor_rel * peak;
    const double tfac = std::pow(hc.t, gamma - 1.0);

    std::array<long, 3> idx{};
    for (std::size_t i = 0; i < hc.col.size(); ++i) {
      unflatten(g, i, idx);
      const auto x = coordinate(g, idx);
      bool shell = false;
      for (int d = 0; d < g.n; ++d)
        if (std::abs(x[d]) > 0.9 * g.r_box) { shell = true; break; }
      if (shell) continue;
      double d2 = 0.0;
      for (int d = 0; d < g.n; ++d) d2 += (x[d] - hc.y[d]) * (x[d] - hc.y[d]);
      const double dist = std::sqrt(d2);
      if (dist < 2.0 * g.h) continue;
      const double v = std::abs(hc.col[i]);
      if (!(v >= floor_abs)) {
        ++out.censored;
        continue;
      }
      out.samples.push_back({hc.t, std::pow(dist, gamma) / tfac, v});
    }
  }
  return out;
}

void check_fit_options(const GaussianFitOptions& opt) {
  require(opt.floor_rel > 0 && opt.floor_rel < 1, ErrorCode::invalid_argument,
          "envelope: floor must sit in (0, 1)");
  require(opt.cap_factor >= 1, ErrorCode::invalid_argument,
          "envelope: cap factor below 1");
  require(opt.cap_absolute >= 0, ErrorCode::invalid_argument,
          "envelope: negative absolute cap");
  require(opt.c_max > 0 && opt.c_steps >= 1, ErrorCode::invalid_argument,
          "envelope: bad candidate grid");
}

}  // namespace

HeatEnvelopeReport gaussian_envelope_fit(const std::vector<HeatColumn>& columns, int m,
                                         int n, const GaussianFitOptions& opt) {
  require(!columns.empty(), ErrorCode::invalid_argument, "envelope: no columns");
  require(n >= 1 && n <= 3 && m >= 1 && m <= 4, ErrorCode::invalid_argument,
          "envelope: dimension or order out of range");
  check_fit_options(opt);

  const double kappa = 2.0 * m / (2.0 * m - 1.0);
  SampleSet set = collect_gaussian_samples(columns, n, kappa, opt.floor_rel);
  require(!set.samples.empty(), ErrorCode::no_feasible_envelope,
          "envelope: every sample censored");

  EnvelopeOptions eo;
  eo.power = double(n) / (2.0 * m);
  eo.c_max = opt.c_max;
  eo.c_steps = opt.c_steps;
  eo.cap_factor = opt.cap_factor;
  eo.cap_override = opt.cap_absolute;

  std::vector<double> wgrid = {0.0};
  if (opt.allow_local_w) wgrid = {0.0, 0.05, 0.1, 0.25, 0.5, 1.0, 2.0, 4.0};

  HeatEnvelopeReport rep;
  rep.exponent = kappa;
  rep.samples_used = set.samples.size();
  rep.samples_censored = set.censored;

  EnvelopeReport best;
  double best_w = 0.0;
  bool have = false;
  for (double w : wgrid) {
    eo.w = w;
    const EnvelopeReport er = envelope_fit(set.samples, eo);
    if (opt.cap_absolute > 0 && er.c0_constant > er.cap) continue;
    if (!have) {
      best = er;
      best_w = w;
      have = true;
    }
    if (er.feasible) {
      best = er;
      best_w = w;
      break;
    }
  }
  require(have, ErrorCode::no_feasible_envelope,
          "envelope: constant exceeds the absolute cap for every damping");
  rep.c_fit = best.c_fit;
  rep.c_refined = best.c_refined;
  rep.constant = best.constant;
  rep.cap = best.cap;
  rep.w = best_w;
  rep.violations = best.violations;
  rep.feasible = best.feasible;
  return rep;
}

bool envelope_feasible_at_exponent(const std::vector<HeatColumn>& columns, int m, int n,
                                   double exponent, double c, double w,
                                   const GaussianFitOptions& opt) {
  require(!columns.empty(), ErrorCode::invalid_argument, "envelope: no columns");
  require(n >= 1 && n <= 3 && m >= 1 && m <= 4, ErrorCode::invalid_argument,
          "envelope: dimension or order out of range");
  require(std::isfinite(exponent) && exponent > 0, ErrorCode::invalid_argument,
          "envelope: bad probe exponent");
  require(std::isfinite(c) && c >= 0, ErrorCode::invalid_argument,
          "envelope: bad probe damping");
  check_fit_options(opt);

  SampleSet set = collect_gaussian_samples(columns, n, exponent, opt.floor_rel);
  require(!set.samples.empty(), ErrorCode::no_feasible_envelope,
          "envelope: every sample censored");
  const double power = double(n) / (2.0 * m);
  const double c0 = envelope_min_constant(set.samples, power, w, 0.0);
  const double cap = opt.cap_absolute > 0 ? opt.cap_absolute : opt.cap_factor * c0;
  return envelope_min_constant(set.samples, power, w, c) <= cap;
}

double increment_sup(const GridFunction& f, int axis, long steps) {
  const GridSpec& g = f.spec();
  require(axis >= 0 && axis < g.n, ErrorCode::invalid_argument,
          "increment: axis out of range");
  double best = 0.0;
  std::array<long, 3> idx{};
  for (std::size_t i = 0; i < f.size(); ++i) {
    unflatten(g, i, idx);
    const auto x = coordinate(g, idx);
    bool shell = false;
    for (int d = 0; d < g.n; ++d)
      if (std::abs(x[d]) > 0.9 * g.r_box) { shell = true; break; }
    if (shell) continue;
    std::array<long, 3> jdx = idx;
    jdx[std::size_t(axis)] =
        ((idx[std::size_t(axis)] + steps) % g.npoints + g.npoints) % g.npoints;
    best = std::max(best, std::abs(f[flatten(g, jdx)] - f[i]));
  }
  return best;
}

HolderReport holder_exponent_estimate(const GridFunction& col, const std::array<double, 3>& y,
                                      double t, int m, const std::vector<long>& h_steps,
                                      const GaussianFitOptions& opt) {
  const GridSpec& g = col.spec();
  require(std::isfinite(t) && t > 0, ErrorCode::invalid_argument,
          "holder: t must be positive");
  require(m >= 1 && m <= 4, ErrorCode::invalid_argument, "holder: order out of range");
  require(!h_steps.empty(), ErrorCode::invalid_argument, "holder: no shifts");
  check_fit_options(opt);

  const double t_scale = std::pow(t, 1.0 / (2.0 * m));
  std::vector<double> lx, ly;
  std::vector<long> usable;
  for (long s : h_steps) {
    require(s != 0, ErrorCode::invalid_argument, "holder: zero shift");
    const double hlen = std::abs(double(s)) * g.h;
    require(hlen < t_scale, ErrorCode::invalid_argument,
            "holder: shift must stay below t^{1/2m}");
    const double sup = increment_sup(col, 0, s);
    if (!(sup > 0)) continue;
    lx.push_back(std::log(hlen));
    ly.push_back(std::log(sup));
    usable.push_back(s);
  }
  require(lx.size() >= 4, ErrorCode::under_resolved, "holder: too few usable shifts");

  const LinearFit fit = linear_fit(lx, ly);
  HolderReport rep;
  rep.slope = fit.slope;
  rep.r2 = fit.r2;
  rep.usable_steps = lx.size();

  // Increment field collapsed by (|h| / t^{1/2m})^slope, then the same
  // envelope machinery as the on-diagonal fit.
  const double kappa = 2.0 * m / (2.0 * m - 1.0);
  const double tfac = std::pow(t, kappa - 1.0);
  struct Raw {
    double dist, hlen, value;
  };
  std::vector<Raw> raw;
  double peak = 0.0;
  std::array<long, 3> idx{};
  for (long s : usable) {
    const double hlen = std::abs(double(s)) * g.h;
    for (std::size_t i = 0; i < col.size(); ++i) {
      unflatten(g, i, idx);
      const auto x = coordinate(g, idx);
      bool shell = false;
      for (int d = 0; d < g.n; ++d)
        if (std::abs(x[d]) > 0.9 * g.r_box) { shell = true; break; }
      if (shell) continue;
      double d2 = 0.0;
      for (int d = 0; d < g.n; ++d) d2 += (x[d] - y[d]) * (x[d] - y[d]);
      const double dist = std::sqrt(d2);
      if (dist < 2.0 * g.h) continue;
      std::array<long, 3> jdx = idx;
      jdx[0] = ((idx[0] + s) % g.npoints + g.npoints) % g.npoints;
      const double v = std::abs(col[flatten(g, jdx)] - col[i]);
      if (!(v > 0)) continue;
      raw.push_back({dist, hlen, v});
      peak = std::max(peak, v);
    }
  }
  require(peak > 0, ErrorCode::under_resolved, "holder: increment field vanished");

  std::vector<EnvelopeSample> samples;
  samples.reserve(raw.size());
  for (const auto& r : raw) {
    if (r.value < opt.floor_rel * peak) continue;
    const double collapse = std::pow(r.hlen / t_scale, rep.slope);
    samples.push_back({t, std::pow(r.dist, kappa) / tfac, r.value / collapse});
  }
  require(!samples.empty(), ErrorCode::no_feasible_envelope,
          "holder: every increment censored");

  EnvelopeOptions eo;
  eo.power = double(g.n) / (2.0 * m);
  eo.c_max = opt.c_max;
  eo.c_steps = opt.c_steps;
  eo.cap_factor = opt.cap_factor;
  eo.cap_override = opt.cap_absolute;
  const EnvelopeReport er = envelope_fit(samples, eo);
  rep.c_fit = er.c_fit;
  rep.constant = er.constant;
  rep.envelope_feasible = er.feasible;
  return rep;
}

DgReport davies_gaffney_measure(const EllipticSymbol& P, const PotentialSpec& V,
                                const Region& e_region, const Region& f_region,
                                const std::vector<double>& t_values, const GridSpec& g,
                                HeatMethod method, const ContourSpec* contour,
                                bool local_mode) {
  require(P.n == g.n, ErrorCode::invalid_argument, "dg: dimension mismatch");
  require(t_values.size() >= 3, ErrorCode::invalid_argument, "dg: need at least 3 times");
  for (std::size_t i = 0; i < t_values.size(); ++i) {
    require(std::isfinite(t_values[i]) && t_values[i] > 0, ErrorCode::invalid_argument,
            "dg: times must be positive");
    require(i == 0 || t_values[i] > t_values[i - 1], ErrorCode::invalid_argument,
            "dg: times must increase");
  }
  const double dist = region_distance(e_region, f_region, P.n);
  require(dist >= 4.0 * g.h, ErrorCode::under_resolved, "dg: regions closer than 4h");

  const GridFunction ind = from_function(g, [&](const std::array<double, 3>& x) {
    return e_region.contains(g.n, x) ? cd(1.0, 0.0) : cd(0.0, 0.0);
  });
  const double norm_e = lp_norm(ind, 2.0, &e_region);
  require(norm_e > 0, ErrorCode::invalid_argument, "dg: source region misses the lattice");

  const double kappa = 2.0 * P.m / (2.0 * P.m - 1.0);
  DgReport rep;
  rep.distance = dist;
  std::vector<double> xs, ys, ts;
  for (double t : t_values) {
    const GridFunction u = semigroup_apply(P, V, t, ind, method, contour, nullptr, nullptr);
    DgSample s;
    s.t = t;
    s.mass_ratio = lp_norm(u, 2.0, &f_region) / norm_e;
    s.censored = !(s.mass_ratio > 1e-14);
    rep.samples.push_back(s);
    if (s.censored) {
      ++rep.censored;
      continue;
    }
    xs.push_back(-std::pow(dist, kappa) * std::pow(t, -1.0 / (2.0 * P.m - 1.0)));
    ys.push_back(std::log(s.mass_ratio));
    ts.push_back(t);
  }
  require(xs.size() >= 3, ErrorCode::mass_below_floor, "dg: too few uncensored masses");

  if (local_mode) {
    const MultiFit fit = least_squares({xs, ts}, ys);
    rep.c5 = fit.coef[0];
    rep.w = fit.coef[1];
    rep.r2 = fit.r2;
  } else {
    const LinearFit fit = linear_fit(xs, ys);
    rep.c5 = fit.slope;
    rep.r2 = fit.r2;
  }
  return rep;
}

double region_distance(const Region& a, const Region& b, int n) {
  require(n >= 1 && n <= 3, ErrorCode::invalid_argument, "region: dimension out of range");
  const auto point_to_box = [n](const std::array<double, 3>& p, const Region& box) {
    double d2 = 0.0;
    for (int d = 0; d < n; ++d) {
      const double gap = std::max(0.0, std::abs(p[d] - box.center[d]) - box.extent[d]);
      d2 += gap * gap;
    }
    return std::sqrt(d2);
  };
  if (a.kind == Region::Kind::ball && b.kind == Region::Kind::ball) {
    double d2 = 0.0;
    for (int d = 0; d < n; ++d)
      d2 += (a.center[d] - b.center[d]) * (a.center[d] - b.center[d]);
    return std::max(0.0, std::sqrt(d2) - a.extent[0] - b.extent[0]);
  }
  if (a.kind == Region::Kind::box && b.kind == Region::Kind::box) {
    double d2 = 0.0;
    for (int d = 0; d < n; ++d) {
      const double gap =
          std::max(0.0, std::abs(a.center[d] - b.center[d]) - a.extent[d] - b.extent[d]);
      d2 += gap * gap;
    }
    return std::sqrt(d2);
  }
  const Region& box = a.kind == Region::Kind::box ? a : b;
  const Region& ball = a.kind == Region::Kind::box ? b : a;
  return std::max(0.0, point_to_box(ball.center, box) - ball.extent[0]);
}

}  // namespace sh
