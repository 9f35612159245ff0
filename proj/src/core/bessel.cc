#include "bessel.hh"

#include <algorithm>
#include <cmath>
#include <vector>

#include "errors.hh"

namespace sh {

BesselParams make_bessel(double s, double delta) {
  require(s > 0.0 && std::isfinite(s), ErrorCode::invalid_argument,
          "bessel: order s must be positive");
  require(delta > 0.0 && std::isfinite(delta), ErrorCode::invalid_argument,
          "bessel: scale delta must be positive");
  return BesselParams{s, delta};
}

double weight_w(double alpha, int n, double dist) {
  require(alpha > 0.0, ErrorCode::invalid_argument, "weight: alpha must be positive");
  const double dn = static_cast<double>(n);
  if (std::abs(alpha - dn) <= 1e-12) {
    require(dist > 0.0, ErrorCode::invalid_argument, "weight: log branch needs |x| > 0");
    return std::max(0.0, std::log(1.0 / dist));
  }
  if (alpha > dn) return 1.0;
  require(dist > 0.0, ErrorCode::invalid_argument, "weight: singular branch needs |x| > 0");
  return std::pow(dist, alpha - dn);
}

std::vector<cd> bessel_multiplier(const BesselParams& p, const GridSpec& g) {
  std::vector<cd> table(g.total());
  std::array<long, 3> idx;
  for (std::size_t i = 0; i < table.size(); ++i) {
    unflatten(g, i, idx);
    const auto xi = frequency(g, idx);
    double q = p.delta * p.delta;
    for (int d = 0; d < g.n; ++d) q += xi[d] * xi[d];
    table[i] = std::pow(q, -0.5 * p.s);
  }
  return table;
}

GridFunction apply_bessel(const BesselParams& p, const GridFunction& f) {
  return apply_multiplier_table(f, bessel_multiplier(p, f.spec()));
}

GridFunction bessel_kernel(const BesselParams& p, const GridSpec& g) {
  return apply_bessel(p, delta_at(g, {0, 0, 0}));
}

namespace {
double dist_of(const GridSpec& g, std::size_t flat) {
  std::array<long, 3> idx;
  unflatten(g, flat, idx);
  const auto x = coordinate(g, idx);
  double r2 = 0;
  for (int d = 0; d < g.n; ++d) r2 += x[d] * x[d];
  return std::sqrt(r2);
}
}  // namespace

BesselKernelReport bessel_kernel_checks(const BesselParams& p, const GridSpec& g, double power_q) {
  BesselKernelReport rep;

  const BesselParams unit = make_bessel(p.s, 1.0);
  const GridFunction ks = bessel_kernel(p, g);
  const GridFunction k1 = bessel_kernel(unit, g);

  rep.boundary_contamination = std::max(boundary_contamination(ks), boundary_contamination(k1));
  require(rep.boundary_contamination < 1e-8, ErrorCode::insufficient_resolution,
          "bessel: kernel does not decay below 1e-8 of its peak inside the box");

  // Scaling identity against an independently computed unit-scale kernel on
  // the dilated grid, whose lattice is exactly delta times this lattice.
  const GridSpec scaled = make_grid(g.n, p.delta * g.r_box, g.npoints);
  const GridFunction k_ref = bessel_kernel(unit, scaled);
  const double factor = std::pow(p.delta, g.n - p.s);
  double peak = 0.0;
  for (std::size_t i = 0; i < ks.size(); ++i) peak = std::max(peak, std::abs(ks[i]));
  for (std::size_t i = 0; i < ks.size(); ++i) {
    const double lhs = ks[i].real();
    if (std::abs(lhs) < 1e-12 * peak) continue;
    const double rhs = factor * k_ref[i].real();
    rep.scaling_max_rel_violation =
        std::max(rep.scaling_max_rel_violation, std::abs(lhs - rhs) / std::abs(lhs));
  }

  // Near-origin comparison against w_s, and exponential tail on |x| > 1.
  double k1peak = 0.0;
  for (std::size_t i = 0; i < k1.size(); ++i) k1peak = std::max(k1peak, std::abs(k1[i]));
  double min_ratio = std::numeric_limits<double>::infinity();
  double sum_x = 0, sum_y = 0, sum_xx = 0, sum_xy = 0;
  std::size_t tail_count = 0;
  std::vector<std::pair<double, double>> tail_samples;
  for (std::size_t i = 0; i < k1.size(); ++i) {
    const double d = dist_of(g, i);
    const double v = k1[i].real();
    if (d > 0.0 && d < 1.0) {
      const double w = weight_w(p.s, g.n, d);
      if (w > 0.0) {
        const double ratio = v / w;
        rep.wbound_c = std::max(rep.wbound_c, ratio);
        if (d <= 0.5) min_ratio = std::min(min_ratio, ratio);
      }
    } else if (d > 1.0 && d <= 0.9 * g.r_box && v > 1e-14 * k1peak) {
      const double ly = std::log(v);
      sum_x += d;
      sum_y += ly;
      sum_xx += d * d;
      sum_xy += d * ly;
      ++tail_count;
      tail_samples.emplace_back(d, v);
    }
  }
  rep.wbound_min_ratio = std::isfinite(min_ratio) ? min_ratio : 0.0;
  require(tail_count >= 4, ErrorCode::insufficient_resolution,
          "bessel: too few usable tail samples beyond |x| = 1");
  const double denom = tail_count * sum_xx - sum_x * sum_x;
  rep.tail_ls_rate = -(tail_count * sum_xy - sum_x * sum_y) / denom;
  rep.tail_a = std::min(std::max(rep.tail_ls_rate, 1e-3), 0.99);
  for (const auto& [d, v] : tail_samples)
    rep.tail_c = std::max(rep.tail_c, v * std::exp(rep.tail_a * d));

  // Pointwise power bound kernel^q <= C kernel_{q(s-n)+n} at unit scale.
  const double s2 = power_q * (p.s - g.n) + g.n;
  rep.power_q = power_q;
  if (s2 > 0.0) {
    const GridFunction k2 = bessel_kernel(make_bessel(s2, 1.0), g);
    for (std::size_t i = 0; i < k1.size(); ++i) {
      const double v = k1[i].real();
      const double w = k2[i].real();
      if (v > 1e-10 * k1peak && w > 0.0)
        rep.power_c = std::max(rep.power_c, std::pow(v, power_q) / w);
    }
  }
  return rep;
}

}  // namespace sh
