#pragma once

#include "grid.hh"

namespace sh {

// Smoothing of order s at scale delta: Fourier multiplier
// (delta^2 + |xi|^2)^{-s/2}.
struct BesselParams {
  double s = 1.0;
  double delta = 1.0;
};

BesselParams make_bessel(double s, double delta);

// Weight w_alpha at distance |x| = dist: dist^{alpha-n} for alpha < n,
// max(0, log(1/dist)) for alpha = n (the clamp only matters for windows
// wider than 1; callers flag that), 1 for alpha > n. Rejects dist = 0
// unless the weight is bounded there.
double weight_w(double alpha, int n, double dist);

std::vector<cd> bessel_multiplier(const BesselParams& p, const GridSpec& g);
GridFunction apply_bessel(const BesselParams& p, const GridFunction& f);

// Kernel column: the multiplier applied to the unit point mass at 0.
GridFunction bessel_kernel(const BesselParams& p, const GridSpec& g);

struct BesselKernelReport {
  // max relative deviation of the (s, delta) kernel from the rescaled
  // (s, 1) kernel computed on an independently scaled grid.
  double scaling_max_rel_violation = 0.0;
  // fit of kernel <= C w_s near the origin (0 < |x| < 1), plus the converse
  // floor: min of the same ratio over 0 < |x| <= 1/2.
  double wbound_c = 0.0;
  double wbound_min_ratio = 0.0;
  // exponential tail on |x| > 1: least-squares decay rate, the rate
  // clamped into (0,1), and the zero-violation constant at that rate.
  double tail_ls_rate = 0.0;
  double tail_a = 0.0;
  double tail_c = 0.0;
  // zero-violation constant for kernel^q <= C * kernel_of_order(q(s-n)+n).
  double power_q = 0.0;
  double power_c = 0.0;
  double boundary_contamination = 0.0;
};

// Checks run on the delta = 1 kernel except the scaling identity, which
// compares (s, delta) against (s, 1). Throws insufficient_resolution when
// the kernel does not decay below 1e-8 of its peak before the boundary.
BesselKernelReport bessel_kernel_checks(const BesselParams& p, const GridSpec& g,
                                        double power_q = 1.5);

}  // namespace sh
