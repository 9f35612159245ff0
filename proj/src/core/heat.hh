#pragma once

#include <vector>

#include "dense.hh"
#include "fit.hh"
#include "grid.hh"
#include "potential.hh"
#include "quadrature.hh"
#include "symbol.hh"

namespace sh {

enum class HeatMethod { spectral, dense, contour };

// e^{-tL} as a contour integral around the right half-line: a circle arc of
// the given radius joined to two rays at angles +-mu, traversed so the
// spectrum stays on the left. radius <= 0 selects the 1/t default; l < 0
// selects the minimal index with 2(l+1) > n/(2m).
struct ContourSpec {
  double mu = 0.78539816339744831;  // pi/4
  double radius = 0.0;
  int l = -1;
  int nodes_arc = 64;
  int nodes_ray = 64;
  double neumann_tol = 1e-10;
  int max_terms = 200;
};

struct ContourNode {
  cd lambda;
  cd weight;  // path weight, orientation included
};

// Quadrature nodes of the contour for given (spec, t, n, m): arc nodes on
// theta in [mu, 2pi - mu] plus log-substituted ray nodes truncated where
// exp(-t r cos mu) < 1e-16.
std::vector<ContourNode> contour_nodes(const ContourSpec& spec, double t, int n, int m);

// Resolvent power order 2(l+1) for the effective contour index l.
int contour_resolvent_power(const ContourSpec& spec, int n, int m);

struct ContourDiagnostics {
  int nodes_total = 0;
  int nodes_failed = 0;
  std::vector<int> failed_nodes;
  double max_residual = 0.0;
  double worst_contraction = 0.0;
};

// Semigroup application. spectral: multiplier exp(-t P(xi)), V = 0 only.
// dense: eigendecomposition oracle, gated at 4096 points. contour:
// (2(l+1)-1)!/(2 pi i (-t)^{2(l+1)-1}) sum_j w_j e^{-t lambda_j}
// (lambda_j - L)^{-2(l+1)} f with the resolvent powers by successive
// Neumann solves. Throws node_failure listing non-converged nodes.
GridFunction semigroup_apply(const EllipticSymbol& P, const PotentialSpec& V, double t,
                             const GridFunction& f, HeatMethod method,
                             const ContourSpec* contour = nullptr,
                             const ComplexShift* shift = nullptr,
                             ContourDiagnostics* diag = nullptr);

// e^{-tL} delta_y; y must be a lattice point.
GridFunction kernel_column(const EllipticSymbol& P, const PotentialSpec& V, double t,
                           const std::array<double, 3>& y, const GridSpec& g,
                           HeatMethod method, const ContourSpec* contour = nullptr,
                           ContourDiagnostics* diag = nullptr);

// Kernel decay probe: the contour run with the per-node real symbol shift
// eta = -direction * delta * |lambda|^{1/(2m)} along one axis. Boundedness
// of the result across delta evidences exponential off-diagonal decay
// without materializing non-periodic exponential factors.
struct DecayProbe {
  int axis = 0;
  double direction = 1.0;
  double delta = 0.1;
};
GridFunction kernel_column_decay_probe(const EllipticSymbol& P, const PotentialSpec& V,
                                       double t, const std::array<double, 3>& y,
                                       const GridSpec& g, const DecayProbe& probe,
                                       const ContourSpec* contour = nullptr,
                                       ContourDiagnostics* diag = nullptr);

struct HeatColumn {
  double t = 0.0;
  std::array<double, 3> y{0, 0, 0};
  GridFunction col;
};

struct GaussianFitOptions {
  double cap_factor = 2.0;
  double cap_absolute = 0.0;  // 0 disables the absolute cap
  double c_max = 1.0;
  int c_steps = 100;
  bool allow_local_w = false;
  double floor_rel = 1e-13;  // censor below floor_rel * column peak
};

struct HeatEnvelopeReport {
  double c_fit = 0.0;
  double c_refined = 0.0;
  double constant = 0.0;
  double cap = 0.0;
  double w = 0.0;
  double exponent = 0.0;  // 2m/(2m-1)
  int violations = 0;
  std::size_t samples_used = 0;
  std::size_t samples_censored = 0;
  bool feasible = false;
};

// Feasibility search for |p_t(x,y)| <= C t^{-n/2m} e^{wt} e^{-c phi} with
// phi = |x-y|^{2m/(2m-1)} / t^{1/(2m-1)}: largest candidate c keeping the
// minimal C within the cap (cap_factor times the c = 0 constant, or the
// absolute cap when set). w stays 0 unless allow_local_w, which scans a
// small w grid for the first feasible fit.
HeatEnvelopeReport gaussian_envelope_fit(const std::vector<HeatColumn>& columns, int m,
                                         int n, const GaussianFitOptions& opt = {});

// Re-tests feasibility at a probe exponent (same censoring and cap rules);
// used to evidence sharpness of 2m/(2m-1).
bool envelope_feasible_at_exponent(const std::vector<HeatColumn>& columns, int m, int n,
                                   double exponent, double c, double w,
                                   const GaussianFitOptions& opt = {});

// sup_x |f(x + steps*h e_axis) - f(x)| over the interior window (outer 10%
// shell excluded); the shift is cyclic.
double increment_sup(const GridFunction& f, int axis, long steps);

struct HolderReport {
  double slope = 0.0;
  double r2 = 0.0;
  double c_fit = 0.0;
  double constant = 0.0;
  bool envelope_feasible = false;
  std::size_t usable_steps = 0;
};

// Fits log increment_sup against log |h| over lattice-aligned shifts with
// |h| < t^{1/(2m)}, then tests the smoothness-envelope feasibility
// |p_t(x+h,y) - p_t(x,y)| <= C (|h|/t^{1/2m})^slope t^{-n/2m} e^{-c phi}.
HolderReport holder_exponent_estimate(const GridFunction& col, const std::array<double, 3>& y,
                                      double t, int m, const std::vector<long>& h_steps,
                                      const GaussianFitOptions& opt = {});

struct DgSample {
  double t = 0.0;
  double mass_ratio = 0.0;  // ||e^{-tL} 1_E||_{L2(F)} / ||1_E||_{L2(E)}
  bool censored = false;
};

struct DgReport {
  std::vector<DgSample> samples;
  double distance = 0.0;
  double c5 = 0.0;
  double w = 0.0;
  double r2 = 0.0;
  std::size_t censored = 0;
};

// log mass ratio regressed on -d(E,F)^{2m/(2m-1)} t^{-1/(2m-1)} (plus a w t
// term in local mode). Ratios below 1e-14 are censored, not fitted.
DgReport davies_gaffney_measure(const EllipticSymbol& P, const PotentialSpec& V,
                                const Region& e_region, const Region& f_region,
                                const std::vector<double>& t_values, const GridSpec& g,
                                HeatMethod method, const ContourSpec* contour = nullptr,
                                bool local_mode = false);

// Analytic gap between two regions (boxes or balls), axis-aligned.
double region_distance(const Region& a, const Region& b, int n);

}  // namespace sh
