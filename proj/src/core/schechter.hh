#pragma once

#include <array>
#include <limits>
#include <string>
#include <vector>

#include "grid.hh"
#include "potential.hh"

namespace sh {

// Window norm family: N_delta(x) = [ int_{|y-x|<delta} |V(y)|^r w_alpha(x-y) dy ]^{1/r},
// reported through the L^t norm of N_delta (t = inf allowed) and scaled by delta^S.
struct SchechterParams {
  double alpha = 1.0;
  double r = 1.0;
  double t = std::numeric_limits<double>::infinity();
  double S = 0.0;
};

SchechterParams make_schechter_params(double alpha, double r, double t, double S);

struct SchechterDiagnostics {
  bool origin_excluded = false;   // x = 0 dropped because its local integral diverges
  bool log_clamp_active = false;  // alpha = n window wider than 1: log weight clamped at 0
};

// Quadrature: per-cell 4^n-point midpoint rule inside the window ball, with
// the weight-singular cell, the potential-singular cell, and the doubly
// singular origin window replaced by closed-form ball integrals. Monotone in
// delta by construction. Requires delta >= 4h and a nonempty evaluation
// window (finite t: |x|_inf <= r_box - delta; t = inf additionally within
// the inner 80% of the box).
double schechter_norm(const PotentialSpec& V, const SchechterParams& sp, double delta,
                      const GridSpec& g, bool exclude_divergent_origin = false,
                      SchechterDiagnostics* diag = nullptr);

// Box-truncated L^t norm with the singular origin cell integrated in closed
// form; t = inf gives the lattice sup and rejects origin-singular potentials
// (their sup is infinite).
double lebesgue_norm(const PotentialSpec& V, double t, const GridSpec& g);

enum class ClassVerdict { in_tilde, in_m, out };
const char* verdict_name(ClassVerdict v);

struct SeminormReport {
  std::vector<double> deltas;
  std::vector<double> values;  // M_{alpha,r,t,delta}(V)
  std::vector<double> scaled;  // delta^S * value
  double sup_scaled = 0.0;
  double slope = 0.0;  // log-log slope of the scaled sequence
  bool all_zero = false;
  ClassVerdict verdict = ClassVerdict::out;
};

// Requires >= 8 increasing positive deltas. Verdict margin: slope > 0.02
// puts V in the vanishing subclass, |slope| <= 0.02 in the bounded class.
SeminormReport scaled_seminorm(const PotentialSpec& V, const SchechterParams& sp,
                               const std::vector<double>& deltas, const GridSpec& g);

struct MembershipReport {
  ClassVerdict verdict = ClassVerdict::out;
  double exponent = 0.0;  // S + alpha/r + a + n/t
  bool admissible = false;
  bool kato = false;  // Kato-class membership for the power family
  std::string reason;
};

// Closed-form membership for the power families; rejects other families.
MembershipReport power_membership(const PotentialSpec& V, const SchechterParams& sp, int n);

struct KatoReport {
  std::vector<double> deltas;
  std::vector<double> values;
  double slope = 0.0;
  bool decaying = false;
  bool origin_excluded = false;
};

// r = 1, t = inf, S = 0 window trend over the given deltas.
KatoReport kato_check(const PotentialSpec& V, double alpha, const std::vector<double>& deltas,
                      const GridSpec& g);

struct MorreyReport {
  double value = 0.0;
  double attained_radius = 0.0;
  std::array<double, 3> attained_center{0, 0, 0};
};

// sup over sampled centers and radii (>= 4h) of
// [ rho^{lambda - n} int_{B(x,rho)} |V|^p ]^{1/p}.
MorreyReport morrey_norm(const PotentialSpec& V, double p, double lambda_m, const GridSpec& g,
                         int num_radii = 6);

struct ReverseHolderReport {
  double max_ratio = 0.0;
  std::vector<double> per_ball;
};

// (avg_B |V|^p)^{1/p} / (avg_B V) per ball; rejects sign-changing V.
ReverseHolderReport reverse_holder_ratio(const PotentialSpec& V, double p,
                                         const std::vector<Region>& balls, const GridSpec& g);

}  // namespace sh
