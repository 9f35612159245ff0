#pragma once

#include <memory>
#include <optional>
#include <string>

#include "grid.hh"

namespace sh {

enum class PotentialFamily { power, shifted_power, constant, tabulated };

// V(x) = sign * c * |x|^a        (power)
//      = sign * c * (1+|x|)^a    (shifted_power)
//      = sign * c                (constant; c = 0 gives the zero potential)
//      = table sample            (tabulated, lattice-valued)
struct PotentialSpec {
  PotentialFamily family = PotentialFamily::constant;
  double a = 0.0;
  int sign = 1;
  double c = 0.0;
  std::shared_ptr<const GridFunction> table;
};

PotentialSpec make_power_potential(double a, int sign, double c);
PotentialSpec make_shifted_power_potential(double a, int sign, double c);
PotentialSpec make_constant_potential(int sign, double c);
PotentialSpec make_tabulated_potential(const GridFunction& table);

bool is_zero_potential(const PotentialSpec& v);
bool is_singular_at_origin(const PotentialSpec& v);
std::string potential_label(const PotentialSpec& v);

// Pointwise value. The power family rejects x = 0 (callers handle the
// origin analytically); tabulated specs snap to the nearest lattice point
// of their own grid.
double eval_potential(const PotentialSpec& v, const std::array<double, 3>& x, int n);

// |V|^r averaged over the ball of radius rho at the origin, closed form for
// the power family: (c rho^a)^r * n/(a r + n). Requires a r > -n.
double origin_ball_average_abs_pow(const PotentialSpec& v, int n, double rho, double r);

// Lattice samples; for a singular power potential the origin sample is the
// analytic average over the inscribed origin cell ball (r = 1 above).
GridFunction sample_potential(const PotentialSpec& v, const GridSpec& g);

}  // namespace sh
