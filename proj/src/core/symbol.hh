#pragma once

#include <array>
#include <map>
#include <vector>

#include "grid.hh"

namespace sh {

using MultiIndex = std::array<int, 3>;
using ComplexShift = std::array<cd, 3>;

// Real homogeneous symbol P(xi) = sum_{|alpha| = 2m} a_alpha xi^alpha with
// P(xi) >= ell_const |xi|^{2m} on the lattice directions sampled at
// construction. The operator it induces acts as the Fourier multiplier
// P(xi); with a shift eta it acts as P evaluated at xi - i eta.
struct EllipticSymbol {
  int m = 1;
  int n = 1;
  std::map<MultiIndex, double> coeffs;
  double ell_const = 0.0;
};

EllipticSymbol make_symbol(int m, int n, const std::map<MultiIndex, double>& coeffs,
                           int sphere_samples = 4096);

// |xi|^{2m} expanded into monomials (multinomial coefficients).
EllipticSymbol polyharmonic_symbol(int m, int n, int sphere_samples = 4096);

double eval_symbol(const EllipticSymbol& sym, const std::array<double, 3>& xi);
cd eval_symbol(const EllipticSymbol& sym, const std::array<cd, 3>& xi);

// min of P over deterministic unit-sphere samples (endpoints for n = 1,
// golden-angle sequences otherwise; at least 100 points). Throws
// non_elliptic when the minimum is not positive.
double ellipticity_constant(int m, int n, const std::map<MultiIndex, double>& coeffs,
                            int sphere_samples);

// Coefficients of xi |-> P(xi - i eta) as a polynomial in xi, expanded with
// exact integer binomials over the coefficient map.
std::map<MultiIndex, cd> shifted_coefficients(const EllipticSymbol& sym, const ComplexShift& eta);

// Multiplier table of P(D + eta) on the grid (eta = 0 gives P(xi) itself).
std::vector<cd> symbol_multiplier(const EllipticSymbol& sym, const GridSpec& g,
                                  const ComplexShift* eta = nullptr);

// Applies the (possibly shifted) operator spectrally.
GridFunction apply_operator(const EllipticSymbol& sym, const GridFunction& f,
                            const ComplexShift* eta = nullptr);

}  // namespace sh
