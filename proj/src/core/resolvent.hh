#pragma once

#include "grid.hh"
#include "potential.hh"
#include "symbol.hh"

namespace sh {

// Distance from z to the half-line [0, inf).
double spectrum_distance(cd z);

// Rejects z on [0, inf); the free spectrum fills that half-line.
void check_spectral_point(cd z);

// (z - P(D + eta))^{-1} f as an exact lattice multiplier. Throws
// spectrum_hit when z comes within 1e-12 of a lattice symbol value.
GridFunction free_resolvent(const EllipticSymbol& P, cd z, const GridFunction& f,
                            const ComplexShift* shift = nullptr);

struct NeumannDiagnostics {
  double contraction_estimate = 0.0;  // max observed per-term L2 ratio
  int terms_used = 0;
  double residual = 0.0;  // relative defect of (z - P - V) u = f
  bool converged = false;
};

struct ResolventResult {
  GridFunction u;
  NeumannDiagnostics diag;
};

// (z - P(D+eta) - V)^{-1} f by the Neumann series
// sum_k R0 [V R0]^k f, truncated when a term drops below tol * ||f||_2.
// Divergence is reported through the diagnostics, not thrown.
ResolventResult perturbed_resolvent(const EllipticSymbol& P, const PotentialSpec& V, cd z,
                                    const GridFunction& f, double tol = 1e-10,
                                    int max_terms = 200,
                                    const ComplexShift* shift = nullptr);

// (z - P(D+eta) - V)^{-k} f by k successive solves; diagnostics aggregate
// the worst contraction ratio and the total term count.
ResolventResult resolvent_power(const EllipticSymbol& P, const PotentialSpec& V, cd z,
                                const GridFunction& f, int k, double tol = 1e-10,
                                int max_terms = 200, const ComplexShift* shift = nullptr);

// mu^{-(2m - s + n(1/p - 1/q))} * ||T_{s,mu}|| with mu = |z|^{1/(2m)}; the
// T-norm source is the p = q = 2 empirical norm unless the caller supplies
// a condition-set bound (see t_operator).
struct ConditionSet;  // t_operator.hh
double contraction_factor(const EllipticSymbol& P, const PotentialSpec& V, cd z, double s,
                          double p_in, double q_out, const GridSpec& g,
                          const ConditionSet* branch = nullptr,
                          double constant_product = 1.0);

// || (z - L_eta)^{-1} f  -  e^{-eta x} (z - L)^{-1} (e^{eta x} f) ||_2 / ||f||_2
// for purely imaginary eta on the frequency lattice (e^{eta x} must be
// box-periodic). Throws non_periodic_shift otherwise, no_convergence when
// either series fails.
double conjugation_residual(const EllipticSymbol& P, const PotentialSpec& V, cd z,
                            const ComplexShift& eta, const GridFunction& f,
                            double tol = 1e-10, int max_terms = 200);

}  // namespace sh
