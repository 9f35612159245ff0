#pragma once

#include <memory>

#include "grid.hh"
#include "potential.hh"
#include "symbol.hh"

namespace sh {

// Dense-route gate: assembled matrices are total() x total().
void check_dense_gate(const GridSpec& g);

// (z - P(D+eta) - V)^{-1} f by LU on the assembled lattice matrix.
GridFunction dense_solve(const EllipticSymbol& P, const PotentialSpec& V, cd z,
                         const GridFunction& f, const ComplexShift* shift = nullptr);

// Eigendecomposition of the discretized P(D) + V (real symmetric for the
// real even symbols in scope). Construct once, apply e^{-tL} for many t.
class DenseSemigroup {
 public:
  DenseSemigroup(const EllipticSymbol& P, const PotentialSpec& V, const GridSpec& g);

  GridFunction apply(double t, const GridFunction& f) const;
  double spectrum_min() const;
  double spectrum_max() const;

 private:
  struct Impl;
  std::shared_ptr<const Impl> impl_;
};

}  // namespace sh
