#include "resolvent.hh"

#include <algorithm>
#include <cmath>

#include "errors.hh"
#include "t_operator.hh"

namespace sh {

double spectrum_distance(cd z) {
  if (z.real() >= 0) return std::abs(z.imag());
  return std::abs(z);
}

void check_spectral_point(cd z) {
  require(std::isfinite(z.real()) && std::isfinite(z.imag()), ErrorCode::invalid_argument,
          "spectral point must be finite");
  require(spectrum_distance(z) > 0, ErrorCode::invalid_argument,
          "spectral point lies on [0, inf)");
}

GridFunction free_resolvent(const EllipticSymbol& P, cd z, const GridFunction& f,
                            const ComplexShift* shift) {
  require(std::isfinite(z.real()) && std::isfinite(z.imag()), ErrorCode::invalid_argument,
          "spectral point must be finite");
  const GridSpec& g = f.spec();
  std::vector<cd> table = symbol_multiplier(P, g, shift);
  // An exact collision names the failure better than the axis guard, so scan
  // before rejecting points on [0, inf).
  for (const auto& v : table)
    if (std::abs(z - v) < 1e-12)
      fail(ErrorCode::spectrum_hit, "z collides with a lattice symbol value");
  require(spectrum_distance(z) > 0, ErrorCode::invalid_argument,
          "spectral point lies on [0, inf)");
  for (auto& v : table) v = 1.0 / (z - v);
  return apply_multiplier_table(f, table);
}

ResolventResult perturbed_resolvent(const EllipticSymbol& P, const PotentialSpec& V, cd z,
                                    const GridFunction& f, double tol, int max_terms,
                                    const ComplexShift* shift) {
  require(tol > 0, ErrorCode::invalid_argument, "resolvent: tol must be positive");
  require(max_terms >= 1, ErrorCode::invalid_argument, "resolvent: max_terms must be >= 1");
  const GridSpec& g = f.spec();
  const double fnorm = lp_norm(f, 2);
  if (fnorm == 0) {
    ResolventResult res{constant_function(g, 0.0), {}};
    res.diag.converged = true;
    res.diag.terms_used = 1;
    return res;
  }
  const GridFunction vg = sample_potential(V, g);

  GridFunction w = f;  // current series term (before the outer resolvent)
  GridFunction u = constant_function(g, 0.0);
  double wnorm = fnorm;
  NeumannDiagnostics diag;
  bool small_term = false;
  for (int k = 0; k < max_terms; ++k) {
    const GridFunction rw = free_resolvent(P, z, w, shift);
    u = add(u, rw);
    diag.terms_used = k + 1;
    w = multiply(vg, rw);
    const double next = lp_norm(w, 2);
    if (wnorm > 0)
      diag.contraction_estimate = std::max(diag.contraction_estimate, next / wnorm);
    wnorm = next;
    if (wnorm <= tol * fnorm) {
      small_term = true;
      break;
    }
    if (wnorm > 1e6 * fnorm) break;  // series visibly diverging
  }

  // Defect of the solved equation, shift included.
  const GridFunction pu = apply_operator(P, u, shift);
  const GridFunction vu = multiply(vg, u);
  GridFunction defect = add(add(scale(u, z), scale(pu, -1.0)), scale(vu, -1.0));
  defect = add(defect, scale(f, -1.0));
  diag.residual = lp_norm(defect, 2) / fnorm;
  diag.converged = small_term && diag.residual <= 10 * tol;
  return ResolventResult{u, diag};
}

ResolventResult resolvent_power(const EllipticSymbol& P, const PotentialSpec& V, cd z,
                                const GridFunction& f, int k, double tol, int max_terms,
                                const ComplexShift* shift) {
  require(k >= 1, ErrorCode::invalid_argument, "resolvent power: k must be >= 1");
  ResolventResult res = perturbed_resolvent(P, V, z, f, tol, max_terms, shift);
  for (int i = 1; i < k; ++i) {
    ResolventResult next = perturbed_resolvent(P, V, z, res.u, tol, max_terms, shift);
    next.diag.contraction_estimate =
        std::max(next.diag.contraction_estimate, res.diag.contraction_estimate);
    next.diag.terms_used += res.diag.terms_used;
    next.diag.residual = std::max(next.diag.residual, res.diag.residual);
    next.diag.converged = next.diag.converged && res.diag.converged;
    res = std::move(next);
  }
  return res;
}

double contraction_factor(const EllipticSymbol& P, const PotentialSpec& V, cd z, double s,
                          double p_in, double q_out, const GridSpec& g,
                          const ConditionSet* branch, double constant_product) {
  check_spectral_point(z);
  require(s > 0 && s <= 2 * P.m + 1e-12, ErrorCode::invalid_argument,
          "contraction: s must lie in (0, 2m]");
  require(q_out > 1 && p_in >= q_out, ErrorCode::invalid_argument,
          "contraction: need 1 < q <= p");
  const double gap =
      P.n * (1.0 / q_out - (std::isinf(p_in) ? 0.0 : 1.0 / p_in));
  require(gap >= -1e-12 && gap <= 2 * P.m - s + 1e-12, ErrorCode::invalid_argument,
          "contraction: n(1/q - 1/p) outside [0, 2m - s]");
  require(constant_product > 0, ErrorCode::invalid_argument,
          "contraction: constant_product must be positive");

  const double mu = std::pow(std::abs(z), 1.0 / (2.0 * P.m));
  const double tnorm = branch ? theoretical_bound(*branch, V, mu, g)
                              : empirical_opnorm(V, s, mu, p_in, q_out, 32, g);
  return constant_product * std::pow(mu, -(2.0 * P.m - s + gap)) * tnorm;
}

double conjugation_residual(const EllipticSymbol& P, const PotentialSpec& V, cd z,
                            const ComplexShift& eta, const GridFunction& f, double tol,
                            int max_terms) {
  const GridSpec& g = f.spec();
  std::array<double, 3> theta{0, 0, 0};
  for (int d = 0; d < g.n; ++d) {
    require(std::abs(eta[d].real()) <= 1e-14, ErrorCode::non_periodic_shift,
            "conjugation: eta must be purely imaginary");
    theta[d] = eta[d].imag();
    const double steps = theta[d] * g.r_box / 3.14159265358979323846;
    require(std::abs(steps - std::lround(steps)) <= 1e-9, ErrorCode::non_periodic_shift,
            "conjugation: e^{eta x} must be box-periodic (theta on the frequency lattice)");
  }
  for (int d = g.n; d < 3; ++d)
    require(std::abs(eta[d]) == 0.0, ErrorCode::invalid_argument,
            "conjugation: shift set beyond the dimension");

  const double fnorm = lp_norm(f, 2);
  require(fnorm > 0, ErrorCode::invalid_argument, "conjugation: zero input");

  ResolventResult lhs = perturbed_resolvent(P, V, z, f, tol, max_terms, &eta);
  require(lhs.diag.converged, ErrorCode::no_convergence,
          "conjugation: shifted series did not converge");

  const auto phase = [&](double sign) {
    return from_function(g, [&](const std::array<double, 3>& x) {
      double arg = 0;
      for (int d = 0; d < g.n; ++d) arg += theta[d] * x[d];
      return std::polar(1.0, sign * arg);
    });
  };
  const GridFunction fin = multiply(f, phase(+1.0));
  ResolventResult mid = perturbed_resolvent(P, V, z, fin, tol, max_terms, nullptr);
  require(mid.diag.converged, ErrorCode::no_convergence,
          "conjugation: unshifted series did not converge");
  const GridFunction rhs = multiply(mid.u, phase(-1.0));

  const GridFunction diff = add(lhs.u, scale(rhs, -1.0));
  return lp_norm(diff, 2) / fnorm;
}

}  // namespace sh
