// Analytic oracles used by the test suites. Every value here is derived by
// hand (closed forms, elementary integrals) independently of the code under
// test, and is frozen: tests compare against these, never the other way round.
#pragma once

#include <cmath>
#include <complex>

namespace oracle {

inline constexpr double pi = 3.14159265358979323846;

// Surface area of the unit sphere S^{n-1} in R^n, n in {1,2,3}.
inline double sphere_area(int n) {
  switch (n) {
    case 1: return 2.0;          // two points
    case 2: return 2.0 * pi;     // circumference
    default: return 4.0 * pi;    // n = 3
  }
}

// Volume of the unit ball in R^n, n in {1,2,3}.
inline double ball_volume(int n) {
  switch (n) {
    case 1: return 2.0;
    case 2: return pi;
    default: return 4.0 * pi / 3.0;
  }
}

// Free heat kernel of d/dt = Laplacian: (4 pi t)^{-n/2} exp(-d^2 / (4t)).
inline double heat_kernel(int n, double t, double dist) {
  return std::pow(4.0 * pi * t, -0.5 * n) * std::exp(-dist * dist / (4.0 * t));
}

// L^2(R) norm of exp(-x^2): sqrt(integral exp(-2x^2)) = (pi/2)^{1/4};
// the squared value integral is sqrt(pi/2).
inline double gaussian_l2_sq() { return std::sqrt(pi / 2.0); }

// 1-D Bessel-potential kernel for s = 2: inverse transform of
// (delta^2 + xi^2)^{-1} under the symmetric convention is exp(-delta|x|)/(2 delta).
inline double bessel_kernel_1d_s2(double delta, double x) {
  return std::exp(-delta * std::abs(x)) / (2.0 * delta);
}

// min over the unit circle of xi1^4 + xi2^4 = 1 - sin^2(2 theta)/2, attained
// at theta = pi/4: value 1/2.
inline constexpr double quartic_circle_min = 0.5;

// Windowed weight integral for V == 1, r = 1, weight |u|^{alpha-n}, n = 1:
// integral_{|u|<delta} |u|^{alpha-1} du = 2 delta^alpha / alpha.
inline double weight_window_1d(double alpha, double delta) {
  return 2.0 * std::pow(delta, alpha) / alpha;
}

// Same integral over the n-ball: sphere_area(n) * delta^alpha / alpha
// (valid for alpha < n; also the alpha > n case reduces to the ball volume
// when the weight is 1, handled separately in tests).
inline double weight_window_ball(int n, double alpha, double delta) {
  return sphere_area(n) * std::pow(delta, alpha) / alpha;
}

// Closed-form small-window exponent of M_{alpha,r,t,delta}(|x|^a):
// alpha/r + a + n/t (t = inf handled by the caller passing n_over_t = 0).
inline double power_window_slope(double alpha, double r, double a, double n_over_t) {
  return alpha / r + a + n_over_t;
}

// Reverse Hoelder ratio of V = |x|^2 on B(0,1) in 1-D with p = 2:
// (avg |V|^2)^{1/2} / avg V = sqrt(1/5) / (1/3) = 3/sqrt(5).
inline double rh_ratio_square_1d() { return 3.0 / std::sqrt(5.0); }

// Morrey norm of V == 1 with lambda_m = n: [r^{lambda-n} * vol(B_r)]^{1/p}
// = ball_volume(n)^{1/p}, independent of the ball radius.
inline double morrey_const_unit(int n, double p) {
  return std::pow(ball_volume(n), 1.0 / p);
}

// Branch A5 scale index: S4 = alpha/p - 2m. For alpha = 1, p = 2, m = 1: -1.5.
inline double a5_index(double alpha, double p, int m) {
  return alpha / p - 2.0 * m;
}

// lambda-exponent of the A5 perturbation factor for V = |x|^a (homogeneous
// window scaling): S4 - (alpha/p + a) = -a - 2m.
inline double a5_lambda_exponent(double a, int m) { return -a - 2.0 * m; }

// Free resolvent of the 1-D Laplacian at z = -1 applied to a point mass:
// ((1 - d^2/dx^2)^{-1} delta_0)(x) = exp(-|x|)/2.
inline double resolvent_green_1d(double x) { return 0.5 * std::exp(-std::abs(x)); }

// Fourth centered difference (h^4-accurate second-order scheme is not enough;
// tests use this for d^4/dx^4 with an explicit step): f^{(4)}(x) ~
// [f(x-2h) - 4f(x-h) + 6f(x) - 4f(x+h) + f(x+2h)] / h^4.
template <class F>
std::complex<double> fourth_derivative(const F& f, double x, double h) {
  return (f(x - 2 * h) - 4.0 * f(x - h) + 6.0 * f(x) - 4.0 * f(x + h) + f(x + 2 * h)) /
         (h * h * h * h);
}

// Heat-semigroup Davies-Gaffney reference slope for m = 1 (Gaussian): the
// regression of log mass ratio against -d^2/t recovers ~1/4.
inline constexpr double dg_gaussian_slope = 0.25;

// Gaussian envelope sharp constant for m = 1: |p_t| = (4 pi t)^{-n/2}
// exp(-c d^2/t) holds with zero violations up to c = 1/4 and at no larger c.
inline constexpr double gaussian_envelope_c = 0.25;

}  // namespace oracle
