#pragma once

#include <vector>

namespace sh {

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;
};

// Ordinary least squares y ~ slope*x + intercept. Requires >= 2 samples
// with at least two distinct x values.
LinearFit linear_fit(const std::vector<double>& xs, const std::vector<double>& ys);

struct MultiFit {
  std::vector<double> coef;
  double intercept = 0.0;
  double r2 = 0.0;
};

// y ~ sum_k coef[k] * cols[k] + intercept, small k (normal equations).
MultiFit least_squares(const std::vector<std::vector<double>>& cols,
                       const std::vector<double>& ys);

struct EnvelopeSample {
  double t = 0.0;    // time, > 0
  double phi = 0.0;  // decay argument, >= 0
  double value = 0.0;  // measured magnitude, > 0 (caller censors floor noise)
};

// Model: value <= C * t^{-power} * exp(-w t) * exp(-c phi). For a candidate
// c the minimal admissible C is max_i value_i * t_i^power * e^{w t_i + c phi_i};
// c is feasible when that C stays within cap_factor times the c = 0 constant.
struct EnvelopeOptions {
  double power = 0.0;
  double w = 0.0;
  double c_max = 1.0;
  int c_steps = 100;
  double cap_factor = 2.0;
  double cap_override = 0.0;  // > 0 replaces cap_factor * C(0) as the cap
};

struct EnvelopeReport {
  double c_fit = 0.0;      // largest feasible grid candidate (step c_max/c_steps)
  double c_refined = 0.0;  // bisected feasibility boundary
  double constant = 0.0;   // minimal C at c_fit
  double c0_constant = 0.0;
  double cap = 0.0;
  int violations = 0;  // samples above the reported envelope (slack 1e-9)
  bool feasible = false;
};

EnvelopeReport envelope_fit(const std::vector<EnvelopeSample>& samples,
                            const EnvelopeOptions& opt);

// Minimal constant for one candidate c; exposed so sharpness probes can
// re-test feasibility with alternative phi sequences.
double envelope_min_constant(const std::vector<EnvelopeSample>& samples, double power,
                             double w, double c);

}  // namespace sh
