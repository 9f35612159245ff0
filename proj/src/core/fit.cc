#include "fit.hh"

#include <algorithm>
#include <cmath>
#include <limits>

#include "errors.hh"

namespace sh {

LinearFit linear_fit(const std::vector<double>& xs, const std::vector<double>& ys) {
  require(xs.size() == ys.size(), ErrorCode::invalid_argument, "fit: size mismatch");
  require(xs.size() >= 2, ErrorCode::invalid_argument, "fit: need at least 2 samples");
  const std::size_t m = xs.size();
  double sx = 0, sy = 0;
  for (std::size_t i = 0; i < m; ++i) {
    require(std::isfinite(xs[i]) && std::isfinite(ys[i]), ErrorCode::invalid_argument,
            "fit: non-finite sample");
    sx += xs[i];
    sy += ys[i];
  }
  const double mx = sx / double(m), my = sy / double(m);
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < m; ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
  }
  require(sxx > 0, ErrorCode::invalid_argument, "fit: degenerate abscissae");
  LinearFit f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  double ss_res = 0, ss_tot = 0;
  for (std::size_t i = 0; i < m; ++i) {
    const double e = ys[i] - (f.intercept + f.slope * xs[i]);
    ss_res += e * e;
    ss_tot += (ys[i] - my) * (ys[i] - my);
  }
  f.r2 = ss_tot > 0 ? 1.0 - ss_res / ss_tot : (ss_res < 1e-24 ? 1.0 : 0.0);
  return f;
}

MultiFit least_squares(const std::vector<std::vector<double>>& cols,
                       const std::vector<double>& ys) {
  require(!cols.empty() && cols.size() <= 4, ErrorCode::invalid_argument,
          "fit: regressor count out of range");
  const std::size_t m = ys.size();
  require(m >= cols.size() + 1, ErrorCode::invalid_argument, "fit: too few samples");
  for (const auto& c : cols)
    require(c.size() == m, ErrorCode::invalid_argument, "fit: size mismatch");

  // Normal equations over [cols..., 1].
  const std::size_t k = cols.size() + 1;
  std::vector<std::vector<double>> a(k, std::vector<double>(k + 1, 0.0));
  const auto col_at = [&](std::size_t j, std::size_t i) {
    return j < cols.size() ? cols[j][i] : 1.0;
  };
  for (std::size_t r = 0; r < k; ++r) {
    for (std::size_t c = 0; c < k; ++c)
      for (std::size_t i = 0; i < m; ++i) a[r][c] += col_at(r, i) * col_at(c, i);
    for (std::size_t i = 0; i < m; ++i) a[r][k] += col_at(r, i) * ys[i];
  }
  // Gaussian elimination with partial pivoting.
  for (std::size_t c = 0; c < k; ++c) {
    std::size_t piv = c;
    for (std::size_t r = c + 1; r < k; ++r)
      if (std::abs(a[r][c]) > std::abs(a[piv][c])) piv = r;
    std::swap(a[c], a[piv]);
    require(std::abs(a[c][c]) > 1e-14, ErrorCode::invalid_argument,
            "fit: degenerate regressors");
    for (std::size_t r = 0; r < k; ++r) {
      if (r == c) continue;
      const double factor = a[r][c] / a[c][c];
      for (std::size_t cc = c; cc <= k; ++cc) a[r][cc] -= factor * a[c][cc];
    }
  }
  MultiFit fit;
  fit.coef.resize(cols.size());
  for (std::size_t j = 0; j < cols.size(); ++j) fit.coef[j] = a[j][k] / a[j][j];
  fit.intercept = a[k - 1][k] / a[k - 1][k - 1];

  double my = 0;
  for (double y : ys) my += y;
  my /= double(m);
  double ss_res = 0, ss_tot = 0;
  for (std::size_t i = 0; i < m; ++i) {
    double pred = fit.intercept;
    for (std::size_t j = 0; j < cols.size(); ++j) pred += fit.coef[j] * cols[j][i];
    ss_res += (ys[i] - pred) * (ys[i] - pred);
    ss_tot += (ys[i] - my) * (ys[i] - my);
  }
  fit.r2 = ss_tot > 0 ? 1.0 - ss_res / ss_tot : (ss_res < 1e-24 ? 1.0 : 0.0);
  return fit;
}

static void check_samples(const std::vector<EnvelopeSample>& samples) {
  require(!samples.empty(), ErrorCode::invalid_argument, "envelope: no samples");
  for (const auto& s : samples) {
    require(std::isfinite(s.t) && s.t > 0, ErrorCode::invalid_argument, "envelope: bad t");
    require(std::isfinite(s.phi) && s.phi >= 0, ErrorCode::invalid_argument,
            "envelope: bad phi");
    require(std::isfinite(s.value) && s.value > 0, ErrorCode::invalid_argument,
            "envelope: bad value");
  }
}

double envelope_min_constant(const std::vector<EnvelopeSample>& samples, double power,
                             double w, double c) {
  check_samples(samples);
  // Seed below any real log-constant: kernels with sub-unit peaks keep every
  // term negative, and a zero seed would silently clamp the max at exp(0).
  double best = -std::numeric_limits<double>::infinity();
  for (const auto& s : samples) {
    // log-space to survive huge phi
    const double logc =
        std::log(s.value) + power * std::log(s.t) + w * s.t + c * s.phi;
    best = std::max(best, logc);
  }
  return std::exp(best);
}

EnvelopeReport envelope_fit(const std::vector<EnvelopeSample>& samples,
                            const EnvelopeOptions& opt) {
  check_samples(samples);
  require(opt.c_max > 0 && opt.c_steps >= 1, ErrorCode::invalid_argument,
          "envelope: bad candidate grid");
  require(opt.cap_factor >= 1, ErrorCode::invalid_argument, "envelope: cap below C(0)");

  EnvelopeReport rep;
  rep.c0_constant = envelope_min_constant(samples, opt.power, opt.w, 0.0);
  rep.cap = opt.cap_override > 0 ? opt.cap_override : opt.cap_factor * rep.c0_constant;

  const double step = opt.c_max / opt.c_steps;
  double lo = 0.0;  // last feasible
  double hi = -1.0;  // first infeasible, -1 while unknown
  for (int j = 1; j <= opt.c_steps; ++j) {
    const double c = step * j;
    if (envelope_min_constant(samples, opt.power, opt.w, c) <= rep.cap) {
      lo = c;
    } else {
      hi = c;
      break;
    }
  }
  rep.feasible = lo > 0.0;
  rep.c_fit = lo;
  if (hi < 0) {
    rep.c_refined = lo;  // feasible through c_max; no boundary inside range
  } else {
    double a = lo, b = hi;
    while (b - a > 1e-4) {
      const double mid = 0.5 * (a + b);
      if (envelope_min_constant(samples, opt.power, opt.w, mid) <= rep.cap)
        a = mid;
      else
        b = mid;
    }
    rep.c_refined = a;
  }
  rep.constant = envelope_min_constant(samples, opt.power, opt.w, rep.c_fit);
  for (const auto& s : samples) {
    const double bound = std::exp(std::log(rep.constant) - opt.power * std::log(s.t) -
                                  opt.w * s.t - rep.c_fit * s.phi);
    if (s.value > bound * (1.0 + 1e-9)) ++rep.violations;
  }
  return rep;
}

}  // namespace sh
