#include "symbol.hh"

#include <cmath>

#include "errors.hh"

namespace sh {

namespace {
constexpr double kPi = 3.14159265358979323846;

int order(const MultiIndex& a) { return a[0] + a[1] + a[2]; }

long binom(int n, int k) {
  long v = 1;
  for (int i = 1; i <= k; ++i) v = v * (n - k + i) / i;
  return v;
}

template <class Scalar>
Scalar pow_int(Scalar base, int e) {
  Scalar v = Scalar(1);
  for (int i = 0; i < e; ++i) v *= base;
  return v;
}

std::vector<std::array<double, 3>> sphere_points(int n, int samples) {
  samples = std::max(samples, 100);
  std::vector<std::array<double, 3>> pts;
  if (n == 1) {
    pts.push_back({1, 0, 0});
    pts.push_back({-1, 0, 0});
    return pts;
  }
  const double golden = (std::sqrt(5.0) - 1.0) / 2.0;
  if (n == 2) {
    for (int j = 0; j < samples; ++j) {
      const double frac = j * golden - std::floor(j * golden);
      const double theta = 2.0 * kPi * frac;
      pts.push_back({std::cos(theta), std::sin(theta), 0});
    }
    return pts;
  }
  for (int j = 0; j < samples; ++j) {
    const double z = 1.0 - 2.0 * (j + 0.5) / samples;
    const double rho = std::sqrt(std::max(0.0, 1.0 - z * z));
    const double phi = 2.0 * kPi * j * golden;
    pts.push_back({rho * std::cos(phi), rho * std::sin(phi), z});
  }
  return pts;
}
}  // namespace

// The order drops out on the unit sphere; the parameter stays for symmetry
// with make_symbol.
double ellipticity_constant(int /*m*/, int n, const std::map<MultiIndex, double>& coeffs,
                            int sphere_samples) {
  double lo = std::numeric_limits<double>::infinity();
  for (const auto& w : sphere_points(n, sphere_samples)) {
    double p = 0;
    for (const auto& [a, c] : coeffs) {
      double term = c;
      for (int d = 0; d < n; ++d) term *= pow_int(w[d], a[d]);
      p += term;
    }
    lo = std::min(lo, p);
  }
  require(lo > 0.0, ErrorCode::non_elliptic,
          "symbol: minimum over sphere samples is not positive");
  return lo;
}

EllipticSymbol make_symbol(int m, int n, const std::map<MultiIndex, double>& coeffs,
                           int sphere_samples) {
  require(m >= 1 && m <= 4, ErrorCode::invalid_argument, "symbol: order index m must be 1..4");
  require(n >= 1 && n <= 3, ErrorCode::invalid_argument, "symbol: dimension must be 1..3");
  require(!coeffs.empty(), ErrorCode::invalid_argument, "symbol: empty coefficient map");
  for (const auto& [a, c] : coeffs) {
    require(a[0] >= 0 && a[1] >= 0 && a[2] >= 0, ErrorCode::invalid_argument,
            "symbol: negative multi-index entry");
    for (int d = n; d < 3; ++d)
      require(a[d] == 0, ErrorCode::invalid_argument,
              "symbol: multi-index uses an axis beyond the dimension");
    require(order(a) == 2 * m, ErrorCode::invalid_argument,
            "symbol: every multi-index must have order 2m");
    require(std::isfinite(c), ErrorCode::invalid_argument, "symbol: non-finite coefficient");
  }
  EllipticSymbol sym;
  sym.m = m;
  sym.n = n;
  sym.coeffs = coeffs;
  sym.ell_const = ellipticity_constant(m, n, coeffs, sphere_samples);
  return sym;
}

EllipticSymbol polyharmonic_symbol(int m, int n, int sphere_samples) {
  // (xi_1^2 + .. + xi_n^2)^m = sum_{|beta| = m} m!/beta! xi^{2 beta}
  std::map<MultiIndex, double> coeffs;
  double mfact = 1;
  for (int i = 2; i <= m; ++i) mfact *= i;
  for (int b0 = 0; b0 <= m; ++b0) {
    for (int b1 = 0; b1 <= m - b0; ++b1) {
      const int b2 = m - b0 - b1;
      if ((n < 2 && b1 > 0) || (n < 3 && b2 > 0)) continue;
      double denom = 1;
      for (int i = 2; i <= b0; ++i) denom *= i;
      for (int i = 2; i <= b1; ++i) denom *= i;
      for (int i = 2; i <= b2; ++i) denom *= i;
      coeffs[{2 * b0, 2 * b1, 2 * b2}] = mfact / denom;
    }
  }
  return make_symbol(m, n, coeffs, sphere_samples);
}

double eval_symbol(const EllipticSymbol& sym, const std::array<double, 3>& xi) {
  double p = 0;
  for (const auto& [a, c] : sym.coeffs) {
    double term = c;
    for (int d = 0; d < sym.n; ++d) term *= pow_int(xi[d], a[d]);
    p += term;
  }
  return p;
}

cd eval_symbol(const EllipticSymbol& sym, const std::array<cd, 3>& xi) {
  cd p = 0;
  for (const auto& [a, c] : sym.coeffs) {
    cd term = c;
    for (int d = 0; d < sym.n; ++d) term *= pow_int(xi[d], a[d]);
    p += term;
  }
  return p;
}

std::map<MultiIndex, cd> shifted_coefficients(const EllipticSymbol& sym, const ComplexShift& eta) {
  // P(xi - i eta): per axis (xi_j - i eta_j)^{a_j} expands with integer
  // binomials; powers of (-i eta_j) are accumulated exactly once per entry.
  std::map<MultiIndex, cd> out;
  for (const auto& [a, c] : sym.coeffs) {
    for (int b0 = 0; b0 <= a[0]; ++b0) {
      for (int b1 = 0; b1 <= a[1]; ++b1) {
        for (int b2 = 0; b2 <= a[2]; ++b2) {
          const MultiIndex b{b0, b1, b2};
          cd w = c;
          w *= static_cast<double>(binom(a[0], b0) * binom(a[1], b1) * binom(a[2], b2));
          w *= pow_int(cd(0, -1) * eta[0], a[0] - b0);
          w *= pow_int(cd(0, -1) * eta[1], a[1] - b1);
          w *= pow_int(cd(0, -1) * eta[2], a[2] - b2);
          out[b] += w;
        }
      }
    }
  }
  return out;
}

std::vector<cd> symbol_multiplier(const EllipticSymbol& sym, const GridSpec& g,
                                  const ComplexShift* eta) {
  require(g.n == sym.n, ErrorCode::invalid_argument,
          "symbol: grid dimension does not match the symbol");
  std::map<MultiIndex, cd> expanded;
  if (eta != nullptr) {
    expanded = shifted_coefficients(sym, *eta);
  } else {
    for (const auto& [a, c] : sym.coeffs) expanded[a] = c;
  }
  std::vector<cd> table(g.total());
  std::array<long, 3> idx;
  for (std::size_t i = 0; i < table.size(); ++i) {
    unflatten(g, i, idx);
    const auto xi = frequency(g, idx);
    cd p = 0;
    for (const auto& [b, c] : expanded) {
      cd term = c;
      for (int d = 0; d < sym.n; ++d) term *= pow_int(cd(xi[d], 0), b[d]);
      p += term;
    }
    table[i] = p;
  }
  return table;
}

GridFunction apply_operator(const EllipticSymbol& sym, const GridFunction& f,
                            const ComplexShift* eta) {
  return apply_multiplier_table(f, symbol_multiplier(sym, f.spec(), eta));
}

}  // namespace sh
