#include "potential.hh"

#include <cmath>

#include "errors.hh"

namespace sh {

namespace {
double radius(const std::array<double, 3>& x, int n) {
  double r2 = 0;
  for (int d = 0; d < n; ++d) r2 += x[d] * x[d];
  return std::sqrt(r2);
}

void check_common(double a, int sign, double c) {
  require(sign == 1 || sign == -1, ErrorCode::invalid_argument, "potential: sign must be +-1");
  require(c >= 0.0 && std::isfinite(c), ErrorCode::invalid_argument,
          "potential: scale must be a finite non-negative real");
  require(std::isfinite(a), ErrorCode::invalid_argument, "potential: exponent must be finite");
}
}  // namespace

PotentialSpec make_power_potential(double a, int sign, double c) {
  check_common(a, sign, c);
  PotentialSpec v;
  v.family = PotentialFamily::power;
  v.a = a;
  v.sign = sign;
  v.c = c;
  return v;
}

PotentialSpec make_shifted_power_potential(double a, int sign, double c) {
  check_common(a, sign, c);
  PotentialSpec v;
  v.family = PotentialFamily::shifted_power;
  v.a = a;
  v.sign = sign;
  v.c = c;
  return v;
}

PotentialSpec make_constant_potential(int sign, double c) {
  check_common(0.0, sign, c);
  PotentialSpec v;
  v.family = PotentialFamily::constant;
  v.sign = sign;
  v.c = c;
  return v;
}

PotentialSpec make_tabulated_potential(const GridFunction& table) {
  for (std::size_t i = 0; i < table.size(); ++i) {
    require(std::isfinite(table[i].real()) && table[i].imag() == 0.0, ErrorCode::invalid_argument,
            "potential: tabulated values must be finite reals");
  }
  PotentialSpec v;
  v.family = PotentialFamily::tabulated;
  v.table = std::make_shared<GridFunction>(table);
  return v;
}

bool is_zero_potential(const PotentialSpec& v) {
  if (v.family == PotentialFamily::tabulated) {
    for (std::size_t i = 0; i < v.table->size(); ++i)
      if ((*v.table)[i] != cd(0, 0)) return false;
    return true;
  }
  return v.c == 0.0;
}

bool is_singular_at_origin(const PotentialSpec& v) {
  return v.family == PotentialFamily::power && v.a < 0.0 && v.c > 0.0;
}

std::string potential_label(const PotentialSpec& v) {
  const char* s = v.sign < 0 ? "-" : "+";
  char buf[96];
  switch (v.family) {
    case PotentialFamily::power:
      std::snprintf(buf, sizeof(buf), "%s%g*|x|^%g", s, v.c, v.a);
      return buf;
    case PotentialFamily::shifted_power:
      std::snprintf(buf, sizeof(buf), "%s%g*(1+|x|)^%g", s, v.c, v.a);
      return buf;
    case PotentialFamily::constant:
      std::snprintf(buf, sizeof(buf), "%s%g", s, v.c);
      return buf;
    default:
      return "tabulated";
  }
}

double eval_potential(const PotentialSpec& v, const std::array<double, 3>& x, int n) {
  switch (v.family) {
    case PotentialFamily::power: {
      const double r = radius(x, n);
      require(r > 0.0 || v.a >= 0.0, ErrorCode::invalid_argument,
              "potential: power family evaluated at its singular point");
      return v.sign * v.c * (v.a == 0.0 ? 1.0 : std::pow(r, v.a));
    }
    case PotentialFamily::shifted_power:
      return v.sign * v.c * std::pow(1.0 + radius(x, n), v.a);
    case PotentialFamily::constant:
      return v.sign * v.c;
    default: {
      const GridSpec& g = v.table->spec();
      require(g.n == n, ErrorCode::invalid_argument, "potential: tabulated dimension mismatch");
      std::array<long, 3> idx{0, 0, 0};
      for (int d = 0; d < n; ++d) {
        long k = static_cast<long>(std::llround((x[d] + g.r_box) / g.h));
        k = std::max(0L, std::min(g.npoints - 1, k));
        idx[d] = k;
      }
      return (*v.table)[flatten(g, idx)].real();
    }
  }
}

double origin_ball_average_abs_pow(const PotentialSpec& v, int n, double rho, double r) {
  require(v.family == PotentialFamily::power, ErrorCode::invalid_argument,
          "potential: origin ball average applies to the power family");
  const double ar = v.a * r;
  require(ar + n > 0.0, ErrorCode::divergent_local_integral,
          "potential: |V|^r is not integrable near the origin");
  return std::pow(v.c * std::pow(rho, v.a), r) * n / (ar + n);
}

GridFunction sample_potential(const PotentialSpec& v, const GridSpec& g) {
  if (v.family == PotentialFamily::tabulated) {
    require(v.table->spec() == g, ErrorCode::invalid_argument,
            "potential: tabulated grid does not match the target grid");
    return *v.table;
  }
  std::vector<cd> vals(g.total());
  std::array<long, 3> idx;
  for (std::size_t i = 0; i < vals.size(); ++i) {
    unflatten(g, i, idx);
    const auto x = coordinate(g, idx);
    if (is_singular_at_origin(v) && radius(x, g.n) == 0.0) {
      vals[i] = v.sign * origin_ball_average_abs_pow(v, g.n, g.h / 2.0, 1.0);
    } else {
      vals[i] = eval_potential(v, x, g.n);
    }
  }
  return GridFunction(g, std::move(vals));
}

}  // namespace sh
