#include "grid.hh"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <limits>

#include "errors.hh"
#include "fft.hh"

namespace sh {

namespace {
constexpr double kPi = 3.14159265358979323846;

bool is_power_of_two(long v) { return v > 0 && (v & (v - 1)) == 0; }
}  // namespace

std::size_t GridSpec::total() const {
  std::size_t t = 1;
  for (int d = 0; d < n; ++d) t *= static_cast<std::size_t>(npoints);
  return t;
}

GridSpec make_grid(int n, double r_box, long npoints) {
  require(n >= 1 && n <= 3, ErrorCode::invalid_argument, "grid: dimension must be 1, 2 or 3");
  require(r_box > 0.0 && std::isfinite(r_box), ErrorCode::invalid_argument,
          "grid: r_box must be positive and finite");
  require(npoints >= 8 && is_power_of_two(npoints), ErrorCode::invalid_argument,
          "grid: npoints must be a power of two >= 8");
  GridSpec g;
  g.n = n;
  g.r_box = r_box;
  g.npoints = npoints;
  g.h = 2.0 * r_box / static_cast<double>(npoints);
  return g;
}

GridFunction::GridFunction(GridSpec spec, std::vector<cd> values)
    : spec_(spec), values_(std::make_shared<const std::vector<cd>>(std::move(values))) {
  require(values_->size() == spec_.total(), ErrorCode::invalid_argument,
          "grid function: value count does not match the grid");
}

bool Region::contains(int n, const std::array<double, 3>& x) const {
  if (kind == Kind::box) {
    // Half-open [lo, hi) per axis: adjacent boxes tile the lattice with no
    // double-counted boundary points.
    for (int d = 0; d < n; ++d)
      if (x[d] < center[d] - extent[d] || x[d] >= center[d] + extent[d]) return false;
    return true;
  }
  double r2 = 0;
  for (int d = 0; d < n; ++d) r2 += (x[d] - center[d]) * (x[d] - center[d]);
  return r2 <= extent[0] * extent[0];
}

void unflatten(const GridSpec& g, std::size_t flat, std::array<long, 3>& idx) {
  idx = {0, 0, 0};
  for (int d = g.n - 1; d >= 0; --d) {
    idx[d] = static_cast<long>(flat % static_cast<std::size_t>(g.npoints));
    flat /= static_cast<std::size_t>(g.npoints);
  }
}

std::size_t flatten(const GridSpec& g, const std::array<long, 3>& idx) {
  std::size_t flat = 0;
  for (int d = 0; d < g.n; ++d)
    flat = flat * static_cast<std::size_t>(g.npoints) + static_cast<std::size_t>(idx[d]);
  return flat;
}

std::array<double, 3> coordinate(const GridSpec& g, const std::array<long, 3>& idx) {
  std::array<double, 3> x{0, 0, 0};
  for (int d = 0; d < g.n; ++d) x[d] = -g.r_box + g.h * static_cast<double>(idx[d]);
  return x;
}

std::array<double, 3> frequency(const GridSpec& g, const std::array<long, 3>& idx) {
  std::array<double, 3> xi{0, 0, 0};
  for (int d = 0; d < g.n; ++d) {
    long k = idx[d] < g.npoints / 2 ? idx[d] : idx[d] - g.npoints;
    xi[d] = kPi * static_cast<double>(k) / g.r_box;
  }
  return xi;
}

GridFunction constant_function(const GridSpec& g, cd value) {
  return GridFunction(g, std::vector<cd>(g.total(), value));
}

GridFunction from_function(const GridSpec& g, const std::function<cd(const std::array<double, 3>&)>& f) {
  std::vector<cd> vals(g.total());
  std::array<long, 3> idx;
  for (std::size_t i = 0; i < vals.size(); ++i) {
    unflatten(g, i, idx);
    vals[i] = f(coordinate(g, idx));
  }
  return GridFunction(g, std::move(vals));
}

double lp_norm(const GridFunction& f, double p, const Region* region) {
  require(p >= 1.0, ErrorCode::invalid_argument, "lp_norm: p must be >= 1");
  const GridSpec& g = f.spec();
  const bool inf = std::isinf(p);
  double acc = 0.0;
  std::array<long, 3> idx;
  for (std::size_t i = 0; i < f.size(); ++i) {
    if (region != nullptr) {
      unflatten(g, i, idx);
      if (!region->contains(g.n, coordinate(g, idx))) continue;
    }
    const double a = std::abs(f[i]);
    if (inf)
      acc = std::max(acc, a);
    else
      acc += std::pow(a, p);
  }
  if (inf) return acc;
  const double cell = std::pow(g.h, g.n);
  return std::pow(cell * acc, 1.0 / p);
}

std::vector<cd> multiplier_table(const GridSpec& g, const std::function<cd(const std::array<double, 3>&)>& sigma) {
  std::vector<cd> table(g.total());
  std::array<long, 3> idx;
  for (std::size_t i = 0; i < table.size(); ++i) {
    unflatten(g, i, idx);
    const cd v = sigma(frequency(g, idx));
    require(std::isfinite(v.real()) && std::isfinite(v.imag()), ErrorCode::invalid_argument,
            "multiplier: non-finite value at a lattice frequency");
    table[i] = v;
  }
  return table;
}

GridFunction apply_multiplier_table(const GridFunction& f, const std::vector<cd>& sigma) {
  const GridSpec& g = f.spec();
  require(sigma.size() == f.size(), ErrorCode::invalid_argument,
          "multiplier: table size does not match the grid");
  std::vector<cd> work(f.values());
  long dims[3] = {g.npoints, g.npoints, g.npoints};
  fft::transform(g.n, dims, work.data(), -1);
  for (std::size_t i = 0; i < work.size(); ++i) {
    const cd v = sigma[i];
    require(std::isfinite(v.real()) && std::isfinite(v.imag()), ErrorCode::invalid_argument,
            "multiplier: non-finite value at a lattice frequency");
    work[i] *= v;
  }
  fft::transform(g.n, dims, work.data(), 1);
  const double norm = 1.0 / static_cast<double>(g.total());
  for (auto& v : work) v *= norm;
  return GridFunction(g, std::move(work));
}

GridFunction apply_multiplier(const GridFunction& f, const std::function<cd(const std::array<double, 3>&)>& sigma) {
  return apply_multiplier_table(f, multiplier_table(f.spec(), sigma));
}

GridFunction delta_at(const GridSpec& g, const std::array<double, 3>& y) {
  std::array<long, 3> idx{0, 0, 0};
  for (int d = 0; d < g.n; ++d) {
    const double pos = (y[d] + g.r_box) / g.h;
    const double rounded = std::round(pos);
    require(std::abs(pos - rounded) <= 1e-9, ErrorCode::invalid_argument,
            "delta_at: point is not on the lattice");
    long k = static_cast<long>(rounded);
    require(k >= 0 && k < g.npoints, ErrorCode::invalid_argument,
            "delta_at: point is outside the box");
    idx[d] = k;
  }
  std::vector<cd> vals(g.total(), cd(0, 0));
  vals[flatten(g, idx)] = cd(std::pow(g.h, -g.n), 0);
  return GridFunction(g, std::move(vals));
}

GridFunction multiply(const GridFunction& a, const GridFunction& b) {
  require(a.spec() == b.spec(), ErrorCode::invalid_argument, "multiply: grids differ");
  std::vector<cd> vals(a.size());
  for (std::size_t i = 0; i < vals.size(); ++i) vals[i] = a[i] * b[i];
  return GridFunction(a.spec(), std::move(vals));
}

GridFunction add(const GridFunction& a, const GridFunction& b) {
  require(a.spec() == b.spec(), ErrorCode::invalid_argument, "add: grids differ");
  std::vector<cd> vals(a.size());
  for (std::size_t i = 0; i < vals.size(); ++i) vals[i] = a[i] + b[i];
  return GridFunction(a.spec(), std::move(vals));
}

GridFunction scale(const GridFunction& a, cd factor) {
  std::vector<cd> vals(a.size());
  for (std::size_t i = 0; i < vals.size(); ++i) vals[i] = factor * a[i];
  return GridFunction(a.spec(), std::move(vals));
}

double boundary_contamination(const GridFunction& f) {
  const GridSpec& g = f.spec();
  const double edge = 0.9 * g.r_box;
  double shell = 0.0, peak = 0.0;
  std::array<long, 3> idx;
  for (std::size_t i = 0; i < f.size(); ++i) {
    const double a = std::abs(f[i]);
    peak = std::max(peak, a);
    unflatten(g, i, idx);
    const auto x = coordinate(g, idx);
    bool outer = false;
    for (int d = 0; d < g.n; ++d) outer = outer || std::abs(x[d]) >= edge;
    if (outer) shell = std::max(shell, a);
  }
  return peak > 0.0 ? shell / peak : 0.0;
}

namespace {
void put_u64(std::ofstream& out, std::uint64_t v) {
  unsigned char b[8];
  for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>((v >> (8 * i)) & 0xff);
  out.write(reinterpret_cast<const char*>(b), 8);
}

std::uint64_t get_u64(std::ifstream& in) {
  unsigned char b[8];
  in.read(reinterpret_cast<char*>(b), 8);
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(b[i]) << (8 * i);
  return v;
}

std::uint64_t double_bits(double d) {
  std::uint64_t v;
  std::memcpy(&v, &d, 8);
  return v;
}

double bits_double(std::uint64_t v) {
  double d;
  std::memcpy(&d, &v, 8);
  return d;
}
}  // namespace

void write_binary(const GridFunction& f, const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  require(out.good(), ErrorCode::io_error, "write_binary: cannot open " + path);
  const GridSpec& g = f.spec();
  put_u64(out, static_cast<std::uint64_t>(g.n));
  put_u64(out, static_cast<std::uint64_t>(g.npoints));
  put_u64(out, double_bits(g.r_box));
  for (std::size_t i = 0; i < f.size(); ++i) {
    put_u64(out, double_bits(f[i].real()));
    put_u64(out, double_bits(f[i].imag()));
  }
  require(out.good(), ErrorCode::io_error, "write_binary: write failed for " + path);
}

GridFunction read_binary(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  require(in.good(), ErrorCode::io_error, "read_binary: cannot open " + path);
  const long n = static_cast<long>(get_u64(in));
  const long npoints = static_cast<long>(get_u64(in));
  const double r_box = bits_double(get_u64(in));
  require(in.good(), ErrorCode::io_error, "read_binary: truncated header in " + path);
  GridSpec g = make_grid(static_cast<int>(n), r_box, npoints);
  std::vector<cd> vals(g.total());
  for (auto& v : vals) {
    const double re = bits_double(get_u64(in));
    const double im = bits_double(get_u64(in));
    v = cd(re, im);
  }
  require(in.good(), ErrorCode::io_error, "read_binary: truncated payload in " + path);
  return GridFunction(g, std::move(vals));
}

void write_csv(const GridFunction& f, const std::string& path) {
  std::ofstream out(path, std::ios::trunc);
  require(out.good(), ErrorCode::io_error, "write_csv: cannot open " + path);
  const GridSpec& g = f.spec();
  out << "# ";
  for (int d = 0; d < g.n; ++d) out << "x" << d << ",";
  out << "re,im\n";
  char buf[256];
  std::array<long, 3> idx;
  for (std::size_t i = 0; i < f.size(); ++i) {
    unflatten(g, i, idx);
    const auto x = coordinate(g, idx);
    int len = 0;
    for (int d = 0; d < g.n; ++d)
      len += std::snprintf(buf + len, sizeof(buf) - len, "%.17g,", x[d]);
    std::snprintf(buf + len, sizeof(buf) - len, "%.17g,%.17g", f[i].real(), f[i].imag());
    out << buf << "\n";
  }
  require(out.good(), ErrorCode::io_error, "write_csv: write failed for " + path);
}

}  // namespace sh
