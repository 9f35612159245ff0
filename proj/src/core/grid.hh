#pragma once

#include <array>
#include <complex>
#include <functional>
#include <memory>
#include <string>
#include <vector>

namespace sh {

using cd = std::complex<double>;

// Periodic box [-r_box, r_box)^n sampled on npoints per axis.
// h = 2 r_box / npoints; lattice x_i = -r_box + i h; frequencies
// xi_k = pi k / r_box with k in [-npoints/2, npoints/2).
struct GridSpec {
  int n = 1;
  double r_box = 1.0;
  long npoints = 8;
  double h = 0.25;

  std::size_t total() const;
  bool operator==(const GridSpec& o) const {
    return n == o.n && r_box == o.r_box && npoints == o.npoints;
  }
};

GridSpec make_grid(int n, double r_box, long npoints);

// Immutable sampled function. Values are lexicographic over axis indices
// (last axis fastest). All operations return fresh instances.
class GridFunction {
 public:
  GridFunction(GridSpec spec, std::vector<cd> values);

  const GridSpec& spec() const { return spec_; }
  const std::vector<cd>& values() const { return *values_; }
  std::size_t size() const { return values_->size(); }
  const cd& operator[](std::size_t i) const { return (*values_)[i]; }

 private:
  GridSpec spec_;
  std::shared_ptr<const std::vector<cd>> values_;
};

struct Region {
  enum class Kind { box, ball } kind = Kind::box;
  std::array<double, 3> center{0, 0, 0};
  // box: per-axis half-widths; ball: extent[0] is the radius.
  std::array<double, 3> extent{0, 0, 0};

  bool contains(int n, const std::array<double, 3>& x) const;
};

// Lattice bookkeeping.
void unflatten(const GridSpec& g, std::size_t flat, std::array<long, 3>& idx);
std::size_t flatten(const GridSpec& g, const std::array<long, 3>& idx);
std::array<double, 3> coordinate(const GridSpec& g, const std::array<long, 3>& idx);
std::array<double, 3> frequency(const GridSpec& g, const std::array<long, 3>& idx);

GridFunction constant_function(const GridSpec& g, cd value);
GridFunction from_function(const GridSpec& g, const std::function<cd(const std::array<double, 3>&)>& f);

// Discrete L^p norm: (h^n sum |f|^p)^{1/p}; p = inf gives max |f|.
// Restricted to region if given. Rejects p < 1.
double lp_norm(const GridFunction& f, double p, const Region* region = nullptr);

// ifft(sigma . fft(f)) with sigma evaluated at lattice frequencies.
// Rejects non-finite multiplier values.
GridFunction apply_multiplier(const GridFunction& f, const std::function<cd(const std::array<double, 3>&)>& sigma);

// Same transport with a precomputed multiplier table (lexicographic).
GridFunction apply_multiplier_table(const GridFunction& f, const std::vector<cd>& sigma);

// Multiplier table helper: sigma evaluated at every lattice frequency.
std::vector<cd> multiplier_table(const GridSpec& g, const std::function<cd(const std::array<double, 3>&)>& sigma);

// Unit point mass at lattice point y: value 1/h^n at y, else 0.
// y must lie on the lattice (within 1e-9 h per axis).
GridFunction delta_at(const GridSpec& g, const std::array<double, 3>& y);

// Pointwise algebra (fresh instances).
GridFunction multiply(const GridFunction& a, const GridFunction& b);
GridFunction add(const GridFunction& a, const GridFunction& b);
GridFunction scale(const GridFunction& a, cd factor);

// max|f| over the outer shell (any axis within 10% of the boundary),
// divided by max|f| overall. Proxy for wrap-around contamination.
double boundary_contamination(const GridFunction& f);

// Binary layout: int64 n, int64 npoints, float64 r_box (all little-endian),
// then total() interleaved (re, im) float64 pairs in lexicographic order.
void write_binary(const GridFunction& f, const std::string& path);
GridFunction read_binary(const std::string& path);

// CSV: one row per lattice point: index coords, then re, then im.
void write_csv(const GridFunction& f, const std::string& path);

}  // namespace sh
