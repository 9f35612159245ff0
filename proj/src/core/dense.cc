#include "dense.hh"

#include <Eigen/Dense>
#include <cmath>

#include "errors.hh"

namespace sh {

namespace {

// Circulant block structure: column j of the multiplier matrix is the
// operator applied to the j-th basis vector, which is the axis-wise cyclic
// shift of column 0.
Eigen::MatrixXcd multiplier_matrix(const GridSpec& g, const std::vector<cd>& table) {
  const std::size_t total = g.total();
  std::vector<cd> e0(total, cd(0, 0));
  e0[0] = 1.0;
  const GridFunction col0 = apply_multiplier_table(GridFunction(g, std::move(e0)), table);

  Eigen::MatrixXcd mat(total, total);
  std::array<long, 3> ij{0, 0, 0}, jj{0, 0, 0}, diff{0, 0, 0};
  for (std::size_t j = 0; j < total; ++j) {
    unflatten(g, j, jj);
    for (std::size_t i = 0; i < total; ++i) {
      unflatten(g, i, ij);
      for (int d = 0; d < 3; ++d) {
        diff[d] = ij[d] - jj[d];
        if (diff[d] < 0) diff[d] += g.npoints;
      }
      mat(Eigen::Index(i), Eigen::Index(j)) = col0[flatten(g, diff)];
    }
  }
  return mat;
}

Eigen::VectorXcd to_vector(const GridFunction& f) {
  Eigen::VectorXcd v(Eigen::Index(f.size()));
  for (std::size_t i = 0; i < f.size(); ++i) v[Eigen::Index(i)] = f[i];
  return v;
}

GridFunction to_function(const GridSpec& g, const Eigen::VectorXcd& v) {
  std::vector<cd> vals(std::size_t(v.size()));
  for (std::size_t i = 0; i < vals.size(); ++i) vals[i] = v[Eigen::Index(i)];
  return GridFunction(g, std::move(vals));
}

}  // namespace

void check_dense_gate(const GridSpec& g) {
  require(g.total() <= 4096, ErrorCode::method_unavailable,
          "dense route is gated at 4096 lattice points");
}

GridFunction dense_solve(const EllipticSymbol& P, const PotentialSpec& V, cd z,
                         const GridFunction& f, const ComplexShift* shift) {
  const GridSpec& g = f.spec();
  check_dense_gate(g);
  Eigen::MatrixXcd a = -multiplier_matrix(g, symbol_multiplier(P, g, shift));
  const GridFunction vg = sample_potential(V, g);
  for (std::size_t i = 0; i < g.total(); ++i) {
    a(Eigen::Index(i), Eigen::Index(i)) += z - vg[i];
  }
  Eigen::PartialPivLU<Eigen::MatrixXcd> lu(a);
  return to_function(g, lu.solve(to_vector(f)));
}

struct DenseSemigroup::Impl {
  GridSpec g;
  Eigen::MatrixXd vectors;
  Eigen::VectorXd values;
};

DenseSemigroup::DenseSemigroup(const EllipticSymbol& P, const PotentialSpec& V,
                               const GridSpec& g) {
  check_dense_gate(g);
  const Eigen::MatrixXcd mc = multiplier_matrix(g, symbol_multiplier(P, g, nullptr));
  // Real even symbols give a real circulant; tolerate only rounding residue.
  double max_imag = 0;
  for (Eigen::Index j = 0; j < mc.cols(); ++j)
    for (Eigen::Index i = 0; i < mc.rows(); ++i)
      max_imag = std::max(max_imag, std::abs(mc(i, j).imag()));
  require(max_imag <= 1e-9, ErrorCode::internal,
          "dense semigroup: discretized symbol is not real");

  Eigen::MatrixXd m = mc.real();
  const GridFunction vg = sample_potential(V, g);
  for (std::size_t i = 0; i < g.total(); ++i)
    m(Eigen::Index(i), Eigen::Index(i)) += vg[i].real();
  m = 0.5 * (m + m.transpose()).eval();  // kill rounding asymmetry

  auto impl = std::make_shared<Impl>();
  impl->g = g;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m);
  require(es.info() == Eigen::Success, ErrorCode::internal,
          "dense semigroup: eigensolver failed");
  impl->vectors = es.eigenvectors();
  impl->values = es.eigenvalues();
  impl_ = std::move(impl);
}

GridFunction DenseSemigroup::apply(double t, const GridFunction& f) const {
  require(std::isfinite(t) && t > 0, ErrorCode::invalid_argument,
          "dense semigroup: t must be positive");
  require(f.spec() == impl_->g, ErrorCode::invalid_argument,
          "dense semigroup: grid mismatch");
  const Eigen::Index sz = Eigen::Index(f.size());
  Eigen::VectorXd xr(sz), xi(sz);
  for (Eigen::Index i = 0; i < sz; ++i) {
    xr[i] = f[std::size_t(i)].real();
    xi[i] = f[std::size_t(i)].imag();
  }
  Eigen::VectorXd cr = impl_->vectors.transpose() * xr;
  Eigen::VectorXd ci = impl_->vectors.transpose() * xi;
  for (Eigen::Index i = 0; i < sz; ++i) {
    const double decay = std::exp(-t * impl_->values[i]);
    cr[i] *= decay;
    ci[i] *= decay;
  }
  const Eigen::VectorXd yr = impl_->vectors * cr;
  const Eigen::VectorXd yi = impl_->vectors * ci;
  std::vector<cd> vals(static_cast<std::size_t>(sz));
  for (Eigen::Index i = 0; i < sz; ++i) vals[std::size_t(i)] = cd(yr[i], yi[i]);
  return GridFunction(impl_->g, std::move(vals));
}

double DenseSemigroup::spectrum_min() const { return impl_->values.minCoeff(); }
double DenseSemigroup::spectrum_max() const { return impl_->values.maxCoeff(); }

}  // namespace sh
