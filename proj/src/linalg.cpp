#include "qchaos/linalg.hpp"

#include <lapacke.h>

#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

namespace qchaos {

namespace {

/// Index of the largest-magnitude entry; the first one wins near-ties so
/// the choice is stable under eigensolver jitter.
Eigen::Index argmax_abs(const Vector& v) {
  Eigen::Index best = 0;
  double best_mag = std::abs(v[0]);
  for (Eigen::Index i = 1; i < v.size(); ++i) {
    const double m = std::abs(v[i]);
    if (m > best_mag * (1.0 + 1e-12)) {
      best = i;
      best_mag = m;
    }
  }
  return best;
}

/// Rotate a column's global phase so its largest component is real positive.
void fix_phase(Eigen::Ref<Vector> v) {
  const Eigen::Index k = argmax_abs(v);
  const double mag = std::abs(v[k]);
  if (mag == 0.0) return;
  const Complex phase = v[k] / mag;
  v *= std::conj(phase);
  v[k] = Complex(std::abs(v[k]), 0.0);  // clear residual imaginary dust
}

/// Deterministic ordering for eigenvectors inside a degenerate group:
/// first by the index of the largest-magnitude entry, then entrywise
/// lexicographically on (re, im).
bool column_less(const Matrix& m, Eigen::Index a, Eigen::Index b) {
  const Eigen::Index ia = argmax_abs(m.col(a));
  const Eigen::Index ib = argmax_abs(m.col(b));
  if (ia != ib) return ia < ib;
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    const Complex x = m(i, a), y = m(i, b);
    if (x.real() != y.real()) return x.real() < y.real();
    if (x.imag() != y.imag()) return x.imag() < y.imag();
  }
  return false;
}

void tie_break_degenerate_groups(const RealVector& vals, Matrix& vecs,
                                 double scale) {
  const double gap_tol = 1e-12 * std::max(1.0, scale);
  const Eigen::Index d = vals.size();
  Eigen::Index lo = 0;
  while (lo < d) {
    Eigen::Index hi = lo;
    while (hi + 1 < d && vals[hi + 1] - vals[hi] <= gap_tol) ++hi;
    if (hi > lo) {
      std::vector<Eigen::Index> order(hi - lo + 1);
      std::iota(order.begin(), order.end(), lo);
      std::stable_sort(order.begin(), order.end(),
                       [&](Eigen::Index a, Eigen::Index b) {
                         return column_less(vecs, a, b);
                       });
      // Only the vectors move; the eigenvalues stay in LAPACK's ascending
      // order. Within a group they agree to gap_tol, so repairing changes
      // the reconstruction by far less than the decomposition tolerance.
      Matrix block(d, order.size());
      for (std::size_t j = 0; j < order.size(); ++j)
        block.col(j) = vecs.col(order[j]);
      vecs.middleCols(lo, order.size()) = block;
    }
    lo = hi + 1;
  }
}

}  // namespace

SpectralDecomposition eigh(const HermitianOperator& h) {
  const Eigen::Index d = h.dim();
  RealVector vals(d);
  Matrix vecs(d, d);

  if (h.is_real()) {
    RealMatrix a = h.matrix().real();
    const lapack_int info = LAPACKE_dsyevd(
        LAPACK_COL_MAJOR, 'V', 'L', static_cast<lapack_int>(d), a.data(),
        static_cast<lapack_int>(d), vals.data());
    if (info != 0)
      throw ConvergenceError("eigh: dsyevd failed (info=" +
                             std::to_string(info) + ") at dimension " +
                             std::to_string(d));
    vecs = a.cast<Complex>();
  } else {
    Matrix a = h.matrix();
    const lapack_int info = LAPACKE_zheevd(
        LAPACK_COL_MAJOR, 'V', 'L', static_cast<lapack_int>(d),
        reinterpret_cast<lapack_complex_double*>(a.data()),
        static_cast<lapack_int>(d), vals.data());
    if (info != 0)
      throw ConvergenceError("eigh: zheevd failed (info=" +
                             std::to_string(info) + ") at dimension " +
                             std::to_string(d));
    vecs = a;
  }

  for (Eigen::Index j = 0; j < d; ++j) fix_phase(vecs.col(j));
  const double hmax = detail::max_abs(h.matrix());
  tie_break_degenerate_groups(vals, vecs, hmax);

  double resid;
  if (h.is_real()) {
    const RealMatrix vr = vecs.real();
    const RealMatrix recon = vr * vals.asDiagonal() * vr.transpose();
    resid = (recon - h.matrix().real()).cwiseAbs().maxCoeff();
  } else {
    const Matrix recon =
        vecs * vals.cast<Complex>().asDiagonal() * vecs.adjoint();
    resid = detail::max_abs(recon - h.matrix());
  }
  if (resid > 1e-10 * static_cast<double>(d) * std::max(hmax, 1e-300))
    throw ConvergenceError("eigh: reconstruction residual " +
                           std::to_string(resid) + " too large at dimension " +
                           std::to_string(d));
  return SpectralDecomposition(std::move(vals),
                               UnitaryOperator(std::move(vecs)));
}

RealVector eigvalsh(const HermitianOperator& h) {
  const Eigen::Index d = h.dim();
  RealVector vals(d);
  if (h.is_real()) {
    RealMatrix a = h.matrix().real();
    const lapack_int info = LAPACKE_dsyevd(
        LAPACK_COL_MAJOR, 'N', 'L', static_cast<lapack_int>(d), a.data(),
        static_cast<lapack_int>(d), vals.data());
    if (info != 0)
      throw ConvergenceError("eigvalsh: dsyevd failed (info=" +
                             std::to_string(info) + ") at dimension " +
                             std::to_string(d));
  } else {
    Matrix a = h.matrix();
    const lapack_int info = LAPACKE_zheevd(
        LAPACK_COL_MAJOR, 'N', 'L', static_cast<lapack_int>(d),
        reinterpret_cast<lapack_complex_double*>(a.data()),
        static_cast<lapack_int>(d), vals.data());
    if (info != 0)
      throw ConvergenceError("eigvalsh: zheevd failed (info=" +
                             std::to_string(info) + ") at dimension " +
                             std::to_string(d));
  }
  return vals;
}

UnitaryOperator evolve(const SpectralDecomposition& spec, double t) {
  if (!std::isfinite(t)) throw ValidationError("evolve: non-finite time");
  const Matrix& v = spec.eigenvectors.matrix();
  Matrix scaled = v;
  for (Eigen::Index j = 0; j < spec.dim(); ++j)
    scaled.col(j) *= std::exp(Complex(0.0, -spec.eigenvalues[j] * t));
  return UnitaryOperator(scaled * v.adjoint());
}

DensityMatrix dephase(const DensityMatrix& rho, const OrthonormalBasis& b) {
  if (rho.dim() != b.dim())
    throw DimensionError("dephase: rho is " + std::to_string(rho.dim()) +
                         "-dimensional but basis has dimension " +
                         std::to_string(b.dim()));
  if (b.is_identity()) {
    Matrix out = Matrix::Zero(rho.dim(), rho.dim());
    out.diagonal() = rho.matrix().diagonal().real().cast<Complex>();
    return DensityMatrix::unchecked(std::move(out));
  }
  const Matrix& bm = b.matrix();
  const RealVector diag = (bm.adjoint() * rho.matrix() * bm).diagonal().real();
  return DensityMatrix::unchecked(bm * diag.cast<Complex>().asDiagonal() *
                                  bm.adjoint());
}

DensityMatrix partial_trace(const DensityMatrix& rho,
                            std::pair<Eigen::Index, Eigen::Index> dims,
                            Subsystem keep) {
  const auto [da, db] = dims;
  if (da < 1 || db < 1 || da * db != rho.dim())
    throw DimensionError("partial_trace: dimensions (" + std::to_string(da) +
                         "," + std::to_string(db) + ") do not factor " +
                         std::to_string(rho.dim()));
  const Matrix& m = rho.matrix();
  if (keep == Subsystem::A) {
    Matrix out = Matrix::Zero(da, da);
    for (Eigen::Index i = 0; i < da; ++i)
      for (Eigen::Index j = 0; j < da; ++j)
        for (Eigen::Index k = 0; k < db; ++k)
          out(i, j) += m(i * db + k, j * db + k);
    return DensityMatrix::unchecked(std::move(out));
  }
  Matrix out = Matrix::Zero(db, db);
  for (Eigen::Index i = 0; i < db; ++i)
    for (Eigen::Index j = 0; j < db; ++j)
      for (Eigen::Index k = 0; k < da; ++k)
        out(i, j) += m(k * db + i, k * db + j);
  return DensityMatrix::unchecked(std::move(out));
}

ProbabilityVector schmidt_squared(const PureState& psi,
                                  std::pair<Eigen::Index, Eigen::Index> dims) {
  const auto [da, db] = dims;
  if (da < 1 || db < 1 || da * db != psi.dim())
    throw DimensionError("schmidt_squared: dimensions (" + std::to_string(da) +
                         "," + std::to_string(db) + ") do not factor " +
                         std::to_string(psi.dim()));
  Matrix a(da, db);
  for (Eigen::Index i = 0; i < da; ++i)
    for (Eigen::Index j = 0; j < db; ++j) a(i, j) = psi.amplitudes()[i * db + j];
  Eigen::JacobiSVD<Matrix> svd(a);
  RealVector p = RealVector::Zero(da);
  const RealVector sv = svd.singularValues();
  for (Eigen::Index i = 0; i < sv.size() && i < da; ++i) p[i] = sv[i] * sv[i];
  // Singular values come out descending; renormalize away rounding dust.
  const double s = p.sum();
  if (s > 0.0) p /= s;
  return ProbabilityVector(std::move(p));
}

BistochasticMatrix overlap_matrix(const OrthonormalBasis& b1,
                                  const OrthonormalBasis& b2) {
  if (b1.dim() != b2.dim())
    throw DimensionError("overlap_matrix: dimensions " +
                         std::to_string(b1.dim()) + " vs " +
                         std::to_string(b2.dim()));
  const Matrix overlaps = b1.matrix().adjoint() * b2.matrix();
  return BistochasticMatrix(overlaps.cwiseAbs2());
}

DensityMatrix DensityMatrix::validated(Matrix m) {
  if (m.rows() != m.cols())
    throw DimensionError("DensityMatrix: not square");
  if (!m.allFinite())
    throw ValidationError("DensityMatrix: non-finite entries");
  const double herm = qchaos::detail::max_abs(m - m.adjoint());
  if (herm > tol::hermitian)
    throw ValidationError("DensityMatrix: |rho - rho^dag|_max = " +
                          std::to_string(herm));
  const double tr_dev = std::abs(m.trace() - Complex(1.0, 0.0));
  if (tr_dev > tol::trace)
    throw ValidationError("DensityMatrix: trace deviates from 1 by " +
                          std::to_string(tr_dev));
  Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (m + m.adjoint().eval()),
                                           Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success)
    throw ConvergenceError("DensityMatrix: eigenvalue check failed");
  if (es.eigenvalues().minCoeff() < tol::eigenvalue_floor)
    throw ValidationError("DensityMatrix: eigenvalue " +
                          std::to_string(es.eigenvalues().minCoeff()) +
                          " below -1e-10");
  return DensityMatrix(std::move(m));
}

namespace detail {
Matrix basis_coordinates(const OrthonormalBasis& b, const Matrix& cols) {
  if (b.dim() != cols.rows())
    throw DimensionError("basis_coordinates: basis dimension " +
                         std::to_string(b.dim()) + " vs " +
                         std::to_string(cols.rows()) + " rows");
  if (b.is_identity()) return cols;
  const bool breal = b.matrix().imag().cwiseAbs().maxCoeff() == 0.0;
  const bool creal = cols.imag().cwiseAbs().maxCoeff() == 0.0;
  if (breal && creal) {
    // dgemm is roughly four times cheaper than zgemm at the scan sizes.
    RealMatrix out = b.matrix().real().transpose() * cols.real();
    return out.cast<Complex>();
  }
  return b.matrix().adjoint() * cols;
}
}  // namespace detail

}  // namespace qchaos
