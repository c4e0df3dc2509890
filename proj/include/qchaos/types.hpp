#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "qchaos/errors.hpp"

namespace qchaos {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using RealMatrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

namespace tol {
inline constexpr double hermitian = 1e-12;
inline constexpr double unitary = 1e-10;
inline constexpr double trace = 1e-10;
inline constexpr double eigenvalue_floor = -1e-10;
inline constexpr double probability_floor = -1e-12;
inline constexpr double probability_sum = 1e-10;
inline constexpr double bistochastic = 1e-10;
inline constexpr double state_norm = 1e-12;
inline constexpr double eigenphase = 1e-12;
inline constexpr double degeneracy_gap = 1e-10;
}  // namespace tol

namespace detail {
inline void require_finite(const Matrix& m, const char* what) {
  if (!m.allFinite())
    throw ValidationError(std::string(what) + ": non-finite entries");
}
inline double max_abs(const Matrix& m) { return m.cwiseAbs().maxCoeff(); }
}  // namespace detail

/// Hermitian operator. The input must be Hermitian to within 1e-12 in the
/// max norm; it is then symmetrized exactly so downstream algebra can rely
/// on H == H^dag at the bit level.
class HermitianOperator {
 public:
  explicit HermitianOperator(Matrix m) {
    if (m.rows() != m.cols())
      throw DimensionError("HermitianOperator: matrix is " +
                           std::to_string(m.rows()) + "x" +
                           std::to_string(m.cols()) + ", expected square");
    detail::require_finite(m, "HermitianOperator");
    const double dev = detail::max_abs(m - m.adjoint());
    if (dev > tol::hermitian)
      throw ValidationError("HermitianOperator: |M - M^dag|_max = " +
                            std::to_string(dev) + " exceeds 1e-12");
    m_ = 0.5 * (m + m.adjoint().eval());
  }

  const Matrix& matrix() const { return m_; }
  Eigen::Index dim() const { return m_.rows(); }

  /// True when every entry has a vanishing imaginary part (real symmetric
  /// matrices take a faster eigensolver path).
  bool is_real() const { return m_.imag().cwiseAbs().maxCoeff() == 0.0; }

 private:
  Matrix m_;
};

/// Unitary operator, validated to |U^dag U - I|_max <= 1e-10.
class UnitaryOperator {
 public:
  explicit UnitaryOperator(Matrix m) : m_(std::move(m)) {
    if (m_.rows() != m_.cols())
      throw DimensionError("UnitaryOperator: matrix is " +
                           std::to_string(m_.rows()) + "x" +
                           std::to_string(m_.cols()) + ", expected square");
    detail::require_finite(m_, "UnitaryOperator");
    double dev;
    if (m_.imag().cwiseAbs().maxCoeff() == 0.0) {
      // real orthogonal check runs on the cheaper real kernel
      const RealMatrix re = m_.real();
      dev = (re.transpose() * re -
             RealMatrix::Identity(m_.rows(), m_.cols()))
                .cwiseAbs()
                .maxCoeff();
    } else {
      const Matrix gram = m_.adjoint() * m_;
      dev = detail::max_abs(gram - Matrix::Identity(m_.rows(), m_.cols()));
    }
    if (dev > tol::unitary)
      throw ValidationError("UnitaryOperator: |U^dag U - I|_max = " +
                            std::to_string(dev) + " exceeds 1e-10");
  }

  static UnitaryOperator identity(Eigen::Index d) {
    return UnitaryOperator(Matrix::Identity(d, d));
  }

  const Matrix& matrix() const { return m_; }
  Eigen::Index dim() const { return m_.rows(); }

 private:
  Matrix m_;
};

/// Ordered orthonormal basis; column j of the underlying unitary is |j>.
class OrthonormalBasis {
 public:
  explicit OrthonormalBasis(UnitaryOperator columns,
                            std::optional<std::vector<std::string>> labels =
                                std::nullopt)
      : columns_(std::move(columns)), labels_(std::move(labels)) {
    if (labels_ && static_cast<Eigen::Index>(labels_->size()) != dim())
      throw DimensionError("OrthonormalBasis: " +
                           std::to_string(labels_->size()) + " labels for " +
                           std::to_string(dim()) + " columns");
  }

  static OrthonormalBasis computational(Eigen::Index d) {
    return OrthonormalBasis(UnitaryOperator::identity(d));
  }

  const Matrix& matrix() const { return columns_.matrix(); }
  const UnitaryOperator& columns() const { return columns_; }
  Eigen::Index dim() const { return columns_.dim(); }
  Vector column(Eigen::Index j) const { return columns_.matrix().col(j); }
  const std::optional<std::vector<std::string>>& labels() const {
    return labels_;
  }

  /// True for the computational basis, which several hot paths special-case.
  bool is_identity() const {
    return detail::max_abs(matrix() - Matrix::Identity(dim(), dim())) == 0.0;
  }

 private:
  UnitaryOperator columns_;
  std::optional<std::vector<std::string>> labels_;
};

/// Ascending eigenvalues with matching eigenvector columns.
struct SpectralDecomposition {
  RealVector eigenvalues;
  UnitaryOperator eigenvectors;

  SpectralDecomposition(RealVector vals, UnitaryOperator vecs)
      : eigenvalues(std::move(vals)), eigenvectors(std::move(vecs)) {
    if (eigenvalues.size() != eigenvectors.dim())
      throw DimensionError("SpectralDecomposition: " +
                           std::to_string(eigenvalues.size()) +
                           " eigenvalues for dimension " +
                           std::to_string(eigenvectors.dim()));
    for (Eigen::Index i = 0; i + 1 < eigenvalues.size(); ++i)
      if (eigenvalues[i] > eigenvalues[i + 1])
        throw ValidationError(
            "SpectralDecomposition: eigenvalues not nondecreasing at index " +
            std::to_string(i));
  }

  Eigen::Index dim() const { return eigenvalues.size(); }

  /// Smallest consecutive eigenvalue gap (infinity for d = 1).
  double min_gap() const {
    double g = std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i + 1 < eigenvalues.size(); ++i)
      g = std::min(g, eigenvalues[i + 1] - eigenvalues[i]);
    return g;
  }

  OrthonormalBasis basis() const { return OrthonormalBasis(eigenvectors); }
};

/// Normalized pure state.
class PureState {
 public:
  explicit PureState(Vector amplitudes) : a_(std::move(amplitudes)) {
    if (!a_.allFinite())
      throw ValidationError("PureState: non-finite amplitudes");
    const double n = a_.norm();
    if (std::abs(n - 1.0) > tol::state_norm)
      throw ValidationError("PureState: norm deviates from 1 by " +
                            std::to_string(std::abs(n - 1.0)));
  }

  const Vector& amplitudes() const { return a_; }
  Eigen::Index dim() const { return a_.size(); }

 private:
  Vector a_;
};

/// Density matrix. The checked factory verifies Hermiticity, positivity
/// (eigenvalues >= -1e-10) and unit trace; operations whose output is
/// positive by construction use the unchecked factory to skip the
/// eigensolve.
class DensityMatrix {
 public:
  static DensityMatrix validated(Matrix m);
  static DensityMatrix from_pure(const PureState& psi) {
    return DensityMatrix(psi.amplitudes() * psi.amplitudes().adjoint());
  }
  static DensityMatrix diagonal(const RealVector& p) {
    Matrix m = Matrix::Zero(p.size(), p.size());
    m.diagonal() = p.cast<Complex>();
    return DensityMatrix(std::move(m));
  }
  /// Trusted constructor for internal paths where validity is guaranteed
  /// by the producing operation.
  static DensityMatrix unchecked(Matrix m) { return DensityMatrix(std::move(m)); }

  const Matrix& matrix() const { return m_; }
  Eigen::Index dim() const { return m_.rows(); }

 private:
  explicit DensityMatrix(Matrix m) : m_(std::move(m)) {}
  Matrix m_;
};

/// Probability vector: entries >= -1e-12 are clamped to zero, sum within
/// 1e-10 of one.
class ProbabilityVector {
 public:
  explicit ProbabilityVector(RealVector p) : p_(std::move(p)) {
    if (!p_.allFinite())
      throw ValidationError("ProbabilityVector: non-finite entries");
    for (Eigen::Index i = 0; i < p_.size(); ++i) {
      if (p_[i] < tol::probability_floor)
        throw ValidationError("ProbabilityVector: entry " + std::to_string(i) +
                              " = " + std::to_string(p_[i]) + " below -1e-12");
      if (p_[i] < 0.0) p_[i] = 0.0;
    }
    const double s = p_.sum();
    if (std::abs(s - 1.0) > tol::probability_sum)
      throw ValidationError("ProbabilityVector: sum deviates from 1 by " +
                            std::to_string(std::abs(s - 1.0)));
  }

  const RealVector& probabilities() const { return p_; }
  Eigen::Index dim() const { return p_.size(); }
  double operator[](Eigen::Index i) const { return p_[i]; }

 private:
  RealVector p_;
};

/// Real square matrix with entries in [0,1] whose rows and columns each sum
/// to one (within 1e-10).
class BistochasticMatrix {
 public:
  explicit BistochasticMatrix(RealMatrix x) : x_(std::move(x)) {
    if (x_.rows() != x_.cols())
      throw DimensionError("BistochasticMatrix: not square");
    if (!x_.allFinite())
      throw ValidationError("BistochasticMatrix: non-finite entries");
    if (x_.minCoeff() < -tol::bistochastic ||
        x_.maxCoeff() > 1.0 + tol::bistochastic)
      throw ValidationError("BistochasticMatrix: entries outside [0,1]");
    for (Eigen::Index i = 0; i < x_.rows(); ++i) {
      if (std::abs(x_.row(i).sum() - 1.0) > tol::bistochastic)
        throw ValidationError("BistochasticMatrix: row " + std::to_string(i) +
                              " sums to " + std::to_string(x_.row(i).sum()));
      if (std::abs(x_.col(i).sum() - 1.0) > tol::bistochastic)
        throw ValidationError("BistochasticMatrix: column " +
                              std::to_string(i) + " sums to " +
                              std::to_string(x_.col(i).sum()));
    }
  }

  const RealMatrix& matrix() const { return x_; }
  Eigen::Index dim() const { return x_.rows(); }

 private:
  RealMatrix x_;
};

/// Random-ensemble description for reproducible sampling.
enum class EnsembleKind { GOE, GUE, Haar, DiagonalPhases };

struct EnsembleSpec {
  EnsembleKind kind = EnsembleKind::GUE;
  int dimension = 2;
  long samples = 1;
  std::uint64_t master_seed = 0;

  EnsembleSpec() = default;
  EnsembleSpec(EnsembleKind k, int d, long n, std::uint64_t seed)
      : kind(k), dimension(d), samples(n), master_seed(seed) {
    if (dimension < 2)
      throw ValidationError("EnsembleSpec: dimension must be >= 2, got " +
                            std::to_string(dimension));
    if (samples < 1)
      throw ValidationError("EnsembleSpec: samples must be >= 1, got " +
                            std::to_string(samples));
  }
};

/// Uniform time grid over [t_min, t_max] with num_points samples.
struct TimeGrid {
  double t_min = 0.0;
  double t_max = 1.0;
  int num_points = 2;

  std::vector<double> linspace() const {
    if (num_points < 1) throw ValidationError("TimeGrid: num_points < 1");
    if (!(t_max >= t_min)) throw ValidationError("TimeGrid: t_max < t_min");
    std::vector<double> ts(num_points);
    if (num_points == 1) {
      ts[0] = t_min;
      return ts;
    }
    const double step = (t_max - t_min) / (num_points - 1);
    for (int i = 0; i < num_points; ++i) ts[i] = t_min + step * i;
    return ts;
  }

  /// Logarithmically spaced grid (requires 0 < t_min < t_max).
  std::vector<double> logspace() const {
    if (num_points < 1) throw ValidationError("TimeGrid: num_points < 1");
    if (!(t_min > 0.0) || !(t_max > t_min))
      throw ValidationError("TimeGrid: logspace needs 0 < t_min < t_max");
    std::vector<double> ts(num_points);
    if (num_points == 1) {
      ts[0] = t_min;
      return ts;
    }
    const double lmin = std::log(t_min), lmax = std::log(t_max);
    const double step = (lmax - lmin) / (num_points - 1);
    for (int i = 0; i < num_points; ++i) ts[i] = std::exp(lmin + step * i);
    return ts;
  }
};

/// Real-valued samples on a strictly increasing time grid.
struct TimeSeries {
  std::vector<double> times;
  std::vector<double> values;

  TimeSeries(std::vector<double> t, std::vector<double> v)
      : times(std::move(t)), values(std::move(v)) {
    if (times.size() != values.size())
      throw DimensionError("TimeSeries: " + std::to_string(times.size()) +
                           " times vs " + std::to_string(values.size()) +
                           " values");
    for (std::size_t i = 0; i + 1 < times.size(); ++i)
      if (!(times[i] < times[i + 1]))
        throw ValidationError("TimeSeries: times not strictly increasing at " +
                              std::to_string(i));
    for (double v : values)
      if (!std::isfinite(v))
        throw ValidationError("TimeSeries: non-finite value");
  }
};

/// Mean and standard error of a Monte-Carlo estimate.
struct McEstimate {
  double mean = 0.0;
  double standard_error = 0.0;
  long samples = 0;
};

}  // namespace qchaos
