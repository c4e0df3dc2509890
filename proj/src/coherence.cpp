#include "qchaos/coherence.hpp"

#include <algorithm>
#include <cmath>

#include "qchaos/linalg.hpp"
#include "qchaos/rng.hpp"

namespace qchaos {

namespace {

void check_dims(Eigen::Index a, Eigen::Index b, const char* op) {
  if (a != b)
    throw DimensionError(std::string(op) + ": state dimension " +
                         std::to_string(a) + " vs basis dimension " +
                         std::to_string(b));
}

double shannon_nats(const RealVector& p) {
  double s = 0.0;
  for (Eigen::Index i = 0; i < p.size(); ++i) {
    const double x = std::max(p[i], 0.0);
    if (x > 0.0) s -= x * std::log(x);
  }
  return s;
}

/// von Neumann entropy in nats, eigenvalues clipped at zero.
double vn_entropy(const DensityMatrix& rho) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(rho.matrix(),
                                           Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success)
    throw ConvergenceError("c_rel: entropy eigensolve failed");
  return shannon_nats(es.eigenvalues());
}

RealVector basis_probabilities(const PureState& psi,
                               const OrthonormalBasis& b) {
  const Vector a = b.is_identity()
                       ? psi.amplitudes()
                       : Vector(b.matrix().adjoint() * psi.amplitudes());
  return a.cwiseAbs2();
}

}  // namespace

double c2(const DensityMatrix& rho, const OrthonormalBasis& b) {
  check_dims(rho.dim(), b.dim(), "c2");
  const Matrix m = b.is_identity()
                       ? rho.matrix()
                       : Matrix(b.matrix().adjoint() * rho.matrix() *
                                b.matrix());
  return m.cwiseAbs2().sum() - m.diagonal().cwiseAbs2().sum();
}

double c2(const PureState& psi, const OrthonormalBasis& b) {
  check_dims(psi.dim(), b.dim(), "c2");
  const RealVector p = basis_probabilities(psi, b);
  return 1.0 - p.cwiseAbs2().sum();
}

double c_rel(const DensityMatrix& rho, const OrthonormalBasis& b) {
  check_dims(rho.dim(), b.dim(), "c_rel");
  const Matrix& bm = b.matrix();
  const RealVector p =
      b.is_identity()
          ? RealVector(rho.matrix().diagonal().real())
          : RealVector((bm.adjoint() * rho.matrix() * bm).diagonal().real());
  return shannon_nats(p) - vn_entropy(rho);
}

double c_rel(const PureState& psi, const OrthonormalBasis& b) {
  check_dims(psi.dim(), b.dim(), "c_rel");
  return shannon_nats(basis_probabilities(psi, b));
}

double c_l1(const DensityMatrix& rho, const OrthonormalBasis& b) {
  check_dims(rho.dim(), b.dim(), "c_l1");
  const Matrix m = b.is_identity()
                       ? rho.matrix()
                       : Matrix(b.matrix().adjoint() * rho.matrix() *
                                b.matrix());
  return m.cwiseAbs().sum() - m.diagonal().cwiseAbs().sum();
}

double c_l1(const PureState& psi, const OrthonormalBasis& b) {
  check_dims(psi.dim(), b.dim(), "c_l1");
  const Vector a = b.is_identity()
                       ? psi.amplitudes()
                       : Vector(b.matrix().adjoint() * psi.amplitudes());
  const double s1 = a.cwiseAbs().sum();
  return s1 * s1 - a.cwiseAbs2().sum();
}

double pr2(const PureState& psi, const OrthonormalBasis& b) {
  check_dims(psi.dim(), b.dim(), "pr2");
  return basis_probabilities(psi, b).cwiseAbs2().sum();
}

double participation_count(const PureState& psi, const OrthonormalBasis& b) {
  return 1.0 / pr2(psi, b);
}

double loschmidt_echo(const PureState& psi, const SpectralDecomposition& spec,
                      double t) {
  check_dims(psi.dim(), spec.dim(), "loschmidt_echo");
  if (!std::isfinite(t))
    throw ValidationError("loschmidt_echo: non-finite time");
  const Vector a = spec.eigenvectors.matrix().adjoint() * psi.amplitudes();
  Complex amp(0.0, 0.0);
  for (Eigen::Index j = 0; j < a.size(); ++j)
    amp += std::norm(a[j]) * std::exp(Complex(0.0, -spec.eigenvalues[j] * t));
  return std::min(std::norm(amp), 1.0);
}

double effective_dimension(const DensityMatrix& rho) {
  const double purity = rho.matrix().cwiseAbs2().sum();
  return 1.0 / purity;
}

EscapeProbability escape_probability(const PureState& psi,
                                     const SpectralDecomposition& spec) {
  check_dims(psi.dim(), spec.dim(), "escape_probability");
  const double gap = spec.min_gap();
  EscapeProbability out;
  out.value = c2(psi, spec.basis());
  out.min_gap = gap;
  out.degenerate_spectrum = gap <= tol::degeneracy_gap;
  return out;
}

double finite_time_average(const std::function<double(double)>& f, double T,
                           double dt) {
  if (!(T > 0.0) || !(dt > 0.0) || !(dt < T))
    throw ValidationError("finite_time_average: need 0 < dt < T");
  const long n = std::max<long>(1, std::lround(T / dt));
  const double step = T / static_cast<double>(n);
  double acc = 0.0;
  for (long i = 0; i <= n; ++i) {
    const double v = f(step * static_cast<double>(i));
    if (!std::isfinite(v))
      throw ValidationError("finite_time_average: non-finite sample at t = " +
                            std::to_string(step * i));
    acc += (i == 0 || i == n) ? 0.5 * v : v;
  }
  return acc / static_cast<double>(n);
}

double goe_crel_prediction(int d, LogBase base) {
  if (d < 2)
    throw ValidationError("goe_crel_prediction: d must be >= 2");
  const double nats = std::log(0.48 * static_cast<double>(d));
  return base == LogBase::nats ? nats : nats / std::log(2.0);
}

double goe_c2_analytic(int d) {
  return 1.0 - 3.0 / (static_cast<double>(d) + 2.0);
}

McEstimate goe_c2_prediction(int d, long samples, std::uint64_t seed) {
  if (d < 2) throw ValidationError("goe_c2_prediction: d must be >= 2");
  if (samples < 1)
    throw ValidationError("goe_c2_prediction: samples must be >= 1");
  double mean = 0.0, m2 = 0.0;
  for (long i = 0; i < samples; ++i) {
    RandomStream rng = RandomStream::for_sample(seed, i);
    double norm2 = 0.0, fourth = 0.0;
    RealVector x(d);
    for (int j = 0; j < d; ++j) {
      x[j] = rng.gaussian();
      norm2 += x[j] * x[j];
    }
    for (int j = 0; j < d; ++j) {
      const double p = x[j] * x[j] / norm2;
      fourth += p * p;
    }
    const double val = 1.0 - fourth;
    const double delta = val - mean;
    mean += delta / static_cast<double>(i + 1);
    m2 += delta * (val - mean);
  }
  McEstimate est;
  est.mean = mean;
  est.samples = samples;
  est.standard_error =
      samples > 1 ? std::sqrt(m2 / (static_cast<double>(samples) *
                                    static_cast<double>(samples - 1)))
                  : 0.0;
  return est;
}

double min_product_basis_c2(const PureState& psi,
                            std::pair<Eigen::Index, Eigen::Index> dims) {
  const ProbabilityVector lam2 = schmidt_squared(psi, dims);
  return 1.0 - lam2.probabilities().cwiseAbs2().sum();
}

std::vector<CoherenceReport> eigenstate_coherence_scan(
    const SpectralDecomposition& spec, const OrthonormalBasis& b,
    const MeasureSet& measures) {
  check_dims(spec.dim(), b.dim(), "eigenstate_coherence_scan");
  const Eigen::Index d = spec.dim();
  const Matrix coords =
      detail::basis_coordinates(b, spec.eigenvectors.matrix());
  const double c2_norm = goe_c2_analytic(static_cast<int>(d));
  const double crel_norm =
      goe_crel_prediction(static_cast<int>(d), LogBase::nats);
  const double nan = std::numeric_limits<double>::quiet_NaN();

  std::vector<CoherenceReport> reports(d);
  for (Eigen::Index k = 0; k < d; ++k) {
    const RealVector p = coords.col(k).cwiseAbs2();
    CoherenceReport& r = reports[k];
    r.index = static_cast<int>(k);
    r.energy = spec.eigenvalues[k];
    const double sum_p2 = p.cwiseAbs2().sum();
    r.pr2 = measures.pr2 ? sum_p2 : nan;
    r.c2 = measures.c2 ? 1.0 - sum_p2 : nan;
    r.c_rel = measures.c_rel ? shannon_nats(p) : nan;
    if (measures.c_l1) {
      const double s1 = coords.col(k).cwiseAbs().sum();
      r.c_l1 = s1 * s1 - 1.0;
    } else {
      r.c_l1 = nan;
    }
    r.normalized_c2 = measures.c2 ? r.c2 / c2_norm : nan;
    r.normalized_c_rel = measures.c_rel ? r.c_rel / crel_norm : nan;

    // report invariants
    const double dd = static_cast<double>(d);
    if (measures.c2 && (r.c2 < -1e-10 || r.c2 > 1.0 - 1.0 / dd + 1e-10))
      throw ValidationError("coherence scan: c2 out of range at index " +
                            std::to_string(k));
    if (measures.c_rel &&
        (r.c_rel < -1e-10 || r.c_rel > std::log(dd) + 1e-10))
      throw ValidationError("coherence scan: c_rel out of range at index " +
                            std::to_string(k));
    if (measures.pr2 && (r.pr2 < 1.0 / dd - 1e-10 || r.pr2 > 1.0 + 1e-12))
      throw ValidationError("coherence scan: pr2 out of range at index " +
                            std::to_string(k));
  }
  return reports;
}

std::vector<CoherenceReport> eigenstate_coherence_scan(
    const HermitianOperator& h, const OrthonormalBasis& b,
    const MeasureSet& measures) {
  return eigenstate_coherence_scan(eigh(h), b, measures);
}

}  // namespace qchaos
