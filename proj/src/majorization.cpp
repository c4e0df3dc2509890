#include "qchaos/majorization.hpp"

#include <algorithm>
#include <cmath>

#include "qchaos/coherence.hpp"
#include "qchaos/linalg.hpp"

namespace qchaos {

namespace {
constexpr double kGapTol = -1e-12;
constexpr double kTotalTol = 1e-10;

std::vector<double> sorted_descending(const RealVector& p) {
  std::vector<double> out(p.data(), p.data() + p.size());
  std::sort(out.begin(), out.end(), std::greater<double>());
  return out;
}

double shannon(const RealVector& p) {
  double s = 0.0;
  for (Eigen::Index i = 0; i < p.size(); ++i)
    if (p[i] > 0.0) s -= p[i] * std::log(p[i]);
  return s;
}

/// Central window [lo, lo+m) of d indices, rounded outward so the window
/// never undershoots the requested fraction.
std::pair<Eigen::Index, Eigen::Index> central_window(Eigen::Index d,
                                                     double window) {
  const auto lo = static_cast<Eigen::Index>(
      std::floor(static_cast<double>(d) * (1.0 - window) / 2.0));
  return {lo, d - 2 * lo};
}
}  // namespace

MajorizationResult majorizes(const ProbabilityVector& w,
                             const ProbabilityVector& v) {
  if (w.dim() != v.dim())
    throw DimensionError("majorizes: lengths " + std::to_string(w.dim()) +
                         " vs " + std::to_string(v.dim()));
  const auto ws = sorted_descending(w.probabilities());
  const auto vs = sorted_descending(v.probabilities());
  MajorizationResult res;
  res.partial_sum_gaps.resize(ws.size());
  double sw = 0.0, sv = 0.0;
  res.majorized = true;
  for (std::size_t k = 0; k < ws.size(); ++k) {
    sw += ws[k];
    sv += vs[k];
    res.partial_sum_gaps[k] = sw - sv;
    if (res.partial_sum_gaps[k] < kGapTol && res.majorized) {
      res.majorized = false;
      res.first_violation_index = static_cast<Eigen::Index>(k);
    }
  }
  if (std::abs(sw - sv) > kTotalTol) {
    res.majorized = false;
    if (!res.first_violation_index)
      res.first_violation_index = static_cast<Eigen::Index>(ws.size() - 1);
  }
  return res;
}

double eigenstate_majorization_fraction(const SpectralDecomposition& integrable,
                                        const SpectralDecomposition& chaotic,
                                        const OrthonormalBasis& b,
                                        double window) {
  if (integrable.dim() != chaotic.dim() || integrable.dim() != b.dim())
    throw DimensionError(
        "eigenstate_majorization_fraction: dimensions disagree (" +
        std::to_string(integrable.dim()) + ", " +
        std::to_string(chaotic.dim()) + ", " + std::to_string(b.dim()) + ")");
  if (!(window > 0.0) || window > 1.0)
    throw ValidationError(
        "eigenstate_majorization_fraction: window must lie in (0, 1]");

  const Matrix pi =
      detail::basis_coordinates(b, integrable.eigenvectors.matrix());
  const Matrix pc = detail::basis_coordinates(b, chaotic.eigenvectors.matrix());

  const auto [lo, m] = central_window(integrable.dim(), window);
  long hits = 0;
  for (Eigen::Index k = lo; k < lo + m; ++k) {
    const ProbabilityVector w(pi.col(k).cwiseAbs2());
    const ProbabilityVector v(pc.col(k).cwiseAbs2());
    if (majorizes(w, v).majorized) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(m);
}

double eigenstate_majorization_fraction(const HermitianOperator& h_integrable,
                                        const HermitianOperator& h_chaotic,
                                        const OrthonormalBasis& b,
                                        double window) {
  return eigenstate_majorization_fraction(eigh(h_integrable), eigh(h_chaotic),
                                          b, window);
}

bool schur_concavity_check(const ProbabilityVector& w,
                           const ProbabilityVector& v) {
  const MajorizationResult pre = majorizes(w, v);
  if (!pre.majorized)
    throw ValidationError(
        "schur_concavity_check: precondition failed, w does not majorize v" +
        (pre.first_violation_index
             ? " (first violation at prefix " +
                   std::to_string(*pre.first_violation_index) + ")"
             : std::string()));
  constexpr double tol = 1e-12;
  const double shannon_ok = shannon(v.probabilities()) -
                            shannon(w.probabilities());
  const double renyi2_v = -std::log(v.probabilities().cwiseAbs2().sum());
  const double renyi2_w = -std::log(w.probabilities().cwiseAbs2().sum());

  // coherence ordering of the pure states with amplitudes sqrt(p_j)
  const OrthonormalBasis basis = OrthonormalBasis::computational(w.dim());
  const PureState psi_w(w.probabilities().cwiseSqrt().cast<Complex>());
  const PureState psi_v(v.probabilities().cwiseSqrt().cast<Complex>());
  const bool c2_ok = c2(psi_v, basis) >= c2(psi_w, basis) - tol;
  const bool crel_ok = c_rel(psi_v, basis) >= c_rel(psi_w, basis) - tol;

  return shannon_ok >= -tol && renyi2_v >= renyi2_w - tol && c2_ok && crel_ok;
}

}  // namespace qchaos
