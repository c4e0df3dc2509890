#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "qchaos/models.hpp"
#include "qchaos/types.hpp"

namespace qchaos {

/// Infinite-temperature squared commutator
///   C_{V,W}(t) = (1/d) Tr([V, W(t)]^dag [V, W(t)]),  W(t) = U_t^dag W U_t.
/// Nonnegative; bounded by 4 for unitary V, W.
double squared_commutator(const Matrix& v, const Matrix& w,
                          const UnitaryOperator& u_t);
double squared_commutator(const UnitaryOperator& v, const UnitaryOperator& w,
                          const UnitaryOperator& u_t);
double squared_commutator(const HermitianOperator& v,
                          const HermitianOperator& w,
                          const UnitaryOperator& u_t);

/// Four-point function F(t) = (1/d) Tr(W(t)^dag V^dag W(t) V) for unitary
/// V, W. Satisfies C = 2 (1 - Re F).
Complex otoc_F(const UnitaryOperator& v, const UnitaryOperator& w,
               const UnitaryOperator& u_t);

/// Coherence-generating power of U with respect to basis B:
///   cgp(U, B) = 1 - (1/d) Tr(X^T X),  X_{jk} = Tr(Pi_j U Pi_k U^dag).
/// Lies in [0, 1 - 1/d].
double cgp(const UnitaryOperator& u, const OrthonormalBasis& b);

/// Same quantity evaluated through the commutator identity
///   (1/2d) sum_{jk} |[Pi_j, U Pi_k U^dag]|_2^2,
/// materializing every commutator. Serves as an independent check of cgp;
/// cost grows like d^4, intended for small dimensions.
double cgp_commutator_form(const UnitaryOperator& u, const OrthonormalBasis& b);

/// Unitary mapping basis B_V onto B_W column by column.
UnitaryOperator intertwiner(const OrthonormalBasis& b_v,
                            const OrthonormalBasis& b_w);

/// Nondegenerate unitary presented by its eigenbasis and unit-modulus
/// eigenphases.
class UnitaryEigensystem {
 public:
  UnitaryEigensystem(OrthonormalBasis basis, Vector eigenphases);

  const OrthonormalBasis& basis() const { return basis_; }
  const Vector& eigenphases() const { return phases_; }
  Eigen::Index dim() const { return basis_.dim(); }

  /// Reassembled operator B diag(phases) B^dag.
  UnitaryOperator unitary() const;

  /// Convenience: operator diagonal in the computational basis.
  static UnitaryEigensystem diagonal(const Vector& phases);

 private:
  OrthonormalBasis basis_;
  Vector phases_;
};

/// Split of the squared commutator into its coherence-generating part and
/// the phase-sensitive off-diagonal remainder. total is computed through
/// the commutator route, the parts through the spectral route; residual
/// records total - (cgp_part + offdiag_part) and must stay below 1e-10.
struct OtocDecomposition {
  double total = 0.0;
  double cgp_part = 0.0;
  double offdiag_part = 0.0;
  double residual = 0.0;
};

OtocDecomposition otoc_cgp_decomposition(const UnitaryEigensystem& v,
                                         const UnitaryEigensystem& w,
                                         const UnitaryOperator& u_t);

/// Sum of projector squared commutators sum_alpha C_{Pi_alpha, Pi_beta}(t).
/// With beta given, sums over alpha only; with beta = nullopt, sums over
/// both indices. Materializes the commutators (verification oracle).
double projection_otoc_sum(const OrthonormalBasis& b_v,
                           const OrthonormalBasis& b_w,
                           const UnitaryOperator& u_t,
                           std::optional<Eigen::Index> beta);

/// Squared-commutator norm |[V, W(t)]|_2^2 averaged over V, W diagonal in
/// their bases with i.i.d. uniform phases. Without a sampler the exact
/// value 2 d cgp(U_t^dag 𝒱, B_V) is returned; with one, a Monte-Carlo
/// estimate with standard error.
McEstimate phase_averaged_otoc(const OrthonormalBasis& b_v,
                               const OrthonormalBasis& b_w,
                               const UnitaryOperator& u_t,
                               const std::optional<EnsembleSpec>& sampler);

/// Squared Grassmannian distance between the maximal abelian subalgebras
/// of two bases: D^2 = 2 (d - Tr(X^T X)).
double grassmannian_distance_sq(const OrthonormalBasis& b1,
                                const OrthonormalBasis& b2);

/// Haar average of |[D_B(V), rho]|_2^2 over Haar V, where D_B takes the
/// diagonal part in B. Exact value (2/d) c2(rho, B).
McEstimate haar_state_commutator_avg(const DensityMatrix& rho,
                                     const OrthonormalBasis& b,
                                     const std::optional<EnsembleSpec>& sampler);

/// Sampling family for the MASA commutator average.
enum class OneDesign { haar, pauli };

/// Haar average of |[D_B1(V), D_B2(W)]|_2^2 over independent V, W. Exact
/// value (1/d^2) D^2(B1, B2). The pauli variant draws V, W uniformly from
/// tensor products of single-qubit Paulis (requires d = 2^n), a 1-design
/// with the same mean.
McEstimate haar_masa_commutator_avg(const OrthonormalBasis& b1,
                                    const OrthonormalBasis& b2,
                                    const std::optional<EnsembleSpec>& sampler,
                                    OneDesign design = OneDesign::haar);

/// Population variance of the series values with t inside [t_min, t_max].
double temporal_variance(const TimeSeries& series, double t_min, double t_max);

/// Joint OTOC / CGP-part / off-diagonal-part time series for one evolution,
/// computed via the spectral decomposition of H (one pass per time point).
struct OtocCgpSeries {
  std::vector<double> times;
  std::vector<double> total;
  std::vector<double> cgp_part;
  std::vector<double> offdiag_part;
};

OtocCgpSeries otoc_cgp_series(const UnitaryEigensystem& v,
                              const UnitaryEigensystem& w,
                              const SpectralDecomposition& spec,
                              const std::vector<double>& times);

enum class ScrambleObservable { otoc, cgp };

/// One row of the integrable-vs-chaotic temporal variance comparison.
struct VarianceScanRow {
  int n = 0;
  double var_integrable = 0.0;
  double var_chaotic = 0.0;
  double ratio = 0.0;  // (var_int - var_chaos) / var_int
};

/// Compares temporal variances of the chosen observable between an
/// integrable and a chaotic Ising chain across sizes n_range, with
/// V = sigma_z on site v_site and W = sigma_z on site w_site (w_site = -1
/// selects the last site of each chain). The L field of the parameter
/// templates is overridden per row.
std::vector<VarianceScanRow> variance_ratio_scan(
    const TfimParams& integrable, const TfimParams& chaotic,
    ScrambleObservable observable, std::pair<int, int> sites,
    const std::vector<int>& n_range, const TimeGrid& grid,
    std::pair<double, double> window);

}  // namespace qchaos
