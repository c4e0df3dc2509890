#pragma once

#include <optional>
#include <vector>

#include "qchaos/rng.hpp"
#include "qchaos/types.hpp"

namespace qchaos {

/// GOE sample with density proportional to exp(-(d/2) Tr H^2): diagonal
/// entries Normal(0, 2/d), off-diagonal Normal(0, 1/d), exactly symmetric.
/// E[Tr H^2] = d + 1.
HermitianOperator sample_goe(int d, RandomStream& rng);

/// GUE sample with the same density: diagonal Normal(0, 1/d), off-diagonal
/// real and imaginary parts Normal(0, 1/(2d)), exactly Hermitian.
/// E[Tr H^2] = d. Semicircle support approaches [-2, 2].
HermitianOperator sample_gue(int d, RandomStream& rng);

/// Haar-distributed unitary via QR of a complex Ginibre matrix with the
/// R-diagonal phase correction.
UnitaryOperator sample_haar_unitary(int d, RandomStream& rng);

/// d independent unit-modulus phases, uniform on the circle.
Vector sample_diagonal_phases(int d, RandomStream& rng);

/// Level-spacing statistics over the central 80% of a spectrum: spacings
/// normalized by their mean, consecutive-gap ratios
/// r_i = min(s_i, s_{i+1}) / max(s_i, s_{i+1}), and a density histogram of
/// the normalized spacings.
struct SpacingStatistics {
  std::vector<double> normalized_spacings;
  std::vector<double> gap_ratios;
  double mean_ratio = 0.0;
  std::vector<double> bin_edges;  // num_bins + 1 edges
  std::vector<double> densities;  // integrates to 1
};

SpacingStatistics spacing_statistics(const RealVector& ascending_levels,
                                     int num_bins = 50);
SpacingStatistics spacing_statistics(const SpectralDecomposition& spec,
                                     int num_bins = 50);

/// Ensemble mean of the per-spectrum mean gap ratio (GOE or GUE).
McEstimate mean_gap_ratio(const EnsembleSpec& ensemble);

/// Same statistic for spectra of i.i.d. uniform levels (Poisson statistics).
McEstimate poisson_mean_gap_ratio(int d, long spectra,
                                  std::uint64_t master_seed);

/// Four-point spectral form factor of a single spectrum at time t, summed
/// over pairwise-distinct index quadruples:
///   sum_{k,l,m,n distinct} exp(-i (lam_k + lam_l - lam_m - lam_n) t),
/// evaluated in closed form from the power sums (O(d) per time).
double sff_r4_spectrum(const RealVector& eigenvalues, double t);

/// Ensemble estimate of the four-point form factor on a time grid.
struct SffEstimate {
  std::vector<double> times;
  std::vector<double> r4_values;
  std::vector<double> standard_errors;
};

SffEstimate sff_r4(const EnsembleSpec& ensemble, const TimeGrid& times);

/// One time point of the CGP-vs-form-factor bound comparison.
struct CgpBoundRow {
  double t = 0.0;
  double lhs_mean = 0.0;        // < cgp(exp(-iHt), B) > over the ensemble
  double lhs_stderr = 0.0;
  double rhs = 0.0;             // 1 - R4(t) / (d(d+1)(d+2)(d+3))
  double rhs_stderr = 0.0;
  double gap = 0.0;             // rhs - lhs_mean
  bool holds = false;           // lhs <= rhs + 3 sigma (combined)
  double diag_discrepancy = 0.0;  // (1/d) sum_{j != k} X_{jk}^2
};

/// Monte-Carlo check of the mean-CGP upper bound for GUE evolution. The
/// same sampled Hamiltonians feed both sides, and the diagonal-vs-full
/// discrepancy column tracks the short-time quality of the bound.
std::vector<CgpBoundRow> gue_cgp_bound_check(const EnsembleSpec& ensemble,
                                             const OrthonormalBasis& b,
                                             const TimeGrid& times);

/// Haar average of the squared commutator for fixed eigenphase lists:
///   2(d-1)/(d+1) + [2/(d^2(d^2-1))] S_v S_w - [2/(d(d+1))] (S_v + S_w),
/// S_v = |sum_j v_j|^2 - d. Vanishes when either phase list is constant.
double haar_avg_otoc_closed_form(const Vector& v_phases,
                                 const Vector& w_phases, int d);

/// Haar average of the coherence-generating power: (d-1)/(d+1).
double haar_avg_cgp(int d);

/// Short-time curvature of cgp(exp(-iHt), B).
struct CurvatureReport {
  double analytic = 0.0;           // (1/d) sum_j var_j(H) in basis B
  double finite_difference = 0.0;  // Richardson-extrapolated cgp(t)/t^2 limit
  std::optional<double> kappa;     // finite_difference / analytic
  double q_bound = 0.0;            // |I - X^T X|_op, X = overlap(B, B_H)
};

/// Computes the analytic variance expression, a Richardson-extrapolated
/// finite-difference curvature over h in {1e-2, 5e-3, 2.5e-3}, their ratio
/// kappa (absent when the analytic value vanishes), and the spectral-norm
/// factor q_bound. Enforces analytic <= (Tr(H^2)/d) q_bound and q_bound in
/// [0, 1].
CurvatureReport short_time_cgp_curvature(const HermitianOperator& h,
                                         const OrthonormalBasis& b);

/// cgp(exp(-i H^(k) t), computational) for the commuting k-local family,
/// via the Walsh-Hadamard transform of the x-basis eigenphases
/// (O(d log d), no dense matrices).
double klocal_cgp(int L, int k, double t);

/// One row of the k-local short-time scan.
struct KlocalScanRow {
  int L = 0;
  int k = 0;
  double trace_h2 = 0.0;            // d (L - k + 1), computed exactly
  double finite_difference = 0.0;   // curvature from the Walsh fast path
  double normalized = 0.0;          // finite_difference / (L - k + 1)^2
};

/// Finite-difference curvature of the k-local family across chain lengths,
/// normalized by the squared operator norm (L - k + 1)^2. Requires
/// k <= min(L_range).
std::vector<KlocalScanRow> klocal_short_time_scan(
    const std::vector<int>& L_range, int k);

}  // namespace qchaos
