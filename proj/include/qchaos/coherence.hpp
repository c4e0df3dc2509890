#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "qchaos/types.hpp"

namespace qchaos {

/// 2-coherence: squared l2 distance between rho and its dephasing in B,
/// i.e. the total squared off-diagonal weight. For pure states this equals
/// 1 - sum_j p_j^2.
double c2(const DensityMatrix& rho, const OrthonormalBasis& b);
double c2(const PureState& psi, const OrthonormalBasis& b);

/// Relative entropy of coherence S(D_B(rho)) - S(rho) in nats (0 ln 0 := 0).
double c_rel(const DensityMatrix& rho, const OrthonormalBasis& b);
double c_rel(const PureState& psi, const OrthonormalBasis& b);

/// l1 coherence: sum of absolute values of off-diagonal entries in B.
double c_l1(const DensityMatrix& rho, const OrthonormalBasis& b);
double c_l1(const PureState& psi, const OrthonormalBasis& b);

/// Participation ratio sum_j p_j^4-style second moment: sum_j |<j|psi>|^4.
double pr2(const PureState& psi, const OrthonormalBasis& b);

/// Reciprocal of pr2, the effective number of occupied basis states.
double participation_count(const PureState& psi, const OrthonormalBasis& b);

/// Return probability |<psi| exp(-iHt) |psi>|^2.
double loschmidt_echo(const PureState& psi, const SpectralDecomposition& spec,
                      double t);

/// Inverse purity 1 / Tr(rho^2), in [1, d].
double effective_dimension(const DensityMatrix& rho);

/// 2-coherence in the Hamiltonian eigenbasis, a.k.a. the escape
/// probability. Degenerate spectra (min gap <= 1e-10) are flagged since the
/// eigenbasis, and hence the value, then depends on the tie-break.
struct EscapeProbability {
  double value = 0.0;
  double min_gap = 0.0;
  bool degenerate_spectrum = false;
};
EscapeProbability escape_probability(const PureState& psi,
                                     const SpectralDecomposition& spec);

/// Trapezoidal average of f over [0, T] on a uniform grid of spacing ~dt
/// (the grid is stretched slightly so it lands exactly on T).
double finite_time_average(const std::function<double(double)>& f, double T,
                           double dt);

enum class LogBase { nats, bits };

/// Ensemble-averaged relative entropy of coherence of GOE eigenstates,
/// ln(0.48 d), in the requested base.
double goe_crel_prediction(int d, LogBase base);

/// Mean 2-coherence of random real unit vectors (the GOE eigenvector
/// ensemble), estimated by Monte Carlo. The analytic value is 1 - 3/(d+2).
McEstimate goe_c2_prediction(int d, long samples, std::uint64_t seed);
double goe_c2_analytic(int d);

/// Minimum 2-coherence over all product bases of a bipartite pure state.
/// Equals the linear entropy of the reduced state, 1 - sum_j lambda_j^4 in
/// terms of Schmidt coefficients.
double min_product_basis_c2(const PureState& psi,
                            std::pair<Eigen::Index, Eigen::Index> dims);

/// Per-eigenstate coherence measures, ordered by energy.
struct CoherenceReport {
  int index = 0;
  double energy = 0.0;
  double c2 = 0.0;
  double c_rel = 0.0;  // nats
  double c_l1 = 0.0;
  double pr2 = 0.0;
  double normalized_c2 = 0.0;
  double normalized_c_rel = 0.0;
};

struct MeasureSet {
  bool c2 = true;
  bool c_rel = true;
  bool c_l1 = true;
  bool pr2 = true;
};

/// Coherence of every eigenstate of H in basis B. Normalized columns divide
/// by the GOE predictions at the same dimension (c_rel in nats; the ratio is
/// base-invariant).
std::vector<CoherenceReport> eigenstate_coherence_scan(
    const HermitianOperator& h, const OrthonormalBasis& b,
    const MeasureSet& measures = {});

/// Scan variant reusing an existing decomposition of H.
std::vector<CoherenceReport> eigenstate_coherence_scan(
    const SpectralDecomposition& spec, const OrthonormalBasis& b,
    const MeasureSet& measures = {});

}  // namespace qchaos
