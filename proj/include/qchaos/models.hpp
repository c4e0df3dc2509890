#pragma once

#include <cstdint>
#include <vector>

#include "qchaos/types.hpp"

namespace qchaos {

/// XXZ chain with a single onsite defect, restricted to a fixed
/// magnetization sector. Sites are numbered 1..L.
struct XxzDefectParams {
  int L = 2;
  int n_up = 1;
  int delta = 1;              // defect site
  double omega = 0.0;         // uniform splitting
  double epsilon_delta = 0.5; // defect splitting
  double j_xy = 1.0;
  double j_z = 0.5;
};

/// Transverse-field Ising chain on the full 2^L space.
struct TfimParams {
  int L = 2;
  double g = 1.0;  // transverse field
  double h = 0.0;  // longitudinal field
};

/// Fixed-magnetization sector: every L-bit label with n_up set bits, in
/// ascending integer order. Bit value 1 means sigma_z = +1; site 1 is the
/// most significant bit.
struct SpinSector {
  int L = 0;
  int n_up = 0;
  std::vector<std::uint32_t> states;

  Eigen::Index dim() const { return static_cast<Eigen::Index>(states.size()); }

  /// Sector index of a basis label (binary search; label must be present).
  Eigen::Index index_of(std::uint32_t state) const;

  /// sigma_z eigenvalue (+1/-1) of `site` (1-based) in `state`.
  int spin_at(std::uint32_t state, int site) const {
    return ((state >> (L - site)) & 1u) ? +1 : -1;
  }
};

/// Enumerates the fixed-magnetization sector. Requires 0 <= n_up <= L <= 24.
SpinSector sector_basis(int L, int n_up);

/// XXZ-with-defect Hamiltonian in the (L, n_up) sector basis:
///   H = 1/4 sum_{j<L} [J_xy (XX + YY) + J_z ZZ]
///       + 1/2 [omega sum_j Z_j + epsilon_delta Z_delta],
/// open boundaries. Real symmetric.
HermitianOperator build_xxz_defect(const XxzDefectParams& p);

/// Eigenbasis of the model with J_z switched off, all other parameters
/// unchanged. Near-degenerate gaps (< 1e-10) are flagged because the basis
/// then depends on the eigensolver's deterministic tie-break.
struct MeanFieldBasis {
  OrthonormalBasis basis;
  double min_gap = 0.0;
  bool near_degenerate = false;
};
MeanFieldBasis mean_field_basis(const XxzDefectParams& p);

/// Transverse-field Ising Hamiltonian on the full 2^L space:
///   H = -( sum_{j<L} Z_j Z_{j+1} + g sum_j X_j + h sum_j Z_j ),
/// open boundaries. Requires 2 <= L <= 14.
HermitianOperator build_tfim(const TfimParams& p);

/// Commuting k-local family H^(k) = sum_{j=1}^{L-k+1} X^{(x k)} on sites
/// j..j+k-1, on the full 2^L space. Requires 1 <= k <= L <= 14.
HermitianOperator build_k_local_commuting(int L, int k);

/// Diagonal of sigma_z acting on `site` (1-based) in the full 2^L space.
RealVector sigma_z_site_diagonal(int L, int site);

}  // namespace qchaos
