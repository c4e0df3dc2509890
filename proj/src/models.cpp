#include "qchaos/models.hpp"

#include <algorithm>
#include <bit>

#include "qchaos/linalg.hpp"

namespace qchaos {

namespace {

void check_xxz_params(const XxzDefectParams& p) {
  if (p.L < 1 || p.L > 24)
    throw CapacityError("xxz: L = " + std::to_string(p.L) +
                        " outside the dense range 1..24");
  if (p.n_up < 0 || p.n_up > p.L)
    throw ValidationError("xxz: n_up = " + std::to_string(p.n_up) +
                          " outside 0.." + std::to_string(p.L));
  if (p.delta < 1 || p.delta > p.L)
    throw ValidationError("xxz: defect site out of range (delta = " +
                          std::to_string(p.delta) + ", L = " +
                          std::to_string(p.L) + ")");
}

}  // namespace

Eigen::Index SpinSector::index_of(std::uint32_t state) const {
  const auto it = std::lower_bound(states.begin(), states.end(), state);
  if (it == states.end() || *it != state)
    throw ValidationError("SpinSector: state " + std::to_string(state) +
                          " not in the (L=" + std::to_string(L) + ", n_up=" +
                          std::to_string(n_up) + ") sector");
  return static_cast<Eigen::Index>(it - states.begin());
}

SpinSector sector_basis(int L, int n_up) {
  if (L < 0 || L > 24)
    throw CapacityError("sector_basis: L = " + std::to_string(L) +
                        " outside the dense range 0..24");
  if (n_up < 0 || n_up > L)
    throw ValidationError("sector_basis: n_up = " + std::to_string(n_up) +
                          " outside 0.." + std::to_string(L));
  SpinSector sector{L, n_up, {}};
  const std::uint32_t limit = 1u << L;
  for (std::uint32_t s = 0; s < limit; ++s)
    if (std::popcount(s) == n_up) sector.states.push_back(s);
  return sector;
}

HermitianOperator build_xxz_defect(const XxzDefectParams& p) {
  check_xxz_params(p);
  const SpinSector sector = sector_basis(p.L, p.n_up);
  const Eigen::Index d = sector.dim();
  if (d < 2)
    throw ValidationError("xxz: sector dimension " + std::to_string(d) +
                          " < 2");
  RealMatrix h = RealMatrix::Zero(d, d);
  for (Eigen::Index a = 0; a < d; ++a) {
    const std::uint32_t s = sector.states[a];
    double diag = 0.0;
    for (int j = 1; j < p.L; ++j) {
      const int zj = sector.spin_at(s, j);
      const int zj1 = sector.spin_at(s, j + 1);
      diag += 0.25 * p.j_z * zj * zj1;
      if (zj != zj1) {
        // flip-flop term: 1/4 * J_xy * (XX + YY) moves one excitation
        const std::uint32_t flipped =
            s ^ ((1u << (p.L - j)) | (1u << (p.L - j - 1)));
        const Eigen::Index b = sector.index_of(flipped);
        h(a, b) += 0.5 * p.j_xy;
      }
    }
    for (int j = 1; j <= p.L; ++j)
      diag += 0.5 * p.omega * sector.spin_at(s, j);
    diag += 0.5 * p.epsilon_delta * sector.spin_at(s, p.delta);
    h(a, a) = diag;
  }
  return HermitianOperator(h.cast<Complex>());
}

MeanFieldBasis mean_field_basis(const XxzDefectParams& p) {
  XxzDefectParams mf = p;
  mf.j_z = 0.0;
  const SpectralDecomposition spec = eigh(build_xxz_defect(mf));
  const double gap = spec.min_gap();
  return MeanFieldBasis{OrthonormalBasis(spec.eigenvectors), gap,
                        gap < tol::degeneracy_gap};
}

HermitianOperator build_tfim(const TfimParams& p) {
  if (p.L < 2 || p.L > 14)
    throw CapacityError("tfim: L = " + std::to_string(p.L) +
                        " outside the dense range 2..14");
  const Eigen::Index d = Eigen::Index(1) << p.L;
  RealMatrix h = RealMatrix::Zero(d, d);
  for (Eigen::Index s = 0; s < d; ++s) {
    double diag = 0.0;
    for (int j = 1; j <= p.L; ++j) {
      const int zj = ((s >> (p.L - j)) & 1) ? +1 : -1;
      if (j < p.L) {
        const int zj1 = ((s >> (p.L - j - 1)) & 1) ? +1 : -1;
        diag -= static_cast<double>(zj * zj1);
      }
      diag -= p.h * zj;
      h(s ^ (Eigen::Index(1) << (p.L - j)), s) -= p.g;  // X_j flips site j
    }
    h(s, s) = diag;
  }
  return HermitianOperator(h.cast<Complex>());
}

HermitianOperator build_k_local_commuting(int L, int k) {
  if (L < 1 || L > 14)
    throw CapacityError("k_local: L = " + std::to_string(L) +
                        " outside the dense range 1..14");
  if (k < 1 || k > L)
    throw ValidationError("k_local: k = " + std::to_string(k) +
                          " outside 1.." + std::to_string(L));
  const Eigen::Index d = Eigen::Index(1) << L;
  RealMatrix h = RealMatrix::Zero(d, d);
  for (int j = 1; j + k - 1 <= L; ++j) {
    // window of k adjacent sites starting at j
    Eigen::Index mask = 0;
    for (int site = j; site < j + k; ++site)
      mask |= Eigen::Index(1) << (L - site);
    for (Eigen::Index s = 0; s < d; ++s) h(s ^ mask, s) += 1.0;
  }
  return HermitianOperator(h.cast<Complex>());
}

RealVector sigma_z_site_diagonal(int L, int site) {
  if (site < 1 || site > L)
    throw ValidationError("sigma_z_site_diagonal: site " +
                          std::to_string(site) + " outside 1.." +
                          std::to_string(L));
  const Eigen::Index d = Eigen::Index(1) << L;
  RealVector z(d);
  for (Eigen::Index s = 0; s < d; ++s)
    z[s] = ((s >> (L - site)) & 1) ? +1.0 : -1.0;
  return z;
}

}  // namespace qchaos
