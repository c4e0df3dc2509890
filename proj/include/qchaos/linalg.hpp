#pragma once

#include <utility>

#include "qchaos/types.hpp"

namespace qchaos {

/// Which half of a bipartition to keep in a partial trace.
enum class Subsystem { A, B };

/// Dense Hermitian eigensolve with deterministic conventions:
///  * eigenvalues ascending,
///  * each eigenvector's largest-magnitude component made real positive,
///  * (near-)degenerate groups ordered by a fixed lexicographic tie-break,
///  * reconstruction residual |V L V^dag - H|_max <= 1e-10 * d * |H|_max.
/// Real symmetric input is detected and routed to the faster real solver.
SpectralDecomposition eigh(const HermitianOperator& h);

/// Ascending eigenvalues without eigenvectors; much cheaper than eigh when
/// only the spectrum is needed (level statistics, form factors).
RealVector eigvalsh(const HermitianOperator& h);

/// Time evolution U_t = V exp(-i Lambda t) V^dag from a spectral
/// decomposition. Unitary within 1e-10 by construction.
UnitaryOperator evolve(const SpectralDecomposition& spec, double t);

/// Dephasing in basis B: keeps the diagonal of rho in B, removing all
/// off-diagonal content. Trace preserving, positive, idempotent.
DensityMatrix dephase(const DensityMatrix& rho, const OrthonormalBasis& b);

/// Partial trace over one half of a (d_a, d_b) bipartition. The composite
/// index convention is |a,b> -> a * d_b + b (Kronecker ordering).
DensityMatrix partial_trace(const DensityMatrix& rho,
                            std::pair<Eigen::Index, Eigen::Index> dims,
                            Subsystem keep);

/// Squared Schmidt coefficients of a bipartite pure state: the descending
/// eigenvalues of the reduced state on subsystem A, summing to one. The
/// output has length d_a (padded with zeros when d_a > d_b).
ProbabilityVector schmidt_squared(const PureState& psi,
                                  std::pair<Eigen::Index, Eigen::Index> dims);

/// Overlap matrix X_{jk} = |<j|k'>|^2 between two bases. Bistochastic.
BistochasticMatrix overlap_matrix(const OrthonormalBasis& b1,
                                  const OrthonormalBasis& b2);

namespace detail {
/// Coordinates of a set of column vectors in basis B, exploiting realness
/// of both factors where possible. Columns of the result are B^dag * cols.
Matrix basis_coordinates(const OrthonormalBasis& b, const Matrix& cols);
}  // namespace detail

}  // namespace qchaos
