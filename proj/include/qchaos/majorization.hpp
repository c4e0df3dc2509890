#pragma once

#include <optional>
#include <vector>

#include "qchaos/types.hpp"

namespace qchaos {

/// Outcome of a majorization comparison. partial_sum_gaps[k] is the
/// difference of the k-th sorted-descending partial sums (w minus v);
/// the comparison holds iff every gap is >= -1e-12 and the totals agree.
struct MajorizationResult {
  bool majorized = false;
  std::optional<Eigen::Index> first_violation_index;
  std::vector<double> partial_sum_gaps;
};

/// Does w majorize v? True iff the sorted-descending partial sums of w
/// dominate those of v at every prefix.
MajorizationResult majorizes(const ProbabilityVector& w,
                             const ProbabilityVector& v);

/// Fraction of energy-paired eigenstates whose dephased chaotic
/// distribution is majorized by the dephased integrable one, over the
/// central `window` fraction of the spectrum (by index count, rounded
/// outward). Pairing is strictly by energy-sorted index.
double eigenstate_majorization_fraction(const HermitianOperator& h_integrable,
                                        const HermitianOperator& h_chaotic,
                                        const OrthonormalBasis& b,
                                        double window);

/// Variant reusing existing decompositions.
double eigenstate_majorization_fraction(const SpectralDecomposition& integrable,
                                        const SpectralDecomposition& chaotic,
                                        const OrthonormalBasis& b,
                                        double window);

/// Given a majorizing pair (w majorizes v), verifies the Schur-concavity
/// consequences: Shannon and Renyi-2 entropies of v dominate those of w,
/// and the 2- and relative-entropy coherences of the corresponding pure
/// states (amplitudes sqrt(p_j)) order the same way. Throws if the
/// precondition fails.
bool schur_concavity_check(const ProbabilityVector& w,
                           const ProbabilityVector& v);

}  // namespace qchaos
