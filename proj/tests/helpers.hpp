#pragma once

#include <cstdint>

#include "qchaos/rmt.hpp"
#include "qchaos/rng.hpp"
#include "qchaos/types.hpp"

namespace test_util {

inline qchaos::PureState random_state(int d, std::uint64_t seed) {
  qchaos::RandomStream rng(seed);
  qchaos::Vector v(d);
  for (int i = 0; i < d; ++i)
    v[i] = qchaos::Complex(rng.gaussian(), rng.gaussian());
  v /= v.norm();
  return qchaos::PureState(v);
}

inline qchaos::UnitaryOperator random_unitary(int d, std::uint64_t seed) {
  qchaos::RandomStream rng(seed);
  return qchaos::sample_haar_unitary(d, rng);
}

inline qchaos::OrthonormalBasis random_basis(int d, std::uint64_t seed) {
  return qchaos::OrthonormalBasis(random_unitary(d, seed));
}

inline qchaos::HermitianOperator random_hermitian(int d, std::uint64_t seed) {
  qchaos::RandomStream rng(seed);
  return qchaos::sample_gue(d, rng);
}

}  // namespace test_util
