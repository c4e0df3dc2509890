#include <doctest.h>

#include <cmath>

#include "helpers.hpp"
#include "qchaos/coherence.hpp"
#include "qchaos/linalg.hpp"
#include "qchaos/models.hpp"

using namespace qchaos;

namespace {

RealVector populations(const PureState& psi, const OrthonormalBasis& b) {
  return (b.matrix().adjoint() * psi.amplitudes()).cwiseAbs2();
}

}  // namespace

TEST_CASE("pure-state 2-coherence is one minus the purity of populations") {
  for (int d : {2, 5, 9}) {
    const PureState psi = test_util::random_state(d, 300 + d);
    const OrthonormalBasis b = test_util::random_basis(d, 400 + d);
    const RealVector p = populations(psi, b);
    CHECK(c2(psi, b) == doctest::Approx(1.0 - p.squaredNorm()).epsilon(1e-12));
    // Density-matrix route agrees with the pure-state shortcut.
    CHECK(c2(DensityMatrix::from_pure(psi), b) ==
          doctest::Approx(c2(psi, b)).epsilon(1e-10));
  }
}

TEST_CASE("participation and 2-coherence sum to one for pure states") {
  for (int d : {2, 7, 16}) {
    const PureState psi = test_util::random_state(d, 500 + d);
    const OrthonormalBasis b = test_util::random_basis(d, 600 + d);
    CHECK(std::abs(pr2(psi, b) + c2(psi, b) - 1.0) <= 1e-12);
    CHECK(participation_count(psi, b) ==
          doctest::Approx(1.0 / pr2(psi, b)).epsilon(1e-12));
  }
}

TEST_CASE("relative entropy of coherence of a pure state is the population "
          "entropy") {
  const PureState psi = test_util::random_state(6, 17);
  const OrthonormalBasis b = test_util::random_basis(6, 18);
  const RealVector p = populations(psi, b);
  double shannon = 0.0;
  for (int j = 0; j < 6; ++j)
    if (p[j] > 0.0) shannon -= p[j] * std::log(p[j]);
  CHECK(c_rel(psi, b) == doctest::Approx(shannon).epsilon(1e-9));
  // A basis state has no coherence in its own basis.
  Vector e0 = Vector::Zero(6);
  e0[0] = 1.0;
  CHECK(c_rel(PureState(e0), OrthonormalBasis::computational(6)) ==
        doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("l1 coherence of the uniform superposition is d - 1") {
  for (int d : {2, 4, 8}) {
    Vector u = Vector::Constant(d, Complex(1.0 / std::sqrt(double(d)), 0));
    CHECK(c_l1(PureState(u), OrthonormalBasis::computational(d)) ==
          doctest::Approx(double(d - 1)).epsilon(1e-12));
  }
}

TEST_CASE("loschmidt echo starts at one and matches the amplitude formula") {
  const HermitianOperator h = test_util::random_hermitian(5, 77);
  const SpectralDecomposition spec = eigh(h);
  const PureState psi = test_util::random_state(5, 78);
  CHECK(loschmidt_echo(psi, spec, 0.0) == doctest::Approx(1.0).epsilon(1e-12));
  const double t = 1.3;
  const Complex amp =
      (psi.amplitudes().adjoint() * evolve(spec, t).matrix() * psi.amplitudes())(0);
  CHECK(loschmidt_echo(psi, spec, t) ==
        doctest::Approx(std::norm(amp)).epsilon(1e-10));
}

TEST_CASE("effective dimension interpolates between pure and maximally mixed") {
  const int d = 6;
  CHECK(effective_dimension(DensityMatrix::from_pure(
            test_util::random_state(d, 12))) == doctest::Approx(1.0));
  CHECK(effective_dimension(DensityMatrix::validated(
            Matrix::Identity(d, d) / double(d))) == doctest::Approx(double(d)));
}

TEST_CASE("escape probability equals eigenbasis 2-coherence") {
  const HermitianOperator h = test_util::random_hermitian(7, 90);
  const SpectralDecomposition spec = eigh(h);
  const PureState psi = test_util::random_state(7, 91);
  const EscapeProbability esc = escape_probability(psi, spec);
  CHECK(std::abs(esc.value - c2(psi, spec.basis())) <= 1e-12);
  CHECK(!esc.degenerate_spectrum);
  CHECK(esc.min_gap == doctest::Approx(spec.min_gap()));

  const EscapeProbability flat = escape_probability(
      psi, eigh(HermitianOperator(Matrix::Identity(7, 7))));
  CHECK(flat.degenerate_spectrum);
}

TEST_CASE("finite-time average of a linear ramp") {
  const double avg =
      finite_time_average([](double t) { return 3.0 * t; }, 2.0, 1e-3);
  CHECK(avg == doctest::Approx(3.0).epsilon(1e-8));
}

TEST_CASE("chaotic eigenstate coherence references") {
  CHECK(goe_crel_prediction(100, LogBase::nats) ==
        doctest::Approx(std::log(48.0)).epsilon(1e-12));
  CHECK(goe_crel_prediction(100, LogBase::bits) ==
        doctest::Approx(std::log2(48.0)).epsilon(1e-12));
  CHECK(goe_c2_analytic(3003) == doctest::Approx(1.0 - 3.0 / 3005.0));
  // Monte-Carlo estimate agrees with 1 - 3/(d+2) within three sigma.
  const int d = 24;
  const McEstimate mc = goe_c2_prediction(d, 4000, 999);
  CHECK(std::abs(mc.mean - goe_c2_analytic(d)) <= 3.0 * mc.standard_error);
  CHECK(mc.samples == 4000);
}

TEST_CASE("minimal product-basis coherence equals the reduced linear entropy") {
  for (int s = 0; s < 5; ++s) {
    const PureState psi = test_util::random_state(4, 700 + s);
    const DensityMatrix ra =
        partial_trace(DensityMatrix::from_pure(psi), {2, 2}, Subsystem::A);
    const double purity = (ra.matrix() * ra.matrix()).trace().real();
    CHECK(std::abs(min_product_basis_c2(psi, {2, 2}) - (1.0 - purity)) <=
          1e-10);
  }
}

TEST_CASE("eigenstate scan reports normalized measures per eigenstate") {
  XxzDefectParams p;
  p.L = 6;
  p.n_up = 2;
  p.delta = 3;
  const SpectralDecomposition spec = eigh(build_xxz_defect(p));
  const OrthonormalBasis site = OrthonormalBasis::computational(spec.dim());
  const std::vector<CoherenceReport> rows = eigenstate_coherence_scan(spec, site);
  REQUIRE(rows.size() == 15);
  const double c2_ref = goe_c2_analytic(15);
  const double crel_ref = goe_crel_prediction(15, LogBase::nats);
  for (std::size_t j = 0; j < rows.size(); ++j) {
    CHECK(rows[j].index == int(j));
    CHECK(rows[j].energy == doctest::Approx(spec.eigenvalues[j]));
    const PureState psi(spec.eigenvectors.matrix().col(j));
    CHECK(rows[j].c2 == doctest::Approx(c2(psi, site)).epsilon(1e-10));
    CHECK(rows[j].c_rel == doctest::Approx(c_rel(psi, site)).epsilon(1e-9));
    CHECK(rows[j].pr2 == doctest::Approx(pr2(psi, site)).epsilon(1e-10));
    CHECK(rows[j].normalized_c2 ==
          doctest::Approx(rows[j].c2 / c2_ref).epsilon(1e-12));
    CHECK(rows[j].normalized_c_rel ==
          doctest::Approx(rows[j].c_rel / crel_ref).epsilon(1e-12));
  }
  // The Hamiltonian-operator overload matches the decomposition overload.
  const std::vector<CoherenceReport> again =
      eigenstate_coherence_scan(build_xxz_defect(p), site);
  REQUIRE(again.size() == rows.size());
  CHECK(again[3].c2 == doctest::Approx(rows[3].c2).epsilon(1e-12));
}
