#include <doctest.h>

#include <cmath>
#include <vector>

#include "helpers.hpp"
#include "qchaos/errors.hpp"
#include "qchaos/linalg.hpp"
#include "qchaos/models.hpp"

using namespace qchaos;

TEST_CASE("two-site defect chain in the one-magnon sector") {
  XxzDefectParams p;
  p.L = 2;
  p.n_up = 1;
  p.delta = 1;
  const Matrix h = build_xxz_defect(p).matrix();
  REQUIRE(h.rows() == 2);
  // Basis states ascending: |01>, |10>. Defect on site 1, epsilon = 0.5,
  // J_xy = 1, J_z = 0.5.
  CHECK(std::abs(h(0, 0) - Complex(-0.375, 0)) < 1e-15);
  CHECK(std::abs(h(1, 1) - Complex(0.125, 0)) < 1e-15);
  CHECK(std::abs(h(0, 1) - Complex(0.5, 0)) < 1e-15);
  CHECK(std::abs(h(1, 0) - Complex(0.5, 0)) < 1e-15);
}

TEST_CASE("magnetization sector enumeration") {
  const SpinSector s = sector_basis(4, 2);
  CHECK(s.dim() == 6);
  const std::vector<std::uint32_t> expect{3, 5, 6, 9, 10, 12};
  for (int i = 0; i < 6; ++i) CHECK(s.states[i] == expect[i]);
  for (int i = 0; i < 6; ++i) CHECK(s.index_of(s.states[i]) == i);

  CHECK(sector_basis(12, 4).dim() == 495);
  CHECK(sector_basis(15, 5).dim() == 3003);
  CHECK_THROWS_AS(sector_basis(4, 5), ValidationError);
}

TEST_CASE("site spins read MSB first") {
  const SpinSector s = sector_basis(2, 1);
  // states ascending: 1 (= |01>), 2 (= |10>)
  CHECK(s.spin_at(1, 1) == -1);
  CHECK(s.spin_at(1, 2) == +1);
  CHECK(s.spin_at(2, 1) == +1);
  CHECK(s.spin_at(2, 2) == -1);
}

TEST_CASE("uniform field only shifts the sector spectrum") {
  XxzDefectParams p;
  p.L = 6;
  p.n_up = 2;
  p.delta = 3;
  const RealVector base = eigvalsh(build_xxz_defect(p));
  p.omega = 2.0;
  const RealVector shifted = eigvalsh(build_xxz_defect(p));
  // Total S_z is constant in the sector: n_up - L/2 = -1.
  const RealVector diff = shifted - base;
  CHECK(std::abs(diff[0] - (-2.0)) < 1e-12);
  CHECK((diff.array() - diff[0]).abs().maxCoeff() < 1e-12);
}

TEST_CASE("moving the defect changes the spectrum") {
  XxzDefectParams p;
  p.L = 8;
  p.n_up = 2;
  p.delta = 1;
  const RealVector edge = eigvalsh(build_xxz_defect(p));
  p.delta = 4;
  const RealVector bulk = eigvalsh(build_xxz_defect(p));
  CHECK((edge - bulk).cwiseAbs().maxCoeff() > 1e-3);
}

TEST_CASE("transverse-field Ising couplings at two sites") {
  TfimParams p;
  p.L = 2;
  p.g = 1.0;
  p.h = 0.0;
  const Matrix h = build_tfim(p).matrix();
  Matrix expect(4, 4);
  expect << -1, -1, -1, 0,
            -1,  1,  0, -1,
            -1,  0,  1, -1,
             0, -1, -1, -1;
  CHECK((h - expect).cwiseAbs().maxCoeff() < 1e-15);

  p.h = 0.5;
  const Matrix hz = build_tfim(p).matrix();
  CHECK(std::abs(hz(0, 0) - Complex(0, 0)) < 1e-15);    // -1 + 0.5*2
  CHECK(std::abs(hz(3, 3) - Complex(-2, 0)) < 1e-15);   // -1 - 0.5*2
}

TEST_CASE("flip-string family is commuting and matches its x-basis phases") {
  const int L = 4, k = 2;
  const Matrix h = build_k_local_commuting(L, k).matrix();
  // Rebuild the three window terms and check pairwise commutation.
  std::vector<Matrix> terms;
  const Eigen::Index d = 1 << L;
  for (int j = 1; j + k - 1 <= L; ++j) {
    Eigen::Index mask = 0;
    for (int site = j; site < j + k; ++site)
      mask |= Eigen::Index(1) << (L - site);
    Matrix t = Matrix::Zero(d, d);
    for (Eigen::Index s = 0; s < d; ++s) t(s ^ mask, s) = 1.0;
    terms.push_back(t);
  }
  Matrix sum = Matrix::Zero(d, d);
  for (const Matrix& t : terms) sum += t;
  CHECK((sum - h).cwiseAbs().maxCoeff() == 0.0);
  for (std::size_t a = 0; a < terms.size(); ++a)
    for (std::size_t b = a + 1; b < terms.size(); ++b)
      CHECK((terms[a] * terms[b] - terms[b] * terms[a]).cwiseAbs().maxCoeff() ==
            0.0);
  CHECK_THROWS_AS(build_k_local_commuting(15, 2), CapacityError);
}

TEST_CASE("sigma_z diagonal uses site 1 as the most significant bit") {
  const RealVector z1 = sigma_z_site_diagonal(2, 1);
  const RealVector z2 = sigma_z_site_diagonal(2, 2);
  RealVector e1(4), e2(4);
  e1 << -1, -1, 1, 1;
  e2 << -1, 1, -1, 1;
  CHECK((z1 - e1).cwiseAbs().maxCoeff() == 0.0);
  CHECK((z2 - e2).cwiseAbs().maxCoeff() == 0.0);
  CHECK_THROWS_AS(sigma_z_site_diagonal(4, 5), ValidationError);
}

TEST_CASE("mean-field basis is the defect XX eigenbasis") {
  XxzDefectParams p;
  p.L = 6;
  p.n_up = 2;
  p.delta = 3;
  const MeanFieldBasis mf = mean_field_basis(p);
  CHECK(mf.basis.dim() == 15);
  XxzDefectParams xx = p;
  xx.j_z = 0.0;
  const SpectralDecomposition spec = eigh(build_xxz_defect(xx));
  CHECK((mf.basis.matrix() - spec.eigenvectors.matrix()).norm() == 0.0);
  CHECK(mf.min_gap == doctest::Approx(spec.min_gap()));
}
