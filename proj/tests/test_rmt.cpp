#include <doctest.h>

#include <cmath>
#include <complex>
#include <vector>

#include "helpers.hpp"
#include "qchaos/errors.hpp"
#include "qchaos/linalg.hpp"
#include "qchaos/models.hpp"
#include "qchaos/rmt.hpp"
#include "qchaos/scrambling.hpp"

using namespace qchaos;

namespace {

double brute_force_r4(const RealVector& lam, double t) {
  const int d = int(lam.size());
  Complex acc(0, 0);
  for (int k = 0; k < d; ++k)
    for (int l = 0; l < d; ++l)
      for (int m = 0; m < d; ++m)
        for (int n = 0; n < d; ++n) {
          if (k == l || k == m || k == n || l == m || l == n || m == n)
            continue;
          acc += std::polar(1.0, -(lam[k] + lam[l] - lam[m] - lam[n]) * t);
        }
  return acc.real();
}

}  // namespace

TEST_CASE("orthogonal ensemble draws are symmetric with the stated scale") {
  const int d = 12;
  double tr2_sum = 0.0;
  const int n = 400;
  for (int i = 0; i < n; ++i) {
    RandomStream rng = RandomStream::for_sample(3000, i);
    const Matrix h = sample_goe(d, rng).matrix();
    CHECK((h - h.transpose()).cwiseAbs().maxCoeff() == 0.0);
    CHECK(h.imag().cwiseAbs().maxCoeff() == 0.0);
    tr2_sum += (h * h).trace().real();
  }
  // E[Tr H^2] = d + 1, Var(Tr H^2) = O(1); allow a generous band.
  CHECK(std::abs(tr2_sum / n - (d + 1)) < 0.5);
}

TEST_CASE("unitary ensemble draws are Hermitian with the stated scale") {
  const int d = 12;
  double tr2_sum = 0.0;
  const int n = 400;
  for (int i = 0; i < n; ++i) {
    RandomStream rng = RandomStream::for_sample(3100, i);
    const Matrix h = sample_gue(d, rng).matrix();
    CHECK((h - h.adjoint()).cwiseAbs().maxCoeff() == 0.0);
    tr2_sum += (h * h).trace().real();
  }
  CHECK(std::abs(tr2_sum / n - d) < 0.5);
}

TEST_CASE("unitary ensemble spectrum stays near the semicircle support") {
  RandomStream rng(3200);
  const RealVector lam = eigvalsh(sample_gue(256, rng));
  CHECK(lam.cwiseAbs().maxCoeff() < 2.3);
  CHECK(lam.cwiseAbs().maxCoeff() > 1.7);
}

TEST_CASE("haar samples are unitary with uniform first entry weight") {
  const int d = 6;
  double p11 = 0.0;
  const int n = 600;
  for (int i = 0; i < n; ++i) {
    RandomStream rng = RandomStream::for_sample(3300, i);
    const UnitaryOperator u = sample_haar_unitary(d, rng);  // ctor validates
    p11 += std::norm(u.matrix()(0, 0));
  }
  // E[|U_00|^2] = 1/d with per-sample variance below 1/d^2.
  CHECK(std::abs(p11 / n - 1.0 / d) < 4.0 / (d * std::sqrt(double(n))));
}

TEST_CASE("sampling is reproducible per stream") {
  RandomStream a(42), b(42);
  const Matrix ha = sample_gue(5, a).matrix();
  const Matrix hb = sample_gue(5, b).matrix();
  CHECK((ha - hb).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("spacing statistics trim, normalize and histogram") {
  const int d = 200;
  RealVector lam(d);
  for (int i = 0; i < d; ++i) lam[i] = 0.01 * i * i;  // smooth, ascending
  const SpacingStatistics st = spacing_statistics(lam, 25);
  // Central 80 percent: 160 kept levels give 159 spacings and 158 ratios.
  CHECK(st.normalized_spacings.size() == 159);
  CHECK(st.gap_ratios.size() == 158);
  double mean = 0.0;
  for (double s : st.normalized_spacings) mean += s;
  CHECK(mean / 159.0 == doctest::Approx(1.0).epsilon(1e-12));
  for (double r : st.gap_ratios) {
    CHECK(r >= 0.0);
    CHECK(r <= 1.0);
  }
  REQUIRE(st.bin_edges.size() == 26);
  double integral = 0.0;
  for (std::size_t b = 0; b + 1 < st.bin_edges.size(); ++b)
    integral += st.densities[b] * (st.bin_edges[b + 1] - st.bin_edges[b]);
  CHECK(integral == doctest::Approx(1.0).epsilon(1e-10));

  RealVector tiny(10);
  for (int i = 0; i < 10; ++i) tiny[i] = i;
  CHECK_THROWS_AS(spacing_statistics(tiny), ValidationError);
}

TEST_CASE("uncorrelated levels reproduce the Poisson gap-ratio constant") {
  const McEstimate poisson = poisson_mean_gap_ratio(200, 150, 4000);
  CHECK(std::abs(poisson.mean - 0.38629) <= 3.0 * poisson.standard_error);
  CHECK(poisson.standard_error < 0.01);
  // Deterministic under the same master seed.
  const McEstimate again = poisson_mean_gap_ratio(200, 150, 4000);
  CHECK(again.mean == poisson.mean);
}

TEST_CASE("orthogonal ensemble reproduces its gap-ratio constant") {
  const EnsembleSpec ens{EnsembleKind::GOE, 200, 50, 4100};
  const McEstimate goe = mean_gap_ratio(ens);
  CHECK(std::abs(goe.mean - 0.5307) <= 0.012);
  CHECK(goe.samples == 50);
}

TEST_CASE("four-point form factor: counting limit and brute force") {
  RandomStream rng(4200);
  for (int d : {5, 6}) {
    RealVector lam(d);
    for (int i = 0; i < d; ++i) lam[i] = rng.gaussian();
    const double fall = double(d) * (d - 1) * (d - 2) * (d - 3);
    CHECK(sff_r4_spectrum(lam, 0.0) == doctest::Approx(fall).epsilon(1e-12));
    for (double t : {0.3, 1.7, 6.1}) {
      CHECK(sff_r4_spectrum(lam, t) ==
            doctest::Approx(brute_force_r4(lam, t)).epsilon(1e-9));
    }
  }
}

TEST_CASE("ensemble form factor estimate is deterministic with errors") {
  const EnsembleSpec ens{EnsembleKind::GUE, 8, 60, 4300};
  const TimeGrid grid{0.0, 5.0, 11};
  const SffEstimate est = sff_r4(ens, grid);
  REQUIRE(est.times.size() == 11);
  CHECK(est.r4_values[0] == doctest::Approx(8.0 * 7 * 6 * 5).epsilon(1e-12));
  CHECK(est.standard_errors[0] <= 1e-9);
  for (std::size_t i = 1; i < est.times.size(); ++i)
    CHECK(est.standard_errors[i] > 0.0);
  const SffEstimate est2 = sff_r4(ens, grid);
  CHECK(est2.r4_values[5] == est.r4_values[5]);
}

TEST_CASE("mean generating power stays below its form-factor bound") {
  const EnsembleSpec ens{EnsembleKind::GUE, 8, 80, 4400};
  const TimeGrid grid{0.5, 4.0, 8};
  const std::vector<CgpBoundRow> rows =
      gue_cgp_bound_check(ens, OrthonormalBasis::computational(8), grid);
  REQUIRE(rows.size() == 8);
  for (const CgpBoundRow& row : rows) {
    CHECK(row.holds);
    CHECK(row.lhs_mean >= 0.0);
    CHECK(row.rhs <= 1.0 + 1e-12);
    CHECK(row.gap == doctest::Approx(row.rhs - row.lhs_mean));
    CHECK(row.diag_discrepancy >= 0.0);
  }
}

TEST_CASE("haar commutator average closed form") {
  Vector pm(2);
  pm << Complex(1, 0), Complex(-1, 0);
  CHECK(haar_avg_otoc_closed_form(pm, pm, 2) ==
        doctest::Approx(8.0 / 3.0).epsilon(1e-13));

  // Proportional (constant) phases commute with everything on average.
  Vector flat(4);
  flat << Complex(0, 1), Complex(0, 1), Complex(0, 1), Complex(0, 1);
  RandomStream rng(4500);
  const Vector w = sample_diagonal_phases(4, rng);
  CHECK(haar_avg_otoc_closed_form(flat, w, 4) ==
        doctest::Approx(0.0).epsilon(1e-12));

  CHECK_THROWS_AS(haar_avg_otoc_closed_form(pm, pm, 3), DimensionError);
  Vector nonunit(2);
  nonunit << Complex(1, 0), Complex(0.5, 0);
  CHECK_THROWS_AS(haar_avg_otoc_closed_form(nonunit, pm, 2), ValidationError);

  CHECK(haar_avg_cgp(2) == doctest::Approx(1.0 / 3.0));
  CHECK(haar_avg_cgp(8) == doctest::Approx(7.0 / 9.0));
}

TEST_CASE("haar commutator average matches sampling") {
  const int d = 2;
  Vector v(2), w(2);
  v << Complex(1, 0), std::polar(1.0, 2.2);
  w << std::polar(1.0, -0.7), std::polar(1.0, 0.9);
  const double closed = haar_avg_otoc_closed_form(v, w, d);
  double mean = 0.0, m2 = 0.0;
  const long n = 500;
  for (long i = 0; i < n; ++i) {
    RandomStream rng = RandomStream::for_sample(4600, i);
    const UnitaryOperator u = sample_haar_unitary(d, rng);
    const Matrix vm = u.matrix() * v.asDiagonal() * u.matrix().adjoint();
    RandomStream rng2 = RandomStream::for_sample(4601, i);
    const UnitaryOperator u2 = sample_haar_unitary(d, rng2);
    const Matrix wm = u2.matrix() * w.asDiagonal() * u2.matrix().adjoint();
    const double c =
        squared_commutator(Matrix(vm), Matrix(wm), UnitaryOperator::identity(d));
    const double delta = c - mean;
    mean += delta / double(i + 1);
    m2 += delta * (c - mean);
  }
  const double se = std::sqrt(m2 / double(n - 1) / double(n));
  CHECK(std::abs(mean - closed) <= 3.0 * se);
}

TEST_CASE("short-time curvature of a single spin flip") {
  const Matrix sx = (Matrix(2, 2) << 0, 1, 1, 0).finished();
  const CurvatureReport rep = short_time_cgp_curvature(
      HermitianOperator(sx), OrthonormalBasis::computational(2));
  CHECK(rep.analytic == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(rep.finite_difference == doctest::Approx(2.0).epsilon(1e-7));
  REQUIRE(rep.kappa.has_value());
  CHECK(*rep.kappa == doctest::Approx(2.0).epsilon(1e-7));
  CHECK(rep.q_bound == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("short-time curvature vanishes for basis-diagonal generators") {
  Matrix diag = Matrix::Zero(3, 3);
  diag(0, 0) = 0.3;
  diag(1, 1) = -1.1;
  diag(2, 2) = 0.8;
  const CurvatureReport rep = short_time_cgp_curvature(
      HermitianOperator(diag), OrthonormalBasis::computational(3));
  CHECK(rep.analytic == doctest::Approx(0.0).epsilon(1e-13));
  CHECK(std::abs(rep.finite_difference) < 1e-8);
  CHECK(!rep.kappa.has_value());
}

TEST_CASE("short-time curvature bound pieces are consistent") {
  for (int s = 0; s < 6; ++s) {
    const HermitianOperator h = test_util::random_hermitian(5, 4700 + s);
    const OrthonormalBasis b = test_util::random_basis(5, 4800 + s);
    const CurvatureReport rep = short_time_cgp_curvature(h, b);
    CHECK(rep.q_bound >= 0.0);
    CHECK(rep.q_bound <= 1.0);
    const double tr2_over_d =
        (h.matrix() * h.matrix()).trace().real() / 5.0;
    CHECK(rep.analytic <= tr2_over_d * rep.q_bound + 1e-10);
    REQUIRE(rep.kappa.has_value());
    CHECK(*rep.kappa == doctest::Approx(rep.finite_difference / rep.analytic));
  }
}

TEST_CASE("walsh fast path equals the dense generating power") {
  for (int L : {3, 4, 5}) {
    for (int k : {1, 2, L}) {
      const SpectralDecomposition spec = eigh(build_k_local_commuting(L, k));
      for (double t : {0.05, 0.3, 0.9}) {
        const double dense =
            cgp(evolve(spec, t), OrthonormalBasis::computational(1 << L));
        CHECK(std::abs(klocal_cgp(L, k, t) - dense) <= 1e-10);
      }
    }
  }
}

TEST_CASE("k-local scan normalizes to the inverse window count") {
  const std::vector<int> ls{4, 5, 6, 7, 8};
  const std::vector<KlocalScanRow> rows = klocal_short_time_scan(ls, 2);
  REQUIRE(rows.size() == ls.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const int L = ls[i];
    const double windows = L - 2 + 1;
    CHECK(rows[i].L == L);
    CHECK(rows[i].k == 2);
    CHECK(rows[i].trace_h2 ==
          doctest::Approx(std::pow(2.0, L) * windows).epsilon(1e-12));
    CHECK(rows[i].normalized ==
          doctest::Approx(2.0 / windows).epsilon(1e-6));
  }
  CHECK_THROWS_AS(klocal_short_time_scan(ls, 5), ValidationError);
}
