// Acceptance suite: one check per release criterion, one line of output
// each. Exit status is the number of failed criteria, so `ctest` reports
// the binary red whenever any criterion regresses.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "qchaos/coherence.hpp"
#include "qchaos/errors.hpp"
#include "qchaos/experiments.hpp"
#include "qchaos/linalg.hpp"
#include "qchaos/majorization.hpp"
#include "qchaos/models.hpp"
#include "qchaos/rmt.hpp"
#include "qchaos/rng.hpp"
#include "qchaos/scrambling.hpp"
#include "qchaos/types.hpp"

#include "../helpers.hpp"

namespace {

using namespace qchaos;

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(4);
  os << x;
  return os.str();
}

double mean_of(const std::vector<double>& xs) {
  double s = 0.0;
  for (double x : xs) s += x;
  return s / static_cast<double>(xs.size());
}

struct Welford {
  long n = 0;
  double mean = 0.0;
  double m2 = 0.0;
  void add(double x) {
    ++n;
    const double delta = x - mean;
    mean += delta / static_cast<double>(n);
    m2 += delta * (x - mean);
  }
  double stderr_of_mean() const {
    return std::sqrt(m2 / static_cast<double>(n - 1) /
                     static_cast<double>(n));
  }
};

// ---------------------------------------------------------------------------
// 1. Exact identities at machine precision.

Outcome check_exact_identities() {
  const int dims[] = {2, 4, 8};

  double max_residual = 0.0;
  for (int i = 0; i < 100; ++i) {
    const int d = dims[i % 3];
    const std::uint64_t s = 1000 + 10 * static_cast<std::uint64_t>(i);
    RandomStream rng(s);
    const UnitaryEigensystem v(OrthonormalBasis(sample_haar_unitary(d, rng)),
                               sample_diagonal_phases(d, rng));
    const UnitaryEigensystem w(OrthonormalBasis(sample_haar_unitary(d, rng)),
                               sample_diagonal_phases(d, rng));
    const UnitaryOperator u = sample_haar_unitary(d, rng);
    const OtocDecomposition rep = otoc_cgp_decomposition(v, w, u);
    max_residual = std::max(max_residual, std::abs(rep.residual));
  }
  if (max_residual > 1e-10)
    return {false, "decomposition residual " + fmt(max_residual)};

  double max_route_gap = 0.0;
  double max_otoc_identity = 0.0;
  double max_pr2 = 0.0;
  double max_escape = 0.0;
  double max_masa = 0.0;
  for (int i = 0; i < 30; ++i) {
    const int d = dims[i % 3];
    const std::uint64_t s = 5000 + 10 * static_cast<std::uint64_t>(i);
    RandomStream rng(s);

    const UnitaryOperator u = sample_haar_unitary(d, rng);
    const OrthonormalBasis b1(sample_haar_unitary(d, rng));
    const OrthonormalBasis b2(sample_haar_unitary(d, rng));
    max_route_gap = std::max(
        max_route_gap, std::abs(cgp(u, b1) - cgp_commutator_form(u, b1)));

    const UnitaryOperator uv = sample_haar_unitary(d, rng);
    const UnitaryOperator uw = sample_haar_unitary(d, rng);
    const double c = squared_commutator(uv, uw, u);
    const double via_f = 2.0 * (1.0 - otoc_F(uv, uw, u).real());
    max_otoc_identity = std::max(max_otoc_identity, std::abs(c - via_f));

    const PureState psi = test_util::random_state(d, s + 1);
    max_pr2 = std::max(max_pr2,
                       std::abs(pr2(psi, b1) + c2(psi, b1) - 1.0));

    const SpectralDecomposition spec = eigh(sample_gue(d, rng));
    const double esc = escape_probability(psi, spec).value;
    max_escape = std::max(
        max_escape,
        std::abs(esc - c2(psi, OrthonormalBasis(spec.eigenvectors))));

    const double dist2 = grassmannian_distance_sq(b1, b2);
    const double via_cgp =
        2.0 * d * cgp(intertwiner(b1, b2), b1);
    max_masa = std::max(max_masa, std::abs(dist2 - via_cgp));
  }
  if (max_route_gap > 1e-12)
    return {false, "cgp route gap " + fmt(max_route_gap)};
  if (max_otoc_identity > 1e-12)
    return {false, "C vs 2(1-ReF) gap " + fmt(max_otoc_identity)};
  if (max_pr2 > 1e-12) return {false, "pr2+c2-1 gap " + fmt(max_pr2)};
  if (max_escape > 1e-12)
    return {false, "escape vs c2 gap " + fmt(max_escape)};
  if (max_masa > 1e-12) return {false, "masa distance gap " + fmt(max_masa)};

  return {true, "residual " + fmt(max_residual) + ", route " +
                    fmt(max_route_gap) + ", otoc " + fmt(max_otoc_identity) +
                    ", pr2 " + fmt(max_pr2) + ", escape " + fmt(max_escape) +
                    ", masa " + fmt(max_masa)};
}

// ---------------------------------------------------------------------------
// 2. XXZ eigenstate coherence at L = 12 (d = 495).

std::pair<double, double> central_window_means(
    const std::vector<CoherenceReport>& scan,
    double (*pick1)(const CoherenceReport&),
    double (*pick2)(const CoherenceReport&)) {
  const std::size_t d = scan.size();
  const std::size_t lo = static_cast<std::size_t>(0.4 * double(d));
  const std::size_t hi = static_cast<std::size_t>(0.6 * double(d));
  std::vector<double> a, b;
  for (std::size_t i = lo; i < hi; ++i) {
    a.push_back(pick1(scan[i]));
    b.push_back(pick2(scan[i]));
  }
  return {mean_of(a), mean_of(b)};
}

double central_crel_mean(const std::vector<CoherenceReport>& scan) {
  return central_window_means(
             scan, [](const CoherenceReport& r) { return r.normalized_c_rel; },
             [](const CoherenceReport& r) { return r.normalized_c_rel; })
      .first;
}

// The two bases play different roles. In the site basis the strong hopping
// term is off-diagonal, so bulk eigenstates of the chaotic model reach the
// random-matrix spread; that calibrates the absolute level, but moving the
// defect changes the site-basis coherence by only a few percent. The
// integrable-vs-chaotic separation shows up in the mean-field basis, where
// the weaker ZZ interaction alone drives the spreading and the chaotic
// defect position delocalizes markedly further than the edge one.
Outcome check_eigenstate_coherence(bool full_scale) {
  XxzDefectParams p;
  p.L = 12;
  p.n_up = 4;

  p.delta = 6;
  const SpectralDecomposition chaotic = eigh(build_xxz_defect(p));
  const MeanFieldBasis mf_chaotic = mean_field_basis(p);
  p.delta = 1;
  const SpectralDecomposition integrable = eigh(build_xxz_defect(p));
  const MeanFieldBasis mf_integrable = mean_field_basis(p);

  const OrthonormalBasis site = OrthonormalBasis::computational(chaotic.dim());
  const auto [rel_site, nc2_site] = central_window_means(
      eigenstate_coherence_scan(chaotic, site),
      [](const CoherenceReport& r) { return r.normalized_c_rel; },
      [](const CoherenceReport& r) { return r.normalized_c2; });
  const double rel_mf_cha =
      central_crel_mean(eigenstate_coherence_scan(chaotic, mf_chaotic.basis));
  const double rel_mf_int = central_crel_mean(
      eigenstate_coherence_scan(integrable, mf_integrable.basis));

  if (rel_site < 0.9 || rel_site > 1.05)
    return {false, "site-basis chaotic normalized c_rel " + fmt(rel_site) +
                       " outside [0.9, 1.05]"};
  if (nc2_site < 0.99)
    return {false, "site-basis chaotic normalized c2 " + fmt(nc2_site) +
                       " below 0.99"};
  if (rel_mf_cha < 1.10 * rel_mf_int)
    return {false, "mean-field chaotic c_rel " + fmt(rel_mf_cha) +
                       " fails to exceed integrable " + fmt(rel_mf_int) +
                       " by 10%"};

  // Full-scale (d = 3003) reference values are closed-form, so assert them
  // in every run; the eigensolve-heavy scan stays behind --full.
  const double crel_bits = goe_crel_prediction(3003, LogBase::bits);
  if (std::abs(crel_bits - 10.49) > 0.005)
    return {false, "full-scale c_rel normalizer " + fmt(crel_bits) +
                       " not 10.49"};
  const double c2_ref = goe_c2_analytic(3003);
  if (std::abs(c2_ref - 0.9991) > 5e-4)
    return {false,
            "full-scale c2 normalizer " + fmt(c2_ref) + " not 0.9991"};

  std::string detail = "site norm c_rel " + fmt(rel_site) + ", norm c2 " +
                       fmt(nc2_site) + "; mean-field c_rel " +
                       fmt(rel_mf_cha) + " vs " + fmt(rel_mf_int);
  if (mf_chaotic.near_degenerate || mf_integrable.near_degenerate)
    detail += " (near-degenerate mean-field gaps)";

  if (full_scale) {
    XxzDefectParams big;
    big.L = 15;
    big.n_up = 5;
    MeasureSet measures;
    measures.c_l1 = false;

    big.delta = 7;
    const SpectralDecomposition big_cha = eigh(build_xxz_defect(big));
    const MeanFieldBasis big_mf_cha = mean_field_basis(big);
    const auto [raw_c2, nrel15] = central_window_means(
        eigenstate_coherence_scan(
            big_cha, OrthonormalBasis::computational(big_cha.dim()), measures),
        [](const CoherenceReport& r) { return r.c2; },
        [](const CoherenceReport& r) { return r.normalized_c_rel; });
    if (std::abs(raw_c2 - 0.9991) > 5e-4)
      return {false,
              "L=15 site central c2 " + fmt(raw_c2) + " not 0.9991 +- 5e-4"};
    if (nrel15 < 0.9 || nrel15 > 1.05)
      return {false, "L=15 site normalized c_rel " + fmt(nrel15) +
                         " outside [0.9, 1.05]"};
    const double mf15_cha = central_crel_mean(
        eigenstate_coherence_scan(big_cha, big_mf_cha.basis, measures));
    big.delta = 1;
    const double mf15_int = central_crel_mean(eigenstate_coherence_scan(
        eigh(build_xxz_defect(big)), mean_field_basis(big).basis, measures));
    if (mf15_cha < 1.10 * mf15_int)
      return {false, "L=15 mean-field c_rel " + fmt(mf15_cha) +
                         " fails to exceed integrable " + fmt(mf15_int) +
                         " by 10%"};
    detail += "; L=15 site c2 " + fmt(raw_c2) + ", norm c_rel " +
              fmt(nrel15) + ", mean-field " + fmt(mf15_cha) + " vs " +
              fmt(mf15_int);
  }
  return {true, detail};
}

// ---------------------------------------------------------------------------
// 3. Gap-ratio statistics against sampling oracles.

Outcome check_level_statistics() {
  XxzDefectParams p;
  p.L = 12;
  p.n_up = 4;

  p.delta = 1;
  const double r_int = spacing_statistics(eigh(build_xxz_defect(p))).mean_ratio;
  p.delta = 6;
  const double r_cha = spacing_statistics(eigh(build_xxz_defect(p))).mean_ratio;

  const McEstimate poisson = poisson_mean_gap_ratio(495, 200, 20260301);
  const McEstimate goe =
      mean_gap_ratio(EnsembleSpec(EnsembleKind::GOE, 495, 200, 20260302));

  if (std::abs(r_int - poisson.mean) > 0.02)
    return {false, "integrable ratio " + fmt(r_int) + " vs Poisson oracle " +
                       fmt(poisson.mean)};
  if (std::abs(r_cha - goe.mean) > 0.02)
    return {false, "chaotic ratio " + fmt(r_cha) + " vs GOE oracle " +
                       fmt(goe.mean)};
  return {true, "integrable " + fmt(r_int) + " vs Poisson " +
                    fmt(poisson.mean) + "; chaotic " + fmt(r_cha) +
                    " vs GOE " + fmt(goe.mean)};
}

// ---------------------------------------------------------------------------
// 4. Majorization fraction grows with system size in the site basis.

Outcome check_majorization_fractions() {
  std::vector<double> full, mid;
  for (int L : {9, 12, 15}) {
    XxzDefectParams p;
    p.L = L;
    p.n_up = L / 3;
    p.delta = 1;
    const SpectralDecomposition integrable = eigh(build_xxz_defect(p));
    p.delta = L / 2;
    const SpectralDecomposition chaotic = eigh(build_xxz_defect(p));
    const OrthonormalBasis site =
        OrthonormalBasis::computational(integrable.dim());
    full.push_back(
        eigenstate_majorization_fraction(integrable, chaotic, site, 1.0));
    mid.push_back(
        eigenstate_majorization_fraction(integrable, chaotic, site, 0.2));
  }
  const std::string detail =
      "full " + fmt(full[0]) + " < " + fmt(full[1]) + " < " + fmt(full[2]) +
      "; mid-spectrum " + fmt(mid[0]) + ", " + fmt(mid[1]) + ", " +
      fmt(mid[2]);
  if (!(full[2] > full[1] && full[1] > full[0]))
    return {false, "fractions not increasing: " + detail};
  return {true, detail};
}

// ---------------------------------------------------------------------------
// 5. Product-basis coherence floor for two-qubit states.

Outcome check_product_basis_floor() {
  Matrix kron4(4, 4);
  double worst_closed = 0.0;
  double worst_search = -1.0;
  for (int i = 0; i < 20; ++i) {
    const PureState psi = test_util::random_state(4, 7000 + i);
    const double closed = min_product_basis_c2(psi, {2, 2});

    const RealVector schmidt = schmidt_squared(psi, {2, 2}).probabilities();
    double purity = 0.0;
    for (Eigen::Index j = 0; j < schmidt.size(); ++j)
      purity += schmidt[j] * schmidt[j];
    worst_closed = std::max(worst_closed, std::abs(closed - (1.0 - purity)));

    RandomStream rng(8000 + static_cast<std::uint64_t>(i));
    double best = 4.0;
    for (int trial = 0; trial < 200; ++trial) {
      const Matrix ua = sample_haar_unitary(2, rng).matrix();
      const Matrix ub = sample_haar_unitary(2, rng).matrix();
      for (int r = 0; r < 2; ++r)
        for (int c = 0; c < 2; ++c)
          kron4.block(2 * r, 2 * c, 2, 2) = ua(r, c) * ub;
      best = std::min(best, c2(psi, OrthonormalBasis(UnitaryOperator(kron4))));
    }
    worst_search = std::max(worst_search, closed - best);
  }
  if (worst_closed > 1e-10)
    return {false, "closed form vs reduced purity gap " + fmt(worst_closed)};
  if (worst_search > 1e-6)
    return {false,
            "random search beat the floor by " + fmt(worst_search)};
  return {true, "closed-form gap " + fmt(worst_closed) +
                    ", best search margin " + fmt(worst_search)};
}

// ---------------------------------------------------------------------------
// 6. Monte-Carlo estimates agree with the closed forms within 3 sigma.

Outcome check_haar_averages() {
  std::string detail;

  {
    const int d = 8;
    const OrthonormalBasis comp = OrthonormalBasis::computational(d);
    Welford acc;
    for (long i = 0; i < 500; ++i) {
      RandomStream rng = RandomStream::for_sample(9100, i);
      acc.add(cgp(sample_haar_unitary(d, rng), comp));
    }
    const double z =
        std::abs(acc.mean - haar_avg_cgp(d)) / acc.stderr_of_mean();
    if (z > 3.0) return {false, "mean cgp z-score " + fmt(z)};
    detail += "cgp z " + fmt(z);
  }

  for (int d : {2, 4}) {
    RandomStream phase_rng(9200 + d);
    const Vector v = sample_diagonal_phases(d, phase_rng);
    const Vector w = sample_diagonal_phases(d, phase_rng);
    const double closed = haar_avg_otoc_closed_form(v, w, d);
    Welford acc;
    for (long i = 0; i < 500; ++i) {
      RandomStream rng = RandomStream::for_sample(9300 + d, i);
      const Matrix u = sample_haar_unitary(d, rng).matrix();
      const Matrix u2 = sample_haar_unitary(d, rng).matrix();
      const Matrix vm = u * v.asDiagonal() * u.adjoint();
      const Matrix wm = u2 * w.asDiagonal() * u2.adjoint();
      acc.add(squared_commutator(vm, wm, UnitaryOperator::identity(d)));
    }
    const double z = std::abs(acc.mean - closed) / acc.stderr_of_mean();
    if (z > 3.0)
      return {false, "fixed-spectrum average z-score " + fmt(z) + " at d=" +
                         std::to_string(d)};
    detail += ", spectrum-avg z(d=" + std::to_string(d) + ") " + fmt(z);
  }

  {
    const int d = 4;
    const OrthonormalBasis bv = test_util::random_basis(d, 9400);
    const OrthonormalBasis bw = test_util::random_basis(d, 9401);
    const UnitaryOperator ut = test_util::random_unitary(d, 9402);
    const McEstimate exact = phase_averaged_otoc(bv, bw, ut, std::nullopt);
    const McEstimate mc = phase_averaged_otoc(
        bv, bw, ut,
        EnsembleSpec(EnsembleKind::DiagonalPhases, d, 500, 9403));
    const double z = std::abs(mc.mean - exact.mean) / mc.standard_error;
    if (z > 3.0) return {false, "phase-averaged otoc z-score " + fmt(z)};
    detail += ", phase-avg z " + fmt(z);
  }

  {
    const int d = 4;
    const PureState a = test_util::random_state(d, 9500);
    const PureState b = test_util::random_state(d, 9501);
    const Matrix mix = 0.65 * (a.amplitudes() * a.amplitudes().adjoint()) +
                       0.35 * (b.amplitudes() * b.amplitudes().adjoint());
    const DensityMatrix rho = DensityMatrix::validated(mix);
    const OrthonormalBasis basis = test_util::random_basis(d, 9502);
    const McEstimate exact = haar_state_commutator_avg(rho, basis, std::nullopt);
    const McEstimate mc = haar_state_commutator_avg(
        rho, basis, EnsembleSpec(EnsembleKind::Haar, d, 500, 9503));
    const double z = std::abs(mc.mean - exact.mean) / mc.standard_error;
    if (z > 3.0) return {false, "state commutator z-score " + fmt(z)};
    detail += ", state-avg z " + fmt(z);
  }

  return {true, detail};
}

// ---------------------------------------------------------------------------
// 7. Form-factor bound on the mean CGP under GUE evolution.

Outcome check_form_factor_bound() {
  const int d = 8;
  const OrthonormalBasis comp = OrthonormalBasis::computational(d);

  TimeGrid grid;
  grid.t_min = 0.0;
  grid.t_max = 10.0;
  grid.num_points = 21;
  // Throws on any violated time, so reaching this point means the bound
  // held with slack at every grid time.
  const auto rows =
      gue_cgp_bound_check(EnsembleSpec(EnsembleKind::GUE, d, 200, 9600),
                          comp, grid);
  double min_gap = rows[0].gap;
  for (const auto& row : rows) min_gap = std::min(min_gap, row.gap);

  std::vector<double> logt, logd;
  for (double t = 1e-3; t < 1.05e-1; t *= std::pow(10.0, 1.0 / 3.0)) {
    TimeGrid single;
    single.t_min = t;
    single.t_max = t;
    single.num_points = 1;
    const auto one =
        gue_cgp_bound_check(EnsembleSpec(EnsembleKind::GUE, d, 200, 9601),
                            comp, single);
    logt.push_back(std::log(t));
    logd.push_back(std::log(one[0].diag_discrepancy));
  }
  const double mx = mean_of(logt), my = mean_of(logd);
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < logt.size(); ++i) {
    sxx += (logt[i] - mx) * (logt[i] - mx);
    sxy += (logt[i] - mx) * (logd[i] - my);
  }
  const double slope = sxy / sxx;
  if (std::abs(slope - 4.0) > 0.3)
    return {false, "short-time discrepancy slope " + fmt(slope)};
  return {true, "bound min gap " + fmt(min_gap) + ", discrepancy slope " +
                    fmt(slope)};
}

// ---------------------------------------------------------------------------
// 8. Short-time curvature ratio and the k-local scaling law.

Outcome check_short_time_curvature() {
  double kmin = 1e300, kmax = -1e300;
  for (int d : {2, 4, 8}) {
    for (int i = 0; i < 50; ++i) {
      RandomStream rng(9700 + 100 * static_cast<std::uint64_t>(d) +
                       static_cast<std::uint64_t>(i));
      const HermitianOperator h =
          (i % 2 == 0) ? sample_gue(d, rng) : sample_goe(d, rng);
      const OrthonormalBasis b =
          (i % 3 == 0) ? OrthonormalBasis::computational(d)
                       : OrthonormalBasis(sample_haar_unitary(d, rng));
      const CurvatureReport rep = short_time_cgp_curvature(h, b);
      if (!rep.kappa)
        return {false, "kappa undefined for a generic instance (d=" +
                           std::to_string(d) + ")"};
      kmin = std::min(kmin, *rep.kappa);
      kmax = std::max(kmax, *rep.kappa);
    }
  }
  if (kmax - kmin > 1e-3)
    return {false, "kappa spread " + fmt(kmax - kmin) + " over [" +
                       fmt(kmin) + ", " + fmt(kmax) + "]"};

  std::vector<double> xs, ys;
  const std::vector<int> l_range = {4, 5, 6, 7, 8, 9, 10};
  for (int k : {1, 2}) {
    for (const auto& row : klocal_short_time_scan(l_range, k)) {
      xs.push_back(1.0 / double(row.L - row.k + 1));
      ys.push_back(row.normalized);
    }
  }
  for (int L : l_range) {
    const auto rows = klocal_short_time_scan({L}, L);
    xs.push_back(1.0 / double(rows[0].L - rows[0].k + 1));
    ys.push_back(rows[0].normalized);
  }
  double sxy = 0.0, sxx = 0.0, ss_tot = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxy += xs[i] * ys[i];
    sxx += xs[i] * xs[i];
    ss_tot += ys[i] * ys[i];
  }
  const double beta = sxy / sxx;
  double ss_res = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double r = ys[i] - beta * xs[i];
    ss_res += r * r;
  }
  const double r2 = 1.0 - ss_res / ss_tot;
  if (r2 < 0.999)
    return {false, "k-local through-origin R^2 " + fmt(r2)};
  return {true, "kappa in [" + fmt(kmin) + ", " + fmt(kmax) +
                    "], k-local R^2 " + fmt(r2) + " (slope " + fmt(beta) +
                    ")"};
}

// ---------------------------------------------------------------------------
// 9. Integrable-vs-chaotic temporal variance of the Ising recurrences.

Outcome check_tfim_recurrences() {
  TfimParams integrable;
  integrable.g = 1.0;
  integrable.h = 0.0;
  TfimParams chaotic;
  chaotic.g = -1.05;
  chaotic.h = 0.5;

  TimeGrid grid;
  grid.t_min = 0.0;
  grid.t_max = 500.0;
  grid.num_points = 1001;
  const std::vector<int> sizes = {5, 7, 9};
  const std::pair<double, double> window = {50.0, 500.0};

  std::string detail;
  for (ScrambleObservable obs :
       {ScrambleObservable::otoc, ScrambleObservable::cgp}) {
    const auto rows = variance_ratio_scan(integrable, chaotic, obs, {1, -1},
                                          sizes, grid, window);
    const char* name = obs == ScrambleObservable::otoc ? "otoc" : "cgp";
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (rows[i].ratio <= 0.0)
        return {false, std::string(name) + " ratio at n=" +
                           std::to_string(rows[i].n) + " is " +
                           fmt(rows[i].ratio)};
      if (i > 0 && rows[i].ratio <= rows[i - 1].ratio)
        return {false, std::string(name) + " ratio not increasing at n=" +
                           std::to_string(rows[i].n)};
    }
    const auto& last = rows.back();
    if (last.var_chaotic * 10.0 > last.var_integrable)
      return {false, std::string(name) + " n=9 chaotic variance " +
                         fmt(last.var_chaotic) + " not 10x below " +
                         fmt(last.var_integrable)};
    if (!detail.empty()) detail += "; ";
    detail += std::string(name) + " ratios " + fmt(rows[0].ratio) + " < " +
              fmt(rows[1].ratio) + " < " + fmt(rows[2].ratio) +
              ", n=9 suppression " +
              fmt(last.var_integrable / last.var_chaotic) + "x";
  }
  return {true, detail};
}

// ---------------------------------------------------------------------------
// 10. Seeded experiment reruns produce byte-identical CSV output.

std::string read_bytes(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

Outcome check_determinism(const std::filesystem::path& configs_dir) {
  const std::vector<std::string> fixtures = {
      "rmt_sff_gue_d8.json", "rmt_cgp_bound_gue_d8.json",
      "shorttime_curvature_goe_d8.json"};
  const std::filesystem::path scratch =
      std::filesystem::temp_directory_path() / "qchaos_acceptance_rerun";
  std::filesystem::remove_all(scratch);

  std::string detail;
  for (const std::string& name : fixtures) {
    std::ifstream in(configs_dir / name);
    if (!in) return {false, "missing fixture " + name};
    std::ostringstream os;
    os << in.rdbuf();
    ValidationResult res = validate(os.str());
    if (!res.ok()) return {false, "fixture " + name + " failed validation"};

    std::vector<std::vector<std::pair<std::string, std::string>>> runs;
    for (int rep = 0; rep < 2; ++rep) {
      ExperimentConfig cfg = *res.config;
      const std::filesystem::path dir =
          scratch / (name + ".run" + std::to_string(rep));
      cfg.output.directory = dir.string();
      const RunManifest manifest = run(cfg);
      std::vector<std::pair<std::string, std::string>> files;
      for (const OutputFile& out : manifest.outputs)
        files.emplace_back(out.file, read_bytes(dir / out.file));
      runs.push_back(std::move(files));
    }
    if (runs[0].size() != runs[1].size())
      return {false, name + " reruns produced different file sets"};
    for (std::size_t i = 0; i < runs[0].size(); ++i) {
      if (runs[0][i].first != runs[1][i].first ||
          runs[0][i].second != runs[1][i].second)
        return {false, name + " rerun differs in " + runs[0][i].first};
    }
    if (!detail.empty()) detail += ", ";
    detail += name + " (" + std::to_string(runs[0].size()) + " files)";
  }
  std::filesystem::remove_all(scratch);
  return {true, detail};
}

}  // namespace

int main(int argc, char** argv) {
  std::filesystem::path configs_dir = "configs";
  bool full_scale = false;
  for (int i = 1; i < argc; ++i) {
    const std::string arg = argv[i];
    if (arg == "--configs" && i + 1 < argc) {
      configs_dir = argv[++i];
    } else if (arg == "--full") {
      full_scale = true;
    } else {
      std::cerr << "usage: acceptance [--configs <dir>] [--full]\n";
      return 64;
    }
  }

  struct Criterion {
    std::string name;
    std::function<Outcome()> body;
  };
  const std::vector<Criterion> criteria = {
      {"exact identities", check_exact_identities},
      {"eigenstate coherence",
       [&] { return check_eigenstate_coherence(full_scale); }},
      {"level statistics", check_level_statistics},
      {"majorization fractions", check_majorization_fractions},
      {"product-basis floor", check_product_basis_floor},
      {"haar averages", check_haar_averages},
      {"form-factor bound", check_form_factor_bound},
      {"short-time curvature", check_short_time_curvature},
      {"ising recurrences", check_tfim_recurrences},
      {"seeded determinism", [&] { return check_determinism(configs_dir); }},
  };

  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto start = std::chrono::steady_clock::now();
    Outcome outcome;
    try {
      outcome = criteria[i].body();
    } catch (const std::exception& e) {
      outcome = {false, std::string("exception: ") + e.what()};
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
            .count();
    if (!outcome.pass) ++failures;
    std::cout << (outcome.pass ? "[PASS] " : "[FAIL] ") << (i + 1) << "/"
              << criteria.size() << " " << criteria[i].name << ": "
              << outcome.detail << "  [" << fmt(secs) << " s]" << std::endl;
  }
  std::cout << (criteria.size() - failures) << "/" << criteria.size()
            << " criteria passed" << std::endl;
  return failures;
}
