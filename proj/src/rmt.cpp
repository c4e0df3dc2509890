#include "qchaos/rmt.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>

#include "qchaos/linalg.hpp"
#include "qchaos/scrambling.hpp"

namespace qchaos {
namespace {

struct Welford {
  double mean = 0.0;
  double m2 = 0.0;
  long n = 0;

  void add(double x) {
    ++n;
    const double delta = x - mean;
    mean += delta / static_cast<double>(n);
    m2 += delta * (x - mean);
  }

  double stderr_of_mean() const {
    return n > 1 ? std::sqrt(m2 / (static_cast<double>(n) *
                                   static_cast<double>(n - 1)))
                 : 0.0;
  }

  McEstimate estimate() const { return {mean, stderr_of_mean(), n}; }
};

void require_min_dim(int d, const char* what) {
  if (d < 2)
    throw ValidationError(std::string(what) + ": dimension must be >= 2, got " +
                          std::to_string(d));
}

void check_unit_phases(const Vector& phases, const char* what) {
  for (Eigen::Index j = 0; j < phases.size(); ++j) {
    const double dev = std::abs(std::abs(phases[j]) - 1.0);
    if (!(dev <= tol::eigenphase))
      throw ValidationError(std::string(what) + ": phase " +
                            std::to_string(j) + " off the unit circle by " +
                            std::to_string(dev));
  }
}

/// In-place unnormalized Walsh-Hadamard transform (length must be 2^n).
void walsh_transform(Vector& f) {
  const Eigen::Index d = f.size();
  for (Eigen::Index len = 1; len < d; len <<= 1) {
    for (Eigen::Index i = 0; i < d; i += 2 * len) {
      for (Eigen::Index j = i; j < i + len; ++j) {
        const Complex a = f[j];
        const Complex b = f[j + len];
        f[j] = a + b;
        f[j + len] = a - b;
      }
    }
  }
}

/// x-basis eigenphases of the commuting k-local family on L sites.
RealVector klocal_eigenphases(int L, int k) {
  if (k < 1 || k > L)
    throw ValidationError("k-local family: need 1 <= k <= L, got k = " +
                          std::to_string(k) + ", L = " + std::to_string(L));
  if (L > 14)
    throw CapacityError("k-local family: L = " + std::to_string(L) +
                        " exceeds the supported maximum of 14");
  const Eigen::Index d = Eigen::Index(1) << L;
  RealVector eps = RealVector::Zero(d);
  for (int w = 0; w + k <= L; ++w) {
    const std::uint32_t mask = ((1u << k) - 1u) << w;
    for (Eigen::Index b = 0; b < d; ++b)
      eps[b] += (__builtin_popcount(static_cast<std::uint32_t>(b) & mask) & 1)
                    ? -1.0
                    : 1.0;
  }
  return eps;
}

/// Richardson extrapolation of D(h) = 2 cgp(h) / h^2 over the fixed step
/// schedule, halved. cgp is even in t with cgp(0) = 0, so D(h) has only
/// even-order error terms and two halvings remove them through O(h^4).
double richardson_curvature(const std::function<double(double)>& cgp_at) {
  const double h1 = 1e-2, h2 = 5e-3, h3 = 2.5e-3;
  const double d1 = 2.0 * cgp_at(h1) / (h1 * h1);
  const double d2 = 2.0 * cgp_at(h2) / (h2 * h2);
  const double d3 = 2.0 * cgp_at(h3) / (h3 * h3);
  const double r12 = (4.0 * d2 - d1) / 3.0;
  const double r23 = (4.0 * d3 - d2) / 3.0;
  return (16.0 * r23 - r12) / 15.0 / 2.0;
}

}  // namespace

HermitianOperator sample_goe(int d, RandomStream& rng) {
  require_min_dim(d, "sample_goe");
  const double diag_sd = std::sqrt(2.0 / static_cast<double>(d));
  const double off_sd = std::sqrt(1.0 / static_cast<double>(d));
  RealMatrix m(d, d);
  for (int j = 0; j < d; ++j) {
    m(j, j) = diag_sd * rng.gaussian();
    for (int k = j + 1; k < d; ++k) {
      const double x = off_sd * rng.gaussian();
      m(j, k) = x;
      m(k, j) = x;
    }
  }
  return HermitianOperator(m.cast<Complex>());
}

HermitianOperator sample_gue(int d, RandomStream& rng) {
  require_min_dim(d, "sample_gue");
  const double diag_sd = std::sqrt(1.0 / static_cast<double>(d));
  const double off_sd = std::sqrt(1.0 / (2.0 * static_cast<double>(d)));
  Matrix m(d, d);
  for (int j = 0; j < d; ++j) {
    m(j, j) = Complex(diag_sd * rng.gaussian(), 0.0);
    for (int k = j + 1; k < d; ++k) {
      const double re = off_sd * rng.gaussian();
      const double im = off_sd * rng.gaussian();
      m(j, k) = Complex(re, im);
      m(k, j) = Complex(re, -im);
    }
  }
  return HermitianOperator(std::move(m));
}

UnitaryOperator sample_haar_unitary(int d, RandomStream& rng) {
  require_min_dim(d, "sample_haar_unitary");
  Matrix a(d, d);
  for (int k = 0; k < d; ++k)
    for (int i = 0; i < d; ++i)
      a(i, k) = Complex(rng.gaussian(), rng.gaussian());
  const Eigen::HouseholderQR<Matrix> qr(a);
  Matrix q = qr.householderQ();
  const Matrix r = qr.matrixQR();
  // Fixing the R-diagonal phases makes the distribution exactly Haar
  // rather than merely invariant under the QR gauge choice.
  for (int j = 0; j < d; ++j) {
    const double mag = std::abs(r(j, j));
    if (mag > 0.0) q.col(j) *= r(j, j) / mag;
  }
  return UnitaryOperator(std::move(q));
}

Vector sample_diagonal_phases(int d, RandomStream& rng) {
  require_min_dim(d, "sample_diagonal_phases");
  Vector v(d);
  for (int j = 0; j < d; ++j) v[j] = std::polar(1.0, rng.uniform_phase());
  return v;
}

SpacingStatistics spacing_statistics(const RealVector& ascending_levels,
                                     int num_bins) {
  const Eigen::Index d = ascending_levels.size();
  if (d < 50)
    throw ValidationError("spacing_statistics: " + std::to_string(d) +
                          " levels, need at least 50");
  if (num_bins < 1)
    throw ValidationError("spacing_statistics: num_bins must be >= 1");
  for (Eigen::Index i = 0; i + 1 < d; ++i)
    if (ascending_levels[i] > ascending_levels[i + 1])
      throw ValidationError("spacing_statistics: levels not ascending at " +
                            std::to_string(i));

  // Central 80%: drop floor(d/10) levels from each edge.
  const Eigen::Index lo = d / 10;
  const Eigen::Index hi = (9 * d) / 10;
  const Eigen::Index m = hi - lo;

  std::vector<double> spacings(static_cast<std::size_t>(m - 1));
  double mean_spacing = 0.0;
  for (Eigen::Index i = 0; i + 1 < m; ++i) {
    spacings[static_cast<std::size_t>(i)] =
        ascending_levels[lo + i + 1] - ascending_levels[lo + i];
    mean_spacing += spacings[static_cast<std::size_t>(i)];
  }
  mean_spacing /= static_cast<double>(spacings.size());
  if (!(mean_spacing > 0.0))
    throw ValidationError(
        "spacing_statistics: central window is fully degenerate");

  SpacingStatistics out;
  out.normalized_spacings.reserve(spacings.size());
  for (double s : spacings) out.normalized_spacings.push_back(s / mean_spacing);

  // Fully degenerate neighbours carry no ratio information and are skipped.
  double ratio_sum = 0.0;
  for (std::size_t i = 0; i + 1 < spacings.size(); ++i) {
    const double mx = std::max(spacings[i], spacings[i + 1]);
    if (mx == 0.0) continue;
    const double r = std::min(spacings[i], spacings[i + 1]) / mx;
    out.gap_ratios.push_back(r);
    ratio_sum += r;
  }
  if (out.gap_ratios.empty())
    throw ValidationError("spacing_statistics: no usable gap ratios");
  out.mean_ratio = ratio_sum / static_cast<double>(out.gap_ratios.size());

  const double smax = *std::max_element(out.normalized_spacings.begin(),
                                        out.normalized_spacings.end());
  const double width = smax / static_cast<double>(num_bins);
  out.bin_edges.resize(static_cast<std::size_t>(num_bins) + 1);
  for (int b = 0; b <= num_bins; ++b)
    out.bin_edges[static_cast<std::size_t>(b)] = width * b;
  out.densities.assign(static_cast<std::size_t>(num_bins), 0.0);
  if (width > 0.0) {
    for (double s : out.normalized_spacings) {
      const int b = std::min(num_bins - 1, static_cast<int>(s / width));
      out.densities[static_cast<std::size_t>(b)] += 1.0;
    }
    const double norm =
        static_cast<double>(out.normalized_spacings.size()) * width;
    for (double& v : out.densities) v /= norm;
  }
  return out;
}

SpacingStatistics spacing_statistics(const SpectralDecomposition& spec,
                                     int num_bins) {
  return spacing_statistics(spec.eigenvalues, num_bins);
}

McEstimate mean_gap_ratio(const EnsembleSpec& ensemble) {
  if (ensemble.kind != EnsembleKind::GOE && ensemble.kind != EnsembleKind::GUE)
    throw ValidationError("mean_gap_ratio: ensemble must be GOE or GUE");
  Welford acc;
  for (long i = 0; i < ensemble.samples; ++i) {
    RandomStream rng = RandomStream::for_sample(ensemble.master_seed,
                                                static_cast<std::uint64_t>(i));
    const HermitianOperator h = ensemble.kind == EnsembleKind::GOE
                                    ? sample_goe(ensemble.dimension, rng)
                                    : sample_gue(ensemble.dimension, rng);
    acc.add(spacing_statistics(eigvalsh(h)).mean_ratio);
  }
  return acc.estimate();
}

McEstimate poisson_mean_gap_ratio(int d, long spectra,
                                  std::uint64_t master_seed) {
  if (spectra < 1)
    throw ValidationError("poisson_mean_gap_ratio: need at least one spectrum");
  Welford acc;
  for (long i = 0; i < spectra; ++i) {
    RandomStream rng = RandomStream::for_sample(master_seed,
                                                static_cast<std::uint64_t>(i));
    RealVector levels(d);
    for (int j = 0; j < d; ++j) levels[j] = rng.uniform();
    std::sort(levels.data(), levels.data() + d);
    acc.add(spacing_statistics(levels).mean_ratio);
  }
  return acc.estimate();
}

double sff_r4_spectrum(const RealVector& eigenvalues, double t) {
  const Eigen::Index n = eigenvalues.size();
  const double d = static_cast<double>(n);
  Complex z(0.0, 0.0), p2(0.0, 0.0);
  for (Eigen::Index j = 0; j < n; ++j) {
    const Complex e = std::polar(1.0, -eigenvalues[j] * t);
    z += e;
    p2 += e * e;
  }
  const double z2 = std::norm(z);
  // Inclusion-exclusion over index coincidences reduces the pairwise-
  // distinct quadruple sum to the power sums z and p2.
  return z2 * z2 - 2.0 * (p2 * std::conj(z) * std::conj(z)).real() -
         4.0 * d * z2 + std::norm(p2) + 2.0 * d * d + 8.0 * z2 - 6.0 * d;
}

SffEstimate sff_r4(const EnsembleSpec& ensemble, const TimeGrid& times) {
  if (ensemble.kind != EnsembleKind::GOE && ensemble.kind != EnsembleKind::GUE)
    throw ValidationError("sff_r4: ensemble must be GOE or GUE");
  const std::vector<double> ts = times.linspace();
  std::vector<Welford> acc(ts.size());
  for (long i = 0; i < ensemble.samples; ++i) {
    RandomStream rng = RandomStream::for_sample(ensemble.master_seed,
                                                static_cast<std::uint64_t>(i));
    const HermitianOperator h = ensemble.kind == EnsembleKind::GOE
                                    ? sample_goe(ensemble.dimension, rng)
                                    : sample_gue(ensemble.dimension, rng);
    const RealVector vals = eigvalsh(h);
    for (std::size_t k = 0; k < ts.size(); ++k)
      acc[k].add(sff_r4_spectrum(vals, ts[k]));
  }
  SffEstimate out;
  out.times = ts;
  out.r4_values.reserve(ts.size());
  out.standard_errors.reserve(ts.size());
  const double d = static_cast<double>(ensemble.dimension);
  for (std::size_t k = 0; k < ts.size(); ++k) {
    out.r4_values.push_back(acc[k].mean);
    out.standard_errors.push_back(acc[k].stderr_of_mean());
    if (ts[k] == 0.0) {
      const double expected = d * (d - 1.0) * (d - 2.0) * (d - 3.0);
      if (std::abs(acc[k].mean - expected) > 1e-9 * d * d * d * d)
        throw ValidationError("sff_r4: value at t = 0 deviates from " +
                              std::to_string(expected));
    }
  }
  return out;
}

std::vector<CgpBoundRow> gue_cgp_bound_check(const EnsembleSpec& ensemble,
                                             const OrthonormalBasis& b,
                                             const TimeGrid& times) {
  if (ensemble.kind != EnsembleKind::GUE)
    throw ValidationError("gue_cgp_bound_check: requires a GUE ensemble");
  const Eigen::Index d = ensemble.dimension;
  if (b.dim() != d)
    throw DimensionError("gue_cgp_bound_check: basis dimension " +
                         std::to_string(b.dim()) + " vs ensemble dimension " +
                         std::to_string(d));
  const std::vector<double> ts = times.linspace();
  const double dd = static_cast<double>(d);
  const double denom = dd * (dd + 1.0) * (dd + 2.0) * (dd + 3.0);

  std::vector<Welford> lhs(ts.size()), rhs(ts.size()), disc(ts.size());
  Vector phases(d);
  for (long i = 0; i < ensemble.samples; ++i) {
    RandomStream rng = RandomStream::for_sample(ensemble.master_seed,
                                                static_cast<std::uint64_t>(i));
    const SpectralDecomposition spec =
        eigh(sample_gue(static_cast<int>(d), rng));
    const Matrix coords =
        detail::basis_coordinates(b, spec.eigenvectors.matrix());
    for (std::size_t k = 0; k < ts.size(); ++k) {
      for (Eigen::Index j = 0; j < d; ++j)
        phases[j] = std::polar(1.0, -spec.eigenvalues[j] * ts[k]);
      const Matrix u_b = (coords * phases.asDiagonal()) * coords.adjoint();
      const RealMatrix x = u_b.cwiseAbs2();
      const double full = x.squaredNorm();
      const double diag_only = x.diagonal().squaredNorm();
      lhs[k].add(1.0 - full / dd);
      rhs[k].add(1.0 - sff_r4_spectrum(spec.eigenvalues, ts[k]) / denom);
      disc[k].add((full - diag_only) / dd);
    }
  }

  std::vector<CgpBoundRow> rows;
  rows.reserve(ts.size());
  for (std::size_t k = 0; k < ts.size(); ++k) {
    CgpBoundRow row;
    row.t = ts[k];
    row.lhs_mean = lhs[k].mean;
    row.lhs_stderr = lhs[k].stderr_of_mean();
    row.rhs = rhs[k].mean;
    row.rhs_stderr = rhs[k].stderr_of_mean();
    row.gap = row.rhs - row.lhs_mean;
    const double sigma = std::sqrt(row.lhs_stderr * row.lhs_stderr +
                                   row.rhs_stderr * row.rhs_stderr);
    row.holds = row.lhs_mean <= row.rhs + 3.0 * sigma;
    row.diag_discrepancy = disc[k].mean;
    if (!row.holds)
      throw ValidationError("gue_cgp_bound_check: bound violated at t = " +
                            std::to_string(row.t) + " (gap " +
                            std::to_string(row.gap) + ", sigma " +
                            std::to_string(sigma) + ")");
    rows.push_back(row);
  }
  return rows;
}

double haar_avg_otoc_closed_form(const Vector& v_phases,
                                 const Vector& w_phases, int d) {
  if (v_phases.size() != d || w_phases.size() != d)
    throw DimensionError("haar_avg_otoc_closed_form: phase lists of length " +
                         std::to_string(v_phases.size()) + " and " +
                         std::to_string(w_phases.size()) +
                         " for dimension " + std::to_string(d));
  require_min_dim(d, "haar_avg_otoc_closed_form");
  check_unit_phases(v_phases, "haar_avg_otoc_closed_form");
  check_unit_phases(w_phases, "haar_avg_otoc_closed_form");
  const double dd = static_cast<double>(d);
  const double sv = std::norm(v_phases.sum()) - dd;
  const double sw = std::norm(w_phases.sum()) - dd;
  return 2.0 * (dd - 1.0) / (dd + 1.0) +
         2.0 / (dd * dd * (dd * dd - 1.0)) * sv * sw -
         2.0 / (dd * (dd + 1.0)) * (sv + sw);
}

double haar_avg_cgp(int d) {
  require_min_dim(d, "haar_avg_cgp");
  return (static_cast<double>(d) - 1.0) / (static_cast<double>(d) + 1.0);
}

CurvatureReport short_time_cgp_curvature(const HermitianOperator& h,
                                         const OrthonormalBasis& b) {
  const Eigen::Index d = h.dim();
  if (b.dim() != d)
    throw DimensionError("short_time_cgp_curvature: basis dimension " +
                         std::to_string(b.dim()) + " vs operator dimension " +
                         std::to_string(d));
  const double dd = static_cast<double>(d);

  Matrix hb;
  if (b.is_identity())
    hb = h.matrix();
  else
    hb = b.matrix().adjoint() * h.matrix() * b.matrix();
  const double frob2 = hb.squaredNorm();
  const double diag2 = hb.diagonal().real().squaredNorm();
  const double analytic = (frob2 - diag2) / dd;
  const double trh2_over_d = frob2 / dd;  // basis-independent

  const SpectralDecomposition spec = eigh(h);
  const RealMatrix x =
      overlap_matrix(b, spec.basis()).matrix();
  RealMatrix a = RealMatrix::Identity(d, d) - x.transpose() * x;
  a = 0.5 * (a + a.transpose().eval());
  Eigen::SelfAdjointEigenSolver<RealMatrix> es(a, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success)
    throw ConvergenceError("short_time_cgp_curvature: q_bound eigensolve");
  double q = std::max(std::abs(es.eigenvalues().minCoeff()),
                      std::abs(es.eigenvalues().maxCoeff()));
  if (q > 1.0 + 1e-10)
    throw ValidationError("short_time_cgp_curvature: q_bound = " +
                          std::to_string(q) + " escapes [0, 1]");
  q = std::clamp(q, 0.0, 1.0);
  if (analytic > trh2_over_d * q + 1e-10 * std::max(1.0, trh2_over_d))
    throw ValidationError(
        "short_time_cgp_curvature: variance bound chain violated (" +
        std::to_string(analytic) + " > " + std::to_string(trh2_over_d * q) +
        ")");

  const double fd = richardson_curvature(
      [&](double step) { return cgp(evolve(spec, step), b); });

  CurvatureReport report;
  report.analytic = analytic;
  report.finite_difference = fd;
  if (analytic > 1e-12 * std::max(1.0, trh2_over_d))
    report.kappa = fd / analytic;
  report.q_bound = q;
  return report;
}

double klocal_cgp(int L, int k, double t) {
  const RealVector eps = klocal_eigenphases(L, k);
  const Eigen::Index d = eps.size();
  Vector f(d);
  for (Eigen::Index b = 0; b < d; ++b) f[b] = std::polar(1.0, -eps[b] * t);
  walsh_transform(f);
  f /= static_cast<double>(d);
  double fourth = 0.0;
  for (Eigen::Index r = 0; r < d; ++r) {
    const double p = std::norm(f[r]);
    fourth += p * p;
  }
  return 1.0 - fourth;
}

std::vector<KlocalScanRow> klocal_short_time_scan(
    const std::vector<int>& L_range, int k) {
  if (L_range.empty())
    throw ValidationError("klocal_short_time_scan: empty L range");
  const int l_min = *std::min_element(L_range.begin(), L_range.end());
  if (k > l_min)
    throw ValidationError("klocal_short_time_scan: k = " + std::to_string(k) +
                          " exceeds the smallest chain length " +
                          std::to_string(l_min));
  std::vector<KlocalScanRow> rows;
  rows.reserve(L_range.size());
  for (int L : L_range) {
    const RealVector eps = klocal_eigenphases(L, k);
    KlocalScanRow row;
    row.L = L;
    row.k = k;
    row.trace_h2 = eps.squaredNorm();
    row.finite_difference = richardson_curvature(
        [&](double step) { return klocal_cgp(L, k, step); });
    const double norm = static_cast<double>(L - k + 1);
    row.normalized = row.finite_difference / (norm * norm);
    rows.push_back(row);
  }
  return rows;
}

}  // namespace qchaos
