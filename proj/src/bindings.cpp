#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "qchaos/coherence.hpp"
#include "qchaos/linalg.hpp"
#include "qchaos/majorization.hpp"
#include "qchaos/models.hpp"
#include "qchaos/rmt.hpp"
#include "qchaos/rng.hpp"
#include "qchaos/scrambling.hpp"
#include "qchaos/version.hpp"

namespace py = pybind11;
using namespace qchaos;

namespace {

OrthonormalBasis as_basis(const Matrix& b) {
  return OrthonormalBasis(UnitaryOperator(b));
}

DensityMatrix as_density(const Matrix& rho) {
  return DensityMatrix::validated(rho);
}

py::dict decomposition_dict(const OtocDecomposition& d) {
  py::dict out;
  out["total"] = d.total;
  out["cgp_part"] = d.cgp_part;
  out["offdiag_part"] = d.offdiag_part;
  out["residual"] = d.residual;
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Spectral and scrambling diagnostics for quantum chaos";
  m.attr("__version__") = version();

  py::register_exception<Error>(m, "QchaosError", PyExc_RuntimeError);

  // Linear algebra
  m.def(
      "eigh",
      [](const Matrix& h) {
        const SpectralDecomposition spec = eigh(HermitianOperator(h));
        return py::make_tuple(RealVector(spec.eigenvalues),
                              Matrix(spec.eigenvectors.matrix()));
      },
      py::arg("h"),
      "Spectral decomposition with deterministic phase and ordering; returns "
      "(eigenvalues, eigenvectors).");
  m.def(
      "evolve",
      [](const Matrix& h, double t) {
        return Matrix(evolve(eigh(HermitianOperator(h)), t).matrix());
      },
      py::arg("h"), py::arg("t"), "Unitary exp(-i h t) as a dense matrix.");
  m.def(
      "dephase",
      [](const Matrix& rho, const Matrix& basis) {
        return Matrix(dephase(as_density(rho), as_basis(basis)).matrix());
      },
      py::arg("rho"), py::arg("basis"),
      "Projection onto the diagonal in the given orthonormal basis.");
  m.def(
      "schmidt_squared",
      [](const Vector& psi, int dim_a, int dim_b) {
        return RealVector(
            schmidt_squared(PureState(psi), {dim_a, dim_b}).probabilities());
      },
      py::arg("psi"), py::arg("dim_a"), py::arg("dim_b"),
      "Squared Schmidt coefficients for a bipartite pure state.");

  // Models
  m.def(
      "build_xxz_defect",
      [](int L, int n_up, int delta, double omega, double epsilon_delta,
         double j_xy, double j_z) {
        XxzDefectParams p;
        p.L = L;
        p.n_up = n_up;
        p.delta = delta;
        p.omega = omega;
        p.epsilon_delta = epsilon_delta;
        p.j_xy = j_xy;
        p.j_z = j_z;
        return RealMatrix(build_xxz_defect(p).matrix().real());
      },
      py::arg("L"), py::arg("n_up"), py::arg("delta"), py::arg("omega") = 0.0,
      py::arg("epsilon_delta") = 0.5, py::arg("j_xy") = 1.0,
      py::arg("j_z") = 0.5,
      "Spin-1/2 XXZ chain with a single on-site defect, in the fixed "
      "magnetization sector.");
  m.def(
      "sector_states",
      [](int L, int n_up) { return sector_basis(L, n_up).states; },
      py::arg("L"), py::arg("n_up"),
      "Computational-basis bitstrings spanning the magnetization sector, "
      "ascending.");
  m.def(
      "build_tfim",
      [](int L, double g, double h) {
        TfimParams p;
        p.L = L;
        p.g = g;
        p.h = h;
        return RealMatrix(build_tfim(p).matrix().real());
      },
      py::arg("L"), py::arg("g") = 1.0, py::arg("h") = 0.0,
      "Transverse-field Ising chain with optional longitudinal field, open "
      "boundaries.");
  m.def(
      "build_k_local_commuting",
      [](int L, int k) {
        return RealMatrix(build_k_local_commuting(L, k).matrix().real());
      },
      py::arg("L"), py::arg("k"),
      "Sum of sigma_z strings on k consecutive sites; diagonal and mutually "
      "commuting.");
  m.def("sigma_z_site_diagonal", &sigma_z_site_diagonal, py::arg("L"),
        py::arg("site"),
        "Diagonal of sigma_z on one site of an L-qubit register.");

  // Coherence measures
  m.def(
      "c2",
      [](const Matrix& rho, const Matrix& basis) {
        return c2(as_density(rho), as_basis(basis));
      },
      py::arg("rho"), py::arg("basis"),
      "Squared l2 distance from the dephased state.");
  m.def(
      "c_rel",
      [](const Matrix& rho, const Matrix& basis) {
        return c_rel(as_density(rho), as_basis(basis));
      },
      py::arg("rho"), py::arg("basis"),
      "Relative entropy of coherence in nats.");
  m.def(
      "c_l1",
      [](const Matrix& rho, const Matrix& basis) {
        return c_l1(as_density(rho), as_basis(basis));
      },
      py::arg("rho"), py::arg("basis"), "l1 off-diagonal coherence.");
  m.def(
      "pr2",
      [](const Vector& psi, const Matrix& basis) {
        return pr2(PureState(psi), as_basis(basis));
      },
      py::arg("psi"), py::arg("basis"),
      "Second participation ratio of the state's basis populations.");
  m.def(
      "min_product_basis_c2",
      [](const Vector& psi, int dim_a, int dim_b) {
        return min_product_basis_c2(PureState(psi), {dim_a, dim_b});
      },
      py::arg("psi"), py::arg("dim_a"), py::arg("dim_b"),
      "Minimum of c2 over product bases, from the Schmidt spectrum.");
  m.def(
      "goe_crel_prediction",
      [](int d) { return goe_crel_prediction(d, LogBase::nats); },
      py::arg("d"), "ln(0.48 d) reference value for chaotic eigenstates.");
  m.def("goe_c2_analytic", &goe_c2_analytic, py::arg("d"),
        "1 - 3/(d+2) reference value for chaotic eigenstates.");

  // Majorization
  m.def(
      "majorizes",
      [](const RealVector& w, const RealVector& v) {
        return majorizes(ProbabilityVector(w), ProbabilityVector(v)).majorized;
      },
      py::arg("w"), py::arg("v"),
      "True when w majorizes v (sorted partial sums dominate).");
  m.def(
      "eigenstate_majorization_fraction",
      [](const RealMatrix& h_int, const RealMatrix& h_cha, const Matrix& basis,
         double window) {
        return eigenstate_majorization_fraction(
            HermitianOperator(h_int.cast<Complex>()),
            HermitianOperator(h_cha.cast<Complex>()), as_basis(basis), window);
      },
      py::arg("h_integrable"), py::arg("h_chaotic"), py::arg("basis"),
      py::arg("window") = 1.0,
      "Fraction of energy-paired eigenstates whose integrable populations "
      "majorize the chaotic ones.");

  // Scrambling
  m.def(
      "cgp",
      [](const Matrix& u, const Matrix& basis) {
        return cgp(UnitaryOperator(u), as_basis(basis));
      },
      py::arg("u"), py::arg("basis"),
      "Coherence-generating power of a unitary over the basis ensemble.");
  m.def(
      "cgp_commutator_form",
      [](const Matrix& u, const Matrix& basis) {
        return cgp_commutator_form(UnitaryOperator(u), as_basis(basis));
      },
      py::arg("u"), py::arg("basis"),
      "Same quantity evaluated through projector commutators.");
  m.def(
      "squared_commutator",
      [](const Matrix& v, const Matrix& w, const Matrix& u_t) {
        return squared_commutator(v, w, UnitaryOperator(u_t));
      },
      py::arg("v"), py::arg("w"), py::arg("u_t"),
      "Normalized ||[V, W(t)]||^2 with W(t) = U^dag W U.");
  m.def(
      "otoc_cgp_decomposition",
      [](const Matrix& v_basis, const Vector& v_phases, const Matrix& w_basis,
         const Vector& w_phases, const Matrix& u_t) {
        return decomposition_dict(otoc_cgp_decomposition(
            UnitaryEigensystem(as_basis(v_basis), v_phases),
            UnitaryEigensystem(as_basis(w_basis), w_phases),
            UnitaryOperator(u_t)));
      },
      py::arg("v_basis"), py::arg("v_phases"), py::arg("w_basis"),
      py::arg("w_phases"), py::arg("u_t"),
      "Split of the unitary-pair squared commutator into a basis-diagonal "
      "part and an off-diagonal remainder.");
  m.def("haar_avg_cgp", &haar_avg_cgp, py::arg("d"),
        "(d-1)/(d+1), the Haar mean of the coherence-generating power.");
  m.def(
      "haar_avg_otoc_closed_form",
      [](const Vector& v, const Vector& w, int d) {
        return haar_avg_otoc_closed_form(v, w, d);
      },
      py::arg("v"), py::arg("w"), py::arg("d"),
      "Haar average of the squared commutator of two fixed-spectrum "
      "unitaries.");

  // Random matrix utilities
  m.def(
      "sample_goe",
      [](int d, std::uint64_t seed) {
        RandomStream rng(seed);
        return RealMatrix(sample_goe(d, rng).matrix().real());
      },
      py::arg("d"), py::arg("seed"),
      "One GOE draw with E[Tr H^2] = d + 1.");
  m.def(
      "sample_gue",
      [](int d, std::uint64_t seed) {
        RandomStream rng(seed);
        return Matrix(sample_gue(d, rng).matrix());
      },
      py::arg("d"), py::arg("seed"), "One GUE draw with E[Tr H^2] = d.");
  m.def(
      "sample_haar_unitary",
      [](int d, std::uint64_t seed) {
        RandomStream rng(seed);
        return Matrix(sample_haar_unitary(d, rng).matrix());
      },
      py::arg("d"), py::arg("seed"),
      "Haar-distributed unitary via phase-fixed QR of a Ginibre matrix.");
  m.def("sff_r4_spectrum", &sff_r4_spectrum, py::arg("eigenvalues"),
        py::arg("t"),
        "Fourth-order spectral form factor sum over distinct index "
        "quadruples.");
  m.def(
      "short_time_cgp_curvature",
      [](const Matrix& h, const Matrix& basis) {
        const CurvatureReport rep =
            short_time_cgp_curvature(HermitianOperator(h), as_basis(basis));
        py::dict out;
        out["analytic"] = rep.analytic;
        out["finite_difference"] = rep.finite_difference;
        out["kappa"] = rep.kappa ? py::cast(*rep.kappa) : py::none();
        out["q_bound"] = rep.q_bound;
        return out;
      },
      py::arg("h"), py::arg("basis"),
      "Leading t^2 coefficient of the coherence-generating power, analytic "
      "and finite-difference routes.");
}
