"""Spectral and scrambling diagnostics for quantum chaos."""

from ._core import (
    QchaosError,
    __version__,
    build_k_local_commuting,
    build_tfim,
    build_xxz_defect,
    c2,
    c_l1,
    c_rel,
    cgp,
    cgp_commutator_form,
    dephase,
    eigh,
    eigenstate_majorization_fraction,
    evolve,
    goe_c2_analytic,
    goe_crel_prediction,
    haar_avg_cgp,
    haar_avg_otoc_closed_form,
    majorizes,
    min_product_basis_c2,
    otoc_cgp_decomposition,
    pr2,
    sample_goe,
    sample_gue,
    sample_haar_unitary,
    schmidt_squared,
    sector_states,
    sff_r4_spectrum,
    short_time_cgp_curvature,
    sigma_z_site_diagonal,
    squared_commutator,
)

__all__ = [
    "QchaosError",
    "__version__",
    "build_k_local_commuting",
    "build_tfim",
    "build_xxz_defect",
    "c2",
    "c_l1",
    "c_rel",
    "cgp",
    "cgp_commutator_form",
    "dephase",
    "eigh",
    "eigenstate_majorization_fraction",
    "evolve",
    "goe_c2_analytic",
    "goe_crel_prediction",
    "haar_avg_cgp",
    "haar_avg_otoc_closed_form",
    "majorizes",
    "min_product_basis_c2",
    "otoc_cgp_decomposition",
    "pr2",
    "sample_goe",
    "sample_gue",
    "sample_haar_unitary",
    "schmidt_squared",
    "sector_states",
    "sff_r4_spectrum",
    "short_time_cgp_curvature",
    "sigma_z_site_diagonal",
    "squared_commutator",
]
