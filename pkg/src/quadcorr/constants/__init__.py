"""Main-term constants: local densities, Euler products and singular integrals."""

from .archimedean import (
    WindowSpec,
    c_inf_window,
    gamma_inf_nonsplit,
    gamma_inf_quad,
    sigma_inf,
    sigma_inf_quad,
    slab_density,
)
from .local import LocalDensity, LocalProblem, Side, density_cp, local_count, primitive_count
from .series import (
    EulerProduct,
    gamma_jk,
    gamma_nonsplit,
    iwaniec_c,
    iwaniec_cp,
    sigma_hat,
    sigma_p,
    sigma_tilde,
    sigma_tilde_p,
    singular_series,
)
from .tables import NONSPLIT, SPLIT, TwoAdicTable

__all__ = [
    "EulerProduct",
    "LocalDensity",
    "LocalProblem",
    "NONSPLIT",
    "SPLIT",
    "Side",
    "TwoAdicTable",
    "WindowSpec",
    "c_inf_window",
    "density_cp",
    "gamma_inf_nonsplit",
    "gamma_inf_quad",
    "gamma_jk",
    "gamma_nonsplit",
    "iwaniec_c",
    "iwaniec_cp",
    "local_count",
    "primitive_count",
    "sigma_hat",
    "sigma_inf",
    "sigma_inf_quad",
    "sigma_p",
    "sigma_tilde",
    "sigma_tilde_p",
    "singular_series",
    "slab_density",
]
