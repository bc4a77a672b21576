"""Collective-variance entanglement quantifier, its mixed-state extensions and depth witnesses."""
from .errors import *  # noqa: F401,F403
from .io import load_state, save_state
from .moments import covariance, expectation, popoviciu_bound, qfi, variance, wy_skew
from .observables import (
    CollectiveOperator,
    OrthoFrame,
    SignVector,
    collective_operator,
    h_coll,
    helmert_frame,
    local_operator,
)
from .quantifiers import (
    OptConfig,
    QuantBracket,
    ThicknessReport,
    f_cr_estimate,
    f_pure,
    f_r,
    f_s_estimate,
    thickness,
)
from .spectral import (
    DiagonalLine,
    LocalObservable,
    SpectralSupport,
    enumerate_diagonal_lines,
    evenly_spaced,
    make_local_observable,
    qubit,
    spectral_support,
)
from .states import (
    DensityState,
    EigenSystem,
    Ensemble,
    PureState,
    depolarized_ghz,
    eigensystem,
    gaussian_grid_state,
    ghz_like,
    ghz_mix,
    line_state,
    product_eigenstate,
    random_density,
    sample,
    sample_k_separable,
)
from .witnesses import (
    WitnessVerdict,
    bound_generic,
    bound_k,
    bound_k_thick,
    bound_table,
    bound_thick,
    certify,
    k_for_f,
    k_of_zeta,
    tradeoff,
    zeta_for_f,
    zeta_of_k,
)

__version__ = "0.1.0"
