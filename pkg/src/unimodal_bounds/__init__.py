"""Sharp bounds on deviations from the mode of unimodal distributions."""

from .asymmetric import (
    classify_region_first,
    classify_region_second,
    general_unimodal_bound,
    interval_bound,
    markov_asym_bound,
    markov_asym_extremal,
    psi_semenikhin,
    semenikhin_bound,
    semenikhin_extremal,
)
from .core import (
    BoundResult,
    DeviationInterval,
    MomentKind,
    MomentSpec,
    Region,
    SymmetricUniformMixture,
    canonicalize,
    chebyshev_bound,
    gauss_bound,
    gauss_extremal,
    markov_gauss_bound,
    markov_gauss_extremal,
    normalize,
)
from .generalized import VolkovInstance, WeightFunction, chi, find_xv, sellke_bound, volkov_check
from .verify import OracleConfig, mixture_moment, mixture_tail, sample_mixture, sharpness_report, two_atom_oracle

__all__ = [name for name in dir() if not name.startswith("_")]
