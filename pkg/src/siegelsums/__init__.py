"""Exact and numeric toolkit for symplectic Kloosterman sums, Salie and
Gauss sums, Bessel kernels, Dirichlet L-values, and the Kitaoka-Petersson
spectral identities at prime level."""

from .matcore import (
    GaussianInt,
    HalfIntegralForm,
    IntMat2,
    SymRat2,
    aut_count,
    elementary_divisors,
    gaussian_totient,
    gl2_equivalence,
    is_go2,
    kronecker,
    minkowski_reduce,
)
from .sp4 import (
    BottomPair,
    SymplecticCompletion,
    complete_to_symplectic,
    enumerate_bottom_cosets,
    is_bottom_pair,
    is_symplectic,
)
from .expsums import (
    SumValue,
    congruence_count,
    gauss_sum,
    kloosterman,
    kloosterman_factored,
    kloosterman_pI,
    salie,
    twisted_average,
)
from .kernels import (
    BesselOrder,
    KernelArg,
    TruncationBox,
    bessel_j,
    script_j,
    tail_diagnostic,
    truncation_set,
    weight_w,
)
from .lfun import (
    FundamentalDiscriminant,
    LValue,
    dirichlet_l,
    r_coeff,
    zeta,
    zeta_gaussian,
)
from .petersson import (
    HCoefficient,
    NormalizationConstant,
    ResidueReport,
    SpectralParams,
    h_fourier,
    leading_coeff_fit,
    main_term_residue,
    spectral_gram,
)

__version__ = "0.1.0"
