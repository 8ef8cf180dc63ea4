"""Division chains over normed domains, skew Laurent series and elementary matrix reduction."""

from .division import (
    ChainStep,
    DivisionChain,
    division_chain,
    euclid_div,
    gcd_via_chain,
    ideal_generator,
)
from .errors import (
    AlgebraError,
    ChainBoundError,
    DivisionByZeroError,
    DomainMismatchError,
    GcdUndefinedError,
    NotInvertibleError,
    ParseError,
    PrecisionError,
)
from .laurent import (
    LiftedChain,
    LiftStep,
    SeriesDivision,
    SkewLaurentRing,
    SkewLaurentSeries,
    lift_chain,
    phi_x,
    psi,
    psi_left,
    series_divide_left,
    series_divide_right,
    series_invert_unit,
    series_mul,
)
from .matrices import (
    ElementaryOp,
    MatrixOverRing,
    ReductionCertificate,
    apply_elementary,
    reduce_matrix,
    verify_certificate,
)
from .rings import (
    ZZ,
    ZZI,
    Automorphism,
    Domain,
    GaussianIntegers,
    IntegerRing,
    PolynomialsModP,
    RingElement,
    canonical_associate,
    divides,
    get_domain,
    norm,
    ring_add,
    ring_mul,
    sigma_power,
)
from .ringspec import parse_ring_spec, ring_spec

__version__ = "0.1.0"
