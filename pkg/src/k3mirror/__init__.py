"""Exact lattice computations for mirror symmetry of lattice-polarized K3 surfaces."""

from .exact import (
    IntMatrix,
    hermite_normal_form,
    integer_kernel,
    rational_congruent_diagonalization,
    smith_normal_form,
)
from .lattice import (
    GramLattice,
    LatticeError,
    LatticeVector,
    Signature,
    direct_sum,
    discriminant_group,
    inner_product,
    lattice_E8,
    lattice_K3,
    lattice_U,
    signature,
)
from .mirror import (
    IsometryReport,
    MirrorScenario,
    build_scenario,
    check_conditions,
    compare_lattices,
    duality_check,
    mirror_lattice,
    moduli_dimension,
)
from .periods import (
    BFieldResidue,
    ComplexifiedKahlerClass,
    HyperkahlerTriple,
    PeriodPoint,
    b_field_residue,
    hyperkahler_rotate,
    invert_mirror_map,
    mirror_map,
    mu_pipeline,
    normalize_period,
    picard_lattice,
    zero_b_field,
)
from .sublattice import (
    Embedding,
    HyperbolicPair,
    QuotientPresentation,
    divisor,
    find_admissible_pair,
    is_primitive,
    orthogonal_complement,
    quotient_by_isotropic,
    saturate,
    split_hyperbolic,
)

__version__ = "0.1.0"

__all__ = [
    "b_field_residue",
    "BFieldResidue",
    "build_scenario",
    "check_conditions",
    "compare_lattices",
    "ComplexifiedKahlerClass",
    "direct_sum",
    "discriminant_group",
    "divisor",
    "duality_check",
    "Embedding",
    "find_admissible_pair",
    "GramLattice",
    "hermite_normal_form",
    "HyperbolicPair",
    "hyperkahler_rotate",
    "HyperkahlerTriple",
    "inner_product",
    "integer_kernel",
    "IntMatrix",
    "invert_mirror_map",
    "is_primitive",
    "IsometryReport",
    "lattice_E8",
    "lattice_K3",
    "lattice_U",
    "LatticeError",
    "LatticeVector",
    "mirror_lattice",
    "mirror_map",
    "MirrorScenario",
    "moduli_dimension",
    "mu_pipeline",
    "normalize_period",
    "orthogonal_complement",
    "PeriodPoint",
    "picard_lattice",
    "quotient_by_isotropic",
    "QuotientPresentation",
    "rational_congruent_diagonalization",
    "saturate",
    "Signature",
    "signature",
    "smith_normal_form",
    "split_hyperbolic",
    "zero_b_field",
]
