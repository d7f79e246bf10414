"""Conditional SIC-POVMs: optimal measurements when part of the state is known."""

from .csic import (
    CsicCertificate,
    DualFrame,
    Povm,
    build_from_difference_set,
    canonical_dual,
    certify_csic,
    diagonal_povm,
    frame_superoperator,
    tetrahedral_sic,
    theoretical_risk,
)
from .diffset import DifferenceSet, certify, equivalent, planar_set, search, singer
from .matspace import (
    BlochVector,
    FrameSuperoperator,
    HermitianBasis,
    Scheme,
    build_basis,
    decompose,
    hs_inner,
    project_part,
    pseudo_inverse,
    superop_eigen,
)

__version__ = "0.1.0"
