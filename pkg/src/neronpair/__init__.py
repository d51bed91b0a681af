"""Exact computations around component groups, their pairings and cup products."""

from .fgab import (
    BilinearPairing,
    FpAbGroup,
    GroupHom,
    QModZ,
    cokernel_group,
    ext1_Z,
    is_perfect,
    pairing_adjoint,
    pontryagin_dual,
    primary_decomposition,
)
from .linalg import (
    IntegerMatrix,
    SmithDecomposition,
    hermite_normal_form,
    smith_normal_form,
    solve_integer,
)

__version__ = "0.1.0"
