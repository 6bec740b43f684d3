from .operator import (
    CartierError,
    CartierMatrix,
    DifferentialSpace,
    FixedSpace,
    cartier_apply,
    cartier_matrix,
    coordinates,
    dlog,
    dlog_witness,
    fixed_space,
    hasse_witt,
    omega_basis,
    verify_fixed,
)
from .verify import (
    compare_with_torsion,
    fixed_space_module,
    jordan_type,
    verify_deuring_shafarevich,
    verify_nakajima,
)
