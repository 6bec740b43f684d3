from .classgroup import Budget, BudgetExceeded, Presentation, RayClassGroup, class_group, mu_K, ray_factor
from .torsion import (
    DescentReport,
    SUnitLattice,
    TorsionModule,
    level_model,
    s_units,
    torsion_module,
    torsion_module_at,
    unipotent_level,
    verify_torsion_descent,
)
