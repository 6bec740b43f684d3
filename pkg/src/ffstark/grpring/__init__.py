from .cyclo import Character, Cyclo, characters, cyclotomic_poly
from .group import AbGroup, EquivariantPolynomial, GroupRingElement, grp_poly_eval, tate_twist_map
from .modules import (
    CharpolyPresentation,
    GModule,
    IdealZG,
    annihilator,
    charpoly_presentation,
    dualize,
    fitting_ideal,
    fitting_ideal_of_matrix,
    grp_det,
    ideal_contains,
    is_free_over_lgroup,
)

__all__ = [
    "AbGroup",
    "Character",
    "CharpolyPresentation",
    "Cyclo",
    "EquivariantPolynomial",
    "GModule",
    "GroupRingElement",
    "IdealZG",
    "annihilator",
    "characters",
    "charpoly_presentation",
    "cyclotomic_poly",
    "dualize",
    "fitting_ideal",
    "fitting_ideal_of_matrix",
    "grp_det",
    "grp_poly_eval",
    "ideal_contains",
    "is_free_over_lgroup",
    "tate_twist_map",
]
