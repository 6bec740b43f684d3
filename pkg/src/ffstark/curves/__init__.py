from .cover import INF_PLACE, Cover, CoverError, Place, ord_at, place_from_label
from .series import INF, LSeries, PrecisionError
from .funcfield import FFElem, FunctionField
from .kplaces import KPlace, PlaceTooLarge
from .curve import Curve, Divisor
from .rr import RRBoundError, RRSpace, riemann_roch_basis
from .zeta import VecField, ZetaData, geometric_cover, modified_zeta, point_count, zeta_data
