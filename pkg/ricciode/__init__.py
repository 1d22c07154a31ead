# Project configuration, particularly for logging.

import logmuse

from ._version import __version__
from .ansatz_family import ParamSet, classify, symbolic_ricci
from .catalog import ClosedForm, make_form
from .const import PKG_NAME
from .dynamics import State, Trajectory, integrate
from .exceptions import RicciodeError
from .frame_curvature import JetPoint, RicciValues, ricci_from_jet
from .symalg import LaurentPoly

__all__ = [
    "ClosedForm",
    "JetPoint",
    "LaurentPoly",
    "ParamSet",
    "RicciValues",
    "RicciodeError",
    "State",
    "Trajectory",
    "classify",
    "integrate",
    "make_form",
    "ricci_from_jet",
    "symbolic_ricci",
    "__version__",
]

logmuse.init_logger(PKG_NAME)
