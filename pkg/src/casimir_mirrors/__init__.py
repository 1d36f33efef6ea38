"""Casimir force and surface-plasmon energy between magneto-dielectric plane mirrors."""

from .asymptotics import *  # noqa: F401,F403
from .dispersion import *  # noqa: F401,F403
from .errors import (  # noqa: F401
    CasimirError,
    ConfigError,
    ConvergenceError,
    InvalidKinematicsError,
    NoModeError,
    NoSignChangeError,
    OutOfRegimeError,
    PoleError,
    PreconditionError,
    SeriesDivergenceError,
)
from .fresnel import *  # noqa: F401,F403
from .lifshitz import *  # noqa: F401,F403
from .numerics import *  # noqa: F401,F403
from .plasmons import *  # noqa: F401,F403

__version__ = "0.1.0"
