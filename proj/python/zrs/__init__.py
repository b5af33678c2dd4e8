"""Point scatterers in R^3: Krein resolvent, scattering matrix, diagnostics."""

from ._core import *  # noqa: F401,F403
from ._core import Error, ScattererSet, SphereGrid

__all__ = [name for name in dir() if not name.startswith("_")]
