"""Hopf algebra quotients of quantized coordinate algebras at roots of unity, by their subgroup data."""

__version__ = "0.1.0"

from .cartan import RootSystem, build_root_system, weyl_group  # noqa: E402
from .datum import SubgroupDatum, classify, dimension, invariants  # noqa: E402
from .errors import CapExceeded, ValidationError  # noqa: E402

__all__ = [
    "__version__",
    "RootSystem",
    "build_root_system",
    "weyl_group",
    "SubgroupDatum",
    "classify",
    "dimension",
    "invariants",
    "CapExceeded",
    "ValidationError",
]
