"""Generalized preferential structures: points with copies, arrows that
attack points or other arrows, their minimal-element semantics, smoothness
checks, representation constructions, algebraic properties, a finite
propositional bridge, labeled-diagram readings and a gate-delay simulator."""

__version__ = "0.1.0"

from .structure import Arrow, PointCopy, Structure, build_structure, structure_from_edges  # noqa: E402
from .table import MuTable  # noqa: E402
from .validity import mu, mu_attacking, valid_x_impl_y, valid_x_to_y  # noqa: E402

__all__ = [
    "Arrow", "PointCopy", "Structure", "build_structure", "structure_from_edges", "MuTable",
    "mu", "mu_attacking", "valid_x_impl_y", "valid_x_to_y", "__version__",
]
