"""Knot Floer homology from grid diagrams, fixed-point bounds for fibered
knot monodromies, and symplectic Floer ranks of standard-form surface maps."""

import logging

from .f2_linalg import GradedComplex, SparseBoolMatrix, homology_ranks, rank
from .grid import (
    BigradedRanks,
    GridDiagram,
    bigradings,
    connected_sum,
    fixed_point_bound,
    genus,
    hat_ranks,
    is_fibered,
    knot_floer_ranks,
    kunneth_convolve,
    read_grid,
    tilde_complex,
)
from .mapclass import (
    Decomposition,
    classify_fixed,
    hf_symp_rank,
    hf_symp_rank_uncorrected,
    lefschetz_number,
    nielsen_number,
    random_decomposition,
    verify_bound,
)
from .surfaces import SurfacePiece, rel_betti, simplicial_oracle

__version__ = "0.1.0"

logging.getLogger(__name__).addHandler(logging.NullHandler())


def data_path(name: str) -> str:
    """Path of a bundled example input (``trefoil.grid``, ``flip_twist_swap.json``, ...)."""
    from importlib.resources import files

    return str(files(__package__) / "data" / name)
