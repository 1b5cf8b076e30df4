"""Scattering data of semi-infinite Jacobi operators close to the free one.

The compiled core exposes coefficient models (built-in families plus JSON
files), Jost solutions and the Jost function, the weight function, the
perturbation determinant and spectral shift function, the scattering matrix,
discrete spectrum, Szego factorization, Case sum rules, trace identities, and
the orthogonal-polynomial asymptotics they imply.
"""

from ._core import *  # noqa: F401,F403
from ._core import __doc__ as _core_doc  # noqa: F401

__all__ = [n for n in dir() if not n.startswith("_")]
