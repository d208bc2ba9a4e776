"""Exact parametrization of framed and positive representations of punctured
surface groups.

Matrices cross the boundary as lists of rows; entries are exact rationals
(``fractions.Fraction`` on the Python side, "p/q" strings in the extension).
"""

from fractions import Fraction

from ._posrep import (  # noqa: F401
    Model,
    PosrepError,
    Surface,
    census,
    check_rep,
    extract,
    flip,
    random_params,
    retract,
)
from . import _posrep

__all__ = [
    "Model",
    "PosrepError",
    "Surface",
    "build",
    "census",
    "check_rep",
    "extract",
    "flip",
    "matrix",
    "model_of",
    "random_params",
    "retract",
]


def matrix(rows):
    """Extension matrix (rows of strings) to rows of Fractions."""
    return [[Fraction(x) for x in row] for row in rows]


def _rows(m):
    return [[str(Fraction(x)) for x in row] for row in m]


def model_of(params_text):
    """Model named on the 'model:' line of a parameter file, or None."""
    for line in params_text.splitlines():
        if line.startswith("model:"):
            return Model(line[len("model:"):].strip())
    return None


def build(model, surface, params):
    """Framed representation of a parameter file.

    Returns a dict with ``rho`` and ``flags`` (name -> Fraction matrix),
    ``positive``, ``witness`` and the text block ``rep_text`` accepted by
    :func:`extract`.
    """
    out = _posrep.build(model, surface, params)
    out["rho"] = {k: matrix(v) for k, v in out["rho"].items()}
    out["flags"] = {k: matrix(v) for k, v in out["flags"].items()}
    return out




def _wrap_model():
    omega, u_theta = Model.omega, Model.u_theta
    left, right = Model.left_map, Model.right_map
    pos, grp, inv = Model.is_positive_unipotent, Model.in_group, Model.levi_invariant
    Model.omega = lambda self: matrix(omega(self))
    Model.u_theta = lambda self: matrix(u_theta(self))
    Model.left_map = lambda self, u: matrix(left(self, _rows(u)))
    Model.right_map = lambda self, u: matrix(right(self, _rows(u)))
    Model.is_positive_unipotent = lambda self, u: pos(self, _rows(u))
    Model.in_group = lambda self, g: grp(self, _rows(g))
    Model.levi_invariant = lambda self, l: inv(self, _rows(l))


_wrap_model()
