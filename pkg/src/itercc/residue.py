"""Residues of top-degree continuous differential forms.

A top form is f dt1 ^ ... ^ dtn, carried by its coefficient series f; its
residue is the coefficient of t1^-1 ... tn^-1.  The (n+1)-linear residue
form Res(f0, ..., fn) = Res(f0 df1 ^ ... ^ dfn) expands the wedge through
the Jacobian determinant of the partial derivatives.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import permutations

from .coeffring import RingElement
from .errors import OutsideWindowError, RingMismatchError
from .intmat import perm_sign
from .series import Series, inside_window


@dataclass(frozen=True)
class TopForm:
    """A continuous n-form written on the basis dt1 ^ ... ^ dtn."""

    coefficient: Series


def residue(form) -> RingElement:
    """Coefficient of t1^-1 ... tn^-1 in the coefficient of the form."""
    f = form.coefficient if isinstance(form, TopForm) else form
    point = (-1,) * f.nvars
    if not inside_window(point, f.window):
        raise OutsideWindowError(
            f"residue needs exponent {point} inside window {f.window}")
    return f.terms.get(point, f.ring.zero)


def series_determinant(rows: list[list[Series]]) -> Series:
    """Determinant of a small matrix of series, by permutation expansion."""
    n = len(rows)
    if n == 0:
        raise ValueError("empty determinant")
    ring, nvars = rows[0][0].ring, rows[0][0].nvars
    total = None
    for perm in permutations(range(n)):
        prod = rows[0][perm[0]]
        for i in range(1, n):
            prod = prod * rows[i][perm[i]]
        if perm_sign(perm) < 0:
            prod = -prod
        total = prod if total is None else total + prod
    if total is None:
        total = Series.zero(ring, nvars)
    return total


def wedge_coefficient(fs: list[Series]) -> Series:
    """Coefficient of df1 ^ ... ^ dfn on dt1 ^ ... ^ dtn: det(d f_i / d t_j)."""
    n = fs[0].nvars
    if len(fs) != n:
        raise RingMismatchError(f"wedge of {len(fs)} one-forms in {n} variables is not top degree")
    jac = [[f.derivative(j) for j in range(n)] for f in fs]
    return series_determinant(jac)


def res_form(f0: Series, *fs: Series) -> RingElement:
    """Res(f0 df1 ^ ... ^ dfn), the invariant (n+1)-linear residue form."""
    if len(fs) != f0.nvars:
        raise RingMismatchError(
            f"residue form takes {f0.nvars + 1} arguments over {f0.nvars} variables")
    for f in fs:
        f0._check_compatible(f)
    return residue(f0 * wedge_coefficient(list(fs)))
