"""Continuous endomorphisms and automorphisms of the iterated series ring.

An endomorphism is determined by the images of t1, ..., tn, each a unit.
Its exponent matrix has the image valuations as columns; the automorphism
criterion is that this matrix be upper-triangular with 1s on the diagonal.
Substitution works monomial by monomial over the finite stored support,
inverting images for negative powers.
"""

from __future__ import annotations

from typing import Sequence

from .coeffring import Ring
from .errors import (NonTerminatingError, NotAutomorphismError, NotUnitError,
                     RingMismatchError)
from .intmat import IntMatrix, is_unipotent_upper, matmul, unipotent_inverse
from .series import (Series, _inverse_fixed, normalize_window, window_min)


class Endomorphism:
    """Continuous ring endomorphism given by the images of the variables."""

    __slots__ = ("ring", "nvars", "images", "matrix", "_pow_cache")

    def __init__(self, images: Sequence[Series], require_automorphism: bool = False):
        images = tuple(images)
        if not images:
            raise NotAutomorphismError("an endomorphism needs at least one image")
        ring, nvars = images[0].ring, images[0].nvars
        if len(images) != nvars:
            raise RingMismatchError(f"{nvars} variables need {nvars} images, got {len(images)}")
        cols = []
        for im in images:
            im._check_compatible(images[0])
            cls = im.classify()
            if not cls.is_unit:
                raise NotUnitError(f"image {im} is not a unit")
            cols.append(cls.v)
        matrix = tuple(tuple(cols[j][i] for j in range(nvars)) for i in range(nvars))
        if require_automorphism and not is_unipotent_upper(matrix):
            raise NotAutomorphismError(
                f"exponent matrix {matrix} is not upper-triangular with unit diagonal")
        self.ring = ring
        self.nvars = nvars
        self.images = images
        self.matrix: IntMatrix = matrix
        self._pow_cache: dict[tuple[int, int], Series] = {}

    @classmethod
    def identity_map(cls, ring: Ring, nvars: int) -> "Endomorphism":
        return cls([Series.variable(ring, nvars, i) for i in range(nvars)])

    @classmethod
    def from_matrix(cls, ring: Ring, matrix) -> "Endomorphism":
        """The monomial automorphism t^l -> t^(U l); a section of phi -> M(phi)."""
        matrix = tuple(tuple(int(x) for x in row) for row in matrix)
        if not is_unipotent_upper(matrix):
            raise NotAutomorphismError(
                f"{matrix} is not upper-triangular with unit diagonal")
        n = len(matrix)
        images = [
            Series.monomial(ring, n, tuple(matrix[i][j] for i in range(n)))
            for j in range(n)
        ]
        return cls(images, require_automorphism=True)

    @property
    def is_automorphism(self) -> bool:
        return is_unipotent_upper(self.matrix)

    def _power(self, i: int, k: int) -> Series:
        if k == 0:
            return Series.one(self.ring, self.nvars)
        cached = self._pow_cache.get((i, k))
        if cached is not None:
            return cached
        if k > 0:
            out = self._power(i, k - 1) * self.images[i]
        elif k == -1:
            out = self.images[i].invert()
        else:
            out = self._power(i, k + 1) * self._power(i, -1)
        self._pow_cache[(i, k)] = out
        return out

    def apply(self, f: Series) -> Series:
        """Substitute the images into f, term by term over the stored support."""
        if f.ring != self.ring or f.nvars != self.nvars:
            raise RingMismatchError("series and endomorphism live over different rings")
        total = Series.zero(self.ring, self.nvars, f.window)
        for l, c in f.terms.items():
            term = Series.constant(self.ring, self.nvars, c)
            for i, k in enumerate(l):
                if k:
                    term = term * self._power(i, k)
            total = total + term
        return total

    def compose(self, other: "Endomorphism") -> "Endomorphism":
        """self after other: the composite maps t_i to self(other(t_i))."""
        if other.ring != self.ring or other.nvars != self.nvars:
            raise RingMismatchError("endomorphisms live over different rings")
        return Endomorphism([self.apply(im) for im in other.images])

    @classmethod
    def _unchecked(cls, images, matrix) -> "Endomorphism":
        self = object.__new__(cls)
        self.ring = images[0].ring
        self.nvars = images[0].nvars
        self.images = tuple(images)
        self.matrix = matrix
        self._pow_cache = {}
        return self

    def inverse(self, window=None, max_iter: int = 60) -> "Endomorphism":
        """Solve phi(psi(t_i)) = t_i by successive correction.

        Seeds with the monomial automorphism of the inverse exponent matrix,
        then repeatedly divides out the residual factors chi(t_i) t_i^-1;
        each round kills the residual to twice the previous order.  The
        achievable precision follows the honest window propagation, so maps
        whose inverse matrix digs into negative exponents may come back with
        narrow windows.
        """
        if not self.is_automorphism:
            raise NotAutomorphismError("only automorphisms have inverses")
        n = self.nvars
        if window is None:
            window = window_min((8,) * n, tuple(
                min(im.window[i] for im in self.images) for i in range(n)))
        window = normalize_window(window, n)
        uinv = unipotent_inverse(self.matrix)
        unit_vecs = [tuple(1 if j == i else 0 for j in range(n)) for i in range(n)]
        psi = Endomorphism._unchecked(
            [im.truncate(window) for im in Endomorphism.from_matrix(self.ring, uinv).images],
            uinv)
        for _ in range(max_iter):
            residuals = []
            for i in range(n):
                chi = self.apply(psi.images[i])
                residuals.append(
                    (chi.mul_monomial(tuple(-x for x in unit_vecs[i])) - 1)
                    .truncate(window))
            if all(not s.terms for s in residuals):
                return Endomorphism(psi.images)
            rho_images = []
            for i, s in enumerate(residuals):
                inv = _inverse_fixed(s + Series.one(self.ring, n, s.window), s.window)
                rho_images.append(inv.mul_monomial(unit_vecs[i]))
            psi = Endomorphism._unchecked(
                [psi.apply(im).truncate(window) for im in rho_images], uinv)
        raise NonTerminatingError(f"automorphism inversion did not stabilize in {max_iter} rounds")

    def __repr__(self) -> str:
        imgs = ", ".join(f"t{i+1} -> {im}" for i, im in enumerate(self.images))
        return f"<endomorphism {imgs}>"
