"""Array-valued truncated Taylor jets in the chart coordinates.

An :class:`ArrayJet` carries a tensor value together with its first and
(optionally) second partial derivatives at one point.  Products, sums and
matrix inverses propagate the derivatives exactly, truncating to the lower
order of the operands.  Order drops by one each time a derivative is taken,
which is how the covariant derivative of a derived field is evaluated.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

_LETTERS = "abcdefghijklmnopqrstuvw"


@dataclass(frozen=True)
class ArrayJet:
    val: np.ndarray
    d1: np.ndarray | None = None  # shape val.shape + (n,)
    d2: np.ndarray | None = None  # shape val.shape + (n, n)

    @property
    def order(self) -> int:
        if self.d1 is None:
            return 0
        return 1 if self.d2 is None else 2

    @property
    def shape(self) -> tuple[int, ...]:
        return self.val.shape

    @staticmethod
    def constant(value, n: int, order: int = 2) -> "ArrayJet":
        v = np.asarray(value, dtype=float)
        d1 = np.zeros(v.shape + (n,)) if order >= 1 else None
        d2 = np.zeros(v.shape + (n, n)) if order >= 2 else None
        return ArrayJet(v, d1, d2)

    def truncate(self, order: int) -> "ArrayJet":
        if order >= self.order:
            return self
        return ArrayJet(self.val, self.d1 if order >= 1 else None, None)

    def __add__(self, other: "ArrayJet") -> "ArrayJet":
        o = min(self.order, other.order)
        a, b = self.truncate(o), other.truncate(o)
        return ArrayJet(
            a.val + b.val,
            None if o < 1 else a.d1 + b.d1,
            None if o < 2 else a.d2 + b.d2,
        )

    def __neg__(self) -> "ArrayJet":
        return ArrayJet(
            -self.val,
            None if self.d1 is None else -self.d1,
            None if self.d2 is None else -self.d2,
        )

    def __sub__(self, other: "ArrayJet") -> "ArrayJet":
        return self + (-other)

    def scale(self, c: float) -> "ArrayJet":
        return ArrayJet(
            c * self.val,
            None if self.d1 is None else c * self.d1,
            None if self.d2 is None else c * self.d2,
        )

    def __matmul__(self, other: "ArrayJet") -> "ArrayJet":
        a, b = self.val.ndim, other.val.ndim
        la = _LETTERS[:a]
        lb = la[-1] + _LETTERS[a : a + b - 1]
        out = la[:-1] + lb[1:]
        return product(f"{la},{lb}->{out}", self, other)

    @property
    def T(self) -> "ArrayJet":
        return self.transpose((1, 0))

    def transpose(self, axes: tuple[int, ...]) -> "ArrayJet":
        """Permute the value axes; derivative axes stay last."""
        k = len(axes)

        def tr(x, extra):
            if x is None:
                return None
            return np.transpose(x, tuple(axes) + tuple(range(k, k + extra)))

        return ArrayJet(tr(self.val, 0), tr(self.d1, 1), tr(self.d2, 2))

    def grad(self) -> "ArrayJet":
        """Jet of the coordinate gradient, one order lower; last axis is ∂_k."""
        if self.d1 is None:
            raise ValueError("jet has no derivative information")
        return ArrayJet(self.d1, self.d2, None)

    def directional(self, direction: "ArrayJet") -> "ArrayJet":
        """Derivative along a (possibly varying) vector field: ∂_k(self) · dir^k."""
        g = self.grad()
        spec_in = _LETTERS[: g.val.ndim]
        return product(f"{spec_in},{spec_in[-1]}->{spec_in[:-1]}", g, direction)


def product(spec: str, a: ArrayJet, b: ArrayJet) -> ArrayJet:
    """Bilinear einsum of two jets with the Leibniz rule applied."""
    o = min(a.order, b.order)
    ins, out = spec.split("->")
    sa, sb = ins.split(",")
    val = np.einsum(spec, a.val, b.val)
    if o < 1:
        return ArrayJet(val)
    d1 = np.einsum(f"{sa},{sb}y->{out}y", a.val, b.d1) + np.einsum(
        f"{sa}y,{sb}->{out}y", a.d1, b.val
    )
    if o < 2:
        return ArrayJet(val, d1)
    cross = np.einsum(f"{sa}y,{sb}z->{out}yz", a.d1, b.d1)
    d2 = (
        np.einsum(f"{sa},{sb}yz->{out}yz", a.val, b.d2)
        + np.einsum(f"{sa}yz,{sb}->{out}yz", a.d2, b.val)
        + cross
        + np.swapaxes(cross, -1, -2)
    )
    return ArrayJet(val, d1, d2)


def inverse(a: ArrayJet) -> ArrayJet:
    """Jet of the matrix inverse."""
    inv = np.linalg.inv(a.val)
    if a.order < 1:
        return ArrayJet(inv)
    # ∂_k A^{-1} = -A^{-1} (∂_k A) A^{-1}
    t = np.einsum("ij,jlk->ilk", inv, a.d1)  # A^{-1} ∂_k A
    d1 = -np.einsum("ijk,jl->ilk", t, inv)
    if a.order < 2:
        return ArrayJet(inv, d1)
    # ∂_k∂_l A^{-1} = A^{-1}(A_k A^{-1} A_l + A_l A^{-1} A_k - A_kl) A^{-1}
    tt = np.einsum("ijk,jml->imkl", t, t)
    inner = tt + np.swapaxes(tt, 2, 3) - np.einsum("ij,jmkl->imkl", inv, a.d2)
    d2 = np.einsum("imkl,mj->ijkl", inner, inv)
    return ArrayJet(inv, d1, d2)


def dot(a: ArrayJet, b: ArrayJet) -> ArrayJet:
    return product("i,i->", a, b)
