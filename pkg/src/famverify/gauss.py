"""Exact tensors over the Gaussian rationals, stored as integers.

A :class:`GaussTensor` holds ``(re + i*im) / den`` with integer arrays
``re`` and ``im`` and one positive integer ``den``.  Contraction reduces to
Gaussian-integer matrix products.  Those run in the compiled kernel when it
is available, in numpy ``int64`` when the magnitudes provably fit, and in
arbitrary-precision Python integers otherwise.

Set ``FAMVERIFY_PURE=1`` to skip the compiled kernel.
"""

from __future__ import annotations

import math
import os

import numpy as np

from .phasepoly import GaussianRational

_INT64_SAFE = 2 ** 62

try:
    if os.environ.get("FAMVERIFY_PURE"):
        raise ImportError
    from ._gauss import gauss_matmul as _compiled_matmul
    BACKEND = "compiled"
except ImportError:
    _compiled_matmul = None
    BACKEND = "python"


def _peak(*arrays) -> int:
    return max((int(np.max(np.abs(a))) for a in arrays if a.size), default=0)


def _object_matmul(ar, ai, br, bi):
    ar, ai, br, bi = (x.astype(object) for x in (ar, ai, br, bi))
    return ar @ br - ai @ bi, ar @ bi + ai @ br


def matmul_python(ar, ai, br, bi):
    """Gaussian-integer product without the compiled kernel."""
    if all(x.dtype == np.int64 for x in (ar, ai, br, bi)):
        k = ar.shape[1]
        if 2 * k * _peak(ar, ai) * _peak(br, bi) < _INT64_SAFE:
            return ar @ br - ai @ bi, ar @ bi + ai @ br
    return _object_matmul(ar, ai, br, bi)


def matmul_compiled(ar, ai, br, bi):
    if _compiled_matmul is None:
        raise RuntimeError("compiled kernel not built")
    if all(x.dtype == np.int64 for x in (ar, ai, br, bi)):
        out = _compiled_matmul(np.ascontiguousarray(ar), np.ascontiguousarray(ai),
                               np.ascontiguousarray(br), np.ascontiguousarray(bi))
        if out is not None:
            return out
    return _object_matmul(ar, ai, br, bi)


gauss_matmul = matmul_compiled if _compiled_matmul is not None else matmul_python


def _int_array(values, shape):
    try:
        return np.array(values, dtype=np.int64).reshape(shape)
    except OverflowError:
        return np.array(values, dtype=object).reshape(shape)


class GaussTensor:
    __slots__ = ("re", "im", "den")

    def __init__(self, re, im, den: int = 1):
        self.re, self.im, self.den = re, im, den

    @property
    def shape(self):
        return self.re.shape

    @property
    def ndim(self):
        return self.re.ndim

    @property
    def size(self):
        return self.re.size

    @classmethod
    def from_array(cls, arr) -> "GaussTensor":
        arr = np.asarray(arr, dtype=object)
        vals = [x if isinstance(x, GaussianRational) else GaussianRational(x) for x in arr.ravel()]
        den = 1
        for x in vals:
            den = math.lcm(den, x.re.denominator, x.im.denominator)
        re = _int_array([int(x.re * den) for x in vals], arr.shape)
        im = _int_array([int(x.im * den) for x in vals], arr.shape)
        return cls(re, im, den)

    def to_array(self) -> np.ndarray:
        out = np.empty(self.shape, dtype=object)
        flat = out.reshape(-1)
        for k, (r, i) in enumerate(zip(self.re.ravel(), self.im.ravel())):
            flat[k] = GaussianRational(int(r), int(i)) / self.den if self.den != 1 \
                else GaussianRational(int(r), int(i))
        return out

    def transpose(self, perm) -> "GaussTensor":
        return GaussTensor(np.transpose(self.re, perm), np.transpose(self.im, perm), self.den)

    def tensordot(self, other: "GaussTensor", ia, ib) -> "GaussTensor":
        fa = [k for k in range(self.ndim) if k not in ia]
        fb = [k for k in range(other.ndim) if k not in ib]
        kdim = int(np.prod([self.shape[k] for k in ia], dtype=np.int64))
        sa = [self.shape[k] for k in fa]
        sb = [other.shape[k] for k in fb]
        ma, mb = int(np.prod(sa, dtype=np.int64)), int(np.prod(sb, dtype=np.int64))
        pa, pb = fa + list(ia), list(ib) + fb
        ar = np.transpose(self.re, pa).reshape(ma, kdim)
        ai = np.transpose(self.im, pa).reshape(ma, kdim)
        br = np.transpose(other.re, pb).reshape(kdim, mb)
        bi = np.transpose(other.im, pb).reshape(kdim, mb)
        cr, ci = gauss_matmul(ar, ai, br, bi)
        return GaussTensor(cr.reshape(sa + sb), ci.reshape(sa + sb),
                           self.den * other.den).normalised()

    def normalised(self) -> "GaussTensor":
        """Cancel the common factor of the entries and the denominator."""
        if self.den == 1:
            return self
        g = self.den
        for a in (self.re, self.im):
            if a.dtype == object:
                for x in a.ravel():
                    g = math.gcd(g, int(x))
            elif a.size:
                g = math.gcd(g, int(np.gcd.reduce(a.ravel())))
            if g == 1:
                return self
        return GaussTensor(self.re // g, self.im // g, self.den // g)


class GaussOps:
    """Array operations used by the contraction loop, over :class:`GaussTensor`."""

    def asarray(self, arr):
        return arr if isinstance(arr, GaussTensor) else GaussTensor.from_array(arr)

    def tensordot(self, a, b, ia, ib):
        return a.tensordot(b, ia, ib)

    def transpose(self, a, perm):
        return a.transpose(perm)

    def ones(self):
        return GaussTensor(np.ones((), dtype=np.int64), np.zeros((), dtype=np.int64), 1)
