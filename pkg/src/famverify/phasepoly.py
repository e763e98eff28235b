"""Multivariate complex Laurent polynomials and matrices of them.

Coefficients are exact Gaussian rationals whenever every input is exact
(integers, fractions, and Gaussian rationals) and fall back to Python
``complex`` as soon as a float enters.  Float coefficients whose magnitude
drops below :data:`FLOAT_ZERO` are discarded so that cancellation leaves a
canonical zero.

Monomials are keyed by a tuple of ``(variable, exponent)`` pairs sorted by
variable name with no zero exponents, so dictionary equality of two
polynomials decides mathematical equality.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from numbers import Number, Rational
from typing import Iterable, Mapping, Sequence

import numpy as np

from .errors import DimensionMismatch, MissingAssignment, ZeroAtNegativePower

FLOAT_ZERO = 1e-12

NEG_INF = float("-inf")


class GaussianRational:
    """Exact complex number ``re + im*i`` with rational parts."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        self.re = re if isinstance(re, Fraction) else Fraction(re)
        self.im = im if isinstance(im, Fraction) else Fraction(im)

    @staticmethod
    def _coerce(other):
        if isinstance(other, GaussianRational):
            return other
        if isinstance(other, (int, Fraction)):
            return GaussianRational(other)
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return complex(self) + other
        return GaussianRational(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return complex(self) - other
        return GaussianRational(self.re - o.re, self.im - o.im)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return other - complex(self)
        return GaussianRational(o.re - self.re, o.im - self.im)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return complex(self) * other
        return GaussianRational(self.re * o.re - self.im * o.im,
                                self.re * o.im + self.im * o.re)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return complex(self) / other
        den = o.re * o.re + o.im * o.im
        if den == 0:
            raise ZeroDivisionError("division by exact zero")
        return GaussianRational((self.re * o.re + self.im * o.im) / den,
                                (self.im * o.re - self.re * o.im) / den)

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return other / complex(self)
        return o / self

    def __pow__(self, n):
        if not isinstance(n, int):
            return complex(self) ** n
        if n < 0:
            return GaussianRational(1) / (self ** -n)
        result = GaussianRational(1)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __neg__(self):
        return GaussianRational(-self.re, -self.im)

    def __pos__(self):
        return self

    def __abs__(self):
        return math.hypot(self.re, self.im)

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def __complex__(self):
        return complex(float(self.re), float(self.im))

    def conjugate(self):
        return GaussianRational(self.re, -self.im)

    def __eq__(self, other):
        if isinstance(other, GaussianRational):
            return self.re == other.re and self.im == other.im
        if isinstance(other, Number):
            return complex(self) == other if not isinstance(other, Rational) \
                else (self.im == 0 and self.re == other)
        return NotImplemented

    def __hash__(self):
        if self.im == 0:
            return hash(self.re)
        return hash((self.re, self.im))

    def __repr__(self):
        return f"GaussianRational({self.re}, {self.im})"

    def __str__(self):
        return format_coeff(self)


def to_coeff(value):
    """Normalise a scalar into the coefficient domain (exact when possible)."""
    if isinstance(value, GaussianRational):
        return value
    if isinstance(value, bool):
        return GaussianRational(int(value))
    if isinstance(value, (int, Fraction)):
        return GaussianRational(value)
    if isinstance(value, (float, complex, np.floating, np.complexfloating)):
        return complex(value)
    if isinstance(value, Rational):
        return GaussianRational(Fraction(value.numerator, value.denominator))
    raise TypeError(f"unsupported coefficient {value!r}")


def is_exact(value) -> bool:
    return isinstance(value, (GaussianRational, int, Fraction))


def coeff_is_zero(c) -> bool:
    if isinstance(c, GaussianRational):
        return not c
    return abs(c) <= FLOAT_ZERO


def root_of_unity(turns: Fraction | float):
    """``exp(i*pi*turns)``; exact when ``2*turns`` is an integer."""
    if isinstance(turns, (int, Fraction)):
        t = Fraction(turns) % 2
        if (2 * t).denominator == 1:
            return {Fraction(0): GaussianRational(1), Fraction(1, 2): GaussianRational(0, 1),
                    Fraction(1): GaussianRational(-1), Fraction(3, 2): GaussianRational(0, -1)}[t]
        turns = float(t)
    angle = math.pi * turns
    return complex(math.cos(angle), math.sin(angle))


def format_coeff(c) -> str:
    if isinstance(c, GaussianRational):
        if c.im == 0:
            return str(c.re)
        if c.re == 0:
            return _imag_str(c.im)
        sign = "+" if c.im > 0 else "-"
        return f"({c.re}{sign}{_imag_str(abs(c.im))})"
    c = complex(c)
    if c.imag == 0:
        return repr(c.real)
    if c.real == 0:
        return f"{c.imag!r}i"
    sign = "+" if c.imag >= 0 else "-"
    return f"({c.real!r}{sign}{abs(c.imag)!r}i)"


def _imag_str(v: Fraction) -> str:
    if v == 1:
        return "i"
    if v == -1:
        return "-i"
    if v.denominator == 1:
        return f"{v}i"
    return f"{v.numerator}i/{v.denominator}"


@dataclass(frozen=True)
class DegreePair:
    """Positive and negative degree of a polynomial in one variable."""

    pos: float
    neg: float

    @classmethod
    def zero_poly(cls) -> "DegreePair":
        return cls(NEG_INF, NEG_INF)

    @property
    def is_neg_inf(self) -> bool:
        return self.pos == NEG_INF

    def __add__(self, other: "DegreePair") -> "DegreePair":
        return DegreePair(self.pos + other.pos, self.neg + other.neg)

    def join(self, other: "DegreePair") -> "DegreePair":
        return DegreePair(max(self.pos, other.pos), max(self.neg, other.neg))

    def __le__(self, other: "DegreePair") -> bool:
        return self.pos <= other.pos and self.neg <= other.neg

    def clamped(self) -> "DegreePair":
        """Replace -inf by 0; the convention used when sizing grids."""
        return DegreePair(max(self.pos, 0), max(self.neg, 0))


Mono = tuple  # tuple[tuple[str, int], ...]


def _mono_mul(a: Mono, b: Mono) -> Mono:
    if not a:
        return b
    if not b:
        return a
    exps = dict(a)
    for v, e in b:
        s = exps.get(v, 0) + e
        if s:
            exps[v] = s
        else:
            del exps[v]
    return tuple(sorted(exps.items()))


class LaurentPoly:
    """Immutable multivariate Laurent polynomial with complex coefficients."""

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Mapping[Mono, object] | None = None):
        clean = {}
        if terms:
            for mono, c in terms.items():
                c = to_coeff(c)
                acc: dict = {}
                for v, e in mono:
                    acc[v] = acc.get(v, 0) + int(e)
                mono = tuple(sorted((v, e) for v, e in acc.items() if e))
                c = clean[mono] + c if mono in clean else c
                if coeff_is_zero(c):
                    clean.pop(mono, None)
                else:
                    clean[mono] = c
        self._terms = clean
        self._hash = None

    @classmethod
    def _raw(cls, terms: dict) -> "LaurentPoly":
        p = cls.__new__(cls)
        p._terms = terms
        p._hash = None
        return p

    @classmethod
    def const(cls, c) -> "LaurentPoly":
        return cls({(): c})

    @classmethod
    def var(cls, name: str, exp: int = 1, coeff=1) -> "LaurentPoly":
        return cls.monomial({name: exp}, coeff)

    @classmethod
    def monomial(cls, exps: Mapping[str, int], coeff=1) -> "LaurentPoly":
        key = tuple(sorted((v, int(e)) for v, e in exps.items() if e))
        return cls({key: coeff})

    @property
    def terms(self) -> dict:
        return dict(self._terms)

    def items(self):
        return self._terms.items()

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self):
        return bool(self._terms)

    def is_exact(self) -> bool:
        return all(isinstance(c, GaussianRational) for c in self._terms.values())

    def is_constant(self) -> bool:
        return all(not m for m in self._terms)

    def constant_value(self):
        """Return the scalar of a constant polynomial."""
        if not self.is_constant():
            raise ValueError(f"{self} is not constant")
        return self._terms.get((), GaussianRational(0))

    def variables(self) -> set[str]:
        return {v for m in self._terms for v, _ in m}

    # ring operations

    @staticmethod
    def _lift(other) -> "LaurentPoly | None":
        if isinstance(other, LaurentPoly):
            return other
        if isinstance(other, (Number, GaussianRational)):
            return LaurentPoly.const(other)
        return None

    def __add__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        if not o._terms:
            return self
        if not self._terms:
            return o
        out = dict(self._terms)
        for m, c in o._terms.items():
            if m in out:
                s = out[m] + c
                if coeff_is_zero(s):
                    del out[m]
                else:
                    out[m] = s
            else:
                out[m] = c
        return LaurentPoly._raw(out)

    __radd__ = __add__

    def __neg__(self):
        return LaurentPoly._raw({m: -c for m, c in self._terms.items()})

    def __sub__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        if not self._terms or not o._terms:
            return LaurentPoly._raw({})
        out: dict = {}
        for ma, ca in self._terms.items():
            for mb, cb in o._terms.items():
                m = _mono_mul(ma, mb)
                c = ca * cb
                if m in out:
                    out[m] = out[m] + c
                else:
                    out[m] = c
        return LaurentPoly._raw({m: c for m, c in out.items() if not coeff_is_zero(c)})

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            if len(self._terms) != 1:
                raise ValueError("negative powers are only defined for monomials")
            (m, c), = self._terms.items()
            inv = LaurentPoly._raw({tuple((v, -e) for v, e in m): 1 / c})
            return inv ** (-n)
        result = LaurentPoly.const(1)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def scale(self, c) -> "LaurentPoly":
        return LaurentPoly({m: v * c for m, v in self._terms.items()})

    # comparison

    def __eq__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return self._terms == o._terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    def max_coeff_distance(self, other: "LaurentPoly") -> float:
        """Largest absolute coefficient difference (0.0 for identical polynomials)."""
        keys = set(self._terms) | set(other._terms)
        zero = GaussianRational(0)
        return max((abs(self._terms.get(k, zero) - other._terms.get(k, zero)) for k in keys),
                   default=0.0)

    # degrees, evaluation, substitution

    def degree(self, var: str) -> DegreePair:
        if not self._terms:
            return DegreePair.zero_poly()
        pos = neg = 0
        for m in self._terms:
            for v, e in m:
                if v == var:
                    if e > pos:
                        pos = e
                    elif -e > neg:
                        neg = -e
        return DegreePair(pos, neg)

    def evaluate(self, assignment: Mapping[str, object]):
        """Substitute every variable; returns an exact or complex scalar."""
        total = GaussianRational(0)
        for m, c in self._terms.items():
            term = c
            for v, e in m:
                if v not in assignment:
                    raise MissingAssignment(v)
                x = assignment[v]
                if e < 0 and x == 0:
                    raise ZeroAtNegativePower(f"{v} = 0 at negative power {e}")
                term = term * _power(x, e)
            total = total + term
        return total

    def substitute(self, var: str, value) -> "LaurentPoly":
        """Replace one variable by a scalar, leaving the others symbolic."""
        out = LaurentPoly._raw({})
        for m, c in self._terms.items():
            rest = tuple((v, e) for v, e in m if v != var)
            if len(rest) == len(m):
                out = out + LaurentPoly._raw({m: c})
                continue
            e = dict(m)[var]
            if e < 0 and value == 0:
                raise ZeroAtNegativePower(f"{var} = 0 at negative power {e}")
            out = out + LaurentPoly({rest: c * _power(value, e)})
        return out

    def rename(self, mapping: Mapping[str, str]) -> "LaurentPoly":
        out = LaurentPoly._raw({})
        for m, c in self._terms.items():
            exps: dict = {}
            for v, e in m:
                nv = mapping.get(v, v)
                exps[nv] = exps.get(nv, 0) + e
            out = out + LaurentPoly.monomial(exps, c)
        return out

    def to_float(self) -> "LaurentPoly":
        return LaurentPoly({m: complex(c) for m, c in self._terms.items()})

    # display

    def sorted_terms(self, order: Sequence[str] | None = None) -> list:
        """Terms in graded lexicographic order (declaration order of ``order``)."""
        names = list(order or [])
        for v in sorted(self.variables()):
            if v not in names:
                names.append(v)

        def key(item):
            exps = dict(item[0])
            vec = tuple(exps.get(v, 0) for v in names)
            return (-sum(vec), tuple(-x for x in vec))

        return sorted(self._terms.items(), key=key)

    def to_string(self, order: Sequence[str] | None = None) -> str:
        if not self._terms:
            return "0"
        parts = []
        for m, c in self.sorted_terms(order):
            mono = "*".join(v if e == 1 else f"{v}^{e}" for v, e in m)
            cs = format_coeff(c)
            if not mono:
                body = cs
            elif cs == "1":
                body = mono
            elif cs == "-1":
                body = "-" + mono
            else:
                body = f"{cs}*{mono}"
            parts.append(body)
        out = parts[0]
        for p in parts[1:]:
            out += f" - {p[1:]}" if p.startswith("-") else f" + {p}"
        return out

    def __str__(self):
        return self.to_string()

    def __repr__(self):
        return f"LaurentPoly({self.to_string()!r})"


def _power(x, e: int):
    if isinstance(x, (int, Fraction)):
        x = GaussianRational(x)
    if e >= 0:
        return x ** e
    return (1 / x) ** (-e) if not isinstance(x, GaussianRational) else GaussianRational(1) / (x ** -e)


ZERO = LaurentPoly()
ONE = LaurentPoly.const(1)


def poly_add(p: LaurentPoly, q: LaurentPoly) -> LaurentPoly:
    return p + q


def poly_mul(p: LaurentPoly, q: LaurentPoly) -> LaurentPoly:
    return p * q


def poly_degree(p: LaurentPoly, var: str) -> DegreePair:
    return p.degree(var)


def poly_eval(p: LaurentPoly, assignment: Mapping[str, object]):
    return p.evaluate(assignment)


def quotient_reduce(p: LaurentPoly, var: str, order: int) -> LaurentPoly:
    """Reduce exponents of ``var`` modulo ``order``, i.e. work in C[Y]/(Y^g - 1)."""
    if order < 1:
        raise ValueError("quotient order must be >= 1")
    out = LaurentPoly._raw({})
    for m, c in p.items():
        exps = dict(m)
        if var in exps:
            exps[var] %= order
        out = out + LaurentPoly.monomial(exps, c)
    return out


class PolyMatrix:
    """Dense row-major matrix of Laurent polynomials."""

    __slots__ = ("rows", "cols", "entries")

    def __init__(self, rows: int, cols: int, entries: Iterable):
        ent = tuple(e if isinstance(e, LaurentPoly) else LaurentPoly.const(e) for e in entries)
        if len(ent) != rows * cols:
            raise DimensionMismatch(f"{len(ent)} entries for a {rows}x{cols} matrix")
        self.rows = rows
        self.cols = cols
        self.entries = ent

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence]) -> "PolyMatrix":
        r = len(rows)
        c = len(rows[0]) if r else 0
        if any(len(row) != c for row in rows):
            raise DimensionMismatch("ragged rows")
        return cls(r, c, [e for row in rows for e in row])

    @classmethod
    def identity(cls, n: int) -> "PolyMatrix":
        return cls(n, n, [ONE if i == j else ZERO for i in range(n) for j in range(n)])

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "PolyMatrix":
        return cls(rows, cols, [ZERO] * (rows * cols))

    @classmethod
    def from_array(cls, arr) -> "PolyMatrix":
        arr = np.asarray(arr, dtype=object)
        return cls(arr.shape[0], arr.shape[1], list(arr.ravel()))

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i * self.cols + j]

    @property
    def shape(self):
        return (self.rows, self.cols)

    def __eq__(self, other):
        if not isinstance(other, PolyMatrix):
            return NotImplemented
        return self.shape == other.shape and self.entries == other.entries

    def __hash__(self):
        return hash((self.rows, self.cols, self.entries))

    def map(self, fn) -> "PolyMatrix":
        return PolyMatrix(self.rows, self.cols, [fn(e) for e in self.entries])

    def is_exact(self) -> bool:
        return all(e.is_exact() for e in self.entries)

    def variables(self) -> set[str]:
        out: set[str] = set()
        for e in self.entries:
            out |= e.variables()
        return out

    def evaluate(self, assignment: Mapping[str, object]) -> np.ndarray:
        return np.array([complex(e.evaluate(assignment)) for e in self.entries],
                        dtype=complex).reshape(self.rows, self.cols)

    def max_coeff_distance(self, other: "PolyMatrix") -> float:
        if self.shape != other.shape:
            raise DimensionMismatch(f"{self.shape} vs {other.shape}")
        return max((a.max_coeff_distance(b) for a, b in zip(self.entries, other.entries)),
                   default=0.0)

    def __repr__(self):
        rows = [", ".join(str(self[i, j]) for j in range(self.cols)) for i in range(self.rows)]
        return "PolyMatrix([" + "; ".join(f"[{r}]" for r in rows) + "])"


def mat_mul(a: PolyMatrix, b: PolyMatrix) -> PolyMatrix:
    if a.cols != b.rows:
        raise DimensionMismatch(f"cannot multiply {a.shape} by {b.shape}")
    out = []
    for i in range(a.rows):
        row = a.entries[i * a.cols:(i + 1) * a.cols]
        for j in range(b.cols):
            acc = ZERO
            for k, x in enumerate(row):
                if not x:
                    continue
                y = b.entries[k * b.cols + j]
                if y:
                    acc = acc + x * y
            out.append(acc)
    return PolyMatrix(a.rows, b.cols, out)


def mat_kron(a: PolyMatrix, b: PolyMatrix) -> PolyMatrix:
    rows, cols = a.rows * b.rows, a.cols * b.cols
    out = [ZERO] * (rows * cols)
    for i in range(a.rows):
        for j in range(a.cols):
            x = a.entries[i * a.cols + j]
            if not x:
                continue
            for k in range(b.rows):
                for l in range(b.cols):
                    y = b.entries[k * b.cols + l]
                    if y:
                        out[(i * b.rows + k) * cols + j * b.cols + l] = x * y
    return PolyMatrix(rows, cols, out)


def mat_degree(m: PolyMatrix, var: str) -> DegreePair:
    deg = DegreePair.zero_poly()
    for e in m.entries:
        deg = deg.join(e.degree(var))
    return deg


def mat_quotient_reduce(m: PolyMatrix, var: str, order: int) -> PolyMatrix:
    return m.map(lambda e: quotient_reduce(e, var, order))
