"""Exact arithmetic on the tower Q -> Q[a] -> Q[a][x] and truncated series.

Rationals are :class:`fractions.Fraction`. Polynomials keep integer numerators
over one shared positive denominator so that the heavy loops run on Python
ints through :mod:`eulerkit.kernels`; the public ``coeffs`` views hand back
``Fraction``/``AlphaPoly`` values.
"""

from __future__ import annotations

import math
import re
from fractions import Fraction
from typing import Iterable, Sequence, Union

from . import kernels as K

Rat = Fraction
Scalar = Union[int, Fraction]

__all__ = [
    "Rat",
    "AlphaPoly",
    "XPoly",
    "TruncSeries",
    "SeriesDomainError",
    "binomial",
    "format_rat",
    "parse_rat",
    "xpoly_mul",
    "xpoly_compose",
    "xpoly_derivative",
    "alpha_shift",
    "series_mul",
    "series_log",
    "series_exp",
]


class SeriesDomainError(ValueError):
    """A series operation was applied outside its domain."""


def binomial(n: int, k: int) -> int:
    """C(n, k) for n >= 0, zero outside 0 <= k <= n."""
    if n < 0:
        raise ValueError(f"binomial needs n >= 0, got {n}")
    if k < 0 or k > n:
        return 0
    return math.comb(n, k)


def format_rat(q: Scalar) -> str:
    q = Fraction(q)
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


_CANONICAL_RAT = re.compile(r"^(-?(?:0|[1-9][0-9]*))(?:/([1-9][0-9]*))?$")


def parse_rat(text: str, strict: bool = True) -> Fraction:
    """Parse ``p`` or ``p/q``.

    With ``strict`` the text must be exactly what :func:`format_rat` emits:
    reduced, positive denominator > 1, no ``-0``, no leading zeros or spaces.
    """
    if not strict:
        return Fraction(text.strip())
    m = _CANONICAL_RAT.match(text)
    if m is None:
        raise ValueError(f"not a canonical rational: {text!r}")
    num = int(m.group(1))
    if m.group(1) == "-0":
        raise ValueError(f"not a canonical rational: {text!r}")
    if m.group(2) is None:
        return Fraction(num)
    den = int(m.group(2))
    if den == 1 or num == 0 or math.gcd(num, den) != 1:
        raise ValueError(f"not a canonical rational: {text!r}")
    return Fraction(num, den)


def _lcm_den(values: Iterable[Scalar]) -> int:
    d = 1
    for v in values:
        if isinstance(v, Fraction):
            d = math.lcm(d, v.denominator)
    return d


def _combine(terms):
    """Sum of ``grid / den`` terms, normalized. ``terms`` is [(grid, den)]."""
    L = 1
    for _, den in terms:
        L = math.lcm(L, den)
    acc: list = []
    for grid, den in terms:
        K.baxpy(acc, grid, L // den)
    return K.normalize(acc, L)


# --------------------------------------------------------------------- Q[a]


class AlphaPoly:
    """Polynomial in the formal order symbol ``a`` with rational coefficients.

    Immutable. ``AlphaPoly([c0, c1, ...])`` means ``c0 + c1*a + ...``.
    """

    __slots__ = ("_num", "_den")

    def __init__(self, coeffs: Iterable[Scalar] = ()):
        coeffs = [Fraction(c) for c in coeffs]
        d = _lcm_den(coeffs)
        num = [c.numerator * (d // c.denominator) for c in coeffs]
        rows, den = K.normalize([num], d)
        self._num = rows[0] if rows else ()
        self._den = den

    @classmethod
    def _raw(cls, num, den) -> "AlphaPoly":
        rows, den = K.normalize([num], den)
        obj = object.__new__(cls)
        obj._num = rows[0] if rows else ()
        obj._den = den
        return obj

    @classmethod
    def constant(cls, c: Scalar) -> "AlphaPoly":
        c = Fraction(c)
        return cls._raw([c.numerator], c.denominator)

    @classmethod
    def symbol(cls) -> "AlphaPoly":
        return cls._raw([0, 1], 1)

    @property
    def coeffs(self) -> tuple:
        return tuple(Fraction(v, self._den) for v in self._num)

    @property
    def degree(self) -> int:
        """Degree in ``a``; -1 for the zero polynomial."""
        return len(self._num) - 1

    def is_zero(self) -> bool:
        return not self._num

    def is_constant(self) -> bool:
        return len(self._num) <= 1

    def constant_value(self) -> Fraction:
        if len(self._num) > 1:
            raise ValueError(f"{self} is not constant")
        return Fraction(self._num[0], self._den) if self._num else Fraction(0)

    def __bool__(self) -> bool:
        return bool(self._num)

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = AlphaPoly.constant(other)
        if not isinstance(other, AlphaPoly):
            return NotImplemented
        return self._num == other._num and self._den == other._den

    def __hash__(self):
        return hash(("AlphaPoly", self._num, self._den))

    def __neg__(self):
        return AlphaPoly._raw([-v for v in self._num], self._den)

    def __add__(self, other):
        other = _as_alpha(other)
        if other is None:
            return NotImplemented
        rows, den = _combine([([self._num], self._den), ([other._num], other._den)])
        return AlphaPoly._raw(rows[0] if rows else (), den)

    __radd__ = __add__

    def __sub__(self, other):
        other = _as_alpha(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, XPoly):
            return NotImplemented
        other = _as_alpha(other)
        if other is None:
            return NotImplemented
        return AlphaPoly._raw(K.conv(self._num, other._num), self._den * other._den)

    __rmul__ = __mul__

    def __pow__(self, e: int):
        if e < 0:
            raise ValueError("negative power of a polynomial")
        result = AlphaPoly.constant(1)
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def divide_int(self, n: int) -> "AlphaPoly":
        return AlphaPoly._raw(list(self._num), self._den * n)

    def shift(self, delta: Scalar) -> "AlphaPoly":
        """``c(a) -> c(a + delta)``."""
        delta = Fraction(delta)
        if not delta or len(self._num) <= 1:
            return self
        rows, scale = K.ashift([self._num], delta.numerator, delta.denominator)
        return AlphaPoly._raw(rows[0], self._den * scale)

    def __call__(self, value: Scalar) -> Fraction:
        value = Fraction(value)
        acc = Fraction(0)
        for v in reversed(self._num):
            acc = acc * value + v
        return acc / self._den

    def __repr__(self):
        return f"AlphaPoly({str(self)!r})"

    def __str__(self):
        return _render_alpha(self)


def _as_alpha(v):
    if isinstance(v, AlphaPoly):
        return v
    if isinstance(v, (int, Fraction)):
        return AlphaPoly.constant(v)
    return None


# ------------------------------------------------------------------ Q[a][x]


class XPoly:
    """Polynomial in ``x`` with :class:`AlphaPoly` coefficients.

    Immutable and hashable. Stored as an integer grid (row ``i`` = numerators
    of the ``x**i`` coefficient, ascending in ``a``) over one denominator.
    """

    __slots__ = ("_rows", "_den")

    def __init__(self, coeffs: Iterable[Union[AlphaPoly, Scalar]] = ()):
        polys = [_as_alpha(c) for c in coeffs]
        if any(p is None for p in polys):
            raise TypeError("XPoly coefficients must be AlphaPoly, int or Fraction")
        L = 1
        for p in polys:
            L = math.lcm(L, p._den)
        grid = [[v * (L // p._den) for v in p._num] for p in polys]
        self._rows, self._den = K.normalize(grid, L)

    @classmethod
    def _raw(cls, grid, den) -> "XPoly":
        obj = object.__new__(cls)
        obj._rows, obj._den = K.normalize(grid, den)
        return obj

    @classmethod
    def x(cls) -> "XPoly":
        return cls._raw([[], [1]], 1)

    @classmethod
    def alpha(cls) -> "XPoly":
        return cls._raw([[0, 1]], 1)

    @classmethod
    def constant(cls, c: Union[AlphaPoly, Scalar]) -> "XPoly":
        c = _as_alpha(c)
        return cls._raw([list(c._num)], c._den)

    @classmethod
    def monomial(cls, n: int, c: Union[AlphaPoly, Scalar] = 1) -> "XPoly":
        c = _as_alpha(c)
        return cls._raw([[]] * n + [list(c._num)], c._den)

    @classmethod
    def linear_combination(cls, pairs) -> "XPoly":
        """``sum(c * p for c, p in pairs)`` with one normalization at the end."""
        terms = []
        for c, p in pairs:
            if isinstance(c, AlphaPoly):
                if not c._num or not p._rows:
                    continue
                if len(c._num) == 1:
                    terms.append((_scale_grid(p._rows, c._num[0]), p._den * c._den))
                else:
                    terms.append((K.bmul([c._num], p._rows), p._den * c._den))
            else:
                c = Fraction(c)
                if not c or not p._rows:
                    continue
                terms.append((_scale_grid(p._rows, c.numerator), p._den * c.denominator))
        if not terms:
            return XPoly()
        return cls._raw(*_combine(terms))

    @property
    def coeffs(self) -> tuple:
        return tuple(AlphaPoly._raw(list(r), self._den) for r in self._rows)

    def coeff(self, i: int) -> AlphaPoly:
        if 0 <= i < len(self._rows):
            return AlphaPoly._raw(list(self._rows[i]), self._den)
        return AlphaPoly()

    @property
    def degree(self) -> int:
        """Degree in ``x``; -1 for the zero polynomial."""
        return len(self._rows) - 1

    @property
    def alpha_degree(self) -> int:
        return max((len(r) - 1 for r in self._rows), default=-1)

    def is_zero(self) -> bool:
        return not self._rows

    def __bool__(self):
        return bool(self._rows)

    def __eq__(self, other):
        if isinstance(other, (int, Fraction, AlphaPoly)):
            other = XPoly.constant(other)
        if not isinstance(other, XPoly):
            return NotImplemented
        return self._rows == other._rows and self._den == other._den

    def __hash__(self):
        return hash(("XPoly", self._rows, self._den))

    def __neg__(self):
        return XPoly._raw([[-v for v in r] for r in self._rows], self._den)

    def __add__(self, other):
        other = _as_xpoly(other)
        if other is None:
            return NotImplemented
        return XPoly._raw(*_combine([(self._rows, self._den), (other._rows, other._den)]))

    __radd__ = __add__

    def __sub__(self, other):
        other = _as_xpoly(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Fraction(other)
            return XPoly._raw(_scale_grid(self._rows, other.numerator), self._den * other.denominator)
        other = _as_xpoly(other)
        if other is None:
            return NotImplemented
        return XPoly._raw(K.bmul(self._rows, other._rows), self._den * other._den)

    __rmul__ = __mul__

    def __pow__(self, e: int):
        if e < 0:
            raise ValueError("negative power of a polynomial")
        result = XPoly.constant(1)
        base = self
        while e:
            if e & 1:
                result = result * base
            e >>= 1
            if e:
                base = base * base
        return result

    def compose(self, q: "XPoly") -> "XPoly":
        """``self(q(x))``."""
        q = _as_xpoly(q)
        if not self._rows:
            return self
        R = K.bcompose(self._rows, q._rows, q._den)
        return XPoly._raw(R, self._den * q._den ** (len(self._rows) - 1))

    def divmod(self, d: "XPoly") -> tuple:
        """Long division by ``d``, whose leading coefficient must be a nonzero rational."""
        if d.is_zero():
            raise ZeroDivisionError("division by the zero polynomial")
        lead = d.coeff(d.degree)
        if not lead.is_constant():
            raise ValueError("divisor needs a rational leading coefficient")
        inv = 1 / lead.constant_value()
        rem = list(self.coeffs)
        quot = [AlphaPoly()] * max(0, len(rem) - d.degree)
        dc = d.coeffs
        for i in range(len(rem) - 1, d.degree - 1, -1):
            c = rem[i] * inv
            if c.is_zero():
                continue
            quot[i - d.degree] = c
            for j, dj in enumerate(dc):
                rem[i - d.degree + j] = rem[i - d.degree + j] - c * dj
        return XPoly(quot), XPoly(rem[: d.degree])

    def derivative(self) -> "XPoly":
        grid = [[i * v for v in r] for i, r in enumerate(self._rows)][1:]
        return XPoly._raw(grid, self._den)

    def alpha_shift(self, delta: Scalar) -> "XPoly":
        """Replace every coefficient ``c(a)`` by ``c(a + delta)``."""
        delta = Fraction(delta)
        if not delta:
            return self
        grid, scale = K.ashift(self._rows, delta.numerator, delta.denominator)
        return XPoly._raw(grid, self._den * scale)

    def specialize_alpha(self, value: Scalar) -> "XPoly":
        """Substitute ``a := value``; the result has constant coefficients."""
        return XPoly([c(value) for c in self.coeffs])

    def evaluate(self, point: Union[AlphaPoly, Scalar]) -> AlphaPoly:
        """Substitute ``x := point`` where ``point`` lies in Q[a]."""
        return self.compose(XPoly.constant(point)).coeff(0)

    def __repr__(self):
        return f"XPoly({str(self)!r})"

    def __str__(self):
        return _render_x(self)

    def to_latex(self) -> str:
        return _render_x(self, latex=True)


def _scale_grid(rows, s):
    if s == 1:
        return rows
    return [[s * v for v in r] for r in rows]


def _as_xpoly(v):
    if isinstance(v, XPoly):
        return v
    if isinstance(v, (int, Fraction, AlphaPoly)):
        return XPoly.constant(v)
    return None


def xpoly_mul(a: XPoly, b: XPoly) -> XPoly:
    return a * b


def xpoly_compose(p: XPoly, q: XPoly) -> XPoly:
    return p.compose(q)


def xpoly_derivative(p: XPoly) -> XPoly:
    return p.derivative()


def alpha_shift(p: XPoly, delta: Scalar) -> XPoly:
    return p.alpha_shift(delta)


# ---------------------------------------------------------------- rendering


def _mono(c: Fraction, k: int, var: str, latex: bool) -> str:
    """Body of ``|c| * var**k`` (c > 0)."""
    if latex:
        cs = str(c.numerator) if c.denominator == 1 else rf"\frac{{{c.numerator}}}{{{c.denominator}}}"
        if k == 0:
            return cs
        base = var if k == 1 else f"{var}^{{{k}}}"
        return base if c == 1 else f"{cs} {base}"
    if k == 0:
        return format_rat(c)
    base = var if k == 1 else f"{var}^{k}"
    return base if c == 1 else f"{format_rat(c)}*{base}"


def _join(parts) -> str:
    out = []
    for i, (neg, body) in enumerate(parts):
        if i == 0:
            out.append(("-" + body) if neg else body)
        else:
            out.append((" - " if neg else " + ") + body)
    return "".join(out) if out else "0"


def _render_alpha(p: AlphaPoly, latex: bool = False) -> str:
    var = r"\alpha" if latex else "a"
    parts = []
    for k in range(p.degree, -1, -1):
        c = Fraction(p._num[k], p._den)
        if c:
            parts.append((c < 0, _mono(abs(c), k, var, latex)))
    return _join(parts)


def _render_x(p: XPoly, latex: bool = False) -> str:
    avar = r"\alpha" if latex else "a"
    sep = " " if latex else "*"
    lp, rp = (r"\left(", r"\right)") if latex else ("(", ")")
    parts = []
    for m in range(p.degree, -1, -1):
        c = p.coeff(m)
        if c.is_zero():
            continue
        xpart = "" if m == 0 else ("x" if m == 1 else (f"x^{{{m}}}" if latex else f"x^{m}"))
        nz = [(k, v) for k, v in enumerate(c.coeffs) if v]
        if len(nz) == 1:
            k, v = nz[0]
            abody = _mono(abs(v), k, avar, latex)
            if not xpart:
                body = abody
            elif k == 0 and abs(v) == 1:
                body = xpart
            else:
                body = f"{abody}{sep}{xpart}"
            parts.append((v < 0, body))
        else:
            body = f"{lp}{_render_alpha(c, latex)}{rp}"
            if xpart:
                body = f"{body}{sep}{xpart}"
            parts.append((False, body))
    return _join(parts)


# ------------------------------------------------------------------ series


class TruncSeries:
    """Power series in ``t`` over Q[a], truncated after ``t**order``."""

    __slots__ = ("order", "coeffs")

    def __init__(self, order: int, coeffs: Sequence[Union[AlphaPoly, Scalar]] = ()):
        if order < 0:
            raise ValueError("order must be non-negative")
        cs = [_as_alpha(c) for c in list(coeffs)[: order + 1]]
        cs += [AlphaPoly()] * (order + 1 - len(cs))
        self.order = order
        self.coeffs = tuple(cs)

    @classmethod
    def one(cls, order: int) -> "TruncSeries":
        return cls(order, [1])

    def __eq__(self, other):
        if not isinstance(other, TruncSeries):
            return NotImplemented
        return self.order == other.order and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.order, self.coeffs))

    def __getitem__(self, k: int) -> AlphaPoly:
        return self.coeffs[k]

    def _check(self, other: "TruncSeries"):
        if not isinstance(other, TruncSeries):
            raise TypeError("expected TruncSeries")
        if other.order != self.order:
            raise ValueError(f"series order mismatch: {self.order} vs {other.order}")

    def __add__(self, other):
        self._check(other)
        return TruncSeries(self.order, [a + b for a, b in zip(self.coeffs, other.coeffs)])

    def __sub__(self, other):
        self._check(other)
        return TruncSeries(self.order, [a - b for a, b in zip(self.coeffs, other.coeffs)])

    def __neg__(self):
        return TruncSeries(self.order, [-a for a in self.coeffs])

    def scale(self, c: Union[AlphaPoly, Scalar]) -> "TruncSeries":
        c = _as_alpha(c)
        return TruncSeries(self.order, [c * a for a in self.coeffs])

    def __mul__(self, other):
        if not isinstance(other, TruncSeries):
            return self.scale(other)
        self._check(other)
        f, g = self.coeffs, other.coeffs
        out = []
        for n in range(self.order + 1):
            terms = [([K.conv(f[k]._num, g[n - k]._num)], f[k]._den * g[n - k]._den)
                     for k in range(n + 1) if f[k]._num and g[n - k]._num]
            out.append(_alpha_from(terms))
        return TruncSeries(self.order, out)

    __rmul__ = scale

    def __repr__(self):
        body = ", ".join(str(c) for c in self.coeffs)
        return f"TruncSeries({self.order}, [{body}])"


def _alpha_from(terms) -> AlphaPoly:
    if not terms:
        return AlphaPoly()
    rows, den = _combine(terms)
    return AlphaPoly._raw(rows[0] if rows else (), den)


def series_mul(f: TruncSeries, g: TruncSeries) -> TruncSeries:
    return f * g


def series_log(f: TruncSeries) -> TruncSeries:
    """``g`` with ``g(0) = 0`` and ``exp(g) = f``; needs ``f(0) = 1``.

    Uses ``n*g_n = n*f_n - sum_{k=1}^{n-1} k*g_k*f_{n-k}``.
    """
    if f.coeffs[0] != 1:
        raise SeriesDomainError(f"series_log needs constant term 1, got {f.coeffs[0]}")
    fc = f.coeffs
    g = [AlphaPoly()]
    for n in range(1, f.order + 1):
        terms = [([[n * v for v in fc[n]._num]], fc[n]._den)] if fc[n]._num else []
        for k in range(1, n):
            gk, fnk = g[k], fc[n - k]
            if gk._num and fnk._num:
                terms.append(([[-k * v for v in K.conv(gk._num, fnk._num)]], gk._den * fnk._den))
        g.append(_alpha_from(terms).divide_int(n))
    return TruncSeries(f.order, g)


def series_exp(g: TruncSeries) -> TruncSeries:
    """``f`` with ``f(0) = 1`` and ``log(f) = g``; needs ``g(0) = 0``.

    Uses ``n*f_n = sum_{k=1}^{n} k*g_k*f_{n-k}``.
    """
    if not g.coeffs[0].is_zero():
        raise SeriesDomainError(f"series_exp needs constant term 0, got {g.coeffs[0]}")
    gc = g.coeffs
    f = [AlphaPoly.constant(1)]
    for n in range(1, g.order + 1):
        terms = []
        for k in range(1, n + 1):
            gk, fnk = gc[k], f[n - k]
            if gk._num and fnk._num:
                terms.append(([[k * v for v in K.conv(gk._num, fnk._num)]], gk._den * fnk._den))
        f.append(_alpha_from(terms).divide_int(n))
    return TruncSeries(g.order, f)
