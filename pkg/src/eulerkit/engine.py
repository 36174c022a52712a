"""Generalized Euler polynomials, the umbral map and the D / Lambda operators.

``E_n^(a)(x)`` is read off the exponential generating function
``(2/(e^t+1))**a * e^(tx)``. For a formal order ``a`` the power is taken as
``exp(-a * log((e^t+1)/2))`` over Q[a]; the constant terms ``e_k(a) = E_k^(a)(0)``
then give every polynomial through the Appell expansion
``E_n^(a)(x) = sum_k C(n,k) e_k(a) x^(n-k)``.
"""

from __future__ import annotations

import enum
import math
import os
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Union

from .algebra import (
    AlphaPoly,
    Scalar,
    TruncSeries,
    XPoly,
    binomial,
    format_rat,
    parse_rat,
    series_exp,
    series_log,
)

DEFAULT_DEPTH = 64
CACHE_MAGIC = "eulerkit-table"
CACHE_VERSION = "v1"
CACHE_FILENAME = "euler_table.txt"


class TableDepthError(ValueError):
    """The coefficient table is too shallow for the requested index."""


class CacheFormatError(ValueError):
    """A cache file does not follow the table format."""

    def __init__(self, path, line: int, field: str, message: str):
        self.path = str(path)
        self.line = line
        self.field = field
        super().__init__(f"{path}:{line}: {field}: {message}")


class CacheVersionError(CacheFormatError):
    """A cache file was written by an incompatible format version."""


class SequenceKind(enum.Enum):
    EULER_NUMBER = "euler"
    GENOCCHI_NUMBER = "genocchi"


@dataclass(frozen=True)
class EulerTable:
    """Constant terms ``e_0(a), ..., e_N(a)`` of the generalized Euler polynomials."""

    max_index: int
    constant_terms: tuple
    _memo: dict = field(default_factory=dict, init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        if len(self.constant_terms) != self.max_index + 1:
            raise ValueError("constant_terms must hold max_index + 1 entries")

    def require(self, index: int) -> None:
        if index > self.max_index:
            raise TableDepthError(f"index {index} exceeds table depth {self.max_index}")

    def truncated(self, max_index: int) -> "EulerTable":
        self.require(max_index)
        return EulerTable(max_index, self.constant_terms[: max_index + 1])

    def poly(self, n: int, shift: Scalar = 0) -> XPoly:
        """``E_n^(a+shift)(x)``, memoized."""
        shift = Fraction(shift)
        key = ("E", n, shift)
        hit = self._memo.get(key)
        if hit is None:
            if shift:
                hit = self.poly(n).alpha_shift(shift)
            else:
                self.require(n)
                e = self.constant_terms
                hit = XPoly([binomial(n, n - i) * e[n - i] for i in range(n + 1)])
            self._memo[key] = hit
        return hit

    def poly_at(self, n: int, arg: XPoly, shift: Scalar = 0) -> XPoly:
        """``E_n^(a+shift)(arg(x))``, memoized on ``arg``."""
        key = ("C", n, Fraction(shift), arg)
        hit = self._memo.get(key)
        if hit is None:
            hit = self.poly(n, shift).compose(arg)
            self._memo[key] = hit
        return hit

    def classical(self, n: int) -> XPoly:
        """Classical Euler polynomial ``E_n(x) = E_n^(1)(x)``."""
        key = ("K", n)
        hit = self._memo.get(key)
        if hit is None:
            hit = self.poly(n).specialize_alpha(1)
            self._memo[key] = hit
        return hit


def build_euler_table(N: int = DEFAULT_DEPTH) -> EulerTable:
    if N < 0:
        raise ValueError("table depth must be non-negative")
    half = TruncSeries(N, [1] + [Fraction(1, 2 * math.factorial(k)) for k in range(1, N + 1)])
    g = series_log(half).scale(AlphaPoly([0, -1]))
    f = series_exp(g)
    return EulerTable(N, tuple(c * math.factorial(k) for k, c in enumerate(f.coeffs)))


def euler_poly(n: int, table: EulerTable) -> XPoly:
    if n < 0:
        raise ValueError("n must be non-negative")
    return table.poly(n)


def psi_apply(p: XPoly, shift: Scalar, table: EulerTable) -> XPoly:
    """Umbral map ``x**n -> E_n^(a+shift)(x)``, extended Q[a]-linearly."""
    table.require(p.degree)
    return XPoly.linear_combination(
        (c, table.poly(n, shift)) for n, c in enumerate(p.coeffs) if not c.is_zero()
    )


def lambda_apply(p: XPoly) -> XPoly:
    """``p(x+1) + p(x)``."""
    return p.compose(XPoly.x() + 1) + p


def scaled_derivative(p: XPoly, r: int) -> XPoly:
    """``D^r p / r!``; maps ``x**m`` to ``C(m, r) x**(m-r)``."""
    if r < 0:
        raise ValueError("derivative order must be non-negative")
    if r == 0:
        return p
    cs = p.coeffs
    return XPoly([binomial(m, r) * cs[m] for m in range(r, len(cs))])


def genocchi_poly(n: int, table: EulerTable) -> XPoly:
    """Classical Genocchi polynomial ``G_n(x) = n E_{n-1}(x)``, n >= 1."""
    if n < 1:
        raise ValueError("Genocchi polynomials are indexed from n = 1")
    return table.classical(n - 1) * n


def euler_number(n: int, table: EulerTable) -> Fraction:
    """``E_n = 2**n E_n(1/2)`` at order 1."""
    return table.classical(n).evaluate(Fraction(1, 2)).constant_value() * 2**n


def genocchi_number(n: int, table: EulerTable) -> Fraction:
    """``G_n = G_n(0) = n * e_{n-1}(1)``."""
    if n < 1:
        raise ValueError("Genocchi numbers are indexed from n = 1")
    table.require(n - 1)
    return n * table.constant_terms[n - 1](1)


def sequence_values(kind: SequenceKind, count: int, table: EulerTable) -> list:
    """First ``count`` terms: ``E_0..`` for Euler numbers, ``G_1..`` for Genocchi.

    Every value is checked to be an integer.
    """
    if count < 1:
        raise ValueError("count must be positive")
    table.require(count - 1)
    if kind is SequenceKind.EULER_NUMBER:
        values = [euler_number(n, table) for n in range(count)]
    elif kind is SequenceKind.GENOCCHI_NUMBER:
        values = [genocchi_number(n, table) for n in range(1, count + 1)]
    else:
        raise ValueError(f"unknown sequence kind {kind!r}")
    for v in values:
        if v.denominator != 1:
            raise ArithmeticError(f"{kind.value} value {v} is not an integer")
    return values


# ------------------------------------------------------------------- cache


def dump_table(table: EulerTable) -> str:
    lines = [f"{CACHE_MAGIC} {CACHE_VERSION} N={table.max_index}"]
    for k, c in enumerate(table.constant_terms):
        body = ",".join(format_rat(v) for v in c.coeffs) or "0"
        lines.append(f"e[{k}] = {body}")
    return "\n".join(lines) + "\n"


def parse_table(text: str, path="<string>", max_index: int | None = None) -> EulerTable:
    lines = text.split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    else:
        raise CacheFormatError(path, len(lines), "file", "missing final newline (truncated?)")
    if not lines:
        raise CacheFormatError(path, 1, "header", "empty file")
    head = lines[0].split(" ")
    if len(head) != 3 or head[0] != CACHE_MAGIC or not head[2].startswith("N="):
        raise CacheFormatError(path, 1, "header", f"expected '{CACHE_MAGIC} {CACHE_VERSION} N=<int>'")
    if head[1] != CACHE_VERSION:
        raise CacheVersionError(path, 1, "version", f"unsupported version {head[1]!r}")
    try:
        N = int(head[2][2:])
    except ValueError:
        raise CacheFormatError(path, 1, "N", f"bad depth {head[2][2:]!r}") from None
    if N < 0 or str(N) != head[2][2:]:
        raise CacheFormatError(path, 1, "N", f"bad depth {head[2][2:]!r}")
    if len(lines) - 1 != N + 1:
        raise CacheFormatError(path, len(lines) + 1, "entries", f"expected {N + 1} entries, found {len(lines) - 1}")
    want = N if max_index is None else max_index
    if want > N:
        raise TableDepthError(f"{path} holds depth {N}, {want} requested")
    terms = []
    for k in range(want + 1):
        lineno = k + 2
        prefix = f"e[{k}] = "
        line = lines[k + 1]
        if not line.startswith(prefix):
            raise CacheFormatError(path, lineno, f"e[{k}]", f"expected prefix {prefix!r}")
        fields = line[len(prefix):].split(",")
        try:
            coeffs = [parse_rat(f) for f in fields]
        except ValueError as exc:
            raise CacheFormatError(path, lineno, f"e[{k}]", str(exc)) from None
        poly = AlphaPoly(coeffs)
        if ",".join(format_rat(v) for v in poly.coeffs) != ",".join(fields) and fields != ["0"]:
            raise CacheFormatError(path, lineno, f"e[{k}]", "trailing zero coefficients")
        terms.append(poly)
    return EulerTable(want, tuple(terms))


def cache_store(table: EulerTable, path: Union[str, os.PathLike]) -> Path:
    path = Path(path)
    path.write_text(dump_table(table), encoding="utf-8", newline="\n")
    return path


def cache_load(path: Union[str, os.PathLike], max_index: int | None = None) -> EulerTable:
    path = Path(path)
    return parse_table(path.read_text(encoding="utf-8"), path, max_index)


def load_or_build(N: int = DEFAULT_DEPTH, cache_dir: Union[str, os.PathLike, None] = None) -> EulerTable:
    """Table of depth ``N``, reusing ``cache_dir/euler_table.txt`` when deep enough."""
    if cache_dir is None:
        return build_euler_table(N)
    path = Path(cache_dir) / CACHE_FILENAME
    if path.exists():
        try:
            return cache_load(path, N)
        except TableDepthError:
            pass
    table = build_euler_table(N)
    path.parent.mkdir(parents=True, exist_ok=True)
    cache_store(table, path)
    return table
