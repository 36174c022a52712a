"""Exact verification of the generalized Euler identities.

Every identity is built as a pair ``(lhs, rhs)`` of elements of Q[a][x] and
checked by exact equality, so a HOLDS result covers every complex order ``a``
(and every ``x``) at once. Classical identities use order 1 and carry their
free variable ``y`` as the polynomial indeterminate.
"""

from __future__ import annotations

import enum
import itertools
import json
import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Sequence, Union

from .algebra import AlphaPoly, Scalar, XPoly, binomial, format_rat, parse_rat
from .engine import (
    EulerTable,
    TableDepthError,
    euler_number,
    genocchi_poly,
    lambda_apply,
    psi_apply,
    scaled_derivative,
)

X = XPoly.x()
ALPHA = XPoly.alpha()
A = AlphaPoly.symbol()


class ParameterError(ValueError):
    """Parameters outside an identity's domain (a usage error, never a failure)."""


class IdentityId(enum.Enum):
    THM1 = "thm1"
    THM1_EQ14 = "thm1_eq14"
    COR1_R4 = "cor1_r4"
    EQ_R2 = "eq_r2"
    EQ_R24 = "eq_r24"
    EQ_R3 = "eq_r3"
    EQ_R5 = "eq_r5"
    COR0_R6 = "cor0_r6"
    HU_KIM = "hu_kim"
    COR2 = "cor2"
    COR3 = "cor3"
    COR4 = "cor4"
    COR5 = "cor5"
    COR6 = "cor6"
    PROP_E0 = "prop_e0"
    PROP_DERIV = "prop_deriv"
    PROP_ADDITION = "prop_addition"
    PROP_LAMBDA = "prop_lambda"
    PROP_REFLECT = "prop_reflect"
    LEMMA1 = "lemma1"
    LEMMA2_R7 = "lemma2_r7"
    LEMMA2_R8 = "lemma2_r8"
    QK_TELESCOPE = "qk_telescope"

    @classmethod
    def parse(cls, tag: str) -> "IdentityId":
        try:
            return cls(tag.strip().lower())
        except ValueError:
            raise ParameterError(f"unknown identity {tag!r}") from None


class ProbeId(enum.Enum):
    EQ_R3 = "eq_r3"
    COR0_R6_AS_PRINTED = "cor0_r6_as_printed"
    HU_KIM_AS_PRINTED = "hu_kim_as_printed"
    EQ_7_AS_PRINTED = "eq_7_as_printed"

    @classmethod
    def parse(cls, tag: str) -> "ProbeId":
        try:
            return cls(tag.strip().lower())
        except ValueError:
            raise ParameterError(f"unknown probe {tag!r}") from None


class Status(enum.Enum):
    HOLDS = "holds"
    FAILS = "fails"
    USAGE_ERROR = "usage_error"


def parse_lambda(text: str) -> AlphaPoly:
    """``"a"`` for the order symbol, otherwise a rational ``p/q``."""
    t = text.strip()
    if t == "a":
        return A
    try:
        return AlphaPoly.constant(parse_rat(t, strict=False))
    except (ValueError, ZeroDivisionError):
        raise ParameterError(f"bad lambda value {text!r}") from None


@dataclass(frozen=True)
class IdentityParams:
    n: int = 0
    l: int = 0
    r: int = 0
    s: int = 0
    lam: AlphaPoly = field(default_factory=AlphaPoly)
    extra: dict = field(default_factory=dict)

    def __post_init__(self):
        if isinstance(self.lam, str):
            object.__setattr__(self, "lam", parse_lambda(self.lam))
        elif not isinstance(self.lam, AlphaPoly):
            object.__setattr__(self, "lam", AlphaPoly.constant(self.lam))
        for name in ("n", "l", "r", "s"):
            if getattr(self, name) < 0:
                raise ParameterError(f"{name} must be non-negative")
        for name, v in self.extra.items():
            if v < 0:
                raise ParameterError(f"{name} must be non-negative")
        if self.lam.degree > 1:
            raise ParameterError("lambda must have degree <= 1 in a")

    def get(self, name: str) -> int:
        if name not in self.extra:
            raise ParameterError(f"missing parameter {name!r}")
        return self.extra[name]

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "l": self.l,
            "r": self.r,
            "s": self.s,
            "lambda": str(self.lam),
            "extra": dict(sorted(self.extra.items())),
        }


@dataclass
class VerificationReport:
    identity: IdentityId
    params: IdentityParams
    status: Status
    residual: XPoly | None
    elapsed: float
    error: str | None = None

    def to_dict(self) -> dict:
        d = {
            "identity": self.identity.name,
            "params": self.params.to_dict(),
            "status": self.status.value,
            "residual": "0" if self.residual is None else str(self.residual),
            "elapsed_ms": int(round(self.elapsed * 1000)),
        }
        if self.error is not None:
            d["error"] = self.error
        return d


# ---------------------------------------------------------------- helpers


def _powers(base: AlphaPoly, top: int) -> list:
    out = [AlphaPoly.constant(1)]
    for _ in range(top):
        out.append(out[-1] * base)
    return out


def _classical_at(table: EulerTable, n: int, arg: XPoly) -> XPoly:
    key = ("KC", n, arg)
    hit = table._memo.get(key)
    if hit is None:
        hit = table.classical(n).compose(arg)
        table._memo[key] = hit
    return hit


def _sign(e: int) -> int:
    return -1 if e % 2 else 1


# -------------------------------------------------------------- Theorem 1


def _check_depth(table: EulerTable, p: IdentityParams) -> None:
    table.require(p.n + p.l + 2 * p.r)


def theorem1_lhs(p: IdentityParams, table: EulerTable) -> XPoly:
    """Both sums of the left side, second argument ``a - s - lam - x``."""
    _check_depth(table, p)
    n, l, r, s = p.n, p.l, p.r, p.s
    lp = _powers(p.lam, max(n, l) + r)
    arg = ALPHA - s - XPoly.constant(p.lam) - X
    sgn = _sign(l + n + r + s + 1)
    terms = []
    for k in range(n + r + 1):
        c = lp[n + r - k] * (binomial(n + r, k) * binomial(l + k + r, r))
        terms.append((c, table.poly(l + k)))
    for k in range(l + r + 1):
        c = lp[l + r - k] * (sgn * binomial(l + r, k) * binomial(n + k + r, r))
        terms.append((c, table.poly_at(n + k, arg)))
    return XPoly.linear_combination(terms)


def _shifted_product_sum(p: IdentityParams) -> XPoly:
    """``sum_{k<s} (-1)^k (x+k)^(l+r) (x+lam+k)^(n+r)``."""
    total = XPoly()
    lam = XPoly.constant(p.lam)
    for k in range(p.s):
        term = (X + k) ** (p.l + p.r) * (X + lam + k) ** (p.n + p.r)
        total = total + term * _sign(k)
    return total


def theorem1_rhs(p: IdentityParams, table: EulerTable) -> XPoly:
    """``2 Psi_{a-1}(D^r/r! sum_{k<s} ...)``; zero when ``s = 0``."""
    _check_depth(table, p)
    if p.s == 0:
        return XPoly()
    inner = scaled_derivative(_shifted_product_sum(p), p.r)
    return psi_apply(inner, -1, table) * 2


def theorem1_rhs_expanded(p: IdentityParams, table: EulerTable) -> XPoly:
    """Double-sum form with ``E_{l+j}^(a-1)(x+k)`` written out."""
    _check_depth(table, p)
    n, l, r = p.n, p.l, p.r
    lp = _powers(p.lam, n + r)
    terms = []
    for k in range(p.s):
        for j in range(n + r + 1):
            c = lp[n + r - j] * (2 * _sign(k) * binomial(n + r, j) * binomial(l + r + j, r))
            terms.append((c, table.poly_at(l + j, X + k, shift=-1)))
    return XPoly.linear_combination(terms)


def telescope_q(p: IdentityParams, k: int) -> XPoly:
    """``Q_k(x) = (-1)^k D^r/r! ((x+k)^(l+r) (x+lam+k)^(n+r))``."""
    lam = XPoly.constant(p.lam)
    prod = (X + k) ** (p.l + p.r) * (X + lam + k) ** (p.n + p.r)
    return scaled_derivative(prod, p.r) * _sign(k)


def telescope_residual(p: IdentityParams, table: EulerTable) -> XPoly:
    """First nonzero residual among the telescoping facts, else zero.

    Checks ``Q_k(x+1) = -Q_{k+1}(x)``, the collapse
    ``Q(x+1) + Q(x) = Q_0 - Q_s``, the binomial closed forms of ``Q_0`` and
    ``Q_s``, and ``Psi_a(Q(x+1) + Q(x)) = 2 Psi_{a-1}(Q)``.
    """
    _check_depth(table, p)
    n, l, r, s = p.n, p.l, p.r, p.s
    xp1 = X + 1
    qs = [telescope_q(p, k) for k in range(s + 1)]
    checks = []
    for k in range(s):
        checks.append(qs[k].compose(xp1) + qs[k + 1])
    Q = XPoly()
    for k in range(s):
        Q = Q + qs[k]
    lam_sum = Q.compose(xp1) + Q
    checks.append(lam_sum - (qs[0] - qs[s]))

    lp = _powers(p.lam, max(n, l) + r)
    q0 = XPoly.linear_combination(
        (lp[n + r - k] * (binomial(n + r, k) * binomial(l + k + r, r)), XPoly.monomial(l + k))
        for k in range(n + r + 1)
    )
    checks.append(qs[0] - q0)
    shift = X + XPoly.constant(p.lam) + s
    qsc = XPoly.linear_combination(
        (
            lp[l + r - k] * (_sign(l + n + r + s + n + k) * binomial(l + r, k) * binomial(n + k + r, r)),
            shift ** (n + k),
        )
        for k in range(l + r + 1)
    )
    checks.append(qs[s] - qsc)
    checks.append(psi_apply(lam_sum, 0, table) - psi_apply(Q, -1, table) * 2)
    for c in checks:
        if not c.is_zero():
            return c
    return XPoly()


# ------------------------------------------------------------ identities


def _thm1(p, t):
    return theorem1_lhs(p, t), theorem1_rhs(p, t)


def _thm1_eq14(p, t):
    return theorem1_lhs(p, t), theorem1_rhs_expanded(p, t)


def _cor1(p, t):
    n, l, r = p.n, p.l, p.r
    lp = _powers(p.lam, max(n, l) + r)
    arg = ALPHA - XPoly.constant(p.lam) - X
    lhs = XPoly.linear_combination(
        (lp[n + r - k] * (binomial(n + r, k) * binomial(l + k + r, r)), t.poly(l + k))
        for k in range(n + r + 1)
    )
    sg = _sign(l + n + r)
    rhs = XPoly.linear_combination(
        (lp[l + r - k] * (sg * binomial(l + r, k) * binomial(n + k + r, r)), t.poly_at(n + k, arg))
        for k in range(l + r + 1)
    )
    return lhs, rhs


def _eq_r2(p, t):
    n, l = p.n, p.l
    lhs = XPoly.linear_combination((_sign(n) * binomial(n, k), t.classical(l + k)) for k in range(n + 1))
    rhs = XPoly.linear_combination(
        (_sign(l) * binomial(l, k), _classical_at(t, n + k, -X)) for k in range(l + 1)
    )
    return lhs, rhs


def _r24_sums(p, t, full: bool):
    n, l = p.n, p.l
    top_n, top_l = (n + 1, l + 1) if full else (n, l)
    terms = [(_sign(n) * binomial(n + 1, k) * (l + k + 1), t.classical(l + k)) for k in range(top_n + 1)]
    terms += [
        (_sign(l) * binomial(l + 1, k) * (n + k + 1), _classical_at(t, n + k, -X))
        for k in range(top_l + 1)
    ]
    return XPoly.linear_combination(terms)


def _eq_r24(p, t):
    return _r24_sums(p, t, full=True), XPoly()


def eq_r3_structure(p: IdentityParams, t: EulerTable) -> XPoly:
    """``(-1)^(n+1) (E_{n+l+1}(y) - y^(n+l+1))``; the right side up to a constant."""
    m = p.n + p.l + 1
    return (t.classical(m) - XPoly.monomial(m)) * _sign(p.n + 1)


def eq_r3_lhs(p: IdentityParams, t: EulerTable) -> XPoly:
    return _r24_sums(p, t, full=False)


def _eq_r3(p, t):
    return eq_r3_lhs(p, t), eq_r3_structure(p, t) * (2 * (p.n + p.l + 2))


def _eq_r5(p, t):
    n, l = p.n, p.l
    lam = p.lam(1)
    lhs = XPoly.linear_combination(
        (_sign(n) * lam ** (n - k) * binomial(n, k), t.classical(l + k)) for k in range(n + 1)
    )
    arg = XPoly.constant(1 - lam) - X
    rhs = XPoly.linear_combination(
        (_sign(l) * lam ** (l - k) * binomial(l, k), _classical_at(t, n + k, arg)) for k in range(l + 1)
    )
    return lhs, rhs


def _cor0_sides(p, t, exp_first: str = "m", binom_second: str = "k", alpha_one: bool = False,
                second_top: int | None = None):
    """Both sums of the (m, n, q, k) identity, with switches for the printed variants."""
    n, m, q, k = p.n, p.get("m"), p.get("q"), p.get("k")
    base = m if exp_first == "m" else n
    if not alpha_one and base + q - (m + q) < 0:
        raise ParameterError(f"exponent {base}+q-i is negative for i <= m+q (needs m <= {base})")
    pw = _powers(A, max(m, n) + q) if not alpha_one else None

    def apow(e):
        return AlphaPoly.constant(1) if alpha_one else pw[e]

    def poly_at(idx, arg):
        return _classical_at(t, idx, arg) if alpha_one else t.poly_at(idx, arg)

    first = XPoly.linear_combination(
        (apow(base + q - i) * (_sign(m) * binomial(m + q, i) * binomial(n + q + i, k)),
         poly_at(n + q + i - k, X))
        for i in range(m + q + 1)
    )
    top = n + q if second_top is None else second_top
    sg = _sign(n) if alpha_one else _sign(n + k + 1)
    second = XPoly.linear_combination(
        (apow(n + q - j) * (sg * binomial(n + q, j)
                            * binomial(m + q + j, k if binom_second == "k" else j)),
         poly_at(m + q + j - k, -X))
        for j in range(top + 1)
        if binomial(n + q, j)
    )
    return first + second


def _cor0(p, t):
    return _cor0_sides(p, t), XPoly()


def _hu_kim(p, t):
    return _cor0_sides(p, t, alpha_one=True), XPoly()


def _euler_numbers(t, top):
    key = ("EN", top)
    hit = t._memo.get(key)
    if hit is None:
        hit = [euler_number(i, t) for i in range(top + 1)]
        t._memo[key] = hit
    return hit


def _alt_binomial_sum(n, l, r):
    return sum(_sign(j) * binomial(n + r, j) * binomial(l + r, r - j) for j in range(r + 1))


def _cor2_like(p, t, genocchi: bool):
    n, l, r = p.n, p.l, p.r
    E = _euler_numbers(t, n + l + r)
    b = r - 1 if genocchi else r

    def val(i):
        # G_{i+1} = (i+1) E_i at x = 0; Euler numbers otherwise
        return (i + 1) * t.constant_terms[i](1) if genocchi else E[i]

    lhs = sum(
        _sign(l) * binomial(n + r, k) * _bin(l + k + r, b) * Fraction(2) ** (n + r - 1 - k) * val(l + k)
        for k in range(n + r + 1)
    )
    lhs += sum(
        _sign(n + r) * binomial(l + r, k) * _bin(n + k + r, b) * Fraction(2) ** (l + r - 1 - k) * val(n + k)
        for k in range(l + r + 1)
    )
    rhs = _alt_binomial_sum(n, l, r) * (r if genocchi else 1)
    return XPoly.constant(lhs), XPoly.constant(rhs)


def _bin(n, k):
    return binomial(n, k) if k >= 0 else 0


def _cor2(p, t):
    return _cor2_like(p, t, genocchi=False)


def _cor4(p, t):
    return _cor2_like(p, t, genocchi=True)


def _cor3_like(p, t, genocchi: bool):
    n, r = p.n, p.r
    E = _euler_numbers(t, 2 * n + r)
    b = r - 1 if genocchi else r

    def val(i):
        return (i + 1) * t.constant_terms[i](1) if genocchi else E[i]

    lhs = sum(
        binomial(n + r, k) * _bin(n + r + k, b) * 2 ** (n + r - k) * val(n + k) for k in range(n + r + 1)
    )
    rhs = _sign(n + r // 2) * binomial(n + r, r // 2) * (r if genocchi else 1)
    return XPoly.constant(lhs), XPoly.constant(rhs)


def _cor3(p, t):
    return _cor3_like(p, t, genocchi=False)


def _cor5(p, t):
    return _cor3_like(p, t, genocchi=True)


def _cor6(p, t):
    n, l = p.n, p.l
    neg = -X
    terms = [(binomial(n, k), genocchi_poly(l + k, t)) for k in range(n + 1)]
    terms += [(_sign(l + n) * binomial(l, k), genocchi_poly(n + k, t).compose(neg)) for k in range(l + 1)]
    return XPoly.linear_combination(terms), XPoly()


def _prop_e0(p, t):
    return t.poly(0), XPoly.constant(1)


def _prop_deriv(p, t):
    return t.poly(p.n).derivative(), t.poly(p.n - 1) * p.n


def addition_rhs(p: IdentityParams, t: EulerTable, printed: bool = False) -> XPoly:
    """``sum_k C(n,k) y^(n-k) E_k(x0)`` (``E_n(x0)`` in every term when ``printed``)."""
    n = p.n
    return XPoly.linear_combination(
        (t.poly(n if printed else k).evaluate(p.lam) * binomial(n, k), XPoly.monomial(n - k))
        for k in range(n + 1)
    )


def _prop_addition(p, t):
    return t.poly_at(p.n, X + XPoly.constant(p.lam)), addition_rhs(p, t)


def _prop_lambda(p, t):
    return lambda_apply(t.poly(p.n)), t.poly(p.n, shift=-1) * 2


def _prop_reflect(p, t):
    return t.poly_at(p.n, ALPHA - X), t.poly(p.n) * _sign(p.n)


def _lemma1(p, t):
    shifted = X + XPoly.constant(p.lam)
    return psi_apply(shifted ** p.n, 0, t), t.poly_at(p.n, shifted)


def _lemma2_r7(p, t):
    mono = XPoly.monomial(p.n)
    return psi_apply(mono, 0, t).derivative(), psi_apply(mono.derivative(), 0, t)


def _lemma2_r8(p, t):
    mono = XPoly.monomial(p.n)
    return psi_apply(lambda_apply(mono), 0, t), psi_apply(mono, -1, t) * 2


def _qk(p, t):
    return telescope_residual(p, t), XPoly()


# ------------------------------------------------------------- registry


def _no_check(p):
    pass


def _need_even_r(p):
    if p.r % 2:
        raise ParameterError("r must be even")


def _need_n_pos(p):
    if p.n < 1:
        raise ParameterError("n must be >= 1")


def _need_nl_pos(p):
    if p.n < 1 or p.l < 1:
        raise ParameterError("n and l must be >= 1 (G_0 is not defined)")


def _need_cor0(p):
    m, q, k = p.get("m"), p.get("q"), p.get("k")
    if k > min(m, p.n) + q:
        raise ParameterError("k must not exceed min(m, n) + q")


def _need_hu_kim(p):
    _need_cor0(p)
    if p.get("k") % 2 == 0:
        raise ParameterError("k must be odd")


@dataclass(frozen=True)
class _Entry:
    fields: tuple
    build: Callable
    check: Callable = _no_check
    depth: Callable = lambda p: 0


_T1_FIELDS = ("n", "l", "r", "s", "lambda")
_T1_DEPTH = lambda p: p.n + p.l + 2 * p.r  # noqa: E731
_COR0_DEPTH = lambda p: p.n + p.get("m") + 2 * p.get("q")  # noqa: E731

REGISTRY = {
    IdentityId.THM1: _Entry(_T1_FIELDS, _thm1, depth=_T1_DEPTH),
    IdentityId.THM1_EQ14: _Entry(_T1_FIELDS, _thm1_eq14, depth=_T1_DEPTH),
    IdentityId.COR1_R4: _Entry(("n", "l", "r", "lambda"), _cor1, depth=_T1_DEPTH),
    IdentityId.EQ_R2: _Entry(("n", "l"), _eq_r2, depth=lambda p: p.n + p.l),
    IdentityId.EQ_R24: _Entry(("n", "l"), _eq_r24, depth=lambda p: p.n + p.l + 1),
    IdentityId.EQ_R3: _Entry(("n", "l"), _eq_r3, depth=lambda p: p.n + p.l + 1),
    IdentityId.EQ_R5: _Entry(("n", "l", "lambda"), _eq_r5, depth=lambda p: p.n + p.l),
    IdentityId.COR0_R6: _Entry(("n", "m", "q", "k"), _cor0, _need_cor0, _COR0_DEPTH),
    IdentityId.HU_KIM: _Entry(("n", "m", "q", "k"), _hu_kim, _need_hu_kim, _COR0_DEPTH),
    IdentityId.COR2: _Entry(("n", "l", "r"), _cor2, depth=lambda p: p.n + p.l + p.r),
    IdentityId.COR3: _Entry(("n", "r"), _cor3, _need_even_r, lambda p: 2 * p.n + p.r),
    IdentityId.COR4: _Entry(("n", "l", "r"), _cor4, depth=lambda p: p.n + p.l + p.r),
    IdentityId.COR5: _Entry(("n", "r"), _cor5, _need_even_r, lambda p: 2 * p.n + p.r),
    IdentityId.COR6: _Entry(("n", "l"), _cor6, _need_nl_pos, lambda p: p.n + p.l),
    IdentityId.PROP_E0: _Entry((), _prop_e0),
    IdentityId.PROP_DERIV: _Entry(("n",), _prop_deriv, _need_n_pos, lambda p: p.n),
    IdentityId.PROP_ADDITION: _Entry(("n", "lambda"), _prop_addition, depth=lambda p: p.n),
    IdentityId.PROP_LAMBDA: _Entry(("n",), _prop_lambda, depth=lambda p: p.n),
    IdentityId.PROP_REFLECT: _Entry(("n",), _prop_reflect, depth=lambda p: p.n),
    IdentityId.LEMMA1: _Entry(("n", "lambda"), _lemma1, depth=lambda p: p.n),
    IdentityId.LEMMA2_R7: _Entry(("n",), _lemma2_r7, depth=lambda p: p.n),
    IdentityId.LEMMA2_R8: _Entry(("n",), _lemma2_r8, depth=lambda p: p.n),
    IdentityId.QK_TELESCOPE: _Entry(_T1_FIELDS, _qk, depth=_T1_DEPTH),
}


def check_params(identity: IdentityId, p: IdentityParams, table: EulerTable) -> None:
    """Raise :class:`ParameterError` unless ``p`` is in the identity's domain."""
    entry = REGISTRY[identity]
    for name in entry.fields:
        if name in ("m", "q", "k"):
            p.get(name)
    entry.check(p)
    try:
        table.require(entry.depth(p))
    except TableDepthError as exc:
        raise ParameterError(str(exc)) from None


def identity_sides(identity: IdentityId, p: IdentityParams, table: EulerTable) -> tuple:
    check_params(identity, p, table)
    return REGISTRY[identity].build(p, table)


def verify_identity(identity: IdentityId, p: IdentityParams, table: EulerTable) -> VerificationReport:
    """Build both sides and compare exactly; domain violations raise ParameterError."""
    start = time.perf_counter()
    lhs, rhs = identity_sides(identity, p, table)
    residual = lhs - rhs
    status = Status.HOLDS if residual.is_zero() else Status.FAILS
    return VerificationReport(identity, p, status, residual, time.perf_counter() - start)


# ---------------------------------------------------------------- probes


@dataclass(frozen=True)
class Candidate:
    """A named closed form; ``residual`` returns LHS minus that form."""

    name: str
    residual: Callable


def factor_candidate(name: str, factor: Callable) -> Candidate:
    """EQ_R3 candidate: right side ``factor(n, l)`` times the structural term."""

    def residual(p, t):
        return eq_r3_lhs(p, t) - eq_r3_structure(p, t) * Fraction(factor(p.n, p.l))

    return Candidate(name, residual)


EQ_R3_CANDIDATES = (
    factor_candidate("2(n+l+3)", lambda n, l: 2 * (n + l + 3)),
    factor_candidate("n+l+2", lambda n, l: n + l + 2),
    factor_candidate("n+l+3", lambda n, l: n + l + 3),
    factor_candidate("2(n+l+2)", lambda n, l: 2 * (n + l + 2)),
)

COR0_CANDIDATES = (
    Candidate("printed", lambda p, t: _cor0_sides(p, t, exp_first="n", binom_second="j")),
    Candidate("exponent fixed", lambda p, t: _cor0_sides(p, t, exp_first="m", binom_second="j")),
    Candidate("binomial fixed", lambda p, t: _cor0_sides(p, t, exp_first="n", binom_second="k")),
    Candidate("corrected", lambda p, t: _cor0_sides(p, t)),
)

HU_KIM_CANDIDATES = (
    Candidate("printed", lambda p, t: _cor0_sides(p, t, alpha_one=True, second_top=p.l + p.r)),
    Candidate("corrected", lambda p, t: _cor0_sides(p, t, alpha_one=True)),
)

EQ_7_CANDIDATES = (
    Candidate("printed", lambda p, t: _prop_addition(p, t)[0] - addition_rhs(p, t, printed=True)),
    Candidate("corrected", lambda p, t: _prop_addition(p, t)[0] - addition_rhs(p, t)),
)

DEFAULT_CANDIDATES = {
    ProbeId.EQ_R3: EQ_R3_CANDIDATES,
    ProbeId.COR0_R6_AS_PRINTED: COR0_CANDIDATES,
    ProbeId.HU_KIM_AS_PRINTED: HU_KIM_CANDIDATES,
    ProbeId.EQ_7_AS_PRINTED: EQ_7_CANDIDATES,
}

_PROBE_BASE = {
    ProbeId.EQ_R3: IdentityId.EQ_R3,
    ProbeId.COR0_R6_AS_PRINTED: IdentityId.COR0_R6,
    ProbeId.HU_KIM_AS_PRINTED: IdentityId.HU_KIM,
    ProbeId.EQ_7_AS_PRINTED: IdentityId.PROP_ADDITION,
}


@dataclass
class ProbeReport:
    probe: ProbeId
    params: IdentityParams
    residuals: dict
    solved_factor: Fraction | None = None
    errors: dict = field(default_factory=dict)

    @property
    def matches(self) -> list:
        return [name for name, res in self.residuals.items() if res.is_zero()]

    def describe(self) -> str:
        m = self.matches
        head = f"{self.probe.name} {self.params.to_dict()}: "
        head += ("matches " + ", ".join(m)) if m else "no candidate matches"
        if self.solved_factor is not None:
            head += f"; solved factor {format_rat(self.solved_factor)}"
        return head

    def to_dict(self) -> dict:
        return {
            "probe": self.probe.name,
            "params": self.params.to_dict(),
            "matches": self.matches,
            "residuals": {k: str(v) for k, v in self.residuals.items()},
            "errors": dict(self.errors),
            "solved_factor": None if self.solved_factor is None else format_rat(self.solved_factor),
        }


def solve_eq_r3_factor(p: IdentityParams, table: EulerTable) -> Fraction | None:
    """The constant ``c`` with LHS = c * structure, or None when no constant works."""
    lhs = eq_r3_lhs(p, table)
    quot, rem = lhs.divmod(eq_r3_structure(p, table))
    if not rem.is_zero() or quot.degree > 0:
        return None
    c = quot.coeff(0)
    return c.constant_value() if c.is_constant() else None


def residual_probe(probe: Union[ProbeId, str], p: IdentityParams, table: EulerTable,
                   candidates: Sequence[Candidate] | None = None) -> ProbeReport:
    """Evaluate every candidate closed form at ``p`` and report which ones vanish."""
    if isinstance(probe, str):
        probe = ProbeId.parse(probe)
    base = _PROBE_BASE[probe]
    if probe is ProbeId.HU_KIM_AS_PRINTED:
        _need_cor0(p)
    else:
        check_params(base, p, table)
    if candidates is None:
        candidates = DEFAULT_CANDIDATES[probe]
    report = ProbeReport(probe, p, {})
    for cand in candidates:
        try:
            report.residuals[cand.name] = cand.residual(p, table)
        except ParameterError as exc:
            report.errors[cand.name] = str(exc)
    if probe is ProbeId.EQ_R3:
        report.solved_factor = solve_eq_r3_factor(p, table)
    return report


# ------------------------------------------------------------------ grids

DEFAULT_LAMBDAS = ("0", "1", "-1", "1/2", "a")
_FIELD_ORDER = ("n", "l", "r", "s", "lambda", "m", "q", "k")


@dataclass(frozen=True)
class Grid:
    n: range = range(6)
    l: range = range(6)
    r: range = range(6)
    s: range = range(6)
    lambdas: tuple = DEFAULT_LAMBDAS
    m: range = range(6)
    q: range = range(6)
    k: range = range(6)

    @classmethod
    def uniform(cls, top: int, lambdas: Iterable[str] = DEFAULT_LAMBDAS) -> "Grid":
        rg = range(top + 1)
        return cls(rg, rg, rg, rg, tuple(lambdas), rg, rg, rg)

    def points(self, identity: IdentityId):
        """Parameter points in lexicographic (n, l, r, s, lambda-index, m, q, k) order."""
        fields = REGISTRY[identity].fields
        axes = []
        for name in _FIELD_ORDER:
            if name not in fields:
                continue
            axes.append(range(len(self.lambdas)) if name == "lambda" else getattr(self, name))
        for combo in itertools.product(*axes):
            vals = dict(zip((f for f in _FIELD_ORDER if f in fields), combo))
            extra = {k: vals[k] for k in ("m", "q", "k") if k in vals}
            lam = parse_lambda(self.lambdas[vals["lambda"]]) if "lambda" in vals else AlphaPoly()
            yield IdentityParams(vals.get("n", 0), vals.get("l", 0), vals.get("r", 0),
                                 vals.get("s", 0), lam, extra)


@dataclass
class GridResult:
    reports: list

    def summary(self) -> dict:
        out: dict = {}
        for rep in self.reports:
            counts = out.setdefault(rep.identity.name, {s.value: 0 for s in Status})
            counts[rep.status.value] += 1
        return out

    def totals(self) -> dict:
        tot = {s.value: 0 for s in Status}
        for rep in self.reports:
            tot[rep.status.value] += 1
        return tot

    @property
    def all_hold(self) -> bool:
        return all(rep.status is Status.HOLDS for rep in self.reports)

    def to_json(self) -> str:
        return json.dumps(
            {"reports": [r.to_dict() for r in self.reports],
             "summary": self.summary(), "totals": self.totals()},
            indent=1,
        )


def _run_point(identity, p, table, skip_invalid):
    try:
        check_params(identity, p, table)
    except ParameterError as exc:
        if skip_invalid:
            return None
        return VerificationReport(identity, p, Status.USAGE_ERROR, None, 0.0, str(exc))
    return verify_identity(identity, p, table)


_WORKER_TABLE = None


def _worker_init(table):
    global _WORKER_TABLE
    _WORKER_TABLE = table


def _worker_run(args):
    identity, p, skip_invalid = args
    return _run_point(identity, p, _WORKER_TABLE, skip_invalid)


def grid_verify(ids: Iterable[IdentityId], grid: Grid, table: EulerTable,
                skip_invalid: bool = False, jobs: int = 1) -> GridResult:
    """One report per (identity, point) in deterministic order.

    Points outside an identity's domain become USAGE_ERROR reports, or are
    dropped when ``skip_invalid`` is set. ``jobs > 1`` fans out to worker
    processes; report order is unaffected.
    """
    order = {ident: i for i, ident in enumerate(IdentityId)}
    idents = sorted(set(ids), key=order.__getitem__)
    tasks = [(ident, p, skip_invalid) for ident in idents for p in grid.points(ident)]
    if jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(jobs, initializer=_worker_init, initargs=(table,)) as pool:
            results = list(pool.map(_worker_run, tasks, chunksize=max(1, len(tasks) // (8 * jobs))))
    else:
        results = [_run_point(i, p, table, s) for i, p, s in tasks]
    return GridResult([r for r in results if r is not None])


__all__ = [
    "IdentityId", "ProbeId", "Status", "IdentityParams", "VerificationReport", "ParameterError",
    "Candidate", "ProbeReport", "Grid", "GridResult", "DEFAULT_LAMBDAS", "REGISTRY",
    "theorem1_lhs", "theorem1_rhs", "theorem1_rhs_expanded", "telescope_q", "telescope_residual",
    "identity_sides", "verify_identity", "check_params", "residual_probe", "factor_candidate",
    "solve_eq_r3_factor", "grid_verify", "parse_lambda", "addition_rhs",
]
