"""Iterated torus knots, their Alexander and Blanchfield data, Seifert forms
of T(2,q), Levine-Tristram jumps and genus arithmetic."""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from functools import lru_cache
from typing import Iterable, Iterator, Mapping, Sequence

from .exact import Cyclotomic, UnitAngle, eval_angle
from .laurent import CycLaurent, RootScopeError, _extract_roots, det_laurent
from .witt import HermitianAtom, JumpFunction, WittElement, jump_function

__all__ = [
    "CableWord",
    "KnotExpr",
    "BlanchfieldSymbol",
    "SliceStatus",
    "UnsupportedKnotError",
    "torus_alexander",
    "alexander",
    "fox_milnor_is_norm",
    "is_algebraic_knot",
    "seifert_matrix_T2q",
    "alpha_atom",
    "lt_jump",
    "blanchfield_symbol",
    "is_algebraically_slice",
    "genus_positive",
    "tau_s",
    "four_ball_genus_bound",
    "alexander_orders",
]


class UnsupportedKnotError(ValueError):
    """The requested computation is not available for this cable pattern."""


@dataclass(frozen=True)
class CableWord:
    """Stages (p_i, q_i) applied innermost first to the unknot."""

    stages: tuple[tuple[int, int], ...] = ()

    def __post_init__(self):
        st = tuple((int(p), int(q)) for p, q in self.stages)
        for p, q in st:
            if p < 2:
                raise ValueError(f"cable index p={p} must be at least 2")
            if math.gcd(p, q) != 1:
                raise ValueError(f"cable indices ({p},{q}) are not coprime")
        object.__setattr__(self, "stages", st)

    @classmethod
    def torus(cls, p: int, q: int) -> CableWord:
        return cls(((p, q),))

    def canonical(self) -> tuple[CableWord, int]:
        """An equal-or-inverse canonical word and the sign relating them.

        (-K)_{p,q} = -(K_{p,-q}), so the innermost q can be made positive by
        negating every q.  Trivial innermost stages T(p,+-1) are dropped, and
        the innermost torus pair is sorted since T(p,q) = T(q,p).
        """
        st = list(self.stages)
        while st and abs(st[0][1]) == 1:
            st.pop(0)
        if not st:
            return CableWord(()), 1
        sign = 1
        if st[0][1] < 0:
            st = [(p, -q) for p, q in st]
            sign = -1
        p, q = st[0]
        st[0] = (min(p, q), max(p, q))
        return CableWord(tuple(st)), sign

    def is_unknot(self) -> bool:
        return not self.canonical()[0].stages

    def is_positive(self) -> bool:
        return all(p > 0 and q > 0 for p, q in self.stages)

    def cable(self, p: int, q: int) -> CableWord:
        return CableWord(self.stages + ((p, q),))

    def __str__(self) -> str:
        if not self.stages:
            return "U"
        return "T(" + ";".join(f"{p},{q}" for p, q in self.stages) + ")"


class KnotExpr:
    """A formal integer combination of iterated torus knots."""

    def __init__(self, terms: Iterable[tuple[CableWord, int]] | Mapping[CableWord, int] = ()):
        items = terms.items() if isinstance(terms, Mapping) else terms
        acc: dict[CableWord, int] = {}
        for w, n in items:
            cw, sign = w.canonical()
            if not cw.stages or n == 0:
                continue
            acc[cw] = acc.get(cw, 0) + sign * int(n)
        self._terms = {w: n for w, n in acc.items() if n}

    @classmethod
    def of(cls, w: CableWord, n: int = 1) -> KnotExpr:
        return cls([(w, n)])

    @classmethod
    def torus(cls, p: int, q: int, n: int = 1) -> KnotExpr:
        return cls([(CableWord.torus(p, q), n)])

    @property
    def terms(self) -> dict[CableWord, int]:
        return dict(self._terms)

    def items(self) -> list[tuple[CableWord, int]]:
        return list(self._terms.items())

    def __iter__(self) -> Iterator[tuple[CableWord, int]]:
        return iter(self.items())

    def __len__(self) -> int:
        return len(self._terms)

    def is_empty(self) -> bool:
        return not self._terms

    def __add__(self, other: KnotExpr) -> KnotExpr:
        return KnotExpr(self.items() + other.items())

    def __neg__(self) -> KnotExpr:
        return KnotExpr([(w, -n) for w, n in self.items()])

    def __sub__(self, other: KnotExpr) -> KnotExpr:
        return self + (-other)

    def __mul__(self, k: int) -> KnotExpr:
        return KnotExpr([(w, n * k) for w, n in self.items()])

    __rmul__ = __mul__

    def __eq__(self, other) -> bool:
        return isinstance(other, KnotExpr) and self._terms == other._terms

    def __hash__(self) -> int:
        return hash(frozenset(self._terms.items()))

    def __str__(self) -> str:
        if not self._terms:
            return "U"
        out = []
        for i, (w, n) in enumerate(self._terms.items()):
            mag = "" if abs(n) == 1 else f"{abs(n)}*"
            if i == 0:
                out.append(("-" if n < 0 else "") + mag + str(w))
            else:
                out.append((" - " if n < 0 else " + ") + mag + str(w))
        return "".join(out)

    def __repr__(self) -> str:
        return f"KnotExpr({str(self)!r})"


# -- Blanchfield symbols ------------------------------------------------------

Generator = tuple[tuple[int, int], int]


class BlanchfieldSymbol:
    """sum n * Bl_{T(p,q)}(t^k) over torus generators ((p,q),k)."""

    def __init__(self, terms: Mapping[Generator, int] | Iterable[tuple[Generator, int]] = ()):
        items = terms.items() if isinstance(terms, Mapping) else terms
        acc: dict[Generator, int] = {}
        for g, n in items:
            acc[g] = acc.get(g, 0) + n
        self._terms = {g: n for g, n in sorted(acc.items()) if n}

    @property
    def terms(self) -> dict[Generator, int]:
        return dict(self._terms)

    def items(self) -> list[tuple[Generator, int]]:
        return list(self._terms.items())

    def is_zero(self) -> bool:
        return not self._terms

    def __add__(self, other: BlanchfieldSymbol) -> BlanchfieldSymbol:
        return BlanchfieldSymbol(self.items() + other.items())

    def __eq__(self, other) -> bool:
        return isinstance(other, BlanchfieldSymbol) and self._terms == other._terms

    def __str__(self) -> str:
        if not self._terms:
            return "0"
        return " + ".join(f"{n}*Bl_T({p},{q})(t^{k})" for ((p, q), k), n in self._terms.items())


def _word_generators(w: CableWord) -> list[tuple[Generator, int]]:
    """Expansion of one word: Bl_{K_{p,q}}(t) = Bl_K(t^p) + Bl_{T(p,q)}(t)."""
    out = []
    st = w.stages
    for i, (p, q) in enumerate(st):
        if abs(q) == 1:
            continue
        k = 1
        for p_out, _ in st[i + 1:]:
            k *= p_out
        sign = 1 if q > 0 else -1
        out.append((((min(p, abs(q)), max(p, abs(q))), k), sign))
    return out


def blanchfield_symbol(e: KnotExpr | CableWord) -> BlanchfieldSymbol:
    if isinstance(e, CableWord):
        e = KnotExpr.of(e)
    items = []
    for w, n in e.items():
        for g, s in _word_generators(w):
            items.append((g, s * n))
    return BlanchfieldSymbol(items)


# -- Alexander polynomials -------------------------------------------------------

def _int_div(num: list[int], den: list[int]) -> list[int]:
    num = list(num)
    dd = len(den) - 1
    if den[-1] not in (1, -1):
        raise ArithmeticError("divisor must be monic up to sign")
    quot = [0] * (len(num) - dd)
    for i in range(len(num) - 1, dd - 1, -1):
        c = num[i] * den[-1]
        if c:
            quot[i - dd] = c
            for j in range(dd + 1):
                num[i - dd + j] -= c * den[j]
    if any(num):
        raise ArithmeticError("inexact polynomial division")
    return quot


def _int_mul(a: list[int], b: list[int]) -> list[int]:
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return out


@lru_cache(maxsize=None)
def _torus_alex_coeffs(p: int, q: int) -> tuple[int, ...]:
    def xm1(n):
        return [-1] + [0] * (n - 1) + [1]

    num = _int_mul(xm1(p * q), xm1(1))
    den = _int_mul(xm1(p), xm1(q))
    return tuple(_int_div(num, den))


def torus_alexander(p: int, q: int) -> CycLaurent:
    """(t^{pq}-1)(t-1)/((t^p-1)(t^q-1)) as an exact polynomial."""
    if p < 2 or q < 2:
        raise ValueError("torus indices must be at least 2 (use |q| for mirrors)")
    if math.gcd(p, q) != 1:
        raise ValueError(f"torus indices ({p},{q}) are not coprime")
    return CycLaurent.from_coeffs(_torus_alex_coeffs(p, q))


def _word_alexander(w: CableWord) -> CycLaurent:
    out = CycLaurent.const(1)
    for ((p, q), k), _ in _word_generators(w):
        out = out * torus_alexander(p, q).substitute_power(k)
    return out


def alexander(e: KnotExpr | CableWord) -> CycLaurent:
    """Product of the Alexander polynomials of every constituent, with multiplicity |n|."""
    if isinstance(e, CableWord):
        return _word_alexander(e)
    out = CycLaurent.const(1)
    for w, n in e.items():
        out = out * _word_alexander(w) ** abs(n)
    return out


def alexander_orders(e: KnotExpr | CableWord) -> set[int]:
    """Root orders that cover every root of the Alexander polynomial."""
    if isinstance(e, CableWord):
        e = KnotExpr.of(e)
    orders = {1}
    for w, _ in e.items():
        for ((p, q), k), _ in _word_generators(w):
            orders.add(p * q * k)
    return orders


def fox_milnor_is_norm(f: CycLaurent, candidate_orders: Iterable[int]) -> bool:
    """True iff every unit-root factor of f occurs to an even power."""
    mult, cof = _extract_roots(f, candidate_orders)
    if not cof.is_monomial():
        raise RootScopeError(f"cofactor {cof} has roots outside the candidate orders")
    return all(k % 2 == 0 for k in mult.values())


def is_algebraic_knot(w: CableWord) -> bool:
    st = w.stages
    if not st:
        return False
    if not all(p > 0 and q > 0 for p, q in st):
        return False
    return all(st[i + 1][1] > st[i][0] * st[i][1] * st[i + 1][0] for i in range(len(st) - 1))


# -- Seifert forms and Witt classes --------------------------------------------------

@lru_cache(maxsize=None)
def _seifert(q: int) -> tuple[tuple[int, ...], ...]:
    n = q - 1
    v = [[0] * n for _ in range(n)]
    for i in range(n):
        v[i][i] = -1
        if i + 1 < n:
            v[i][i + 1] = 1
    # det(xV - V^T) must reproduce the Alexander polynomial exactly
    x = CycLaurent.t()
    m = [[x * v[i][j] - v[j][i] for j in range(n)] for i in range(n)]
    if det_laurent(m) != torus_alexander(2, q):
        raise AssertionError(f"Seifert matrix for T(2,{q}) fails the Alexander check")
    return tuple(tuple(r) for r in v)


def seifert_matrix_T2q(q: int) -> list[list[int]]:
    """A genus (q-1)/2 Seifert matrix of T(2,q): -1 on the diagonal, +1 above it."""
    if q < 3 or q % 2 == 0:
        raise ValueError(f"T(2,q) needs odd q >= 3, got {q}")
    return [list(r) for r in _seifert(q)]


@lru_cache(maxsize=None)
def _alpha_torus_atom(q: int, k: int, shift: UnitAngle) -> HermitianAtom:
    """(1-x)V + (1-1/x)V^T + (-1) with x = c t^k, c = exp(2 pi i shift)."""
    v = _seifert(q)
    n = q - 1
    c = eval_angle(shift)
    x = CycLaurent({k: c})
    xinv = x.involution()
    one = CycLaurent.const(1)
    zero = CycLaurent()
    rows = [[zero] * (n + 1) for _ in range(n + 1)]
    for i in range(n):
        for j in range(n):
            e = zero
            if v[i][j]:
                e = e + (one - x) * v[i][j]
            if v[j][i]:
                e = e + (one - xinv) * v[j][i]
            rows[i][j] = e
    rows[n][n] = CycLaurent.const(-1)
    order = 2 * q * shift.den // math.gcd(2 * q, shift.den) * k
    return HermitianAtom(rows, orders={order}, label=("alpha", q, k, shift))


def alpha_atom(w: CableWord | KnotExpr, translate: UnitAngle = UnitAngle(0)) -> WittElement:
    """The Witt class alpha_K(omega t) of a 2-stranded iterated cable.

    Each torus generator ((2,q),k) of the Blanchfield expansion contributes the
    Seifert-form atom of T(2,q) with x = (omega t)^k.
    """
    e = KnotExpr.of(w) if isinstance(w, CableWord) else w
    out = WittElement()
    for (gen, k), n in blanchfield_symbol(e).items():
        p, q = gen
        if p != 2:
            raise UnsupportedKnotError(f"no Seifert-form data for the torus stage T({p},{q})")
        shift = translate ** k
        out = out + WittElement.of(_alpha_torus_atom(q, k, shift), n)
    return out


@lru_cache(maxsize=None)
def _torus_jumps(q: int) -> JumpFunction:
    return jump_function(alpha_atom(CableWord.torus(2, q)))


def lt_jump(e: KnotExpr | CableWord) -> JumpFunction:
    """Levine-Tristram jump function (half-jumps of the signature function)."""
    out = JumpFunction()
    for ((p, q), k), n in blanchfield_symbol(e).items():
        if p != 2:
            raise UnsupportedKnotError(f"exact jump signs are not available for T({p},{q})")
        out = out + _torus_jumps(q).pullback(k).scale(n)
    return out


class SliceStatus(str, Enum):
    ZERO_CERTIFICATE = "ZERO_CERTIFICATE"
    NONZERO = "NONZERO"
    UNKNOWN = "UNKNOWN"


def is_algebraically_slice(e: KnotExpr) -> SliceStatus:
    zero_symbol = blanchfield_symbol(e).is_zero()
    try:
        jumps_nonzero = not lt_jump(e).is_zero()
    except UnsupportedKnotError:
        jumps_nonzero = False
    if zero_symbol and jumps_nonzero:
        raise AssertionError("vanishing Blanchfield symbol with nonzero signature jumps")
    if zero_symbol:
        return SliceStatus.ZERO_CERTIFICATE
    if jumps_nonzero:
        return SliceStatus.NONZERO
    return SliceStatus.UNKNOWN


# -- genus arithmetic ----------------------------------------------------------

def genus_positive(w: CableWord) -> int:
    """Seifert genus from g(K_{p,q}) = p g(K) + g(T(p,q)) and 2 g(T(p,q)) = (p-1)(q-1)."""
    if not w.is_positive():
        raise ValueError(f"{w} is not positively iterated")
    g = 0
    for p, q in w.stages:
        g = p * g + (p - 1) * (q - 1) // 2
    return g


def tau_s(e: KnotExpr) -> tuple[int, int]:
    """(tau, s/2) of a combination of positively iterated torus knots."""
    total = 0
    for w, n in e.items():
        total += n * genus_positive(w)
    return total, total


def four_ball_genus_bound(e: KnotExpr) -> dict | None:
    """For K_{2,q1} - K_{2,q2} - T(2,q1) + T(2,q2) report the band-move bound g4 <= 1."""
    terms = e.terms
    if len(terms) != 4 or sorted(abs(n) for n in terms.values()) != [1, 1, 1, 1]:
        return None
    cables = [(w, n) for w, n in terms.items() if len(w.stages) >= 2]
    tori = [(w, n) for w, n in terms.items() if len(w.stages) == 1]
    if len(cables) != 2 or len(tori) != 2:
        return None
    (w1, n1), (w2, n2) = sorted(cables, key=lambda x: -x[1])
    if n1 != 1 or n2 != -1 or w1.stages[:-1] != w2.stages[:-1]:
        return None
    (p1, q1), (p2, q2) = w1.stages[-1], w2.stages[-1]
    if p1 != 2 or p2 != 2:
        return None
    want = {CableWord.torus(2, q1).canonical()[0]: -1, CableWord.torus(2, q2).canonical()[0]: 1}
    if dict(tori) != want:
        return None
    return {
        "pattern": "K_{2,q1} - K_{2,q2} - T(2,q1) + T(2,q2)",
        "companion": str(CableWord(w1.stages[:-1])),
        "q1": q1,
        "q2": q2,
        "four_ball_genus_at_most": 1,
    }
