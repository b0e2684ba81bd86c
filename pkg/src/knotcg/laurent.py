"""Laurent polynomials over cyclotomic fields and their classes modulo norms."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Mapping, Sequence, Union

from .exact import Cyclotomic, UnitAngle, cyclotomic_poly, eval_angle

__all__ = [
    "CycLaurent",
    "CanonicalDisc",
    "RootScopeError",
    "involution_J",
    "is_symmetric",
    "eval_at",
    "unit_root_roots",
    "norm_reduce",
    "canonical_representative",
    "det_laurent",
    "angles_of_orders",
]

Coeff = Union[int, Fraction, Cyclotomic]


class RootScopeError(ValueError):
    """A polynomial has roots that are not roots of unity of the supplied orders."""


class CycLaurent:
    """A Laurent polynomial sum c_e t^e with cyclotomic coefficients."""

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Mapping[int, Coeff] | None = None):
        clean: dict[int, Cyclotomic] = {}
        if terms:
            for e, c in terms.items():
                c = Cyclotomic.coerce(c)
                if not c.is_zero():
                    clean[int(e)] = c
        self._terms = clean
        self._hash = None

    @classmethod
    def _raw(cls, terms: dict[int, Cyclotomic]) -> CycLaurent:
        obj = cls.__new__(cls)
        obj._terms = terms
        obj._hash = None
        return obj

    @classmethod
    def const(cls, c: Coeff) -> CycLaurent:
        return cls({0: c})

    @classmethod
    def t(cls, k: int = 1) -> CycLaurent:
        return cls({k: 1})

    @classmethod
    def from_coeffs(cls, coeffs: Sequence[Coeff], shift: int = 0) -> CycLaurent:
        """Build sum coeffs[i] t^(i+shift)."""
        return cls({i + shift: c for i, c in enumerate(coeffs)})

    @classmethod
    def linear(cls, root: Coeff) -> CycLaurent:
        """The factor t - root."""
        return cls({1: 1, 0: -Cyclotomic.coerce(root)})

    @staticmethod
    def coerce(x) -> CycLaurent:
        if isinstance(x, CycLaurent):
            return x
        return CycLaurent.const(x)

    # -- accessors ----------------------------------------------------------
    @property
    def terms(self) -> dict[int, Cyclotomic]:
        return dict(self._terms)

    def items(self):
        return sorted(self._terms.items())

    def coeff(self, e: int) -> Cyclotomic:
        return self._terms.get(e, Cyclotomic.rational(0))

    def is_zero(self) -> bool:
        return not self._terms

    def min_exp(self) -> int:
        return min(self._terms)

    def max_exp(self) -> int:
        return max(self._terms)

    def span(self) -> int:
        return self.max_exp() - self.min_exp() if self._terms else -1

    def is_monomial(self) -> bool:
        return len(self._terms) == 1

    def is_rational(self) -> bool:
        return all(c.is_rational() for c in self._terms.values())

    def conductor(self) -> int:
        m = 1
        for c in self._terms.values():
            m = m * c.conductor // math.gcd(m, c.conductor)
        return m

    # -- arithmetic ---------------------------------------------------------
    def __add__(self, other) -> CycLaurent:
        try:
            other = CycLaurent.coerce(other)
        except TypeError:
            return NotImplemented
        out = dict(self._terms)
        for e, c in other._terms.items():
            s = out.get(e)
            s = c if s is None else s + c
            if s.is_zero():
                out.pop(e, None)
            else:
                out[e] = s
        return CycLaurent._raw(out)

    __radd__ = __add__

    def __neg__(self) -> CycLaurent:
        return CycLaurent._raw({e: -c for e, c in self._terms.items()})

    def __sub__(self, other) -> CycLaurent:
        try:
            other = CycLaurent.coerce(other)
        except TypeError:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other) -> CycLaurent:
        return CycLaurent.coerce(other) - self

    def __mul__(self, other) -> CycLaurent:
        if isinstance(other, (int, Fraction, Cyclotomic)):
            c = Cyclotomic.coerce(other)
            if c.is_zero():
                return CycLaurent()
            return CycLaurent._raw({e: v * c for e, v in self._terms.items()})
        if not isinstance(other, CycLaurent):
            return NotImplemented
        out: dict[int, Cyclotomic] = {}
        for e1, c1 in self._terms.items():
            for e2, c2 in other._terms.items():
                e = e1 + e2
                prod = c1 * c2
                s = out.get(e)
                out[e] = prod if s is None else s + prod
        return CycLaurent._raw({e: c for e, c in out.items() if not c.is_zero()})

    __rmul__ = __mul__

    def __pow__(self, k: int) -> CycLaurent:
        if k < 0:
            if not self.is_monomial():
                raise ValueError("only monomials are invertible in the Laurent ring")
            ((e, c),) = self._terms.items()
            return CycLaurent._raw({-e * (-k): c.inverse() ** (-k)})
        result, base = CycLaurent.const(1), self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def divmod(self, other: CycLaurent) -> tuple[CycLaurent, CycLaurent]:
        """Division in the polynomial ring after shifting both to exponent 0."""
        if other.is_zero():
            raise ZeroDivisionError("division by the zero polynomial")
        if self.is_zero():
            return CycLaurent(), CycLaurent()
        a_min, b_min = self.min_exp(), other.min_exp()
        num = [Cyclotomic.rational(0)] * (self.max_exp() - a_min + 1)
        for e, c in self._terms.items():
            num[e - a_min] = c
        db = other.max_exp() - b_min
        den = [other.coeff(b_min + i) for i in range(db + 1)]
        lead_inv = den[-1].inverse()
        quot: dict[int, Cyclotomic] = {}
        for i in range(len(num) - 1, db - 1, -1):
            c = num[i]
            if c.is_zero():
                continue
            q = c * lead_inv
            quot[i - db] = q
            for j in range(db + 1):
                if not den[j].is_zero():
                    num[i - db + j] = num[i - db + j] - q * den[j]
        rem = {i + a_min: c for i, c in enumerate(num[:db]) if not c.is_zero()}
        shift = a_min - b_min
        return (
            CycLaurent._raw({e + shift: c for e, c in quot.items()}),
            CycLaurent._raw(rem),
        )

    def exact_div(self, other: CycLaurent) -> CycLaurent:
        q, r = self.divmod(other)
        if not r.is_zero():
            raise ArithmeticError("inexact Laurent polynomial division")
        return q

    def __truediv__(self, other) -> CycLaurent:
        if isinstance(other, (int, Fraction, Cyclotomic)):
            inv = Cyclotomic.coerce(other).inverse()
            return self * inv
        if isinstance(other, CycLaurent):
            return self.exact_div(other)
        return NotImplemented

    def divides(self, other: CycLaurent) -> bool:
        return other.divmod(self)[1].is_zero()

    # -- substitutions ------------------------------------------------------
    def involution(self) -> CycLaurent:
        """f(t) -> conj(f)(1/t)."""
        return CycLaurent._raw({-e: c.conj() for e, c in self._terms.items()})

    def is_symmetric(self) -> bool:
        return self.involution() == self

    def substitute_power(self, k: int) -> CycLaurent:
        """f(t) -> f(t^k)."""
        if k == 0:
            raise ValueError("substitution exponent must be nonzero")
        return CycLaurent._raw({e * k: c for e, c in self._terms.items()})

    def translate(self, omega: UnitAngle) -> CycLaurent:
        """f(t) -> f(omega t)."""
        if omega.num == 0:
            return self
        return CycLaurent._raw({e: c * eval_angle(omega ** e) for e, c in self._terms.items()})

    def eval_at(self, omega: UnitAngle) -> Cyclotomic:
        return self.eval_cyc_power(omega)

    def eval_cyc_power(self, omega: UnitAngle) -> Cyclotomic:
        total = Cyclotomic.rational(0)
        for e, c in self._terms.items():
            total = total + c * eval_angle(omega ** e)
        return total

    def eval_value(self, x: Coeff) -> Cyclotomic:
        x = Cyclotomic.coerce(x)
        total = Cyclotomic.rational(0)
        for e, c in self._terms.items():
            total = total + c * (x ** e)
        return total

    def normalize_shift(self) -> CycLaurent:
        """Shift so the lowest exponent is 0."""
        if self.is_zero():
            return self
        return self * CycLaurent.t(-self.min_exp())

    # -- comparison ---------------------------------------------------------
    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction, Cyclotomic)):
            other = CycLaurent.const(other)
        if not isinstance(other, CycLaurent):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    def __repr__(self) -> str:
        return f"CycLaurent({self})"

    def __str__(self) -> str:
        if not self._terms:
            return "0"
        parts = []
        for e, c in sorted(self._terms.items(), reverse=True):
            cs = str(c)
            if not c.is_rational():
                cs = f"({cs})"
            if e == 0:
                parts.append(cs)
                continue
            mono = "t" if e == 1 else f"t^{e}"
            if cs == "1":
                parts.append(mono)
            elif cs == "-1":
                parts.append("-" + mono)
            else:
                parts.append(f"{cs}*{mono}")
        return " + ".join(parts).replace("+ -", "- ")


def involution_J(f: CycLaurent) -> CycLaurent:
    return f.involution()


def is_symmetric(f: CycLaurent) -> bool:
    return f.is_symmetric()


def eval_at(f: CycLaurent, omega: UnitAngle) -> Cyclotomic:
    return f.eval_at(omega)


# -- roots of unity ---------------------------------------------------------

def angles_of_orders(orders: Iterable[int]) -> list[UnitAngle]:
    """All angles c/d with d in orders, as a sorted list without repeats."""
    seen = set()
    for d in orders:
        if d < 1:
            raise ValueError("root orders must be positive")
        for c in range(d):
            seen.add(UnitAngle(c, d))
    return sorted(seen)


def _divisors(n: int) -> list[int]:
    return [d for d in range(1, n + 1) if n % d == 0]


@lru_cache(maxsize=None)
def _phi_laurent(n: int) -> CycLaurent:
    return CycLaurent.from_coeffs(cyclotomic_poly(n))


def _divide_linear(f: CycLaurent, root: Cyclotomic) -> CycLaurent | None:
    """Quotient of f by (t - root), or None if root is not a root of f."""
    lo, hi = f.min_exp(), f.max_exp()
    acc = Cyclotomic.rational(0)
    quot: dict[int, Cyclotomic] = {}
    for e in range(hi, lo - 1, -1):
        acc = acc * root + f.coeff(e)
        if e > lo:
            if not acc.is_zero():
                quot[e - 1] = acc
    if not acc.is_zero():
        return None
    return CycLaurent._raw(quot)


def _extract_roots(f: CycLaurent, orders: Iterable[int]) -> tuple[dict[UnitAngle, int], CycLaurent]:
    if f.is_zero():
        raise ValueError("the zero polynomial has no well-defined roots")
    orders = sorted(set(orders))
    mult: dict[UnitAngle, int] = {}
    if f.is_rational():
        ns = sorted({n for d in orders for n in _divisors(d)})
        cof = f
        for n in ns:
            phi = _phi_laurent(n)
            k = 0
            while cof.span() >= phi.span():
                q, r = cof.divmod(phi)
                if not r.is_zero():
                    break
                cof, k = q, k + 1
            if k:
                for c in range(n):
                    if math.gcd(c, n) == 1:
                        mult[UnitAngle(c, n)] = k
        return mult, cof
    cof = f
    for ang in angles_of_orders(orders):
        z = eval_angle(ang)
        k = 0
        while cof.span() > 0:
            q = _divide_linear(cof, z)
            if q is None:
                break
            cof, k = q, k + 1
        if k:
            mult[ang] = k
    return mult, cof


def unit_root_roots(f: CycLaurent, candidate_orders: Iterable[int]) -> dict[UnitAngle, int]:
    """Roots of unity of the given orders among the roots of f, with multiplicity."""
    mult, _ = _extract_roots(f, candidate_orders)
    return dict(sorted(mult.items()))


@dataclass(frozen=True)
class CanonicalDisc:
    """A class of symmetric rational functions modulo +-norms, given by its root set."""

    roots: frozenset

    def __init__(self, roots: Iterable[UnitAngle] = ()):
        object.__setattr__(self, "roots", frozenset(roots))

    def __mul__(self, other: CanonicalDisc) -> CanonicalDisc:
        return CanonicalDisc(self.roots ^ other.roots)

    def __pow__(self, k: int) -> CanonicalDisc:
        return self if k % 2 else CanonicalDisc()

    def is_trivial(self) -> bool:
        return not self.roots

    def contains(self, omega: UnitAngle) -> bool:
        return omega in self.roots

    def sorted_roots(self) -> list[UnitAngle]:
        return sorted(self.roots)

    def representative(self) -> CycLaurent:
        return canonical_representative(self.sorted_roots())

    def __str__(self) -> str:
        return "{" + ", ".join(str(r) for r in self.sorted_roots()) + "}"


def norm_reduce(
    f: Union[CycLaurent, tuple[CycLaurent, CycLaurent]],
    candidate_orders: Iterable[int],
    up_to_units: bool = False,
) -> CanonicalDisc:
    """Canonical class of a symmetric f (or numerator/denominator pair) modulo +-norms.

    With up_to_units the symmetry check is skipped: the input is then only
    required to be a unit multiple a t^k of a symmetric function, which is how
    twisted polynomials are normally known.
    """
    orders = list(candidate_orders)
    if isinstance(f, tuple):
        num, den = f
    else:
        num, den = f, CycLaurent.const(1)
    if num.is_zero() or den.is_zero():
        raise ValueError("norm_reduce needs a nonzero function")
    if not up_to_units:
        if not (num * den.involution()).is_symmetric():
            raise ValueError("norm_reduce needs a symmetric function")
    parity: dict[UnitAngle, int] = {}
    for part, sign in ((num, 1), (den, -1)):
        mult, cof = _extract_roots(part, orders)
        if not cof.is_monomial():
            raise RootScopeError(
                f"cofactor {cof} has roots outside the candidate orders {sorted(set(orders))}"
            )
        for ang, k in mult.items():
            parity[ang] = parity.get(ang, 0) + sign * k
    return CanonicalDisc(a for a, k in parity.items() if k % 2)


def canonical_representative(angles: Sequence[UnitAngle]) -> CycLaurent:
    """a t^-n prod (t - w_i) with a^2 = 1/prod w_i, for an even number of angles.

    The scalar root a = exp(-pi i sum(theta_i)) lies in a cyclotomic field.
    """
    if len(angles) % 2:
        raise ValueError("a canonical representative needs an even number of roots")
    n = len(angles) // 2
    prod = CycLaurent.const(1)
    total = Fraction(0)
    for a in angles:
        prod = prod * CycLaurent.linear(eval_angle(a))
        total += a.fraction
    scalar = eval_angle(UnitAngle(-total / 2))
    return prod * CycLaurent({-n: scalar})


# -- determinants -----------------------------------------------------------

def det_laurent(matrix: Sequence[Sequence[CycLaurent]]) -> CycLaurent:
    """Determinant by fraction-free (Bareiss) elimination in the Laurent ring."""
    n = len(matrix)
    if n == 0:
        return CycLaurent.const(1)
    a = [[CycLaurent.coerce(x) for x in row] for row in matrix]
    if any(len(row) != n for row in a):
        raise ValueError("determinant of a non-square matrix")
    if all(a[i][j].is_zero() for i in range(n) for j in range(n) if abs(i - j) > 1):
        # continuant recurrence, no divisions
        prev2, prev = CycLaurent.const(1), a[0][0]
        for k in range(1, n):
            cur = a[k][k] * prev
            off = a[k - 1][k] * a[k][k - 1]
            if not off.is_zero():
                cur = cur - off * prev2
            prev2, prev = prev, cur
        return prev
    sign = 1
    prev = CycLaurent.const(1)
    for k in range(n - 1):
        if a[k][k].is_zero():
            swap = next((i for i in range(k + 1, n) if not a[i][k].is_zero()), None)
            if swap is None:
                return CycLaurent()
            a[k], a[swap] = a[swap], a[k]
            sign = -sign
        piv = a[k][k]
        for i in range(k + 1, n):
            aik = a[i][k]
            row_i, row_k = a[i], a[k]
            for j in range(k + 1, n):
                val = piv * row_i[j]
                if not aik.is_zero() and not row_k[j].is_zero():
                    val = val - aik * row_k[j]
                if not val.is_zero() and prev != 1:
                    val = val.exact_div(prev)
                row_i[j] = val
            row_i[k] = CycLaurent()
        prev = piv
    d = a[n - 1][n - 1]
    return d if sign == 1 else -d
