"""Exact arithmetic: cyclotomic numbers, 2-local rationals and rational angles.

Elements of Q(zeta_m) are stored in the power basis 1, z, ..., z^(phi(m)-1)
reduced modulo the m-th cyclotomic polynomial, as an integer numerator vector
over a common positive denominator.  Elements of different conductors are
combined in Q(zeta_lcm); nothing is ever normalized down to a minimal
conductor except the cheap rational case.
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache, total_ordering
from numbers import Rational
from typing import Iterable, Sequence, Union

from mpmath.ctx_iv import MPIntervalContext

__all__ = [
    "Cyclotomic",
    "TwoLocal",
    "UnitAngle",
    "cyc_arith",
    "conj",
    "exact_sign",
    "eval_angle",
    "totient",
    "cyclotomic_poly",
    "is_prime",
]

Scalar = Union[int, Fraction, "Cyclotomic"]


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


@lru_cache(maxsize=None)
def totient(m: int) -> int:
    result, n, f = m, m, 2
    while f * f <= n:
        if n % f == 0:
            while n % f == 0:
                n //= f
            result -= result // f
        f += 1
    if n > 1:
        result -= result // n
    return result


def _divisors(m: int) -> list[int]:
    return [d for d in range(1, m + 1) if m % d == 0]


@lru_cache(maxsize=None)
def cyclotomic_poly(m: int) -> tuple[int, ...]:
    """Integer coefficients of the m-th cyclotomic polynomial, low degree first."""
    if m < 1:
        raise ValueError("conductor must be positive")
    # x^m - 1 divided by every Phi_d with d a proper divisor of m
    poly = [-1] + [0] * (m - 1) + [1]
    for d in _divisors(m)[:-1]:
        poly = _divide_monic(poly, cyclotomic_poly(d))
    return tuple(poly)


def _divide_monic(num: list[int], den: Sequence[int]) -> list[int]:
    num = list(num)
    dd = len(den) - 1
    quot = [0] * (len(num) - dd)
    for i in range(len(num) - 1, dd - 1, -1):
        c = num[i]
        if c:
            quot[i - dd] = c
            for j in range(dd + 1):
                num[i - dd + j] -= c * den[j]
    if any(num[:dd]):
        raise ArithmeticError("inexact division of integer polynomials")
    return quot


@lru_cache(maxsize=None)
def _power_table(m: int) -> tuple[tuple[int, ...], ...]:
    """Row k is x^k reduced modulo Phi_m, for 0 <= k < m."""
    phi = totient(m)
    cp = cyclotomic_poly(m)
    rows = []
    row = [1] + [0] * (phi - 1)
    for _ in range(m):
        rows.append(tuple(row))
        top = row[-1]
        row = [0] + row[:-1]
        if top:
            for j in range(phi):
                row[j] -= top * cp[j]
    return tuple(rows)


def _reduce(conv: list[int], m: int) -> list[int]:
    phi = totient(m)
    out = conv[:phi] + [0] * max(0, phi - len(conv))
    if len(conv) > phi:
        table = _power_table(m)
        for k in range(phi, len(conv)):
            c = conv[k]
            if c:
                row = table[k % m]
                for j in range(phi):
                    r = row[j]
                    if r:
                        out[j] += c * r
    return out


@lru_cache(maxsize=None)
def _embedding(m: int, big: int) -> tuple[tuple[int, ...], ...]:
    """Images of z_m^i (0 <= i < phi(m)) in the power basis of Q(zeta_big)."""
    step = big // m
    table = _power_table(big)
    return tuple(table[(i * step) % big] for i in range(totient(m)))


@lru_cache(maxsize=None)
def _conj_map(m: int) -> tuple[tuple[int, ...], ...]:
    table = _power_table(m)
    return tuple(table[(-i) % m] for i in range(totient(m)))


def _lcm(a: int, b: int) -> int:
    return a * b // math.gcd(a, b)


class Cyclotomic:
    """An exact element of the cyclotomic field Q(zeta_m)."""

    __slots__ = ("_m", "_num", "_den")

    def __init__(self, m: int, num: Sequence[int], den: int = 1):
        if den == 0:
            raise ZeroDivisionError("zero denominator")
        if len(num) != totient(m):
            raise ValueError(f"need {totient(m)} coefficients for conductor {m}")
        nums = [int(c) for c in num]
        if den < 0:
            den, nums = -den, [-c for c in nums]
        g = den
        for c in nums:
            if c:
                g = math.gcd(g, c)
                if g == 1:
                    break
        if g > 1:
            den //= g
            nums = [c // g for c in nums]
        if m > 1 and not any(nums[1:]):
            m, nums = 1, [nums[0]]
        self._m = m
        self._num = tuple(nums)
        self._den = den

    # -- constructors -----------------------------------------------------
    @classmethod
    def rational(cls, q: Union[int, Fraction]) -> Cyclotomic:
        q = Fraction(q)
        return cls(1, (q.numerator,), q.denominator)

    @classmethod
    def zeta(cls, m: int, k: int = 1) -> Cyclotomic:
        """The root of unity exp(2 pi i k/m)."""
        if m < 1:
            raise ValueError("conductor must be positive")
        return cls(m, _power_table(m)[k % m])

    @classmethod
    def from_coeffs(cls, m: int, coeffs: Iterable[Union[int, Fraction]]) -> Cyclotomic:
        """Build sum c_i z_m^i from any number of rational coefficients."""
        fr = [Fraction(c) for c in coeffs]
        den = 1
        for c in fr:
            den = _lcm(den, c.denominator)
        ints = [int(c * den) for c in fr]
        return cls(m, _reduce(_cyclic_fold(ints, m), m), den)

    @staticmethod
    def coerce(x: Scalar) -> Cyclotomic:
        if isinstance(x, Cyclotomic):
            return x
        if isinstance(x, (int, Rational)):
            return Cyclotomic.rational(Fraction(x))
        raise TypeError(f"cannot coerce {type(x).__name__} to Cyclotomic")

    # -- accessors ----------------------------------------------------------
    @property
    def conductor(self) -> int:
        return self._m

    @property
    def coeffs(self) -> tuple[Fraction, ...]:
        return tuple(Fraction(c, self._den) for c in self._num)

    def is_zero(self) -> bool:
        return not any(self._num)

    def is_rational(self) -> bool:
        return self._m == 1

    def to_fraction(self) -> Fraction:
        if self._m != 1:
            raise ValueError("not a rational number")
        return Fraction(self._num[0], self._den)

    def embed(self, big: int) -> tuple[int, ...]:
        """Numerator vector in the power basis of Q(zeta_big); big % m == 0."""
        m = self._m
        if big == m:
            return self._num
        if big % m:
            raise ValueError(f"Q(zeta_{m}) does not embed in Q(zeta_{big})")
        out = [0] * totient(big)
        if m == 1:
            out[0] = self._num[0]
            return tuple(out)
        for c, row in zip(self._num, _embedding(m, big)):
            if c:
                for j, r in enumerate(row):
                    if r:
                        out[j] += c * r
        return tuple(out)

    # -- arithmetic ---------------------------------------------------------
    def __add__(self, other: Scalar) -> Cyclotomic:
        try:
            b = Cyclotomic.coerce(other)
        except TypeError:
            return NotImplemented
        a = self
        if a._m == 1 and b._m == 1:
            return Cyclotomic(1, (a._num[0] * b._den + b._num[0] * a._den,), a._den * b._den)
        big = _lcm(a._m, b._m)
        x, y = a.embed(big), b.embed(big)
        return Cyclotomic(big, [u * b._den + v * a._den for u, v in zip(x, y)], a._den * b._den)

    __radd__ = __add__

    def __neg__(self) -> Cyclotomic:
        return Cyclotomic(self._m, [-c for c in self._num], self._den)

    def __sub__(self, other: Scalar) -> Cyclotomic:
        try:
            b = Cyclotomic.coerce(other)
        except TypeError:
            return NotImplemented
        return self + (-b)

    def __rsub__(self, other: Scalar) -> Cyclotomic:
        return Cyclotomic.coerce(other) - self

    def __mul__(self, other: Scalar) -> Cyclotomic:
        try:
            b = Cyclotomic.coerce(other)
        except TypeError:
            return NotImplemented
        a = self
        if b._m == 1:
            a, b = b, a
        if a._m == 1:
            s = a._num[0]
            return Cyclotomic(b._m, [s * c for c in b._num], a._den * b._den)
        big = _lcm(a._m, b._m)
        x, y = a.embed(big), b.embed(big)
        conv = [0] * (len(x) + len(y) - 1)
        for i, u in enumerate(x):
            if u:
                for j, v in enumerate(y):
                    if v:
                        conv[i + j] += u * v
        return Cyclotomic(big, _reduce(conv, big), a._den * b._den)

    __rmul__ = __mul__

    def inverse(self) -> Cyclotomic:
        if self.is_zero():
            raise ZeroDivisionError("division by zero in cyclotomic field")
        m = self._m
        if m == 1:
            return Cyclotomic(1, (self._den,), self._num[0])
        inv = _poly_inverse_mod([Fraction(c) for c in self._num], list(cyclotomic_poly(m)))
        return Cyclotomic.from_coeffs(m, [c * self._den for c in inv])

    def __truediv__(self, other: Scalar) -> Cyclotomic:
        try:
            b = Cyclotomic.coerce(other)
        except TypeError:
            return NotImplemented
        if b._m == 1:
            if not b._num[0]:
                raise ZeroDivisionError("division by zero in cyclotomic field")
            return Cyclotomic(self._m, [c * b._den for c in self._num], self._den * b._num[0])
        return self * b.inverse()

    def __rtruediv__(self, other: Scalar) -> Cyclotomic:
        return Cyclotomic.coerce(other) / self

    def __pow__(self, k: int) -> Cyclotomic:
        if k < 0:
            return self.inverse() ** (-k)
        result, base = Cyclotomic.rational(1), self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def conj(self) -> Cyclotomic:
        """Complex conjugation, the Galois automorphism z -> z^-1."""
        m = self._m
        if m == 1:
            return self
        out = [0] * len(self._num)
        for c, row in zip(self._num, _conj_map(m)):
            if c:
                for j, r in enumerate(row):
                    if r:
                        out[j] += c * r
        return Cyclotomic(m, out, self._den)

    def is_real(self) -> bool:
        return self.conj() == self

    # -- comparison ---------------------------------------------------------
    def __eq__(self, other: object) -> bool:
        if isinstance(other, (int, Rational)):
            other = Cyclotomic.rational(Fraction(other))
        if not isinstance(other, Cyclotomic):
            return NotImplemented
        if self._den != other._den:
            return False
        if self._m == other._m:
            return self._num == other._num
        big = _lcm(self._m, other._m)
        return self.embed(big) == other.embed(big)

    def __hash__(self) -> int:
        # normalized trace is independent of the ambient conductor
        if self._m == 1:
            return hash(Fraction(self._num[0], self._den))
        return hash(self._normalized_trace())

    def _normalized_trace(self) -> Fraction:
        m = self._m
        total = 0
        for i, c in enumerate(self._num):
            if c:
                g = math.gcd(i, m)
                n = m // g
                total += c * _mobius(n) * totient(m) // totient(n)
        return Fraction(total, self._den * totient(m))

    # -- numerics -----------------------------------------------------------
    def approx(self) -> complex:
        m = self._m
        return complex(sum(
            (c / self._den) * complex(math.cos(2 * math.pi * i / m), math.sin(2 * math.pi * i / m))
            for i, c in enumerate(self._num)
        ))

    def __repr__(self) -> str:
        return f"Cyclotomic({self})"

    def __str__(self) -> str:
        if self._m == 1:
            return str(Fraction(self._num[0], self._den))
        parts = []
        for i, c in enumerate(self._num):
            if not c:
                continue
            q = Fraction(c, self._den)
            base = "" if i == 0 else (f"z{self._m}" if i == 1 else f"z{self._m}^{i}")
            if not base:
                parts.append(str(q))
            elif q == 1:
                parts.append(base)
            elif q == -1:
                parts.append("-" + base)
            else:
                parts.append(f"{q}*{base}")
        out = " + ".join(parts)
        return out.replace("+ -", "- ")


def _mobius(n: int) -> int:
    result, f = 1, 2
    while f * f <= n:
        if n % f == 0:
            n //= f
            if n % f == 0:
                return 0
            result = -result
        f += 1
    if n > 1:
        result = -result
    return result


def _cyclic_fold(ints: list[int], m: int) -> list[int]:
    if len(ints) <= m:
        return ints
    out = [0] * m
    for i, c in enumerate(ints):
        out[i % m] += c
    return out


def _poly_inverse_mod(a: list[Fraction], mod: list[int]) -> list[Fraction]:
    """Inverse of a modulo an irreducible polynomial, by the extended Euclidean algorithm."""

    def trim(p: list) -> list:
        while p and p[-1] == 0:
            p.pop()
        return p

    r0, r1 = trim([Fraction(c) for c in mod]), trim(list(a))
    s0, s1 = [Fraction(0)], [Fraction(1)]
    while len(r1) > 1:
        # r0 = q*r1 + r
        r = list(r0)
        q = [Fraction(0)] * (len(r0) - len(r1) + 1)
        lead = r1[-1]
        for i in range(len(r) - len(r1), -1, -1):
            c = r[i + len(r1) - 1] / lead
            q[i] = c
            if c:
                for j, v in enumerate(r1):
                    r[i + j] -= c * v
        r = trim(r[: len(r1) - 1])
        qs = [Fraction(0)] * (len(q) + len(s1) - 1)
        for i, u in enumerate(q):
            if u:
                for j, v in enumerate(s1):
                    qs[i + j] += u * v
        s2 = [Fraction(0)] * max(len(s0), len(qs))
        for i, v in enumerate(s0):
            s2[i] += v
        for i, v in enumerate(qs):
            s2[i] -= v
        r0, r1, s0, s1 = r1, r, s1, trim(s2) or [Fraction(0)]
        if not r1:
            raise ArithmeticError("element is not invertible modulo the given polynomial")
    c = r1[0]
    return [v / c for v in s1]


def cyc_arith(a: Scalar, b: Scalar, op: str) -> Cyclotomic:
    """Field arithmetic dispatch: op is one of add, sub, mul, div."""
    a, b = Cyclotomic.coerce(a), Cyclotomic.coerce(b)
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "div":
        return a / b
    raise ValueError(f"unknown operation {op!r}")


def conj(a: Scalar) -> Cyclotomic:
    return Cyclotomic.coerce(a).conj()


def exact_sign(a: Scalar) -> int:
    """Sign of a real cyclotomic number.

    Zero is decided exactly from the representation; otherwise the value is
    enclosed in intervals of doubling precision until the enclosure excludes 0.
    """
    a = Cyclotomic.coerce(a)
    if not a.is_real():
        raise ValueError(f"exact_sign needs a real element, got {a}")
    if a.is_zero():
        return 0
    if a._m == 1:
        return 1 if a._num[0] > 0 else -1
    m = a._m
    ctx = MPIntervalContext()
    prec = 64
    while True:
        ctx.prec = prec
        two_pi_over_m = 2 * ctx.pi / m
        total = ctx.mpf(0)
        for i, c in enumerate(a._num):
            if c:
                total += c * ctx.cos(two_pi_over_m * i)
        if total.a > 0:
            return 1
        if total.b < 0:
            return -1
        prec *= 2


@total_ordering
class TwoLocal:
    """A rational number with odd denominator, an element of Z localized at 2."""

    __slots__ = ("_q",)

    def __init__(self, value: Union[int, Fraction, "TwoLocal"] = 0, denominator: int = 1):
        if isinstance(value, TwoLocal):
            q = value._q / denominator
        else:
            q = Fraction(value) / denominator
        if q.denominator % 2 == 0:
            raise ValueError(f"{q} has even denominator; not in Z_(2)")
        self._q = q

    @property
    def numerator(self) -> int:
        return self._q.numerator

    @property
    def denominator(self) -> int:
        return self._q.denominator

    def as_fraction(self) -> Fraction:
        return self._q

    def is_odd(self) -> bool:
        return self._q.numerator % 2 == 1

    @property
    def parity(self) -> int:
        return self._q.numerator % 2

    def _wrap(self, other):
        if isinstance(other, TwoLocal):
            return other._q
        if isinstance(other, (int, Fraction)):
            return Fraction(other)
        return None

    def __add__(self, other):
        o = self._wrap(other)
        return NotImplemented if o is None else TwoLocal(self._q + o)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._wrap(other)
        return NotImplemented if o is None else TwoLocal(self._q - o)

    def __rsub__(self, other):
        o = self._wrap(other)
        return NotImplemented if o is None else TwoLocal(o - self._q)

    def __mul__(self, other):
        o = self._wrap(other)
        return NotImplemented if o is None else TwoLocal(self._q * o)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._wrap(other)
        return NotImplemented if o is None else TwoLocal(self._q / o)

    def __neg__(self):
        return TwoLocal(-self._q)

    def __abs__(self):
        return TwoLocal(abs(self._q))

    def __bool__(self):
        return self._q != 0

    def __eq__(self, other):
        o = self._wrap(other)
        return NotImplemented if o is None else self._q == o

    def __lt__(self, other):
        o = self._wrap(other)
        return NotImplemented if o is None else self._q < o

    def __hash__(self):
        return hash(self._q)

    def __repr__(self):
        return f"TwoLocal({self._q})"

    def __str__(self):
        return str(self._q)


@total_ordering
class UnitAngle:
    """The point exp(2 pi i c/m) on the unit circle, with c/m reduced into [0, 1)."""

    __slots__ = ("_frac",)

    def __init__(self, num: Union[int, Fraction] = 0, den: int = 1):
        if den <= 0:
            raise ValueError("angle denominator must be positive")
        f = Fraction(num) / den
        self._frac = f - math.floor(f)

    @classmethod
    def parse(cls, text: str) -> UnitAngle:
        return cls(Fraction(text.strip()))

    @property
    def num(self) -> int:
        return self._frac.numerator

    @property
    def den(self) -> int:
        return self._frac.denominator

    @property
    def fraction(self) -> Fraction:
        return self._frac

    def __mul__(self, other: UnitAngle) -> UnitAngle:
        if not isinstance(other, UnitAngle):
            return NotImplemented
        return UnitAngle(self._frac + other._frac)

    def __pow__(self, k: int) -> UnitAngle:
        return UnitAngle(self._frac * k)

    def inverse(self) -> UnitAngle:
        return UnitAngle(-self._frac)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, UnitAngle):
            return NotImplemented
        return self._frac == other._frac

    def __lt__(self, other: UnitAngle) -> bool:
        return self._frac < other._frac

    def __hash__(self) -> int:
        return hash(("angle", self._frac))

    def __repr__(self) -> str:
        return f"UnitAngle({self.num}, {self.den})"

    def __str__(self) -> str:
        return f"{self.num}/{self.den}"


def eval_angle(a: UnitAngle) -> Cyclotomic:
    return Cyclotomic.zeta(a.den, a.num)
