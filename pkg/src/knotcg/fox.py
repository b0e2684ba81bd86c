"""Free differential calculus and the dihedral representation of T(2,p)."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

from .exact import Cyclotomic, is_prime
from .laurent import CycLaurent

__all__ = [
    "FreeWord",
    "GroupRingElement",
    "fox_derivative",
    "Mat2",
    "Rep2",
    "dihedral_rep_T2p",
    "TwistedAlexander",
    "twisted_alex_T2p",
    "laurent_gcd",
    "relator_T2p",
]

ALPHA, BETA = "a", "b"


@dataclass(frozen=True)
class FreeWord:
    """A freely reduced word: letters (generator, nonzero exponent), adjacent generators distinct."""

    letters: tuple[tuple[str, int], ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "letters", _reduce(self.letters))

    @classmethod
    def gen(cls, g: str, k: int = 1) -> FreeWord:
        return cls(((g, k),))

    def __mul__(self, other: FreeWord) -> FreeWord:
        return FreeWord(self.letters + other.letters)

    def inverse(self) -> FreeWord:
        return FreeWord(tuple((g, -k) for g, k in reversed(self.letters)))

    def __pow__(self, n: int) -> FreeWord:
        base = self if n >= 0 else self.inverse()
        return FreeWord(base.letters * abs(n))

    def is_identity(self) -> bool:
        return not self.letters

    def __str__(self) -> str:
        if not self.letters:
            return "1"
        return "".join(g if k == 1 else f"{g}^{k}" for g, k in self.letters)


def _reduce(letters: Iterable[tuple[str, int]]) -> tuple[tuple[str, int], ...]:
    out: list[tuple[str, int]] = []
    for g, k in letters:
        if k == 0:
            continue
        if out and out[-1][0] == g:
            k += out.pop()[1]
            if k == 0:
                continue
        out.append((g, k))
    return tuple(out)


class GroupRingElement:
    """A finite Z-linear combination of free words."""

    def __init__(self, terms: Mapping[FreeWord, int] | Iterable[tuple[FreeWord, int]] = ()):
        items = terms.items() if isinstance(terms, Mapping) else terms
        acc: dict[FreeWord, int] = {}
        for w, n in items:
            acc[w] = acc.get(w, 0) + n
        self._terms = {w: n for w, n in acc.items() if n}

    @classmethod
    def word(cls, w: FreeWord, n: int = 1) -> GroupRingElement:
        return cls([(w, n)])

    def items(self) -> list[tuple[FreeWord, int]]:
        return sorted(self._terms.items(), key=lambda x: (len(x[0].letters), x[0].letters))

    def is_zero(self) -> bool:
        return not self._terms

    def __add__(self, other: GroupRingElement) -> GroupRingElement:
        return GroupRingElement(list(self._terms.items()) + list(other._terms.items()))

    def __neg__(self) -> GroupRingElement:
        return GroupRingElement([(w, -n) for w, n in self._terms.items()])

    def __sub__(self, other: GroupRingElement) -> GroupRingElement:
        return self + (-other)

    def left_mul(self, w: FreeWord) -> GroupRingElement:
        return GroupRingElement([(w * v, n) for v, n in self._terms.items()])

    def __mul__(self, other: GroupRingElement) -> GroupRingElement:
        return GroupRingElement(
            [(u * v, m * n) for u, m in self._terms.items() for v, n in other._terms.items()]
        )

    def __eq__(self, other) -> bool:
        return isinstance(other, GroupRingElement) and self._terms == other._terms

    def __str__(self) -> str:
        if not self._terms:
            return "0"
        parts = []
        for w, n in self.items():
            parts.append(str(w) if n == 1 else (f"-{w}" if n == -1 else f"{n}*{w}"))
        return " + ".join(parts).replace("+ -", "- ")


def _letter_derivative(g: str, k: int, x: str) -> GroupRingElement:
    if g != x:
        return GroupRingElement()
    if k > 0:
        # d(x^k)/dx = 1 + x + ... + x^{k-1}
        return GroupRingElement([(FreeWord.gen(x, i), 1) for i in range(k)])
    # d(x^-k)/dx = -(x^-1 + ... + x^-k)
    return GroupRingElement([(FreeWord.gen(x, -i), -1) for i in range(1, -k + 1)])


def fox_derivative(w: FreeWord, x: str) -> GroupRingElement:
    """The Fox derivative dw/dx, via d(uv) = du + u dv."""
    out = GroupRingElement()
    prefix = FreeWord()
    for g, k in w.letters:
        out = out + _letter_derivative(g, k, x).left_mul(prefix)
        prefix = prefix * FreeWord.gen(g, k)
    return out


# -- 2x2 matrices over the Laurent ring ---------------------------------------

class Mat2:
    __slots__ = ("a", "b", "c", "d")

    def __init__(self, a, b, c, d):
        self.a, self.b, self.c, self.d = (CycLaurent.coerce(x) for x in (a, b, c, d))

    @classmethod
    def identity(cls) -> Mat2:
        return cls(1, 0, 0, 1)

    @classmethod
    def zero(cls) -> Mat2:
        return cls(0, 0, 0, 0)

    def __add__(self, o: Mat2) -> Mat2:
        return Mat2(self.a + o.a, self.b + o.b, self.c + o.c, self.d + o.d)

    def __sub__(self, o: Mat2) -> Mat2:
        return Mat2(self.a - o.a, self.b - o.b, self.c - o.c, self.d - o.d)

    def __mul__(self, o) -> Mat2:
        if isinstance(o, Mat2):
            return Mat2(
                self.a * o.a + self.b * o.c,
                self.a * o.b + self.b * o.d,
                self.c * o.a + self.d * o.c,
                self.c * o.b + self.d * o.d,
            )
        return Mat2(self.a * o, self.b * o, self.c * o, self.d * o)

    __rmul__ = __mul__

    def det(self) -> CycLaurent:
        return self.a * self.d - self.b * self.c

    def inverse(self) -> Mat2:
        det = self.det()
        if not det.is_monomial():
            raise ValueError("matrix is not invertible over the Laurent ring")
        inv = det ** -1
        return Mat2(self.d * inv, -self.b * inv, -self.c * inv, self.a * inv)

    def __pow__(self, n: int) -> Mat2:
        base = self if n >= 0 else self.inverse()
        out = Mat2.identity()
        for _ in range(abs(n)):
            out = out * base
        return out

    def __eq__(self, o) -> bool:
        return isinstance(o, Mat2) and (self.a, self.b, self.c, self.d) == (o.a, o.b, o.c, o.d)

    def rows(self) -> list[list[CycLaurent]]:
        return [[self.a, self.b], [self.c, self.d]]

    def __repr__(self) -> str:
        return f"Mat2([[{self.a}, {self.b}], [{self.c}, {self.d}]])"


class Rep2:
    """A representation of a free group into GL_2 of the Laurent ring."""

    def __init__(self, images: Mapping[str, Mat2]):
        for g, m in images.items():
            if m.det().is_zero():
                raise ValueError(f"image of {g} is singular")
        self.images = dict(images)

    def word(self, w: FreeWord) -> Mat2:
        out = Mat2.identity()
        for g, k in w.letters:
            out = out * (self.images[g] ** k)
        return out

    def __call__(self, x: GroupRingElement | FreeWord) -> Mat2:
        if isinstance(x, FreeWord):
            return self.word(x)
        out = Mat2.zero()
        for w, n in x.items():
            out = out + self.word(w) * n
        return out


def relator_T2p(p: int) -> FreeWord:
    """alpha^2 beta^p, the relator of the torus knot group of T(2,p)."""
    return FreeWord(((ALPHA, 2), (BETA, p)))


def _check_prime(p: int, experimental: bool) -> None:
    if p < 3 or p % 2 == 0:
        raise ValueError(f"p must be an odd integer >= 3, got {p}")
    if not is_prime(p) and not experimental:
        raise ValueError(f"p={p} is composite (allowed only in experimental mode)")


def dihedral_rep_T2p(p: int, d: int, experimental: bool = False) -> Rep2:
    """alpha -> t^n [[0,1],[t,0]], beta -> t^-1 diag(z^d, z^-d), n = (p-1)/2."""
    _check_prime(p, experimental)
    n = (p - 1) // 2
    ra = Mat2(0, CycLaurent.t(n), CycLaurent.t(n + 1), 0)
    zd = Cyclotomic.zeta(p, d)
    rb = Mat2(CycLaurent({-1: zd}), 0, 0, CycLaurent({-1: zd.conj()}))
    rep = Rep2({ALPHA: ra, BETA: rb})
    if rep.word(relator_T2p(p)) != Mat2.identity():
        raise AssertionError("dihedral images do not satisfy the relator")
    return rep


def laurent_gcd(f: CycLaurent, g: CycLaurent) -> CycLaurent:
    """Monic gcd in the polynomial ring, after shifting both to exponent 0."""
    a, b = f.normalize_shift(), g.normalize_shift()
    while not b.is_zero():
        a, b = b, a.divmod(b)[1]
        if not b.is_zero():
            b = b.normalize_shift()
    if a.is_zero():
        return a
    return a / a.coeff(a.max_exp())


def _cancel(num: CycLaurent, den: CycLaurent) -> tuple[CycLaurent, CycLaurent]:
    g = laurent_gcd(num, den)
    if g.span() > 0:
        num, den = num.exact_div(g), den.exact_div(g)
    return num, den


@dataclass(frozen=True)
class TwistedAlexander:
    """Twisted Alexander data of T(2,p) for the dihedral character with parameter d."""

    p: int
    d: int
    e: int
    num: CycLaurent
    den: CycLaurent
    quotient_alpha: tuple[CycLaurent, CycLaurent]
    quotient_beta: tuple[CycLaurent, CycLaurent]
    h0_order: CycLaurent

    def is_polynomial(self) -> bool:
        return self.den.is_monomial()

    def polynomial(self) -> CycLaurent:
        if not self.is_polynomial():
            raise ValueError("the twisted polynomial is a rational function here")
        return (self.num / self.den).normalize_shift()


def _h0_order(rep: Rep2) -> CycLaurent:
    """Order of the cokernel of [rho(alpha)-1; rho(beta)-1]: gcd of its 2x2 minors."""
    rows = (rep.images[ALPHA] - Mat2.identity()).rows() + (rep.images[BETA] - Mat2.identity()).rows()
    g = CycLaurent()
    for i in range(4):
        for j in range(i + 1, 4):
            m = rows[i][0] * rows[j][1] - rows[i][1] * rows[j][0]
            if not m.is_zero():
                g = m.normalize_shift() if g.is_zero() else laurent_gcd(g, m)
    return g


def twisted_alex_T2p(p: int, d: int, experimental: bool = False) -> TwistedAlexander:
    """Both Fox-matrix quotients, checked to agree up to a unit, times Delta_0 = (t-1)^(e-1)."""
    rep = dihedral_rep_T2p(p, d, experimental)
    d = d % p
    r = relator_T2p(p)
    one = Mat2.identity()
    da = rep(fox_derivative(r, ALPHA)).det()
    db = rep(fox_derivative(r, BETA)).det()
    qa = _cancel(da, (rep.images[BETA] - one).det())
    qb = _cancel(db, (rep.images[ALPHA] - one).det())
    # qa / qb must be a unit c t^k
    cross_num, cross_den = _cancel(qa[0] * qb[1], qa[1] * qb[0])
    if not (cross_num.is_monomial() and cross_den.is_monomial()):
        raise AssertionError("the two Fox quotients differ by more than a unit")
    e = 0 if d == 0 else 1
    num, den = qa
    if e == 0:
        den = den * (CycLaurent.t() - 1)
        num, den = _cancel(num, den)
    return TwistedAlexander(p, d, e, num, den, qa, qb, _h0_order(rep))
