"""Witt classes of Hermitian forms over C(t): discriminants, signatures, jumps."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Hashable, Iterable, Iterator, Mapping, Sequence, Union

from .exact import Cyclotomic, TwoLocal, UnitAngle, exact_sign, is_prime
from .laurent import (
    CanonicalDisc,
    CycLaurent,
    RootScopeError,
    _extract_roots,
    det_laurent,
    norm_reduce,
)

__all__ = [
    "HermitianAtom",
    "DiscOnlyAtom",
    "WittElement",
    "JumpFunction",
    "PsiVector",
    "hermitian_signature",
    "disc_pm",
    "delta_omega",
    "signature_at",
    "jump_function",
    "psi",
]


# -- signatures of constant Hermitian matrices ------------------------------

def _is_tridiagonal(m: Sequence[Sequence]) -> bool:
    n = len(m)
    return all(m[i][j].is_zero() for i in range(n) for j in range(n) if abs(i - j) > 1)


def _tridiagonal_signature(m: Sequence[Sequence[Cyclotomic]]) -> int | None:
    """Signature from the signs of leading principal minors (Jacobi's rule).

    Returns None if some leading minor vanishes.
    """
    prev2, prev = Cyclotomic.rational(1), m[0][0]
    signs = [1, exact_sign(prev)]
    if signs[-1] == 0:
        return None
    for k in range(1, len(m)):
        off = m[k - 1][k]
        cur = m[k][k] * prev
        if not off.is_zero():
            cur = cur - (off * off.conj()) * prev2
        s = exact_sign(cur)
        if s == 0:
            return None
        signs.append(s)
        prev2, prev = prev, cur
    neg = sum(1 for a, b in zip(signs, signs[1:]) if a != b)
    return len(m) - 2 * neg


def _ldl_signature(m: Sequence[Sequence[Cyclotomic]]) -> tuple[int, int]:
    """(positive, negative) inertia by symmetric elimination over the field."""
    a = [list(row) for row in m]
    active = list(range(len(a)))
    pos = neg = 0
    while active:
        piv = next((i for i in active if not a[i][i].is_zero()), None)
        if piv is not None:
            d = a[piv][piv]
            if exact_sign(d) > 0:
                pos += 1
            else:
                neg += 1
            active.remove(piv)
            d_inv = d.inverse()
            for j in active:
                aj = a[j][piv]
                if aj.is_zero():
                    continue
                f = aj * d_inv
                for k in active:
                    ak = a[piv][k]
                    if not ak.is_zero():
                        a[j][k] = a[j][k] - f * ak
            continue
        pair = next(
            ((i, j) for i in active for j in active if i < j and not a[i][j].is_zero()), None
        )
        if pair is None:
            break
        # zero diagonal with a nonzero off-diagonal entry: a hyperbolic plane
        i, j = pair
        pos += 1
        neg += 1
        b = a[i][j]
        b_inv, bc_inv = b.inverse(), b.conj().inverse()
        active.remove(i)
        active.remove(j)
        # Schur complement of [[0, b], [conj b, 0]]
        for r in active:
            ri, rj = a[r][i], a[r][j]
            if ri.is_zero() and rj.is_zero():
                continue
            for c in active:
                ic, jc = a[i][c], a[j][c]
                corr = Cyclotomic.rational(0)
                if not ri.is_zero() and not jc.is_zero():
                    corr = corr + ri * bc_inv * jc
                if not rj.is_zero() and not ic.is_zero():
                    corr = corr + rj * b_inv * ic
                if not corr.is_zero():
                    a[r][c] = a[r][c] - corr
    return pos, neg


def hermitian_signature(m: Sequence[Sequence[Cyclotomic]]) -> int:
    """Signature of a Hermitian matrix with cyclotomic entries."""
    n = len(m)
    if n == 0:
        return 0
    for i in range(n):
        for j in range(i, n):
            if m[i][j] != m[j][i].conj():
                raise ValueError("matrix is not Hermitian")
    if _is_tridiagonal(m):
        s = _tridiagonal_signature(m)
        if s is not None:
            return s
    pos, neg = _ldl_signature(m)
    return pos - neg


# -- atoms --------------------------------------------------------------------

def _merge_orders(*parts: Iterable[int] | None) -> tuple[int, ...]:
    out: set[int] = set()
    for p in parts:
        if p:
            out.update(p)
    return tuple(sorted(out))


class HermitianAtom:
    """A nonsingular J-Hermitian matrix over the cyclotomic Laurent ring."""

    def __init__(
        self,
        entries: Sequence[Sequence[Union[CycLaurent, int, Fraction, Cyclotomic]]],
        orders: Iterable[int] | None = None,
        label: Hashable | None = None,
        det: CycLaurent | None = None,
    ):
        rows = [[CycLaurent.coerce(x) for x in row] for row in entries]
        n = len(rows)
        if n == 0 or any(len(r) != n for r in rows):
            raise ValueError("a form needs a non-empty square matrix")
        for i in range(n):
            for j in range(i, n):
                if rows[i][j] != rows[j][i].involution():
                    raise ValueError(f"entry ({i},{j}) breaks the Hermitian condition")
        self._entries = tuple(tuple(r) for r in rows)
        self._tri = _is_tridiagonal(self._entries)
        if det is None:
            det = det_laurent(self._entries)
        if det.is_zero():
            raise ValueError("singular form")
        self._det = det
        self.orders = tuple(sorted(set(orders))) if orders else ()
        self.label = label
        self._roots: dict[tuple, dict[UnitAngle, int]] = {}
        self._jumps: dict[tuple, dict[UnitAngle, Fraction]] = {}

    @classmethod
    def one_dim(cls, f: CycLaurent, orders: Iterable[int] | None = None, label=None) -> HermitianAtom:
        return cls([[f]], orders=orders, label=label)

    @property
    def dim(self) -> int:
        return len(self._entries)

    @property
    def entries(self) -> tuple[tuple[CycLaurent, ...], ...]:
        return self._entries

    @property
    def det(self) -> CycLaurent:
        return self._det

    @property
    def key(self) -> Hashable:
        return self.label if self.label is not None else ("matrix", self._entries)

    def discriminant_poly(self) -> CycLaurent:
        k = self.dim
        return self._det if (k * (k - 1) // 2) % 2 == 0 else -self._det

    def roots(self, orders: Iterable[int] = ()) -> dict[UnitAngle, int]:
        """Unit-circle roots of the determinant; every root must be in scope."""
        key = _merge_orders(self.orders, orders)
        hit = self._roots.get(key)
        if hit is None:
            mult, cof = _extract_roots(self._det, key)
            if not cof.is_monomial():
                raise RootScopeError(
                    f"determinant of {self.label or 'form'} has roots outside orders {list(key)}"
                )
            hit = self._roots[key] = mult
        return hit

    def disc(self, orders: Iterable[int] = ()) -> CanonicalDisc:
        return CanonicalDisc(a for a, k in self.roots(orders).items() if k % 2)

    def evaluate(self, omega: UnitAngle) -> list[list[Cyclotomic]]:
        n = self.dim
        out = [[Cyclotomic.rational(0)] * n for _ in range(n)]
        for i in range(n):
            for j in range(i, n):
                e = self._entries[i][j]
                if e.is_zero():
                    continue
                v = e.eval_at(omega)
                out[i][j] = v
                if i != j:
                    out[j][i] = v.conj()
        return out

    def signature_regular(self, omega: UnitAngle) -> int:
        """Signature at a point where the form is known to be nonsingular."""
        return hermitian_signature(self.evaluate(omega))

    def signature_at(self, omega: UnitAngle, orders: Iterable[int] = ()) -> Fraction:
        if not self._det.eval_at(omega).is_zero():
            return Fraction(self.signature_regular(omega))
        cands = sorted(set(self.roots(orders)) | {omega})
        i = cands.index(omega)
        left = _bisect(cands[i - 1], omega, wrap=(i == 0))
        right = _bisect(omega, cands[(i + 1) % len(cands)], wrap=(i == len(cands) - 1))
        return Fraction(self.signature_regular(left) + self.signature_regular(right), 2)

    def jumps(self, orders: Iterable[int] = ()) -> dict[UnitAngle, Fraction]:
        key = _merge_orders(self.orders, orders)
        hit = self._jumps.get(key)
        if hit is not None:
            return hit
        cands = sorted(self.roots(key))
        out: dict[UnitAngle, Fraction] = {}
        if len(cands) >= 2:
            r = len(cands)
            mids = [_bisect(cands[i], cands[(i + 1) % r], wrap=(i == r - 1)) for i in range(r)]
            sig = [self.signature_regular(m) for m in mids]
            for i, c in enumerate(cands):
                j = Fraction(sig[i] - sig[i - 1], 2)
                if j:
                    out[c] = j
        self._jumps[key] = out
        return out

    def __repr__(self) -> str:
        return f"HermitianAtom(dim={self.dim}, label={self.label!r})"


def _bisect(a: UnitAngle, b: UnitAngle, wrap: bool = False) -> UnitAngle:
    """Midpoint of the counterclockwise arc from a to b."""
    hi = b.fraction + 1 if wrap or b.fraction <= a.fraction else b.fraction
    return UnitAngle((a.fraction + hi) / 2)


class DiscOnlyAtom:
    """A Witt class known only through its discriminant modulo +-norms."""

    def __init__(self, disc: CanonicalDisc, label: Hashable | None = None):
        self.disc_class = disc
        self.label = label

    @property
    def key(self) -> Hashable:
        return self.label if self.label is not None else ("disc", self.disc_class.roots)

    def disc(self, orders: Iterable[int] = ()) -> CanonicalDisc:
        return self.disc_class

    def __repr__(self) -> str:
        return f"DiscOnlyAtom({self.disc_class}, label={self.label!r})"


Atom = Union[HermitianAtom, DiscOnlyAtom]


class WittElement:
    """A finite combination sum c_i [A_i] with coefficients in Z localized at 2.

    Atoms sharing a key are treated as the same class, so their coefficients
    combine and can cancel exactly.
    """

    def __init__(self, terms: Iterable[tuple[Union[TwoLocal, int, Fraction], Atom]] = ()):
        self._terms: dict[Hashable, tuple[TwoLocal, Atom]] = {}
        for c, atom in terms:
            self._add_term(TwoLocal(c), atom)

    def _add_term(self, c: TwoLocal, atom: Atom) -> None:
        k = atom.key
        if k in self._terms:
            c = self._terms[k][0] + c
            atom = self._terms[k][1]
        if c:
            self._terms[k] = (c, atom)
        else:
            self._terms.pop(k, None)

    @classmethod
    def of(cls, atom: Atom, coeff=1) -> WittElement:
        return cls([(coeff, atom)])

    def terms(self) -> list[tuple[TwoLocal, Atom]]:
        return list(self._terms.values())

    def __iter__(self) -> Iterator[tuple[TwoLocal, Atom]]:
        return iter(self.terms())

    def __len__(self) -> int:
        return len(self._terms)

    def is_formally_zero(self) -> bool:
        return not self._terms

    def __add__(self, other: WittElement) -> WittElement:
        out = WittElement()
        for c, a in self.terms() + other.terms():
            out._add_term(c, a)
        return out

    def __neg__(self) -> WittElement:
        return self.scale(-1)

    def __sub__(self, other: WittElement) -> WittElement:
        return self + (-other)

    def scale(self, c) -> WittElement:
        c = TwoLocal(c)
        return WittElement([(k * c, a) for k, a in self.terms()])

    def matrix_part(self) -> WittElement:
        return WittElement([(c, a) for c, a in self.terms() if isinstance(a, HermitianAtom)])

    def disc_part(self) -> WittElement:
        return WittElement([(c, a) for c, a in self.terms() if isinstance(a, DiscOnlyAtom)])

    def has_disc_only(self) -> bool:
        return any(isinstance(a, DiscOnlyAtom) for _, a in self.terms())

    def __repr__(self) -> str:
        inner = ", ".join(f"{c}*{a!r}" for c, a in self.terms())
        return f"WittElement([{inner}])"


# -- jump functions -----------------------------------------------------------

class JumpFunction:
    """A finitely supported function from exact unit-circle points to Z_(2)."""

    def __init__(self, values: Mapping[UnitAngle, Union[TwoLocal, int, Fraction]] | None = None):
        self._v: dict[UnitAngle, TwoLocal] = {}
        for k, v in (values or {}).items():
            v = TwoLocal(v)
            if v:
                self._v[k] = v

    def __call__(self, omega: UnitAngle) -> TwoLocal:
        return self._v.get(omega, TwoLocal(0))

    def support(self) -> list[UnitAngle]:
        return sorted(self._v)

    def items(self) -> list[tuple[UnitAngle, TwoLocal]]:
        return sorted(self._v.items())

    def is_zero(self) -> bool:
        return not self._v

    def __add__(self, other: JumpFunction) -> JumpFunction:
        out = dict(self._v)
        for k, v in other._v.items():
            out[k] = out.get(k, TwoLocal(0)) + v
        return JumpFunction(out)

    def __neg__(self) -> JumpFunction:
        return self.scale(-1)

    def __sub__(self, other: JumpFunction) -> JumpFunction:
        return self + (-other)

    def scale(self, c) -> JumpFunction:
        c = TwoLocal(c)
        return JumpFunction({k: v * c for k, v in self._v.items()})

    def pullback(self, k: int) -> JumpFunction:
        """The jump function of theta -> j(k theta), for substitution t -> t^k with k > 0."""
        if k < 1:
            raise ValueError("pullback needs a positive exponent")
        out = {}
        for s, v in self._v.items():
            for r in range(k):
                out[UnitAngle(s.fraction + r, k)] = v
        return JumpFunction(out)

    def shift(self, omega: UnitAngle) -> JumpFunction:
        """The jump function of t -> omega t: theta -> j(theta + angle(omega))."""
        return JumpFunction({UnitAngle(s.fraction - omega.fraction): v for s, v in self._v.items()})

    def signature_steps(self) -> list[tuple[UnitAngle, TwoLocal, TwoLocal]]:
        """(angle, jump, cumulative jump after the angle) in circle order."""
        total = TwoLocal(0)
        out = []
        for k, v in self.items():
            total = total + v
            out.append((k, v, total))
        return out

    def __eq__(self, other) -> bool:
        return isinstance(other, JumpFunction) and self._v == other._v

    def __hash__(self) -> int:
        return hash(frozenset(self._v.items()))

    def __repr__(self) -> str:
        return "JumpFunction({" + ", ".join(f"{k}: {v}" for k, v in self.items()) + "})"


# -- invariants -----------------------------------------------------------------

def disc_pm(w: WittElement, candidate_orders: Iterable[int] = ()) -> CanonicalDisc:
    """The discriminant class of w modulo +-norms."""
    orders = tuple(candidate_orders)
    out = CanonicalDisc()
    for c, atom in w.terms():
        if c.is_odd():
            out = out * atom.disc(orders)
    return out


def delta_omega(w: WittElement, omega: UnitAngle, candidate_orders: Iterable[int] = ()) -> int:
    return 1 if disc_pm(w, candidate_orders).contains(omega) else 0


def signature_at(a: HermitianAtom, omega: UnitAngle, candidate_orders: Iterable[int] = ()) -> Fraction:
    """Averaged signature of the form at omega."""
    return a.signature_at(omega, candidate_orders)


def jump_function(w: WittElement, candidate_orders: Iterable[int] = ()) -> JumpFunction:
    orders = tuple(candidate_orders)
    if w.has_disc_only():
        raise TypeError("jumps of discriminant-only classes are known only modulo 2")
    total: dict[UnitAngle, TwoLocal] = {}
    for c, atom in w.terms():
        for ang, j in atom.jumps(orders).items():
            total[ang] = total.get(ang, TwoLocal(0)) + c * j
    return JumpFunction(total)


@dataclass(frozen=True)
class PsiVector:
    """Jump values at the upper-half-circle p-th roots of unity, with their parities."""

    p: int
    values: tuple[TwoLocal, ...] | None
    parity: tuple[int, ...]

    def is_zero(self) -> bool:
        if self.values is None:
            raise ValueError("only the parity of this vector is known")
        return not any(self.values)

    def parity_nonzero(self) -> bool:
        return any(self.parity)


def psi(w: WittElement, p: int, candidate_orders: Iterable[int] = ()) -> PsiVector:
    if p % 2 == 0 or not is_prime(p):
        raise ValueError(f"psi needs an odd prime, got {p}")
    orders = _merge_orders(candidate_orders, (p,))
    angles = [UnitAngle(a, p) for a in range(1, (p - 1) // 2 + 1)]
    if w.has_disc_only():
        disc = disc_pm(w, orders)
        return PsiVector(p, None, tuple(1 if disc.contains(x) else 0 for x in angles))
    j = jump_function(w, orders)
    vals = tuple(j(x) for x in angles)
    return PsiVector(p, vals, tuple(v.parity for v in vals))
