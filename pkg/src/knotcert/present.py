"""Wirtinger presentations, Fox calculus and the Alexander polynomial."""

from __future__ import annotations

import string
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .arith import IntPolynomial, is_prime
from .knotio import KnotDiagram, require_valid


class NotWirtinger(ValueError):
    pass


class PresentationError(ValueError):
    pass


# ---------------------------------------------------------------- words


@dataclass(frozen=True)
class Word:
    """A freely reduced word: (generator index, +1 or -1) letters."""

    letters: tuple[tuple[int, int], ...]

    def __init__(self, letters: Iterable[tuple[int, int]] = ()):
        out: list[tuple[int, int]] = []
        for g, e in letters:
            if e not in (1, -1):
                raise PresentationError(f"exponent must be +-1, got {e}")
            if out and out[-1] == (g, -e):
                out.pop()
            else:
                out.append((g, e))
        object.__setattr__(self, "letters", tuple(out))

    def __iter__(self):
        return iter(self.letters)

    def __len__(self):
        return len(self.letters)

    def __add__(self, other: "Word") -> "Word":
        return Word(self.letters + other.letters)

    def inverse(self) -> "Word":
        return Word((g, -e) for g, e in reversed(self.letters))


def generator_name(i: int) -> str:
    letter = string.ascii_lowercase[i % 26]
    return letter if i < 26 else f"{letter}{i // 26}"


@dataclass(frozen=True)
class GroupPresentation:
    generators: tuple[str, ...]
    relators: tuple[Word, ...]
    kind: str = "generic"

    def __post_init__(self):
        if self.kind not in ("wirtinger", "generic"):
            raise PresentationError(f"unknown presentation kind {self.kind!r}")
        k = len(self.generators)
        for r in self.relators:
            for g, _ in r:
                if not 0 <= g < k:
                    raise PresentationError(f"relator letter {g} names no generator")

    @property
    def length(self) -> int:
        return len(self.generators) + sum(len(r) for r in self.relators)

    def format_word(self, w: Word) -> str:
        if not len(w):
            return "1"
        return " ".join(self.generators[g] if e == 1 else self.generators[g].upper() for g, e in w)

    def pretty(self) -> str:
        rels = ", ".join(self.format_word(r) for r in self.relators)
        return f"<{','.join(self.generators)} | {rels}>"

    def __str__(self):
        return self.pretty()


def abelianization_rank(pres: GroupPresentation) -> int:
    """Free rank of the abelianization (generators minus relation-matrix rank over Q)."""
    k = len(pres.generators)
    rows = []
    for r in pres.relators:
        v = [0] * k
        for g, e in r:
            v[g] += e
        rows.append([Fraction(x) for x in v])
    rank, col = 0, 0
    while rank < len(rows) and col < k:
        piv = next((i for i in range(rank, len(rows)) if rows[i][col] != 0), None)
        if piv is None:
            col += 1
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        for i in range(len(rows)):
            if i != rank and rows[i][col] != 0:
                f = rows[i][col] / rows[rank][col]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[rank])]
        rank += 1
        col += 1
    return k - rank


# ---------------------------------------------------------------- Wirtinger


@dataclass(frozen=True)
class WirtingerCrossing:
    """Arc indices meeting at a crossing, with its sign."""

    incoming: int
    outgoing: int
    over: int
    sign: int


def arcs(d: KnotDiagram) -> tuple[dict[int, int], list[WirtingerCrossing]]:
    """Map every edge label to its arc index, and describe each crossing by arcs.

    Arcs (maximal over-strands) are numbered by their lowest edge label.
    """
    require_valid(d)
    parent: dict[int, int] = {}

    def find(x):
        while parent.setdefault(x, x) != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for x in d.crossings:
        find(x.a)
        find(x.c)
        ra, rb = find(x.b), find(x.d)
        if ra != rb:
            parent[max(ra, rb)] = min(ra, rb)
    roots = sorted({find(e) for e in parent})
    # With union by min, each root is its component's lowest label.
    index = {r: i for i, r in enumerate(roots)}
    arc_of = {e: index[find(e)] for e in parent}
    info = [WirtingerCrossing(arc_of[x.a], arc_of[x.c], arc_of[x.b], x.sign) for x in d.crossings]
    return arc_of, info


def wirtinger(d: KnotDiagram) -> GroupPresentation:
    """One generator per arc, one relator ``out * over^e * in^-1 * over^-e`` per crossing."""
    require_valid(d)
    if not d.crossings:
        return GroupPresentation(("a",), (), "wirtinger")
    arc_of, info = arcs(d)
    k = len(set(arc_of.values()))
    rels = []
    for x in info:
        e = x.sign
        rels.append(Word([(x.outgoing, 1), (x.over, e), (x.incoming, -1), (x.over, -e)]))
    return GroupPresentation(tuple(generator_name(i) for i in range(k)), tuple(rels), "wirtinger")


# ---------------------------------------------------------------- Laurent polynomials


@dataclass(frozen=True)
class LaurentPoly:
    """Integer Laurent polynomial t**low * (c0 + c1 t + ...), trimmed at both ends."""

    low: int
    coeffs: tuple[int, ...]

    def __init__(self, low: int = 0, coeffs: Iterable[int] = ()):
        c = list(coeffs)
        while c and c[-1] == 0:
            c.pop()
        while c and c[0] == 0:
            c.pop(0)
            low += 1
        object.__setattr__(self, "low", low if c else 0)
        object.__setattr__(self, "coeffs", tuple(c))

    @classmethod
    def from_terms(cls, terms: dict[int, int]) -> "LaurentPoly":
        terms = {k: v for k, v in terms.items() if v}
        if not terms:
            return cls()
        lo, hi = min(terms), max(terms)
        return cls(lo, [terms.get(i, 0) for i in range(lo, hi + 1)])

    @classmethod
    def monomial(cls, exp: int, coeff: int = 1) -> "LaurentPoly":
        return cls(exp, [coeff])

    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def high(self) -> int:
        return self.low + len(self.coeffs) - 1

    def terms(self) -> dict[int, int]:
        return {self.low + i: v for i, v in enumerate(self.coeffs) if v}

    def __add__(self, other: "LaurentPoly") -> "LaurentPoly":
        t = self.terms()
        for k, v in other.terms().items():
            t[k] = t.get(k, 0) + v
        return LaurentPoly.from_terms(t)

    def __neg__(self) -> "LaurentPoly":
        return LaurentPoly(self.low, [-v for v in self.coeffs])

    def __sub__(self, other: "LaurentPoly") -> "LaurentPoly":
        return self + (-other)

    def __mul__(self, other: "LaurentPoly") -> "LaurentPoly":
        if self.is_zero() or other.is_zero():
            return LaurentPoly()
        out = [0] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, x in enumerate(self.coeffs):
            for j, y in enumerate(other.coeffs):
                out[i + j] += x * y
        return LaurentPoly(self.low + other.low, out)

    def eval_mod(self, t: int, p: int) -> int:
        acc = 0
        for v in reversed(self.coeffs):
            acc = (acc * t + v) % p
        if self.low >= 0:
            return acc * pow(t, self.low, p) % p
        return acc * pow(pow(t, -1, p), -self.low, p) % p

    def l1(self) -> int:
        return sum(abs(v) for v in self.coeffs)

    def normalized(self) -> IntPolynomial:
        """Shift to lowest degree 0 and make the leading coefficient positive."""
        c = list(self.coeffs)
        if c and c[-1] < 0:
            c = [-v for v in c]
        return IntPolynomial(c)


@dataclass(frozen=True)
class IntLaurentMatrix:
    rows: tuple[tuple[LaurentPoly, ...], ...]

    @property
    def shape(self) -> tuple[int, int]:
        return (len(self.rows), len(self.rows[0]) if self.rows else 0)

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def eval_mod(self, t: int, p: int) -> list[list[int]]:
        return [[x.eval_mod(t, p) for x in row] for row in self.rows]

    def minor(self, drop_rows: Sequence[int] = (), drop_cols: Sequence[int] = ()) -> "IntLaurentMatrix":
        dr, dc = set(drop_rows), set(drop_cols)
        return IntLaurentMatrix(
            tuple(
                tuple(x for j, x in enumerate(row) if j not in dc)
                for i, row in enumerate(self.rows)
                if i not in dr
            )
        )

    def det(self) -> LaurentPoly:
        return laurent_det(self)


# ---------------------------------------------------------------- Fox calculus


def fox_row(w: Word, k: int) -> tuple[LaurentPoly, ...]:
    """Fox derivatives of w by each of k generators, abelianized (every generator -> t)."""
    terms: list[dict[int, int]] = [{} for _ in range(k)]
    prefix = 0
    for g, e in w:
        if e == 1:
            terms[g][prefix] = terms[g].get(prefix, 0) + 1
        else:
            terms[g][prefix - 1] = terms[g].get(prefix - 1, 0) - 1
        prefix += e
    return tuple(LaurentPoly.from_terms(t) for t in terms)


def fox_matrix(pres: GroupPresentation) -> IntLaurentMatrix:
    if pres.kind != "wirtinger":
        raise NotWirtinger("fox_matrix expects a Wirtinger presentation")
    k = len(pres.generators)
    return IntLaurentMatrix(tuple(fox_row(r, k) for r in pres.relators))


# Large primes for the modular determinant, all just below 2**61.
def _det_primes():
    q = (1 << 61) - 1
    while True:
        if is_prime(q):
            yield q
        q -= 2


def _sparse_det_mod(rows: list[dict[int, int]], m: int, p: int) -> int:
    """Determinant mod p of an m x m matrix given as sparse rows."""
    rows = [dict(r) for r in rows]
    col_rows: dict[int, set[int]] = {}
    for i, r in enumerate(rows):
        for j in r:
            col_rows.setdefault(j, set()).add(i)
    alive = set(range(m))
    det = 1
    pivot_row_of = [0] * m
    for col in range(m):
        cand = [i for i in col_rows.get(col, ()) if i in alive]
        if not cand:
            return 0
        piv = min(cand, key=lambda i: (len(rows[i]), i))
        alive.discard(piv)
        pivot_row_of[col] = piv
        prow = rows[piv]
        pv = prow[col]
        det = det * pv % p
        inv = pow(pv, -1, p)
        for i in cand:
            if i == piv:
                continue
            r = rows[i]
            f = r[col] * inv % p
            for j, v in prow.items():
                nv = (r.get(j, 0) - f * v) % p
                if nv:
                    if j not in r:
                        col_rows.setdefault(j, set()).add(i)
                    r[j] = nv
                else:
                    r.pop(j, None)
                    col_rows[j].discard(i)
    # Sign of the permutation col -> pivot row.
    seen = [False] * m
    parity = 0
    for s in range(m):
        if not seen[s]:
            length = 0
            j = s
            while not seen[j]:
                seen[j] = True
                j = pivot_row_of[j]
                length += 1
            parity += length - 1
    return det if parity % 2 == 0 else (-det) % p


def _interpolate_mod(xs: list[int], ys: list[int], p: int) -> list[int]:
    """Coefficients (low first) of the polynomial through (xs, ys) mod p (Newton form)."""
    n = len(xs)
    coef = list(ys)
    for j in range(1, n):
        for i in range(n - 1, j - 1, -1):
            coef[i] = (coef[i] - coef[i - 1]) * pow(xs[i] - xs[i - j], -1, p) % p
    poly = [0] * n
    for i in range(n - 1, -1, -1):
        # poly = poly * (x - xs[i]) + coef[i]
        new = [0] * n
        for k in range(n - 1):
            new[k + 1] = poly[k]
        for k in range(n):
            new[k] = (new[k] - xs[i] * poly[k]) % p
        new[0] = (new[0] + coef[i]) % p
        poly = new
    return poly


def laurent_det(mat: IntLaurentMatrix) -> LaurentPoly:
    """Exact determinant by evaluation/interpolation modulo large primes and CRT.

    Each row is shifted to non-negative exponents; the degree bound is the
    sum of row spans and the coefficient bound is the product of row L1
    norms, so enough primes are taken to recover the result exactly.
    """
    m, ncols = mat.shape
    if m != ncols:
        raise ValueError(f"determinant of non-square {m}x{ncols} matrix")
    if m == 0:
        return LaurentPoly(0, [1])
    shift, degree, bound = 0, 0, 1
    rows: list[dict[int, IntPolynomial]] = []
    for row in mat.rows:
        nz = [x for x in row if not x.is_zero()]
        if not nz:
            return LaurentPoly()
        lo = min(x.low for x in nz)
        hi = max(x.high for x in nz)
        shift += lo
        degree += hi - lo
        bound *= sum(x.l1() for x in nz)
        rows.append({j: IntPolynomial([0] * (x.low - lo) + list(x.coeffs)) for j, x in enumerate(row) if not x.is_zero()})
    npts = degree + 1
    residues, moduli = [], []
    modulus = 1
    for p in _det_primes():
        xs = list(range(1, npts + 1))
        ys = []
        for x in xs:
            evaluated = [{j: poly.eval_mod(x, p) for j, poly in r.items()} for r in rows]
            evaluated = [{j: v for j, v in r.items() if v} for r in evaluated]
            ys.append(_sparse_det_mod(evaluated, m, p))
        residues.append(_interpolate_mod(xs, ys, p))
        moduli.append(p)
        modulus *= p
        if modulus > 2 * bound:
            break
    coeffs = []
    for k in range(npts):
        acc, mod = 0, 1
        for res, p in zip(residues, moduli):
            # Garner-style incremental CRT.
            t = (res[k] - acc) * pow(mod, -1, p) % p
            acc += mod * t
            mod *= p
        if acc > mod // 2:
            acc -= mod
        coeffs.append(acc)
    return LaurentPoly(shift, coeffs)


def alexander_from_presentation(pres: GroupPresentation) -> IntPolynomial:
    if len(pres.relators) == 0:
        return IntPolynomial([1])
    fm = fox_matrix(pres)
    m, k = fm.shape
    # Wirtinger: k generators, k relators with one redundant; drop the last row
    # and the first column.
    minor = fm.minor(drop_rows=range(k - 1, m), drop_cols=[0])
    return laurent_det(minor).normalized()


def alexander(d: KnotDiagram) -> IntPolynomial:
    """Alexander polynomial, normalized to lowest degree 0 and positive leading coefficient."""
    require_valid(d)
    return alexander_from_presentation(wirtinger(d))
