"""Polynomial systems and prime scans around the representation search.

* ``encode_noncommutative`` turns "some representation sends generators i, j
  to non-commuting matrices" into integer polynomial equations, with the
  inequation XY != YX handled by extra variables t1..t4 and the equation
  sum t_k (XY - YX)_k = 1.
* ``solvable_mod_p`` decides such systems over Z/p by search.
* ``density_scan`` counts primes modulo which a univariate polynomial has
  a root; ``unconditional_prime`` finds one such prime from a small value
  of the polynomial.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterator, Sequence

from .arith import (
    MAX_MODULUS,
    IntPolynomial,
    ZeroPolynomialModP,
    discriminant,
    is_prime,
    primes_up_to,
    roots_mod_p,
    smallest_prime_factor,
)
from .present import GroupPresentation
from .prover import InfeasibleEnumeration

SEARCH_LIMIT = 10**9
DENSITY_LIMIT = 10**7


class TooFewGenerators(ValueError):
    pass


class FactorizationTooLarge(ArithmeticError):
    pass


# ---------------------------------------------------------------- sparse polynomials
# A polynomial is a dict {exponent tuple: nonzero int}.

Poly = dict


def _clean(f: Poly) -> Poly:
    return {e: c for e, c in f.items() if c}


def p_const(c: int, n: int) -> Poly:
    return _clean({(0,) * n: c})


def p_var(i: int, n: int) -> Poly:
    e = [0] * n
    e[i] = 1
    return {tuple(e): 1}


def p_add(f: Poly, g: Poly) -> Poly:
    out = dict(f)
    for e, c in g.items():
        out[e] = out.get(e, 0) + c
    return _clean(out)


def p_neg(f: Poly) -> Poly:
    return {e: -c for e, c in f.items()}


def p_sub(f: Poly, g: Poly) -> Poly:
    return p_add(f, p_neg(g))


def p_mul(f: Poly, g: Poly) -> Poly:
    out: dict = {}
    for e1, c1 in f.items():
        for e2, c2 in g.items():
            e = tuple(a + b for a, b in zip(e1, e2))
            out[e] = out.get(e, 0) + c1 * c2
    return _clean(out)


def p_eval(f: Poly, point: Sequence[int], p: int | None = None) -> int:
    total = 0
    for e, c in f.items():
        term = c
        for x, k in zip(point, e):
            if k:
                term *= pow(x, k, p) if p else x**k
        total += term
    return total % p if p else total


def p_format(f: Poly, names: Sequence[str]) -> str:
    if not f:
        return "0"
    parts = []
    for e in sorted(f, reverse=True):
        c = f[e]
        mono = "*".join(n if k == 1 else f"{n}^{k}" for n, k in zip(names, e) if k)
        if not mono:
            body = str(abs(c))
        elif abs(c) == 1:
            body = mono
        else:
            body = f"{abs(c)}*{mono}"
        sign = "-" if c < 0 else "+"
        parts.append((sign, body))
    first_sign, first = parts[0]
    text = ("-" if first_sign == "-" else "") + first
    for sign, body in parts[1:]:
        text += f" {sign} {body}"
    return text


# ---------------------------------------------------------------- systems


@dataclass
class PolySystem:
    num_vars: int
    polys: list
    names: list = field(default_factory=list)
    var_order: list | None = None

    def __post_init__(self):
        if not self.names:
            self.names = [f"x{i + 1}" for i in range(self.num_vars)]
        if len(self.names) != self.num_vars:
            raise ValueError("one name per variable")
        for f in self.polys:
            for e in f:
                if len(e) != self.num_vars:
                    raise ValueError(f"exponent vector {e} has the wrong length")

    @property
    def degree(self) -> int:
        return max((sum(e) for f in self.polys for e in f), default=0)

    @property
    def norm(self) -> int:
        return max((abs(c) for f in self.polys for c in f.values()), default=0)

    def __len__(self):
        return len(self.polys)

    def evaluate(self, point: Sequence[int], p: int | None = None) -> list[int]:
        return [p_eval(f, point, p) for f in self.polys]

    def describe(self) -> str:
        lines = [f"# vars={self.num_vars} polys={len(self.polys)} degree={self.degree} norm={self.norm}"]
        lines.append("# " + " ".join(self.names))
        lines += [p_format(f, self.names) for f in self.polys]
        return "\n".join(lines)


def _mat_vars(g: int, n: int):
    base = 4 * g
    return [[p_var(base, n), p_var(base + 1, n)], [p_var(base + 2, n), p_var(base + 3, n)]]


def _mat_mul(x, y):
    return [
        [p_add(p_mul(x[i][0], y[0][j]), p_mul(x[i][1], y[1][j])) for j in range(2)] for i in range(2)
    ]


def _adjugate(x):
    return [[x[1][1], p_neg(x[0][1])], [p_neg(x[1][0]), x[0][0]]]


def encode_noncommutative(pres: GroupPresentation, pair: tuple[int, int] = (0, 1)) -> PolySystem:
    """Equations whose solutions are representations with ``pair`` non-commuting."""
    k = len(pres.generators)
    if k < 2:
        raise TooFewGenerators(f"need at least 2 generators, got {k}")
    i, j = pair
    if not (0 <= i < k and 0 <= j < k and i != j):
        raise ValueError(f"bad generator pair {pair} for {k} generators")
    n = 4 * k + 4
    names = [f"{g}{r}{c}" for g in pres.generators for r in (1, 2) for c in (1, 2)]
    names += ["t1", "t2", "t3", "t4"]
    mats = [_mat_vars(g, n) for g in range(k)]
    one = p_const(1, n)
    polys = []
    for m in mats:
        polys.append(p_sub(p_sub(p_mul(m[0][0], m[1][1]), p_mul(m[0][1], m[1][0])), one))
    for rel in pres.relators:
        acc = [[one, {}], [{}, one]]
        for g, e in rel:
            acc = _mat_mul(acc, mats[g] if e == 1 else _adjugate(mats[g]))
        for r in range(2):
            for c in range(2):
                polys.append(p_sub(acc[r][c], one) if r == c else acc[r][c])
    xy = _mat_mul(mats[i], mats[j])
    yx = _mat_mul(mats[j], mats[i])
    comm = [p_sub(xy[r][c], yx[r][c]) for r in range(2) for c in range(2)]
    rab = p_neg(one)
    for t, f in enumerate(comm):
        rab = p_add(rab, p_mul(p_var(4 * k + t, n), f))
    polys.append(rab)
    return PolySystem(n, polys, names)


class _Solver:
    def __init__(self, sys: PolySystem, p: int):
        self.p = p
        self.n = sys.num_vars
        # term = (coef, ((var, exp), ...))
        self.polys = [
            [(c % p, tuple((v, k) for v, k in enumerate(e) if k)) for e, c in f.items() if c % p] for f in sys.polys
        ]
        self.vars_of = [sorted({v for _, mono in f for v, _ in mono}) for f in self.polys]
        self.polys_of: list[list[int]] = [[] for _ in range(self.n)]
        for idx, vs in enumerate(self.vars_of):
            for v in vs:
                self.polys_of[v].append(idx)
        self.order = list(sys.var_order) if sys.var_order else list(range(self.n))
        self.val: list = [None] * self.n

    def _univariate(self, idx: int, v: int) -> list[int]:
        """Coefficients (low first) of poly idx in the single unknown v."""
        p = self.p
        coeffs: dict[int, int] = {}
        for c, mono in self.polys[idx]:
            term = c
            k = 0
            for u, e in mono:
                if u == v:
                    k = e
                else:
                    term = term * pow(self.val[u], e, p) % p
            coeffs[k] = (coeffs.get(k, 0) + term) % p
        deg = max(coeffs, default=0)
        return [coeffs.get(d, 0) for d in range(deg + 1)]

    def _candidates(self, idx: int, v: int) -> list[int] | None:
        """Values of v that zero poly idx; None means any value works."""
        c = self._univariate(idx, v)
        try:
            return roots_mod_p(IntPolynomial(c), self.p)
        except ZeroPolynomialModP:
            return None

    def _propagate(self, trail: list[int], queue: list[int]) -> bool:
        while queue:
            idx = queue.pop()
            unknown = [v for v in self.vars_of[idx] if self.val[v] is None]
            if not unknown:
                if p_eval_terms(self.polys[idx], self.val, self.p):
                    return False
            elif len(unknown) == 1:
                (v,) = unknown
                cand = self._candidates(idx, v)
                if cand is None:
                    continue
                if not cand:
                    return False
                if len(cand) == 1:
                    self.val[v] = cand[0]
                    trail.append(v)
                    queue.extend(self.polys_of[v])
        return True

    def _undo(self, trail):
        for v in trail:
            self.val[v] = None

    def solve(self) -> list[int] | None:
        trail: list[int] = []
        if not self._propagate(trail, list(range(len(self.polys)))):
            return None
        return self._search()

    def _search(self) -> list[int] | None:
        v = next((u for u in self.order if self.val[u] is None), None)
        if v is None:
            return list(self.val)
        values: list[int] | range = range(self.p)
        for idx in self.polys_of[v]:
            if all(self.val[u] is not None for u in self.vars_of[idx] if u != v):
                cand = self._candidates(idx, v)
                if cand is not None:
                    values = [x for x in values if x in set(cand)]
        for x in values:
            trail = [v]
            self.val[v] = x
            if self._propagate(trail, list(self.polys_of[v])):
                found = self._search()
                if found is not None:
                    return found
            self._undo(trail)
        return None


def p_eval_terms(terms, val, p) -> int:
    total = 0
    for c, mono in terms:
        for v, e in mono:
            c = c * pow(val[v], e, p) % p
        total += c
    return total % p


def solvable_mod_p(sys: PolySystem, p: int) -> tuple[bool, list[int] | None]:
    """Whether all polynomials vanish at some point of (Z/p)^n, with a witness.

    Depth-first search with propagation: once a polynomial has a single
    unassigned variable its roots restrict (or force) that variable.  The
    size guard p**n <= 10**9 is waived when ``sys.var_order`` is given.
    """
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    if sys.var_order is None and p**sys.num_vars > SEARCH_LIMIT:
        raise InfeasibleEnumeration(f"{p}^{sys.num_vars} exceeds {SEARCH_LIMIT}; pass var_order to search anyway")
    point = _Solver(sys, p).solve()
    if point is None:
        return False, None
    assert all(v == 0 for v in sys.evaluate(point, p))
    return True, point


# ---------------------------------------------------------------- prime scans


@dataclass(frozen=True)
class DensityReport:
    h: IntPolynomial
    x_max: int
    pi_x: int
    pi_h_x: int
    first_prime_with_root: int | None
    discriminant: int

    @property
    def ratio(self) -> float:
        return self.pi_h_x / self.pi_x if self.pi_x else 0.0

    def summary(self) -> str:
        return "\n".join(
            [
                f"h = {self.h.pretty('x')}",
                f"x_max = {self.x_max}",
                f"primes = {self.pi_x}",
                f"primes with a root = {self.pi_h_x}",
                f"ratio = {self.pi_h_x}/{self.pi_x} = {self.ratio:.6f}",
                f"first prime with a root = {self.first_prime_with_root}",
                f"discriminant = {self.discriminant}",
            ]
        )


def _first_root(h: IntPolynomial, p: int) -> int | None:
    try:
        r = roots_mod_p(h, p, method="exhaustive" if p < 64 else "gcd")
    except ZeroPolynomialModP:
        return 0
    return r[0] if r else None


def density_rows(h: IntPolynomial, x_max: int) -> Iterator[tuple[int, bool, int | None]]:
    """(p, has_root, smallest root or None) for each prime p <= x_max."""
    for p in primes_up_to(x_max):
        r = _first_root(h, p)
        yield p, r is not None, r


def density_scan(h: IntPolynomial, x_max: int, rows: list | None = None) -> DensityReport:
    """Count the primes up to x_max modulo which h has a root.

    If ``rows`` is a list, the per-prime rows are appended to it.
    """
    if h.degree < 1:
        raise ValueError("h must have degree at least 1")
    if not 2 <= x_max <= DENSITY_LIMIT:
        raise ValueError(f"x_max must be in [2, {DENSITY_LIMIT}]")
    pi_x = pi_h = 0
    first = None
    for row in density_rows(h, x_max):
        pi_x += 1
        if row[1]:
            pi_h += 1
            if first is None:
                first = row[0]
        if rows is not None:
            rows.append(row)
    return DensityReport(h, x_max, pi_x, pi_h, first, discriminant(h))


def format_rows(rows) -> str:
    out = ["p,has_root,first_root"]
    for p, has, r in rows:
        out.append(f"{p},{int(has)},{'' if r is None else r}")
    return "\n".join(out) + "\n"


def _scan_order() -> Iterator[int]:
    yield 0
    k = 1
    while True:
        yield k
        yield -k
        k += 1


def unconditional_prime(h: IntPolynomial) -> tuple[int, int]:
    """A prime p and integer x0 with h(x0) = 0 mod p, no conjectures needed.

    h takes each of the values 0, 1, -1 at most deg h times, so among the
    first 3*deg + 1 integers in the order 0, 1, -1, 2, -2, ... some x0 has
    |h(x0)| > 1; any prime factor of h(x0) works.
    """
    deg = h.degree
    if deg < 1:
        raise ValueError("h must have degree at least 1")
    bound = math.ceil(3 * deg / 2)
    for x0 in _scan_order():
        if abs(x0) > bound:
            break
        v = abs(h(x0))
        if v > 1:
            q = smallest_prime_factor(v)
            if q is None or q >= MAX_MODULUS:
                raise FactorizationTooLarge(f"|h({x0})| = {v} has no prime factor below 10**6 and is not a prime below 2**62")
            return q, x0
    raise AssertionError("unreachable: h took only values in {-1, 0, 1}")  # pragma: no cover
