"""Search for non-commutative representations of a knot group into SL(2, Z/p).

Two search strategies and a brute-force reference:

* ``strategy_alexander`` looks for reducible representations
  g_i -> [[lam, b_i], [0, 1/lam]].  Such an assignment satisfies the
  Wirtinger relators exactly when b solves the Fox matrix evaluated at
  t = lam**2, which has non-constant solutions iff lam**2 is a root of the
  Alexander polynomial mod p.
* ``strategy_backtrack`` is a complete search with constraint propagation.
  All Wirtinger generators are conjugate in the knot group, so their images
  share one conjugacy class; generator 0 is pinned to a class
  representative and the next branching generator is reduced modulo the
  representative's centralizer.
* ``enumerate_oracle`` enumerates every assignment with plain table lookups
  and shares no search code with the strategies.

A ``NotFound`` result only says no representation exists for the primes
searched.  It is never evidence that the knot is trivial.
"""

from __future__ import annotations

import concurrent.futures
import hashlib
import json
import logging
import os
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .arith import (
    MAX_MODULUS,
    IntPolynomial,
    Mat2,
    ZeroPolynomialModP,
    is_prime,
    primes_between,
    roots_mod_p,
    sl2_elements,
    sl2_order,
    sqrt_mod,
)
from .knotio import KnotDiagram, canonical_bytes, canonical_form, render_pd, require_valid
from .present import GroupPresentation, NotWirtinger, alexander_from_presentation, fox_matrix, wirtinger

log = logging.getLogger(__name__)

CERT_VERSION = 1
STRATEGIES = ("alexander", "backtrack", "auto")
ORACLE_LIMIT = 10**9


class BudgetExhausted(RuntimeError):
    def __init__(self, primes: Sequence[int], max_nodes: int):
        self.primes = tuple(primes)
        self.max_nodes = max_nodes
        super().__init__(f"backtracking budget of {max_nodes} nodes ran out at primes {list(self.primes)}")


class InfeasibleEnumeration(ValueError):
    pass


# ---------------------------------------------------------------- data


@dataclass(frozen=True)
class ProverConfig:
    prime_min: int = 2
    prime_max: int = 1 << 20
    strategy: str = "auto"
    deterministic: bool = True
    max_nodes: int = 20_000
    workers: int | None = None

    def __post_init__(self):
        if not 2 <= self.prime_min <= self.prime_max < MAX_MODULUS:
            raise ValueError(f"need 2 <= prime_min <= prime_max < 2**62, got {self.prime_min}..{self.prime_max}")
        if self.max_nodes <= 0:
            raise ValueError("max_nodes must be positive")
        if self.strategy not in STRATEGIES:
            raise ValueError(f"strategy must be one of {STRATEGIES}")


@dataclass(frozen=True)
class NotFound:
    prime_min: int
    prime_max: int
    strategy: str

    def __str__(self):
        return f"no non-commutative SL(2, Z/p) representation found for primes {self.prime_min}..{self.prime_max} (strategy {self.strategy})"


@dataclass
class Certificate:
    """The witness: a prime and one SL(2, Z/p) matrix per Wirtinger generator.

    Fields hold raw decoded JSON values; nothing is trusted until the
    verifier has looked at it.
    """

    diagram: str
    digest: str
    prime: int
    generators: list[str]
    matrices: list[list[list[int]]]
    version: int = CERT_VERSION
    extra: dict = field(default_factory=dict, compare=False)

    def to_json(self) -> str:
        obj = {
            "version": self.version,
            "diagram": self.diagram,
            "digest": self.digest,
            "prime": self.prime,
            "generators": self.generators,
            "matrices": self.matrices,
        }
        return json.dumps(obj, separators=(",", ":"), ensure_ascii=True)

    def to_bytes(self) -> bytes:
        return (self.to_json() + "\n").encode("ascii")

    @classmethod
    def from_json(cls, text: str | bytes) -> "Certificate":
        from .verifier import MalformedCertificate

        try:
            obj = json.loads(text, parse_float=_reject_float, parse_constant=_reject_float)
        except (ValueError, UnicodeDecodeError) as exc:
            raise MalformedCertificate(f"not JSON: {exc}") from None
        if not isinstance(obj, dict):
            raise MalformedCertificate("top level must be an object")
        required = ("version", "diagram", "digest", "prime", "generators", "matrices")
        missing = [k for k in required if k not in obj]
        if missing:
            raise MalformedCertificate(f"missing fields {missing}")
        extra = {k: v for k, v in obj.items() if k not in required}
        return cls(
            diagram=obj["diagram"],
            digest=obj["digest"],
            prime=obj["prime"],
            generators=obj["generators"],
            matrices=obj["matrices"],
            version=obj["version"],
            extra=extra,
        )

    def images(self) -> list[Mat2]:
        return [Mat2.from_rows(m, self.prime) for m in self.matrices]


def _reject_float(s):
    from .verifier import MalformedCertificate

    raise MalformedCertificate(f"non-integer number {s}")


def diagram_digest(d: KnotDiagram) -> str:
    return hashlib.sha256(canonical_bytes(d)).hexdigest()


def make_certificate(d: KnotDiagram, p: int, images: Sequence[Mat2]) -> Certificate:
    """Package images of the generators of wirtinger(canonical_form(d))."""
    canon = canonical_form(d)
    pres = wirtinger(canon)
    if len(images) != len(pres.generators):
        raise ValueError(f"{len(images)} images for {len(pres.generators)} generators")
    return Certificate(
        diagram=render_pd(canon),
        digest=diagram_digest(canon),
        prime=p,
        generators=list(pres.generators),
        matrices=[m.rows() for m in images],
    )


# ---------------------------------------------------------------- 2x2 tuples mod p
# Hot loops work on (a, b, c, d) tuples rather than Mat2 objects.


def _mul(x, y, p):
    a, b, c, d = x
    e, f, g, h = y
    return ((a * e + b * g) % p, (a * f + b * h) % p, (c * e + d * g) % p, (c * f + d * h) % p)


def _inv(x, p):
    a, b, c, d = x
    return (d, -b % p, -c % p, a)


_I = (1, 0, 0, 1)


def _word_value(letters, assign, p):
    acc = _I
    for g, e in letters:
        m = assign[g]
        acc = _mul(acc, m if e == 1 else _inv(m, p), p)
    return acc


def _require_wirtinger(pres: GroupPresentation) -> None:
    if pres.kind != "wirtinger":
        raise NotWirtinger("the search strategies need a Wirtinger presentation")


# ---------------------------------------------------------------- linear algebra mod p


def nullspace_mod(rows: list[list[int]], ncols: int, p: int) -> list[list[int]]:
    """Basis of {x : rows . x = 0} over Z/p, one vector per free column (ascending)."""
    m = [r[:] for r in rows]
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(m)) if m[i][c] % p), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = pow(m[r][c], -1, p)
        m[r] = [v * inv % p for v in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] % p:
                f = m[i][c]
                m[i] = [(a - f * b) % p for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    free = [c for c in range(ncols) if c not in set(pivots)]
    basis = []
    for fc in free:
        v = [0] * ncols
        v[fc] = 1
        for i, pc in enumerate(pivots):
            v[pc] = -m[i][fc] % p
        basis.append(v)
    return basis


# ---------------------------------------------------------------- Alexander strategy


def strategy_alexander(pres: GroupPresentation, delta: IntPolynomial, p: int) -> list[Mat2] | None:
    """Reducible representation with eigenvalue lam, lam**2 a root of delta mod p."""
    _require_wirtinger(pres)
    k = len(pres.generators)
    if k < 2 or p == 2:
        return None
    try:
        candidates = roots_mod_p(delta, p)
    except ZeroPolynomialModP:
        candidates = list(range(p))
    fm = fox_matrix(pres)
    for s in candidates:
        if s in (0, 1):
            continue
        lam = sqrt_mod(s, p)
        if lam is None:
            continue
        basis = nullspace_mod(fm.eval_mod(s, p), k, p)
        vec = next((v for v in basis if len(set(v)) > 1), None)
        if vec is None:
            continue
        j = next(i for i, v in enumerate(vec) if v != vec[0])
        scale = pow((vec[j] - vec[0]) % p, -1, p)
        b = [(v - vec[0]) * scale % p for v in vec]
        mu = pow(lam, -1, p)
        images = [Mat2(lam, bi, 0, mu, p) for bi in b]
        if all(_word_value(r.letters, [m.entries() for m in images], p) == _I for r in pres.relators):
            return images
        log.warning("reducible candidate at p=%d, s=%d failed the relators", p, s)  # pragma: no cover
    return None


# ---------------------------------------------------------------- backtracking


def class_representatives(p: int) -> list[tuple[int, int, int, int]]:
    """One element per non-central conjugacy class of SL(2, Z/p), by trace."""
    reps = []
    for tr in range(p):
        if p == 2 and tr == 0:
            reps.append((1, 1, 0, 1))
        elif tr == 2 % p or tr == (-2) % p:
            sgn = 1 if tr == 2 % p else p - 1
            nonres = next((v for v in range(2, p) if pow(v, (p - 1) // 2, p) == p - 1), None)
            for u in (1, nonres):
                if u is not None:
                    reps.append((sgn, sgn * u % p, 0, sgn))
        else:
            reps.append((0, p - 1, 1, tr))
    return reps


def _trace_elements(tr: int, p: int):
    """Non-central elements of trace ``tr``, lexicographic in (a, b, c, d)."""
    for a in range(p):
        d = (tr - a) % p
        bc = (a * d - 1) % p
        for b in range(p):
            if b:
                c = bc * pow(b, -1, p) % p
                if not (b == 0 and c == 0 and a == d):
                    yield (a, b, c, d)
            elif bc == 0:
                for c in range(p):
                    if c or a != d:
                        yield (a, 0, c, d)


def _centralizer(r, p):
    a, b, c, d = r
    tr = (a + d) % p
    out = []
    for x in range(p):
        for y in range(p):
            if (x * x + tr * x * y + y * y) % p == 1:
                out.append(((x + y * a) % p, y * b % p, y * c % p, (x + y * d) % p))
    return out


def _branch_order(pres: GroupPresentation) -> list[int]:
    """Static branching order: generator 0 first, then whichever unknown forces most."""
    k = len(pres.generators)
    rels = [r.letters for r in pres.relators]

    def closure(known):
        known = set(known)
        changed = True
        while changed:
            changed = False
            for letters in rels:
                unknown = [g for g, _ in letters if g not in known]
                if len(unknown) == 1:
                    known.add(unknown[0])
                    changed = True
        return known

    order = [0]
    known = closure({0})
    while len(known) < k:
        best = max((g for g in range(k) if g not in known), key=lambda g: (len(closure(known | {g})), -g))
        order.append(best)
        known = closure(known | {best})
    return order


class _Search:
    def __init__(self, pres: GroupPresentation, p: int, budget: int):
        self.p = p
        self.k = len(pres.generators)
        self.rels = [r.letters for r in pres.relators]
        self.rels_of: list[list[int]] = [[] for _ in range(self.k)]
        for i, letters in enumerate(self.rels):
            for g in {g for g, _ in letters}:
                self.rels_of[g].append(i)
        self.order = _branch_order(pres)
        self.budget = budget
        self.nodes = 0
        self.assign: list = [None] * self.k
        self.trace = 0

    def _solve_for(self, letters, g):
        """Value of the single unknown g (occurring once) that makes the word trivial."""
        p = self.p
        idx = next(i for i, (h, _) in enumerate(letters) if h == g)
        e = letters[idx][1]
        u = _word_value(letters[:idx], self.assign, p)
        v = _word_value(letters[idx + 1 :], self.assign, p)
        x = _inv(_mul(v, u, p), p)
        return x if e == 1 else _inv(x, p)

    def _assign(self, g, value, trail) -> bool:
        """Assign and propagate; False on contradiction. Assigned gens go on trail."""
        p = self.p
        self.assign[g] = value
        trail.append(g)
        queue = [g]
        while queue:
            h = queue.pop()
            for ri in self.rels_of[h]:
                letters = self.rels[ri]
                unknown = {x for x, _ in letters if self.assign[x] is None}
                if not unknown:
                    if _word_value(letters, self.assign, p) != _I:
                        return False
                elif len(unknown) == 1:
                    (x,) = unknown
                    if sum(1 for y, _ in letters if y == x) != 1:
                        continue
                    val = self._solve_for(letters, x)
                    a, b, c, d = val
                    # Every generator is conjugate to generator 0: same trace, non-central.
                    if (a + d) % p != self.trace or (b == 0 and c == 0 and a == d):
                        return False
                    self.assign[x] = val
                    trail.append(x)
                    queue.append(x)
        return True

    def _undo(self, trail):
        for g in trail:
            self.assign[g] = None

    def _tick(self):
        self.nodes += 1
        if self.nodes > self.budget:
            raise BudgetExhausted([self.p], self.budget)

    def run(self):
        p = self.p
        if self.k < 2:
            return None
        for rep in class_representatives(p):
            self.trace = (rep[0] + rep[3]) % p
            self._tick()
            trail: list[int] = []
            if self._assign(0, rep, trail):
                found = self._descend(1, rep)
                if found is not None:
                    return found
            self._undo(trail)
        return None

    def _descend(self, level, rep):
        p = self.p
        if level == len(self.order) or all(v is not None for v in self.assign):
            if len(set(self.assign)) > 1:
                return list(self.assign)
            return None
        g = self.order[level]
        if self.assign[g] is not None:
            return self._descend(level + 1, rep)
        cent = _centralizer(rep, p) if level == 1 else None
        for val in _trace_elements(self.trace, p):
            if cent is not None and any(_mul(_mul(c, val, p), _inv(c, p), p) < val for c in cent):
                continue
            self._tick()
            trail: list[int] = []
            if self._assign(g, val, trail):
                found = self._descend(level + 1, rep)
                if found is not None:
                    return found
            self._undo(trail)
        return None


def strategy_backtrack(pres: GroupPresentation, p: int, budget: int = 20_000) -> list[Mat2] | None:
    """Complete search for a non-commutative assignment at prime p.

    Returns None when the search space is exhausted; raises BudgetExhausted
    when more than ``budget`` nodes would be needed.
    """
    _require_wirtinger(pres)
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    found = _Search(pres, p, budget).run()
    if found is None:
        return None
    return [Mat2(*m, p) for m in found]


# ---------------------------------------------------------------- oracle


def _group_tables(p: int):
    elems = np.array(list(sl2_elements(p)), dtype=np.int64)
    n = len(elems)
    code = ((elems[:, 0] * p + elems[:, 1]) * p + elems[:, 2]) * p + elems[:, 3]
    lookup = np.full(p**4, -1, dtype=np.int64)
    lookup[code] = np.arange(n)
    a, b, c, d = (elems[:, i] for i in range(4))
    mul = np.empty((n, n), dtype=np.int32)
    for i in range(n):
        ea, eb, ec, ed = elems[i]
        prod = (
            ((ea * a + eb * c) % p * p + (ea * b + eb * d) % p) * p + (ec * a + ed * c) % p
        ) * p + (ec * b + ed * d) % p
        mul[i] = lookup[prod]
    inv_code = ((d * p + (-b) % p) * p + (-c) % p) * p + a
    inv = lookup[inv_code].astype(np.int32)
    return elems, mul, inv


def _oracle_class_reps(mul, inv) -> list[int]:
    """Smallest index in each conjugacy class, by brute force."""
    n = len(inv)
    seen = np.zeros(n, dtype=bool)
    reps = []
    for x in range(n):
        if seen[x]:
            continue
        reps.append(x)
        orbit = mul[mul[np.arange(n), x], inv]  # g x g^-1 for every g
        seen[orbit] = True
    return reps


def enumerate_oracle(pres: GroupPresentation, p: int) -> tuple[bool, list[Mat2] | None]:
    """Exhaustively decide whether a non-commutative representation exists at p.

    Generator 0 ranges over conjugacy-class representatives, every other
    generator over all of SL(2, Z/p).  Non-commutativity is tested with
    pairwise commutators, independently of the Wirtinger shortcut.
    """
    _require_wirtinger(pres)
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    k = len(pres.generators)
    if sl2_order(p) ** k > ORACLE_LIMIT:
        raise InfeasibleEnumeration(f"|SL(2,{p})|^{k} = {sl2_order(p) ** k} exceeds {ORACLE_LIMIT}")
    if k < 2:
        return False, None
    elems, mul, inv = _group_tables(p)
    n = len(elems)
    ident = int(np.flatnonzero((elems == [1, 0, 0, 1]).all(axis=1))[0])
    reps = _oracle_class_reps(mul, inv)
    # The last one or two generators are vectorized; the rest are looped.
    nvec = min(2, k - 1)
    grids = np.meshgrid(*([np.arange(n)] * nvec), indexing="ij")
    vec = [g.ravel().astype(np.int32) for g in grids]
    size = vec[0].size
    loop_ranges = [reps] + [range(n)] * (k - 1 - nvec)

    def lookup(assign, g, e):
        x = assign[g]
        return x if e == 1 else inv[x]

    import itertools

    for prefix in itertools.product(*loop_ranges):
        assign = [np.full(size, v, dtype=np.int32) for v in prefix] + vec
        ok = np.ones(size, dtype=bool)
        for r in pres.relators:
            acc = np.full(size, ident, dtype=np.int32)
            for g, e in r:
                acc = mul[acc, lookup(assign, g, e)]
            ok &= acc == ident
            if not ok.any():
                break
        if not ok.any():
            continue
        noncomm = np.zeros(size, dtype=bool)
        for i in range(k):
            for j in range(i + 1, k):
                noncomm |= mul[assign[i], assign[j]] != mul[assign[j], assign[i]]
        hits = np.flatnonzero(ok & noncomm)
        if hits.size:
            h = int(hits[0])
            witness = [Mat2(*(int(v) for v in elems[int(assign[g][h])]), p) for g in range(k)]
            return True, witness
    return False, None


# ---------------------------------------------------------------- driver


def _try_prime(pres, delta, p, strategy, budget):
    """Run the configured strategy at one prime: ('found', images) / ('none',) / ('budget',)."""
    if strategy in ("alexander", "auto"):
        found = strategy_alexander(pres, delta, p)
        if found is not None:
            return ("found", [m.entries() for m in found])
        if strategy == "alexander":
            return ("none", None)
    try:
        found = strategy_backtrack(pres, p, budget)
    except BudgetExhausted:
        return ("budget", None)
    if found is not None:
        return ("found", [m.entries() for m in found])
    return ("none", None)


def _worker_count(cfg: ProverConfig) -> int:
    n = cfg.workers
    if n is None:
        n = 1
    cap = os.environ.get("KNOTCERT_THREADS")
    if cap:
        try:
            n = min(n, max(1, int(cap)))
        except ValueError:
            pass
    return max(1, n)


def prove(d: KnotDiagram, cfg: ProverConfig | None = None) -> Certificate | NotFound:
    """Find a certificate of knottedness for d, scanning primes in ascending order.

    With ``strategy="backtrack"`` a budget overrun aborts with BudgetExhausted.
    With ``"auto"`` such a prime is skipped and, if nothing is found,
    BudgetExhausted is raised at the end, so a NotFound always means every
    prime in range was searched to completion.
    """
    cfg = cfg or ProverConfig()
    require_valid(d)
    canon = canonical_form(d)
    pres = wirtinger(canon)
    if len(pres.generators) < 2:
        return NotFound(cfg.prime_min, cfg.prime_max, cfg.strategy)
    delta = alexander_from_presentation(pres) if cfg.strategy != "backtrack" else IntPolynomial([1])
    primes = primes_between(cfg.prime_min, cfg.prime_max)
    workers = _worker_count(cfg)
    skipped: list[int] = []

    def handle(p, outcome):
        kind, images = outcome
        if kind == "found":
            return make_certificate(canon, p, [Mat2(*m, p) for m in images])
        if kind == "budget":
            if cfg.strategy == "backtrack":
                raise BudgetExhausted([p], cfg.max_nodes)
            log.info("backtracking budget exhausted at p=%d; skipping", p)
            skipped.append(p)
        return None

    if workers == 1:
        for p in primes:
            cert = handle(p, _try_prime(pres, delta, p, cfg.strategy, cfg.max_nodes))
            if cert is not None:
                return cert
    else:
        with concurrent.futures.ProcessPoolExecutor(max_workers=workers) as pool:
            while True:
                batch = [p for _, p in zip(range(4 * workers), primes)]
                if not batch:
                    break
                futs = {pool.submit(_try_prime, pres, delta, p, cfg.strategy, cfg.max_nodes): p for p in batch}
                if cfg.deterministic:
                    # Join the whole batch and take the smallest prime.
                    outcomes = {futs[f]: f.result() for f in futs}
                    for p in batch:
                        cert = handle(p, outcomes[p])
                        if cert is not None:
                            return cert
                else:
                    for f in concurrent.futures.as_completed(futs):
                        cert = handle(futs[f], f.result())
                        if cert is not None:
                            for other in futs:
                                other.cancel()
                            return cert
    if skipped:
        raise BudgetExhausted(skipped, cfg.max_nodes)
    return NotFound(cfg.prime_min, cfg.prime_max, cfg.strategy)


def prove_at(pres: GroupPresentation, p: int, strategy: str = "auto", max_nodes: int = 10**7) -> list[Mat2] | None:
    """Fixed-prime search on a presentation (no certificate packaging)."""
    delta = alexander_from_presentation(pres) if strategy != "backtrack" and len(pres.relators) else IntPolynomial([1])
    kind, images = _try_prime(pres, delta, p, strategy, max_nodes)
    if kind == "budget":
        raise BudgetExhausted([p], max_nodes)
    return [Mat2(*m, p) for m in images] if kind == "found" else None
