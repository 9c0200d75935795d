"""Exact arithmetic over Z and Z/p.

Prime-field scalars, SL(2, Z/p) matrices, dense integer polynomials, a
deterministic primality test, roots of polynomials modulo p, and
resultants/discriminants from Sylvester determinants.

Moduli are capped at ``MAX_MODULUS`` (2**62).  Python integers never
overflow, so the cap is a versioned support limit rather than a hardware
one; it keeps the Miller-Rabin witness set provably sufficient.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

import numpy as np

MAX_MODULUS = 1 << 62

# Deterministic for n < 3.3e24 (Sorenson & Webster), far beyond 2**62.
_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)

# Below this bound roots mod p are found by scanning every residue.
EXHAUSTIVE_ROOT_LIMIT = 1 << 16


class ArithError(ValueError):
    pass


class ModulusMismatch(ArithError):
    pass


class OutOfSupportedRange(ArithError):
    pass


class ZeroPolynomialModP(ArithError):
    pass


class NotInSL2(ArithError):
    pass


# ---------------------------------------------------------------- primes


def is_prime(n: int) -> bool:
    """Exact primality for 0 <= n < 2**62 (strong-pseudoprime test)."""
    if n < 0 or n >= MAX_MODULUS:
        raise OutOfSupportedRange(f"is_prime supports 0 <= n < 2**62, got {n}")
    if n < 2:
        return False
    for q in _MR_BASES:
        if n % q == 0:
            return n == q
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x == 1 or x == n - 1:
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def primes_up_to(x: int) -> Iterator[int]:
    """Yield the primes <= x in ascending order (sieve of Eratosthenes)."""
    if x < 2:
        return iter(())
    sieve = np.ones(x + 1, dtype=bool)
    sieve[:2] = False
    for q in range(2, int(x**0.5) + 1):
        if sieve[q]:
            sieve[q * q :: q] = False
    return (int(q) for q in np.flatnonzero(sieve))


def primes_between(lo: int, hi: int) -> Iterator[int]:
    """Ascending primes in [lo, hi]; fine for wide ranges with small ``lo``."""
    if hi - lo <= 10_000_000 and hi < 50_000_000:
        return (q for q in primes_up_to(hi) if q >= lo)
    return (q for q in range(max(lo, 2), hi + 1) if is_prime(q))


def smallest_prime_factor(n: int, limit: int = 1_000_000) -> int | None:
    """Smallest prime factor of |n| >= 2 by trial division up to ``limit``.

    Returns None when no factor <= limit exists and the cofactor is not a
    prime below 2**62.
    """
    n = abs(n)
    if n < 2:
        raise ValueError("no prime factor for |n| < 2")
    if n % 2 == 0:
        return 2
    q = 3
    while q <= limit and q * q <= n:
        if n % q == 0:
            return q
        q += 2
    if q * q > n:
        return n
    if n < MAX_MODULUS and is_prime(n):
        return n
    return None


def sqrt_mod(a: int, p: int) -> int | None:
    """A square root of a modulo the prime p (the smaller of +-r), or None."""
    a %= p
    if a == 0 or p == 2:
        return a
    if pow(a, (p - 1) // 2, p) != 1:
        return None
    if p % 4 == 3:
        r = pow(a, (p + 1) // 4, p)
    else:
        # Tonelli-Shanks
        q, s = p - 1, 0
        while q % 2 == 0:
            q //= 2
            s += 1
        z = 2
        while pow(z, (p - 1) // 2, p) != p - 1:
            z += 1
        m, c, t, r = s, pow(z, q, p), pow(a, q, p), pow(a, (q + 1) // 2, p)
        while t != 1:
            i, t2 = 0, t
            while t2 != 1:
                t2 = t2 * t2 % p
                i += 1
            b = pow(c, 1 << (m - i - 1), p)
            m, c = i, b * b % p
            t, r = t * c % p, r * b % p
    return min(r, p - r)


# ---------------------------------------------------------------- Z/p


def _check_modulus(p: int) -> None:
    if not 2 <= p < MAX_MODULUS:
        raise OutOfSupportedRange(f"modulus {p} outside [2, 2**62)")


@dataclass(frozen=True, slots=True)
class FpScalar:
    """An element of Z/p."""

    value: int
    p: int

    def __post_init__(self):
        _check_modulus(self.p)
        if not 0 <= self.value < self.p:
            object.__setattr__(self, "value", self.value % self.p)

    @classmethod
    def checked(cls, value: int, p: int) -> "FpScalar":
        if not is_prime(p):
            raise ArithError(f"{p} is not prime")
        return cls(value, p)

    def _other(self, other) -> int:
        if isinstance(other, FpScalar):
            if other.p != self.p:
                raise ModulusMismatch(f"{self.p} != {other.p}")
            return other.value
        return int(other)

    def __add__(self, other):
        return FpScalar((self.value + self._other(other)) % self.p, self.p)

    __radd__ = __add__

    def __sub__(self, other):
        return FpScalar((self.value - self._other(other)) % self.p, self.p)

    def __rsub__(self, other):
        return FpScalar((self._other(other) - self.value) % self.p, self.p)

    def __mul__(self, other):
        return FpScalar(self.value * self._other(other) % self.p, self.p)

    __rmul__ = __mul__

    def __neg__(self):
        return FpScalar(-self.value % self.p, self.p)

    def inverse(self) -> "FpScalar":
        if self.value == 0:
            raise ZeroDivisionError("0 has no inverse mod p")
        return FpScalar(pow(self.value, -1, self.p), self.p)

    def __truediv__(self, other):
        return self * FpScalar(self._other(other), self.p).inverse()

    def __pow__(self, k: int):
        return FpScalar(pow(self.value, k, self.p), self.p)

    def __int__(self):
        return self.value


# ---------------------------------------------------------------- SL(2, Z/p)


@dataclass(frozen=True, slots=True)
class Mat2:
    """A matrix [[a, b], [c, d]] in SL(2, Z/p); entries are kept in [0, p)."""

    a: int
    b: int
    c: int
    d: int
    p: int

    def __post_init__(self):
        _check_modulus(self.p)
        p = self.p
        for name in ("a", "b", "c", "d"):
            v = getattr(self, name)
            if not 0 <= v < p:
                object.__setattr__(self, name, v % p)
        if (self.a * self.d - self.b * self.c) % p != 1:
            raise NotInSL2(f"determinant {self.det()} != 1 mod {p}")

    @classmethod
    def identity(cls, p: int) -> "Mat2":
        return cls(1, 0, 0, 1, p)

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]], p: int) -> "Mat2":
        (a, b), (c, d) = rows
        return cls(a, b, c, d, p)

    def det(self) -> int:
        return (self.a * self.d - self.b * self.c) % self.p

    def trace(self) -> int:
        return (self.a + self.d) % self.p

    def rows(self) -> list[list[int]]:
        return [[self.a, self.b], [self.c, self.d]]

    def entries(self) -> tuple[int, int, int, int]:
        return (self.a, self.b, self.c, self.d)

    def __matmul__(self, other: "Mat2") -> "Mat2":
        return mat2_mul(self, other)

    def inverse(self) -> "Mat2":
        return mat2_inverse(self)

    def __repr__(self):
        return f"Mat2([[{self.a}, {self.b}], [{self.c}, {self.d}]] mod {self.p})"


def mat2_mul(A: Mat2, B: Mat2) -> Mat2:
    if A.p != B.p:
        raise ModulusMismatch(f"{A.p} != {B.p}")
    p = A.p
    return Mat2(
        (A.a * B.a + A.b * B.c) % p,
        (A.a * B.b + A.b * B.d) % p,
        (A.c * B.a + A.d * B.c) % p,
        (A.c * B.b + A.d * B.d) % p,
        p,
    )


def mat2_inverse(A: Mat2) -> Mat2:
    # det = 1, so the inverse is the adjugate.
    p = A.p
    return Mat2(A.d, -A.b % p, -A.c % p, A.a, p)


def eval_word(word: Iterable[tuple[int, int]], images: Sequence[Mat2], p: int | None = None) -> Mat2:
    """Evaluate a word of (generator index, +-1) letters on generator images.

    ``p`` is needed only for the empty word with no images to take it from.
    """
    if p is None:
        if not images:
            raise ArithError("eval_word needs a modulus when there are no images")
        p = images[0].p
    for m in images:
        if m.p != p:
            raise ModulusMismatch(f"image modulus {m.p} != {p}")
    a, b, c, d = 1, 0, 0, 1
    for g, e in word:
        if not 0 <= g < len(images):
            raise IndexError(f"generator index {g} out of range for {len(images)} images")
        m = images[g]
        if e == 1:
            x, y, z, w = m.a, m.b, m.c, m.d
        elif e == -1:
            x, y, z, w = m.d, -m.b, -m.c, m.a
        else:
            raise ArithError(f"letter exponent must be +-1, got {e}")
        a, b, c, d = (a * x + b * z) % p, (a * y + b * w) % p, (c * x + d * z) % p, (c * y + d * w) % p
    return Mat2(a, b, c, d, p)


def sl2_elements(p: int) -> Iterator[tuple[int, int, int, int]]:
    """All (a, b, c, d) with ad - bc = 1 mod p, in lexicographic order."""
    for a, b in itertools.product(range(p), repeat=2):
        for c in range(p):
            rhs = (1 + b * c) % p
            if a:
                yield (a, b, c, rhs * pow(a, -1, p) % p)
            elif rhs == 0:
                yield from ((a, b, c, d) for d in range(p))


def sl2_order(p: int) -> int:
    return p * (p * p - 1)


# ---------------------------------------------------------------- Z[x]


@dataclass(frozen=True)
class IntPolynomial:
    """Dense integer polynomial, ``coeffs[i]`` multiplying x**i."""

    coeffs: tuple[int, ...]

    def __init__(self, coeffs: Iterable[int] = ()):
        c = [int(v) for v in coeffs]
        while c and c[-1] == 0:
            c.pop()
        object.__setattr__(self, "coeffs", tuple(c))

    @classmethod
    def parse(cls, text: str) -> "IntPolynomial":
        """Parse a comma-separated coefficient list, constant term first."""
        parts = [s.strip() for s in text.split(",")]
        if not parts or any(not s for s in parts):
            raise ValueError(f"bad coefficient list {text!r}")
        return cls(int(s) for s in parts)

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def norm(self) -> int:
        return max((abs(v) for v in self.coeffs), default=0)

    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def leading(self) -> int:
        return self.coeffs[-1] if self.coeffs else 0

    def __call__(self, x: int) -> int:
        acc = 0
        for v in reversed(self.coeffs):
            acc = acc * x + v
        return acc

    def eval_mod(self, x: int, p: int) -> int:
        acc = 0
        for v in reversed(self.coeffs):
            acc = (acc * x + v) % p
        return acc

    def derivative(self) -> "IntPolynomial":
        return IntPolynomial(i * v for i, v in enumerate(self.coeffs) if i)

    def reduce(self, p: int) -> list[int]:
        """Coefficients mod p, trimmed (low degree first)."""
        return _trim([v % p for v in self.coeffs])

    def __add__(self, other: "IntPolynomial") -> "IntPolynomial":
        n = max(len(self.coeffs), len(other.coeffs))
        a = self.coeffs + (0,) * (n - len(self.coeffs))
        b = other.coeffs + (0,) * (n - len(other.coeffs))
        return IntPolynomial(x + y for x, y in zip(a, b))

    def __neg__(self) -> "IntPolynomial":
        return IntPolynomial(-v for v in self.coeffs)

    def __sub__(self, other: "IntPolynomial") -> "IntPolynomial":
        return self + (-other)

    def __mul__(self, other: "IntPolynomial") -> "IntPolynomial":
        if not self.coeffs or not other.coeffs:
            return IntPolynomial()
        out = [0] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, x in enumerate(self.coeffs):
            for j, y in enumerate(other.coeffs):
                out[i + j] += x * y
        return IntPolynomial(out)

    def to_csv(self) -> str:
        return ",".join(str(v) for v in self.coeffs) if self.coeffs else "0"

    def pretty(self, var: str = "t") -> str:
        if not self.coeffs:
            return "0"
        terms = []
        for i in range(len(self.coeffs) - 1, -1, -1):
            v = self.coeffs[i]
            if v == 0:
                continue
            mag = abs(v)
            mono = "" if i == 0 else (var if i == 1 else f"{var}^{i}")
            body = str(mag) if not mono else (mono if mag == 1 else f"{mag}*{mono}")
            sign = "-" if v < 0 else "+"
            terms.append((sign, body))
        first_sign, first = terms[0]
        out = ("-" if first_sign == "-" else "") + first
        for sign, body in terms[1:]:
            out += f" {sign} {body}"
        return out

    def __str__(self):
        return self.pretty("x")


# ---------------------------------------------------------------- Z/p[x] helpers
# Lists of ints, low degree first, trimmed; all functions assume p prime.


def _trim(c: list[int]) -> list[int]:
    while c and c[-1] == 0:
        c.pop()
    return c


def _pmod(a: list[int], m: list[int], p: int) -> list[int]:
    a = a[:]
    inv = pow(m[-1], -1, p)
    dm = len(m) - 1
    while len(a) - 1 >= dm and a:
        f = a[-1] * inv % p
        shift = len(a) - 1 - dm
        for i, v in enumerate(m):
            a[shift + i] = (a[shift + i] - f * v) % p
        _trim(a)
    return a


def _pmul(a: list[int], b: list[int], p: int) -> list[int]:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] = (out[i + j] + x * y) % p
    return _trim(out)


def _psub(a: list[int], b: list[int], p: int) -> list[int]:
    n = max(len(a), len(b))
    return _trim([((a[i] if i < len(a) else 0) - (b[i] if i < len(b) else 0)) % p for i in range(n)])


def _pgcd(a: list[int], b: list[int], p: int) -> list[int]:
    while b:
        a, b = b, _pmod(a, b, p)
    if not a:
        return a
    inv = pow(a[-1], -1, p)
    return [v * inv % p for v in a]


def _ppowmod(base: list[int], e: int, m: list[int], p: int) -> list[int]:
    result = [1]
    base = _pmod(base, m, p)
    while e:
        if e & 1:
            result = _pmod(_pmul(result, base, p), m, p)
        base = _pmod(_pmul(base, base, p), m, p)
        e >>= 1
    return result


def _pdivexact(a: list[int], b: list[int], p: int) -> list[int]:
    a = a[:]
    inv = pow(b[-1], -1, p)
    db = len(b) - 1
    q = [0] * max(len(a) - db, 0)
    while a and len(a) - 1 >= db:
        f = a[-1] * inv % p
        shift = len(a) - 1 - db
        q[shift] = f
        for i, v in enumerate(b):
            a[shift + i] = (a[shift + i] - f * v) % p
        _trim(a)
    return _trim(q)


def _split_roots(f: list[int], p: int) -> list[int]:
    """Roots of a monic squarefree f that splits into distinct linear factors."""
    if len(f) == 1:
        return []
    if len(f) == 2:
        return [(-f[0]) % p]
    if p == 2:
        return [x for x in (0, 1) if sum(f[i] * x**i for i in range(len(f))) % 2 == 0]
    # Deterministic Cantor-Zassenhaus: try shifts a = 0, 1, 2, ...
    for a in range(p):
        g = _ppowmod([a, 1], (p - 1) // 2, f, p)
        g = _pgcd(f, _psub(g, [1], p), p)
        if 1 < len(g) < len(f):
            return _split_roots(g, p) + _split_roots(_pdivexact(f, g, p), p)
    raise ArithError("root splitting failed")  # pragma: no cover


def _roots_exhaustive(c: list[int], p: int) -> list[int]:
    xs = np.arange(p, dtype=np.int64)
    acc = np.zeros(p, dtype=np.int64)
    for v in reversed(c):
        acc = (acc * xs + v) % p
    return [int(x) for x in np.flatnonzero(acc == 0)]


def roots_mod_p(h: IntPolynomial, p: int, method: str = "auto") -> list[int]:
    """All x in [0, p) with h(x) = 0 mod p, ascending.

    ``method`` is "exhaustive" (evaluate everywhere), "gcd" (split
    gcd(h, x^p - x)) or "auto", which evaluates everywhere for p < 2**16.
    """
    if method not in ("auto", "exhaustive", "gcd"):
        raise ValueError(f"unknown method {method!r}")
    _check_modulus(p)
    c = h.reduce(p)
    if not c:
        raise ZeroPolynomialModP(f"{h} vanishes identically mod {p}")
    if len(c) == 1:
        return []
    if method == "exhaustive" or (method == "auto" and p < EXHAUSTIVE_ROOT_LIMIT):
        return _roots_exhaustive(c, p)
    inv = pow(c[-1], -1, p)
    f = [v * inv % p for v in c]
    xp = _ppowmod([0, 1], p, f, p)
    g = _pgcd(f, _psub(xp, [0, 1], p), p)
    return sorted(_split_roots(g, p))


def has_root_mod_p(h: IntPolynomial, p: int) -> bool:
    c = h.reduce(p)
    if not c:
        raise ZeroPolynomialModP(f"{h} vanishes identically mod {p}")
    if len(c) <= 2:
        return len(c) == 2
    if p < 64:
        return any(h.eval_mod(x, p) == 0 for x in range(p))
    inv = pow(c[-1], -1, p)
    f = [v * inv % p for v in c]
    xp = _ppowmod([0, 1], p, f, p)
    return len(_pgcd(f, _psub(xp, [0, 1], p), p)) > 1


# ---------------------------------------------------------------- resultants


def int_det(m: Sequence[Sequence[int]]) -> int:
    """Exact determinant of an integer matrix (Bareiss fraction-free elimination)."""
    a = [list(row) for row in m]
    n = len(a)
    if n == 0:
        return 1
    sign, prev = 1, 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k] != 0:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        pivot = a[k][k]
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * pivot - a[i][k] * a[k][j]) // prev
        prev = pivot
    return sign * a[n - 1][n - 1]


def sylvester_matrix(f: IntPolynomial, g: IntPolynomial) -> list[list[int]]:
    """Sylvester matrix of f (degree m) and g (degree n), size (m+n) x (m+n)."""
    m, n = f.degree, g.degree
    fc = list(reversed(f.coeffs))
    gc = list(reversed(g.coeffs))
    size = m + n
    rows = []
    for i in range(n):
        rows.append([0] * i + fc + [0] * (size - m - 1 - i))
    for i in range(m):
        rows.append([0] * i + gc + [0] * (size - n - 1 - i))
    return rows


def resultant(f: IntPolynomial, g: IntPolynomial) -> int:
    if f.is_zero() or g.is_zero():
        return 0
    return int_det(sylvester_matrix(f, g))


def discriminant(h: IntPolynomial) -> int:
    """(-1)^(D(D-1)/2) res(h, h') / lc(h); gives b^2 - 4ac in degree 2."""
    D = h.degree
    if D < 1:
        raise ArithError("discriminant needs degree >= 1")
    if D == 1:
        return 1
    r = resultant(h, h.derivative())
    sign = -1 if (D * (D - 1) // 2) % 2 else 1
    q, rem = divmod(sign * r, h.leading)
    assert rem == 0
    return q
