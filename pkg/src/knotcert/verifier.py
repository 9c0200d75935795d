"""Checking certificates of knottedness.

The verifier rebuilds the Wirtinger presentation from the diagram it is
given and reads only the prime and the matrices from the certificate.  The
work is one pass over the relators with 2x2 matrix products, so the cost is
linear in the presentation size times the cost of arithmetic mod p.
"""

from __future__ import annotations

import enum
import hashlib
from dataclasses import dataclass
from typing import Sequence

from .arith import MAX_MODULUS, Mat2, eval_word, is_prime
from .knotio import DiagramError, KnotDiagram, canonical_bytes, canonical_form, require_valid
from .present import GroupPresentation, wirtinger


class MalformedCertificate(ValueError):
    pass


class ArityMismatch(ValueError):
    pass


class Reason(enum.Enum):
    OK = "OK"
    NOT_PRIME = "NotPrime"
    DIGEST_MISMATCH = "DigestMismatch"
    BAD_DETERMINANT = "BadDeterminant"
    RELATION_VIOLATED = "RelationViolated"
    COMMUTATIVE_IMAGE = "CommutativeImage"
    MALFORMED = "MalformedCertificate"
    OUT_OF_RANGE = "OutOfSupportedRange"


@dataclass(frozen=True)
class Verdict:
    reason: Reason
    relator: int | None = None
    detail: str = ""

    @property
    def accepted(self) -> bool:
        return self.reason is Reason.OK

    def __str__(self):
        if self.reason is Reason.RELATION_VIOLATED:
            return f"RelationViolated({self.relator})"
        return self.reason.value

    def __bool__(self):
        return self.accepted


def check_relations(pres: GroupPresentation, images: Sequence[Mat2]) -> tuple[bool, int | None]:
    """(True, None) if every relator maps to I, else (False, first failing index)."""
    if len(images) != len(pres.generators):
        raise ArityMismatch(f"{len(images)} images for {len(pres.generators)} generators")
    if not images:
        return True, None
    p = images[0].p
    ident = Mat2.identity(p)
    for i, r in enumerate(pres.relators):
        if eval_word(r, images, p) != ident:
            return False, i
    return True, None


def check_noncommutative(pres: GroupPresentation, images: Sequence[Mat2]) -> bool:
    """Whether the images generate a non-abelian group.

    For a Wirtinger presentation whose relators hold, the image is abelian
    exactly when all generators go to the same matrix, since every
    generator is conjugate to every other.  Other presentations fall back
    to pairwise commutators.
    """
    if pres.kind == "wirtinger":
        return len(set(images)) > 1
    for i, x in enumerate(images):
        for y in images[i + 1 :]:
            if x @ y != y @ x:
                return True
    return False


def _is_int(v) -> bool:
    return isinstance(v, int) and not isinstance(v, bool)


def _shape_ok(m) -> bool:
    return (
        isinstance(m, list)
        and len(m) == 2
        and all(isinstance(row, list) and len(row) == 2 and all(_is_int(v) for v in row) for row in m)
    )


def verify(cert, d: KnotDiagram) -> Verdict:
    """Accept iff ``cert`` proves that ``d`` is knotted.  Never raises."""
    from .prover import CERT_VERSION, Certificate

    if not isinstance(cert, Certificate):
        return Verdict(Reason.MALFORMED, detail="not a Certificate")
    if not (_is_int(cert.version) and cert.version == CERT_VERSION):
        return Verdict(Reason.MALFORMED, detail=f"unsupported version {cert.version!r}")
    if not (isinstance(cert.digest, str) and isinstance(cert.diagram, str)):
        return Verdict(Reason.MALFORMED, detail="digest and diagram must be strings")
    if not (isinstance(cert.generators, list) and all(isinstance(g, str) for g in cert.generators)):
        return Verdict(Reason.MALFORMED, detail="generators must be a list of strings")
    if not (isinstance(cert.matrices, list) and all(_shape_ok(m) for m in cert.matrices)):
        return Verdict(Reason.MALFORMED, detail="matrices must be 2x2 integer arrays")
    if not _is_int(cert.prime):
        return Verdict(Reason.MALFORMED, detail="prime must be an integer")

    try:
        require_valid(d)
        canon = canonical_form(d)
        digest = hashlib.sha256(canonical_bytes(canon)).hexdigest()
    except (DiagramError, TypeError, AttributeError) as exc:
        return Verdict(Reason.DIGEST_MISMATCH, detail=f"diagram is not valid: {exc}")
    if cert.digest != digest:
        return Verdict(Reason.DIGEST_MISMATCH)

    p = cert.prime
    if p >= MAX_MODULUS:
        return Verdict(Reason.OUT_OF_RANGE, detail="prime must be below 2**62")
    if p < 2 or not is_prime(p):
        return Verdict(Reason.NOT_PRIME, detail=f"{p} is not prime")

    pres = wirtinger(canon)
    if len(cert.matrices) != len(pres.generators) or list(cert.generators) != list(pres.generators):
        return Verdict(Reason.MALFORMED, detail="generator list does not match the diagram")

    images = []
    for m in cert.matrices:
        (a, b), (c, dd) = m
        if not all(0 <= v < p for v in (a, b, c, dd)):
            return Verdict(Reason.BAD_DETERMINANT, detail="entry outside [0, p)")
        if (a * dd - b * c) % p != 1:
            return Verdict(Reason.BAD_DETERMINANT)
        images.append(Mat2(a, b, c, dd, p))

    ok, idx = check_relations(pres, images)
    if not ok:
        return Verdict(Reason.RELATION_VIOLATED, relator=idx)
    if not check_noncommutative(pres, images):
        return Verdict(Reason.COMMUTATIVE_IMAGE)
    return Verdict(Reason.OK)


def verify_bytes(data: bytes | str, d: KnotDiagram) -> Verdict:
    """Parse then verify; unparseable input is a MalformedCertificate verdict."""
    from .prover import Certificate

    try:
        cert = Certificate.from_json(data)
    except MalformedCertificate as exc:
        return Verdict(Reason.MALFORMED, detail=str(exc))
    return verify(cert, d)
