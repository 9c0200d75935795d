"""Knot diagrams: PD-code and braid-word parsing, validation, canonical form.

PD convention: each crossing ``X(a,b,c,d)`` lists its four edge labels
counterclockwise, starting from the incoming under-strand ``a``; the
under-strand leaves through ``c``.  The over-strand runs d -> b at a
positive crossing and b -> d at a negative one.  Over-strand direction is
read off a traversal of the whole curve, so labels need not be
consecutive along the knot.
"""

from __future__ import annotations

import re
from collections import Counter
from dataclasses import dataclass, field

# Slot indices inside a crossing tuple.
A, B, C, D = range(4)
# Where the strand leaves after entering through a given slot.
_EXIT = {A: C, B: D, D: B}


class DiagramError(ValueError):
    pass


class DiagramSyntaxError(DiagramError):
    def __init__(self, pos: int, expected: str, text: str = ""):
        self.pos = pos
        self.expected = expected
        found = repr(text[pos : pos + 10]) if pos < len(text) else "end of input"
        super().__init__(f"at position {pos}: expected {expected}, found {found}")


class LabelRangeError(DiagramError):
    pass


class MultiComponentError(DiagramError):
    pass


class InvalidDiagram(DiagramError):
    def __init__(self, report: "ValidationReport"):
        self.report = report
        super().__init__("; ".join(msg for _, msg in report.issues))


@dataclass(frozen=True)
class Crossing:
    a: int
    b: int
    c: int
    d: int
    # +1 / -1 once the diagram's orientation is known, 0 otherwise.
    sign: int = field(default=0, compare=False)

    @property
    def labels(self) -> tuple[int, int, int, int]:
        return (self.a, self.b, self.c, self.d)


@dataclass(frozen=True)
class ValidationReport:
    ok: bool
    issues: tuple[tuple[str, str], ...] = ()

    @classmethod
    def from_issues(cls, issues) -> "ValidationReport":
        issues = tuple(issues)
        return cls(not issues, issues)


@dataclass(frozen=True)
class KnotDiagram:
    """An oriented knot diagram as a PD crossing list.

    Construct through :meth:`from_tuples` (or the parsers) so crossing
    signs get filled in.
    """

    crossings: tuple[Crossing, ...]
    num_loops: int = 0

    @classmethod
    def from_tuples(cls, tuples, num_loops: int = 0) -> "KnotDiagram":
        tuples = [tuple(int(v) for v in t) for t in tuples]
        signs = _signs(tuples)
        if signs is None:
            signs = [0] * len(tuples)
        return cls(tuple(Crossing(*t, sign=s) for t, s in zip(tuples, signs)), num_loops)

    @property
    def n(self) -> int:
        return len(self.crossings)

    def tuples(self) -> list[tuple[int, int, int, int]]:
        return [x.labels for x in self.crossings]

    def render(self) -> str:
        return render_pd(self)

    def __str__(self):
        return render_pd(self)


# ---------------------------------------------------------------- traversal


def _occurrences(tuples):
    occ: dict[int, list[tuple[int, int]]] = {}
    for i, t in enumerate(tuples):
        for slot, e in enumerate(t):
            occ.setdefault(e, []).append((i, slot))
    return occ


def _traverse(tuples):
    """Follow the curve from crossing 0's outgoing under-edge.

    Returns (edges, entries, problem): ``edges`` in orientation order,
    ``entries[i]`` the slots through which crossing i was entered, and a
    problem string if the walk hit an inconsistency.  Assumes every label
    occurs exactly twice.
    """
    occ = _occurrences(tuples)
    entries: list[list[int]] = [[] for _ in tuples]
    edges: list[int] = []
    start = (0, C)
    here = start
    for _ in range(2 * len(tuples) + 1):
        i, slot = here
        e = tuples[i][slot]
        edges.append(e)
        first, second = occ[e]
        j, enter = second if first == here else first
        if enter == C:
            return edges, entries, f"edge {e} leaves crossings {i + 1} and {j + 1} on both ends (enters at an outgoing under-slot)"
        entries[j].append(enter)
        here = (j, _EXIT[enter])
        if here == start:
            return edges, entries, None
    return edges, entries, "traversal did not close up"


def _signs(tuples):
    """Crossing signs from a traversal, or None if the diagram is not a knot."""
    if not tuples:
        return []
    counts = Counter(e for t in tuples for e in t)
    if any(v != 2 for v in counts.values()):
        return None
    edges, entries, problem = _traverse(tuples)
    if problem or len(edges) != 2 * len(tuples):
        return None
    signs = []
    for ent in entries:
        if sorted(ent) == [A, D]:
            signs.append(1)
        elif sorted(ent) == [A, B]:
            signs.append(-1)
        else:
            return None
    return signs


def crossing_sign(d: KnotDiagram, i: int) -> int:
    """Recompute the sign of crossing i from the labels alone."""
    signs = _signs(d.tuples())
    if signs is None:
        raise InvalidDiagram(validate(d))
    return signs[i]


def edge_order(d: KnotDiagram) -> list[int]:
    """Edge labels in orientation order, starting from crossing 0's outgoing under-edge."""
    edges, _, problem = _traverse(d.tuples())
    if problem:
        raise InvalidDiagram(validate(d))
    return edges


# ---------------------------------------------------------------- validation


def validate(d: KnotDiagram) -> ValidationReport:
    """Check label multiplicity, strand closure and single-componentness."""
    issues = []
    tuples = d.tuples()
    n = len(tuples)
    if d.num_loops < 0:
        issues.append(("loops", f"loop count {d.num_loops} is negative"))
    if n == 0:
        if d.num_loops == 0:
            issues.append(("empty", "empty diagram must carry >= 1 loop"))
        elif d.num_loops > 1:
            issues.append(("components", f"{d.num_loops} disjoint loops form a link, not a knot"))
        return ValidationReport.from_issues(issues)
    if d.num_loops:
        issues.append(("loops", "free loops are only allowed in the 0-crossing diagram"))

    counts = Counter(e for t in tuples for e in t)
    out_of_range = sorted(e for e in counts if not 1 <= e <= 2 * n)
    if out_of_range:
        issues.append(("range", f"labels {out_of_range} outside 1..{2 * n}"))
    bad = sorted(e for e, k in counts.items() if k != 2)
    if bad:
        once = [e for e in bad if counts[e] == 1]
        more = [e for e in bad if counts[e] > 2]
        if once:
            issues.append(("multiplicity", f"labels {_span(once)} each appear once, not twice"))
        if more:
            issues.append(("multiplicity", f"labels {more} appear more than twice"))
        return ValidationReport.from_issues(issues)

    edges, entries, problem = _traverse(tuples)
    if problem:
        issues.append(("orientation", problem))
    elif len(edges) != 2 * n:
        issues.append(("components", f"curve through crossing 1 covers {len(edges)} of {2 * n} edges; diagram has more than one component"))
    else:
        for i, ent in enumerate(entries):
            if sorted(ent) not in ([A, B], [A, D]):
                issues.append(("orientation", f"crossing {i + 1} is not entered once under and once over"))
        if not issues:
            for i, (x, s) in enumerate(zip(d.crossings, _signs(tuples))):
                if x.sign and x.sign != s:
                    issues.append(("sign", f"crossing {i + 1} caches sign {x.sign}, labels give {s}"))
    return ValidationReport.from_issues(issues)


def _span(labels):
    if labels == list(range(labels[0], labels[-1] + 1)) and len(labels) > 2:
        return f"{labels[0]}..{labels[-1]}"
    return str(labels)


def require_valid(d: KnotDiagram) -> None:
    report = validate(d)
    if not report.ok:
        raise InvalidDiagram(report)


# ---------------------------------------------------------------- PD text

_TOKEN = re.compile(r"\s*(?:(?P<int>-?\d+)|(?P<word>[A-Za-z]+)|(?P<sym>[\[\](),=]))")


class _Lexer:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def skip_ws(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def at_end(self) -> bool:
        self.skip_ws()
        return self.pos >= len(self.text)

    def peek(self):
        m = _TOKEN.match(self.text, self.pos)
        if not m:
            return None, None, self.pos
        kind = m.lastgroup
        return kind, m.group(kind), m.start(kind)

    def take(self, expected: str, kind: str | None = None, value: str | None = None) -> str:
        k, v, start = self.peek()
        if k is None or (kind and k != kind) or (value is not None and v != value):
            self.skip_ws()
            raise DiagramSyntaxError(self.pos, expected, self.text)
        self.pos = _TOKEN.match(self.text, self.pos).end()
        return v


def parse_pd(text: str, check_labels: bool = True) -> KnotDiagram:
    """Parse ``PD[X(a,b,c,d), ...]`` with an optional trailing ``loops=k``.

    The crossing order of the source is kept.  No validation happens here
    beyond label range (disable with ``check_labels=False``).
    """
    lx = _Lexer(text)
    lx.take("'PD'", "word", "PD")
    lx.take("'['", "sym", "[")
    tuples = []
    k, v, _ = lx.peek()
    if not (k == "sym" and v == "]"):
        while True:
            lx.take("'X'", "word", "X")
            lx.take("'('", "sym", "(")
            t = []
            for i in range(4):
                t.append(int(lx.take("integer", "int")))
                if i < 3:
                    lx.take("','", "sym", ",")
            lx.take("')'", "sym", ")")
            tuples.append(tuple(t))
            k, v, _ = lx.peek()
            if k == "sym" and v == ",":
                lx.take("','")
                continue
            break
    lx.take("',' or ']'", "sym", "]")
    loops = 0
    if not lx.at_end():
        lx.take("'loops'", "word", "loops")
        lx.take("'='", "sym", "=")
        loops = int(lx.take("integer", "int"))
        if not lx.at_end():
            raise DiagramSyntaxError(lx.pos, "end of input", text)
    if check_labels:
        n = len(tuples)
        for t in tuples:
            for e in t:
                if not 1 <= e <= 2 * n:
                    raise LabelRangeError(f"label {e} outside 1..{2 * n}")
    return KnotDiagram.from_tuples(tuples, loops)


def render_pd(d: KnotDiagram) -> str:
    body = ",".join(f"X({x.a},{x.b},{x.c},{x.d})" for x in d.crossings)
    out = f"PD[{body}]"
    if d.num_loops:
        out += f" loops={d.num_loops}"
    return out


# ---------------------------------------------------------------- braids

_BRAID_GEN = re.compile(r"s(\d+)(\^-1)?$")


def parse_braid_word(text: str) -> tuple[int | None, list[int]]:
    """Split braid text into (strand count or None, signed generator list)."""
    tokens = text.replace(";", " ").replace(":", " ").split()
    strands = None
    word = []
    offset = 0
    for tok in tokens:
        pos = text.find(tok, offset)
        offset = pos + len(tok)
        if tok.startswith("strands="):
            if strands is not None or word:
                raise DiagramSyntaxError(pos, "braid generator", text)
            try:
                strands = int(tok[len("strands=") :])
            except ValueError:
                raise DiagramSyntaxError(pos + 8, "integer", text) from None
            continue
        m = _BRAID_GEN.match(tok)
        if not m or int(m.group(1)) < 1:
            raise DiagramSyntaxError(pos, "braid generator like s1 or s2^-1", text)
        g = int(m.group(1))
        word.append(-g if m.group(2) else g)
    return strands, word


def braid_closure(word: list[int], strands: int | None = None) -> KnotDiagram:
    """PD code of the closure of a braid word (signed generator indices).

    Strands run upward; ``s_i`` crosses positions i and i+1 with the
    strand from position i passing over (a positive crossing).
    """
    top = max((abs(g) for g in word), default=0) + 1
    k = top if strands is None else strands
    if k < top:
        raise DiagramError(f"generator s{top - 1} needs at least {top} strands, got {k}")
    if k < 1:
        raise DiagramError("a braid needs at least one strand")
    # Cycle count of the underlying permutation = number of components.
    perm = list(range(k))
    for g in word:
        i = abs(g) - 1
        perm[i], perm[i + 1] = perm[i + 1], perm[i]
    seen, cycles = set(), 0
    for s in range(k):
        if s not in seen:
            cycles += 1
            j = s
            while j not in seen:
                seen.add(j)
                j = perm[j]
    if cycles != 1:
        raise MultiComponentError(f"closure has {cycles} components")
    if not word:
        return KnotDiagram((), 1)

    next_id = k
    initial = list(range(k))
    current = initial[:]
    raw = []
    for g in word:
        i = abs(g) - 1
        left, right = current[i], current[i + 1]
        out_l, out_r = next_id, next_id + 1
        next_id += 2
        if g > 0:
            raw.append((right, out_r, out_l, left))
        else:
            raw.append((left, right, out_r, out_l))
        current[i], current[i + 1] = out_l, out_r
    # Closing the braid glues each top edge to the bottom edge below it.
    alias = {top_e: bottom for top_e, bottom in zip(current, initial)}
    raw = [tuple(alias.get(e, e) for e in t) for t in raw]
    # Bottom edges that never got used by a crossing cannot occur (single
    # component with >= 1 crossing touches every strand).
    order, _, problem = _traverse(raw)
    assert problem is None and len(order) == 2 * len(raw)
    relabel = {e: i + 1 for i, e in enumerate(order)}
    return KnotDiagram.from_tuples([tuple(relabel[e] for e in t) for t in raw])


def parse_braid(text: str) -> KnotDiagram:
    """Parse ``strands=k s1 s2^-1 ...`` and return the closure's PD code."""
    strands, word = parse_braid_word(text)
    return braid_closure(word, strands)


def parse_diagram(text: str, check_labels: bool = True) -> KnotDiagram:
    """PD text if it starts with ``PD``, braid text otherwise."""
    if text.lstrip().startswith("PD"):
        return parse_pd(text, check_labels=check_labels)
    return parse_braid(text)


# ---------------------------------------------------------------- canonical form


def canonical_form(d: KnotDiagram) -> KnotDiagram:
    """Relabel edges 1..2n along the orientation from the lowest label; sort crossings."""
    require_valid(d)
    if not d.crossings:
        return KnotDiagram((), d.num_loops)
    order = edge_order(d)
    s = order.index(min(order))
    order = order[s:] + order[:s]
    relabel = {e: i + 1 for i, e in enumerate(order)}
    tuples = sorted(tuple(relabel[e] for e in t) for t in d.tuples())
    return KnotDiagram.from_tuples(tuples)


def canonical_bytes(d: KnotDiagram) -> bytes:
    return render_pd(canonical_form(d)).encode("ascii")
