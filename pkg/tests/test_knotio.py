import random

import pytest
from hypothesis import given, settings, strategies as st

from helpers import FIGURE8, TREFOIL, UNKNOTS, knot_table
from knotcert.knotio import (
    DiagramSyntaxError,
    InvalidDiagram,
    KnotDiagram,
    LabelRangeError,
    MultiComponentError,
    canonical_bytes,
    canonical_form,
    crossing_sign,
    parse_braid,
    parse_diagram,
    parse_pd,
    render_pd,
    validate,
)

TABLE = knot_table()


def test_trefoil_parses_and_validates():
    d = parse_pd("PD[X(1,4,2,5),X(3,6,4,1),X(5,2,6,3)]")
    assert d.n == 3
    assert validate(d).ok
    assert [x.sign for x in d.crossings] == [-1, -1, -1]


def test_mirror_trefoil_signs():
    d = parse_pd(TREFOIL)
    assert [crossing_sign(d, i) for i in range(3)] == [1, 1, 1]


def test_zero_crossing_unknot():
    d = parse_pd("PD[] loops=1")
    assert d.n == 0 and d.num_loops == 1
    assert validate(d).ok


def test_kink_is_one_curve():
    d = parse_pd("PD[X(1,1,2,2)]")
    assert validate(d).ok


def test_whitespace_insensitive():
    a = parse_pd(" PD [ X( 1 ,5,2, 4) ,X(3,1,4,6),\n X(5,3,6,2) ] ")
    assert a == parse_pd(TREFOIL)
    assert canonical_bytes(a) == canonical_bytes(parse_pd(TREFOIL))


def test_syntax_error_reports_position():
    with pytest.raises(DiagramSyntaxError) as exc:
        parse_pd("PD[X(1,2,3]")
    assert exc.value.pos == 10
    assert "','" in exc.value.expected
    with pytest.raises(DiagramSyntaxError):
        parse_pd("PD[X(1,1,2,2)] loops=")
    with pytest.raises(DiagramSyntaxError):
        parse_braid("s1 t2")


def test_label_range_error():
    with pytest.raises(LabelRangeError):
        parse_pd("PD[X(1,2,3,4)]")


def test_validate_examples():
    r = validate(parse_pd("PD[X(1,2,3,4)]", check_labels=False))
    assert not r.ok
    assert ("multiplicity", "labels 1..4 each appear once, not twice") in r.issues
    r = validate(parse_pd("PD[] loops=0"))
    assert not r.ok and r.issues[0][0] == "empty"
    assert "empty diagram must carry >= 1 loop" in r.issues[0][1]


def test_two_component_link_rejected():
    # Hopf link
    r = validate(parse_pd("PD[X(1,3,2,4),X(3,1,4,2)]"))
    assert not r.ok
    assert any(code == "components" for code, _ in r.issues)
    with pytest.raises(InvalidDiagram):
        canonical_bytes(parse_pd("PD[X(1,3,2,4),X(3,1,4,2)]"))


def test_cached_sign_mismatch_detected():
    d = parse_pd(TREFOIL)
    flipped = KnotDiagram(tuple(type(x)(x.a, x.b, x.c, x.d, sign=-x.sign) for x in d.crossings))
    assert any(code == "sign" for code, _ in validate(flipped).issues)


def test_braid_examples():
    t = parse_braid("strands=2 s1 s1 s1")
    assert t.n == 3 and validate(t).ok
    assert [x.sign for x in t.crossings] == [1, 1, 1]
    k = parse_braid("strands=2 s1")
    assert k.n == 1 and validate(k).ok
    u = parse_braid("strands=3 s1 s2")
    assert u.n == 2 and validate(u).ok
    with pytest.raises(MultiComponentError):
        parse_braid("strands=3 s1")
    with pytest.raises(MultiComponentError):
        parse_braid("strands=2 s1 s1")


def test_braid_negative_crossings():
    d = parse_braid("strands=3 s1 s2^-1 s1 s2^-1")
    assert [x.sign for x in d.crossings] == [1, -1, 1, -1]


@pytest.mark.parametrize("name,pd,braid,alex", TABLE, ids=[r[0] for r in TABLE])
def test_table_entries_validate(name, pd, braid, alex):
    for d in (parse_pd(pd), parse_braid(braid)):
        assert validate(d).ok
        assert parse_pd(render_pd(d)) == d


def test_multiplicity_mutations_rejected():
    rng = random.Random(0)
    for name, pd, _, _ in TABLE:
        d = parse_pd(pd)
        tuples = [list(t) for t in d.tuples()]
        for _ in range(20):
            i, j = rng.randrange(len(tuples)), rng.randrange(4)
            old = tuples[i][j]
            new = rng.choice([v for v in range(1, 2 * len(tuples) + 1) if v != old])
            tuples[i][j] = new
            assert not validate(KnotDiagram.from_tuples(tuples)).ok, name
            tuples[i][j] = old


def test_canonical_bytes_injective_on_fixtures():
    seen = {}
    for name, pd, _, _ in TABLE:
        b = canonical_bytes(parse_pd(pd))
        assert b not in seen, (name, seen.get(b))
        seen[b] = name
    assert canonical_bytes(parse_pd(TREFOIL)) != canonical_bytes(parse_pd(FIGURE8))


def relabel(d, rng):
    n = 2 * d.n
    perm = list(range(1, n + 1))
    rng.shuffle(perm)
    tuples = [tuple(perm[e - 1] for e in t) for t in d.tuples()]
    rng.shuffle(tuples)
    return KnotDiagram.from_tuples(tuples)


def test_canonical_form_properties():
    rng = random.Random(3)
    for _, pd, _, _ in TABLE[:12]:
        d = parse_pd(pd)
        c = canonical_form(d)
        assert validate(c).ok
        assert canonical_form(c) == c
        assert [x.sign for x in c.crossings].count(1) == [x.sign for x in d.crossings].count(1)
        # crossing order in the source does not matter
        shuffled = d.tuples()
        rng.shuffle(shuffled)
        assert canonical_bytes(KnotDiagram.from_tuples(shuffled)) == canonical_bytes(d)
        r = relabel(d, rng)
        assert validate(r).ok
        assert sorted(x.sign for x in r.crossings) == sorted(x.sign for x in d.crossings)


def test_unknot_fixtures_valid():
    for text in UNKNOTS.values():
        assert validate(parse_diagram(text)).ok


@settings(max_examples=100, deadline=None)
@given(st.lists(st.sampled_from([1, -1, 2, -2, 3, -3]), min_size=1, max_size=14))
def test_random_braids_round_trip(word):
    from knotcert.knotio import braid_closure

    try:
        d = braid_closure(word, 4)
    except MultiComponentError:
        return
    assert validate(d).ok
    assert d.n == len(word)
    assert [x.sign for x in d.crossings] == [1 if g > 0 else -1 for g in word]
    assert parse_pd(render_pd(d)) == d
    c = canonical_form(d)
    assert canonical_form(parse_pd(render_pd(c))) == c
