import itertools
import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from factorcomplex.errors import CapExceeded, InvariantError
from factorcomplex.homology import betti, chain_complex_of
from factorcomplex.poset import (
    Poset,
    PosetMap,
    SimplicialComplex,
    chain_poset,
    check_quillen_fibers,
    face_closure,
    is_order_preserving,
    join,
    lower_fiber,
    order_complex,
)

from conftest import random_poset, unlabeled_posets


def poset_from_below(below):
    masks = [sum(1 << j for j in b) | (1 << i) for i, b in enumerate(below)]
    return Poset(list(range(len(below))), masks)


def chain(k):
    return poset_from_below([set(range(i)) for i in range(k)])


def antichain(m):
    return poset_from_below([set() for _ in range(m)])


def rb(k):
    return betti(chain_complex_of(k))


# face_closure

def test_face_closure_triangle():
    k = face_closure([[1, 2, 3]])
    assert len(k) == 7
    assert k.f_vector() == [3, 3, 1]


def test_face_closure_two_points():
    k = face_closure([[1], [2]])
    assert len(k) == 2 and k.dimension == 0


def test_face_closure_triangle_boundary():
    k = face_closure([[1, 2], [2, 3], [1, 3]])
    assert len(k) == 6 and k.dimension == 1


def test_face_closure_rejects_repeated_vertex():
    with pytest.raises(ValueError):
        face_closure([[1, 1, 2]])


def test_complex_validation_catches_missing_facet():
    with pytest.raises(InvariantError):
        SimplicialComplex([(0,), (1,), (0, 1, 2)])


@given(st.lists(st.sets(st.integers(0, 7), min_size=1, max_size=4), min_size=1, max_size=6))
def test_face_closure_of_facets_is_identity(faces):
    k = face_closure(faces)
    assert face_closure(k.facets()) == k
    for f in k.faces:
        for r in range(1, len(f)):
            for sub in itertools.combinations(f, r):
                assert sub in k.faces


# chain_poset / order_complex

def test_chain_poset_small_cases():
    assert len(chain_poset(chain(2))) == 3
    assert len(chain_poset(antichain(2))) == 2
    assert len(chain_poset(chain(3))) == 7


def test_chain_poset_cap():
    with pytest.raises(CapExceeded):
        chain_poset(chain(5), max_chain=4)


def test_size_caps():
    # a 4-chain has 15 chains and a 3-simplex 15 faces
    assert len(order_complex(chain(4), max_faces=15)) == 15
    with pytest.raises(CapExceeded):
        order_complex(chain(4), max_faces=14)
    with pytest.raises(CapExceeded):
        chain_poset(chain(4), max_faces=14)
    assert len(face_closure([[0, 1, 2, 3]], max_faces=15)) == 15
    with pytest.raises(CapExceeded):
        face_closure([[0, 1, 2, 3]], max_faces=14)


def test_order_complex_of_chain_is_simplex():
    k = order_complex(chain(4))
    assert k.facets() == [(0, 1, 2, 3)]
    assert len(k) == 15


def test_order_complex_of_antichain_is_points():
    k = order_complex(antichain(5))
    assert k.dimension == 0 and len(k.vertices) == 5


def test_order_complex_of_field_pd_is_subdivided_triangle():
    from factorcomplex.field import build_PD

    pd = build_PD(2, 2)
    k = order_complex(pd)
    # three lines and three pairs; each pair lies over its two lines
    brute_edges = sum(1 for a in range(len(pd)) for b in range(len(pd)) if a != b and pd.leq(a, b))
    assert k.f_vector() == [6, brute_edges]
    assert brute_edges == 6
    assert rb(k) == [0, 1]


def test_unlabeled_poset_counts():
    # isomorphism classes of posets on 0..8 elements
    assert [len(unlabeled_posets(k)) for k in range(9)] == [1, 1, 2, 5, 16, 63, 318, 2045, 16999]


@pytest.mark.parametrize("size", range(1, 9))
def test_subdivision_preserves_homology_exhaustive(size):
    for below in unlabeled_posets(size):
        p = poset_from_below(below)
        k, sd = order_complex(p), order_complex(chain_poset(p))
        assert k.euler_characteristic() == sd.euler_characteristic()
        b, bs = rb(k), rb(sd)
        assert b == bs[: len(b)] and not any(bs[len(b):])


def test_subdivision_preserves_homology_random(rng):
    done = 0
    while done < 100:
        p = poset_from_below(random_poset(rng, rng.randint(1, 14), rng.uniform(0.05, 0.4)))
        if p.height() > 5:
            continue  # subdivisions of tall posets get large fast
        done += 1
        k, sd = order_complex(p), order_complex(chain_poset(p))
        assert k.euler_characteristic() == sd.euler_characteristic()
        b, bs = rb(k), rb(sd)
        assert b == bs[: len(b)] and not any(bs[len(b):])


def test_poset_validation_rejects_cycle():
    with pytest.raises(InvariantError):
        Poset.from_hasse([0, 1], [(0, 1), (1, 0)])


def test_poset_validation_rejects_non_transitive():
    with pytest.raises(InvariantError):
        Poset([0, 1, 2], [0b001, 0b011, 0b110])


def test_from_hasse_closes_transitively():
    p = Poset.from_hasse(["a", "b", "c"], [(0, 1), (1, 2)])
    assert p.leq(0, 2) and not p.leq(2, 0)
    assert p.hasse() == [(0, 1), (1, 2)]


# join

def point():
    return face_closure([[0]])


def two_points():
    return face_closure([[0], [1]])


def circle():
    return face_closure([[0, 1], [1, 2], [0, 2]])


def test_join_point_point_is_edge():
    assert join(point(), point()).facets() == [(0, 1)]


def test_join_suspension_of_s0_is_circle():
    k = join(two_points(), two_points())
    assert k.f_vector() == [4, 4] and rb(k) == [0, 1]


def test_join_cone_is_acyclic():
    assert not any(rb(join(circle(), point())))


def pad(b, n):
    return b + [0] * (n - len(b))


@pytest.mark.parametrize("a,b", list(itertools.product(["S0", "S1", "pt", "2pt"], repeat=2)))
def test_join_kunneth(a, b):
    spaces = {"S0": two_points, "S1": circle, "pt": point, "2pt": two_points}
    k, l = spaces[a](), spaces[b]()
    bk, bl = rb(k), rb(l)
    bj = rb(join(k, l))
    for deg in range(len(bj)):
        expect = sum(bk[i] * bl[deg - 1 - i] for i in range(len(bk)) if 0 <= deg - 1 - i < len(bl))
        assert bj[deg] == expect


# maps and fibers

def test_identity_is_order_preserving():
    p = chain(3)
    assert is_order_preserving(PosetMap(p, p, (0, 1, 2)))


def test_constant_map_is_order_preserving():
    p = chain(3)
    assert is_order_preserving(PosetMap(p, p, (2, 2, 2)))


def test_swap_on_two_chain_is_not_order_preserving():
    p = chain(2)
    assert not is_order_preserving(PosetMap(p, p, (1, 0)))


def test_map_must_be_total():
    with pytest.raises(ValueError):
        PosetMap(chain(3), chain(3), (0, 1))


def test_lower_fiber_of_identity_is_down_set():
    p = chain_poset(chain(3))
    f = PosetMap(p, p, tuple(range(len(p))))
    for q in range(len(p)):
        fib = lower_fiber(f, q)
        assert sorted(fib.origin) == [x for x in range(len(p)) if p.leq(x, q)]


def test_lower_fiber_of_constant_top_map_is_everything():
    p = chain(4)
    f = PosetMap(antichain(3), p, (3, 3, 3))
    assert len(lower_fiber(f, 3)) == 3


def test_lower_fiber_unknown_target():
    p = chain(2)
    with pytest.raises(KeyError):
        lower_fiber(PosetMap(p, p, (0, 1)), 7)


@given(st.integers(0, 10_000))
def test_lower_fibers_are_down_closed(seed):
    r = random.Random(seed)
    src = poset_from_below(random_poset(r, r.randint(1, 9)))
    tgt = chain(4)
    # heights are order preserving into a long enough chain
    height = []
    for x in range(len(src)):
        height.append(min(3, max([height[y] + 1 for y in range(x) if src.leq(y, x)], default=0)))
    f = PosetMap(src, tgt, tuple(height))
    assert is_order_preserving(f)
    for q in range(4):
        ids = lower_fiber(f, q).origin
        assert src.is_down_closed(ids)


def test_quillen_identity_passes():
    p = chain_poset(antichain(2))
    rep = check_quillen_fibers(PosetMap(p, p, tuple(range(len(p)))))
    assert rep.passed


def test_quillen_collapse_antichain_fails():
    rep = check_quillen_fibers(PosetMap(antichain(2), chain(1), (0, 0)))
    assert not rep.passed
    (rec,) = rep.failures()
    assert rec.size == 2 and rec.betti == [1]


def test_quillen_empty_fiber_fails():
    rep = check_quillen_fibers(PosetMap(chain(1), chain(2), (1,)))
    assert [r.passed for r in rep.fibers] == [False, True]


def test_quillen_phi_on_subdivided_pd():
    from factorcomplex.field import phi_map

    f = phi_map(2, 2)
    rep = check_quillen_fibers(f)
    assert rep.passed and len(rep.fibers) == len(f.target)
    target = next(r for r in rep.fibers if r.label == "(<10>,{<01>,<10>})")
    assert target.size > 0 and not any(target.betti)
