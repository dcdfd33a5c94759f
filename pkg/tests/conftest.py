import functools
import itertools
import random

import pytest
from hypothesis import HealthCheck, settings

settings.register_profile("repo", deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("repo")


def _poset_certificate(below):
    """Isomorphism-invariant key: colour refinement, then the least relation
    list over orderings that respect the colour classes."""
    size = len(below)
    above = [set() for _ in range(size)]
    for i, b in enumerate(below):
        for j in b:
            above[j].add(i)
    col = [(len(below[i]), len(above[i])) for i in range(size)]
    while True:
        sig = [(col[i], tuple(sorted(col[j] for j in below[i])), tuple(sorted(col[j] for j in above[i])))
               for i in range(size)]
        keys = sorted(set(sig))
        new = [keys.index(x) for x in sig]
        done = len(set(new)) == len(set(col))
        col = new
        if done:
            break
    groups: dict = {}
    for i, c in enumerate(col):
        groups.setdefault(c, []).append(i)
    best = None
    for perms in itertools.product(*(itertools.permutations(groups[c]) for c in sorted(groups))):
        pos = {x: k for k, x in enumerate(y for p in perms for y in p)}
        rel = tuple(sorted((pos[j], pos[i]) for i in range(size) for j in below[i]))
        if best is None or rel < best:
            best = rel
    return tuple(sorted(col)), best


@functools.lru_cache(maxsize=None)
def unlabeled_posets(size):
    """One poset per isomorphism class on ``size`` elements, as lists of
    strict down-sets with every element numbered after those below it.

    Every poset arises from a smaller one by adding a maximal element above
    some down-closed set.
    """
    if size == 0:
        return ((),)
    found = {}
    for below in unlabeled_posets(size - 1):
        k = size - 1
        for mask in range(1 << k):
            chosen = frozenset(i for i in range(k) if mask >> i & 1)
            if all(below[i] <= chosen for i in chosen):
                cand = below + (chosen,)
                found.setdefault(_poset_certificate(cand), cand)
    return tuple(found.values())


def random_poset(rng: random.Random, size, density=0.3):
    below = []
    for k in range(size):
        chosen = set()
        for i in range(k):
            if rng.random() < density:
                chosen |= {i} | below[i]
        below.append(chosen)
    return below


@pytest.fixture
def rng():
    return random.Random(20240611)


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for number in sorted(RESULTS):
            terminalreporter.write_line(RESULTS[number])
