import itertools
import random

import pytest

import oracles
from conftest import small_pool
from indexcode.hypercliques import (
    CapExceeded,
    all_clique_masks,
    enumerate_maximal_hypercliques,
    interference_users,
    is_hyperclique,
)
from indexcode.instance import GroupcastInstance, InstanceError, gen_family, gen_figure2, gen_random, gic_to_uic, uic_as_gic


def test_singleton_is_hyperclique():
    h = gen_random(5, 3, 0.5, 1)
    assert all(is_hyperclique(h, [u]) for u in h.users)
    assert is_hyperclique(h, [])


def test_same_request_no_side_info():
    h = GroupcastInstance(("u", "v"), ("p",), {"u": "p", "v": "p"}, {"u": frozenset(), "v": frozenset()})
    assert is_hyperclique(h, ["u", "v"])


def test_figure2_has_no_pairs():
    h = uic_as_gic(gen_figure2(1))
    assert not any(is_hyperclique(h, pair) for pair in itertools.combinations(h.users, 2))
    assert enumerate_maximal_hypercliques(h) == [frozenset({u}) for u in h.users]


def test_complete_has_one_maximal_clique():
    h = uic_as_gic(gen_family("complete", 4))
    assert enumerate_maximal_hypercliques(h) == [frozenset(h.users)]


def test_bidirected_c5_maximal_cliques_are_edges():
    h = uic_as_gic(gen_family("bidicycle", 5))
    got = set(enumerate_maximal_hypercliques(h))
    assert got == {frozenset({str(i), str(i % 5 + 1)}) for i in range(1, 6)}


def test_interference_examples():
    k = uic_as_gic(gen_family("complete", 5))
    assert all(interference_users(k, u) == {u} for u in k.users)
    e = uic_as_gic(gen_family("empty", 4))
    assert all(interference_users(e, u) == set(e.users) for u in e.users)
    f = uic_as_gic(gen_figure2(1))
    assert interference_users(f, "0") == {"0", "3", "4", "5"}
    with pytest.raises(InstanceError):
        interference_users(f, "nobody")


@pytest.mark.parametrize("label, h", small_pool())
def test_against_definitions(label, h):
    cliques = {h.users_of(m) for m in all_clique_masks(h)}
    assert cliques == set(oracles.all_cliques(h))
    maximal = set(enumerate_maximal_hypercliques(h))
    assert maximal == {c for c in cliques if not any(c < d for d in cliques)}
    for u in h.users:
        assert interference_users(h, u) == oracles.interference(h, u)
        assert u in interference_users(h, u)


def test_hereditary_on_sampled_subsets():
    rng = random.Random(0)
    for seed in range(30):
        h = gen_random(7, 4, 0.7, seed)
        for c in enumerate_maximal_hypercliques(h):
            members = sorted(c)
            for _ in range(5):
                sub = rng.sample(members, rng.randint(0, len(members)))
                assert is_hyperclique(h, sub)


@pytest.mark.parametrize("seed", range(10))
def test_conversion_preserves_hypercliques(seed):
    h = gen_random(8, 5, 0.6, seed)
    g = gic_to_uic(h)
    for k in range(1, h.n + 1):
        for c in itertools.combinations(h.users, k):
            bidirected = all(v in g.out_neighbors[u] and u in g.out_neighbors[v]
                             for u, v in itertools.combinations(c, 2))
            assert is_hyperclique(h, c) == bidirected


def test_uic_maximal_cliques_brute_force():
    for seed in range(10):
        h = uic_as_gic(gic_to_uic(gen_random(8, 8, 0.6, seed)))
        brute = set()
        for k in range(1, h.n + 1):
            for c in itertools.combinations(h.users, k):
                if oracles.is_clique(h, c):
                    brute.add(frozenset(c))
        maximal = {c for c in brute if not any(c < d for d in brute)}
        assert set(enumerate_maximal_hypercliques(h)) == maximal


def test_caps():
    h = uic_as_gic(gen_family("empty", 5))
    with pytest.raises(CapExceeded):
        enumerate_maximal_hypercliques(h, cap=4)
    with pytest.raises(CapExceeded):
        all_clique_masks(uic_as_gic(gen_family("complete", 6)), cap=10)


def test_enumeration_order_is_deterministic():
    h = gen_random(7, 4, 0.7, 3)
    assert enumerate_maximal_hypercliques(h) == enumerate_maximal_hypercliques(h)
