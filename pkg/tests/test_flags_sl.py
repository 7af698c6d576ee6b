import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from clustercocycle.flags_sl import (
    ConfigEvaluator, DecoratedFlag, bruhat_decompose, bruhat_invariants, chain_conditions, config_from_json,
    config_to_json, delta, det, divisor_sample, flag_chain, from_columns, group_2cocycle, identity, inverse,
    is_generic, lift_perm, matmul, random_config, random_unimodular, star_sl,
)
from clustercocycle.cluster_seed import triangle_seed
from clustercocycle.root_system import cartan_data, longest_word


def _simple_steps(n, word):
    # steps whose coroot is simple: the letter swaps two adjacent positions of the prefix permutation
    out = set()
    for k in range(1, len(word) + 1):
        perm = list(range(n))
        for i in word[:k]:
            perm[i - 1], perm[i] = perm[i], perm[i - 1]
        i = word[k - 1]
        if abs(perm[i - 1] - perm[i]) == 1:
            out.add(k)
    return out


def test_delta_examples():
    F, G = DecoratedFlag.of((1, 0)), DecoratedFlag.of((0, 1))
    assert delta(F, G, 1) == 1 and delta(G, F, 1) == -1
    F3 = DecoratedFlag.of((1, 0, 0), (0, 1, 0))
    G3 = DecoratedFlag.of((0, 0, 1), (0, 1, 1))
    assert delta(F3, G3, 1) == det(from_columns([(1, 0, 0), (0, 0, 1), (0, 1, 1)])) == -1
    assert delta(F3, G3, 2) == 1
    with pytest.raises(ValueError):
        delta(F3, G3, 3)


def test_genericity():
    F = DecoratedFlag.of((1, 0, 0), (0, 1, 0))
    assert not is_generic(F, F)
    assert is_generic(F, DecoratedFlag.of((0, 0, 1), (0, 1, 0)))


def test_flag_shape_is_checked():
    with pytest.raises(ValueError):
        DecoratedFlag.of((1, 0, 0))


def test_flag_matrix_is_unimodular():
    rng = random.Random(2)
    for F in random_config(4, 5, rng):
        m = F.matrix()
        assert det(m) == 1
        assert [tuple(r[j] for r in m) for j in range(3)] == list(F.vectors)


@pytest.mark.parametrize("n", [2, 3, 4])
def test_delta_is_group_invariant(n):
    rng = random.Random(n)
    for _ in range(10):
        F, G = random_config(n, 2, rng)
        g = random_unimodular(n, rng)
        assert det(g) == 1
        for i in range(1, n):
            assert delta(F.act(g), G.act(g), i) == delta(F, G, i)


@settings(max_examples=40, deadline=None)
@given(st.integers(2, 4), st.integers(0, 10 ** 6))
def test_bruhat_reconstructs_double_coset(n, s):
    rng = random.Random(s)
    g = random_unimodular(n, rng)
    bd = bruhat_decompose(g)
    # g v^{-1} = u h p with u upper unipotent
    m = matmul(g, inverse([list(r) for r in bd.v]))
    p = lift_perm(bd.perm)
    hd = [[bd.h[i] if i == j else Fraction(0) for j in range(n)] for i in range(n)]
    u = matmul(m, inverse(matmul(hd, p)))
    assert all(u[i][j] == 0 for i in range(n) for j in range(i)), "left factor is not upper unipotent"
    assert all(u[i][i] == 1 for i in range(n))
    assert all(bd.v[i][j] == (1 if i == j else 0) for i in range(n) for j in range(i + 1))


def test_generic_pair_sits_in_longest_cell():
    rng = random.Random(0)
    for n in (2, 3, 4):
        F, G = random_config(n, 2, rng)
        bd = bruhat_invariants(F, G)
        assert bd.perm == tuple(range(n - 1, -1, -1))
        assert len(bd.word) == n * (n - 1) // 2


def test_bruhat_invariants_are_group_invariant():
    rng = random.Random(11)
    for _ in range(10):
        F, G = random_config(3, 2, rng)
        g = random_unimodular(3, rng)
        a, b = bruhat_invariants(F, G), bruhat_invariants(F.act(g), G.act(g))
        assert a.perm == b.perm and a.h == b.h


@pytest.mark.parametrize("n,word", [(2, (1,)), (3, (1, 2, 1)), (3, (2, 1, 2)), (4, (1, 2, 1, 3, 2, 1)),
                                    (4, (2, 1, 3, 2, 1, 3))])
def test_flag_chain_conditions(n, word):
    rng = random.Random(len(word) + n)
    for _ in range(5):
        F, G = random_config(n, 2, rng)
        ch = flag_chain(F, G, word)
        assert ch[0] == F and ch[-1] == G and len(ch) == len(word) + 1
        assert chain_conditions(ch, word, _simple_steps(n, word)) == []


def test_chain_conditions_detect_wrong_word():
    rng = random.Random(1)
    F, G = random_config(3, 2, rng)
    ch = flag_chain(F, G, (1, 2, 1))
    assert chain_conditions(ch, (2, 1, 2), {1, 3})


def test_flag_chain_rejects_bad_input():
    F = DecoratedFlag.of((1, 0, 0), (0, 1, 0))
    with pytest.raises(ValueError):
        flag_chain(F, F, (1, 2, 1))
    G = DecoratedFlag.of((0, 0, 1), (0, 1, 0))
    with pytest.raises(ValueError):
        flag_chain(F, G, (1, 2))


def test_star_sl():
    assert star_sl(3, (1, 2, 1)) == (2, 1, 2)
    assert star_sl(2, (1,)) == (1,)


def test_a2_center_is_first_vector_determinant():
    cd = cartan_data("A", 2)
    s = triangle_seed(cd, longest_word(cd))
    centre = s.labels[s.quiver.unfrozen()[0]]
    rng = random.Random(4)
    for _ in range(20):
        cfg = random_config(3, 3, rng)
        val = ConfigEvaluator(cfg)(centre)
        d = det(from_columns([F.vectors[0] for F in cfg]))
        assert val in (d, -d)


def test_chain_minor_is_group_invariant():
    cd = cartan_data("A", 3)
    s = triangle_seed(cd, longest_word(cd))
    rng = random.Random(9)
    cfg = random_config(4, 3, rng)
    g = random_unimodular(4, rng)
    moved = tuple(F.act(g) for F in cfg)
    a, b = ConfigEvaluator(cfg), ConfigEvaluator(moved)
    for lab in s.labels:
        assert a(lab) == b(lab)


def test_divisor_sample_hits_only_target():
    cd = cartan_data("A", 2)
    s = triangle_seed(cd, longest_word(cd))
    k = s.quiver.unfrozen()[0]
    rng = random.Random(3)
    pts = divisor_sample(s.labels, k, 3, 3, 4, rng)
    assert len(pts) == 4
    for vals in pts:
        assert vals[s.labels[k]] == 0
        assert all(vals[lab] != 0 for lab in s.labels if lab != s.labels[k])


def test_config_json_roundtrip():
    cfg = random_config(3, 4, random.Random(0))
    assert config_from_json(config_to_json(cfg)) == cfg


def test_group_2cocycle_is_invariant_under_left_translation():
    rng = random.Random(6)
    base = DecoratedFlag.of((1, 0, 0), (0, 1, 0))
    done = 0
    while done < 5:
        gs = [random_unimodular(3, rng) for _ in range(3)]
        h = random_unimodular(3, rng)
        try:
            c = group_2cocycle(*gs, base)
        except ValueError:
            continue
        assert group_2cocycle(*(matmul(h, g) for g in gs), base) == c
        done += 1


def test_identity_and_inverse():
    m = [[Fraction(2), Fraction(1)], [Fraction(1), Fraction(1)]]
    assert matmul(m, inverse(m)) == identity(2)
