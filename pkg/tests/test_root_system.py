from collections import deque
from itertools import product

import pytest
from hypothesis import given, settings, strategies as st

from clustercocycle.root_system import (
    WeylWord, cartan_data, is_reduced, longest_word, positive_roots, reflect, root_coroot_chains,
    star_involution, weyl_apply,
)

TYPES = [("A", 1), ("A", 2), ("A", 3), ("B", 2), ("B", 3), ("C", 3), ("D", 4), ("G", 2), ("F", 4)]


def _matrix_of(cd, word):
    r = cd.rank
    cols = [weyl_apply(cd, word, tuple(int(i == j) for i in range(r)), "coroot") for j in range(r)]
    return tuple(cols)


def bfs_lex_longest(cd):
    """Lexicographically smallest reduced word for w0 by BFS over coroot matrices."""
    start = _matrix_of(cd, ())
    best = {start: ()}
    queue = deque([start])
    while queue:
        m = queue.popleft()
        word = best[m]
        for j in range(1, cd.rank + 1):
            nxt = _matrix_of(cd, word + (j,))
            cand = word + (j,)
            if nxt not in best:
                best[nxt] = cand
                queue.append(nxt)
            elif len(best[nxt]) == len(cand) and cand < best[nxt]:
                best[nxt] = cand
    return max(best.values(), key=lambda w: (len(w), [-x for x in w]))


def test_cartan_examples():
    assert cartan_data("A", 1).cartan == ((2,),)
    assert cartan_data("A", 1).symmetrizers == (1,)
    assert cartan_data("B", 3).symmetrizers == (2, 1, 1)
    g2 = cartan_data("G", 2)
    assert g2.cartan == ((2, -1), (-3, 2))
    assert g2.symmetrizers == (3, 1)


@pytest.mark.parametrize("series,rank", TYPES)
def test_symmetrizers_symmetrize(series, rank):
    cd = cartan_data(series, rank)
    d, c = cd.symmetrizers, cd.cartan
    assert all(d[i] * c[i][j] == d[j] * c[j][i] for i in range(rank) for j in range(rank))
    assert min(d) == 1


@pytest.mark.parametrize("series,rank,count", [("A", 3, 6), ("B", 3, 9), ("D", 4, 12), ("G", 2, 6),
                                               ("F", 4, 24), ("E", 6, 36), ("E", 8, 120)])
def test_positive_root_counts(series, rank, count):
    assert len(positive_roots(cartan_data(series, rank))) == count


def test_is_reduced_examples():
    a2 = cartan_data("A", 2)
    assert is_reduced(a2, (1, 2, 1))
    assert not is_reduced(a2, (1, 1))
    assert is_reduced(cartan_data("A", 1), (1,))
    with pytest.raises(ValueError):
        is_reduced(a2, (1, 3))


def test_reduced_words_of_length_three_in_a2():
    a2 = cartan_data("A", 2)
    reduced = [w for w in product((1, 2), repeat=3) if is_reduced(a2, w)]
    assert sorted(reduced) == [(1, 2, 1), (2, 1, 2)]


def test_longest_word_examples():
    assert longest_word(cartan_data("A", 1)).letters == (1,)
    assert longest_word(cartan_data("A", 2)).letters == (1, 2, 1)
    assert longest_word(cartan_data("B", 2)).letters == (1, 2, 1, 2)


@pytest.mark.parametrize("series,rank", [("A", 2), ("A", 3), ("B", 2), ("B", 3), ("C", 3), ("G", 2)])
def test_longest_word_matches_bfs_oracle(series, rank):
    cd = cartan_data(series, rank)
    assert longest_word(cd).letters == bfs_lex_longest(cd)


def test_e_series_requires_word():
    with pytest.raises(ValueError, match="explicit reduced word"):
        longest_word(cartan_data("E", 6))


def test_user_word_validation():
    a2 = cartan_data("A", 2)
    assert longest_word(a2, (2, 1, 2)).letters == (2, 1, 2)
    with pytest.raises(ValueError, match="not reduced"):
        longest_word(a2, (1, 1, 2))
    with pytest.raises(ValueError, match="reduced but has length"):
        longest_word(a2, (1, 2))


def test_root_coroot_chain_a2():
    a2 = cartan_data("A", 2)
    chain = root_coroot_chains(a2, WeylWord((1, 2, 1)))
    assert chain.betas == ((0, 1), (1, 1), (1, 0))
    assert root_coroot_chains(cartan_data("A", 1), WeylWord((1,))).betas == ((1,),)


@pytest.mark.parametrize("series,rank", TYPES)
def test_chain_betas_distinct_positive(series, rank):
    cd = cartan_data(series, rank)
    betas = root_coroot_chains(cd, longest_word(cd)).betas
    assert len(set(betas)) == len(betas) == cd.num_positive_roots
    assert all(all(x >= 0 for x in b) for b in betas)


def test_star_involution():
    assert star_involution(cartan_data("A", 1)) == {1: 1}
    assert star_involution(cartan_data("A", 2)) == {1: 2, 2: 1}
    assert star_involution(cartan_data("B", 3)) == {1: 1, 2: 2, 3: 3}
    assert star_involution(cartan_data("D", 5))[4] == 5


def test_weyl_apply_examples():
    a2 = cartan_data("A", 2)
    assert reflect(a2, 1, (1, 0), "coroot") == (-1, 0)
    assert weyl_apply(a2, (2,), (1, 0), "coroot") == (1, 1)


@settings(max_examples=40, deadline=None)
@given(st.sampled_from(TYPES), st.data())
def test_w0_is_an_involution(t, data):
    cd = cartan_data(*t)
    v = tuple(data.draw(st.lists(st.integers(-5, 5), min_size=cd.rank, max_size=cd.rank)))
    w = longest_word(cd).letters
    for lattice in ("root", "coroot", "weight"):
        assert weyl_apply(cd, w + w, v, lattice) == v


@settings(max_examples=40, deadline=None)
@given(st.sampled_from(TYPES), st.data())
def test_reflection_preserves_pairing(t, data):
    cd = cartan_data(*t)
    r = cd.rank
    a = tuple(data.draw(st.lists(st.integers(-4, 4), min_size=r, max_size=r)))
    b = tuple(data.draw(st.lists(st.integers(-4, 4), min_size=r, max_size=r)))
    j = data.draw(st.integers(1, r))
    assert cd.pairing(reflect(cd, j, a, "root"), reflect(cd, j, b, "coroot")) == cd.pairing(a, b)
