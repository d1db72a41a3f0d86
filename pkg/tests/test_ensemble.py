import json
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qstat import (
    DrawRecord,
    EmptyConditioning,
    Ensemble,
    ZeroProbabilityDraw,
    condition_on_draw,
    condition_on_presence,
    condition_on_record,
    expectation_fraction,
    fraction_distribution,
    prepare_equal_weight,
)
from qstat.ensemble import condition_sequentially, draw_probability, permute_levels, record_probability

from oracles import marginal, posterior_after_draws, prior

F = Fraction
B, G = 0, 1
STATS = ["classical", "be", "fd"]


def weights(e):
    return dict(e.weights)


def test_prepare_two_coins():
    assert weights(prepare_equal_weight(2, 2, "be")) == {(2, 0): F(1, 3), (1, 1): F(1, 3), (0, 2): F(1, 3)}
    assert weights(prepare_equal_weight(2, 2, "classical")) == {(2, 0): F(1, 4), (1, 1): F(1, 2), (0, 2): F(1, 4)}


@pytest.mark.parametrize("n", [1, 5, 17])
def test_prepare_boson_pair_levels(n):
    e = prepare_equal_weight(2, n, "be")
    assert len(e) == n + 1
    assert set(e.weights.values()) == {F(1, n + 1)}


@pytest.mark.parametrize("stats", STATS)
@pytest.mark.parametrize("k,n", [(2, 3), (3, 3), (4, 2), (3, 1)])
def test_prepare_matches_brute_force(stats, k, n):
    if stats == "fd" and n > k:
        pytest.skip("overfilled")
    assert weights(prepare_equal_weight(k, n, stats)) == prior(k, n, stats)


def test_presence_crib():
    be = condition_on_presence(prepare_equal_weight(2, 2, "be"), B)
    assert weights(be) == {(2, 0): F(1, 2), (1, 1): F(1, 2)}
    cl = condition_on_presence(prepare_equal_weight(2, 2, "classical"), B)
    assert weights(cl) == {(2, 0): F(1, 3), (1, 1): F(2, 3)}
    with pytest.raises(EmptyConditioning):
        condition_on_presence(prepare_equal_weight(2, 2, "fd"), B, minimum=2)


def test_draw_crib():
    post, p = condition_on_draw(prepare_equal_weight(2, 2, "be"), B)
    assert weights(post) == {(1, 0): F(2, 3), (0, 1): F(1, 3)}
    assert p == F(1, 2)
    post, _ = condition_on_draw(prepare_equal_weight(2, 2, "classical"), B)
    assert weights(post) == {(1, 0): F(1, 2), (0, 1): F(1, 2)}
    post, _ = condition_on_draw(prepare_equal_weight(2, 2, "fd"), B)
    assert weights(post) == {(0, 1): F(1)}
    assert post.probability((1, 0)) == 0


def test_impossible_draw():
    e = Ensemble(2, 2, "be", {(0, 2): F(1)})
    with pytest.raises(ZeroProbabilityDraw):
        condition_on_draw(e, B)
    with pytest.raises(ZeroProbabilityDraw):
        condition_on_record(e, (1, 1))


def test_record_example_three_bosons():
    post = condition_on_record(prepare_equal_weight(2, 3, "be"), DrawRecord((1, 0)))
    assert weights(post) == {(2, 0): F(1, 2), (1, 1): F(1, 3), (0, 2): F(1, 6)}
    oracle, _ = posterior_after_draws(prior(2, 3, "be"), [B])
    assert weights(post) == oracle


@pytest.mark.parametrize("stats", STATS)
def test_empty_record_is_identity(stats):
    e = prepare_equal_weight(3, 3, stats)
    assert condition_on_record(e, DrawRecord.empty(3)) == e


def test_all_fermions_drawn():
    post = condition_on_record(prepare_equal_weight(3, 2, "fd"), (1, 1, 0))
    assert post.n == 0
    assert weights(post) == {(0, 0, 0): F(1)}


def test_record_precondition():
    e = prepare_equal_weight(2, 2, "be")
    with pytest.raises(ValueError):
        condition_on_record(e, (2, 1))
    with pytest.raises(ValueError):
        condition_on_record(e, (1, 0, 0))


def test_fraction_distributions():
    e = prepare_equal_weight(2, 4, "be")
    assert fraction_distribution(e, 0) == [(F(i, 4), F(1, 5)) for i in range(5)]
    assert fraction_distribution(prepare_equal_weight(2, 2, "classical"), 0) == [
        (F(0), F(1, 4)),
        (F(1, 2), F(1, 2)),
        (F(1), F(1, 4)),
    ]
    assert fraction_distribution(prepare_equal_weight(2, 2, "fd"), 0) == [(F(1, 2), F(1))]


def test_daycare_mean_two_thirds():
    for n in (2, 3, 10, 57):
        post, _ = condition_on_draw(prepare_equal_weight(2, n, "be"), B)
        assert expectation_fraction(post, B) == F(2, 3)


@pytest.mark.parametrize("stats", STATS)
def test_prior_mean_is_half(stats):
    assert expectation_fraction(prepare_equal_weight(2, 2, stats), 0) == F(1, 2)


def test_spin_one_half_remaining():
    post = condition_on_record(prepare_equal_weight(3, 60, "be"), (1, 0, 0))
    assert expectation_fraction(post, 0) == F(1, 2)


def test_constructor_rejects_bad_weights():
    with pytest.raises(ValueError):
        Ensemble(2, 2, "be", {(2, 0): F(1, 2)})
    with pytest.raises(ValueError):
        Ensemble(2, 2, "be", {(2, 0): F(1), (1, 1): F(0)})
    with pytest.raises(ValueError):
        Ensemble(2, 2, "fd", {(2, 0): F(1)})
    with pytest.raises(ValueError):
        Ensemble(2, 2, "be", {(1, 0): F(1)})


def test_weights_are_read_only():
    e = prepare_equal_weight(2, 2, "be")
    with pytest.raises(TypeError):
        e.weights[(2, 0)] = F(1)


def test_json_roundtrip():
    e = condition_on_record(prepare_equal_weight(3, 5, "classical"), (1, 1, 0))
    doc = json.loads(json.dumps(e.to_dict()))
    assert doc["stats"] == "classical"
    assert all("/" in w["p"] or w["p"].isdigit() for w in doc["weights"])
    assert Ensemble.from_dict(doc) == e


# properties


records = st.integers(2, 3).flatmap(
    lambda k: st.tuples(
        st.just(k),
        st.integers(1, 12),
        st.sampled_from(STATS),
        st.lists(st.integers(0, k - 1), min_size=0, max_size=4),
    )
)


@settings(max_examples=60, deadline=None)
@given(records)
def test_every_result_normalized(case):
    k, n, stats, draws = case
    if stats == "fd" and n > k:
        return
    draws = draws[:n]
    e = prepare_equal_weight(k, n, stats)
    assert sum(e.weights.values()) == 1
    counts = tuple(draws.count(j) for j in range(k))
    try:
        post = condition_on_record(e, counts)
    except ZeroProbabilityDraw:
        return
    assert sum(post.weights.values()) == 1
    assert post.n == n - len(draws)
    if stats == "fd":
        assert all(max(m) <= 1 for m in post.weights)


def test_order_independence_random_records():
    rng = random.Random(7)
    checked = 0
    while checked < 100:
        k = rng.randint(2, 3)
        n = rng.randint(1, 12)
        stats = rng.choice(STATS)
        if stats == "fd" and n > k:
            continue
        draws = [rng.randrange(k) for _ in range(rng.randint(1, min(n, 4)))]
        e = prepare_equal_weight(k, n, stats)
        counts = tuple(draws.count(j) for j in range(k))
        try:
            joint = condition_on_record(e, counts)
        except ZeroProbabilityDraw:
            with pytest.raises(ZeroProbabilityDraw):
                condition_sequentially(e, draws)
            continue
        rng.shuffle(draws)
        assert condition_sequentially(e, draws) == joint
        checked += 1


@pytest.mark.parametrize("stats", STATS)
@pytest.mark.parametrize("k,n,draws", [(2, 3, [0]), (2, 4, [0, 0]), (3, 3, [0, 1]), (3, 4, [2, 0, 2])])
def test_record_matches_labeled_bayes(stats, k, n, draws):
    if stats == "fd" and n > k:
        pytest.skip("overfilled")
    oracle, evidence = posterior_after_draws(prior(k, n, stats), draws)
    counts = tuple(draws.count(j) for j in range(k))
    e = prepare_equal_weight(k, n, stats)
    if oracle is None:
        with pytest.raises(ZeroProbabilityDraw):
            condition_on_record(e, counts)
        return
    assert weights(condition_on_record(e, counts)) == oracle
    assert record_probability(e, DrawRecord(counts)) == evidence


@pytest.mark.parametrize("k", [1, 2, 3, 4])
@pytest.mark.parametrize("n", range(1, 11))
def test_classical_draw_is_uninformative(k, n):
    e = prepare_equal_weight(k, n, "classical")
    for j in range(k):
        post, _ = condition_on_draw(e, j)
        assert post == prepare_equal_weight(k, n - 1, "classical")


@pytest.mark.parametrize("stats", STATS)
@pytest.mark.parametrize("k,n", [(2, 2), (3, 3), (4, 2), (3, 7)])
def test_marginal_uniformity(stats, k, n):
    if stats == "fd" and n > k:
        pytest.skip("overfilled")
    e = prepare_equal_weight(k, n, stats)
    assert all(draw_probability(e, j) == F(1, k) for j in range(k))


@settings(max_examples=40, deadline=None)
@given(st.permutations(range(3)), st.sampled_from(STATS), st.integers(0, 2), st.integers(1, 3))
def test_relabel_equivariance(perm, stats, level, n):
    e = prepare_equal_weight(3, n, stats)
    perm = list(perm)
    new_level = perm.index(level)
    moved = permute_levels(e, perm)
    assert moved == e  # equal-weight priors are symmetric
    a, pa = condition_on_draw(e, level)
    b, pb = condition_on_draw(moved, new_level)
    assert pa == pb
    assert permute_levels(a, perm) == b
    if a.n:
        assert fraction_distribution(a, level) == fraction_distribution(b, new_level)
    if any(m[level] >= 1 for m in e.weights):
        assert permute_levels(condition_on_presence(e, level), perm) == condition_on_presence(moved, new_level)


@pytest.mark.parametrize("n", [2, 3, 5, 50, 200])
def test_daycare_closed_form_through_pipeline(n):
    post, _ = condition_on_draw(prepare_equal_weight(2, n, "be"), B)
    got = {m[0]: p for m, p in post.weights.items()}
    assert got == {m: F(2 * (m + 1), n * (n + 1)) for m in range(n)}
    assert sum(got.values()) == 1


@pytest.mark.parametrize("k,n", [(2, 2), (2, 9), (3, 5), (4, 4)])
def test_bose_enhancement_under_conditioning(k, n):
    e = prepare_equal_weight(k, n, "be")
    for j in range(k):
        post, _ = condition_on_draw(e, j)
        if post.n:
            assert expectation_fraction(post, j) >= expectation_fraction(e, j)


def test_marginal_matches_oracle():
    e = prepare_equal_weight(3, 4, "classical")
    assert dict(fraction_distribution(e, 1)) == {F(c, 4): p for c, p in marginal(prior(3, 4, "classical"), 1).items()}
