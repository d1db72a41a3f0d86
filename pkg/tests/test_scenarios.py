from fractions import Fraction

import pytest

from qstat.scenarios import (
    all_same_state_probability,
    all_same_state_probability_pipeline,
    crib_answers,
    crib_answers_closed_form,
    daycare_posterior,
    daycare_posterior_closed_form,
    dice_posterior,
    dice_posterior_closed_form,
)

from oracles import boson_states, marginal, posterior_after_draws, prior

F = Fraction


@pytest.mark.parametrize("stats,expected", [("classical", F(1, 4)), ("be", F(1, 3)), ("fd", F(0))])
def test_two_coins_all_heads(stats, expected):
    assert all_same_state_probability(2, 2, stats) == expected
    assert all_same_state_probability_pipeline(2, 2, stats) == expected


@pytest.mark.parametrize("stats", ["classical", "be", "fd"])
@pytest.mark.parametrize("k", [1, 2, 5])
def test_single_particle(stats, k):
    assert all_same_state_probability(k, 1, stats) == F(1, k)


def test_three_dice_three_levels():
    assert len(boson_states(3, 3)) == 10
    assert all_same_state_probability(3, 3, "be") == F(1, 10)


@pytest.mark.parametrize("stats", ["classical", "be", "fd"])
def test_all_same_two_routes(stats):
    for k in range(1, 5):
        for n in range(0, 9):
            assert all_same_state_probability(k, n, stats) == all_same_state_probability_pipeline(k, n, stats)


@pytest.mark.parametrize(
    "stats,q1,q2",
    [("classical", F(1, 2), F(1, 3)), ("be", F(2, 3), F(1, 2)), ("fd", F(0), F(0))],
)
def test_crib(stats, q1, q2):
    expected = {"question_I": q1, "question_II": q2}
    assert crib_answers(stats) == expected
    assert crib_answers_closed_form(stats) == expected


def test_crib_question_one_by_labeled_bayes():
    post, _ = posterior_after_draws(prior(2, 2, "be"), [0])
    assert post[(1, 0)] == F(2, 3)
    post, _ = posterior_after_draws(prior(2, 2, "classical"), [0])
    assert post[(1, 0)] == F(1, 2)


def test_daycare_small():
    assert daycare_posterior_closed_form(2) == {0: F(1, 3), 1: F(2, 3)}
    assert daycare_posterior_closed_form(3) == {0: F(1, 6), 1: F(1, 3), 2: F(1, 2)}
    post, _ = posterior_after_draws(prior(2, 3, "be"), [0])
    assert marginal(post, 0) == daycare_posterior_closed_form(3)


def test_daycare_single_child():
    assert daycare_posterior_closed_form(1) == {0: F(1)}
    assert daycare_posterior(1) == {0: F(1)}


@pytest.mark.parametrize("n", list(range(1, 61)))
def test_daycare_two_routes(n):
    closed = daycare_posterior_closed_form(n)
    assert daycare_posterior(n) == closed
    assert sum(closed.values()) == 1
    mean_m = sum(m * p for m, p in closed.items())
    assert mean_m == F(2 * (n - 1), 3)
    if n >= 2:
        assert mean_m / (n - 1) == F(2, 3)


def test_dice_examples():
    assert dice_posterior(2, 2, (1, 0)).mean == F(2, 3)
    flat = dice_posterior(2, 9, (0, 0))
    assert flat.mean == F(1, 2)
    assert {p for _, p in flat.distribution} == {F(1, 10)}


def test_dice_spin_one_by_brute_force():
    post, _ = posterior_after_draws(prior(3, 30, "be"), [0])
    oracle_mean = sum(F(m, 29) * p for m, p in marginal(post, 0).items())
    assert oracle_mean == F(1, 2)
    assert dice_posterior(3, 30, (1, 0, 0)).mean == oracle_mean


def _all_records(k, total):
    if k == 1:
        yield (total,)
        return
    for first in range(total + 1):
        for rest in _all_records(k - 1, total - first):
            yield (first,) + rest


@pytest.mark.parametrize("k", [2, 3, 4])
@pytest.mark.parametrize("n", [4, 11, 25, 60])
def test_dice_two_routes(k, n):
    if k == 4 and n == 60:
        n = 30  # keeps the 4-level sweep quick
    for total in range(0, 3):
        for record in _all_records(k, total):
            a = dice_posterior(k, n, record)
            b = dice_posterior_closed_form(k, n, record)
            assert a.mean == b.mean
            assert a.distribution == [(r, p) for r, p in b.distribution if p]


def test_crib_is_dice_at_two():
    assert dice_posterior(2, 2, (1, 0)).distribution[-1][1] == crib_answers("be")["question_I"]
