import numpy as np
import pytest

from bracketprob import (
    InvalidParameterError,
    OutcomeOverride,
    PairDistribution,
    SingleDistribution,
    apply_overrides,
    build_matrices,
    build_schedule,
    compute_tournament,
    group_probabilities,
    most_likely_bracket,
)

from .conftest import random_ratings
from .oracles import group_advance_oracle, mini_best_assignment, mini_tournament_oracle


def test_equal_ratings_uniform_champion(equal_matrices, schedules):
    for desc in schedules.values():
        result = compute_tournament(equal_matrices, desc)
        np.testing.assert_allclose(result.win, np.full(32, 1.0 / 32.0), atol=1e-12)
        np.testing.assert_allclose(
            result.reach.values.sum(axis=0), [16.0, 8.0, 4.0, 2.0, 1.0], atol=1e-10
        )


def test_mass_conservation_per_block(men_matrices, women_matrices, schedules):
    for matrices, name in ((men_matrices, "wc2022"), (women_matrices, "wc2023")):
        result = compute_tournament(matrices, schedules[name])
        for g in range(8):
            block = result.advance.matrix[4 * g : 4 * g + 4, 4 * g : 4 * g + 4]
            assert block.sum() == pytest.approx(1.0, abs=1e-12)
        for round_blocks in result.rounds:
            for block in round_blocks:
                assert block.total() == pytest.approx(1.0, abs=1e-10)


def test_reach_monotone_and_win_column(men_matrices, schedules):
    result = compute_tournament(men_matrices, schedules["wc2022"])
    values = result.reach.values
    assert result.reach.labels == ("L16", "QF", "SF", "F", "W")
    diffs = np.diff(values, axis=1)
    assert np.all(diffs <= 1e-15)
    np.testing.assert_array_equal(values[:, -1], result.win)


def test_support_sizes_with_equal_ratings(equal_matrices, schedules):
    result = compute_tournament(equal_matrices, schedules["wc2022"])
    l16, qf, sf, final = result.rounds
    assert all(len(b.probs) == 56 for b in l16)
    assert all(len(b.probs) == 240 for b in qf)
    assert len(sf[0].probs) == 992
    assert len(final[0].probs) == 32


def test_combination_counters(men_matrices, women_matrices, schedules):
    r22 = compute_tournament(men_matrices, schedules["wc2022"])
    by_label = r22.combos.by_label()
    assert by_label["groups"] == 15_912
    assert by_label["L16"] == 576
    assert by_label["QF"] == 6_272
    assert by_label["SF"] == 57_600
    assert by_label["F"] == 992
    r23 = compute_tournament(women_matrices, schedules["wc2023"])
    assert r23.combos.by_label() == {
        "groups": 15_912,
        "L16": 576,
        "QF": 6_272,
        "SF": 240,
        "F": 256,
    }
    assert r23.combos.total_full_range == 23_256
    # logistic strengths keep every advance pair possible, so the processed
    # supports are full; the 2023 semifinal runs two parallel collapses over
    # one shared index range, hence support 480 against full range 240
    assert [rc.support for rc in r22.combos.rounds] == [15_912, 576, 6_272, 57_600, 992]
    assert [rc.support for rc in r23.combos.rounds] == [15_912, 576, 6_272, 480, 256]


def test_final_pair_structure(men_matrices, women_matrices, schedules):
    # one mixing bracket: two teams from the same group can reach the final
    r22 = compute_tournament(men_matrices, schedules["wc2022"])
    final_input = r22.rounds[-2][0]
    assert isinstance(final_input, PairDistribution)
    same_group = [
        (i, j) for (i, j) in final_input.probs if i // 4 == j // 4
    ]
    assert same_group, "expected same-group final pairs to be possible"
    assert all(final_input.probs[pair] > 0 for pair in same_group)

    # split halves: the finalists always come from different halves (groups
    # are positional here; the descriptor's bracket_group_order only records
    # which real-world label sits at each position)
    r23 = compute_tournament(women_matrices, schedules["wc2023"])
    half_a, half_b = r23.rounds[-2]
    assert isinstance(half_a, SingleDistribution)
    assert set(half_a.probs) <= set(range(16))
    assert set(half_b.probs) <= set(range(16, 32))
    assert half_a.probs and half_b.probs


def test_block_independence_under_outside_changes(schedules):
    """Blocks evolve independently: changing ratings in the other half of the
    bracket leaves a block's distributions bit-identical."""
    base = build_matrices(random_ratings(5, 32), sigma=360.0)
    moved = random_ratings(5, 32)
    moved[16:] = random_ratings(99, 32)[16:]
    other = build_matrices(moved, sigma=360.0)
    desc = schedules["wc2022"]
    r1 = compute_tournament(base, desc)
    r2 = compute_tournament(other, desc)
    # L16 (blocks over group pairs) and QF (blocks over half-quarters) for the
    # untouched half, i.e. output blocks covering bracket positions 0..3
    for round_idx in (0, 1):
        for b1, b2 in zip(r1.rounds[round_idx], r2.rounds[round_idx]):
            if b1.hi <= 3:
                assert b1.probs == b2.probs


@pytest.mark.parametrize("seed", [3, 17])
def test_mini_format_matches_joint_enumeration(seed, mini_schedule):
    matrices = build_matrices(random_ratings(seed, 8), sigma=300.0)
    result = compute_tournament(matrices, mini_schedule)
    oracle = mini_tournament_oracle(matrices, [0, 1, 2, 3], [4, 5, 6, 7])
    assert oracle.sum() == pytest.approx(1.0, abs=1e-9)
    np.testing.assert_allclose(result.win, oracle, atol=1e-10)


def test_mini_format_with_draw_split_rule(mini_schedule):
    matrices = build_matrices(random_ratings(23, 8), sigma=300.0, knockout_rule="draw_split")
    result = compute_tournament(matrices, mini_schedule)
    oracle = mini_tournament_oracle(matrices, [0, 1, 2, 3], [4, 5, 6, 7])
    np.testing.assert_allclose(result.win, oracle, atol=1e-10)


def test_compute_rejects_mismatched_sizes(mini_schedule, men_matrices):
    with pytest.raises(InvalidParameterError):
        compute_tournament(men_matrices, mini_schedule)


def test_most_likely_equal_ratings(equal_matrices, schedules):
    # All brackets are mathematically tied; the group advance entries differ
    # in the last ulp (summation order), so the argmax team is arbitrary but
    # stable, and only the value itself is pinned down.
    for desc in schedules.values():
        best = most_likely_bracket(equal_matrices, desc)
        assert best.probability == pytest.approx(
            (1.0 / 12.0) ** 8 * 0.5**15, rel=1e-12
        )
        assert 0 <= best.champion < 32
        assert len(best.matches) == 15
        assert len(best.group_pairs) == 8
        again = most_likely_bracket(equal_matrices, desc)
        assert again == best


def test_most_likely_follows_dominant_ratings(schedules):
    # steep rating ladder: every favorite is a near-certain winner
    ratings = np.array([3000.0 - 80.0 * i for i in range(32)])
    matrices = build_matrices(ratings, sigma=40.0)
    best = most_likely_bracket(matrices, schedules["wc2022"])
    assert best.champion == 0
    assert best.group_pairs == tuple((4 * g, 4 * g + 1) for g in range(8))
    for match in best.matches:
        assert match.winner == min(match.team_a, match.team_b)


def test_most_likely_value_recomputes(men_matrices, men_config, schedules):
    """The reported probability equals the product of its own components."""
    for name in ("wc2022", "wc2023"):
        desc = schedules[name]
        best = most_likely_bracket(men_matrices, desc)
        advance = group_probabilities(
            men_matrices, [[4 * g + t for t in range(4)] for g in range(8)]
        )
        value = 1.0
        for first, second in best.group_pairs:
            value *= advance.matrix[first, second]
        for match in best.matches:
            loser = match.team_b if match.winner == match.team_a else match.team_a
            value *= men_matrices.knockout[match.winner, loser]
        assert best.probability == pytest.approx(value, rel=1e-9)
        assert best.champion == best.matches[-1].winner


@pytest.mark.parametrize("seed", [7, 29])
def test_most_likely_mini_exhaustive(seed, mini_schedule):
    matrices = build_matrices(random_ratings(seed, 8), sigma=300.0)
    best = most_likely_bracket(matrices, mini_schedule)
    adv_a = group_advance_oracle(matrices, [0, 1, 2, 3])
    adv_b = group_advance_oracle(matrices, [4, 5, 6, 7])
    assert best.probability == pytest.approx(
        mini_best_assignment(matrices, adv_a, adv_b), rel=1e-12
    )


def test_most_likely_respects_overrides(men_matrices, schedules):
    # force the group-A runner-up into winning the whole group
    overrides = [
        OutcomeOverride(stage="group", team_a=1, team_b=0, result="a_wins"),
        OutcomeOverride(stage="group", team_a=1, team_b=2, result="a_wins"),
        OutcomeOverride(stage="group", team_a=1, team_b=3, result="a_wins"),
    ]
    pinned = apply_overrides(men_matrices, overrides)
    best = most_likely_bracket(pinned, schedules["wc2022"])
    assert best.group_pairs[0][0] == 1


def test_four_group_variants_are_distinct_but_normalized():
    """Straight and split-final 4-group formats are different tournaments
    (the straight bracket lets the halves meet before the final), but both
    conserve probability mass."""
    ratings = random_ratings(41, 16)
    matrices = build_matrices(ratings, sigma=300.0)
    straight = build_schedule("four", num_groups=4, split_final=False)
    split = build_schedule("four-split", num_groups=4, split_final=True)
    r1 = compute_tournament(matrices, straight)
    r2 = compute_tournament(matrices, split)
    assert r1.win.sum() == pytest.approx(1.0, abs=1e-10)
    assert r2.win.sum() == pytest.approx(1.0, abs=1e-10)
    assert np.abs(r1.win - r2.win).max() > 1e-6
