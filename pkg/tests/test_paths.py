"""Bounded enumeration, first-exit lower bounds, and closed-form count families."""

from fractions import Fraction

import pytest

from exitwalk import (
    EnumerationTooLarge,
    LatticePath,
    LatticePoint,
    Region,
    ballot,
    binomial,
    count_free_paths_by_length,
    count_paths,
    count_paths_through,
    delannoy,
    enumerate_free_paths,
    exact_exit_distribution,
    first_exit_mass_lower_bound,
)

P = LatticePoint

# ---------------------------------------------------------------------------
# Bounded enumeration of unconstrained walks
# ---------------------------------------------------------------------------


def _recursive_count(region, frm, to, remaining):
    """Independent oracle: count region-confined walks by plain recursion."""
    total = 1 if frm == to else 0
    if remaining == 0:
        return total
    from exitwalk.lattice import STEP_VECTORS

    for name in region.step_set.steps:
        dx, dy = STEP_VECTORS[name]
        nxt = P(frm.x + dx, frm.y + dy)
        if 0 <= nxt.x <= region.m and region.lo(nxt.x) <= nxt.y <= region.hi(nxt.x):
            total += _recursive_count(region, nxt, to, remaining - 1)
    return total


def test_single_step_enumeration(box3):
    paths = enumerate_free_paths(box3, P(0, 0), P(1, 0), 1)
    assert paths == [LatticePath(P(0, 0), ("R",))]


def test_bound_zero_keeps_only_the_empty_path(box3):
    assert enumerate_free_paths(box3, P(1, 1), P(1, 1), 0) == [LatticePath(P(1, 1), ())]
    assert enumerate_free_paths(box3, P(0, 0), P(1, 0), 0) == []


def test_enumeration_matches_recursive_oracle(box3):
    for frm, to, bound in [
        (P(0, 0), P(1, 0), 3),
        (P(0, 0), P(2, 2), 4),
        (P(1, 1), P(1, 1), 4),
    ]:
        paths = enumerate_free_paths(box3, frm, to, bound)
        assert len(paths) == _recursive_count(box3, frm, to, bound)
        assert len(set(paths)) == len(paths)
        for path in paths:
            assert path.start == frm and path.end == to and len(path) <= bound


def test_enumeration_contains_expected_walks(box3):
    paths = enumerate_free_paths(box3, P(0, 0), P(1, 0), 3)
    assert LatticePath(P(0, 0), ("R",)) in paths
    assert LatticePath(P(0, 0), ("U", "D", "R")) in paths
    assert LatticePath(P(0, 0), ("R", "R", "L")) in paths


def test_enumeration_order_follows_step_declaration(box3):
    paths = enumerate_free_paths(box3, P(0, 0), P(1, 1), 4)
    order = {name: i for i, name in enumerate(box3.step_set.steps)}
    keys = [tuple(order[s] for s in path.steps) for path in paths]
    assert keys == sorted(keys)


def test_enumeration_rejects_outside_endpoints(box3):
    with pytest.raises(ValueError):
        enumerate_free_paths(box3, P(0, 5), P(1, 0), 2)
    with pytest.raises(ValueError):
        enumerate_free_paths(box3, P(0, 0), P(9, 0), 2)


def test_enumeration_budget_guard(monkeypatch, box3):
    import exitwalk.paths as paths_mod

    monkeypatch.setattr(paths_mod, "ENUMERATION_BUDGET", 5)
    with pytest.raises(EnumerationTooLarge):
        enumerate_free_paths(box3, P(0, 0), P(2, 2), 8)


def test_count_by_length_matches_enumeration(box2):
    counts = count_free_paths_by_length(box2, P(0, 0), P(1, 1), 6)
    paths = enumerate_free_paths(box2, P(0, 0), P(1, 1), 6)
    grouped: dict[int, int] = {}
    for path in paths:
        grouped[len(path)] = grouped.get(len(path), 0) + 1
    assert counts == grouped
    # parity: opposite-corner walks in a box have even-odd alternation
    assert all(n % 2 == 0 for n in counts)


# ---------------------------------------------------------------------------
# First-exit truncation lower bound
# ---------------------------------------------------------------------------


def test_first_exit_single_cell(single_cell, uniform1):
    mass = first_exit_mass_lower_bound(single_cell, uniform1, P(0, 0), 1)
    assert mass == {0: Fraction(1, 4)}
    exact = exact_exit_distribution(single_cell, uniform1, P(0, 0))
    assert mass == dict(exact.probabilities)


def test_first_exit_approaches_exact_from_below(box2, uniform1):
    exact = exact_exit_distribution(box2, uniform1, P(0, 0))
    assert exact.probabilities[0] == Fraction(4, 15)
    truncated = first_exit_mass_lower_bound(box2, uniform1, P(0, 0), 14)
    for k, value in truncated.items():
        assert value <= exact.probabilities[k]
    deficit = sum(exact.probabilities.values()) - sum(truncated.values())
    assert deficit < Fraction(1, 100) * sum(exact.probabilities.values())


def test_first_exit_monotone_in_bound(box2, uniform1):
    totals = [
        sum(first_exit_mass_lower_bound(box2, uniform1, P(0, 0), b).values())
        for b in (2, 4, 6, 8)
    ]
    assert totals == sorted(totals)
    assert totals[0] < totals[-1]


def test_first_exit_start_on_right_edge_is_indicator(box2, uniform1):
    assert first_exit_mass_lower_bound(box2, uniform1, P(1, 1), 0) == {
        0: Fraction(0),
        1: Fraction(1),
    }


def test_first_exit_requires_start_inside_region(box2, uniform1):
    with pytest.raises(ValueError):
        first_exit_mass_lower_bound(box2, uniform1, P(0, 7), 4)


# ---------------------------------------------------------------------------
# Directed path counting
# ---------------------------------------------------------------------------


def _monotone_paths(region, frm, to):
    """Oracle: enumerate right/up staircase walks by recursion."""
    if frm == to:
        return [[frm]]
    out = []
    for dx, dy in ((1, 0), (0, 1)):
        nxt = P(frm.x + dx, frm.y + dy)
        if nxt.x > to.x or nxt.y > to.y:
            continue
        if nxt.x <= region.m and region.lo(nxt.x) <= nxt.y <= region.hi(nxt.x):
            out.extend([[frm] + rest for rest in _monotone_paths(region, nxt, to)])
    return out


def test_monotone_counts_in_box(box3):
    assert count_paths(box3, "monotone", P(0, 0), P(2, 2)) == 6
    # counts of paths containing each vertex of the middle column; a staircase
    # may pass through several of them, so the values sum to more than 6
    assert count_paths_through(box3, "monotone", P(0, 0), P(2, 2), 1) == {0: 3, 1: 4, 2: 3}


def test_monotone_counts_match_enumeration_oracle():
    regions = [
        Region(((0, 2),) * 3),
        Region(((0, 2), (1, 3), (2, 4))),
        Region(((0, 1), (0, 2), (0, 2), (1, 2))),
    ]
    for region in regions:
        frm = P(0, region.lo(0))
        to = P(region.m, region.hi(region.m))
        paths = _monotone_paths(region, frm, to)
        assert count_paths(region, "monotone", frm, to) == len(paths)
        for column in range(1, region.m):
            table = count_paths_through(region, "monotone", frm, to, column)
            seen: dict[int, int] = {y: 0 for y in range(region.lo(column), region.hi(column) + 1)}
            for path in paths:
                heights = {v.y for v in path if v.x == column}
                assert len(heights) >= 1
                # a monotone path visits a column at a contiguous height range;
                # key the count by the height at which it first enters
                seen[min(heights)] += 0  # table keys cover the column
            for y, count in table.items():
                through = sum(1 for path in paths if any(v == P(column, y) for v in path))
                assert count == through
            assert sum(table.values()) >= len(paths)


def test_count_paths_zero_when_unreachable(box3):
    assert count_paths(box3, "monotone", P(0, 2), P(2, 0)) == 0


def test_diagonal_counts_on_centered_triangle():
    n = 2
    region = Region(
        tuple((-min(x, 2 * n - x), min(x, 2 * n - x)) for x in range(2 * n + 1))
    )
    table = count_paths_through(region, "dyck", P(0, 0), P(2 * n, 0), n)
    assert table == {-2: 1, -1: 0, 0: 4, 1: 0, 2: 1}


def test_diagonal_triangle_counts_square_binomials():
    for n in range(1, 9):
        region = Region(
            tuple((-min(x, 2 * n - x), min(x, 2 * n - x)) for x in range(2 * n + 1))
        )
        table = count_paths_through(region, "dyck", P(0, 0), P(2 * n, 0), n)
        for k, value in table.items():
            if (n + k) % 2 == 0:
                assert value == binomial(n, (n + k) // 2) ** 2
            else:
                assert value == 0


def test_flat_step_counts_are_squared_central_delannoy():
    n = 3
    region = Region(
        tuple((-min(x, 2 * n - x), min(x, 2 * n - x)) for x in range(2 * n + 1))
    )
    table = count_paths_through(region, "schroder", P(0, 0), P(2 * n, 0), n)
    expected = {
        k: delannoy((n + k) // 2, (n - k) // 2) ** 2 if (n + k) % 2 == 0 else 0
        for k in range(-n, n + 1)
    }
    assert table == expected


def test_count_paths_through_rejects_column_outside_span(box3):
    with pytest.raises(ValueError):
        count_paths_through(box3, "monotone", P(0, 0), P(2, 2), -1)
    with pytest.raises(ValueError):
        count_paths_through(box3, "monotone", P(1, 0), P(2, 2), 0)


def test_count_paths_through_endpoint_columns_allowed(box3):
    at_end = count_paths_through(box3, "monotone", P(0, 0), P(2, 2), 2)
    assert at_end[2] == 6  # every path contains the target vertex
    at_start = count_paths_through(box3, "monotone", P(0, 0), P(2, 2), 0)
    assert at_start[0] == 6  # and the source vertex


def test_count_paths_rejects_unknown_mode(box3):
    with pytest.raises(ValueError):
        count_paths(box3, "knight", P(0, 0), P(2, 2))


def test_count_paths_outside_endpoints_count_zero(box3):
    assert count_paths(box3, "monotone", P(0, -1), P(2, 2)) == 0
    assert count_paths(box3, "monotone", P(0, 0), P(2, 9)) == 0


# ---------------------------------------------------------------------------
# Closed-form families
# ---------------------------------------------------------------------------


def _delannoy_oracle(p, q, memo={}):
    if p == 0 or q == 0:
        return 1
    if (p, q) not in memo:
        memo[(p, q)] = (
            _delannoy_oracle(p - 1, q) + _delannoy_oracle(p, q - 1) + _delannoy_oracle(p - 1, q - 1)
        )
    return memo[(p, q)]


def test_delannoy_values():
    assert delannoy(0, 5) == 1
    assert delannoy(1, 1) == 3
    assert delannoy(2, 2) == 13
    assert delannoy(3, 3) == 63


def test_delannoy_matches_recurrence_oracle():
    for p in range(11):
        for q in range(11):
            assert delannoy(p, q) == _delannoy_oracle(p, q)
            assert delannoy(p, q) == delannoy(q, p)


def test_delannoy_rejects_negative_arguments():
    with pytest.raises(ValueError):
        delannoy(-1, 2)


def test_ballot_values():
    assert ballot(4, 4) == 1
    assert ballot(4, 3) == 3
    assert ballot(6, 3) == 5  # Catalan number C_3
    assert ballot(6, 4) == 9


def test_ballot_matches_nonnegative_walk_dp():
    for n in range(15):
        region = Region(((0, n if n else 1),) * (n + 1))
        for k in range((n + 1) // 2, n + 1):
            assert ballot(n, k) == count_paths(region, "dyck", P(0, 0), P(n, 2 * k - n))


def test_ballot_rejects_out_of_range():
    with pytest.raises(ValueError):
        ballot(4, 1)
    with pytest.raises(ValueError):
        ballot(4, 5)


def test_binomial_values():
    assert binomial(5, 0) == 1
    assert binomial(4, 2) == 6
    assert binomial(12, 5) == 792
    assert binomial(3, 7) == 0
