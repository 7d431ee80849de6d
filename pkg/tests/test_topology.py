import itertools
import math

import numpy as np
import pytest

from dcbsim.errors import ConfigurationError, DomainError
from dcbsim.topology import GROUP_LABELS, build_cluster, co_channel_interferers, donor_search_order


@pytest.fixture(scope="module")
def layout():
    return build_cluster(7, 3, 1000.0)


def test_distances(layout):
    assert layout.co_channel_distance == pytest.approx(3000.0)
    assert layout.adjacent_spacing == pytest.approx(1732.0508, abs=1e-3)
    assert layout.cell(1).position == (0.0, 0.0)
    for n in layout.neighbors(1):
        assert math.dist(layout.cell(n).position, (0, 0)) == pytest.approx(1732.0508, abs=1e-3)


def test_group_pattern(layout):
    g = {c.id: c.group for c in layout.cells}
    assert g[1] == "A"
    assert g[2] == g[4] == g[6]
    assert g[3] == g[5] == g[7]
    assert g[2] != g[3]
    assert [g[i] for i in range(2, 8)] == ["B", "C", "B", "C", "B", "C"]
    assert len(layout.groups) == 3 and {fg.label for fg in layout.groups} == set(GROUP_LABELS)


@pytest.mark.parametrize("num_cells, reuse", [(8, 3), (19, 3), (7, 4), (7, 7)])
def test_unsupported_sizes(num_cells, reuse):
    with pytest.raises(ConfigurationError):
        build_cluster(num_cells, reuse, 1000.0)


def test_adjacent_cells_differ(layout):
    for a, b in itertools.combinations(layout.cells, 2):
        if math.dist(a.position, b.position) < layout.adjacent_spacing + 1e-6:
            assert a.group != b.group


def test_co_group_spacing(layout):
    for a, b in itertools.combinations(layout.cells, 2):
        if a.group == b.group:
            assert math.dist(a.position, b.position) >= layout.co_channel_distance - 1e-6


def test_donor_search_order(layout):
    sets = donor_search_order(layout, 1)
    assert {frozenset(s) for s in sets} == {frozenset({2, 4, 6}), frozenset({3, 5, 7})}
    assert not set.intersection(*map(set, sets))
    for s in sets:
        assert 1 not in s
        assert len({layout.group_of(c) for c in s}) == 1


def test_ring_cell_donors(layout):
    # cell 2 touches 1 (A), 3 and 7 (C) inside the cluster
    sets = donor_search_order(layout, 2)
    assert {frozenset(s) for s in sets} == {frozenset({1}), frozenset({3, 7})}


def _brute_force_rings(layout, victim, max_tier):
    """Enumerate every lattice center with norm <= max_tier*D sharing the victim's group."""
    R = layout.cell_radius
    D = layout.co_channel_distance
    s = math.sqrt(3) * R
    center = np.array(layout.cell(victim).position)
    out = []
    for i in range(-12, 13):
        for j in range(-12, 13):
            p = np.array([s * i + 0.5 * s * j, 1.5 * R * j])
            d = np.linalg.norm(p - center)
            if d < 1e-6 or d > max_tier * D + 1e-6:
                continue
            if GROUP_LABELS[(i - j) % 3] != layout.group_of(victim):
                continue
            out.append(d)
    return sorted(out)


@pytest.mark.parametrize("victim", range(1, 8))
def test_interferers_match_enumeration(layout, victim):
    got = co_channel_interferers(layout, victim, layout.group_of(victim), 2)
    d = sorted(got.distances_from(layout.cell(victim).position))
    assert np.allclose(d, _brute_force_rings(layout, victim, 2), atol=1e-6)


def test_interferer_tiers(layout):
    t1 = co_channel_interferers(layout, 1, "A", 1)
    assert len(t1) == 6
    assert np.allclose(t1.distances_from((0, 0)), 3000.0)

    both = co_channel_interferers(layout, 1, "A", 2)
    assert len(both) == 18
    d1 = both.distances_from((0, 0))[[e.tier == 1 for e in both]]
    d2 = np.sort(both.distances_from((0, 0))[[e.tier == 2 for e in both]])
    assert len(d1) == 6 and len(d2) == 12
    assert np.allclose(d2[:6], 5196.152422706632, atol=1e-6)
    assert np.allclose(d2[6:], 6000.0, atol=1e-6)
    assert d2.min() > d1.max()
    # no duplicates
    assert len({tuple(np.round(p, 6)) for p in both.positions()}) == 18


def test_interferers_deterministic(layout):
    assert co_channel_interferers(layout, 3, None, 2) == co_channel_interferers(layout, 3, "C", 2)


def test_interferer_errors(layout):
    with pytest.raises(ConfigurationError):
        co_channel_interferers(layout, 1, "A", 3)
    with pytest.raises(ConfigurationError):
        co_channel_interferers(layout, 1, "A", 0)
    with pytest.raises(DomainError):
        co_channel_interferers(layout, 1, "B", 1)
    with pytest.raises(DomainError):
        layout.cell(8)
