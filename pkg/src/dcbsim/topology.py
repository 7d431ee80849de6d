"""Seven-cell reuse-3 cluster geometry.

Cell centers sit on a hexagonal lattice with spacing ``sqrt(3) * R``.  A
center is addressed by integer lattice coordinates ``(i, j)`` with

    position = i * (sqrt(3) R, 0) + j * (sqrt(3) R / 2, 3 R / 2)

and the reuse-3 colouring is ``(i - j) mod 3``, which gives every pair of
adjacent centers a different frequency group.  Co-channel centers of a cell
are then the points ``m * (1, 1) + n * (-1, 2)`` around it, a hexagonal
lattice with spacing ``D = 3 R``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ConfigurationError, DomainError

GROUP_LABELS = ("A", "B", "C")

# ring cells 2..7, counter-clockwise from the +x axis
_RING_OFFSETS = ((1, 0), (0, 1), (-1, 1), (-1, 0), (0, -1), (1, -1))

# co-channel lattice steps for reuse 3, counter-clockwise starting at 30 degrees
_COCHANNEL_STEPS = ((1, 1), (-1, 2), (-2, 1), (-1, -1), (1, -2), (2, -1))


@dataclass(frozen=True)
class FrequencyGroup:
    label: str
    channel_count: int = 0

    def __post_init__(self):
        if self.label not in GROUP_LABELS:
            raise ConfigurationError(f"unknown frequency group {self.label!r}")
        if self.channel_count < 0:
            raise ConfigurationError("channel_count must be >= 0")


@dataclass(frozen=True)
class Cell:
    id: int
    position: tuple[float, float]
    group: str
    lattice: tuple[int, int]


@dataclass(frozen=True)
class ClusterLayout:
    cells: tuple[Cell, ...]
    cell_radius: float
    reuse_factor: int
    co_channel_distance: float
    groups: tuple[FrequencyGroup, ...]

    @property
    def num_cells(self) -> int:
        return len(self.cells)

    @property
    def adjacent_spacing(self) -> float:
        return math.sqrt(3.0) * self.cell_radius

    @property
    def cell_ids(self) -> tuple[int, ...]:
        return tuple(c.id for c in self.cells)

    def cell(self, cell_id: int) -> Cell:
        if not 1 <= cell_id <= len(self.cells):
            raise DomainError(f"cell {cell_id} not in layout (1..{len(self.cells)})")
        return self.cells[cell_id - 1]

    def group_of(self, cell_id: int) -> str:
        return self.cell(cell_id).group

    def neighbors(self, cell_id: int) -> tuple[int, ...]:
        """In-cluster cells whose centers are one lattice step away."""
        ci, cj = self.cell(cell_id).lattice
        out = []
        for other in self.cells:
            di, dj = other.lattice[0] - ci, other.lattice[1] - cj
            if (di, dj) in _RING_OFFSETS:
                out.append(other.id)
        return tuple(out)

    def position_of_lattice(self, i: int, j: int) -> tuple[float, float]:
        return lattice_to_xy(i, j, self.cell_radius)


@dataclass(frozen=True)
class Interferer:
    position: tuple[float, float]
    tier: int
    lattice: tuple[int, int]


@dataclass(frozen=True)
class InterfererSet:
    entries: tuple[Interferer, ...]

    def __len__(self):
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)

    def tier(self, k: int) -> tuple[Interferer, ...]:
        return tuple(e for e in self.entries if e.tier == k)

    def positions(self) -> np.ndarray:
        return np.array([e.position for e in self.entries], dtype=float).reshape(-1, 2)

    def distances_from(self, point) -> np.ndarray:
        return np.hypot(*(self.positions() - np.asarray(point, dtype=float)).T)


def lattice_to_xy(i: int, j: int, cell_radius: float) -> tuple[float, float]:
    s = math.sqrt(3.0) * cell_radius
    return (s * i + 0.5 * s * j, 1.5 * cell_radius * j)


def group_label(i: int, j: int) -> str:
    return GROUP_LABELS[(i - j) % 3]


def build_cluster(num_cells: int = 7, reuse_factor: int = 3, cell_radius: float = 1000.0,
                  channels_per_cell: int = 100) -> ClusterLayout:
    """Build the 7-cell cluster with cell 1 at the origin using group A.

    Ring cells 2..7 are placed counter-clockwise and alternate B, C, B, C, B, C.
    Only ``num_cells=7`` and ``reuse_factor=3`` are supported.
    """
    if num_cells != 7:
        raise ConfigurationError(f"unsupported num_cells={num_cells}; only 7 is supported")
    if reuse_factor != 3:
        raise ConfigurationError(f"unsupported reuse_factor={reuse_factor}; only 3 is supported")
    if not cell_radius > 0:
        raise ConfigurationError("cell_radius must be positive")

    coords = [(0, 0), *_RING_OFFSETS]
    cells = tuple(
        Cell(id=k + 1, position=lattice_to_xy(i, j, cell_radius), group=group_label(i, j), lattice=(i, j))
        for k, (i, j) in enumerate(coords)
    )
    groups = tuple(FrequencyGroup(g, channels_per_cell) for g in GROUP_LABELS)
    return ClusterLayout(
        cells=cells,
        cell_radius=float(cell_radius),
        reuse_factor=reuse_factor,
        co_channel_distance=cell_radius * math.sqrt(3.0 * reuse_factor),
        groups=groups,
    )


def donor_search_order(layout: ClusterLayout, ref_cell: int) -> list[frozenset[int]]:
    """Neighbors of ``ref_cell`` grouped by their (shared) frequency group.

    For cell 1 this is ``[{2, 4, 6}, {3, 5, 7}]``.  The list is ordered by
    group label only; which set is searched first is decided at borrow time.
    """
    by_group: dict[str, set[int]] = {}
    for n in layout.neighbors(ref_cell):
        by_group.setdefault(layout.group_of(n), set()).add(n)
    return [frozenset(by_group[g]) for g in sorted(by_group)]


def _hex_ring(k: int):
    # walk ring k of the co-channel lattice, in (m, n) step multiples
    if k == 0:
        yield (0, 0)
        return
    steps = _COCHANNEL_STEPS
    di, dj = steps[4]
    pos = (k * di, k * dj)
    for side in range(6):
        for _ in range(k):
            yield pos
            pos = (pos[0] + steps[side][0], pos[1] + steps[side][1])


def co_channel_interferers(layout: ClusterLayout, victim: int, group=None, max_tier: int = 2) -> InterfererSet:
    """Co-channel centers in rings 1..max_tier around ``victim``.

    ``group`` defaults to the victim's own group; passing any other group is
    rejected because the victim is not a member of that reuse lattice.  Ring 1
    holds 6 centers at ``D``; ring 2 holds 6 at ``sqrt(3) D`` and 6 at ``2 D``.
    Centers outside the 7-cell cluster are virtual cells of the reuse plane.
    """
    if max_tier not in (1, 2):
        raise ConfigurationError(f"max_tier must be 1 or 2, got {max_tier}")
    cell = layout.cell(victim)
    label = group.label if isinstance(group, FrequencyGroup) else (group or cell.group)
    if label != cell.group:
        raise DomainError(f"cell {victim} uses group {cell.group}, not {label}")

    ci, cj = cell.lattice
    entries = []
    for tier in range(1, max_tier + 1):
        for di, dj in _hex_ring(tier):
            i, j = ci + di, cj + dj
            entries.append(Interferer(layout.position_of_lattice(i, j), tier, (i, j)))
    return InterfererSet(tuple(entries))
