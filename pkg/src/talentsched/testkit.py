"""Worked-example fixtures and enumeration oracles shared by the test suite.

Everything here is test support: small, slow, and written independently of
the solver's fast paths so it can serve as ground truth.
"""

from __future__ import annotations

import random
from itertools import permutations

from .cost import SearchNode
from .instance import Instance, actors_of_scenes, bits, mask_of

# 12-scene, 6-actor worked example (matrix rows are actors, X = required)
_WORKED_ROWS = [
    "X.X..X.XXXXX",
    "XXXXX.X.X.X.",
    ".X....XX....",
    "XX..XX......",
    "...X...XX...",
    ".........X..",
]
_WORKED_DURATIONS = (1, 1, 2, 1, 3, 1, 1, 2, 1, 2, 1, 1)
_WORKED_WAGES = (20, 5, 4, 10, 4, 7)


def fixture_worked_example() -> Instance:
    """The canonical 12x6 worked example used throughout the tests."""
    return Instance.from_rows(
        _WORKED_ROWS, _WORKED_DURATIONS, _WORKED_WAGES, name="worked-example"
    )


# best known order for the worked example (0-based scene ids)
WORKED_BEST_ORDER = (4, 1, 6, 0, 5, 7, 3, 8, 2, 10, 9, 11)
WORKED_TOTAL_IDENTITY = 604
WORKED_HOLDING_IDENTITY = 223
WORKED_TOTAL_BEST = 434
WORKED_HOLDING_BEST = 53


def fixture_partial_example() -> tuple[Instance, SearchNode]:
    """Six-scene instance with a two-scene front block, a two-scene back
    block, and two middle scenes; exercises every past-cost category."""
    inst = Instance(
        num_scenes=6,
        num_actors=5,
        scene_actors=(0b00011, 0b01000, 0b11111, 0b00000, 0b00001, 0b00101),
        durations=(2, 3, 5, 7, 11, 13),
        wages=(17, 19, 23, 29, 31),
        name="partial-example",
    )
    node = SearchNode(front=(0, 1), back=(4, 5), remaining=0b001100)
    return inst, node


def enumerate_future_cost(inst: Instance, node: SearchNode) -> int:
    """Exact minimum holding cost the middle scenes can still incur, by
    trying every order of the remaining set (capped at 7 scenes).

    Counts, per candidate order, the waiting days inside the middle block of
    every actor whose span is not yet fully decided, using only first/last
    anchoring logic (independent of the solver's incremental bookkeeping).
    """
    q = sorted(bits(node.remaining))
    if len(q) > 7:
        raise ValueError("future-cost enumeration is capped at 7 remaining scenes")

    a_front = actors_of_scenes(inst, mask_of(node.front))
    a_back = actors_of_scenes(inst, mask_of(node.back))
    a_mid = actors_of_scenes(inst, node.remaining)
    active = node.active_actors if node.active_actors is not None else inst.all_actors
    relevant = (a_front | a_back | a_mid) & ~(a_front & a_back) & active
    mid_days = sum(inst.durations[s] for s in q)

    best = None
    for order in permutations(q):
        total = 0
        day = 0
        first = {}
        last = {}
        for s in order:
            d = inst.durations[s]
            for i in bits(inst.scene_actors[s] & relevant):
                if i not in first:
                    first[i] = day
                last[i] = day + d
            day += d
        for i in bits(relevant):
            in_front = bool(a_front >> i & 1)
            in_back = bool(a_back >> i & 1)
            start = 0 if in_front else first.get(i)
            end = mid_days if in_back else last.get(i)
            if start is None or end is None:
                continue
            work = sum(
                inst.durations[s] for s in q if inst.scene_actors[s] >> i & 1
            )
            total += inst.wages[i] * (end - start - work)
        if best is None or total < best:
            best = total
    return best if best is not None else 0


def random_node(
    inst: Instance, rng: random.Random, max_remaining: int = 7
) -> SearchNode:
    """Random valid partial schedule of the instance with a bounded middle."""
    scenes = list(range(inst.num_scenes))
    rng.shuffle(scenes)
    q_size = rng.randint(0, min(inst.num_scenes, max_remaining))
    q = scenes[:q_size]
    rest = scenes[q_size:]
    cut = rng.randint(0, len(rest))
    front = tuple(rest[:cut])
    back = tuple(rest[cut:])
    return SearchNode(front=front, back=back, remaining=mask_of(q))
