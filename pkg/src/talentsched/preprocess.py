"""Subproblem simplification: drop actors that cannot wait any more and
merge scenes that have become indistinguishable.

An actor leaves the active set when (a) both blocks anchor them (their total
pay is decided), (b) at most one thing still anchors them -- counting each
block as one anchor and each remaining scene as one -- so they can never be
held waiting again, or (c) no remaining scene needs them.  Remaining scenes
whose active-actor sets coincide are merged into one scene with the summed
duration; the smallest member index names the merged scene.  Both rules are
iterated to a fixed point, so simplify is idempotent and never changes the
optimal holding cost of the node.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .instance import Instance, actors_of_scenes, bits, mask_of
from .cost import Schedule, SearchNode


@dataclass(frozen=True)
class MergeMap:
    """For each merged scene, the ordered original scenes it absorbed."""

    groups: dict[int, tuple[int, ...]] = field(default_factory=dict)

    def members(self, scene: int) -> tuple[int, ...]:
        return self.groups.get(scene, (scene,))

    def absorbed(self) -> int:
        """Mask of scene ids that vanished into a representative."""
        out = 0
        for rep, members in self.groups.items():
            out |= mask_of(members) & ~(1 << rep)
        return out

    def group_duration(self, inst: Instance, scene: int) -> int:
        return sum(inst.durations[j] for j in self.members(scene))


def _active_actors(
    inst: Instance, a_front: int, a_back: int, remaining_actor_sets: list[int], start: int
) -> int:
    """Apply the three drop rules given the actor set of every remaining scene."""
    seen_once = 0
    seen_twice = 0
    for a in remaining_actor_sets:
        seen_twice |= seen_once & a
        seen_once |= a
    anchored = a_front | a_back
    fixed = a_front & a_back
    return (seen_twice | (seen_once & anchored)) & ~fixed & start


def simplify(inst: Instance, node: SearchNode) -> tuple[SearchNode, MergeMap]:
    """Shrink a node's active actors and merge duplicate remaining scenes.

    Returns the simplified node (remaining holds representative ids) and the
    merges performed by this call.  The node's blocks and past cost are
    untouched; the optimal holding cost of the subproblem is preserved.
    """
    a_front = actors_of_scenes(inst, mask_of(node.front))
    a_back = actors_of_scenes(inst, mask_of(node.back))
    start = node.active_actors if node.active_actors is not None else inst.all_actors

    # each representative's member list and combined actor set
    reps = sorted(bits(node.remaining))
    members = {s: (s,) for s in reps}
    actor_sets = {s: inst.scene_actors[s] for s in reps}

    while True:
        active = _active_actors(
            inst, a_front, a_back, [actor_sets[s] for s in reps], start
        )
        by_signature: dict[int, list[int]] = {}
        for s in reps:
            by_signature.setdefault(actor_sets[s] & active, []).append(s)
        merged_any = False
        for group in by_signature.values():
            if len(group) > 1:
                keep = group[0]  # reps are ascending, so this is the smallest id
                for other in group[1:]:
                    members[keep] = members[keep] + members[other]
                    actor_sets[keep] |= actor_sets[other]
                    del members[other]
                    del actor_sets[other]
                merged_any = True
        if not merged_any and active == start:
            break
        start = active
        reps = sorted(members)

    new_node = SearchNode(
        front=node.front,
        back=node.back,
        remaining=mask_of(reps),
        past_cost=node.past_cost,
        active_actors=active,
    )
    # stored member order is concatenation order: members of an earlier merge
    # stay adjacent, which later merges must not break
    groups = {rep: mem for rep, mem in members.items() if len(mem) > 1}
    return new_node, MergeMap(groups)


def expand_schedule(merge_map: MergeMap, merged_order) -> Schedule:
    """Expand a representative-id order back to original scene ids; group
    members come out consecutively in their stored order."""
    absorbed = merge_map.absorbed()
    out: list[int] = []
    seen = set()
    for s in merged_order:
        if absorbed >> s & 1:
            raise ValueError(f"scene {s} was merged away and is not schedulable")
        if s in seen:
            raise ValueError(f"scene {s} appears twice in the merged order")
        seen.add(s)
        out.extend(merge_map.members(s))
    return Schedule(tuple(out))
