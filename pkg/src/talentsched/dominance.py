"""Branch dominance tests.

At a node, branching on scene ``s1`` can be skipped when some other
remaining scene ``s2`` is guaranteed to do at least as well in that slot.
Two sufficient conditions over the active-actor sets (``a(s)`` the scene's
actors, ``front``/``back`` the actors on location at each block):

* rule 1 -- a(s1) | front  is a superset of  a(s2) | front, and
            a(s1) | back   is a subset of    a(s2) | back:
            swapping s1 and s2 never raises the holding cost.
* rule 2 -- a(s1) | front  is a superset of  a(s2) | front, and the wage of
            (a(s1) | front) & (a(s2) | back) strictly exceeds the wage of
            a(s2) | front: moving s2 in front of s1 always saves more than
            it costs.

Rule 1 can hold in both directions at once (identical scenes); exactly one
branch must survive then, and the smaller scene id wins.  Rule 2 is
strictly one-directional, as is any mix of the two conditions.
"""

from __future__ import annotations

from .instance import Instance, actors_of_scenes, bits, mask_of, total_wage
from .cost import SearchNode


def dominated_rule1(s1_actors: int, s2_actors: int, front: int, back: int) -> bool:
    """Raw rule-1 condition (no tie-break)."""
    lhs_front = s1_actors | front
    rhs_front = s2_actors | front
    if rhs_front & ~lhs_front:
        return False
    return not (s1_actors | back) & ~(s2_actors | back)


def dominated_rule2(
    inst: Instance, s1_actors: int, s2_actors: int, front: int, back: int
) -> bool:
    """Rule-2 condition: front superset plus a strictly positive wage margin."""
    lhs_front = s1_actors | front
    rhs_front = s2_actors | front
    if rhs_front & ~lhs_front:
        return False
    gain = total_wage(inst, lhs_front & (s2_actors | back))
    loss = total_wage(inst, rhs_front)
    return gain - loss > 0


def is_dominated(
    inst: Instance,
    node: SearchNode,
    scene: int,
    use_rule1: bool = True,
    use_rule2: bool = True,
) -> bool:
    """Whether branching on ``scene`` is dominated by any other remaining
    scene.  Competitors are scanned in ascending id; rule 1 is tried first."""
    if not node.remaining >> scene & 1:
        raise ValueError(f"scene {scene} is not in the node's remaining set")
    active = node.active_actors if node.active_actors is not None else inst.all_actors
    front_set = mask_of(node.front)
    back_set = mask_of(node.back)
    a_front = actors_of_scenes(inst, front_set)
    a_back = actors_of_scenes(inst, back_set)
    front = a_front & actors_of_scenes(inst, back_set | node.remaining) & active
    back = a_back & actors_of_scenes(inst, front_set | node.remaining) & active

    s1 = inst.scene_actors[scene] & active
    for other in bits(node.remaining & ~(1 << scene)):
        s2 = inst.scene_actors[other] & active
        if use_rule1 and dominated_rule1(s1, s2, front, back):
            # mutual domination: keep only the smaller-id branch
            if other < scene or not dominated_rule1(s2, s1, front, back):
                return True
        if use_rule2 and dominated_rule2(inst, s1, s2, front, back):
            return True
    return False
