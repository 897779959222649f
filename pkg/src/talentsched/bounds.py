"""Lower bounds on the holding cost still to come at a search node.

Only actors anchored at exactly one block can be forced to wait while the
middle scenes run, so bounding works on the set of actors on location at
the front or at the back (minus the ones fixed on both sides).  For every
pair of such actors a constant lower bound on the sum of their two waiting
costs follows from a small case analysis; the per-pair constraints are then
combined into two cheap global bounds:

* ``lb_sum``      -- add every pairwise constraint; each variable appears
                     (k-1) times, so dividing the constant total by (k-1)
                     bounds the sum of all waits.  Rounded up (all wages and
                     durations are integers, so the true optimum is too).
* ``lb_greedy_matching`` -- walk the constants largest first and keep each
                     one whose two actors are both unused so far; disjoint
                     pairs add up to a valid bound.

The solver takes the larger of the two.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .instance import Instance, actors_of_scenes, bits, mask_of
from .cost import SearchNode


@dataclass(frozen=True)
class PairwiseBounds:
    """Constraint constants over unordered pairs of the relevant actors:
    ``constants[(i, j)]`` with i < j bounds the two actors' combined wait."""

    relevant_actors: int
    constants: dict[tuple[int, int], int] = field(default_factory=dict)


def _node_context(inst: Instance, node: SearchNode):
    front_set = mask_of(node.front)
    back_set = mask_of(node.back)
    a_front = actors_of_scenes(inst, front_set)
    a_back = actors_of_scenes(inst, back_set)
    front_onloc = a_front & actors_of_scenes(inst, back_set | node.remaining)
    back_onloc = a_back & actors_of_scenes(inst, front_set | node.remaining)
    fixed = a_front & a_back
    return front_onloc & ~fixed, back_onloc & ~fixed


def _pair_constant(
    inst: Instance,
    remaining: int,
    front_side: int,
    back_side: int,
    i: int,
    j: int,
) -> int:
    """Joint wait bound for actors i and j given which side anchors each."""
    qi = inst.actor_scenes[i] & remaining
    qj = inst.actor_scenes[j] & remaining
    wi, wj = inst.wages[i], inst.wages[j]
    durations = inst.durations

    i_front = bool(front_side >> i & 1)
    j_front = bool(front_side >> j & 1)
    if i_front == j_front:
        # same side: one of the two must sit through the other's private scenes
        d_only_i = sum(durations[s] for s in bits(qi & ~qj))
        d_only_j = sum(durations[s] for s in bits(qj & ~qi))
        return min(wj * d_only_i, wi * d_only_j)
    # opposite sides: only scenes needing both force their spans to overlap,
    # and then one of them covers every scene needing neither
    if qi & qj == 0:
        return 0
    d_neither = sum(durations[s] for s in bits(remaining & ~qi & ~qj))
    return min(wi, wj) * d_neither


def relevant_actors(inst: Instance, node: SearchNode) -> int:
    """Actors whose middle-block wait can be bounded from this node."""
    front_only, back_only = _node_context(inst, node)
    return front_only | back_only


def pairwise_constant(inst: Instance, node: SearchNode, i: int, j: int) -> int:
    """Constraint constant for one unordered actor pair of the node."""
    front_only, back_only = _node_context(inst, node)
    both = front_only | back_only
    if i == j or not both >> i & 1 or not both >> j & 1:
        raise ValueError("both actors must be distinct members of the node's relevant set")
    return _pair_constant(inst, node.remaining, front_only, back_only, i, j)


def pairwise_bounds(inst: Instance, node: SearchNode) -> PairwiseBounds:
    """Full constant table over the node's relevant actors."""
    front_only, back_only = _node_context(inst, node)
    actors = sorted(bits(front_only | back_only))
    constants = {}
    for a in range(len(actors)):
        for b in range(a + 1, len(actors)):
            i, j = actors[a], actors[b]
            constants[(i, j)] = _pair_constant(
                inst, node.remaining, front_only, back_only, i, j
            )
    return PairwiseBounds(front_only | back_only, constants)


def lb_sum(pb: PairwiseBounds) -> int:
    """Averaging bound: total of all pair constants divided by (k-1), k the
    number of relevant actors; 0 when fewer than two actors.  Rounded up."""
    k = pb.relevant_actors.bit_count()
    if k < 2:
        return 0
    total = sum(pb.constants.values())
    return -(-total // (k - 1))


def lb_greedy_matching(pb: PairwiseBounds) -> int:
    """Matching bound: scan constants largest first (ties by ascending actor
    pair) and add each one whose actors are both still unmarked."""
    marked = 0
    total = 0
    for (i, j), value in sorted(
        pb.constants.items(), key=lambda kv: (-kv[1], kv[0])
    ):
        if value <= 0:
            break
        if marked >> i & 1 or marked >> j & 1:
            continue
        total += value
        marked |= (1 << i) | (1 << j)
    return total


def future_lower(inst: Instance, node: SearchNode) -> int:
    """Best available lower bound on the holding cost the middle scenes must
    still incur; never exceeds the true minimum."""
    pb = pairwise_bounds(inst, node)
    if not pb.constants:
        return 0
    return max(lb_sum(pb), lb_greedy_matching(pb))
