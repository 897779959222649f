"""Mixed-integer linear model of the problem, exported as LP-format text.

Variables (model scene indices run 0..n where 0 is a dummy scene closing
the tour; file scene k, 0-based, is model index k+1; actors keep 0-based
indices):

* ``x_i_j``  binary, scene j shot immediately after scene i
* ``t_j``    integer start day of scene j (first real scene starts at 0)
* ``e_i`` / ``l_i``  integer first/last shooting day needing actor i
* ``z_i_j``  linearization product t_j * x_i_j  (continuous)

Constraint families: one successor and one predecessor per scene; the
linearized chaining sum(z_i_*) = t_i + d_i; the four z envelope rows per
(i, j); and e_i <= t_j, t_j + d_j - 1 <= l_i for every required pair.
Actors required by no scene are left out of the objective entirely.

The objective sum c_i (l_i - e_i + 1) carries its constant term in the
LP file, matching the combinatorial total cost exactly.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .instance import Instance, bits
from .cost import Schedule, _check_schedule


@dataclass(frozen=True)
class Constraint:
    name: str
    coeffs: dict[str, int]
    sense: str  # "<=", ">=", "="
    rhs: int


@dataclass(frozen=True)
class MilpModel:
    inst: Instance
    big_l: int
    x_pairs: tuple[tuple[int, int], ...]
    z_pairs: tuple[tuple[int, int], ...]
    used_actors: tuple[int, ...]
    objective: dict[str, int]
    objective_constant: int
    constraints: tuple[Constraint, ...]
    binaries: tuple[str, ...]
    generals: tuple[str, ...]
    var_order: tuple[str, ...] = field(repr=False, default=())


def build_model(inst: Instance) -> MilpModel:
    n = inst.num_scenes
    dur = {j + 1: inst.durations[j] for j in range(n)}
    big_l = sum(inst.durations)
    used = tuple(i for i in range(inst.num_actors) if inst.actor_scenes[i])

    x_pairs = tuple(
        (i, j) for i in range(n + 1) for j in range(n + 1) if i != j
    )
    z_pairs = tuple(
        (i, j) for i in range(1, n + 1) for j in range(n + 1) if i != j
    )

    var_order: list[str] = []
    var_order += [f"x_{i}_{j}" for i, j in x_pairs]
    var_order += [f"t_{j}" for j in range(n + 1)]
    var_order += [f"e_{i}" for i in used]
    var_order += [f"l_{i}" for i in used]
    var_order += [f"z_{i}_{j}" for i, j in z_pairs]

    objective = {}
    constant = 0
    for i in used:
        objective[f"l_{i}"] = inst.wages[i]
        objective[f"e_{i}"] = -inst.wages[i]
        constant += inst.wages[i]

    cons: list[Constraint] = []
    for i in range(n + 1):
        cons.append(
            Constraint(
                f"succ_{i}",
                {f"x_{i}_{j}": 1 for j in range(n + 1) if j != i},
                "=",
                1,
            )
        )
    for j in range(n + 1):
        cons.append(
            Constraint(
                f"pred_{j}",
                {f"x_{i}_{j}": 1 for i in range(n + 1) if i != j},
                "=",
                1,
            )
        )
    for i in range(1, n + 1):
        coeffs = {f"z_{i}_{j}": 1 for j in range(n + 1) if j != i}
        coeffs[f"t_{i}"] = -1
        cons.append(Constraint(f"chain_{i}", coeffs, "=", dur[i]))
    for i, j in z_pairs:
        zv, tv, xv = f"z_{i}_{j}", f"t_{j}", f"x_{i}_{j}"
        cons.append(Constraint(f"zcapt_{i}_{j}", {zv: 1, tv: -1}, "<=", 0))
        cons.append(
            Constraint(f"zlink_{i}_{j}", {zv: 1, tv: -1, xv: -big_l}, ">=", -big_l)
        )
        cons.append(Constraint(f"zcapx_{i}_{j}", {zv: 1, xv: -big_l}, "<=", 0))
    for i in used:
        for j0 in bits(inst.actor_scenes[i]):
            j = j0 + 1
            cons.append(
                Constraint(f"estart_{i}_{j}", {f"e_{i}": 1, f"t_{j}": -1}, "<=", 0)
            )
            cons.append(
                Constraint(
                    f"lend_{i}_{j}", {f"t_{j}": 1, f"l_{i}": -1}, "<=", 1 - dur[j]
                )
            )

    binaries = tuple(f"x_{i}_{j}" for i, j in x_pairs)
    generals = (
        tuple(f"t_{j}" for j in range(n + 1))
        + tuple(f"e_{i}" for i in used)
        + tuple(f"l_{i}" for i in used)
    )
    return MilpModel(
        inst=inst,
        big_l=big_l,
        x_pairs=x_pairs,
        z_pairs=z_pairs,
        used_actors=used,
        objective=objective,
        objective_constant=constant,
        constraints=tuple(cons),
        binaries=binaries,
        generals=generals,
        var_order=tuple(var_order),
    )


def _render_terms(coeffs: dict[str, int]) -> str:
    parts = []
    for var, coef in coeffs.items():
        if coef == 0:
            continue
        sign = "-" if coef < 0 else "+"
        mag = abs(coef)
        term = var if mag == 1 else f"{mag} {var}"
        if not parts:
            parts.append(term if coef > 0 else f"- {term}")
        else:
            parts.append(f"{sign} {term}")
    return " ".join(parts) if parts else "0"


def render_model(model: MilpModel) -> str:
    inst = model.inst
    lines = [
        f"\\ talent scheduling MILP: {inst.num_scenes} scenes, {inst.num_actors} actors",
        "\\ scene index 0 is the tour-closing dummy; file scene k is index k+1",
        "Minimize",
    ]
    obj = _render_terms(model.objective)
    if model.objective_constant:
        obj += f" + {model.objective_constant}"
    lines.append(f" obj: {obj}")
    lines.append("Subject To")
    for c in model.constraints:
        lines.append(f" {c.name}: {_render_terms(c.coeffs)} {c.sense} {c.rhs}")
    lines.append("Generals")
    lines.append(" " + " ".join(model.generals))
    lines.append("Binaries")
    lines.append(" " + " ".join(model.binaries))
    lines.append("End")
    return "\n".join(lines) + "\n"


def export_milp(inst: Instance) -> str:
    """LP-format text of the instance's sequencing model."""
    return render_model(build_model(inst))


def build_assignment(model: MilpModel, sched: Schedule) -> dict[str, int]:
    """Variable values implied by a schedule: the successor cycle through the
    dummy, cumulative start days, actor windows, and the z products."""
    inst = model.inst
    _check_schedule(inst, sched)
    n = inst.num_scenes

    values = {name: 0 for name in model.var_order}
    start = {}
    day = 0
    for s in sched.order:
        start[s + 1] = day
        day += inst.durations[s]
    start[0] = day  # dummy scene begins after the whole shoot

    chain = [0] + [s + 1 for s in sched.order] + [0]
    for prev, nxt in zip(chain, chain[1:]):
        values[f"x_{prev}_{nxt}"] = 1
    for j in range(n + 1):
        values[f"t_{j}"] = start[j]
    for i, j in model.z_pairs:
        if values[f"x_{i}_{j}"]:
            values[f"z_{i}_{j}"] = start[j]
    for i in model.used_actors:
        days = [
            (start[j + 1], start[j + 1] + inst.durations[j] - 1)
            for j in bits(inst.actor_scenes[i])
        ]
        values[f"e_{i}"] = min(d[0] for d in days)
        values[f"l_{i}"] = max(d[1] for d in days)
    return values


def check_assignment(
    model: MilpModel, values: dict[str, int]
) -> tuple[bool, int, str | None]:
    """Evaluate every constraint; returns (feasible, objective, first
    violated constraint name)."""
    for c in model.constraints:
        lhs = sum(coef * values[var] for var, coef in c.coeffs.items())
        ok = (
            lhs <= c.rhs
            if c.sense == "<="
            else lhs >= c.rhs if c.sense == ">=" else lhs == c.rhs
        )
        if not ok:
            return False, 0, c.name
    for name in model.var_order:
        if values[name] < 0:
            return False, 0, f"nonneg_{name}"
    objective = model.objective_constant + sum(
        coef * values[var] for var, coef in model.objective.items()
    )
    return True, objective, None


def validate_assignment(model: MilpModel, sched: Schedule) -> tuple[bool, int]:
    """Whether the schedule's implied assignment satisfies the model, and its
    objective value (equals the schedule's total cost when feasible)."""
    feasible, objective, _ = check_assignment(model, build_assignment(model, sched))
    return feasible, objective
