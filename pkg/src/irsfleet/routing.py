"""Fleet trajectories across epochs: per-transition assignment plus depot legs.

The travel objective is additive over consecutive-epoch transitions and
each transition's constraint set is an independent permutation polytope,
so chaining exact per-transition assignments is jointly optimal (the test
suite cross-checks this against a joint brute force). Depot legs are
assignment-independent because every unit starts and ends at the one base
station; they are reported but not optimized.
"""

from dataclasses import dataclass

import numpy as np

from .energy import EnergyLedger, PlatformParams, mission_ledger
from .geometry import ScenarioLayout
from .matching import min_cost_matching
from .planner import PlacementPlan, PlanValidationError

__all__ = [
    "TransitionCosts",
    "TrajectoryPlan",
    "transition_costs",
    "min_cost_assignment",
    "plan_trajectories",
    "validate_trajectory",
]


@dataclass(frozen=True, eq=False)
class TransitionCosts:
    """Planar travel distances between occupied sites of consecutive epochs.

    Rows and columns follow the sorted site order of the earlier and later
    epoch respectively; `site_order` keeps those per-epoch site index
    tuples for chaining.
    """

    between: np.ndarray      # (epochs - 1, M, M) metres
    depot_out: np.ndarray    # (M,) base station to epoch-1 sites
    depot_back: np.ndarray   # (M,) final-epoch sites back to base station
    site_order: tuple[tuple[int, ...], ...]


def _epoch_sites(plan: PlacementPlan, m: int) -> list[tuple[int, ...]]:
    sites = []
    for t, epoch_pairs in enumerate(plan.assignments):
        occupied = sorted(site for _, site in epoch_pairs)
        if len(occupied) != m or len(set(occupied)) != m:
            raise PlanValidationError(
                f"occupancy: epoch {t + 1} does not occupy exactly {m} "
                f"distinct sites"
            )
        sites.append(tuple(occupied))
    return sites


def transition_costs(plan: PlacementPlan, layout: ScenarioLayout) -> TransitionCosts:
    """Distance matrices for every consecutive epoch pair plus depot legs."""
    if not plan.assignments:
        raise PlanValidationError("occupancy: plan has no epochs")
    m = len(plan.assignments[0])
    order = _epoch_sites(plan, m)
    coords = [layout.candidate_sites[list(sites)] for sites in order]
    bs = layout.bs_position
    between = np.zeros((len(order) - 1, m, m))
    for t in range(len(order) - 1):
        diff = coords[t][:, None, :] - coords[t + 1][None, :, :]
        between[t] = np.hypot(diff[..., 0], diff[..., 1])
    depot_out = np.hypot(coords[0][:, 0] - bs[0], coords[0][:, 1] - bs[1])
    depot_back = np.hypot(coords[-1][:, 0] - bs[0], coords[-1][:, 1] - bs[1])
    return TransitionCosts(
        between=between,
        depot_out=depot_out,
        depot_back=depot_back,
        site_order=tuple(order),
    )


def min_cost_assignment(cost) -> tuple[np.ndarray, float]:
    """Exact minimum-cost permutation of a square nonnegative matrix.

    Ties are broken toward the lexicographically smallest permutation:
    after the optimum is known, each row in turn takes the lowest column
    that still admits an optimal completion. Returns (permutation, total).
    """
    c = np.asarray(cost, dtype=float)
    if c.ndim != 2 or c.shape[0] != c.shape[1]:
        raise ValueError("assignment requires a square cost matrix")
    m = c.shape[0]
    if m == 0:
        return np.zeros(0, dtype=int), 0.0
    if not np.isfinite(c).all() or (c < 0).any():
        raise ValueError("assignment costs must be finite and nonnegative")

    _, best = min_cost_matching(c, m)
    tol = 1e-9 * max(1.0, abs(best))
    perm = np.full(m, -1, dtype=int)
    available = list(range(m))
    prefix = 0.0
    for i in range(m):
        rest_rows = np.arange(i + 1, m)
        for pos, j in enumerate(available):
            rest_cols = available[:pos] + available[pos + 1 :]
            sub = c[np.ix_(rest_rows, np.asarray(rest_cols, dtype=int))]
            _, completion = min_cost_matching(sub, m - i - 1)
            if prefix + c[i, j] + completion <= best + tol:
                perm[i] = j
                prefix += c[i, j]
                available.pop(pos)
                break
        else:  # pragma: no cover - an optimal completion always exists
            raise RuntimeError("failed to extend an optimal assignment prefix")
    total = float(c[np.arange(m), perm].sum())
    return perm, total


@dataclass(frozen=True, eq=False)
class TrajectoryPlan:
    """Site sequence, travel legs and energy ledger for every unit.

    Legs per unit: depot departure, the epoch transitions, depot return;
    `cumulative_m` is the running total after each leg.
    """

    routes: np.ndarray         # (M, epochs) global site indices
    leg_m: np.ndarray          # (M, epochs + 1) metres
    cumulative_m: np.ndarray   # (M, epochs + 1) metres
    total_distance_m: float
    ledgers: tuple[EnergyLedger, ...]
    feasible: bool


def plan_trajectories(
    plan: PlacementPlan,
    layout: ScenarioLayout,
    platform: PlatformParams,
) -> TrajectoryPlan:
    """Assign units to sites epoch by epoch, minimizing total travel.

    Unit k starts at the k-th occupied site of epoch one (sorted order);
    every transition is an exact assignment. Flags any unit whose mission
    energy, including depot legs, exceeds the battery.
    """
    costs = transition_costs(plan, layout)
    order = costs.site_order
    m = len(order[0])
    epochs = len(order)

    routes = np.zeros((m, epochs), dtype=int)
    legs = np.zeros((m, epochs + 1))
    routes[:, 0] = order[0]
    legs[:, 0] = costs.depot_out

    # Position of each unit's current site within the sorted epoch order.
    unit_row = np.arange(m)
    for t in range(epochs - 1):
        perm, _ = min_cost_assignment(costs.between[t])
        next_cols = perm[unit_row]
        legs[:, t + 1] = costs.between[t][unit_row, next_cols]
        routes[:, t + 1] = np.asarray(order[t + 1])[next_cols]
        unit_row = next_cols

    back = np.hypot(
        layout.candidate_sites[routes[:, -1], 0] - layout.bs_position[0],
        layout.candidate_sites[routes[:, -1], 1] - layout.bs_position[1],
    )
    legs[:, epochs] = back

    cumulative = np.cumsum(legs, axis=1)
    ledgers = tuple(
        mission_ledger(float(cumulative[k, -1]), platform) for k in range(m)
    )
    return TrajectoryPlan(
        routes=routes,
        leg_m=legs,
        cumulative_m=cumulative,
        total_distance_m=float(legs.sum()),
        ledgers=ledgers,
        feasible=all(ledger.feasible for ledger in ledgers),
    )


def validate_trajectory(
    trajectory: TrajectoryPlan,
    plan: PlacementPlan,
    layout: ScenarioLayout,
) -> None:
    """Independent consistency check of a trajectory against its plan.

    Confirms that routing never alters the placement (per-epoch site
    multisets match), that every leg is the planar distance it claims,
    that cumulative distances are nondecreasing, and that the total is
    conserved. Raises PlanValidationError on any violation.
    """
    m, epochs = trajectory.routes.shape
    if len(plan.assignments) != epochs:
        raise PlanValidationError("trajectory epoch count differs from plan")
    for t in range(epochs):
        planned = sorted(site for _, site in plan.assignments[t])
        routed = sorted(trajectory.routes[:, t].tolist())
        if planned != routed:
            raise PlanValidationError(
                f"occupancy: trajectory epoch {t + 1} visits different sites "
                f"than the plan"
            )
        if len(set(routed)) != m:
            raise PlanValidationError(
                f"site-exclusivity: two units share a site at epoch {t + 1}"
            )
    coords = layout.candidate_sites
    bs = layout.bs_position
    for k in range(m):
        points = [bs] + [coords[s] for s in trajectory.routes[k]] + [bs]
        for leg in range(epochs + 1):
            expect = float(np.hypot(*(points[leg + 1] - points[leg])))
            if abs(expect - trajectory.leg_m[k, leg]) > 1e-6:
                raise PlanValidationError(
                    f"leg-distance: unit {k} leg {leg} is not the planar "
                    f"distance between its endpoints"
                )
    if np.any(np.diff(trajectory.cumulative_m, axis=1) < -1e-9):
        raise PlanValidationError("cumulative distance decreases along a route")
    if abs(trajectory.leg_m.sum() - trajectory.total_distance_m) > 1e-6:
        raise PlanValidationError("total distance does not equal the leg sum")
