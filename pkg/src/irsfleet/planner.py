"""Demand-gated gain tensor and the serving-area / anchoring-site optimizers.

The placement problem decouples across epochs (no constraint links two
epochs), so each epoch is an exact cardinality-constrained matching on the
weak-cell x site bipartite graph with edge cost 1 - gain. The reported
objective follows the convention that an unserved weak cell earns unit
gain: 1 + (selected gain excess) / (epochs * weak cells).
"""

from dataclasses import dataclass

import numpy as np

from .channel import ChannelRealization, RadioParams, cascaded_snr_db, snr_ratio
from .geometry import DistanceTables
from .matching import min_cost_matching
from .traffic import TrafficField

__all__ = [
    "GainTensor",
    "PlacementPlan",
    "PlanEvaluation",
    "InfeasiblePlacementError",
    "PlanValidationError",
    "SamplingExhaustedError",
    "STRATEGY_ROBOTIC",
    "STRATEGY_TERRESTRIAL",
    "STRATEGY_RANDOM",
    "build_gain_tensor",
    "solve_epoch_placement",
    "solve_adaptive_plan",
    "solve_fixed_plan",
    "solve_random_plan",
    "evaluate_plan",
    "validate_plan",
]

STRATEGY_ROBOTIC = "robotic"
STRATEGY_TERRESTRIAL = "terrestrial"
STRATEGY_RANDOM = "random"
FIXED_STRATEGIES = (STRATEGY_TERRESTRIAL, STRATEGY_RANDOM)

TERRESTRIAL_MODES = ("epoch1", "clairvoyant")
RANDOM_MODES = ("direct", "rejection")


class InfeasiblePlacementError(RuntimeError):
    """The requested fleet size cannot be placed on this instance."""


class PlanValidationError(ValueError):
    """A placement plan violates one of its structural constraints."""


class SamplingExhaustedError(RuntimeError):
    """Rejection sampling hit its iteration cap without a feasible draw."""


@dataclass(frozen=True, eq=False)
class GainTensor:
    """Gated gains over (epoch, weak cell, candidate site).

    Entries are the aggregated-over-direct SNR ratio where the cell's
    demand meets the epoch threshold, and exactly 1 otherwise. The demand
    slice of the weak cells rides along for serving-traffic metrics.
    """

    gains: np.ndarray        # (epochs, n_weak, n_sites), every entry >= 1
    weak_grids: np.ndarray   # (n_weak,) global cell indices, sorted
    sites: np.ndarray        # (n_sites,) global site indices
    demand: np.ndarray       # (epochs, n_weak) Mbps/km^2
    thresholds: np.ndarray   # (epochs,) Mbps/km^2

    @property
    def n_epochs(self) -> int:
        return self.gains.shape[0]

    @property
    def n_weak(self) -> int:
        return self.gains.shape[1]

    @property
    def n_sites(self) -> int:
        return self.gains.shape[2]


@dataclass(frozen=True)
class PlacementPlan:
    """Per-epoch service pairs; fixed strategies repeat epoch one."""

    strategy: str
    assignments: tuple[tuple[tuple[int, int], ...], ...]  # (grid, site), global
    objective: float
    matching_weight: float  # total selected (gain - 1) across epochs


@dataclass(frozen=True, eq=False)
class PlanEvaluation:
    objective: float
    matching_weight: float
    served_traffic: np.ndarray  # (epochs,) summed demand of served cells


def build_gain_tensor(
    realization: ChannelRealization,
    distances: DistanceTables,
    field: TrafficField,
    params: RadioParams,
) -> GainTensor:
    """Assemble gated gains for every weak cell against every site.

    An empty weak set yields an empty tensor (any placement is then
    trivially empty); solvers reject positive fleet sizes against it.
    """
    weak = np.asarray(realization.weak_set, dtype=int)
    n_sites = distances.r_bs_site.shape[0]
    epochs = field.demand.shape[0]
    if weak.size == 0:
        return GainTensor(
            gains=np.ones((epochs, 0, n_sites)),
            weak_grids=weak,
            sites=np.arange(n_sites),
            demand=np.zeros((epochs, 0)),
            thresholds=np.asarray(field.threshold, dtype=float),
        )
    gamma_c = cascaded_snr_db(
        distances.r_bs_site[None, :], distances.d_site_ut[weak], params
    )
    base = snr_ratio(realization.direct_snr_db[weak][:, None], gamma_c)
    demand = field.demand[:, weak]
    gated = demand[:, :, None] >= field.threshold[:, None, None]
    gains = np.where(gated, base[None, :, :], 1.0)
    return GainTensor(
        gains=gains,
        weak_grids=weak,
        sites=np.arange(n_sites),
        demand=demand,
        thresholds=np.asarray(field.threshold, dtype=float),
    )


def solve_epoch_placement(gains, m: int) -> tuple[list[tuple[int, int]], float]:
    """Exact best placement of m units for one epoch's gain matrix.

    Maximizes the summed gain excess subject to one site per unit and one
    unit per cell, with exactly m placements. Returns (local (cell, site)
    pairs sorted by cell, total gain excess). Zero-excess ties resolve to
    the lowest (cell, site) indices.
    """
    g = np.asarray(gains, dtype=float)
    if g.ndim != 2:
        raise ValueError("epoch gains must be a 2-D matrix")
    if m > min(g.shape):
        raise InfeasiblePlacementError(
            f"cannot place {m} units on {g.shape[0]} weak cells x "
            f"{g.shape[1]} sites"
        )
    pairs, total = min_cost_matching(1.0 - g, m)
    return pairs, -total


def _to_global(tensor: GainTensor, pairs) -> tuple[tuple[int, int], ...]:
    return tuple(
        (int(tensor.weak_grids[q]), int(tensor.sites[j])) for q, j in pairs
    )


def _objective(weight: float, epochs: int, n_weak: int) -> float:
    if n_weak == 0:
        return 1.0
    return 1.0 + weight / (epochs * n_weak)


def solve_adaptive_plan(tensor: GainTensor, m: int) -> PlacementPlan:
    """Exact epoch-by-epoch optimum; units may relocate freely."""
    assignments = []
    weight = 0.0
    for t in range(tensor.n_epochs):
        pairs, w = solve_epoch_placement(tensor.gains[t], m)
        weight += w
        assignments.append(_to_global(tensor, pairs))
    return PlacementPlan(
        strategy=STRATEGY_ROBOTIC,
        assignments=tuple(assignments),
        objective=_objective(weight, tensor.n_epochs, tensor.n_weak),
        matching_weight=weight,
    )


def _replicated_plan(tensor: GainTensor, pairs, strategy: str) -> PlacementPlan:
    epoch_pairs = _to_global(tensor, pairs)
    weight = 0.0
    local = list(pairs)
    for t in range(tensor.n_epochs):
        weight += float(sum(tensor.gains[t, q, j] - 1.0 for q, j in local))
    return PlacementPlan(
        strategy=strategy,
        assignments=tuple(epoch_pairs for _ in range(tensor.n_epochs)),
        objective=_objective(weight, tensor.n_epochs, tensor.n_weak),
        matching_weight=weight,
    )


def solve_fixed_plan(
    tensor: GainTensor,
    m: int,
    mode: str = "epoch1",
) -> PlacementPlan:
    """Best placement that never relocates.

    "epoch1" optimizes the first epoch alone and keeps that assignment;
    "clairvoyant" optimizes the epoch-summed gain excess (the best possible
    fixed placement, never worse than epoch1).
    """
    if mode not in TERRESTRIAL_MODES:
        raise ValueError(f"terrestrial mode must be one of {TERRESTRIAL_MODES}")
    if tensor.n_epochs < 1:
        raise ValueError("tensor must cover at least one epoch")
    if mode == "epoch1":
        pairs, _ = solve_epoch_placement(tensor.gains[0], m)
    else:
        summed = (tensor.gains - 1.0).sum(axis=0)
        if m > min(summed.shape):
            raise InfeasiblePlacementError(
                f"cannot place {m} units on {summed.shape[0]} weak cells x "
                f"{summed.shape[1]} sites"
            )
        pairs, _ = min_cost_matching(-summed, m)
    return _replicated_plan(tensor, pairs, STRATEGY_TERRESTRIAL)


def solve_random_plan(
    tensor: GainTensor,
    m: int,
    rng: np.random.Generator,
    mode: str = "direct",
    max_iterations: int = 10_000,
) -> PlacementPlan:
    """Uniformly random feasible placement, fixed across epochs.

    "direct" samples a feasible support outright; "rejection" redraws m
    cells of the whole grid until the exclusivity constraints hold, with a
    hard iteration cap. Both induce the same uniform distribution over
    feasible supports.
    """
    if mode not in RANDOM_MODES:
        raise ValueError(f"random mode must be one of {RANDOM_MODES}")
    n_weak, n_sites = tensor.n_weak, tensor.n_sites
    if m > min(n_weak, n_sites):
        raise InfeasiblePlacementError(
            f"cannot place {m} units on {n_weak} weak cells x {n_sites} sites"
        )
    if m == 0:
        pairs: list[tuple[int, int]] = []
    elif mode == "direct":
        cells = np.sort(rng.choice(n_weak, size=m, replace=False))
        sites = rng.choice(n_sites, size=m, replace=False)
        pairs = list(zip(cells.tolist(), sites.tolist()))
    else:
        for _ in range(max_iterations):
            flat = rng.choice(n_weak * n_sites, size=m, replace=False)
            rows, cols = np.divmod(flat, n_sites)
            if len(set(rows.tolist())) == m and len(set(cols.tolist())) == m:
                order = np.argsort(rows)
                pairs = list(zip(rows[order].tolist(), cols[order].tolist()))
                break
        else:
            raise SamplingExhaustedError(
                f"no feasible support found in {max_iterations} iterations"
            )
    return _replicated_plan(tensor, pairs, STRATEGY_RANDOM)


def _local_indices(tensor: GainTensor, epoch_pairs) -> list[tuple[int, int]]:
    grid_pos = {int(g): q for q, g in enumerate(tensor.weak_grids)}
    site_pos = {int(s): j for j, s in enumerate(tensor.sites)}
    out = []
    for grid, site in epoch_pairs:
        if grid not in grid_pos:
            raise PlanValidationError(
                f"membership: cell {grid} is not in the weak-coverage set"
            )
        if site not in site_pos:
            raise PlanValidationError(f"membership: unknown site index {site}")
        out.append((grid_pos[grid], site_pos[site]))
    return out


def validate_plan(plan: PlacementPlan, tensor: GainTensor, m: int) -> None:
    """Independent structural check of a plan against its tensor.

    Verifies the exact placement count, cell and site exclusivity within
    each epoch, index membership, and (for fixed strategies) that the
    assignment never changes across epochs. Raises PlanValidationError
    naming the violated constraint.
    """
    if len(plan.assignments) != tensor.n_epochs:
        raise PlanValidationError(
            f"epoch-count: plan has {len(plan.assignments)} epochs, "
            f"tensor has {tensor.n_epochs}"
        )
    for t, epoch_pairs in enumerate(plan.assignments):
        if len(epoch_pairs) != m:
            raise PlanValidationError(
                f"placement-count: epoch {t + 1} has {len(epoch_pairs)} pairs, "
                f"expected exactly {m}"
            )
        local = _local_indices(tensor, epoch_pairs)
        grids = [q for q, _ in local]
        sites = [j for _, j in local]
        if len(set(grids)) != len(grids):
            raise PlanValidationError(
                f"cell-exclusivity: epoch {t + 1} serves a cell more than once"
            )
        if len(set(sites)) != len(sites):
            raise PlanValidationError(
                f"site-exclusivity: epoch {t + 1} occupies a site more than once"
            )
    if plan.strategy in FIXED_STRATEGIES:
        first = set(plan.assignments[0]) if plan.assignments else set()
        for t, epoch_pairs in enumerate(plan.assignments[1:], start=2):
            if set(epoch_pairs) != first:
                raise PlanValidationError(
                    f"fixed-placement: epoch {t} differs from epoch 1 under a "
                    f"non-relocating strategy"
                )


def evaluate_plan(plan: PlacementPlan, tensor: GainTensor) -> PlanEvaluation:
    """Recompute the objective and the served demand of a plan.

    Validates feasibility first (with the placement count taken from the
    plan itself), so an infeasible plan raises rather than scoring.
    """
    m = len(plan.assignments[0]) if plan.assignments else 0
    validate_plan(plan, tensor, m)
    weight = 0.0
    served = np.zeros(tensor.n_epochs)
    for t, epoch_pairs in enumerate(plan.assignments):
        local = _local_indices(tensor, epoch_pairs)
        for q, j in local:
            weight += float(tensor.gains[t, q, j]) - 1.0
            served[t] += float(tensor.demand[t, q])
    return PlanEvaluation(
        objective=_objective(weight, tensor.n_epochs, tensor.n_weak),
        matching_weight=weight,
        served_traffic=served,
    )
