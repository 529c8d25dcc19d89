"""Per-unit energy accounting and far-field-driven surface sizing.

A unit spends propulsion energy only while relocating; grasping and
reflecting draw power for the whole service window (the brief relocation
gaps are ignored, which upper-bounds both terms).
"""

import math
from dataclasses import dataclass

__all__ = [
    "PlatformParams",
    "EnergyLedger",
    "IrsSizing",
    "SizingError",
    "fly_energy",
    "grasp_energy",
    "reflect_energy",
    "flight_range",
    "mission_ledger",
    "fraunhofer_distance",
    "size_irs",
]


class SizingError(ValueError):
    """No admissible surface dimension exists for the given clearance."""


@dataclass(frozen=True)
class PlatformParams:
    """Physical constants of one aerial unit.

    Masses are carried for configuration completeness; propulsion power is
    a constant, not derived from them.
    """

    mass_irs_kg: float = 0.1
    mass_uav_kg: float = 4.0
    mass_gripper_kg: float = 0.4
    p_fly_w: float = 253.6
    v_fly_mps: float = 10.0
    p_grasp_w: float = 10.0
    p_irs_w: float = 0.9
    battery_j: float = 799_200.0
    service_hours: float = 12.0

    def __post_init__(self) -> None:
        for name in (
            "mass_irs_kg",
            "mass_uav_kg",
            "mass_gripper_kg",
            "p_fly_w",
            "v_fly_mps",
            "p_grasp_w",
            "p_irs_w",
            "battery_j",
        ):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be positive")
        if self.service_hours < 0:
            raise ValueError("service_hours must be nonnegative")

    @property
    def service_seconds(self) -> float:
        return self.service_hours * 3600.0

    @property
    def total_mass_kg(self) -> float:
        return self.mass_irs_kg + self.mass_uav_kg + self.mass_gripper_kg


@dataclass(frozen=True)
class EnergyLedger:
    """Mission energy split for one unit; feasible iff the battery covers it."""

    e_fly_j: float
    e_grasp_j: float
    e_reflect_j: float
    residual_j: float
    feasible: bool


def fly_energy(distance_m: float, params: PlatformParams) -> float:
    """Propulsion energy for a horizontal relocation distance."""
    if distance_m < 0:
        raise ValueError("distance must be nonnegative")
    return params.p_fly_w * distance_m / params.v_fly_mps


def grasp_energy(params: PlatformParams) -> float:
    return params.p_grasp_w * params.service_seconds


def reflect_energy(params: PlatformParams) -> float:
    return params.p_irs_w * params.service_seconds


def flight_range(params: PlatformParams) -> float:
    """Distance the battery residual supports after grasping and reflecting.

    Clamped at zero when the static loads alone exhaust the battery.
    """
    residual = params.battery_j - grasp_energy(params) - reflect_energy(params)
    if residual <= 0:
        return 0.0
    return residual / params.p_fly_w * params.v_fly_mps


def mission_ledger(distance_m: float, params: PlatformParams) -> EnergyLedger:
    """Full accounting for one unit flying `distance_m` over the mission."""
    e_fly = fly_energy(distance_m, params)
    e_grasp = grasp_energy(params)
    e_reflect = reflect_energy(params)
    residual = params.battery_j - e_fly - e_grasp - e_reflect
    return EnergyLedger(
        e_fly_j=e_fly,
        e_grasp_j=e_grasp,
        e_reflect_j=e_reflect,
        residual_j=residual,
        feasible=residual >= 0,
    )


def fraunhofer_distance(n_r: int, wavelength_m: float) -> float:
    """Far-field boundary of a square surface with half-wavelength spacing:
    (wavelength / 2) * n_r^2."""
    if n_r < 1:
        raise ValueError("element count per side must be at least 1")
    if wavelength_m <= 0:
        raise ValueError("wavelength must be positive")
    return 0.5 * wavelength_m * n_r * n_r


@dataclass(frozen=True)
class IrsSizing:
    n_r: int
    n_elements: int
    fraunhofer_m: float


def size_irs(d_min_m: float, wavelength_m: float) -> IrsSizing:
    """Largest per-side element count, a multiple of 4, whose far-field
    boundary stays within the minimum transceiver clearance."""
    if d_min_m <= 0:
        raise ValueError("minimum clearance must be positive")
    if wavelength_m <= 0:
        raise ValueError("wavelength must be positive")
    n_r = int(math.sqrt(2.0 * d_min_m / wavelength_m) + 1e-9)
    while n_r > 0 and fraunhofer_distance(max(n_r, 1), wavelength_m) > d_min_m:
        n_r -= 1
    n_r -= n_r % 4
    if n_r < 4:
        raise SizingError(
            f"clearance {d_min_m} m admits no surface of at least 4x4 elements"
        )
    return IrsSizing(
        n_r=n_r,
        n_elements=n_r * n_r,
        fraunhofer_m=fraunhofer_distance(n_r, wavelength_m),
    )
