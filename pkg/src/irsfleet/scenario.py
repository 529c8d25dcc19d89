"""Scenario files: flat key = value sections holding every model parameter.

Every default is embedded and overridable; unknown sections or keys are
errors so typos cannot silently fall back to defaults.
"""

import configparser
from dataclasses import dataclass, field
from pathlib import Path

from .channel import NLOS_RULES, RadioParams
from .energy import PlatformParams
from .geometry import ScenarioLayout, build_layout
from .traffic import TrafficModel

__all__ = [
    "ScenarioError",
    "GeometryConfig",
    "SolverOptions",
    "Scenario",
    "default_scenario",
    "load_scenario",
    "write_scenario",
]


class ScenarioError(ValueError):
    """Malformed scenario file or inconsistent parameter values."""


@dataclass(frozen=True)
class GeometryConfig:
    grid_rows: int = 9
    grid_cols: int = 9
    cell_side_m: float = 20.0
    h1_m: float = 8.5
    h2_m: float = 2.0
    h3_m: float = 10.5


@dataclass(frozen=True)
class SolverOptions:
    fleet_size: int = 10
    terrestrial_mode: str = "epoch1"       # or "clairvoyant"
    random_mode: str = "direct"            # or "rejection"
    random_max_iterations: int = 10_000

    def __post_init__(self) -> None:
        if self.fleet_size < 0:
            raise ScenarioError("fleet_size must be nonnegative")
        if self.terrestrial_mode not in ("epoch1", "clairvoyant"):
            raise ScenarioError("terrestrial_mode must be epoch1 or clairvoyant")
        if self.random_mode not in ("direct", "rejection"):
            raise ScenarioError("random_mode must be direct or rejection")
        if self.random_max_iterations < 1:
            raise ScenarioError("random_max_iterations must be positive")


@dataclass(frozen=True)
class Scenario:
    geometry: GeometryConfig = field(default_factory=GeometryConfig)
    radio: RadioParams = field(default_factory=RadioParams)
    platform: PlatformParams = field(default_factory=PlatformParams)
    traffic: TrafficModel = field(default_factory=TrafficModel)
    solver: SolverOptions = field(default_factory=SolverOptions)

    def layout(self) -> ScenarioLayout:
        g = self.geometry
        return build_layout(
            g.grid_rows, g.grid_cols, g.cell_side_m, (g.h1_m, g.h2_m, g.h3_m)
        )


def default_scenario() -> Scenario:
    return Scenario()


def _parse_bool(raw: str) -> bool:
    value = raw.strip().lower()
    if value in ("true", "yes", "on", "1"):
        return True
    if value in ("false", "no", "off", "0"):
        return False
    raise ValueError(f"not a boolean: {raw!r}")


def _parse_float_list(raw: str) -> tuple[float, ...]:
    return tuple(float(part) for part in raw.split(",") if part.strip())


def _parse_choice(options: tuple[str, ...]):
    def parse(raw: str) -> str:
        value = raw.strip()
        if value not in options:
            raise ValueError(f"must be one of {options}, got {raw!r}")
        return value

    return parse


# section -> key -> (converter, target dataclass field)
_SCHEMA: dict[str, dict[str, tuple]] = {
    "geometry": {
        "grid_rows": (int, "grid_rows"),
        "grid_cols": (int, "grid_cols"),
        "cell_side_m": (float, "cell_side_m"),
        "h1_m": (float, "h1_m"),
        "h2_m": (float, "h2_m"),
        "h3_m": (float, "h3_m"),
    },
    "radio": {
        "carrier_freq_hz": (float, "carrier_freq_hz"),
        "tx_power_dbm": (float, "tx_power_dbm"),
        "noise_power_dbm": (float, "noise_power_dbm"),
        "a_d_db": (float, "a_d_db"),
        "a_t_db": (float, "a_t_db"),
        "a_r_db": (float, "a_r_db"),
        "eta1": (float, "eta1"),
        "eta2": (float, "eta2"),
        "eta3": (float, "eta3"),
        "k_d_db": (float, "k_d_db"),
        "k_c_db": (float, "k_c_db"),
        "snr_threshold_db": (float, "snr_threshold_db"),
        "n_elements": (int, "n_elements"),
        "nlos_rule": (_parse_choice(NLOS_RULES), "nlos_rule"),
        "cascade_mean_in_denominator": (_parse_bool, "cascade_mean_in_denominator"),
    },
    "platform": {
        "mass_irs_kg": (float, "mass_irs_kg"),
        "mass_uav_kg": (float, "mass_uav_kg"),
        "mass_gripper_kg": (float, "mass_gripper_kg"),
        "p_fly_w": (float, "p_fly_w"),
        "v_fly_mps": (float, "v_fly_mps"),
        "p_grasp_w": (float, "p_grasp_w"),
        "p_irs_w": (float, "p_irs_w"),
        "battery_j": (float, "battery_j"),
        "service_hours": (float, "service_hours"),
    },
    "traffic": {
        "base_mean_mbps_km2": (float, "base_mean"),
        "sigma_log": (float, "sigma_log"),
        "epochs": (int, "epochs"),
        "epoch_profile": (_parse_float_list, "epoch_profile"),
        "threshold_fraction": (float, "threshold_fraction"),
        "epoch_sampling": (_parse_choice(("independent",)), None),
    },
    "solver": {
        "fleet_size": (int, "fleet_size"),
        "terrestrial_mode": (_parse_choice(("epoch1", "clairvoyant")), "terrestrial_mode"),
        "random_mode": (_parse_choice(("direct", "rejection")), "random_mode"),
        "random_max_iterations": (int, "random_max_iterations"),
    },
}

_SECTION_TYPES = {
    "geometry": GeometryConfig,
    "radio": RadioParams,
    "platform": PlatformParams,
    "traffic": TrafficModel,
    "solver": SolverOptions,
}


def load_scenario(path) -> Scenario:
    """Read a scenario file, applying defaults for anything unspecified."""
    path = Path(path)
    parser = configparser.ConfigParser(inline_comment_prefixes=("#", ";"))
    read = parser.read(path)
    if not read:
        raise ScenarioError(f"cannot read scenario file: {path}")

    kwargs: dict[str, dict] = {section: {} for section in _SCHEMA}
    for section in parser.sections():
        if section not in _SCHEMA:
            raise ScenarioError(f"unknown scenario section [{section}]")
        schema = _SCHEMA[section]
        for key, raw in parser.items(section):
            if key not in schema:
                raise ScenarioError(f"unknown key '{key}' in section [{section}]")
            converter, target = schema[key]
            try:
                value = converter(raw)
            except ValueError as err:
                raise ScenarioError(
                    f"bad value for [{section}] {key}: {err}"
                ) from err
            if target is not None:
                kwargs[section][target] = value

    try:
        return Scenario(
            geometry=GeometryConfig(**kwargs["geometry"]),
            radio=RadioParams(**kwargs["radio"]),
            platform=PlatformParams(**kwargs["platform"]),
            traffic=TrafficModel(**kwargs["traffic"]),
            solver=SolverOptions(**kwargs["solver"]),
        )
    except ValueError as err:
        raise ScenarioError(str(err)) from err


def _format_value(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, tuple):
        return ", ".join(repr(float(x)) for x in value)
    if isinstance(value, float):
        return repr(value)
    return str(value)


def write_scenario(scenario: Scenario, path) -> None:
    """Serialize a scenario with every parameter explicit, defaults included."""
    sections = {
        "geometry": scenario.geometry,
        "radio": scenario.radio,
        "platform": scenario.platform,
        "traffic": scenario.traffic,
        "solver": scenario.solver,
    }
    lines = []
    for section, obj in sections.items():
        lines.append(f"[{section}]")
        for key, (_, target) in _SCHEMA[section].items():
            if target is None:
                lines.append(f"{key} = independent")
                continue
            lines.append(f"{key} = {_format_value(getattr(obj, target))}")
        lines.append("")
    Path(path).write_text("\n".join(lines))
