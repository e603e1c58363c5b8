"""Scenario configuration: radar geometry, targets, noise, run controls.

Configs serialize to JSON (schema_version 1). The default scenario is a
three-radar, five-target network on a 20 km baseline with two beams per
radar per scan.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass, replace

from .dynamics import STRATEGY_KINDS

SCHEMA_VERSION = 1


@dataclass(frozen=True)
class RadarGeometry:
    """Position and sensing parameters of one radar (without per-run b factors)."""

    id: int
    x: float
    y: float
    m: int
    sigma_a: float
    sigma_r_base: float


@dataclass(frozen=True)
class ScenarioConfig:
    """Everything one Monte Carlo experiment needs, serializable to JSON."""

    radars: tuple[RadarGeometry, ...]
    targets: tuple[tuple[float, float, float, float], ...]
    p0_diag: tuple[float, float, float, float]
    t_u: float
    sigma_w_sq: float
    c: float
    horizon: int
    n_runs: int
    strategy: str
    alpha: float
    k_reinit: int
    seed: int
    b_interval: tuple[float, float] | None = (1.0, 4.5)
    b_matrix: tuple[tuple[float, ...], ...] | None = None
    accuracy_ranking: str = "live"
    schema_version: int = SCHEMA_VERSION

    def __post_init__(self):
        if len(self.radars) < 1:
            raise ValueError("need at least one radar")
        if len(self.targets) < 2:
            raise ValueError("need at least two targets")
        ms = {r.m for r in self.radars}
        if len(ms) != 1:
            raise ValueError("all radars must share one beam budget m")
        if not self.m < len(self.targets):
            raise ValueError("beam budget must be smaller than the target count")
        if self.horizon < 1 or self.n_runs < 1:
            raise ValueError("horizon and n_runs must be >= 1")
        if self.strategy not in STRATEGY_KINDS:
            raise ValueError(f"unknown strategy {self.strategy!r}")
        if self.accuracy_ranking not in ("live", "static"):
            raise ValueError("accuracy_ranking must be 'live' or 'static'")
        if self.b_matrix is not None:
            if len(self.b_matrix) != len(self.radars) or any(
                len(row) != len(self.targets) for row in self.b_matrix
            ):
                raise ValueError("b_matrix must be (n_radars, n_targets)")
        elif self.b_interval is None:
            raise ValueError("either b_interval or b_matrix is required")

    @property
    def m(self) -> int:
        return self.radars[0].m

    @property
    def n_radars(self) -> int:
        return len(self.radars)

    @property
    def n_targets(self) -> int:
        return len(self.targets)

    def with_overrides(self, **kwargs) -> "ScenarioConfig":
        return replace(self, **kwargs)

    def to_dict(self) -> dict:
        d = asdict(self)
        d["radars"] = [asdict(r) for r in self.radars]
        return d


def config_from_dict(data: dict) -> ScenarioConfig:
    version = data.get("schema_version", SCHEMA_VERSION)
    if version != SCHEMA_VERSION:
        raise ValueError(f"unsupported config schema version {version}")
    radars = tuple(
        RadarGeometry(
            id=int(r["id"]),
            x=float(r["x"]),
            y=float(r["y"]),
            m=int(r["m"]),
            sigma_a=float(r["sigma_a"]),
            sigma_r_base=float(r["sigma_r_base"]),
        )
        for r in data["radars"]
    )
    b_interval = data.get("b_interval")
    b_matrix = data.get("b_matrix")
    return ScenarioConfig(
        radars=radars,
        targets=tuple(tuple(float(v) for v in t) for t in data["targets"]),
        p0_diag=tuple(float(v) for v in data["p0_diag"]),
        t_u=float(data["t_u"]),
        sigma_w_sq=float(data["sigma_w_sq"]),
        c=float(data["c"]),
        horizon=int(data["horizon"]),
        n_runs=int(data["n_runs"]),
        strategy=str(data["strategy"]),
        alpha=float(data["alpha"]),
        k_reinit=int(data["k_reinit"]),
        seed=int(data["seed"]),
        b_interval=tuple(float(v) for v in b_interval) if b_interval is not None else None,
        b_matrix=tuple(tuple(float(v) for v in row) for row in b_matrix)
        if b_matrix is not None
        else None,
        accuracy_ranking=data.get("accuracy_ranking", "live"),
    )


def default_scenario() -> ScenarioConfig:
    """Three radars on the x-axis, five crossing targets, two beams per scan."""
    geometry = tuple(
        RadarGeometry(id=i, x=x, y=0.0, m=2, sigma_a=2e-3, sigma_r_base=15e-3)
        for i, x in enumerate((-10.0, 3.0, 10.0))
    )
    targets = (
        (1.0, 6.0, 0.5, 0.1),
        (0.5, 7.0, 0.35, -0.1),
        (1.5, 3.0, -0.3, 0.0),
        (2.0, 4.0, -0.2, 0.1),
        (2.5, 5.0, 0.3, 0.2),
    )
    return ScenarioConfig(
        radars=geometry,
        targets=targets,
        p0_diag=(0.01, 0.01, 0.01, 0.01),
        t_u=0.25,
        sigma_w_sq=2.5e-5,
        c=0.1,
        horizon=240,
        n_runs=100,
        strategy="best-response",
        alpha=0.4,
        k_reinit=10,
        seed=20240501,
        b_interval=(1.0, 4.5),
    )
