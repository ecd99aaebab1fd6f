"""
Validated configuration objects: operator parameters, quadrature settings and
the command-line run description.
"""

import os
from typing import Any, List, Literal, Optional

from dotenv import load_dotenv
from pydantic import BaseModel, ConfigDict, Field, PrivateAttr, field_validator


class FracParams(BaseModel):
    """
    The triple (n, s, p) of a fractional p-Laplacian.

    The regime flags are computed once on construction so every evaluator can
    branch on them without recomputing thresholds.
    """

    model_config = ConfigDict(frozen=True)

    n: int = Field(1, ge=1, description="Space dimension")
    s: float = Field(..., gt=0.0, lt=1.0, description="Fractional order")
    p: float = Field(..., gt=1.0, description="Growth exponent")

    _small_p_regime: bool = PrivateAttr(default=False)
    _sp_ge_2: bool = PrivateAttr(default=False)

    def model_post_init(self, __context: Any) -> None:
        self._small_p_regime = self.p < 2.0 / (2.0 - self.s)
        self._sp_ge_2 = self.s * self.p >= 2.0

    @property
    def sp(self) -> float:
        return self.s * self.p

    @property
    def small_p_regime(self) -> bool:
        """True iff p < 2/(2-s), where a nonvanishing gradient is required."""
        return self._small_p_regime

    @property
    def sp_ge_2(self) -> bool:
        return self._sp_ge_2

    def replace(self, **changes: Any) -> "FracParams":
        """Return a validated copy with some fields changed."""
        return FracParams(**{**self.model_dump(), **changes})


class QuadConfig(BaseModel):
    """
    Tolerances and discretization choices shared by every quadrature.
    """

    model_config = ConfigDict(frozen=True)

    rel_tol: float = Field(1e-8, gt=0.0)
    abs_tol: float = Field(1e-10, gt=0.0)
    max_subdivisions: int = Field(200, ge=10)
    hermite_nodes: int = Field(64, ge=8)
    tail_radius: Optional[float] = Field(
        None, gt=1.0, description="Radial truncation; None uses the function's own"
    )
    t_split: float = Field(1.0, gt=0.0)
    y0: float = Field(0.05, gt=0.0, description="First height of the extension limit")
    y_ratio: float = Field(0.5, description="Geometric ratio of the height sequence")
    y_count: int = Field(14, ge=4)
    epsilon_pv: float = Field(0.0, ge=0.0, description="Explicit PV cutoff, 0 = symmetrized")
    angular_nodes: int = Field(64, ge=8)
    legendre_nodes: int = Field(24, ge=4)
    far_radius: float = Field(
        2.0e4, gt=0.0, description="Physical radius of the 1-D discrete far field"
    )

    @field_validator("y_ratio")
    @classmethod
    def _ratio_in_unit_interval(cls, value: float) -> float:
        if not 0.0 < value < 1.0:
            raise ValueError("y_ratio must lie in (0, 1)")
        return value

    def replace(self, **changes: Any) -> "QuadConfig":
        """Return a validated copy with some fields changed."""
        return QuadConfig(**{**self.model_dump(), **changes})

    def tolerance(self, value: float) -> float:
        """Target absolute error for a result of the given magnitude."""
        return max(self.abs_tol, self.rel_tol * abs(value))

    @classmethod
    def from_env(cls, **overrides: Any) -> "QuadConfig":
        """
        Build a configuration from FRACPLAP_* environment variables.

        Args:
            **overrides: Values that take precedence over the environment
                (typically parsed command-line flags). None entries are ignored.

        Returns:
            A validated QuadConfig
        """
        load_dotenv()
        values = {}
        env_fields = {
            "rel_tol": ("FRACPLAP_REL_TOL", float),
            "abs_tol": ("FRACPLAP_ABS_TOL", float),
            "hermite_nodes": ("FRACPLAP_HERMITE_NODES", int),
            "max_subdivisions": ("FRACPLAP_MAX_SUBDIVISIONS", int),
            "tail_radius": ("FRACPLAP_TAIL_RADIUS", float),
        }
        for field, (variable, cast) in env_fields.items():
            raw = os.environ.get(variable)
            if raw:
                values[field] = cast(raw)
        values.update({k: v for k, v in overrides.items() if v is not None})
        return cls(**values)


Command = Literal[
    "constants", "compare", "limits", "discrete", "spectral", "seminorm", "weights-export"
]


class RunConfig(BaseModel):
    """
    Complete description of one command-line run.

    Two runs with equal RunConfig (seed included) produce identical tables.
    """

    model_config = ConfigDict(frozen=True)

    command: Command
    n: int = Field(1, ge=1)
    s: float = Field(0.5, gt=0.0, lt=1.0)
    p: float = Field(2.0, gt=1.0)
    function: str = "gaussian"
    points: List[float] = Field(default_factory=lambda: [0.0])
    quad: QuadConfig = Field(default_factory=QuadConfig)
    output: Optional[str] = None
    format: Literal["csv", "json"] = "csv"
    seed: int = 0
    workers: int = Field(1, ge=1)

    # Grids used by the sweeping commands
    n_list: List[int] = Field(default_factory=lambda: [1, 2, 3])
    s_list: List[float] = Field(default_factory=lambda: [0.25, 0.5, 0.75])
    p_list: List[float] = Field(default_factory=lambda: [1.5, 2.0, 3.0])
    mode: Literal["s_to_1", "p_to_2"] = "s_to_1"
    grid: Optional[List[float]] = None
    h_list: List[float] = Field(default_factory=lambda: [0.4, 0.2, 0.1])
    kappa: float = Field(1.0, gt=0.0)
    delta_zero: bool = False
    delta_sensitivity: bool = False
    stencil: Optional[int] = Field(None, ge=1)
    lengths: List[float] = Field(default_factory=lambda: [4.0, 8.0, 16.0])
    bump_radius: float = Field(1.5, gt=0.0)
    amplitude: float = 1.0
    representations: Optional[List[str]] = None

    @field_validator("s_list")
    @classmethod
    def _orders_in_range(cls, values: List[float]) -> List[float]:
        if any(not 0.0 < s < 1.0 for s in values):
            raise ValueError("every s must lie in (0, 1)")
        return values

    @field_validator("p_list")
    @classmethod
    def _exponents_in_range(cls, values: List[float]) -> List[float]:
        if any(p <= 1.0 for p in values):
            raise ValueError("every p must exceed 1")
        return values

    @field_validator("h_list", "lengths")
    @classmethod
    def _positive(cls, values: List[float]) -> List[float]:
        if not values or any(v <= 0.0 for v in values):
            raise ValueError("values must be a non-empty list of positive numbers")
        return values

    @property
    def params(self) -> FracParams:
        return FracParams(n=self.n, s=self.s, p=self.p)
