"""Numerical tolerances shared by the floating-point modules."""

from __future__ import annotations

from dataclasses import asdict, dataclass, fields, replace


@dataclass(frozen=True)
class ToleranceConfig:
    # Weierstrass evaluation
    series_radius: float = 0.45  # fraction of the shortest period
    pole_guard: float = 1e-6  # fraction of the shortest period
    series_terms: int = 32
    eisenstein_terms: int = 40

    # inversion of wp
    invert_tol: float = 1e-11
    invert_max_iter: int = 60
    invert_grid: int = 12

    # polynomial solving
    branch_exclusion: float = 1e-7  # relative distance from e_j treated as a branch value
    dedupe_radius: float = 1e-6  # relative to max(1, |e|_inf)
    residual_bound: float = 1e-8  # relative D-G residual accepted after lifting
    poly_residual_bound: float = 1e-7  # relative |F(x,y)|, |F(y,x)| accepted before polishing
    resultant_samples: int = 128
    newton_grid: int = 40
    aberth_max_iter: int = 500

    linear_weights: bool = False

    def with_overrides(self, **kw) -> "ToleranceConfig":
        known = {f.name for f in fields(self)}
        bad = set(kw) - known
        if bad:
            raise ValueError(f"unknown tolerance keys: {sorted(bad)}")
        return replace(self, **kw)

    def to_dict(self) -> dict:
        return asdict(self)


DEFAULT = ToleranceConfig()
