"""Central tolerance record shared by every module."""

from __future__ import annotations

from dataclasses import asdict, dataclass, replace


@dataclass(frozen=True)
class Tolerances:
    normalization: float = 1e-12
    #: clamp negative variance to zero only below this fraction of <H^2>
    variance_clamp: float = 1e-12
    zero_norm: float = 1e-300

    eps_orth: float = 1e-10
    oversample: int = 16
    horizon_multiplier: float = 50.0
    #: golden-section bracket width relative to the horizon
    refine_rel_width: float = 1e-13

    minorant_violation: float = 1e-9
    saturation: float = 1e-9
    saturation_t0: float = 1e-8
    #: fraction of |Omega| trimmed from both ends of the alpha sweep
    omega_margin: float = 1e-9
    n_alpha: int = 100_000

    def with_(self, **changes) -> "Tolerances":
        return replace(self, **changes)

    def as_dict(self) -> dict:
        return asdict(self)


DEFAULT_TOLERANCES = Tolerances()
