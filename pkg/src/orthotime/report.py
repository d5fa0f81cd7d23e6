"""Analysis report: a projection of library results, never a recomputation."""

from __future__ import annotations

import csv
import io as _io
import json
import math
from dataclasses import asdict, dataclass, field

from .bounds import ml_bound, mt_bound, saturation_check, union_excluded
from .config import DEFAULT_TOLERANCES, Tolerances
from .dynamics import orthogonalization_time
from .exceptions import ZeroDispersion
from .io import REPORT_KIND, fmt_human, fmt_machine, state_to_dict
from .spectral_state import DiscreteSpectralState, SpectralState, moments

ZERO_DISPERSION = "ZeroDispersion"


@dataclass(frozen=True)
class AnalysisReport:
    hbar: float
    representation: str
    n_levels: int
    mean: float
    second: float
    variance: float
    delta_e: float
    min_energy: float | None
    t0_status: str
    t0: float | None
    t0_residual: float | None
    min_abs_survival: float | None
    argmin_time: float | None
    horizon: float | None
    mt_bound: float
    ml_bound: float
    tightest_bound: str
    saturated: bool | None
    union_lo: float | None
    union_hi: float | None
    union_components: int | None
    tolerances: dict = field(default_factory=dict)
    state: dict = field(default_factory=dict)

    CSV_FIELDS = ("hbar", "representation", "n_levels", "mean", "second", "variance",
                  "delta_e", "min_energy", "t0_status", "t0", "t0_residual",
                  "min_abs_survival", "argmin_time", "horizon", "mt_bound", "ml_bound",
                  "tightest_bound", "saturated", "union_lo", "union_hi", "union_components")

    def to_dict(self) -> dict:
        d = asdict(self)
        for k, v in d.items():
            if isinstance(v, float) and math.isinf(v):
                d[k] = fmt_machine(v)
        return {"kind": REPORT_KIND, **d}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2) + "\n"

    def to_csv(self) -> str:
        buf = _io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(self.CSV_FIELDS)
        w.writerow([fmt_machine(getattr(self, k)) if not isinstance(getattr(self, k), str)
                    else getattr(self, k) for k in self.CSV_FIELDS])
        return buf.getvalue()

    def render(self) -> str:
        h = fmt_human
        lines = [
            f"state        : {self.n_levels} {self.representation}, hbar = {h(self.hbar)}",
            f"<H>          : {h(self.mean)}",
            f"<H^2>        : {h(self.second)}",
            f"Delta E      : {h(self.delta_e)}",
            f"E0           : {h(self.min_energy)}",
            f"t0           : {self.t0_status}" + (f" at {h(self.t0)} (|S| = {self.t0_residual:.2e})"
                                                  if self.t0 is not None else ""),
        ]
        if self.t0 is None and self.argmin_time is not None:
            lines.append(f"closest      : |S| = {h(self.min_abs_survival)} at t = {h(self.argmin_time)}"
                         f" (horizon {h(self.horizon)})")
        lines += [
            f"MT bound     : {h(self.mt_bound)}",
            f"ML bound     : {h(self.ml_bound)}",
            f"tightest     : {self.tightest_bound}",
            f"saturated    : {h(self.saturated)}",
        ]
        if self.union_lo is not None:
            lines.append(f"excluded     : ({h(self.union_lo)}, {h(self.union_hi)})"
                         f" over {self.union_components} component(s)")
        return "\n".join(lines) + "\n"


def _tightest(mt: float, ml: float) -> str:
    if mt == ml:
        return "MT=ML"
    return "MT" if mt > ml else "ML"


def analyze(state: SpectralState, raw: dict | None = None,
            tolerances: Tolerances = DEFAULT_TOLERANCES) -> AnalysisReport:
    """moments -> bounds -> orthogonalization time -> saturation -> interval union."""
    m = moments(state)
    hbar = state.hbar
    mt = mt_bound(m, hbar)
    ml = ml_bound(m, hbar)
    try:
        res = orthogonalization_time(state, tolerances=tolerances)
    except ZeroDispersion:
        res = None
    saturated = None
    union = None
    if m.variance > 0:
        if isinstance(state, DiscreteSpectralState):
            saturated = saturation_check(state, tolerances=tolerances).is_intelligent
        union = union_excluded(m, hbar, tolerances.n_alpha, tolerances)
    return AnalysisReport(
        hbar=hbar,
        representation="levels" if isinstance(state, DiscreteSpectralState) else "nodes",
        n_levels=len(state),
        mean=m.mean, second=m.second, variance=m.variance, delta_e=m.delta_e,
        min_energy=m.min_energy,
        t0_status=ZERO_DISPERSION if res is None else str(res.status),
        t0=None if res is None else res.t0,
        t0_residual=None if res is None else res.residual,
        min_abs_survival=None if res is None else res.min_abs_survival,
        argmin_time=None if res is None else res.argmin_time,
        horizon=None if res is None else res.horizon,
        mt_bound=mt, ml_bound=ml, tightest_bound=_tightest(mt, ml),
        saturated=saturated,
        union_lo=None if union is None else union.inf,
        union_hi=None if union is None else union.sup,
        union_components=None if union is None else len(union),
        tolerances=tolerances.as_dict(),
        state=raw if raw is not None else state_to_dict(state),
    )
