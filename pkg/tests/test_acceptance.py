"""Acceptance criteria, one test per criterion.

Each test records a PASS/FAIL line that is echoed in the terminal summary
(and on stdout under ``-s``).
"""

import io
import json
import math
import time

import numpy as np
import pytest

from conftest import record
from oracles import uniform_unit_amplitude
from orthotime import (Domain, Family, Moments, bound_from_certificate, certify,
                       construct_intelligent, example_path, ml_bound, moments, mt_bound,
                       optimize_family, orthogonalization_time, saturation_check, shift_energy,
                       survival_amplitude, uniform_density, union_excluded,
                       verify_quadratic_minorant)
from orthotime.cli import run
from orthotime.exceptions import ZeroDispersion
from orthotime.io import load_state
from orthotime.minorant_search import linear_ml_candidate
from orthotime.spectral_state import random_discrete_state

PI = math.pi
SEED = 20261016


def _population(weights):
    rng = np.random.default_rng(SEED)
    return [random_discrete_state(rng, int(rng.integers(2, 17)), (-5.0, 5.0), weights=weights)
            for _ in range(500)]


@pytest.fixture(scope="module")
def populations():
    return {"random": _population("random"), "symmetric": _population("symmetric")}


def test_ac01_mt_soundness(populations):
    start = time.perf_counter()
    worst, found = math.inf, {}
    for name in ("random", "symmetric"):
        found[name] = 0
        for s in populations[name]:
            res = orthogonalization_time(s)
            if res.found:
                found[name] += 1
                worst = min(worst, res.t0 - mt_bound(moments(s), s.hbar))
    elapsed = time.perf_counter() - start
    ok = worst >= -1e-6 and elapsed < 30.0
    record(1, "MT soundness", ok,
           f"found random={found['random']}/500 symmetric={found['symmetric']}/500, "
           f"min(t0-MT)={worst:.3e}, {elapsed:.1f}s")
    assert found["symmetric"] > 0
    assert worst >= -1e-6
    assert elapsed < 30.0


def test_ac02_ml_soundness(populations):
    worst, found = math.inf, 0
    for name in ("random", "symmetric"):
        for s in populations[name]:
            shifted = shift_energy(s, -moments(s).min_energy)
            m = moments(shifted)
            assert m.min_energy == 0.0
            res = orthogonalization_time(shifted)
            if res.found:
                found += 1
                worst = min(worst, res.t0 - ml_bound(m, shifted.hbar))
    ok = worst >= -1e-6
    record(2, "ML soundness", ok, f"found={found}/1000, min(t0-ML)={worst:.3e}")
    assert found > 0
    assert ok


def test_ac03_saturation():
    rng = np.random.default_rng(SEED + 3)
    worst, all_sat = 0.0, True
    for _ in range(100):
        mean, de = rng.uniform(-3, 3), rng.uniform(0.1, 5)
        s = construct_intelligent(1.0, mean, de, tuple(rng.uniform(0, 2 * PI, 2)))
        res = orthogonalization_time(s)
        assert res.found
        worst = max(worst, abs(res.t0 - PI / (2 * de)))
        all_sat &= saturation_check(s).is_intelligent
    ok = worst <= 1e-8 and all_sat
    record(3, "saturation", ok, f"max|t0-MT|={worst:.3e}, all intelligent={all_sat}")
    assert ok


def test_ac04_minorant_certificate():
    rng = np.random.default_rng(SEED + 4)
    worst_min, worst_arg, tails = math.inf, 0.0, True
    for alpha in rng.uniform(-PI, PI, 20):
        chk = verify_quadratic_minorant(alpha, 4 * PI, 1_000_000)
        worst_min = min(worst_min, chk.min_value)
        expected = np.array([-alpha - PI / 2, -alpha + PI / 2])
        for a in chk.argmins:
            worst_arg = max(worst_arg, float(np.min(np.abs(expected - a))))
        tails &= chk.tail_certified and chk.tail_margin > 0
    ok = worst_min >= -1e-12 and worst_arg <= 1e-4 and tails
    record(4, "quadratic minorant certificate", ok,
           f"min gamma={worst_min:.3e}, argmin err={worst_arg:.3e}, tails={tails}")
    assert ok


def test_ac05_interval_union():
    rng = np.random.default_rng(SEED + 5)
    worst, single = 0.0, True
    for _ in range(50):
        m = Moments.from_mean_dispersion(rng.uniform(-3, 3), rng.uniform(0.1, 5))
        u = union_excluded(m, 1.0, 100_000)
        single &= u.is_single
        target = PI / (2 * m.delta_e)
        worst = max(worst, abs(u.inf + target), abs(u.sup - target))
    ok = single and worst <= 1e-6
    record(5, "interval-union reconstruction", ok, f"single={single}, max endpoint err={worst:.3e}")
    assert ok


def test_ac06_linear_ml_recovery():
    cert = certify(linear_ml_candidate())
    assert cert.amplitude == pytest.approx(math.sqrt(1 + 4 / PI**2), abs=1e-15)
    assert cert.phase == pytest.approx(PI - math.atan(2 / PI), abs=1e-15)
    rng = np.random.default_rng(SEED + 6)
    worst = 0.0
    for _ in range(50):
        s = random_discrete_state(rng, int(rng.integers(2, 17)), (0.0, 10.0))
        s = shift_energy(s, -moments(s).min_energy)
        m = moments(s)
        b = bound_from_certificate(cert, m, s.hbar)
        worst = max(worst, abs(b.t_min - ml_bound(m, s.hbar)))
    ok = cert.certified_slack >= -1e-9 and worst <= 1e-9
    record(6, "linear-family ML recovery", ok,
           f"slack={cert.certified_slack:.3e}, max|bound-ML|={worst:.3e}")
    assert ok


def test_ac07_optimizer_recovery(populations):
    rng = np.random.default_rng(SEED + 7)
    worst_q, worst_l = 0.0, 0.0
    for _ in range(20):
        mean, de = rng.uniform(-3, 3), rng.uniform(0.1, 5)
        e0 = mean - rng.uniform(0.05, 5)
        m = Moments.from_mean_dispersion(mean, de, e0)
        q = optimize_family(Family.QUADRATIC, Domain.FULL_LINE, m, 1.0)
        lin = optimize_family(Family.LINEAR, Domain.HALF_LINE_NONNEG, m, 1.0)
        worst_q = max(worst_q, abs(q.bound - mt_bound(m, 1.0)))
        worst_l = max(worst_l, abs(lin.bound - ml_bound(m, 1.0)))
    exceed, checked = 0, 0
    for s in populations["symmetric"][:100]:
        res = orthogonalization_time(s)
        if not res.found:
            continue
        m = moments(s)
        checked += 1
        for fam, dom in ((Family.QUADRATIC, Domain.FULL_LINE), (Family.LINEAR, Domain.HALF_LINE_NONNEG)):
            if optimize_family(fam, dom, m, s.hbar).bound > res.t0 + 1e-9:
                exceed += 1
    ok = worst_q <= 1e-6 and worst_l <= 1e-6 and exceed == 0
    record(7, "optimizer recovery", ok,
           f"max|quad-MT|={worst_q:.3e}, max|lin-ML|={worst_l:.3e}, "
           f"exceeding t0: {exceed} of {checked} states")
    assert checked > 0
    assert ok


def test_ac08_continuous_spectrum():
    s = uniform_density(0.0, 1.0, 64, 1.0)
    ts = np.linspace(0.0, 10.0, 1001)
    got = survival_amplitude(s, ts)
    ref = np.array([uniform_unit_amplitude(t) for t in ts])
    amp_err = float(np.max(np.abs(got - ref)))
    res = orthogonalization_time(s)
    m = moments(s)
    mt, ml = mt_bound(m, 1.0), ml_bound(m, 1.0)
    t0_err = abs(res.t0 - 2 * PI)
    ok = (amp_err <= 1e-8 and res.found and t0_err <= 1e-6
          and abs(mt - PI * math.sqrt(3)) <= 1e-9
          and res.t0 >= mt and res.t0 >= ml and res.t0 >= PI)
    record(8, "continuous spectrum", ok,
           f"amp err={amp_err:.3e}, |t0-2pi|={t0_err:.3e}, MT={mt:.6f}, ML={ml:.6f}")
    assert ok


def test_ac09_eigenstate():
    s = load_state(example_path("single_level.json"))
    m = moments(s)
    with pytest.raises(ZeroDispersion):
        orthogonalization_time(s)
    ok = mt_bound(m, s.hbar) == math.inf and m.variance == 0.0
    record(9, "eigenstate degeneracy", ok, f"MT={mt_bound(m, s.hbar)}, ML={ml_bound(m, s.hbar)}")
    assert ok


def _cli_json(path):
    buf = io.StringIO()
    code = run(["analyze", str(path), "--output", "json", "--seed", "7"], buf)
    assert code == 0
    return buf.getvalue()


def _lib_value(x):
    return "Infinite" if isinstance(x, float) and math.isinf(x) else x


def test_ac10_cli_round_trip(tmp_path):
    mismatches = []
    for name in ("intelligent.json", "three_level.json", "single_level.json"):
        path = example_path(name)
        first, second = _cli_json(path), _cli_json(path)
        if first != second:
            mismatches.append(f"{name}: nondeterministic")
        doc = json.loads(first)
        s = load_state(path)
        m = moments(s)
        lib = {"mean": m.mean, "second": m.second, "variance": m.variance,
               "delta_e": m.delta_e, "min_energy": m.min_energy,
               "mt_bound": mt_bound(m, s.hbar), "ml_bound": ml_bound(m, s.hbar)}
        if m.variance > 0:
            res = orthogonalization_time(s)
            lib.update(t0=res.t0, t0_status=str(res.status), t0_residual=res.residual)
            lib["saturated"] = saturation_check(s).is_intelligent
            u = union_excluded(m, s.hbar)
            lib.update(union_lo=u.inf, union_hi=u.sup)
        else:
            lib.update(t0=None, t0_status="ZeroDispersion")
        for k, v in lib.items():
            if doc[k] != _lib_value(v):
                mismatches.append(f"{name}: {k} cli={doc[k]!r} lib={v!r}")
        report_file = tmp_path / name
        report_file.write_text(first)
        if _cli_json(report_file) != first:
            mismatches.append(f"{name}: report round trip differs")
    ok = not mismatches
    record(10, "CLI round trip", ok, "; ".join(mismatches) or "3 files bit-identical")
    assert ok
