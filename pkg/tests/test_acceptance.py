"""Acceptance criteria 1-13, one check per criterion.

Each check returns (passed, detail). The pytest wrappers record one line
per criterion, which conftest prints in the terminal summary; running this
file directly prints the same lines.
"""
import io
import json
import math
import sys
import tempfile
import time
from contextlib import redirect_stderr, redirect_stdout
from pathlib import Path

import numpy as np
import pytest

from roughsig import (
    MultiplicativeFunctional,
    SampledPath,
    TruncatedTensor,
    brute_force_sig,
    dilation,
    exp,
    grouplike_inverse,
    homogeneous_norm,
    hs_norm,
    inverse,
    is_grouplike,
    is_multiplicative,
    levy_area,
    log,
    mul,
    pair,
    path_signature,
    project,
    reverse,
    rho_metric,
    unit,
    young_integral,
)
from roughsig.cli import main as cli_main
from roughsig.io import read_tensor_json
from roughsig.tensor import rel_error

RESULTS: list[str] = []
SEED = 20261018


def path_set(n=100, seed=SEED):
    """Random piecewise-linear paths: 2-20 segments, d <= 3, N <= 5."""
    rng = np.random.default_rng(seed)
    out = []
    for _ in range(n):
        d, depth, m = int(rng.integers(1, 4)), int(rng.integers(1, 6)), int(rng.integers(2, 21))
        pts = np.cumsum(0.5 * rng.normal(size=(m + 1, d)), axis=0)
        times = np.concatenate([[0.0], np.sort(rng.uniform(0.02, 0.98, m - 1)), [1.0]])
        if np.any(np.diff(times) <= 0):
            times = np.linspace(0.0, 1.0, m + 1)
        out.append((SampledPath(times, pts), depth))
    return out


def random_element(rng, d, depth, level0):
    flat = rng.normal(size=sum(d**k for k in range(depth + 1)))
    flat[0] = level0
    return TruncatedTensor(d, depth, flat)


def criterion_1():
    rng = np.random.default_rng(SEED)
    worst = 0.0
    for _ in range(50):
        d = int(rng.integers(1, 4))
        a, x = rng.normal(size=2)
        b, y = rng.normal(size=(2, d))
        c, z = rng.normal(size=(2, d * d))
        got = mul(TruncatedTensor.from_levels([[a], b, c]), TruncatedTensor.from_levels([[x], y, z])).flat
        want = np.concatenate([[a * x], a * y + x * b, a * z + x * c + np.outer(b, y).ravel()])
        worst = max(worst, np.abs(got - want).max())
        got = inverse(TruncatedTensor.from_levels([[1.0], b, c])).flat
        want = np.concatenate([[1.0], -b, -c + np.outer(b, b).ravel()])
        worst = max(worst, np.abs(got - want).max())
    return worst <= 1e-12, f"max abs error {worst:.2e} (tol 1e-12)"


def criterion_2():
    rng = np.random.default_rng(SEED + 2)
    worst = 0.0
    for _ in range(100):
        d, depth = int(rng.integers(1, 4)), int(rng.integers(1, 6))
        a = random_element(rng, d, depth, 0.0)
        worst = max(worst, rel_error(log(exp(a)), a))
        g = random_element(rng, d, depth, 1.0)
        worst = max(worst, rel_error(exp(log(g)), g))
    return worst <= 1e-12, f"max relative round-trip error {worst:.2e} (tol 1e-12)"


def criterion_3():
    start = time.perf_counter()
    worst = 0.0
    for p, depth in path_set():
        n = len(p)
        # every window signature computed directly from the polyline
        mf = MultiplicativeFunctional.from_function(
            p.d, depth, p.times, lambda s, t: path_signature(p, depth, s, t)
        )
        worst = max(worst, is_multiplicative(mf, 1e-9).residual)
    elapsed = time.perf_counter() - start
    ok = worst <= 1e-9 and elapsed <= 5.0
    return ok, f"max relative residual {worst:.2e} (tol 1e-9), {elapsed:.2f}s (limit 5s)"


def criterion_4():
    worst = 0.0
    for p, depth in path_set():
        rep = is_grouplike(path_signature(p, depth), 1e-8)
        if rep.worst is not None:
            worst = max(worst, rep.worst.relative)
    return worst <= 1e-8, f"max relative shuffle residual {worst:.2e} (tol 1e-8)"


def criterion_5():
    worst = 0.0
    for p, depth in path_set():
        g = path_signature(p, depth)
        worst = max(worst, rel_error(grouplike_inverse(g), inverse(g)))
    bad = TruncatedTensor.from_levels([[1.0], [0.0, 0.0], [0.0, 1.0, 0.0, 0.0]])
    gap = hs_norm(grouplike_inverse(bad) - inverse(bad))
    ok = worst <= 1e-12 and gap >= 1e-3
    return ok, f"group-like max relative gap {worst:.2e} (tol 1e-12); non-geometric gap {gap:.3g} (>= 1e-3)"


def criterion_6():
    p = SampledPath.from_points([[0.0, 0.0], [1.0, 0.5], [0.2, 1.5], [1.2, 1.0]])
    exact = path_signature(p, 3).flat
    e1 = np.abs(brute_force_sig(p, 3, 10_000).flat - exact).max()
    e2 = np.abs(brute_force_sig(p, 3, 20_000).flat - exact).max()
    ratio = e1 / e2
    ok = e1 <= 2e-3 and 1.6 <= ratio <= 2.4
    return ok, f"error at mesh 1e4 {e1:.2e} (tol 2e-3); halving ratio {ratio:.3f} (in [1.6, 2.4])"


def criterion_7():
    loop = SampledPath.from_points([[0, 0], [1, 0], [1, 1], [0, 1], [0, 0]])
    s = path_signature(loop, 2)
    checks = [
        np.linalg.norm(s.level(1)) <= 1e-12,
        abs(pair(s, (1, 2)) - 1) <= 1e-12,
        abs(pair(s, (2, 1)) + 1) <= 1e-12,
        abs(levy_area(loop)[0, 1] - 1) <= 1e-12,
        abs(levy_area(reverse(loop))[0, 1] + 1) <= 1e-12,
    ]
    detail = (f"|S^1|={np.linalg.norm(s.level(1)):.1e}, <S,12>={pair(s, (1, 2)):.15g}, "
              f"<S,21>={pair(s, (2, 1)):.15g}, A12={levy_area(loop)[0, 1]:.15g}, "
              f"reversed A12={levy_area(reverse(loop))[0, 1]:.15g}")
    return all(checks), detail


def criterion_8():
    rng = np.random.default_rng(SEED + 8)
    w_left = w_sub = w_dil = 0.0
    for _ in range(100):
        d, depth = int(rng.integers(1, 4)), int(rng.integers(1, 5))

        def g():
            m = int(rng.integers(1, 6))
            return path_signature(SampledPath.from_points(np.cumsum(0.7 * rng.normal(size=(m + 1, d)), axis=0)), depth)

        x, y, b = g(), g(), g()
        r = rho_metric(x, y)
        w_left = max(w_left, abs(rho_metric(mul(b, x), mul(b, y)) - r) / max(r, 1e-300))
        w_sub = max(w_sub, homogeneous_norm(mul(x, y)) - homogeneous_norm(x) - homogeneous_norm(y))
        lam = float(rng.uniform(-3, 3))
        nx = homogeneous_norm(x)
        w_dil = max(w_dil, abs(homogeneous_norm(dilation(lam, x)) - abs(lam) * nx) / max(abs(lam) * nx, 1e-300))
    ok = w_left <= 1e-9 and w_sub <= 1e-9 and w_dil <= 1e-12
    return ok, (f"left invariance {w_left:.2e} (1e-9), subadditivity excess {w_sub:.2e} (1e-9), "
                f"dilation {w_dil:.2e} (1e-12)")


def criterion_9():
    worst = 0.0
    for p, depth in path_set():
        sig = path_signature(p, depth)
        for lam in (-1.0, 0.5, 3.0):
            worst = max(worst, rel_error(path_signature(p.scaled(lam), depth), dilation(lam, sig)))
    return worst <= 1e-10, f"max relative error {worst:.2e} (tol 1e-10)"


def criterion_10():
    worst = 0.0
    for p, _ in path_set(20):
        for n in range(1, 5):
            worst = max(worst, rel_error(project(path_signature(p, n + 1), n), path_signature(p, n)))
    return worst <= 1e-12, f"max relative error {worst:.2e} (tol 1e-12)"


def criterion_11():
    t = np.linspace(0.0, 1.0, 1001)
    x = SampledPath(t, t)
    i1 = young_integral(x, x, refine=10_000).value[0]
    y2 = SampledPath(t, t**2)
    i2 = young_integral(y2, x, refine=10_000).value[0]
    u = SampledPath(t, np.sin(3 * t))
    v = SampledPath(t, np.exp(t))
    parts = young_integral(v, u, refine=1_000_000).value[0] + young_integral(u, v, refine=1_000_000).value[0]
    ibp = abs(parts - (np.exp(1.0) * np.sin(3.0) - 0.0))
    ok = abs(i1 - 0.5) <= 1e-4 and abs(i2 - 1 / 3) <= 1e-4 and ibp <= 1e-6
    return ok, f"int t dt err {abs(i1 - 0.5):.1e}, int t^2 dt err {abs(i2 - 1 / 3):.1e} (1e-4), by-parts {ibp:.1e} (1e-6)"


def criterion_12():
    worst = 0.0
    for p, depth in path_set():
        worst = max(worst, rel_error(mul(path_signature(reverse(p), depth), path_signature(p, depth)), unit(p.d, depth)))
    return worst <= 1e-10, f"max relative error {worst:.2e} (tol 1e-10)"


def _cli(argv):
    out, err = io.StringIO(), io.StringIO()
    with redirect_stdout(out), redirect_stderr(err):
        status = cli_main(argv)
    return status, out.getvalue(), err.getvalue()


def criterion_13():
    rng = np.random.default_rng(SEED + 13)
    pts = np.cumsum(rng.normal(size=(9, 2)), axis=0)
    with tempfile.TemporaryDirectory() as tmp:
        csv = Path(tmp, "path.csv")
        rows = ["t,x1,x2"] + [f"{i},{format(a, '.17g')},{format(b, '.17g')}" for i, (a, b) in enumerate(pts)]
        csv.write_text("\n".join(rows) + "\n")
        status, out, _ = _cli(["sig", "--depth", "3", str(csv)])
        sig_json = Path(tmp, "sig.json")
        sig_json.write_text(out)
        reloaded = read_tensor_json(sig_json)[0]
        status2, dist_out, _ = _cli(["dist", "--depth", "3", str(csv), str(sig_json)])
        dist = float(dist_out) if status2 == 0 else math.inf
        memory = rho_metric(reloaded, path_signature(SampledPath.from_points(pts), 3))
        bad = Path(tmp, "bad.csv")
        bad.write_text("t,x1,x2\n0,0,0\n1,zz,1\n")
        bad_status, bad_out, _ = _cli(["sig", "--depth", "3", str(bad)])
    ok = status == 0 and dist <= 1e-12 and memory <= 1e-12 and bad_status == 2 and bad_out == ""
    return ok, f"dist after round trip {dist:.1e}, vs in-memory {memory:.1e} (1e-12); corrupted CSV exit {bad_status}"


CRITERIA = {i: globals()[f"criterion_{i}"] for i in range(1, 14)}


def _record(i):
    ok, detail = CRITERIA[i]()
    line = f"ACCEPTANCE {i:2d}: {'PASS' if ok else 'FAIL'}  {detail}"
    RESULTS.append(line)
    print(line)
    return ok, detail


@pytest.mark.parametrize("i", list(CRITERIA))
def test_acceptance(i):
    ok, detail = _record(i)
    assert ok, detail


if __name__ == "__main__":
    results = [_record(i)[0] for i in CRITERIA]
    sys.exit(0 if all(results) else 1)
