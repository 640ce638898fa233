"""Acceptance criteria, one test per criterion.

Each test runs the corresponding verification suite at its stated size and
tolerance, checks the runtime budget, and prints a single PASS/FAIL line.
Run ``pytest tests/test_acceptance.py -v`` or ``python3 tests/test_acceptance.py``.
"""

import json
import os
import subprocess
import sys
import time

import pytest

from nclam.verify import run_suite

# (criterion, suite, runtime budget in seconds)
CRITERIA = [
    (1, "enumeration", 5),
    (2, "bijection", 30),
    (3, "thm5", 120),
    (4, "sampler", 60),
    (5, "kemperman", 10),
    (6, "size-tail", 60),
    (7, "prop23", 120),
    (8, "longest-chord", 600),
    (9, "triangulation", 120),
    (10, "convergence", 600),
    (11, "degrees", 120),
    (12, "dimension", 1200),
    (13, "iteration", 60),
]


def _report(line: str, capsys=None) -> None:
    if capsys is None:
        print(line, flush=True)
        return
    with capsys.disabled():
        print("\n" + line, flush=True)


def check_suite(number: int, suite: str, budget: float, capsys=None) -> tuple[bool, str]:
    rep = run_suite(suite)
    within = rep.seconds < budget
    ok = rep.passed and within
    metrics = ", ".join(f"{k}={v:.6g}" if isinstance(v, float) else f"{k}={v}" for k, v in rep.metrics.items() if k != "table")
    line = f"{'PASS' if ok else 'FAIL'} criterion {number} ({suite}): {metrics}; {rep.seconds:.1f}s of {budget}s"
    _report(line, capsys)
    return ok, line


@pytest.mark.slow
@pytest.mark.parametrize("number,suite,budget", CRITERIA, ids=[f"c{c[0]}-{c[1]}" for c in CRITERIA])
def test_criterion(number, suite, budget, capsys):
    ok, line = check_suite(number, suite, budget, capsys)
    assert ok, line


# ---------------------------------------------------------------- criterion 14


def _cli(*argv, env_workers=None):
    env = dict(os.environ)
    if env_workers is not None:
        env["NCLAM_WORKERS"] = str(env_workers)
    proc = subprocess.run([sys.executable, "-m", "nclam", *argv], capture_output=True, check=True, env=env)
    return proc.stdout


def _without_workers(blob: bytes):
    out = []
    for line in blob.decode().splitlines():
        obj = json.loads(line)
        meta = obj.get("meta", obj)
        if "config" in meta:
            meta["config"].pop("workers", None)
        out.append(obj)
    return out


def check_determinism(capsys=None) -> tuple[bool, str]:
    t0 = time.perf_counter()
    pipelines = [
        ("sample", "--weights", "uniform", "--n", "300", "--reps", "6", "--seed", "5"),
        ("sample", "--kind", "triangulation", "--n", "300", "--reps", "4", "--seed", "6"),
        ("sample-tree", "--law", "stable:1.3", "--n", "500", "--reps", "4", "--seed", "7"),
        ("stats", "longest-chord", "--n", "300", "--reps", "12", "--seed", "9"),
        ("stats", "degrees", "--n", "1000", "--reps", "4", "--seed", "11"),
        ("iterate", "--alphas", "1.1,1.4", "--n", "3000", "--seed", "7"),
    ]
    problems = []
    for argv in pipelines:
        a = _cli(*argv, "--workers", "1")
        b = _cli(*argv, "--workers", "1")
        c = _cli(*argv, "--workers", "2")
        if a != b:
            problems.append(f"{argv[0]} not byte-identical")
        if _without_workers(a) != _without_workers(c):
            problems.append(f"{argv[0]} differs across worker counts")
    lam = _cli("iterate", "--alphas", "1.1", "--n", "1000", "--seed", "2", "--workers", "1")
    svgs = {
        subprocess.run([sys.executable, "-m", "nclam", "render"], input=lam, capture_output=True, check=True).stdout
        for _ in range(2)
    }
    if len(svgs) != 1:
        problems.append("render not byte-identical")
    secs = time.perf_counter() - t0
    ok = not problems and secs < 60
    line = (
        f"{'PASS' if ok else 'FAIL'} criterion 14 (determinism): pipelines={len(pipelines) + 1}, "
        f"problems={problems or 0}; {secs:.1f}s of 60s"
    )
    _report(line, capsys)
    return ok, line


def test_criterion_14_determinism(capsys):
    ok, line = check_determinism(capsys)
    assert ok, line


if __name__ == "__main__":
    results = [check_suite(*c)[0] for c in CRITERIA] + [check_determinism()[0]]
    print(f"{sum(results)}/{len(results)} criteria passed")
    sys.exit(0 if all(results) else 1)
