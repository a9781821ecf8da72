"""Compare the compiled (Cython) and pure-Python kernels.

    python benchmarks/bench_kernels.py [--repeat N] [--json]

Kernel timings run in-process against both backends directly; the
end-to-end oracle timing runs in subprocesses because the backend is chosen
at import (``STEENALG_KERNELS=python`` forces the fallback).
"""

from __future__ import annotations

import argparse
import json
import os
import random
import subprocess
import sys
import timeit

import numpy as np

from steenalg import kernels

END_TO_END = (
    "import time, steenalg; from steenalg import oracle; "
    "t=time.perf_counter(); r=oracle.verify_basis(2, 20); r3=oracle.verify_basis(3, 40); "
    "assert r.ok and r3.ok; print(steenalg.BACKEND, time.perf_counter()-t)"
)


def _matrices(p: int, shape, count: int, seed: int):
    rnd = np.random.default_rng(seed)
    return [rnd.integers(0, p, size=shape, dtype=np.int64) for _ in range(count)]


def bench_rref(backend, mats, p, repeat):
    return min(timeit.repeat(lambda: [backend.rref_mod_p(m, p) for m in mats], number=1, repeat=repeat))


def bench_binom(backend, args, repeat):
    f = backend.binom_mod_p
    return min(timeit.repeat(lambda: [f(n, k, p) for n, k, p in args], number=1, repeat=repeat))


def end_to_end(force_python: bool):
    env = dict(os.environ)
    if force_python:
        env["STEENALG_KERNELS"] = "python"
    else:
        env.pop("STEENALG_KERNELS", None)
    out = subprocess.run([sys.executable, "-c", END_TO_END], env=env, capture_output=True, text=True, check=True).stdout.split()
    return out[0], float(out[1])


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--seed", type=int, default=7)
    ap.add_argument("--json", action="store_true")
    args = ap.parse_args(argv)

    backends = {"python": kernels.python_backend}
    if kernels.compiled_backend is not None:
        backends["cython"] = kernels.compiled_backend

    rows = []
    for p, shape, count in ((2, (8, 8), 400), (3, (24, 30), 100), (5, (120, 140), 5)):
        mats = _matrices(p, shape, count, args.seed)
        times = {name: bench_rref(b, mats, p, args.repeat) for name, b in backends.items()}
        rows.append({"kernel": "rref_mod_p", "case": f"p={p} {shape[0]}x{shape[1]} x{count}", **times})

    rnd = random.Random(args.seed)
    binom_args = [(rnd.randrange(10**6), rnd.randrange(10**6), rnd.choice((2, 3, 5, 7))) for _ in range(20000)]
    times = {name: bench_binom(b, binom_args, args.repeat) for name, b in backends.items()}
    rows.append({"kernel": "binom_mod_p", "case": "20000 random calls", **times})

    e2e = {}
    for force in (True, False):
        name, t = end_to_end(force)
        e2e[name] = t
    rows.append({"kernel": "oracle verify_basis", "case": "p=2 to 20, p=3 to 40", **e2e})

    if args.json:
        print(json.dumps(rows, indent=2, sort_keys=True))
        return
    names = list(backends)
    print(f"{'kernel':<22}{'case':<28}" + "".join(f"{n:>12}" for n in names) + f"{'speedup':>10}")
    for r in rows:
        cells = "".join(f"{r[n]:>11.4f}s" if n in r else f"{'-':>12}" for n in names)
        speed = f"{r['python'] / r['cython']:>9.1f}x" if "cython" in r and r["cython"] else f"{'-':>10}"
        print(f"{r['kernel']:<22}{r['case']:<28}{cells}{speed}")


if __name__ == "__main__":
    main()
