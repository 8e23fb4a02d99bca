"""Compare the compiled and pure-Python kernels.

Two layers are timed:

* micro: ``BilinearForm.pair``, ``laurent_mul`` and ``torus_mul`` called
  directly from each backend module on identical inputs;
* end to end: the transport-matrix suite run in a subprocess, once with
  the default backend and once with ``SLQTRACE_PURE=1``.

Usage: ``python3 benchmarks/bench_kernels.py [--n 3] [--repeat 5]``
"""

from __future__ import annotations

import argparse
import json
import os
import random
import subprocess
import sys
import timeit

from slqtrace import _kernels_py

try:
    from slqtrace import _kernels as _kernels_c
except ImportError:  # extension not built
    _kernels_c = None


def _inputs(n: int, seed: int = 7):
    from slqtrace.qtrace import triangle_presentation

    pres = triangle_presentation(n)
    rng = random.Random(seed)
    dim = pres.dim
    vecs = [tuple(rng.randint(-3, 3) for _ in range(dim)) for _ in range(64)]
    lau_a = {rng.randint(-40, 40): rng.randint(-5, 5) or 1 for _ in range(12)}
    lau_b = {rng.randint(-40, 40): rng.randint(-5, 5) or 1 for _ in range(12)}
    left = [(v, dict(lau_a)) for v in vecs[:16]]
    right = [(v, dict(lau_b)) for v in vecs[16:32]]
    return pres.Q, vecs, lau_a, lau_b, left, right


def micro(mod, n: int, repeat: int) -> dict:
    Q, vecs, la, lb, left, right = _inputs(n)
    form = mod.BilinearForm(Q)
    pairs = [(a, b) for a in vecs[:16] for b in vecs[16:32]]

    def f_pair():
        for a, b in pairs:
            form.pair(a, b)

    def f_laurent():
        for _ in range(50):
            mod.laurent_mul(la, lb)

    def f_torus():
        mod.torus_mul(form, left, right)

    out = {}
    for name, fn in (("pair x256", f_pair), ("laurent_mul x50", f_laurent), ("torus_mul 16x16", f_torus)):
        out[name] = min(timeit.repeat(fn, number=10, repeat=repeat)) / 10
    return out


_E2E = (
    "import time;from slqtrace.kernels import BACKEND;from slqtrace.qtrace import transport_report;"
    "t=time.perf_counter();ok=transport_report({n}).ok;print(BACKEND, ok, time.perf_counter()-t)"
)


def end_to_end(n: int, pure: bool) -> dict:
    env = dict(os.environ)
    env["SLQTRACE_PURE"] = "1" if pure else "0"
    res = subprocess.run(
        [sys.executable, "-c", _E2E.format(n=n)], capture_output=True, text=True, env=env, check=True
    )
    backend, ok, secs = res.stdout.split()
    return {"backend": backend, "ok": ok == "True", "seconds": float(secs)}


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=int, default=3)
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--json", action="store_true")
    args = ap.parse_args(argv)

    report = {"n": args.n, "micro": {"python": micro(_kernels_py, args.n, args.repeat)}}
    if _kernels_c is not None:
        report["micro"]["cython"] = micro(_kernels_c, args.n, args.repeat)
    report["end_to_end"] = [end_to_end(args.n, pure=False), end_to_end(args.n, pure=True)]

    if args.json:
        print(json.dumps(report, indent=1, sort_keys=True))
        return 0
    print(f"kernel micro-benchmarks, n={args.n} (seconds per call batch)")
    py = report["micro"]["python"]
    cy = report["micro"].get("cython")
    for name, t in py.items():
        line = f"  {name:<18} python {t:.6f}"
        if cy:
            line += f"   cython {cy[name]:.6f}   speedup {t / cy[name]:.1f}x"
        print(line)
    print("transport suite end to end")
    for row in report["end_to_end"]:
        print(f"  {row['backend']:<7} ok={row['ok']}  {row['seconds']:.3f} s")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
