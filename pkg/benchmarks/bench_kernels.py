"""Compare the compiled kernels with the numpy fallback, and time a full AP step under each.

    python benchmarks/bench_kernels.py [--sizes 1000,10000,100000] [--repeat 20]
"""
import argparse
import os
import subprocess
import sys
import timeit

import numpy as np

from eulermaxwell import _kernels_py

try:
    from eulermaxwell import _kernels as _compiled
except ImportError:
    _compiled = None


def _inputs(m, seed=0):
    rng = np.random.default_rng(seed)
    n = 1.0 + 0.5 * rng.random(m)
    qx, qy = rng.normal(size=m), rng.normal(size=m)
    sub, sup = -rng.random(m), -rng.random(m)
    diag = 2.5 + rng.random(m)
    return n, qx, qy, sub, diag, sup, rng.normal(size=m)


def bench_kernels(sizes, repeat):
    rows = []
    for m in sizes:
        n, qx, qy, sub, diag, sup, rhs = _inputs(m)
        for name, mod in (("python", _kernels_py), ("cython", _compiled)):
            if mod is None:
                continue
            t_flux = min(timeit.repeat(lambda: mod.llf_fluxes(n, qx, qy, 0, 1.0, 1.0, 1.0, 1.0),
                                       number=1, repeat=repeat))
            t_tri = min(timeit.repeat(lambda: mod.thomas(sub, diag, sup, rhs), number=1, repeat=repeat))
            rows.append((m, name, t_flux, t_tri))
    return rows


_STEP_SNIPPET = """
import time
from eulermaxwell import onefluid
from eulermaxwell.harness import ExperimentConfig, build_setup
s = build_setup(ExperimentConfig(case='shock', lam=1e-2, n_cells={n}))
snap = s.snapshot
t = time.perf_counter()
for _ in range({steps}):
    snap = onefluid.step(snap, 1e-6, s.scheme, s.bc)
print((time.perf_counter() - t) / {steps})
"""


def bench_step(n, steps):
    out = {}
    for label, env_flag in (("cython", None), ("python", "1")):
        env = dict(os.environ)
        env.pop("EULERMAXWELL_PURE_PYTHON", None)
        if env_flag:
            env["EULERMAXWELL_PURE_PYTHON"] = env_flag
        res = subprocess.run([sys.executable, "-c", _STEP_SNIPPET.format(n=n, steps=steps)], env=env,
                             capture_output=True, text=True, check=True)
        out[label] = float(res.stdout.strip())
    return out


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--sizes", default="1000,10000,100000")
    ap.add_argument("--repeat", type=int, default=20)
    ap.add_argument("--step-cells", type=int, default=20000)
    ap.add_argument("--steps", type=int, default=50)
    args = ap.parse_args(argv)
    sizes = [int(s) for s in args.sizes.split(",")]
    if _compiled is None:
        print("compiled extension not built; only the fallback is timed")
    print(f"{'cells':>8} {'backend':>8} {'llf_fluxes [ms]':>16} {'thomas [ms]':>12}")
    for m, name, tf, tt in bench_kernels(sizes, args.repeat):
        print(f"{m:>8} {name:>8} {1e3 * tf:>16.3f} {1e3 * tt:>12.3f}")
    step = bench_step(args.step_cells, args.steps)
    print(f"AP step, {args.step_cells} cells: " + ", ".join(f"{k} {1e3 * v:.2f} ms" for k, v in step.items()))


if __name__ == "__main__":
    main()
