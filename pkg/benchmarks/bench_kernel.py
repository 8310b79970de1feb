"""Compare the compiled and pure-Python series kernels.

Run with ``python benchmarks/bench_kernel.py``.  The end-to-end timing runs
``certify`` in subprocesses so each backend is selected at import.
"""

import os
import random
import subprocess
import sys
import timeit

from gccert import _pykernel

try:
    from gccert import _ckernel
except ImportError:
    _ckernel = None


def dense(rng, n, den):
    exps = sorted(rng.sample(range(1, 4 * n), n))
    return exps, [rng.randint(-den, den) or 1 for _ in exps]


def bench_kernels(repeat=5):
    rng = random.Random(7)
    xe, xc = dense(rng, 200, 10**6)
    ye, yc = dense(rng, 200, 10**6)
    idx, alpha = dense(rng, 40, 50)
    rows = []
    for name, mod in (("python", _pykernel), ("cython", _ckernel)):
        if mod is None:
            rows.append((name, None, None))
            continue
        conv = min(timeit.repeat(lambda: mod.convolve(xe, xc, ye, yc, 600), number=5, repeat=repeat)) / 5
        inv = min(timeit.repeat(lambda: mod.inverse_monic(idx, alpha, 7, 400), number=5, repeat=repeat)) / 5
        rows.append((name, conv, inv))
    return rows


SNIPPET = ("import time; from gccert.lift import certify; s=time.perf_counter(); "
           "certify({n}, {m}, '{t}', {N}); print(time.perf_counter()-s)")


def bench_certify(n=7, m=3, t="1/8", N=4):
    out = {}
    for name, env in (("python", {"GCCERT_PURE_PYTHON": "1"}), ("cython", {})):
        r = subprocess.run([sys.executable, "-c", SNIPPET.format(n=n, m=m, t=t, N=N)],
                           env={**os.environ, **env}, capture_output=True, text=True, check=True)
        out[name] = float(r.stdout.strip())
    return out


def main():
    print("kernel        convolve[ms]  inverse[ms]")
    rows = bench_kernels()
    for name, conv, inv in rows:
        if conv is None:
            print(f"{name:<12}  (not built)")
        else:
            print(f"{name:<12}  {conv * 1e3:11.2f}  {inv * 1e3:11.2f}")
    if all(r[1] for r in rows):
        print(f"speedup       {rows[0][1] / rows[1][1]:11.2f}x {rows[0][2] / rows[1][2]:11.2f}x")
    if _ckernel is not None:
        e2e = bench_certify()
        print(f"certify(7, 3, 1/8, N=4): python {e2e['python']:.2f}s, cython {e2e['cython']:.2f}s, "
              f"speedup {e2e['python'] / e2e['cython']:.2f}x")


if __name__ == "__main__":
    main()
