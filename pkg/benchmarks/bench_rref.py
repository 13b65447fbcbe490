"""Compare the compiled elimination kernel with the pure-Python fallback.

Three measurements:

* ``rref_int`` on the matrices that a batch of cohomology and Toomer
  computations actually sends to the kernel (captured once, replayed on both);
* ``rref_int`` on random sparse matrices, with small entries (the int64 path)
  and with entries large enough to overflow (the big-integer fallback);
* an end-to-end run, once per backend in a subprocess, since the backend is
  chosen at import time.

Usage: python benchmarks/bench_rref.py [--repeat R]
"""

import argparse
import os
import random
import subprocess
import sys
import timeit

from sullivan import _rref_py, linalg

try:
    from sullivan import _rref
except ImportError:
    _rref = None

WORKLOAD = """
from sullivan.cohomology import betti, toomer
from sullivan.dga import SullivanAlgebra, sphere_model, tensor
from sullivan.lie import wedge_of_spheres_model
alg = tensor(tensor(sphere_model(2), sphere_model(2, ["a", "b"])), sphere_model(4, ["u", "v"]))
twisted = SullivanAlgebra.build([("x", 2), ("a", 2), ("y", 3), ("b", 3), ("z", 4)],
                                {"y": "x^2", "b": "a*x", "z": "x*b - a*y"})
betti(alg, 24)
toomer(alg, 20)
toomer(twisted, 18)
betti(wedge_of_spheres_model([3, 4, 5], 16), 16)
"""

END_TO_END = "import time\nt = time.perf_counter()\n" + WORKLOAD + (
    "from sullivan.linalg import BACKEND\nprint(BACKEND, time.perf_counter() - t)\n")


def captured_matrices():
    out = []
    real = linalg.rref_int

    def spy(rows):
        rows = [dict(r) for r in rows]
        out.append(rows)
        return real(rows)

    linalg.rref_int = spy
    try:
        exec(WORKLOAD, {})
    finally:
        linalg.rref_int = real
    return out


def random_rows(rng, n, density, bound):
    return [{c: rng.randint(-bound, bound) for c in range(n) if rng.random() < density} for _ in range(n)]


def time_kernels(label, mats, repeat):
    fns = [("python", _rref_py.rref_int)]
    if _rref is not None:
        fns.insert(0, ("cython", _rref.rref_int))
        assert [_rref.rref_int(m) for m in mats] == [_rref_py.rref_int(m) for m in mats]
    t = {name: min(timeit.repeat(lambda: [fn(m) for m in mats], number=1, repeat=repeat)) for name, fn in fns}
    line = f"{label:38s} " + "  ".join(f"{k} {v * 1000:8.2f} ms" for k, v in t.items())
    if len(t) == 2:
        line += f"  speedup {t['python'] / t['cython']:.2f}x"
    print(line)


def end_to_end(pure):
    env = dict(os.environ)
    env.pop("SULLIVAN_PURE_PYTHON", None)
    if pure:
        env["SULLIVAN_PURE_PYTHON"] = "1"
    out = subprocess.run([sys.executable, "-c", END_TO_END], env=env, capture_output=True, text=True, check=True)
    backend, seconds = out.stdout.split()
    return backend, float(seconds)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    if _rref is None:
        print("compiled kernel not built; only the fallback is timed")

    mats = captured_matrices()
    time_kernels(f"workload matrices ({len(mats)})", mats, args.repeat)
    rng = random.Random(0)
    time_kernels("random 400x400, 1% fill, entries +-1", [random_rows(rng, 400, 0.01, 1) for _ in range(4)],
                 args.repeat)
    time_kernels("random 60x60, 30% fill, entries +-20", [random_rows(rng, 60, 0.3, 20) for _ in range(4)],
                 args.repeat)

    timings = dict(end_to_end(pure) for pure in (False, True))
    for backend, secs in timings.items():
        print(f"end to end ({backend}): {secs:.2f} s")
    if len(timings) == 2:
        print(f"end-to-end speedup: {timings['python'] / timings['cython']:.2f}x")


if __name__ == "__main__":
    main()
