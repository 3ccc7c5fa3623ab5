#!/usr/bin/env python3
"""Time the numba kernels against the pure-numpy fallback.

Both paths are imported directly, so the comparison runs regardless of
OLG_DISABLE_NUMBA; the backend the library would pick is reported too.
Outputs are checked for equality before any timing is printed.

    python3 benchmarks/bench_kernels.py --repeat 5
"""

from __future__ import annotations

import argparse
import timeit
from fractions import Fraction

import numpy as np

from olg import kernels
from olg.feasible import discount_weights
from olg.kernels import _numpy
from olg.stage_game import load_bundled

try:
    from olg.kernels import _numba
except ImportError:
    _numba = None


def cases():
    """(label, call taking a kernel module) pairs on representative inputs."""
    three = load_bundled("three_action")
    coord = load_bundled("coordination")
    pd = load_bundled("prisoners_dilemma")
    out = []

    U, _ = three.integer_payoffs
    dpow, _ = discount_weights(Fraction(2, 3), three.n)
    P, n = U.shape
    M = P**n
    out.append((f"stable_numerators three_action ({M} seqs)",
                lambda k: k.stable_numerators(U, P, n, dpow, 0, M)))

    # synthetic 3-player game with 5 actions each: 125 profiles, ~2M stable sequences
    rng = np.random.default_rng(0)
    Ub = rng.integers(-9, 10, size=(125, 3)).astype(np.int64)
    wb, _ = discount_weights(Fraction(2, 3), 3)
    Mb = 125**3
    out.append((f"stable_numerators random 5x5x5 ({Mb} seqs)",
                lambda k: k.stable_numerators(Ub, 125, 3, wb, 0, Mb)))

    Uc, _ = coord.integer_payoffs
    T = 2
    wc, _ = discount_weights(Fraction(2, 3), coord.n * T)
    Pc, nc = Uc.shape
    Mc = Pc ** (nc * T)
    out.append((f"lifetime_numerators coordination T=2 ({Mc} seqs)",
                lambda k: k.lifetime_numerators(Uc, Pc, nc, T, wc, 0, Mc)))

    Up, _ = pd.integer_payoffs
    Tp = 3
    wp, _ = discount_weights(Fraction(9, 10), pd.n * Tp)
    Pp, npl = Up.shape
    Mp = Pp ** (npl * Tp)
    out.append((f"lifetime_numerators PD T=3 ({Mp} seqs)",
                lambda k: k.lifetime_numerators(Up, Pp, npl, Tp, wp, 0, Mp)))

    cum = np.array([[1, 3, 6], [2, 6, 6], [5, 6, 6]], dtype=np.int64)
    denom = np.array([6, 6, 6], dtype=np.int64)
    trials = 10**6
    out.append((f"sample_draws 3 overlaps ({trials} trials)",
                lambda k: k.sample_draws(cum, denom, trials, np.uint64(7))))
    out.append(("splitmix_block (10^6 outputs)",
                lambda k: k.splitmix_block(np.uint64(7), 0, 10**6)))
    return out


def best_time(fn, repeat: int) -> float:
    return min(timeit.repeat(fn, number=1, repeat=repeat))


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=5, help="timing repeats; the best run is reported")
    args = parser.parse_args(argv)

    print(f"library backend: {kernels.BACKEND}")
    if _numba is None:
        print("numba path unavailable (not installed or OLG_DISABLE_NUMBA set); timing numpy only")
    print(f"{'kernel':<52} {'numpy s':>10} {'numba s':>10} {'speedup':>8}")
    for label, call in cases():
        ref = call(_numpy)
        t_np = best_time(lambda: call(_numpy), args.repeat)
        if _numba is None:
            print(f"{label:<52} {t_np:>10.4f} {'-':>10} {'-':>8}")
            continue
        got = call(_numba)  # first call compiles or loads the cache
        if not np.array_equal(np.asarray(ref), np.asarray(got)):
            raise SystemExit(f"{label}: numba and numpy disagree")
        t_nb = best_time(lambda: call(_numba), args.repeat)
        print(f"{label:<52} {t_np:>10.4f} {t_nb:>10.4f} {t_np / t_nb:>7.1f}x")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
