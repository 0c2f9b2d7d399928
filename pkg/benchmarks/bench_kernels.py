"""Compare the numba and numpy kernel paths.

    python3 benchmarks/bench_kernels.py --repeat 5

Numba compile time is paid once before timing starts.
"""

import argparse
import time

import numpy as np

from hdlkernel import _kernels as K
from hdlkernel import generators as G
from hdlkernel.semantics import compile_netlist, elaborate
from hdlkernel.shape import leaf_count


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t)
    return min(times)


def comb_case(k):
    c = G.gen_dc(k)
    nk = compile_netlist(elaborate(c))
    n_in = nk.n_in
    if n_in <= 20:
        label = "exhaustive"
        cases = np.arange(1 << n_in, dtype=np.int64)
        vals = np.zeros((nk.n_slots, cases.size), dtype=np.uint8)
        vals[:n_in] = (cases[None, :] >> np.arange(n_in)[:, None]) & 1
    else:
        label = "random"
        cases = np.empty(1 << 18)
        vals = np.zeros((nk.n_slots, cases.size), dtype=np.uint8)
        vals[:n_in] = np.random.default_rng(0).integers(0, 2, size=(n_in, cases.size), dtype=np.uint8)

    def run(fn):
        return lambda: fn(nk.kind, nk.a, nk.b, nk.c, nk.out, vals.copy())

    return f"dc({k}) {label}, {cases.size} cases", run(K.comb_eval_numba), run(K.comb_eval_numpy)


def sim_case(c, label, T, batch, seed=0):
    nk = compile_netlist(elaborate(c))
    rng = np.random.default_rng(seed)
    ins = rng.integers(0, 2, size=(T, leaf_count(c.input_shape), batch), dtype=np.uint8)
    args = (nk.kind, nk.a, nk.b, nk.c, nk.out, nk.dff_d, nk.dff_q, nk.out_slots, nk.n_slots, ins)
    return f"{label}, T={T}, {batch} traces", lambda: K.sim_numba(*args), lambda: K.sim_numpy(*args)


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--dc-k", type=int, default=3, help="dc size for the combinational case; above 20 inputs cases are random")
    ap.add_argument("--ticks", type=int, default=256)
    ap.add_argument("--batch", type=int, default=1000)
    args = ap.parse_args(argv)
    if not K.HAVE_NUMBA:
        ap.exit(1, "numba is not installed\n")

    cases = [
        comb_case(args.dc_k),
        sim_case(G.gen_fifo("x", 4, 4), "fifo(4,4)", args.ticks, args.batch),
        sim_case(G.gen_register(), "register", args.ticks, args.batch),
        sim_case(G.gen_ripple(n=8), "ripple(8) streamed", args.ticks, args.batch),
    ]
    print(f"{'case':<40} {'numba s':>10} {'numpy s':>10} {'speedup':>8}")
    for label, nb, npy in cases:
        nb()  # compile
        t_nb, t_np = best_of(nb, args.repeat), best_of(npy, args.repeat)
        print(f"{label:<40} {t_nb:>10.4f} {t_np:>10.4f} {t_np / t_nb:>7.1f}x")


if __name__ == "__main__":
    main()
