"""The numba and numpy kernel paths agree bit for bit."""

import os
import subprocess
import sys

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from hdlkernel import _kernels as K
from hdlkernel import generators as G
from hdlkernel.semantics import compile_netlist, elaborate
from hdlkernel.shape import leaf_count

from conftest import circuits

pytestmark = pytest.mark.skipif(not K.HAVE_NUMBA, reason="numba not installed")


def _arrays(c):
    return compile_netlist(elaborate(c))


@given(circuits(depth=3), st.integers(1, 40), st.integers(0, 2**31))
def test_comb_eval_parity(c, batch, seed):
    k = _arrays(c)
    rng = np.random.default_rng(seed)
    vals = np.zeros((k.n_slots, batch), dtype=np.uint8)
    vals[: k.n_in] = rng.integers(0, 2, size=(k.n_in, batch), dtype=np.uint8)
    v1, v2 = vals.copy(), vals.copy()
    K.comb_eval_numba(k.kind, k.a, k.b, k.c, k.out, v1)
    K.comb_eval_numpy(k.kind, k.a, k.b, k.c, k.out, v2)
    assert (v1 == v2).all()


@given(circuits(depth=3, allow_dff=True), st.integers(1, 12), st.integers(1, 8), st.integers(0, 2**31))
def test_sim_parity(c, T, batch, seed):
    k = _arrays(c)
    rng = np.random.default_rng(seed)
    ins = rng.integers(0, 2, size=(T, leaf_count(c.input_shape), batch), dtype=np.uint8)
    args = (k.kind, k.a, k.b, k.c, k.out, k.dff_d, k.dff_q, k.out_slots, k.n_slots, ins)
    assert (K.sim_numba(*args) == K.sim_numpy(*args)).all()


@pytest.mark.parametrize("c", [G.gen_ripple(n=6), G.gen_dc(3), G.gen_register(), G.gen_fifo("x", 3, 2)])
def test_longest_path_parity(c):
    k = _arrays(c)
    delay = np.arange(1, k.kind.shape[0] + 1, dtype=np.int64) % 3
    ends = np.concatenate([k.out_slots, k.dff_d]).astype(np.int64)
    args = (k.a, k.b, k.c, k.out, delay, k.n_slots, ends)
    assert K.longest_path_numba(*args) == K.longest_path_numpy(*args)


def test_backend_flag(monkeypatch):
    monkeypatch.delenv("HDLKERNEL_DISABLE_NUMBA", raising=False)
    assert K.backend() == "numba"
    monkeypatch.setenv("HDLKERNEL_DISABLE_NUMBA", "1")
    assert K.backend() == "numpy"
    from hdlkernel.claims import run_claim

    assert run_claim("ripple_implements_carry_add", n=3).verdict
    assert run_claim("register_realise", T=16).verdict


def test_cli_under_numpy_backend():
    env = dict(os.environ, HDLKERNEL_DISABLE_NUMBA="1")
    r = subprocess.run(
        [sys.executable, "-m", "hdlkernel", "sim", "ripple", "--param", "n=4", "--inputs", "cin=0,a=9,b=9"],
        capture_output=True,
        text=True,
        env=env,
    )
    assert r.returncode == 0 and r.stdout.strip() == "sum=2 cout=1"


def test_benchmark_smoke(capsys):
    import importlib.util
    from pathlib import Path

    path = Path(__file__).resolve().parents[1] / "benchmarks" / "bench_kernels.py"
    spec = importlib.util.spec_from_file_location("bench_kernels", path)
    mod = importlib.util.module_from_spec(spec)
    spec.loader.exec_module(mod)
    mod.main(["--repeat", "1", "--dc-k", "1", "--ticks", "8", "--batch", "4"])
    out = capsys.readouterr().out
    assert "dc(1) exhaustive, 16 cases" in out and "register" in out
