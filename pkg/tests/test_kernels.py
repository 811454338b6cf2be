from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from orthoquiv import _pykernels, exact, kernels

ints = st.integers(min_value=-20, max_value=20)


def _mat(n, m):
    return st.lists(st.lists(ints, min_size=m, max_size=m), min_size=n, max_size=n)


def _naive_rank(rows):
    m = [[Fraction(x) for x in r] for r in rows]
    rank = 0
    cols = len(m[0]) if m else 0
    for c in range(cols):
        piv = next((r for r in range(rank, len(m)) if m[r][c] != 0), None)
        if piv is None:
            continue
        m[rank], m[piv] = m[piv], m[rank]
        for r in range(len(m)):
            if r != rank and m[r][c] != 0:
                f = m[r][c] / m[rank][c]
                m[r] = [a - f * b for a, b in zip(m[r], m[rank])]
        rank += 1
    return rank


def test_backend_is_reported():
    assert kernels.BACKEND in ("cython", "python")


@given(st.integers(1, 6), st.integers(1, 6), st.data())
def test_rank_matches_naive_gauss(n, m, data):
    rows = data.draw(_mat(n, m))
    assert _pykernels.int_rank(rows) == _naive_rank(rows)
    assert kernels.int_rank(rows) == _naive_rank(rows)


@given(st.integers(1, 6), st.integers(1, 6), st.data())
def test_rank_split_is_rank_of_leading_block(n, m, data):
    rows = data.draw(_mat(n, m))
    split = data.draw(st.integers(0, m))
    lead, full = kernels.int_rank_split(rows, split)
    assert full == _naive_rank(rows)
    assert lead == (_naive_rank([r[:split] for r in rows]) if split else 0)
    assert _pykernels.int_rank_split(rows, split) == (lead, full)


@given(st.integers(1, 4), st.data())
def test_eval_words_agree_between_backends(n, data):
    mats = data.draw(st.lists(_mat(n, n), min_size=1, max_size=3))
    words = data.draw(st.lists(st.lists(st.integers(0, len(mats) - 1), min_size=1, max_size=5)
                               .map(tuple), min_size=1, max_size=8))
    expect = []
    for w in words:
        p = exact.identity(n)
        for a in w:
            p = exact.matmul(exact.as_matrix(mats[a]), p)
        expect.append(exact.trace(p))
    assert _pykernels.eval_words(words, mats) == expect
    assert kernels.eval_words(words, mats) == expect


@pytest.mark.skipif(kernels.compiled_impl is None, reason="compiled kernel not built")
def test_compiled_kernel_is_selected():
    assert kernels.BACKEND == "cython"
    assert kernels.eval_words is kernels.compiled_impl.eval_words


def test_empty_word_rejected():
    with pytest.raises(ValueError):
        _pykernels.eval_words([()], [[[1]]])


def test_benchmark_script_runs(capsys):
    import importlib.util
    from pathlib import Path

    path = Path(__file__).parents[1] / "benchmarks" / "bench_kernels.py"
    spec = importlib.util.spec_from_file_location("bench_kernels", path)
    mod = importlib.util.module_from_spec(spec)
    spec.loader.exec_module(mod)
    assert mod.main(["--repeat", "1"]) == 0
    assert "eval_words_s" in capsys.readouterr().out


def test_fallback_is_selected_by_environment():
    import os
    import subprocess
    import sys

    env = dict(os.environ, ORTHOQUIV_PURE_PYTHON="1")
    out = subprocess.run([sys.executable, "-c", "from orthoquiv import kernels; print(kernels.BACKEND)"],
                         capture_output=True, text=True, env=env, check=True).stdout.strip()
    assert out == "python"
