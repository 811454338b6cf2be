"""Compare the compiled and pure-Python kernels on representative workloads.

    python benchmarks/bench_kernels.py [--repeat N]

Both backends are run on identical inputs and their outputs are checked for
equality before timings are reported.
"""

import argparse
import json
import random
import sys
import timeit

from orthoquiv import _pykernels, kernels
from orthoquiv.fixtures import get_fixture
from orthoquiv.groups import asym_subspace_sample, build_asym_model
from orthoquiv.quiver import enumerate_cycles


def _trace_workload():
    model = build_asym_model(get_fixture("trivial-O3-g2").data)
    point = asym_subspace_sample(model, 1)
    words = [c.word for c in enumerate_cycles(model.doubled, 6)]
    ids = sorted(point.matrices)
    index = {a: i for i, a in enumerate(ids)}
    mats = []
    for a in ids:
        mats.append([[int(x) for x in row] for row in point.matrices[a]])
    return [tuple(index[a] for a in w) for w in words], mats


def _rank_workload(n=160, m=120, seed=0):
    rng = random.Random(seed)
    base = [[rng.randint(-9, 9) for _ in range(m)] for _ in range(n // 2)]
    # a rank-deficient block: the second half repeats combinations of the first
    rows = base + [[a + 2 * b for a, b in zip(base[i], base[(i + 1) % len(base)])]
                   for i in range(n - len(base))]
    return rows


def main(argv=None):
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--repeat", type=int, default=5)
    args = p.parse_args(argv)
    words, mats = _trace_workload()
    rows = _rank_workload()
    impls = {"python": _pykernels}
    if kernels.compiled_impl is not None:
        impls["cython"] = kernels.compiled_impl
    else:
        print("compiled kernels not built; timing the Python fallback only", file=sys.stderr)

    results = {}
    outputs = {}
    for name, impl in impls.items():
        outputs[name] = (impl.eval_words(words, mats), impl.int_rank_split(rows, 20))
        t_eval = min(timeit.repeat(lambda: impl.eval_words(words, mats), number=1,
                                   repeat=args.repeat))
        t_rank = min(timeit.repeat(lambda: impl.int_rank_split(rows, 20), number=1,
                                   repeat=args.repeat))
        results[name] = {"eval_words_s": round(t_eval, 5), "int_rank_split_s": round(t_rank, 5)}
    if len(set(map(repr, outputs.values()))) != 1:
        print("backends disagree", file=sys.stderr)
        return 1
    if "cython" in results:
        results["speedup"] = {
            k.removesuffix("_s"): round(results["python"][k] / results["cython"][k], 2)
            for k in results["python"]
        }
    results["workload"] = {"words": len(words), "rank_rows": len(rows), "rank_cols": len(rows[0])}
    print(json.dumps(results, indent=2, sort_keys=True))
    return 0


if __name__ == "__main__":
    sys.exit(main())
