"""Smoke test for the naimark_py extension module.

Build and run:
    cargo build -p naimark-py --release
    cp target/release/libnaimark_py.so python/naimark_py.so
    python3 python/smoke_test.py
"""

import math
import os
import sys

sys.path.insert(0, os.path.dirname(os.path.abspath(__file__)))

import naimark_py as nk


def close(a, b, tol=1e-9):
    return all(abs(x - y) <= tol for ra, rb in zip(a, b) for x, y in zip(ra, rb))


r = math.sqrt(2.0 / 3.0)
mb = [
    [r, -r / 2, -r / 2],
    [0.0, r * math.sqrt(3) / 2, -r * math.sqrt(3) / 2],
]
assert nk.is_parseval(mb)
g = nk.naimark_complement(mb)
assert len(g) == 1 and len(g[0]) == 3
gram = [[g[0][i] * g[0][j] for j in range(3)] for i in range(3)]
assert close(gram, [[1 / 3] * 3] * 3, 1e-10)

m = nk.matroid_from_columns(mb)
assert m.rank == 2 and m.bases == [[1, 2], [1, 3], [2, 3]]
assert m.dual().rank == 1
assert m.dual().dual() == m
assert nk.is_gale_pair(mb, g)

p = [[1.0, 0.0, 0.0], [0.0, 0.0, 0.0], [0.0, 0.0, 0.0]]
assert close(nk.naimark_gram(p), [[0, 0, 0], [0, 1, 0], [0, 0, 1]])

a = [[2.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 0.0]]
assert close(nk.spectral_shift(a), [[0, 0, 0], [0, 1, 0], [0, 0, 2]])
assert close(nk.kernel_extension(a), [[0, 0, 0], [0, 0, 0], [0, 0, 1]])
assert nk.verify_prop1(a)

s = nk.scalability_solve([[1.0, 0.0, 1.0], [0.0, 1.0, 1.0]])
assert s is None

assert nk.stratum_dimension(2, 4) == 7
assert nk.stratum_dimension(2, 4, "complex") == 12

rep = nk.check_property("spectral", "gale", 4, trials=20, seed=0, sampler="multi")
assert rep["matches_prediction"] and rep["failures"] > 0 and rep["witness"] is not None
rep = nk.check_property("kernel", "gale", 4, trials=20, seed=0)
assert rep["failures"] == 0

try:
    nk.naimark_complement([[1.0, 0.0], [0.0, 2.0]])
except ValueError:
    pass
else:
    raise AssertionError("non-Parseval input accepted")

try:
    nk.Matroid(4, [[1, 2], [3, 4]])
except ValueError:
    pass
else:
    raise AssertionError("non-matroid family accepted")

print("python smoke test: ok")
