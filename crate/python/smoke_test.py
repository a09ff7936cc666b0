#!/usr/bin/env python3
"""Smoke test for the blockperm_py extension module.

Builds nothing itself: it finds the compiled shared object under target/,
imports it, and drives the public API end to end, cross-checking the engine
against both the module's Ryser oracle and an independent pure-Python Ryser.

Run after `cargo build -p blockperm-py` (or --release):

    python3 python/smoke_test.py
"""

import math
import random
import shutil
import sys
import tempfile
from pathlib import Path

REPO_ROOT = Path(__file__).resolve().parent.parent


def load_module():
    candidates = [
        REPO_ROOT / "target" / profile / "libblockperm_py.so"
        for profile in ("release", "debug")
    ]
    built = [p for p in candidates if p.exists()]
    if not built:
        sys.exit(
            "libblockperm_py.so not found; build it first with "
            "`cargo build -p blockperm-py`"
        )
    newest = max(built, key=lambda p: p.stat().st_mtime)
    stage = Path(tempfile.mkdtemp(prefix="blockperm_py_"))
    shutil.copy2(newest, stage / "blockperm_py.so")
    sys.path.insert(0, str(stage))
    import blockperm_py

    print(f"PASS import: loaded {newest.relative_to(REPO_ROOT)}")
    return blockperm_py


def ryser_reference(matrix):
    """Independent permanent: Ryser's inclusion-exclusion, pure Python."""
    n = len(matrix)
    total = 0j
    for mask in range(1, 1 << n):
        row_sums = 1.0 + 0j
        for i in range(n):
            s = 0j
            for j in range(n):
                if mask >> j & 1:
                    s += matrix[i][j]
            row_sums *= s
        bits = bin(mask).count("1")
        total += (-1) ** bits * row_sums
    return (-1) ** n * total


def close(x, y, tol):
    return abs(x - y) <= tol * max(1.0, abs(x), abs(y))


def main():
    bp = load_module()

    # Generated instance: engine vs module Ryser vs pure-Python Ryser.
    f = bp.Factorization.generate(10, 3, seed=7, density=0.6)
    assert f.dim == 10 and f.depth == 3, "generate produced wrong shape"
    value, stats = bp.compute_permanent(f)
    dense = f.reconstruct()
    module_ryser = bp.permanent_ryser(dense)
    python_ryser = ryser_reference(dense)
    assert close(value, module_ryser, 1e-8), (
        f"engine {value} vs module Ryser {module_ryser}"
    )
    assert close(value, python_ryser, 1e-8), (
        f"engine {value} vs pure-Python Ryser {python_ryser}"
    )
    assert stats["per_layer_phys"] == [2, 4, 8], "unexpected degree schedule"
    assert stats["max_bond"] >= 1 and stats["svd_count"] > 0
    print(
        f"PASS engine: n=10 depth=3 permanent {value:.6g} matches Ryser "
        f"(max bond {stats['max_bond']}, {stats['svd_count']} SVDs)"
    )

    # JSON round trip preserves the factorization and its permanent.
    again = bp.Factorization.from_json(f.to_json())
    value2, _ = bp.compute_permanent(again)
    assert again.blocks() == f.blocks(), "JSON round trip changed the blocks"
    assert close(value, value2, 1e-12), "JSON round trip changed the permanent"
    print("PASS json: to_json/from_json round trip is faithful")

    # Dense factorizer: random 5x5, reconstruct and match the permanent.
    rng = random.Random(12345)
    dense5 = [
        [complex(rng.uniform(-1, 1), rng.uniform(-1, 1)) for _ in range(5)]
        for _ in range(5)
    ]
    g = bp.Factorization.from_dense(dense5)
    g.validate()
    rebuilt = g.reconstruct()
    resid = math.sqrt(
        sum(abs(rebuilt[i][j] - dense5[i][j]) ** 2 for i in range(5) for j in range(5))
    )
    scale = math.sqrt(sum(abs(dense5[i][j]) ** 2 for i in range(5) for j in range(5)))
    assert resid <= 1e-9 * scale, f"factorizer reconstruction residual {resid:.3e}"
    value3, _ = bp.compute_permanent(g)
    want = ryser_reference(dense5)
    assert close(value3, want, 1e-8), f"factorized permanent {value3} vs {want}"
    naive = bp.permanent_naive(dense5)
    assert close(naive, want, 1e-9), f"naive oracle {naive} vs Ryser {want}"
    print(
        f"PASS factorizer: 5x5 dense matrix round-trips through {g.depth} factors, "
        f"permanent {value3:.6g} agrees"
    )

    # Bandwidth-reduction permutation on a scrambled tridiagonal pattern.
    n = 8
    scramble = list(range(n))
    rng.shuffle(scramble)
    banded = [
        [
            1.0 + 0j if abs(scramble[i] - scramble[j]) <= 1 else 0j
            for j in range(n)
        ]
        for i in range(n)
    ]
    perm = bp.rcm_permutation(banded)
    assert sorted(perm) == list(range(n)), "rcm did not return a permutation"
    width = max(
        abs(i - j)
        for i in range(n)
        for j in range(n)
        if banded[perm[i]][perm[j]] != 0
    )
    assert width == 1, f"rcm left bandwidth {width} on a relabeled tridiagonal"
    print("PASS rcm: scrambled tridiagonal relabeled back to bandwidth 1")

    # Error paths surface as ValueError with useful messages.
    for bad_call, label in [
        (lambda: bp.Factorization.from_json("{"), "malformed JSON"),
        (lambda: bp.Factorization.generate(0, 2), "zero dimension"),
        (lambda: bp.permanent_ryser([[1.0 + 0j], [2.0 + 0j]]), "non-square matrix"),
        (
            lambda: bp.Factorization.from_dense(
                [[1 + 0j, 1 + 0j], [1 + 0j, 1 + 0j]]
            ),
            "singular matrix",
        ),
    ]:
        try:
            bad_call()
        except ValueError:
            pass
        else:
            raise AssertionError(f"{label} did not raise ValueError")
    print("PASS errors: malformed inputs raise ValueError")

    print("smoke test: all checks passed")


if __name__ == "__main__":
    main()
