"""Smoke test for the pynakayama extension module.

Uses an installed `pynakayama` if present, otherwise builds the extension
with cargo and loads it from the target directory.
"""

import importlib.machinery
import importlib.util
import pathlib
import subprocess
import sys

ROOT = pathlib.Path(__file__).resolve().parent.parent


def load():
    try:
        import pynakayama

        return pynakayama
    except ImportError:
        pass
    subprocess.run(["cargo", "build", "--release", "-p", "pynakayama"], cwd=ROOT, check=True)
    path = ROOT / "target" / "release" / "libpynakayama.so"
    loader = importlib.machinery.ExtensionFileLoader("pynakayama", str(path))
    spec = importlib.util.spec_from_file_location("pynakayama", path, loader=loader)
    module = importlib.util.module_from_spec(spec)
    loader.exec_module(module)
    return module


def main():
    nk = load()

    dims = dict(nk.catalog(1, 0))
    assert dims == {"P:1|1": 4, "W:1|1:k=0": 1, "S:1|1:k=0": 2, "N:1|1:k=0": 2, "M:1|1:k=0": 3}, dims

    u = nk.Bimodule.construct("N:1|2:k=1", 2)
    v = nk.Bimodule.construct("M:2|1:k=1", 2)
    parts, residual = (u @ v).decompose(1)
    assert residual == 0
    assert parts["N:1|1:k=1"] == 1, parts

    lam = nk.Bimodule.regular(2)
    assert (lam @ u).is_isomorphic(u)
    assert nk.Bimodule.from_json(u.to_json()).dims() == u.dims()

    assert nk.cell_chain(2, 2) == ["J_split", "J_M0", "J_1", "J_2"]

    b = nk.cell_birep(2, 1)
    assert b.objects == ["N_1", "N_2", "M_1", "M_2"]
    f = b.f_matrix()
    assert all(x == 2 for row in f for x in row)
    assert b.is_simple_transitive() and not b.verify()
    local = b.localize([1])
    assert local.rank == 3 and local.fingerprint() == [1]

    for n in (1, 2, 3):
        entries, counts = nk.classify(n, 1)
        assert len(entries) == 2**n and all(e[2] for e in entries)
        assert counts == {n + j: c for j, c in enumerate(binomials(n))}, counts

    try:
        b.action_matrix("W:1|1:k=2")
    except ValueError:
        pass
    else:
        raise AssertionError("generator outside the apex accepted")

    print("pynakayama smoke test passed")


def binomials(n):
    row = [1]
    for _ in range(n):
        row = [a + b for a, b in zip([0] + row, row + [0])]
    return row


if __name__ == "__main__":
    sys.exit(main())
