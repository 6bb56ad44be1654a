#!/usr/bin/env python3
"""Build the extension module and exercise the main entry points."""

import json
import pathlib
import shutil
import subprocess
import sys

ROOT = pathlib.Path(__file__).resolve().parent.parent


def build():
    subprocess.run(
        [
            "cargo",
            "build",
            "--release",
            "-p",
            "invdepth-py",
            "--features",
            "extension-module",
        ],
        cwd=ROOT,
        check=True,
    )
    src = ROOT / "target" / "release" / "libinvdepth_py.so"
    dst = pathlib.Path(__file__).resolve().parent / "invdepth_py.so"
    shutil.copyfile(src, dst)


def main():
    build()
    sys.path.insert(0, str(pathlib.Path(__file__).resolve().parent))
    import invdepth_py

    # swap group on F_2^2
    g = invdepth_py.Group(2, 2, [[0, 1, 1, 0]])
    assert g.order() == 2
    assert g.sylow_order() == 2
    assert g.fixed_subspace_dim() == 1
    assert g.hilbert(8) == [1, 1, 2, 2, 3, 3, 4, 4, 5]
    assert g.minimal_generator_degrees(8) == [1, 2]
    assert g.depth(8, 0) == 2
    report = json.loads(g.depth_report(8, 0))
    assert report["depth"] == 2 and report["agreement"]
    verdict = json.loads(g.duflot_bound(8, 0))
    assert verdict["status"] == "pass"
    assert g.carlson_detection(1, 6)
    assert g.comodule_identities(6)
    assert g.stabilizer_order([[1, 1]]) == 2

    degrees = [d for d, _ in invdepth_py.dickson(2, 2)]
    assert degrees == [2, 3]

    scenario = 'p = 2\nn = 2\ngenerators = [[0, 1, 1, 0]]\ntheorems = ["duflot"]\n'
    out = json.loads(invdepth_py.run(scenario))
    assert out["all_passed"] and out["depth"]["depth"] == 2

    print("python smoke test passed")


if __name__ == "__main__":
    main()
