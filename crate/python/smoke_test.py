"""Smoke test for the Python bindings.

Build the extension first:

    cargo build -p wwords-py --release --features extension-module

then run `python3 python/smoke_test.py`. The script copies the built
library next to itself under the importable name and exercises the module.
"""

import pathlib
import shutil
import sys
import tempfile

ROOT = pathlib.Path(__file__).resolve().parent.parent


def find_library():
    for profile in ("release", "debug"):
        for name in ("libwwords_py.so", "libwwords_py.dylib", "wwords_py.dll"):
            path = ROOT / "target" / profile / name
            if path.exists():
                return path
    sys.exit("built library not found; run: cargo build -p wwords-py --release --features extension-module")


def main():
    lib = find_library()
    suffix = ".pyd" if lib.suffix == ".dll" else ".so"
    workdir = tempfile.mkdtemp()
    shutil.copy(lib, pathlib.Path(workdir) / ("wwords_py" + suffix))
    sys.path.insert(0, workdir)
    import wwords_py as w

    report = w.verify("alladi-gordon", qmax=30)
    assert report["equal"], report
    print("alladi-gordon to q^30:", "equal" if report["equal"] else "mismatch")

    schur = w.System.preset("schur-weighted")
    f = schur.enumerate(10)
    assert f == schur.recurrence(10)
    print("Schur counts:", f.erase_all().counts())

    b2 = w.System.preset("primc-weighted").dilate(2, {"a": -1, "d": 1})
    print(b2)

    found = w.System.preset("schur-dilated-mod3").discover(["a", "b"], qmax=18)
    assert [c["substitution"]["c"] for c in found] == [{"a": 1, "b": 1}]
    print("relation found: c = ab")

    check = w.sample_statistics("schur-companion", samples=100, seed=1)
    assert not check["failures"], check["failures"][:3]
    print("sampled statistics:", check["samples"], "partitions checked")
    print("ok")


if __name__ == "__main__":
    main()
