#!/usr/bin/env python3
"""Smoke test for the `visatom` extension module.

    python python/smoke_test.py --build     # build the extension first, then test
    python python/smoke_test.py             # use a `visatom` already on sys.path

With --build, the CLI binary is built too and its PNGs are compared pixel for
pixel against in-memory buffers (needs Pillow).
"""

import argparse
import io
import shutil
import subprocess
import sys
import tempfile
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent


def build(tmp: Path) -> Path:
    subprocess.run(
        ["cargo", "build", "--release", "-p", "visatom-python", "--features", "extension-module", "-p", "visatom"],
        cwd=ROOT,
        check=True,
    )
    target = ROOT / "target" / "release"
    lib = next(p for p in (target / "libvisatom_py.so", target / "libvisatom_py.dylib", target / "visatom_py.dll") if p.exists())
    dest = tmp / ("visatom.pyd" if lib.suffix == ".dll" else "visatom.so")
    shutil.copy(lib, dest)
    sys.path.insert(0, str(tmp))
    return target / "visatom"


def main() -> int:
    ap = argparse.ArgumentParser()
    ap.add_argument("--build", action="store_true")
    args = ap.parse_args()

    tmp = Path(tempfile.mkdtemp(prefix="visatom-smoke-"))
    cli = build(tmp) if args.build else None
    import visatom

    cfg = tmp / "cfg.toml"
    cfg.write_text("classes = 4\ninstances = 3\nseed = 42\nwidth = 96\nheight = 64\n")
    ds = visatom.open(str(cfg))
    assert len(ds) == 12, len(ds)
    assert ds.shape == (64, 96), ds.shape

    label, buf = ds.render_indexed(2, 1)
    assert label == 2 and isinstance(buf, bytes) and len(buf) == 64 * 96
    assert ds.render_indexed(2, 1)[1] == buf
    assert ds[2 * 3 + 1] == (label, buf)
    assert ds[-1][0] == 3
    assert ds.render_png(0, 0)[:8] == b"\x89PNG\r\n\x1a\n"

    params = ds.class_params(1)
    assert {"orbit_count", "a1", "b1", "n1", "n2", "quantization", "eta"} <= params.keys()
    assert 0 <= params["n1"] <= 20 and 200 <= params["quantization"] <= 1000

    for bad in (lambda: ds.render_indexed(4, 0), lambda: ds.render_indexed(0, 3), lambda: ds[12], lambda: ds.class_params(4)):
        try:
            bad()
        except IndexError:
            pass
        else:
            raise AssertionError("expected IndexError")

    with ThreadPoolExecutor(4) as pool:
        bufs = list(pool.map(lambda i: ds[i][1], range(len(ds))))
    assert bufs == [ds[i][1] for i in range(len(ds))]

    fixed = visatom.Dataset.from_config('{"classes": 2, "instances": 1, "ranges": {"orbits": 5, "frequency": 0, "quantization": 300}}')
    p = fixed.class_params(1)
    assert (p["orbit_count"], p["n1"], p["n2"], p["quantization"]) == (5, 0, 0, 300), p

    if cli is not None:
        from PIL import Image

        out = tmp / "data"
        subprocess.run([str(cli), "-q", "generate", "--config", str(cfg), "--out", str(out)], check=True)
        disk = visatom.open(str(out / "manifest.jsonl"))
        for c in range(4):
            for i in range(3):
                img = Image.open(out / f"class_{c:05}" / f"img_{i:05}.png")
                assert img.mode == "L" and img.size == (96, 64)
                assert img.tobytes() == disk.render_indexed(c, i)[1], (c, i)

    print(f"ok: {ds!r}")
    shutil.rmtree(tmp, ignore_errors=True)
    return 0


if __name__ == "__main__":
    sys.exit(main())
