#!/usr/bin/env python3
"""QP1/QP2 support maps for PGM textures.

With no images given, a synthetic 256x256 QP1 field with lags
{(0,1), (1,0), (2,3)} is generated and written to results/synthetic.pgm first.
"""
import argparse
from pathlib import Path

from icsel import ar2d
from icsel.experiments import run_texture, texture_ascii, texture_csv


def synthetic(path: Path, seed: int) -> Path:
    model = ar2d.ArModel2D.from_dict({(0, 1): -0.4, (1, 0): -0.3, (2, 3): 0.25})
    img = ar2d.simulate_2d(model, 256, 256, seed)
    ar2d.write_pgm(path, ar2d.quantize(img, 65535), 65535)
    return path


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("images", nargs="*")
    parser.add_argument("--max-order", default="18x18")
    parser.add_argument("--criterion", default="phibetamin")
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--outdir", default="results")
    args = parser.parse_args()

    outdir = Path(args.outdir)
    outdir.mkdir(exist_ok=True)
    images = [Path(p) for p in args.images] or [synthetic(outdir / "synthetic.pgm", args.seed)]
    m1, m2 = (int(v) for v in args.max_order.lower().split("x"))
    for path in images:
        res = run_texture(path, m1, m2, args.criterion)
        (outdir / f"{path.stem}_support.csv").write_text(texture_csv(res))
        print(f"== {path}")
        print(texture_ascii(res))


if __name__ == "__main__":
    main()
