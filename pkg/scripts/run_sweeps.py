"""Run the evasion sweeps used by the acceptance suite and write their JSON reports.

    python scripts/run_sweeps.py --out results/ --workers 4
"""

import argparse
import time
from pathlib import Path

from varevasive import build_construction, make_field
from varevasive.verify import dumps, sweep_curves, sweep_flats

SEED = 20240601


def sweeps(workers):
    F11, F31 = make_field(11), make_field(31)
    lines = build_construction(F11, 3, 1, 1)
    yield "lines_f11_n3", lambda: sweep_flats(lines, mode="exhaustive", workers=workers)
    planes = build_construction(F11, 4, 2, 1)
    yield "planes_f11_n4", lambda: sweep_flats(planes, mode="sampled", trials=10**5, seed=SEED, workers=workers)
    conics = build_construction(F31, 3, 1, 2)
    yield "curves_f31_n3", lambda: sweep_curves(conics, 2, 10**4, seed=SEED, workers=workers)
    yield "curves_f961_n3", lambda: sweep_curves(conics, 2, 100, seed=SEED, ext_degree=2, workers=workers)
    bucket = build_construction(F11, 4, 1, 1, 2, exponents=(7, 3))
    yield "bucketed_f11_n4_m2", lambda: sweep_flats(bucket, mode="sampled", trials=10**4, seed=SEED, workers=workers)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--out", type=Path, default=Path("results"))
    ap.add_argument("--workers", type=int, default=1)
    args = ap.parse_args()
    args.out.mkdir(parents=True, exist_ok=True)
    for name, run in sweeps(args.workers):
        t0 = time.perf_counter()
        rep = run()
        (args.out / f"{name}.json").write_text(dumps(rep.to_json()))
        status = "PASS" if rep.passed and rep.point_count["all_ok"] else "FAIL"
        print(f"{name:22s} {status} max={rep.max_intersection:<4d} bound={rep.bound:<6d} "
              f"trials={rep.trials:<7d} {time.perf_counter() - t0:6.1f}s")


if __name__ == "__main__":
    main()
