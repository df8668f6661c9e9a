"""Sphere sizes of Cayley balls for catalog groups, as a table or CSV."""

import argparse
import csv
import sys
import time
from dataclasses import dataclass, field

from fckit import catalog
from fckit.geometry import BallBudgetError, enumerate_ball


@dataclass
class GrowthConfig:
    groups: list[str] = field(default_factory=lambda: [
        "zn(2)", "free(2)", "dihedral_inf", "klein_bottle", "psl2z", "sl2z_amalgam", "bs(1,2)", "bs(2,3)",
        "hnn_flip"])
    radius: int = 8
    ball_cap: int = 500_000


def growth_rows(cfg: GrowthConfig):
    for name in cfg.groups:
        m = catalog.resolve(name)
        t0 = time.perf_counter()
        try:
            sizes = enumerate_ball(m, cfg.radius, cfg.ball_cap).sphere_sizes()
        except BallBudgetError as e:
            sizes = enumerate_ball(m, e.radius_reached, cfg.ball_cap).sphere_sizes()
        yield name, sizes, time.perf_counter() - t0


def main(argv=None):
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("groups", nargs="*", help="catalog names (default: a fixed selection)")
    p.add_argument("--radius", type=int, default=GrowthConfig.radius)
    p.add_argument("--ball-cap", type=int, default=GrowthConfig.ball_cap)
    p.add_argument("--csv", action="store_true")
    a = p.parse_args(argv)
    cfg = GrowthConfig(radius=a.radius, ball_cap=a.ball_cap)
    if a.groups:
        cfg.groups = a.groups
    rows = list(growth_rows(cfg))
    if a.csv:
        w = csv.writer(sys.stdout)
        w.writerow(["group", "radius", "sphere_size", "ball_size"])
        for name, sizes, _ in rows:
            total = 0
            for r, s in enumerate(sizes):
                total += s
                w.writerow([name, r, s, total])
        return
    for name, sizes, dt in rows:
        print(f"{name:14s} |B| = {sum(sizes):8d}  spheres {sizes}  ({dt:.2f}s)")


if __name__ == "__main__":
    main()
