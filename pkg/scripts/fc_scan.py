"""Classify every element of a Cayley ball as in or out of the FC-centre and
report the verdict counts and the Proved elements with their orbit sizes."""

import argparse
import json
import time
from collections import Counter
from dataclasses import asdict, dataclass, field

from fckit import catalog
from fckit.fc import fc_membership
from fckit.geometry import enumerate_ball
from fckit.words import format_word


@dataclass
class ScanConfig:
    groups: list[str] = field(default_factory=lambda: [
        "dihedral_inf", "klein_bottle", "sl2z_amalgam", "psl2z", "hnn_flip", "bs(2,3)"])
    radius: int = 4
    orbit_cap: int = 2000
    witness_steps: int = 10


def scan(name: str, cfg: ScanConfig) -> dict:
    m = catalog.resolve(name)
    t0 = time.perf_counter()
    ball = enumerate_ball(m, cfg.radius)
    counts, proved = Counter(), []
    for g in ball.elements():
        v = fc_membership(m, g, cfg.orbit_cap, cfg.witness_steps)
        counts[v.status.value] += 1
        if v.proved:
            proved.append((format_word(m.to_word(g)), v.certificate["index"]))
    return {"group": name, "ball_size": len(ball), "counts": dict(counts),
            "proved": sorted(proved, key=lambda p: (len(p[0]), p[0])), "seconds": round(time.perf_counter() - t0, 2)}


def main(argv=None):
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("groups", nargs="*")
    p.add_argument("--radius", type=int, default=ScanConfig.radius)
    p.add_argument("--orbit-cap", type=int, default=ScanConfig.orbit_cap)
    p.add_argument("--json", action="store_true")
    a = p.parse_args(argv)
    cfg = ScanConfig(radius=a.radius, orbit_cap=a.orbit_cap)
    if a.groups:
        cfg.groups = a.groups
    results = [scan(g, cfg) for g in cfg.groups]
    if a.json:
        print(json.dumps({"config": asdict(cfg), "results": results}, indent=2))
        return
    for r in results:
        c = r["counts"]
        print(f"{r['group']:14s} ball {r['ball_size']:5d}  Proved {c.get('Proved', 0):4d}  "
              f"Refuted {c.get('Refuted', 0):4d}  Inconclusive {c.get('Inconclusive', 0):4d}  ({r['seconds']}s)")
        shown = ", ".join(f"{w} [{n}]" for w, n in r["proved"][:12])
        print(f"{'':14s} Proved: {shown}{' ...' if len(r['proved']) > 12 else ''}")


if __name__ == "__main__":
    main()
