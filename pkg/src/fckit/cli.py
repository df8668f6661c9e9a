"""``fc-kit``: command-line front end.

Exit status is 0 on a definite answer, 2 when a budget ran out before one
was reached, and 1 on bad input.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from pathlib import Path

from . import __version__, catalog
from .amalgam import Amalgam, Inapplicable, amalgam_centre, amalgam_from_json
from .autos import AutomorphismError, automorphism_from_json, bounded_test
from .fc import DEFAULT_ORBIT_CAP, DEFAULT_WITNESS_STEPS, Status, centre_test, conjugation_orbit, default_cap, fc_membership
from .geometry import BallBudgetError, DistortionError, certify_qi, enumerate_ball, homomorphism, WordMetric
from .hnn import HnnExtension, fk_tower, hnn_centre, hnn_fc_bound, hnn_from_json
from .models import FiniteTableGroup, FreeAbelianGroup, FreeGroup, GroupModel, ModelError
from .presentations import parse_presentation
from .words import ParseError, WordError, format_word

EXIT_OK, EXIT_INPUT, EXIT_INCONCLUSIVE = 0, 1, 2
MODEL_KINDS = ("amalgam", "hnn", "table", "free", "free_abelian")


class InputError(Exception):
    pass


# -- group resolution -----------------------------------------------------------

def load_group(kind: str, path: str) -> GroupModel:
    text = Path(path).read_text()
    if kind == "amalgam":
        return amalgam_from_json(json.loads(text))
    if kind == "hnn":
        return hnn_from_json(json.loads(text))
    if kind == "table":
        return FiniteTableGroup.from_json(json.loads(text))
    pres = parse_presentation(text)
    names = pres.alphabet.names
    if kind == "free":
        if pres.relators:
            raise InputError("a free group presentation must have no relators")
        return FreeGroup(len(names), names)
    m = FreeAbelianGroup(len(names), names)
    bad = [format_word(r) for r in pres.relators if not m.is_identity(m.eval(r))]
    if bad:
        raise InputError(f"relators {bad} do not hold in the free abelian group")
    return m


def _take_group(args, rest: list[str]) -> tuple[GroupModel, str, list[str]]:
    """Group from ``--presentation`` or else from the first positional argument."""
    if args.presentation:
        if not args.model:
            raise InputError("--presentation needs --model " + "|".join(MODEL_KINDS))
        return load_group(args.model, args.presentation), args.presentation, rest
    if not rest:
        raise InputError("missing group (catalog name or --presentation FILE --model KIND)")
    return catalog.resolve(rest[0]), rest[0], rest[1:]


def _need(rest: list[str], names: list[str]) -> list[str]:
    if len(rest) != len(names):
        raise InputError(f"expected arguments: {' '.join(names)}; got {rest}")
    return rest


def _fmt(m, g) -> str:
    return format_word(m.to_word(g))


# -- commands ---------------------------------------------------------------------

def cmd_ball(args, rest):
    m, group, rest = _take_group(args, rest)
    _need(rest, [])
    R = 3 if args.radius is None else args.radius
    ball = enumerate_ball(m, R)
    if args.csv:
        sys.stdout.write(ball.to_csv())
        return None, EXIT_OK
    return {"group": group, "radius": R, "size": len(ball), "sphere_sizes": ball.sphere_sizes(),
            "budget": {"radius": R}}, EXIT_OK


def cmd_orbit(args, rest):
    m, group, rest = _take_group(args, rest)
    (w,) = _need(rest, ["WORD"])
    cap = default_cap(DEFAULT_ORBIT_CAP) if args.cap is None else args.cap
    orb = conjugation_orbit(m, m.word(w), cap)
    out = {"group": group, "element": w, "closed": orb.closed, "size": orb.size, "budget": {"orbit_cap": cap}}
    if orb.closed:
        out["orbit"] = [_fmt(m, x) for x in orb.elements]
        out["conjugators"] = [format_word(c) for c in orb.conjugators]
    else:
        out["orbit_sample"] = [_fmt(m, x) for x in orb.elements[:20]]
    return out, EXIT_OK if orb.closed else EXIT_INCONCLUSIVE


def _verdict_exit(v) -> int:
    return EXIT_INCONCLUSIVE if v.status is Status.INCONCLUSIVE else EXIT_OK


def cmd_fc(args, rest):
    m, group, rest = _take_group(args, rest)
    (w,) = _need(rest, ["WORD"])
    v = fc_membership(m, m.word(w), args.cap, args.witness_steps)
    return {"group": group, "element": w, **v.as_dict()}, _verdict_exit(v)


def cmd_centre(args, rest):
    m, group, rest = _take_group(args, rest)
    out = {"group": group, "budget": {}}
    if rest:
        (w,) = _need(rest, ["WORD"])
        out["element"] = w
        out["central"] = centre_test(m, m.word(w))
        return out, EXIT_OK
    if isinstance(m, Amalgam):
        try:
            out["centre"] = sorted(_fmt(m, g) for g in amalgam_centre(m))
            out["equals_fc_centre"] = True
        except Inapplicable as e:
            out["applicable"], out["note"] = False, str(e)
            return out, EXIT_INCONCLUSIVE
        return out, EXIT_OK
    if isinstance(m, HnnExtension):
        rep = hnn_centre(m)
        out.update(rep.as_dict(m))
        return out, EXIT_OK if rep.applicable else EXIT_INCONCLUSIVE
    if isinstance(m, FiniteTableGroup):
        out["centre"] = sorted(_fmt(m, g) for g in m.centre())
        return out, EXIT_OK
    raise InputError("structural centre needs an amalgam, HNN or finite model; pass a WORD to test one element")


def cmd_bounded(args, rest):
    m, group, rest = _take_group(args, rest)
    (path,) = _need(rest, ["AUT_FILE"])
    phi = automorphism_from_json(m, json.loads(Path(path).read_text()))
    v = bounded_test(phi, args.cap)
    return {"group": group, "automorphism": phi.as_dict(), **v.as_dict()}, _verdict_exit(v)


def cmd_fk(args, rest):
    m, group, rest = _take_group(args, rest)
    _need(rest, [])
    if not isinstance(m, HnnExtension):
        raise InputError("fk needs an HNN extension")
    k = 6 if args.kmax is None else args.kmax
    tower = fk_tower(m, k)
    bound = hnn_fc_bound(m, tower)

    def gens(d):
        return [_fmt(m.base, g) for g in d.generators]
    out = {
        "group": group, "budget": {"kmax": k},
        "F": [{"k": i + 1, "generators": gens(f), "trivial": f.trivial} for i, f in enumerate(tower.fixed)],
        "domains": [gens(d) for d in tower.domains],
        "F_inf_generators": gens(tower.union), "stabilized": tower.stabilized,
        "fc_bound": {"applicable": bound.applicable, "exact": bound.exact, "note": bound.note},
    }
    return out, EXIT_OK if tower.stabilized else EXIT_INCONCLUSIVE


def cmd_qi(args, rest):
    (path,) = _need(rest, ["MAP_FILE"])
    doc = json.loads(Path(path).read_text())
    src, tgt = catalog.resolve(doc["source"]), catalog.resolve(doc["target"])
    f = homomorphism(src, tgt, doc["images"])
    R = 8 if args.radius is None else args.radius
    sball = enumerate_ball(src, R)
    metric = WordMetric(tgt)
    reach = max(metric.norm(f(g)) for g in sball.elements())
    tR = doc.get("target_radius", reach)
    cert = certify_qi(f, sball, enumerate_ball(tgt, tR), doc.get("eps_max"))
    out = {"source": doc["source"], "target": doc["target"], "target_radius": tR,
           "budget": {"radius": R}, "certificate": cert.as_dict(src, tgt)}
    return out, EXIT_OK


def cmd_verify_paper(args, rest):
    from .verify import run_all
    _need(rest, [])
    t0 = time.perf_counter()
    results = run_all()
    ok = all(r.passed for r in results)
    out = {"passed": ok, "seconds": round(time.perf_counter() - t0, 3),
           "checks": [r.as_dict() for r in results], "budget": {}}
    return out, EXIT_OK if ok else EXIT_INPUT


COMMANDS = {
    "ball": (cmd_ball, "GROUP", "enumerate a Cayley ball"),
    "orbit": (cmd_orbit, "GROUP WORD", "conjugation orbit of an element"),
    "fc": (cmd_fc, "GROUP WORD", "FC-centre membership verdict"),
    "centre": (cmd_centre, "GROUP [WORD]", "centre of the group, or test one element"),
    "bounded": (cmd_bounded, "GROUP AUT_FILE", "is Fix(phi) of finite index?"),
    "fk": (cmd_fk, "GROUP", "fixed-point tower of an HNN extension"),
    "qi": (cmd_qi, "MAP_FILE", "quasi-isometry constants of a homomorphism on a ball"),
    "verify-paper": (cmd_verify_paper, "", "run the built-in regression suite"),
}


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="fc-kit", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"fc-kit {__version__}")
    sub = p.add_subparsers(dest="command", required=True)
    for name, (_, usage, help_) in COMMANDS.items():
        sp = sub.add_parser(name, help=help_, usage=f"fc-kit {name} [options] {usage}")
        sp.add_argument("args", nargs="*", help=usage or argparse.SUPPRESS)
        fmt = sp.add_mutually_exclusive_group()
        fmt.add_argument("--json", dest="pretty", action="store_false", help="compact JSON (default)")
        fmt.add_argument("--pretty", dest="pretty", action="store_true", help="indented JSON")
        sp.add_argument("--cap", type=int, help="orbit/coset cap (default 10000, or FC_KIT_CAP)")
        sp.add_argument("--radius", type=int, help="ball radius")
        sp.add_argument("--kmax", type=int, help="largest k for the F_k tower (default 6)")
        sp.add_argument("--witness-steps", type=int, default=DEFAULT_WITNESS_STEPS)
        sp.add_argument("--presentation", metavar="PATH", help="load the group from a file")
        sp.add_argument("--model", choices=MODEL_KINDS, help="how to read --presentation")
        sp.add_argument("--csv", action="store_true", help="ball: write CSV instead of JSON")
        sp.set_defaults(pretty=False)
    return p


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    fn = COMMANDS[args.command][0]
    try:
        out, code = fn(args, list(args.args))
    except (InputError, catalog.CatalogError, ParseError, WordError, ModelError, AutomorphismError,
            OSError, json.JSONDecodeError, KeyError, ValueError) as e:
        print(json.dumps({"error": str(e) or type(e).__name__, "version": __version__}), file=sys.stderr)
        return EXIT_INPUT
    except BallBudgetError as e:
        out, code = {"error": str(e), "radius_reached": e.radius_reached}, EXIT_INCONCLUSIVE
    except DistortionError as e:
        out, code = {"error": str(e), "worst_pair": [repr(x) for x in e.worst_pair or ()]}, EXIT_INCONCLUSIVE
    if out is not None:
        out = {"command": args.command, "version": __version__, **out}
        print(json.dumps(out, indent=2 if args.pretty else None, default=str))
    return code


if __name__ == "__main__":
    sys.exit(main())
