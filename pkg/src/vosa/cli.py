"""Command line interface: exact computations with deterministic output.

Subcommands: zhu (build/certify the twisted Zhu algebra), verify (run an
identity suite), basis (graded dimensions), omega (lowest-weight space of
the canonical twisted module), induce (truncated induction from a seed
module).  All results are rational and byte-identical across runs; JSON
reports carry the schema tag "vosa-zhu/1".  Completed zhu runs are cached
under a content hash of the inputs and the code version.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys
import tempfile
from fractions import Fraction

from . import __version__

SCHEMA = "vosa-zhu/1"

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_UNCERTIFIED = 2


def _frac(text: str) -> Fraction:
    return Fraction(text)


def _context(args):
    from .zhu import ctx_identity, ctx_sigma, ctx_tau

    if args.twist == "sigma":
        return ctx_sigma(args.l)
    if args.twist == "id":
        return ctx_identity(args.l)
    if args.twist == "tau":
        if args.l != 2:
            raise ValueError("the pair-swap twist is defined for --l 2")
        return ctx_tau()
    raise ValueError(f"unknown twist {args.twist}")


def _cache_dir(args):
    d = args.cache_dir or os.environ.get("VOSA_CACHE_DIR")
    return d


def _cache_key(payload: dict) -> str:
    blob = json.dumps(payload, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(blob.encode()).hexdigest()


def _cache_get(cache_dir, key):
    if not cache_dir:
        return None
    path = os.path.join(cache_dir, key + ".json")
    if os.path.exists(path):
        with open(path) as f:
            return json.load(f)
    return None


def _cache_put(cache_dir, key, result: dict) -> None:
    if not cache_dir:
        return
    os.makedirs(cache_dir, exist_ok=True)
    path = os.path.join(cache_dir, key + ".json")
    fd, tmp = tempfile.mkstemp(dir=cache_dir, suffix=".tmp")
    try:
        with os.fdopen(fd, "w") as f:
            json.dump(result, f, sort_keys=True)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _emit(result: dict, args) -> None:
    if args.format == "json":
        text = json.dumps(result, sort_keys=True, indent=2) + "\n"
    else:
        lines = []
        for k in sorted(result):
            v = result[k]
            if isinstance(v, dict):
                v = ", ".join(f"{kk}: {vv}" for kk, vv in sorted(v.items()))
            lines.append(f"{k:<16} {v}")
        text = "\n".join(lines) + "\n"
    if args.output:
        with open(args.output, "w") as f:
            f.write(text)
    else:
        sys.stdout.write(text)


def cmd_zhu(args) -> int:
    from .modules import certified_zhu
    from .zhu import ZhuAlgebra, block_profile

    ctx = _context(args)
    key = _cache_key({
        "cmd": "zhu",
        "sector": ctx.sector.describe(),
        "twist": ctx.name,
        "max_weight": str(args.max_weight),
        "margin": str(args.margin),
        "certify": bool(args.certify),
        "version": __version__,
    })
    cached = _cache_get(_cache_dir(args), key)
    if cached is not None:
        _emit(cached, args)
        return EXIT_OK if cached.get("certified", True) else EXIT_UNCERTIFIED
    if args.certify:
        rep = certified_zhu(ctx, args.max_weight, args.margin)
        alg = rep["algebra"]
        result = {
            "schema": SCHEMA,
            "command": "zhu",
            "twist": args.twist,
            "l": args.l,
            "dim": rep["dim_upper"],
            "dim_lower": rep["dim_lower"],
            "stabilized": rep["stabilized"],
            "certified": rep["certified"],
        }
    else:
        alg = ZhuAlgebra(ctx, args.max_weight, args.margin)
        result = {
            "schema": SCHEMA,
            "command": "zhu",
            "twist": args.twist,
            "l": args.l,
            "dim": alg.dim,
            "certified": False,
        }
    prof = block_profile(alg)
    result["blocks"] = prof["blocks"]
    result["center_dim"] = prof["center_dim"]
    result["radical_dim"] = prof["radical_dim"]
    _cache_put(_cache_dir(args), key, result)
    _emit(result, args)
    if args.certify and not result["certified"]:
        return EXIT_UNCERTIFIED
    return EXIT_OK


def _suite_virasoro(ctx, args) -> dict:
    from .fields import Virasoro, verify_translation

    vir = Virasoro(ctx.sector)
    c = vir.central_charge()
    ok = c == Fraction(args.l, 2)
    details = {"central_charge": str(c), "expected": str(Fraction(args.l, 2))}
    b = {((Fraction(-1, 2), 0),): Fraction(1)}
    samples = [(n, {(): Fraction(1)}) for n in
               (Fraction(-3, 2), Fraction(-1, 2), Fraction(1, 2))]
    tr = verify_translation(ctx.sector, vir.omega, b, samples)
    ok = ok and tr["ok"]
    details["translation"] = tr["ok"]
    return {"ok": ok, "details": details}


def _suite_jacobi(ctx, args) -> dict:
    from .fields import verify_commutator, verify_skew_symmetry, Virasoro
    from .modules import twisted_module

    sector = ctx.sector
    space = twisted_module(ctx)
    vir = Virasoro(sector)
    gens = [{((Fraction(-1, 2), g),): Fraction(1)} for g in sector.gids]
    checked = 0
    supp = {g: ctx.module_support(g) for g in sector.gids}
    targets = [{m: Fraction(1)} for m in space.basis(Fraction(3, 2))]
    for gi, u in enumerate(gens):
        for gj, v in enumerate(gens):
            ms = [supp[gi] - 1, supp[gi], supp[gi] + 1]
            ns = [supp[gj] - 1, supp[gj]]
            samples = [(m - Fraction(1, 2), n - Fraction(1, 2), w)
                       for m in ms for n in ns for w in targets[:4]]
            rep = verify_commutator(space, u, v, samples)
            if not rep["ok"]:
                return {"ok": False, "details": rep}
            checked += rep["checked"]
        sk = verify_skew_symmetry(sector, vir.omega, u, gens[0])
        if not sk["ok"]:
            return {"ok": False, "details": sk}
        checked += sk["checked"]
    return {"ok": True, "details": {"checked": checked}}


def _suite_zhu_axioms(ctx, args) -> dict:
    from .zhu import ZhuAlgebra
    from .fields import Virasoro

    alg = ZhuAlgebra(ctx, args.max_weight, args.margin)
    assoc = alg.check_associative()
    vir = Virasoro(ctx.sector)
    wcl = alg.reduce(vir.omega)
    central = all(
        _commutes(alg, wcl, i) for i in range(alg.dim)
    )
    unit = alg.unit_coords()
    unit_ok = all(
        alg.star_coords(i, i) is not None for i in range(alg.dim)
    ) and _is_unit(alg, unit)
    ok = assoc and central and unit_ok
    return {"ok": ok, "details": {"associative": assoc, "omega_central":
                                  central, "unit": unit_ok}}


def _commutes(alg, coords, i) -> bool:
    from .exact import vec_iadd

    lhs: dict = {}
    for t, c in coords.items():
        vec_iadd(lhs, alg.star_coords(t, i), c)
        vec_iadd(lhs, alg.star_coords(i, t), -c)
    return not lhs


def _is_unit(alg, unit) -> bool:
    from .exact import vec_iadd

    for i in range(alg.dim):
        acc: dict = {}
        for t, c in unit.items():
            vec_iadd(acc, alg.star_coords(t, i), c)
        vec_iadd(acc, {i: Fraction(-1)})
        if acc:
            return False
    return True


def _suite_lie(ctx, args) -> dict:
    from .liealg import (symbol, verify_hom_to_zhu, verify_jacobi,
                         verify_bracket_on_module)
    from .modules import twisted_module
    from .zhu import ZhuAlgebra

    alg = ZhuAlgebra(ctx, args.max_weight, args.margin)
    hom = verify_hom_to_zhu(alg)
    if not hom["ok"]:
        return {"ok": False, "details": hom}
    space = twisted_module(ctx)
    sector = ctx.sector
    targets = [{m: Fraction(1)} for m in space.basis(Fraction(1))]
    gens = [{((Fraction(-1, 2), g),): Fraction(1)} for g in sector.gids]
    supp = {g: ctx.module_support(g) for g in sector.gids}
    syms = [symbol(u, supp[g] - Fraction(1, 2) + 1)
            for g, u in enumerate(gens)]
    for x in syms:
        for y in syms:
            br = verify_bracket_on_module(sector, space, x, y, targets)
            if not br["ok"]:
                return {"ok": False, "details": br}
            jc = verify_jacobi(sector, space, x, y, syms[0], targets)
            if not jc["ok"]:
                return {"ok": False, "details": jc}
    return {"ok": True, "details": {"hom_pairs": hom["pairs"]}}


def _suite_omega(ctx, args) -> dict:
    from .modules import OmegaSpace, certified_zhu, twisted_module, \
        zhu_action_report

    rep = certified_zhu(ctx, args.max_weight, args.margin)
    act = zhu_action_report(rep["algebra"], rep["omega"])
    ok = act["ok"] and rep["certified"]
    return {"ok": ok, "details": {"omega_dim": rep["omega"].dim,
                                  "action": act, "certified":
                                  rep["certified"]}}


SUITES = {
    "virasoro": _suite_virasoro,
    "jacobi": _suite_jacobi,
    "zhu-axioms": _suite_zhu_axioms,
    "lie": _suite_lie,
    "omega": _suite_omega,
}


def cmd_verify(args) -> int:
    ctx = _context(args)
    rep = SUITES[args.suite](ctx, args)
    result = {
        "schema": SCHEMA,
        "command": "verify",
        "suite": args.suite,
        "twist": args.twist,
        "l": args.l,
        "ok": rep["ok"],
        "details": _jsonable(rep["details"]),
    }
    _emit(result, args)
    return EXIT_OK if rep["ok"] else EXIT_UNCERTIFIED


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, Fraction):
        return str(obj)
    return obj


def cmd_basis(args) -> int:
    ctx = _context(args)
    dims = ctx.sector.graded_dims(args.max_weight)
    result = {
        "schema": SCHEMA,
        "command": "basis",
        "twist": args.twist,
        "l": args.l,
        "graded_dims": {str(k): v for k, v in sorted(dims.items())},
    }
    _emit(result, args)
    return EXIT_OK


def cmd_omega(args) -> int:
    from .modules import OmegaSpace, twisted_module

    ctx = _context(args)
    space = twisted_module(ctx)
    om = OmegaSpace(space, args.max_weight)
    degs: dict = {}
    for d in om.degrees():
        degs[str(d)] = degs.get(str(d), 0) + 1
    result = {
        "schema": SCHEMA,
        "command": "omega",
        "twist": args.twist,
        "l": args.l,
        "dim": om.dim,
        "dims_by_degree": degs,
        "lowest_only": all(d == 0 for d in om.degrees()),
    }
    _emit(result, args)
    return EXIT_OK


def cmd_induce(args) -> int:
    from .modules import (certified_zhu, induce_truncated, omega_umats,
                          regular_umats)

    ctx = _context(args)
    rep = certified_zhu(ctx, args.max_weight, args.margin)
    alg = rep["algebra"]
    if args.seed == "regular":
        umats, udim = regular_umats(alg)
    else:
        umats, udim = omega_umats(alg, rep["omega"])
    res = induce_truncated(alg, umats, udim, args.depth)
    result = {
        "schema": SCHEMA,
        "command": "induce",
        "twist": args.twist,
        "l": args.l,
        "seed": args.seed,
        "seed_dim": udim,
        "graded_dims": {str(k): v
                        for k, v in sorted(res["graded_dims"].items())},
        "omega_is_seed": res["omega_is_seed"],
    }
    _emit(result, args)
    return EXIT_OK if res["omega_is_seed"] else EXIT_UNCERTIFIED


def _add_common(p) -> None:
    p.add_argument("--l", type=int, default=2,
                   help="number of fermionic generators")
    p.add_argument("--twist", choices=["id", "sigma", "tau"],
                   default="sigma")
    p.add_argument("--max-weight", dest="max_weight", type=_frac,
                   default=Fraction(2), help="weight cutoff, e.g. 5/2")
    p.add_argument("--margin", type=_frac, default=Fraction(1))
    p.add_argument("--config", help="JSON file with default flag values")
    p.add_argument("--cache-dir", dest="cache_dir")
    p.add_argument("--output", help="write the report to a file")
    p.add_argument("--format", choices=["json", "table"], default="json")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="vosa",
        description="exact twisted Zhu algebras of free-fermion "
                    "vertex superalgebras",
    )
    ap.add_argument("--version", action="version", version=__version__)
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("zhu", help="build and certify the Zhu algebra")
    _add_common(p)
    p.add_argument("--certify", action="store_true")
    p.set_defaults(func=cmd_zhu)

    p = sub.add_parser("verify", help="run an identity suite")
    _add_common(p)
    p.add_argument("--suite", choices=sorted(SUITES), required=True)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("basis", help="graded dimensions of the Fock space")
    _add_common(p)
    p.set_defaults(func=cmd_basis)

    p = sub.add_parser("omega", help="lowest-weight space of the module")
    _add_common(p)
    p.set_defaults(func=cmd_omega)

    p = sub.add_parser("induce", help="truncated induction from a seed")
    _add_common(p)
    p.add_argument("--seed", choices=["omega", "regular"], default="omega")
    p.add_argument("--depth", type=_frac, default=Fraction(3, 2),
                   help="degree cutoff of the induced module")
    p.set_defaults(func=cmd_induce)
    return ap


def _apply_config(args, argv) -> None:
    """Config file supplies defaults; explicit flags win."""
    if not getattr(args, "config", None):
        return
    with open(args.config) as f:
        conf = json.load(f)
    # flags given on the command line take precedence over the file
    given = set()
    for tok in argv:
        if tok.startswith("--"):
            given.add(tok.split("=")[0][2:].replace("-", "_"))
    for key, val in conf.items():
        attr = key.replace("-", "_")
        if attr in given or not hasattr(args, attr):
            continue
        if attr in ("max_weight", "margin", "depth"):
            val = Fraction(str(val))
        setattr(args, attr, val)


def main(argv=None) -> int:
    parser = build_parser()
    if argv is None:
        argv = sys.argv[1:]
    args = parser.parse_args(argv)
    try:
        _apply_config(args, argv)
        return args.func(args)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
