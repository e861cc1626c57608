"""Command line driver: ``ietlab <command> [options]``.

Exit status 0 on success, 2 for configuration errors, 3 for connections
(Keane failures), 4 when a numerical resolution step fails.
"""
import argparse
import json
import os
import sys
from fractions import Fraction

from . import __version__
from .affine import build_aiet, check_compatibility
from .analysis import bc_periodic, check_bc, check_hs, derivative_profile, semi_conjugacy, verify_bc, verify_hs
from .birkhoff import bounded_times, naive_birkhoff_sum, wandering_series
from .cocycle import InductionChain
from .core import specfile
from .core.maps import Aiet
from .core.permutation import make_permutation
from .core.scalars import hp_context, is_hp, parse_exact
from .errors import ConfigError, IetLabError
from .instances import find_periodic_loop, golden_iet
from .io import write_csv, write_json, write_jsonl
from .rauzy import rauzy_class
from .sampling import instance_rng, random_points
from .spectrum import central_stable_space, kernel_and_genus, lyapunov_spectrum, stable_space

COMMANDS = ("induct", "lyapunov", "filtration", "build-aiet", "birkhoff", "bounded-times", "wandering",
            "check-bc", "check-hs", "conjugacy", "rauzy-class", "report")


def load_spec(spec):
    """(map, periodic instance or None) from a path or builtin:golden / builtin:periodic3."""
    if spec is None:
        raise ConfigError("--spec is required")
    if spec.startswith("builtin:"):
        name = spec.split(":", 1)[1]
        if name == "golden":
            return golden_iet(), None
        if name in ("periodic3", "periodic"):
            inst = find_periodic_loop()
            return inst.iet(), inst
        raise ConfigError(f"unknown builtin {name!r}")
    return specfile.load(spec), None


def parse_omega(text, T, inst):
    if text is None:
        if isinstance(T, Aiet):
            return tuple(T.omega)
        raise ConfigError("--omega is required for this command")
    if text == "central":
        if inst is None or not inst.omega:
            raise ConfigError("--omega central needs a periodic builtin instance")
        return tuple(inst.omega)
    parts = [p.strip() for p in text.split(",")]
    if len(parts) != T.perm.d:
        raise ConfigError(f"--omega needs {T.perm.d} comma-separated entries")
    try:
        return tuple(parse_exact(p) if "." not in p and "e" not in p.lower() else hp_context(256).mpf(p)
                     for p in parts)
    except (ValueError, ZeroDivisionError):
        raise ConfigError(f"bad --omega {text!r}") from None


def parse_point(text, T):
    if text is None:
        return T.total / 3 if not is_hp(T.total) else T.total / 3
    try:
        if isinstance(T, Aiet) and not T.is_flat():
            return T.ctx.mpf(Fraction(text).numerator) / Fraction(text).denominator
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise ConfigError(f"bad point {text!r}") from None


def _out(args, name):
    if args.out is None:
        return None
    os.makedirs(args.out, exist_ok=True)
    return os.path.join(args.out, name)


def _emit_json(args, name, data, config):
    path = _out(args, name)
    if path is None:
        from .io import meta, plain

        print(json.dumps({"meta": meta(config), "data": plain(data)}, indent=2, sort_keys=True))
    else:
        write_json(path, data, config)


def _emit_rows(args, name, header, rows, config):
    path = _out(args, name)
    if path is None:
        print(",".join(header))
        for r in rows:
            print(",".join(str(v) for v in r))
    else:
        write_csv(path, header, rows, config)


# -- commands ---------------------------------------------------------------


def cmd_induct(args, config):
    T, _ = load_spec(args.spec)
    steps = args.steps or 10
    chain = InductionChain(T, steps=steps, guard_bits=args.guard)
    recs = []
    for k, mv in enumerate(chain.moves):
        Tk = chain.maps[k + 1]
        recs.append({"step": k + 1, "type": mv.type, "winner": mv.winner, "loser": mv.loser,
                     "top": list(Tk.perm.top), "bottom": list(Tk.perm.bottom),
                     "lengths": list(Tk.lengths), "heights": list(chain.heights[k + 1])})
    if args.format == "csv":
        rows = [(r["step"], r["type"], r["winner"], r["loser"], "".join(r["top"]), "".join(r["bottom"]))
                for r in recs]
        _emit_rows(args, "induct.csv", ["step", "type", "winner", "loser", "top", "bottom"], rows, config)
        return
    path = _out(args, "induct.jsonl")
    if path is None:
        from .io import plain

        for r in recs:
            print(json.dumps(plain(r), sort_keys=True))
    else:
        write_jsonl(path, recs, config)


def cmd_lyapunov(args, config):
    T, _ = load_spec(args.spec)
    est = lyapunov_spectrum(T, args.steps or 1000, precision=args.precision, seed=args.seed,
                            guard_bits=args.guard, record_every=10)
    rows = [(s,) + tuple(v) for s, v in est.running]
    if args.out:
        write_csv(_out(args, "lyapunov.csv"), ["zorich_steps"] + [f"theta_{i + 1}" for i in range(T.perm.d)], rows, config)
        if args.format == "svg":
            from .plotting import plot_lyapunov

            plot_lyapunov(est.running, _out(args, "lyapunov.svg"))
    _emit_json(args, "lyapunov.json", est.to_dict(), config)


def cmd_filtration(args, config):
    T, _ = load_spec(args.spec)
    n = args.steps or 60
    ker, g = kernel_and_genus(T.perm)
    Es = stable_space(T, n, guard_bits=args.guard)
    Ecs = central_stable_space(T, n, guard_bits=args.guard)
    _emit_json(args, "filtration.json", {"genus": g, "kernel": ker, "E_s": Es.to_dict(), "E_cs": Ecs.to_dict()}, config)


def _source(T0, inst, max_depth=200):
    """Rotation number for build_aiet: the periodic path, long enough for any depth the builder may reach."""
    if inst is None:
        return T0
    # every period holds at least one complete Zorich block
    return inst.repeated(max_depth + 2)


def cmd_build_aiet(args, config):
    T0, inst = load_spec(args.spec)
    omega = parse_omega(args.omega, T0, inst)
    res = build_aiet(_source(T0, inst), omega, depth=args.depth or 40, bits=args.precision or 256, T0=T0)
    if args.out:
        specfile.dump(res.aiet, _out(args, "aiet.json"))
    _emit_json(args, "build_report.json", dict(res.to_dict(), compatibility_defect=check_compatibility(T0, omega)), config)


def cmd_birkhoff(args, config):
    T, inst = load_spec(args.spec)
    omega = parse_omega(args.omega, T, inst)
    x = parse_point(args.x, T)
    n = args.steps if args.steps is not None else 10
    lvl = max(1, min(abs(n).bit_length() * 2, 60))
    chain = InductionChain(T, steps=lvl, guard_bits=args.guard, stop_at_connection=True)
    tower = chain.birkhoff(x, n, omega)
    data = {"x": x, "n": n, "tower_sum": tower}
    if abs(n) <= 10 ** 5:
        data["naive_sum"] = naive_birkhoff_sum(T, omega, x, n)
    _emit_json(args, "birkhoff.json", data, config)


def _bc_for(T, inst, args):
    if inst is not None:
        ws, chain = bc_periodic(inst, args.depth or 20)
        return ws[0], chain
    w = check_bc(T, args.steps or 200, guard_bits=args.guard)[0]
    chain = InductionChain(T, steps=w.rv_times[-1][1], guard_bits=args.guard)
    return w, chain


def cmd_bounded_times(args, config):
    T, inst = load_spec(args.spec)
    omega = parse_omega(args.omega, T, inst)
    w, chain = _bc_for(T, inst, args)
    if chain.maps[0] is not T:
        chain = InductionChain(T, steps=w.rv_times[-1][1], guard_bits=args.guard)
    sums = chain.special_sums(omega)
    rng = instance_rng(args.seed, 0)
    out = []
    for x in random_points(rng, T, args.points):
        k = rng.randrange(len(w.rv_times))
        out.append(bounded_times(chain, x, k, w, omega, sums=sums).to_dict())
    _emit_json(args, "bounded_times.json", {"witnesses": out, "all_hold": all(c["holds"] for c in out)}, config)


def cmd_wandering(args, config):
    T, inst = load_spec(args.spec)
    omega = parse_omega(args.omega, T, inst)
    x = parse_point(args.x, T)
    ser = wandering_series(T, omega, x, args.steps or 1000)
    if args.out:
        write_csv(_out(args, "wandering.csv"), ["n", "term", "partial_sum"],
                  [(n, float(t), float(s)) for n, t, s in ser.rows()], config)
        if args.format == "svg":
            from .plotting import plot_wandering

            plot_wandering(ser, _out(args, "wandering.svg"))
    _emit_json(args, "wandering.json", {"forward_partial": float(ser.forward[-1]), "backward_partial": float(ser.backward[-1]),
                                        "candidate": ser.candidate, "note": ser.note}, config)


def cmd_check_bc(args, config):
    T, inst = load_spec(args.spec)
    if inst is not None:
        w = bc_periodic(inst, args.depth or 20)[0][0]
    else:
        w = check_bc(T, args.steps or 200, N=args.N, guard_bits=args.guard)[0]
    _emit_json(args, "bc_witness.json", dict(w.to_dict(), verified=verify_bc(T, w, args.guard)), config)


def cmd_check_hs(args, config):
    T, _ = load_spec(args.spec)
    w = check_hs(T, args.steps or 200, C=args.C, guard_bits=args.guard)[0]
    _emit_json(args, "hs_witness.json", dict(w.to_dict(), verified=verify_hs(T, w, args.guard)), config)


def cmd_conjugacy(args, config):
    T0, inst = load_spec(args.spec)
    if args.aiet:
        T = specfile.load(args.aiet)
    else:
        omega = parse_omega(args.omega, T0, inst)
        n_build = (args.depth or 18) + 12
        T = build_aiet(_source(T0, inst), omega, depth=n_build, T0=T0).aiet
    n = args.depth or 18
    S = semi_conjugacy(T, T0, n, guard_bits=args.guard, seed=args.seed)
    _emit_rows(args, "conjugacy.csv", ["x", "h", "slope"], S.rows(), config)
    if args.out and args.format == "svg":
        from .plotting import plot_conjugacy, plot_slope_histogram

        plot_conjugacy(S, _out(args, "conjugacy.svg"))
        plot_slope_histogram(S, _out(args, "slopes.svg"))
    if args.out:
        write_json(_out(args, "derivative_profile.json"),
                   dict(derivative_profile(S), defect=S.defect, mesh=S.mesh), config)


def cmd_rauzy_class(args, config):
    if args.perm:
        try:
            top, bottom = args.perm.split("/")
        except ValueError:
            raise ConfigError("--perm expects TOP/BOTTOM, e.g. ABC/CBA") from None
        perm = make_permutation(top.strip(), bottom.strip())
    else:
        perm = load_spec(args.spec)[0].perm
    order, edges = rauzy_class(perm)
    ker, g = kernel_and_genus(perm)
    idx = {p: i for i, p in enumerate(order)}
    _emit_json(args, "rauzy_class.json", {
        "size": len(order), "genus": g, "kernel": ker,
        "vertices": [p.to_dict() for p in order],
        "edges": [[idx[a], e, idx[b]] for a, e, b in edges],
    }, config)


def cmd_report(args, config):
    if args.spec not in (None, "builtin:periodic3", "builtin:periodic"):
        raise ConfigError("report runs on builtin:periodic3")
    if args.out is None:
        raise ConfigError("report needs --out")
    from .experiments import periodic_report

    summary = periodic_report(args.out, seed=args.seed, periods=args.depth or 20, points=args.points, config=config)
    print(json.dumps({k: v for k, v in summary.items() if not isinstance(v, list)}, sort_keys=True, default=str))


HANDLERS = {
    "induct": cmd_induct, "lyapunov": cmd_lyapunov, "filtration": cmd_filtration,
    "build-aiet": cmd_build_aiet, "birkhoff": cmd_birkhoff, "bounded-times": cmd_bounded_times,
    "wandering": cmd_wandering, "check-bc": cmd_check_bc, "check-hs": cmd_check_hs,
    "conjugacy": cmd_conjugacy, "rauzy-class": cmd_rauzy_class, "report": cmd_report,
}


def build_parser():
    ap = argparse.ArgumentParser(prog="ietlab", description="Rauzy-Veech renormalization laboratory")
    ap.add_argument("--version", action="version", version=f"ietlab {__version__}")
    ap.add_argument("command", choices=COMMANDS)
    ap.add_argument("--spec", help="map file, or builtin:golden / builtin:periodic3")
    ap.add_argument("--steps", type=int, help="RV steps (induct), Zorich steps (scans) or n (birkhoff)")
    ap.add_argument("--depth", type=int, help="build depth, level or number of periods")
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--precision", type=int, help="mantissa bits for floating-point work")
    ap.add_argument("--out", help="output directory")
    ap.add_argument("--format", choices=("csv", "json", "jsonl", "svg"), default="json")
    ap.add_argument("--omega", help="comma-separated log-slopes, or 'central'")
    ap.add_argument("--x", help="point, as p/q or decimal")
    ap.add_argument("--points", type=int, default=100)
    ap.add_argument("--N", type=int, help="BC block length in Zorich steps")
    ap.add_argument("--C", type=float, default=4.0, help="HS balance constant")
    ap.add_argument("--guard", type=int, default=80, help="tie guard bits")
    ap.add_argument("--aiet", help="AIET spec file for conjugacy")
    ap.add_argument("--perm", help="permutation TOP/BOTTOM for rauzy-class")
    return ap


def main(argv=None):
    ap = build_parser()
    args = ap.parse_args(argv)
    if args.seed < 0 or args.seed >= 1 << 64:
        ap.error("--seed must be an unsigned 64-bit integer")
    for name in ("steps", "depth", "precision", "points", "N"):
        v = getattr(args, name)
        if v is not None and v < 0 and not (name == "steps" and args.command == "birkhoff"):
            ap.error(f"--{name} must be non-negative")
    # the output location is not part of the run configuration
    config = {k: v for k, v in sorted(vars(args).items()) if k != "out"}
    try:
        HANDLERS[args.command](args, config)
    except IetLabError as e:
        err = {"error": e.code, "message": str(e)}
        if getattr(e, "step", None) is not None:
            err["step"] = e.step
        print(json.dumps(err, sort_keys=True), file=sys.stderr)
        return e.exit_status
    return 0


if __name__ == "__main__":
    sys.exit(main())
