"""Experiment runner: construct sets, sweep projections, estimate dimensions,
run the exact verification suites, and evaluate closed-form bounds.

Exit codes: 0 success, 1 verification failure, 2 configuration error.
Config files are UTF-8 ``key = value`` lines with one section per
subcommand (e.g. ``[sweep]``); command-line flags override file values.
The environment variable ``FRACPROJ_SIZE_CAP`` overrides the default size
cap of every construction.
"""

from __future__ import annotations

import argparse
import configparser
import inspect
import math
import random
import sys
from fractions import Fraction

from .bounds import FORMULAS, DomainError
from .covering import (ScaleProfile, covering_number_1d, covering_number_2d,
                       direction_sweep, estimate_box_dimension, mesh_count_1d)
from .geometry import (BallUnion, Direction, PointSet, direction_from_pair,
                       project_union)
from .incidence import (exceptional_direction_count, fiber_family, grid,
                        grid_projection_count, incidence_count)
from .tubes import counting_energy, extract_delta_one_subset, marstrand_exceptional_scan
from .constructions import (MainParams, Main2Params, SetEParams,
                            construct_bigex, construct_main, construct_main2,
                            construct_setE, default_directions,
                            default_setE_params, verify_column_richness,
                            verify_line_intersect, verify_skeleton_columns)

EXIT_OK, EXIT_FAIL, EXIT_CONFIG = 0, 1, 2


# ---------------------------------------------------------------------------
# Output helpers
# ---------------------------------------------------------------------------

def _write(text: str, path: str | None):
    if path in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)


def _write_svg(path: str, xs, ys, title: str, csv_text: str,
               xlabel: str = "x", ylabel: str = "y", loglog: bool = False):
    """Matplotlib SVG plot with the raw CSV embedded as an XML comment."""
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt
    fig, ax = plt.subplots(figsize=(6, 6))
    if loglog:
        ax.loglog(xs, ys, "o-")
    else:
        ax.plot(xs, ys, ".", markersize=2)
        ax.set_aspect("equal")
    ax.set_title(title)
    ax.set_xlabel(xlabel)
    ax.set_ylabel(ylabel)
    fig.savefig(path, format="svg")
    plt.close(fig)
    with open(path, "r+", encoding="utf-8") as fh:
        body = fh.read()
        i = body.index("?>") + 2
        safe = csv_text.replace("--", "- -")
        fh.seek(0)
        fh.write(body[:i] + "\n<!-- raw data:\n" + safe + "-->" + body[i:])
        fh.truncate()


def _dyadic(kmin: int, kmax: int) -> list[Fraction]:
    return [Fraction(1, 2 ** k) for k in range(kmin, kmax + 1)]


# ---------------------------------------------------------------------------
# Set builders shared by construct / sweep / dimest
# ---------------------------------------------------------------------------

def _build_set(name: str, args):
    """Returns (object-with-geometry, csv_text, plot_points)."""
    if name == "cascade":
        params = MainParams(directions=tuple(default_directions(args.directions)),
                            steps=args.steps)
        res = construct_main(params)
        rows = ["level,radius,cx,cy"]
        for g in res.generations:
            for cx, cy in g.balls.centers:
                rows.append(f"{g.level},{float(g.balls.radius)!r},{float(cx)!r},{float(cy)!r}")
        pts = [(float(cx), float(cy)) for cx, cy in res.generations[-1].balls.centers]
        return res.generations[-1].balls, "\n".join(rows) + "\n", pts
    if name == "setE":
        res = construct_setE(default_setE_params(args.depth))
        rows = ["level,r,midpoint"]
        for lev in res.levels:
            for mid, _ in lev.arcs:
                rows.append(f"{lev.level},{float(lev.r)!r},{float(mid)!r}")
        pts = res.points()
        return PointSet(tuple(pts)), "\n".join(rows) + "\n", pts
    if name == "main2":
        res = construct_main2(Main2Params(depth=args.depth))
        rows = ["level,side,cx,cy"]
        for lev in res.levels:
            for cx, cy in lev.centers:
                rows.append(f"{lev.level},{float(lev.side)!r},{float(cx)!r},{float(cy)!r}")
        last = res.levels[-1]
        pts = [(float(cx), float(cy)) for cx, cy in last.centers]
        return last.squares(), "\n".join(rows) + "\n", pts
    if name == "bigex":
        tree = construct_bigex(args.sigma, depth=args.depth)
        rows = ["name,n,m,c,delta,child_count,all_ok"]
        for v in tree.vertices:
            rows.append(f"{v.name},{v.n},{v.m},{float(v.c)!r},{float(v.delta)!r},"
                        f"{v.child_count},{v.certificates.get('all_ok', '')}")
        return tree, "\n".join(rows) + "\n", []
    raise SystemExit2(f"unknown construction '{name}'")


class SystemExit2(Exception):
    """Configuration error carrying the message for exit code 2."""


# ---------------------------------------------------------------------------
# Subcommand implementations
# ---------------------------------------------------------------------------

def cmd_construct(args) -> int:
    obj, csv_text, pts = _build_set(args.name, args)
    _write(csv_text, args.out)
    if args.svg:
        xs = [p[0] for p in pts]
        ys = [p[1] for p in pts]
        _write_svg(args.svg, xs, ys, f"construct {args.name}", csv_text)
    return EXIT_OK


def cmd_sweep(args) -> int:
    if args.name == "bigex":
        raise SystemExit2("the direction tree is symbolic; sweep one of "
                          "cascade/setE/main2 instead")
    K, _, _ = _build_set(args.name, args)
    directions = default_directions(args.directions)
    deltas = _dyadic(args.kmin, args.kmax)
    rows = direction_sweep(K, directions, deltas)
    lines = ["direction_index,delta_index,N,P"]
    lines.extend(f"{i},{j},{n},{p}" for i, j, n, p in rows)
    csv_text = "\n".join(lines) + "\n"
    _write(csv_text, args.out)
    if args.svg:
        xs = [float(deltas[j]) for _, j, _, _ in rows]
        ys = [n for _, _, n, _ in rows]
        _write_svg(args.svg, xs, ys, f"sweep {args.name}", csv_text,
                   xlabel="delta", ylabel="N", loglog=True)
    return EXIT_OK


def cmd_dimest(args) -> int:
    obj, _, _ = _build_set(args.name, args)
    deltas = _dyadic(args.kmin, args.kmax)
    if args.e:
        a, b = (int(v) for v in args.e.split(","))
        U = project_union(obj, direction_from_pair(a, b))
        entries = [(d, covering_number_1d(U, d)) for d in deltas]
        ambient = 1
    else:
        entries = [(d, covering_number_2d(obj, d)) for d in deltas]
        ambient = 2
    profile = ScaleProfile(entries=tuple(entries))
    est = estimate_box_dimension(profile, ambient_dim=ambient)
    _write(profile.to_csv(), args.out)
    print(f"slope {est.slope:.6f} intercept {est.intercept:.4f} "
          f"limsup_proxy {est.limsup_proxy:.6f} clamped {est.clamped}")
    if args.svg:
        xs = [float(e[0]) for e in entries]
        ys = [e[1] for e in entries]
        _write_svg(args.svg, xs, ys, f"dimest {args.name}", profile.to_csv(),
                   xlabel="delta", ylabel="N", loglog=True)
    return EXIT_OK


def cmd_energy(args) -> int:
    if args.grid:
        C = grid(args.grid)
    else:
        rng = random.Random(args.seed)
        pts = {(rng.randrange(1, 10 ** 6), rng.randrange(1, 10 ** 6))
               for _ in range(args.random)}
        C = PointSet(tuple(sorted(pts)))
    E = default_directions(args.directions)
    rep = counting_energy(C, E, Fraction(1, 2 ** args.k))
    _write(rep.to_csv(), args.out)
    print(f"total energy {rep.total}")
    return EXIT_OK


def cmd_bounds_eval(args) -> int:
    fn = FORMULAS.get(args.formula)
    if fn is None:
        raise SystemExit2(f"unknown formula '{args.formula}'; "
                          f"choose from {sorted(FORMULAS)}")
    sig = inspect.signature(fn)
    kwargs = {}
    supplied = {"gamma": args.gamma, "sigma": args.sigma, "tau": args.tau,
                "s": args.s, "m": args.m, "dim_k": args.dim_k,
                "alpha": args.alpha, "eta": args.eta}
    for pname in sig.parameters:
        if supplied.get(pname) is not None:
            kwargs[pname] = supplied[pname]
    try:
        value = fn(**kwargs)
    except TypeError as exc:
        raise SystemExit2(f"formula '{args.formula}' needs different "
                          f"parameters: {exc}") from exc
    except DomainError as exc:
        raise SystemExit2(str(exc)) from exc
    params = ";".join(f"{k}={v}" for k, v in sorted(kwargs.items()))
    print("formula,params,value")
    print(f"{args.formula},{params},{value}")
    return EXIT_OK


# -- verification suites ----------------------------------------------------

def verify_grid(args) -> int:
    for p in range(1, args.pmax + 1):
        for q in range(1, args.qmax + 1):
            for n in range(2, args.nmax + 1):
                rep = grid_projection_count(n, p, q)
                if not rep["holds"] or not rep["preimage_certificate"]:
                    print(f"FAIL: grid n={n} p={p} q={q}: cardinality "
                          f"{rep['cardinality']} vs bound {rep['bound']}")
                    return EXIT_FAIL
    print(f"0 violations: card rho_e(G_n) <= (1+p)(1+q)n for "
          f"p,q <= {args.pmax},{args.qmax}, n <= {args.nmax}")
    return EXIT_OK


def verify_line_intersect_cmd(args) -> int:
    n, d = args.n, args.d
    cols = verify_skeleton_columns(n, d)
    if not cols["columns_ok"] or not cols["normal_form_ok"]:
        print(f"FAIL: skeleton column structure at (n,d)=({n},{d}): {cols}")
        return EXIT_FAIL
    if not verify_column_richness(n, d):
        print(f"FAIL: column richness at (n,d)=({n},{d})")
        return EXIT_FAIL
    rep = verify_line_intersect(n, d)
    if not rep["holds"]:
        bad = [r["k"] for r in rep["per_k"]
               if not (r["intersection_exact"] and r["cardinality_bound_ok"])]
        print(f"FAIL: line intersect at (n,d)=({n},{d}), slope indices {bad[:5]}")
        return EXIT_FAIL
    print(f"every meeting line hits the extended skeleton in exactly "
          f"{math.factorial(n)} points; card bound <= 3(n!)^(1+d) holds "
          f"for all {len(rep['per_k'])} tagged directions")
    return EXIT_OK


def verify_marstrand(args) -> int:
    rng = random.Random(args.seed)
    delta = 2.0 ** -args.k
    pts = sorted({(rng.random(), rng.random()) for _ in range(args.n)})
    P = PointSet(tuple(pts))
    C = extract_delta_one_subset(P, delta, direction_from_pair(0, 1))
    rep = marstrand_exceptional_scan(C, delta, args.tau)
    bound = 64 * delta ** (args.tau - 1) * math.log(1 / delta)
    if rep["count"] > bound:
        print(f"FAIL: {rep['count']} exceptional directions > {bound:.1f} "
              f"at delta=2^-{args.k}, tau={args.tau}")
        return EXIT_FAIL
    print(f"exceptional count {rep['count']} <= {bound:.1f} "
          f"(ratio {rep['ratio']:.4f}) at delta=2^-{args.k}, tau={args.tau}")
    return EXIT_OK


def verify_incidence(args) -> int:
    for n in range(2, args.nmax + 1):
        P = grid(n)
        for s in (0.5, 0.6, 0.75):
            rep = exceptional_direction_count(P, s)
            npts = len(P)
            if rep["count"] > 8 * npts ** (2 * s - 1):
                print(f"FAIL: grid {n}x{n}, s={s}: {rep['count']} exceptional "
                      f"directions > 8 n^(2s-1)")
                return EXIT_FAIL
            for pair, card in rep["witnesses"]:
                e = direction_from_pair(*pair)
                L = fiber_family(P, [e])
                if incidence_count(P, L) != npts:
                    print(f"FAIL: incidence identity at grid {n}, dir {pair}")
                    return EXIT_FAIL
    print(f"0 violations on grids up to {args.nmax}x{args.nmax} "
          f"(count <= 8 n^(2s-1); incidences = n per direction exactly)")
    return EXIT_OK


def verify_product(args) -> int:
    rng = random.Random(args.seed)
    for trial in range(args.trials):
        centers = [(rng.uniform(-0.4, 0.4), rng.uniform(-0.4, 0.4))
                   for _ in range(rng.randrange(3, 12))]
        K = BallUnion.build(centers, Fraction(1, rng.randrange(32, 128)))
        for k in range(4, 11):
            delta = Fraction(1, 2 ** k)
            N = covering_number_2d(K, delta)
            Ne = mesh_count_1d(project_union(K, direction_from_pair(1, 0)), delta)
            Nx = mesh_count_1d(project_union(K, direction_from_pair(0, 1)), delta)
            if N > Ne * Nx:
                print(f"FAIL: trial {trial}, delta=2^-{k}: N={N} > {Ne}*{Nx}")
                return EXIT_FAIL
    print(f"0 violations in {args.trials} random unions: "
          f"N(K,delta) <= N(K_e,delta) * N(K_xi,delta)")
    return EXIT_OK


def verify_setE(args) -> int:
    res = construct_setE(default_setE_params(args.depth))
    for lev in res.levels[1:]:
        bad = [k for k, v in lev.certificates.items() if v is False]
        if bad:
            print(f"FAIL: level {lev.level} certificates {bad}")
            return EXIT_FAIL
    print(f"all arc-family certificates hold to depth {args.depth} "
          f"({len(res.levels[-1].angles)} angles at the last level)")
    return EXIT_OK


def verify_main2(args) -> int:
    res = construct_main2(Main2Params(depth=args.depth))
    for lev in res.levels[1:]:
        if not lev.certificates.get("all_ok", False):
            bad = [k for k, v in lev.certificates.items() if v is False]
            print(f"FAIL: level {lev.level} certificates {bad}")
            return EXIT_FAIL
    last = res.levels[-1]
    print(f"all invariants hold to depth {args.depth}: {len(last.centers)} "
          f"squares of side {float(last.side):.3e}, "
          f"{sum(len(l.directions) for l in res.levels[1:])} directions")
    return EXIT_OK


def verify_bigex(args) -> int:
    tree = construct_bigex(args.sigma, depth=args.depth)
    for v in tree.vertices:
        if not v.certificates.get("all_ok", False):
            print(f"FAIL: vertex {v.name} certificates {v.certificates}")
            return EXIT_FAIL
    child = next((v for v in tree.vertices if v.n is not None), None)
    print(f"all certificates pass: d={tree.d}, tau={tree.tau}, "
          f"n_v={child.n if child else '-'}, "
          f"c_w={child.c if child else '-'} < 2, arcs disjoint, "
          f"{len(tree.vertices)} tracked vertices")
    return EXIT_OK


# ---------------------------------------------------------------------------
# Argument parsing with config-file override
# ---------------------------------------------------------------------------

def _build_parser() -> argparse.ArgumentParser:
    top = argparse.ArgumentParser(prog="fracproj", description=__doc__)
    top.add_argument("--config", help="key = value config file; flags override")
    sub = top.add_subparsers(dest="command", required=True)

    def add_setargs(p):
        p.add_argument("--name", default="cascade",
                       choices=["cascade", "setE", "main2", "bigex"])
        p.add_argument("--steps", type=int, default=6)
        p.add_argument("--directions", type=int, default=8)
        p.add_argument("--depth", type=int, default=3)
        p.add_argument("--sigma", type=float, default=0.76)
        p.add_argument("--out", default="-")
        p.add_argument("--svg", default=None)

    p = sub.add_parser("construct", help="build a set; CSV + optional SVG")
    add_setargs(p)
    p.set_defaults(fn=cmd_construct)

    p = sub.add_parser("sweep", help="direction/scale sweep of projections")
    add_setargs(p)
    p.add_argument("--kmin", type=int, default=2)
    p.add_argument("--kmax", type=int, default=8)
    p.set_defaults(fn=cmd_sweep)

    p = sub.add_parser("dimest", help="box-dimension slope from a scale sweep")
    add_setargs(p)
    p.add_argument("--kmin", type=int, default=2)
    p.add_argument("--kmax", type=int, default=10)
    p.add_argument("--e", default=None, help="project first: direction 'a,b'")
    p.set_defaults(fn=cmd_dimest)

    p = sub.add_parser("energy", help="tube-counting energy of a point set")
    p.add_argument("--grid", type=int, default=None)
    p.add_argument("--random", type=int, default=64)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--directions", type=int, default=16)
    p.add_argument("--k", type=int, default=6, help="delta = 2^-k")
    p.add_argument("--out", default="-")
    p.set_defaults(fn=cmd_energy)

    p = sub.add_parser("bounds", help="closed-form bound evaluation")
    bsub = p.add_subparsers(dest="bounds_command", required=True)
    pe = bsub.add_parser("eval")
    pe.add_argument("--formula", required=True)
    for flag, typ in [("gamma", float), ("sigma", float), ("tau", float),
                      ("s", float), ("m", int), ("dim-k", float),
                      ("alpha", float), ("eta", float)]:
        pe.add_argument(f"--{flag}", type=typ, default=None)
    pe.set_defaults(fn=cmd_bounds_eval)

    p = sub.add_parser("verify", help="exact verification suites")
    vsub = p.add_subparsers(dest="verify_command", required=True)

    pv = vsub.add_parser("grid")
    pv.add_argument("--pmax", type=int, default=5)
    pv.add_argument("--qmax", type=int, default=5)
    pv.add_argument("--nmax", type=int, default=64)
    pv.set_defaults(fn=verify_grid)

    pv = vsub.add_parser("line-intersect")
    pv.add_argument("--n", type=int, default=3)
    pv.add_argument("--d", type=int, default=3)
    pv.set_defaults(fn=verify_line_intersect_cmd)

    pv = vsub.add_parser("marstrand")
    pv.add_argument("--n", type=int, default=512)
    pv.add_argument("--k", type=int, default=8, help="delta = 2^-k")
    pv.add_argument("--tau", type=float, default=0.5)
    pv.add_argument("--seed", type=int, default=0)
    pv.set_defaults(fn=verify_marstrand)

    pv = vsub.add_parser("incidence")
    pv.add_argument("--nmax", type=int, default=10)
    pv.set_defaults(fn=verify_incidence)

    pv = vsub.add_parser("product")
    pv.add_argument("--trials", type=int, default=25)
    pv.add_argument("--seed", type=int, default=0)
    pv.set_defaults(fn=verify_product)

    pv = vsub.add_parser("setE")
    pv.add_argument("--depth", type=int, default=3)
    pv.set_defaults(fn=verify_setE)

    pv = vsub.add_parser("main2")
    pv.add_argument("--depth", type=int, default=3)
    pv.set_defaults(fn=verify_main2)

    pv = vsub.add_parser("bigex")
    pv.add_argument("--sigma", type=float, default=0.76)
    pv.add_argument("--depth", type=int, default=1)
    pv.set_defaults(fn=verify_bigex)

    return top


def _apply_config(args, parser, argv):
    """Fill in values from the config file for flags left at their default."""
    if not args.config:
        return
    cp = configparser.ConfigParser()
    read = cp.read(args.config, encoding="utf-8")
    if not read:
        raise SystemExit2(f"config file '{args.config}' not found")
    section = args.command
    if args.command == "verify":
        section = f"verify.{args.verify_command}"
    elif args.command == "bounds":
        section = "bounds"
    if not cp.has_section(section):
        return
    explicit = {a.split("=", 1)[0].lstrip("-").replace("-", "_")
                for a in argv if a.startswith("--")}
    for key, raw in cp.items(section):
        attr = key.replace("-", "_")
        if not hasattr(args, attr) or attr in explicit:
            continue
        cur = getattr(args, attr)
        if isinstance(cur, bool):
            val = raw.lower() in ("1", "true", "yes")
        elif isinstance(cur, int):
            val = int(raw)
        elif isinstance(cur, float):
            val = float(raw)
        else:
            val = raw
        setattr(args, attr, val)


def main(argv=None) -> int:
    parser = _build_parser()
    if argv is None:
        argv = sys.argv[1:]
    try:
        args = parser.parse_args(argv)
        _apply_config(args, parser, argv)
        return args.fn(args)
    except SystemExit2 as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (ValueError, DomainError, RuntimeError) as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
