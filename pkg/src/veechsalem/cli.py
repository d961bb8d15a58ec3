"""Command-line interface: `veechsalem {salem,dyn,flow,verify} ...`.

Embedding indices on the command line are 1-based with 1 the identity,
matching the usual sigma_1 = id numbering; the library uses 0-based indices.
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import io
import json
import logging
import math
import os
import platform
import re
import subprocess
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path

import mpmath
import numpy as np

from . import __version__

FORMATS = ("json", "csv", "text")
STDOUT_FORMATS = {"json", "csv", "text"}


class UsageError(Exception):
    """Bad argument values detected after parsing (exit code 2)."""


@dataclass
class Result:
    """Output of a subcommand in every format it supports."""
    data: object
    text: str | None = None
    table: tuple[list[str], list[list]] | None = None  # csv header and rows
    default: str = "json"
    ok: bool = True

    def render(self, fmt: str) -> str:
        if fmt == "json":
            return json.dumps(self.data, indent=2, sort_keys=True, default=_json_default) + "\n"
        if fmt == "csv":
            if self.table is None:
                raise UsageError("this command has no CSV output; use --format json or text")
            buf = io.StringIO()
            w = csv.writer(buf, lineterminator="\n")
            w.writerow(self.table[0])
            w.writerows(self.table[1])
            return buf.getvalue()
        if self.text is not None:
            return self.text.rstrip("\n") + "\n"
        return json.dumps(self.data, indent=2, sort_keys=True, default=_json_default) + "\n"


def _json_default(o):
    if isinstance(o, np.ndarray):
        return o.tolist()
    if isinstance(o, np.generic):
        return o.item()
    if isinstance(o, mpmath.mpf):
        return mpmath.nstr(o, 40)
    raise TypeError(f"cannot serialize {type(o).__name__}")


def _fmt(x: float) -> str:
    return repr(float(x))


# ---------------------------------------------------------------------------
# argument helpers


def _sigma(text: str) -> int:
    k = int(text)
    if k < 1:
        raise argparse.ArgumentTypeError("embedding indices start at 1 (the identity)")
    return k - 1


def _family(text: str) -> str:
    from .trigroup import Family

    try:
        return Family.parse(text).value
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _bits(text: str) -> str:
    """Hex digits (4 bits each), or 'bin:0101...'."""
    if text.startswith("bin:"):
        b = text[4:]
        if not re.fullmatch(r"[01]*", b):
            raise argparse.ArgumentTypeError(f"not a binary string: {b!r}")
        return b
    h = text[2:] if text.lower().startswith("0x") else text
    if not re.fullmatch(r"[0-9a-fA-F]*", h):
        raise argparse.ArgumentTypeError(f"not a hex string: {text!r}")
    return "".join(f"{int(c, 16):04b}" for c in h)


def _targets(spec: str, K: int, v_norm: float) -> list[float]:
    """constant:A | geometric:RATE (a_k = ||v|| e^{-RATE k}) | harmonic (a_k = ||v||/(k+1))."""
    kind, _, arg = spec.partition(":")
    if kind == "constant":
        return [float(arg or 1.0)] * (K + 1)
    if kind == "geometric":
        rate = float(arg or 0.5)
        return [v_norm * math.exp(-rate * k) for k in range(K + 1)]
    if kind == "harmonic":
        return [v_norm / (k + 1) for k in range(K + 1)]
    raise UsageError(f"unknown target schedule {spec!r}")


def _direction(text: str):
    if text.startswith("side:"):
        return text
    if text.startswith("vec:"):
        x, y = (float(c) for c in text[4:].split(","))
        return np.array([x, y])
    return float(text)


def _lattice_vector(system, text: str | None):
    """'a0,a1,...;b0,b1,...' integer power-basis coefficients of the two entries."""
    from .conjdyn import LatticeVector

    F = system.field
    if text is None:
        return LatticeVector((system.lam * system.lam, F.zero))
    parts = text.split(";")
    if len(parts) != 2:
        raise UsageError("lattice vectors are written 'a0,a1,..;b0,b1,..'")
    ents = []
    for p in parts:
        coeffs = [int(c) for c in p.split(",") if c.strip()]
        if len(coeffs) > F.degree:
            raise UsageError(f"at most {F.degree} coefficients per entry")
        x = F.zero
        power = F.one
        for c in coeffs:
            x = x + power * c
            power = power * system.lam
        ents.append(x)
    return LatticeVector(tuple(ents))


# ---------------------------------------------------------------------------
# salem


def cmd_salem(args) -> Result:
    from . import salem
    from .trigroup import Family, TriangleFamily, build_group

    fam = Family.parse(args.family)
    if args.action == "search":
        budget = salem.Budget(args.blocks, args.exp, args.max_words)
        rep = salem.search((fam, args.q), budget)
        lines = [f"{fam.value} q={args.q}: scanned {rep.scanned} words, "
                 f"{len(rep.found)} Salem polynomial(s)"]
        lines += [f"  {c.word}  degree {c.degree}  {c.half_trace_minpoly}" for c in rep.found]
        rows = [[str(c.word), c.degree, str(c.half_trace_minpoly), f"{c.dominant:.15g}"] for c in rep.found]
        return Result(rep.to_json(), "\n".join(lines), (["word", "degree", "minpoly", "dominant"], rows))
    if args.action == "table":
        qs = None if args.q is None else [args.q]
        rows = salem.reproduce_table(fam, qs)
        if args.qmax is not None:
            rows = [r for r in rows if r.row.q <= args.qmax]
        ok = all(all(r.conjugates_ok) and bool(r.certificate) for r in rows)
        table = (["q", "degree", "word", "minpoly", "conjugates"],
                 [[r.row.q, r.poly.degree, r.row.word, str(r.poly),
                   " ".join(salem.sig4(float(iv)) for iv in r.conjugates)] for r in rows])
        return Result({"family": fam.value, "rows": [r.to_json() for r in rows], "all_match": ok},
                      salem.format_table(rows), table, default="text", ok=ok)
    if args.action == "verify-word":
        G = build_group(fam, args.q)
        cert = salem.certify_word(G, args.word)
        if cert:
            data = cert.to_json()
            text = (f"{cert.word}: Salem, degree {cert.degree}, half-trace polynomial "
                    f"{cert.half_trace_minpoly}, dominant {cert.dominant:.10g}")
        else:
            data = {"word": args.word, "family": fam.value, "q": args.q, "salem": False,
                    "reason": cert.reason, "detail": cert.detail}
            text = f"{args.word}: not Salem ({cert.reason}: {cert.detail})"
        return Result(data, text, ok=bool(cert))
    if args.action == "witness":
        budget = salem.Budget(args.blocks, args.exp, args.max_words)
        w = salem.nondiscreteness_witness(TriangleFamily(fam, args.q), args.sigma, args.eps, budget)
        data = {"family": fam.value, "q": args.q, "sigma": args.sigma + 1, "eps": args.eps,
                "budget": budget.to_json(), "witness": None if w is None else str(w)}
        if w is not None:
            G = build_group(fam, args.q)
            Ms = salem.conjugate_matrices(salem.evaluate_word(G, w))[args.sigma]
            I2 = np.eye(2)
            data["distance"] = float(min(np.linalg.norm(Ms - I2, 2), np.linalg.norm(Ms + I2, 2)))
        text = f"witness: {w}" if w is not None else "no witness within budget"
        return Result(data, text)
    raise UsageError(args.action)


# ---------------------------------------------------------------------------
# dyn


def _run_lyapunov(args, threads: int) -> Result:
    from .conjdyn import hecke_system, log_norm_series, lyapunov_ratio

    system = hecke_system(args.family, args.q)
    emb = system.embeddings
    sigmas = [args.sigma] if args.sigma is not None else [s for s in emb if s != system.field.identity]
    if any(s not in emb for s in sigmas):
        raise UsageError(f"embedding index out of range 1..{len(emb)}")

    def one(s):
        return lyapunov_ratio(args.family, args.q, s, args.steps, args.samples, args.seed)

    with ThreadPoolExecutor(max_workers=max(1, threads)) as pool:
        est = list(pool.map(one, sigmas))
    summary = [{"sigma": s + 1, "mean": m, "stderr": e} for s, (m, e) in zip(sigmas, est)]
    text = "\n".join(f"sigma={d['sigma']}: ratio {d['mean']:.6f} +- {d['stderr']:.6f}" for d in summary)
    data = {"family": args.family, "q": args.q, "steps": args.steps, "samples": args.samples,
            "seed": args.seed, "ratios": summary}
    table = None
    if args.format == "csv":
        e, series = log_norm_series(args.family, args.q, args.steps, args.samples, args.seed)
        header = ["step", "log_norm_id"] + [f"log_norm_sigma_{s + 1}" for s in e if s != system.field.identity]
        order = [system.field.identity] + [s for s in e if s != system.field.identity]
        cols = [e.index(s) for s in order]
        table = (header, [[k + 1] + [_fmt(series[k, c]) for c in cols] for k in range(len(series))])
    return Result(data, text, table, default="text")


def cmd_dyn(args) -> Result:
    from .conjdyn import (BudgetExhausted, WVector, box_counting_dimension, calibration_grid,
                          cantor_direction,
                          contraction_word, default_dictionary, eigenvalue_candidate,
                          expansion_word, field_ratio_check, hecke_system, middle_thirds,
                          salem_word, tracking_run)
    from .trigroup import build_group

    if args.action == "lyapunov":
        return _run_lyapunov(args, args.threads)
    if args.action == "ratio":
        system = hecke_system(args.family, args.q)
        c = field_ratio_check(args.nu1, args.nu2, system.field, args.height, args.tol)
        data = {"nu1": args.nu1, "nu2": args.nu2, "ratio": args.nu1 / args.nu2,
                "numerators": None if c is None else list(c[0]),
                "denominator": None if c is None else c[1]}
        if c is None:
            text = "no field element within the height bound"
        else:
            terms = " + ".join(str(a) if i == 0 else f"{a}*th" + (f"^{i}" if i > 1 else "")
                               for i, a in enumerate(c[0]) if a)
            text = f"ratio = ({terms or 0}) / {c[1]}"
        return Result(data, text)
    if args.action == "contract":
        G = build_group(args.family, args.q)
        system = hecke_system(args.family, args.q)
        g = salem_word(args.family, args.q)
        rng = np.random.default_rng(args.seed)
        search = expansion_word if args.expand else contraction_word
        out, fails = [], 0
        for i in range(args.samples):
            v = WVector.random_unit(system.conjugate_embeddings, rng)
            try:
                cw = search(v, args.C0, G, g, args.n_max, args.k_max)
                out.append({"sample": i, "word": str(cw.word), "n": cw.n, "k": cw.k,
                            "log_ratio": cw.log_ratio})
            except BudgetExhausted as exc:
                fails += 1
                out.append({"sample": i, "word": None, "error": str(exc)})
        data = {"salem_word": str(g), "C0": args.C0, "expand": args.expand, "results": out,
                "successes": args.samples - fails}
        rows = [[d["sample"], d["word"] or "", d.get("n", ""), d.get("k", ""),
                 _fmt(d["log_ratio"]) if "log_ratio" in d else ""] for d in out]
        text = f"{args.samples - fails}/{args.samples} succeeded with Salem word {g}"
        return Result(data, text, (["sample", "word", "n", "k", "log_ratio"], rows), ok=fails == 0)
    if args.action in ("track", "construct"):
        system = hecke_system("2qinf", args.q)
        D = default_dictionary(system)
        v = _lattice_vector(system, args.vector)
        w = v.w_vector(D.embeddings)
        bits = args.bits
        if not bits:
            raise UsageError("need a nonempty bit string")
        run = tracking_run(w, _targets(args.targets, len(bits), w.norm()), bits, D)
        if args.action == "track":
            ok = all(e <= run.bound + 1e-12 for e in run.errors)
            data = run.to_json()
            data["bound_holds"] = ok
            rows = [[k + 1, m, _fmt(e), _fmt(n)] for k, (m, e, n)
                    in enumerate(zip(run.checkpoints, run.errors, run.norms))]
            text = (f"{len(bits)} steps, {len(run.digits)} digits, max error "
                    f"{max(run.errors):.4f} <= bound {run.bound:.4f}: {ok}")
            return Result(data, text, (["k", "checkpoint", "error", "norm"], rows), ok=ok)
        mpmath.mp.prec = max(mpmath.mp.prec, args.precision_bits)
        con = cantor_direction(run, system)
        data = {"construction": con.to_json(), "run": run.to_json(), "scales": calibration_grid()}
        text = [f"x* = {mpmath.nstr(con.x_star, 30)}"]
        try:
            cand = eigenvalue_candidate(v, con)
            data.update(candidate=cand.to_json(), nu=cand.nu)
            text.append(f"nu = {cand.nu!r} (eta = {cand.eta!r})")
        except ArithmeticError as exc:
            data.update(candidate=None, nu=None, candidate_error=str(exc))
            text.append(f"no cocycle eigenvalue candidate: {exc}")
        if args.surface_n is not None:
            from .weakmix import surface_direction

            sc = surface_direction(con, v, args.surface_n)
            data["surface"] = sc.to_json()
            text.append(f"S_{sc.n}: theta = {sc.theta!r}, nu = {sc.nu!r}")
        return Result(data, "\n".join(text))
    if args.action == "dimension":
        if args.middle_thirds is not None:
            pts = middle_thirds(args.middle_thirds)
            d = box_counting_dimension(pts)
            return Result({"set": "middle-thirds", "depth": args.middle_thirds, "dimension": d,
                           "reference": math.log(2) / math.log(3)}, f"dimension {d:.4f}")
        system = hecke_system("2qinf", args.q)
        D = default_dictionary(system)
        rng = np.random.default_rng(args.seed)
        v = WVector.random_unit(D.embeddings, rng)
        xs = []
        for _ in range(args.directions):
            bits = "".join(rng.choice(["0", "1"], args.depth))
            run = tracking_run(v, [1.0], bits, D)
            xs.append(cantor_direction(run, system).x_star)
        distinct = len(set(xs))  # on the full-precision points; doubles can coincide
        d = box_counting_dimension([float(x) for x in xs])
        data = {"q": args.q, "directions": args.directions, "depth": args.depth, "dimension": d,
                "distinct": distinct}
        return Result(data, f"box-counting slope {d:.4f} over {distinct} distinct directions",
                      (["x_star"], [[mpmath.nstr(x, 30)] for x in sorted(xs)]))
    raise UsageError(args.action)


# ---------------------------------------------------------------------------
# flow


def _region(spec: str, S, theta, nu: float, seed: int):
    from .polyflow import eigenfunction_portrait, matched_region, polygon_region
    from .polyflow.weyl import RectRegion

    if spec == "none":
        return None
    if spec == "matched":
        return matched_region(eigenfunction_portrait(S, theta, nu, seed=seed + 1000))
    kind, _, arg = spec.partition(":")
    if kind == "polygon":
        return polygon_region(S, int(arg or 0))
    if kind == "rect":
        rects = []
        for part in arg.split(";"):
            p, box = part.split("@") if "@" in part else ("0", part)
            x0, x1, y0, y1 = (float(c) for c in box.split(","))
            rects.append((int(p), x0, x1, y0, y1))
        return RectRegion(rects)
    raise UsageError(f"unknown region {spec!r}")


def _nu_source(text: str):
    """(nu, scales or None, theta or None) from a decimal or a grid file."""
    try:
        return float(text), None, None
    except ValueError:
        pass
    path = Path(text)
    if not path.exists():
        raise UsageError(f"--nu is neither a number nor a file: {text!r}")
    raw = path.read_text()
    try:
        d = json.loads(raw)
    except json.JSONDecodeError:
        vals = [float(x) for x in raw.split() if not x.startswith("#")]
        return 1.0, np.array(vals), None
    if "surface" in d:
        return float(d["surface"]["nu"]), np.asarray(d.get("scales"), dtype=float), float(d["surface"]["theta"])
    return float(d["nu"]), (np.asarray(d["scales"], dtype=float) if "scales" in d else None), d.get("theta")


def cmd_flow(args) -> Result:
    from .polyflow import (build_surface, calibration_sweep, commensurability, cylinder_decomposition,
                           first_return_iet, flow_orbit, keane_check, no_small_triangle_check,
                           normalize_to_standard_group, saddle_connections, systole)
    from .conjdyn import calibration_grid

    S = build_surface(args.n)
    if args.action == "normalize":
        Z = normalize_to_standard_group(args.n)
        return Result(Z.to_json(), f"N = {Z.N.tolist()}\nresiduals {Z.residual_rotation:.2e}, "
                                   f"{Z.residual_shear:.2e}; twist {Z.twist:.10g}")
    if args.action == "saddles":
        sc = saddle_connections(S, args.L)
        data = {"n": args.n, "L_max": args.L, "count": len(sc),
                "systole": systole(S) if sc else None,
                "connections": [{"holonomy": list(c.holonomy), "start": c.start, "end": c.end,
                                 "length": c.length} for c in sc]}
        if args.kappa:
            data["kappa_min"] = no_small_triangle_check(S, args.L)
        rows = [[_fmt(c.holonomy[0]), _fmt(c.holonomy[1]), _fmt(c.length), c.start, c.end] for c in sc]
        text = f"{len(sc)} saddle connections of length <= {args.L}"
        if args.kappa:
            text += f"; smallest wedge product {data['kappa_min']:.10g}"
        return Result(data, text,
                      (["hx", "hy", "length", "start", "end"], rows))
    direction = _direction(args.direction) if args.direction is not None else None
    if args.action == "cylinders":
        cyl = cylinder_decomposition(S, direction)
        rep = commensurability(cyl)
        data = {"n": args.n, "direction": args.direction, "area": S.area,
                "cylinders": [{"width": c.width, "height": c.height, "modulus": c.modulus,
                               "area": c.area} for c in cyl],
                "commensurable": rep.commensurable, "ratios": [str(r) for r in rep.ratios],
                "max_residual": rep.max_residual, "twist": rep.twist}
        rows = [[_fmt(c.width), _fmt(c.height), _fmt(c.modulus), _fmt(c.area)] for c in cyl]
        text = "\n".join([f"{len(cyl)} cylinders, moduli ratios {', '.join(map(str, rep.ratios))}"]
                         + [f"  width {c.width:.10g} height {c.height:.10g} modulus {c.modulus:.10g}"
                            for c in cyl])
        return Result(data, text, (["width", "height", "modulus", "area"], rows),
                      ok=rep.commensurable)
    if args.action == "iet":
        iet = first_return_iet(S, direction)
        holds, closest = keane_check(iet, args.depth)
        data = iet.to_json()
        data.update({"keane": holds, "closest_approach": closest, "depth": args.depth})
        rows = [[i, _fmt(l), iet.permutation[i], _fmt(tr)] for i, (l, tr)
                in enumerate(zip(iet.lengths, iet.translations))]
        return Result(data, f"{iet.n_intervals} intervals, permutation {iet.permutation}, "
                            f"degenerate {iet.degenerate}, Keane {holds}",
                      (["interval", "length", "position", "translation"], rows))
    if args.action == "orbit":
        p, _, xy = args.start.partition(":")
        x0 = np.array([float(c) for c in xy.split(",")])
        orb = flow_orbit(S, direction, (int(p), x0), args.T)
        data = {"n": args.n, "time": orb.time, "singular": orb.singular, "hit_time": orb.hit_time,
                "segments": [{"polygon": s.polygon, "start": s.start.tolist(), "end": s.end.tolist(),
                              "t0": s.t0, "t1": s.t1} for s in orb.segments]}
        rows = [[s.polygon, _fmt(s.t0), _fmt(s.start[0]), _fmt(s.start[1]),
                 _fmt(s.end[0]), _fmt(s.end[1])] for s in orb.segments]
        return Result(data, f"{len(orb.segments)} segments, singular {orb.singular}",
                      (["polygon", "t0", "x0", "y0", "x1", "y1"], rows))
    if args.action == "weyl":
        nu, scales, theta_file = _nu_source(args.nu)
        theta = direction if direction is not None else theta_file
        if theta is None:
            raise UsageError("flow weyl needs --direction (or a grid file carrying one)")
        if args.grid is not None:
            scales = calibration_grid(args.grid) if args.grid > 0 else np.array([1.0])
        elif scales is None:
            scales = np.array([1.0])
        region = _region(args.region, S, theta, nu, args.seed)
        sw = calibration_sweep(S, theta, nu, scales, region, args.T, args.samples, args.seed)
        c, m = sw.best
        data = {"n": args.n, "nu": nu, "T": args.T, "samples": args.samples, "seed": args.seed,
                "region": args.region, "best_scale": c, "best_magnitude": m,
                "rows": [{"scale": s, "magnitude": mm, "T": t} for s, mm, t in sw.rows()]}
        rows = [[_fmt(s), _fmt(mm), _fmt(t)] for s, mm, t in sw.rows()]
        return Result(data, f"best scale {c:.6g}: magnitude {m:.6g}",
                      (["scale", "magnitude", "T"], rows), default="csv")
    raise UsageError(args.action)


# ---------------------------------------------------------------------------
# verify

TAGS = {
    "exactfield": ["test_exactfield.py"],
    "trigroup": ["test_trigroup.py"],
    "salem": ["test_salem.py"],
    "conjdyn": ["test_conjdyn.py"],
    "polyflow": ["test_polyflow.py"],
    "cli": ["test_cli.py"],
    "acceptance": ["test_acceptance.py"],
}


def tests_dir() -> Path:
    return Path(__file__).resolve().parents[2] / "tests"


def cmd_verify(args) -> Result:
    root = tests_dir()
    if not root.is_dir():
        raise UsageError(f"test suite not found at {root}")
    m = re.fullmatch(r"criterion(\d+)", args.tag)
    if m:
        targets = [str(root / "test_acceptance.py"), "-k", f"criterion_{int(m.group(1))}_"]
    elif args.tag == "all":
        targets = [str(root)]
    elif args.tag in TAGS:
        targets = [str(root / f) for f in TAGS[args.tag]]
    else:
        raise UsageError(f"unknown tag {args.tag!r}; known: all, criterionN, {', '.join(sorted(TAGS))}")
    cmd = [sys.executable, "-m", "pytest", "-q", *targets]
    proc = subprocess.run(cmd, capture_output=True, text=True)
    tail = proc.stdout.strip().splitlines()[-1:] if proc.stdout.strip() else []
    data = {"tag": args.tag, "returncode": proc.returncode, "summary": tail[0] if tail else ""}
    return Result(data, proc.stdout + proc.stderr, default="text", ok=proc.returncode == 0)


# ---------------------------------------------------------------------------
# parser


def _globals(parser: argparse.ArgumentParser, top: bool) -> None:
    d = (lambda v: v) if top else (lambda v: argparse.SUPPRESS)
    g = parser.add_argument_group("global options")
    g.add_argument("--seed", type=int, default=d(1), help="random seed (default 1)")
    g.add_argument("--precision-bits", type=int, default=d(128),
                   help="working precision for multiprecision steps (default 128)")
    g.add_argument("--threads", type=int, default=d(1), help="worker threads (default 1)")
    g.add_argument("--format", choices=FORMATS, default=d(None),
                   help="output format (default depends on the command)")
    g.add_argument("--out", default=d(None),
                   help="output file; a manifest is written next to it. "
                        "The bare words json/csv/text select a format on standard output")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="veechsalem", description=__doc__.splitlines()[0])
    ap.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    ap.add_argument("-v", "--verbose", action="store_true", help="log progress to standard error")
    _globals(ap, True)
    sub = ap.add_subparsers(dest="command", required=True)

    def leaf(group, name, help_):
        p = group.add_parser(name, help=help_, description=help_)
        _globals(p, False)
        return p

    # salem
    sp = sub.add_parser("salem", help="Salem elements of triangle groups")
    ss = sp.add_subparsers(dest="action", required=True)
    p = leaf(ss, "search", "budgeted search for Salem elements")
    p.add_argument("--family", type=_family, default="2qinf")
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--blocks", type=int, default=6)
    p.add_argument("--exp", type=int, default=12)
    p.add_argument("--max-words", type=int, default=10_000_000)
    p = leaf(ss, "table", "reproduce the published table of Salem elements")
    p.add_argument("--family", type=_family, default="2qinf")
    p.add_argument("--qmax", type=int)
    p.add_argument("--q", type=int)
    p = leaf(ss, "verify-word", "certify one word (exit 1 if not Salem)")
    p.add_argument("--family", type=_family, default="2qinf")
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--word", required=True, help="e.g. t^3.s")
    p = leaf(ss, "witness", "search for a word whose conjugate is close to +-I")
    p.add_argument("--family", type=_family, default="2qinf")
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--sigma", type=_sigma, required=True, help="embedding index, 1 = identity")
    p.add_argument("--eps", type=float, default=0.5)
    p.add_argument("--blocks", type=int, default=6)
    p.add_argument("--exp", type=int, default=12)
    p.add_argument("--max-words", type=int, default=1_000_000)

    # dyn
    dp = sub.add_parser("dyn", help="conjugate cocycle dynamics")
    ds = dp.add_subparsers(dest="action", required=True)
    p = leaf(ds, "lyapunov", "Lyapunov-exponent ratios of the conjugate cocycles")
    p.add_argument("--family", type=_family, default="2qinf")
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--sigma", type=_sigma, help="embedding index (default: every non-identity one)")
    p.add_argument("--steps", type=int, default=10_000)
    p.add_argument("--samples", type=int, default=100)
    p = leaf(ds, "contract", "contraction (or expansion) words for random vectors")
    p.add_argument("--family", type=_family, default="2qinf")
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--samples", type=int, default=10)
    p.add_argument("--C0", type=float, default=1.0)
    p.add_argument("--n-max", type=int, default=500)
    p.add_argument("--k-max", type=int, default=50)
    p.add_argument("--expand", action="store_true")
    for name, help_ in (("track", "target-tracking run"),
                        ("construct", "direction and eigenvalue candidate from a tracking run")):
        p = leaf(ds, name, help_)
        p.add_argument("--q", type=int, default=5)
        p.add_argument("--bits", type=_bits, required=True, help="hex digits, or bin:0101...")
        p.add_argument("--targets", default="constant:1.0",
                       help="constant:A, geometric:RATE or harmonic")
        p.add_argument("--vector", help="lattice vector 'a0,a1;b0,b1' (default (lam^2, 0))")
        if name == "construct":
            p.add_argument("--surface-n", type=int, help="also map the direction to S_n")
    p = leaf(ds, "dimension", "box-counting dimension of constructed directions")
    p.add_argument("--q", type=int, default=5)
    p.add_argument("--directions", type=int, default=512)
    p.add_argument("--depth", type=int, default=40)
    p.add_argument("--middle-thirds", type=int, help="calibrate on the middle-thirds set instead")
    p = leaf(ds, "ratio", "is nu1/nu2 in the trace field?")
    p.add_argument("--family", type=_family, default="2qinf")
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--nu1", type=float, required=True)
    p.add_argument("--nu2", type=float, required=True)
    p.add_argument("--height", type=int, default=10)
    p.add_argument("--tol", type=float, default=1e-9)

    # flow
    fp = sub.add_parser("flow", help="straight-line flow on regular-polygon surfaces")
    fs = fp.add_subparsers(dest="action", required=True)
    dir_help = "angle in radians, side:k, or vec:x,y"
    p = leaf(fs, "orbit", "one flow orbit")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--direction", required=True, help=dir_help)
    p.add_argument("--start", default="0:0.1,0.05", help="polygon:x,y")
    p.add_argument("--T", type=float, default=10.0)
    p = leaf(fs, "saddles", "saddle connections up to a length")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--L", type=float, default=3.0)
    p.add_argument("--kappa", action="store_true", help="also report the smallest wedge product")
    p = leaf(fs, "cylinders", "cylinder decomposition of a periodic direction")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--direction", required=True, help=dir_help)
    p = leaf(fs, "iet", "first-return interval exchange")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--direction", required=True, help=dir_help)
    p.add_argument("--depth", type=int, default=1000, help="Keane check depth")
    p = leaf(fs, "weyl", "Weyl averages over a calibration grid of frequencies")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--direction", help=dir_help)
    p.add_argument("--nu", required=True, help="decimal frequency or grid file")
    p.add_argument("--T", type=float, default=1e5)
    p.add_argument("--samples", type=int, default=32)
    p.add_argument("--region", default="polygon:0", help="polygon:P, rect:P@x0,x1,y0,y1;..., matched, none")
    p.add_argument("--grid", type=int, help="number of log-spaced scales in [1e-2, 1e2]; 0 = scale 1 only")
    p = leaf(fs, "normalize", "conjugate the polygon's Veech generators into the model group")
    p.add_argument("--n", type=int, required=True)

    p = sub.add_parser("verify", help="run a tagged part of the test suite")
    _globals(p, False)
    p.add_argument("--tag", default="acceptance",
                   help="all, acceptance, criterionN, or a module name")
    return ap


def _sha256(data: bytes) -> str:
    return hashlib.sha256(data).hexdigest()


def _config(args) -> dict:
    return {k: v for k, v in sorted(vars(args).items()) if k not in ("out",)}


def write_manifest(path: Path, argv: list[str], args, wall: float, outputs: dict[str, bytes]) -> Path:
    manifest = {
        "argv": argv,
        "config": _config(args),
        "seeds": {"seed": args.seed},
        "versions": {"veechsalem": __version__, "python": platform.python_version(),
                     "numpy": np.__version__, "mpmath": mpmath.__version__},
        "wall_time": wall,
        "outputs": {name: _sha256(b) for name, b in sorted(outputs.items())},
    }
    mpath = path.with_name(path.name + ".manifest.json")
    mpath.write_text(json.dumps(manifest, indent=2, sort_keys=True, default=_json_default) + "\n")
    return mpath


HANDLERS = {"salem": cmd_salem, "dyn": cmd_dyn, "flow": cmd_flow, "verify": cmd_verify}


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    out_path = None
    if args.out in STDOUT_FORMATS:
        args.format = args.format or args.out
    elif args.out is not None:
        out_path = Path(args.out)
    if args.format is None and out_path is not None:
        args.format = {".json": "json", ".csv": "csv", ".txt": "text"}.get(out_path.suffix)
    mpmath.mp.prec = max(53, args.precision_bits)
    t0 = time.perf_counter()
    try:
        res = HANDLERS[args.command](args)
        body = res.render(args.format or res.default)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"{parser.prog}: error: {exc}", file=sys.stderr)
        return 2
    except (ValueError, ArithmeticError, LookupError, RuntimeError) as exc:
        print(f"{parser.prog}: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    wall = time.perf_counter() - t0
    if out_path is None:
        try:
            sys.stdout.write(body)
            sys.stdout.flush()
        except BrokenPipeError:  # e.g. piped into head
            sys.stdout = open(os.devnull, "w")
    else:
        out_path.write_text(body)
        write_manifest(out_path, argv, args, wall, {out_path.name: body.encode()})
        print(f"wrote {out_path}", file=sys.stderr)
    return 0 if res.ok else 1


if __name__ == "__main__":
    sys.exit(main())
