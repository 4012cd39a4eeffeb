"""Command-line front end.

Spec files are line based; ``#`` starts a comment::

    name   square-times-linear
    rows   1
    mode   sym
    orbit  2 : 2 1

``orbit K : ...`` declares an orbit of arity ``K`` followed by its exponent
block, ``rows`` lines of ``K`` integers separated by ``;``. Exit codes: 0
success or equal, 1 difference or failed check, 2 usage error, 3 width cap
exceeded.
"""
from __future__ import annotations

import argparse
import json
import sys
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Optional

from .equivariant import (
    EqGB,
    canonical_sym,
    compress,
    markov_minimize,
    phi_kernel_bounded,
    truncated_equivariant_gb,
    verify_equivariant_criterion,
)
from .errors import InctoricError, SpecError, SpecParseError, WidthCapExceeded
from .mapspec import MODES, MapSpec, factor_map
from .matching import GoodTuple, decompose_matchings
from .symmetry import GREVLEX, LEX, Binomial, MonomialOrder, parse_binomial

EXIT_OK, EXIT_DIFF, EXIT_USAGE, EXIT_CAP = 0, 1, 2, 3
ORDERS = {"lex-elim-z": LEX, "grevlex": GREVLEX}
DATA = Path(__file__).parent / "data"


def parse_spec(text: str) -> MapSpec:
    rows = None
    mode = "sym"
    name = ""
    orbits = []
    for ln, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0]
        if not line.strip():
            continue
        col = len(line) - len(line.lstrip()) + 1
        head, _, rest = line.strip().partition(" ")
        rest = rest.strip()
        if head == "name":
            name = rest
        elif head == "rows":
            try:
                rows = int(rest)
            except ValueError:
                raise SpecParseError(f"rows expects an integer, got {rest!r}", ln, col + 5) from None
        elif head == "mode":
            if rest not in MODES:
                raise SpecParseError(f"mode must be one of {', '.join(MODES)}", ln, col + 5)
            mode = rest
        elif head == "orbit":
            k_txt, sep, block = rest.partition(":")
            if not sep:
                raise SpecParseError("orbit line needs 'K : exponents'", ln, col)
            try:
                k = int(k_txt)
                mat = tuple(tuple(int(x) for x in r.split()) for r in block.split(";"))
            except ValueError:
                raise SpecParseError("orbit arity and exponents must be integers", ln, col + 6) from None
            orbits.append((k, mat, ln))
        else:
            raise SpecParseError(f"unknown keyword {head!r}", ln, col)
    if rows is None:
        rows = len(orbits[0][1]) if orbits else 0
    if not orbits:
        raise SpecError("spec declares no orbit")
    for k, mat, ln in orbits:
        if k > 0 and len(mat) != rows:
            raise SpecParseError(f"exponent block has {len(mat)} rows, expected {rows}", ln, 1)
    return MapSpec(tuple(k for k, _, _ in orbits), tuple(m for _, m, _ in orbits), rows, mode, name=name)


def render_spec(spec: MapSpec) -> str:
    lines = []
    if spec.name:
        lines.append(f"name {spec.name}")
    lines += [f"rows {spec.rows}", f"mode {spec.mode}"]
    for k, D in zip(spec.arities, spec.blocks):
        lines.append(f"orbit {k} : " + " ; ".join(" ".join(map(str, r)) for r in D))
    return "\n".join(lines) + "\n"


def render_basis(b: Iterable[Binomial], order: MonomialOrder = LEX) -> str:
    k = order.key
    items = sorted(set(b), key=lambda g: (g.degree, k(g.lead), k(g.tail)))
    return "".join(f"{g}\n" for g in items)


def parse_basis(text: str, order: MonomialOrder = LEX) -> list:
    out = []
    for ln, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if line:
            b = parse_binomial(line, ln, order)
            if b is not None:
                out.append(b)
    return out


@dataclass
class GoldenDiff:
    missing: list = field(default_factory=list)
    extra: list = field(default_factory=list)
    orientation_flips: int = 0

    @property
    def equal(self) -> bool:
        return not self.missing and not self.extra

    def report(self) -> str:
        lines = [f"orientation flips calibrated: {self.orientation_flips}"]
        lines += [f"- {g}" for g in self.missing]
        lines += [f"+ {g}" for g in self.extra]
        lines.append("equal" if self.equal else f"differ: {len(self.missing)} missing, {len(self.extra)} extra")
        return "\n".join(lines) + "\n"


def compare_golden(
    computed: Iterable[Binomial], golden: str, order: MonomialOrder = LEX, canonical: Optional[str] = None
) -> GoldenDiff:
    """Set comparison after orientation calibration.

    Golden lines are read as printed and re-oriented under ``order``; the
    number of reversed lines is reported. ``canonical`` (``"inc"`` or
    ``"sym"``) compares orbit representatives instead of elements.
    """
    raw = []
    for ln, line in enumerate(golden.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        b = parse_binomial(line, ln, order)
        if b is None:
            continue
        printed_lead = line.split("-")[0].strip()
        raw.append((b, printed_lead != str(b.lead) and printed_lead.replace(" ", "") != str(b.lead)))
    canon = {None: lambda g: g, "none": lambda g: g, "inc": lambda g: compress(g, order),
             "sym": lambda g: canonical_sym(g, order)}[canonical]
    gold = {canon(b) for b, _ in raw}
    mine = {canon(b) for b in computed}
    k = order.key
    srt = lambda s: sorted(s, key=lambda g: (g.degree, k(g.lead), k(g.tail)))
    return GoldenDiff(srt(gold - mine), srt(mine - gold), sum(flip for _, flip in raw))


def _eqgb_json(R: EqGB, basis: list, extra: Optional[dict] = None) -> dict:
    d = {
        "spec": render_spec(R.spec),
        "m": R.m,
        "certificate_width": R.certificate_width,
        "size": len(basis),
        "basis": [str(g) for g in basis],
        "transcript": R.transcript,
    }
    if extra:
        d.update(extra)
    return d


def _load_spec(args) -> MapSpec:
    spec = parse_spec(Path(args.spec).read_text())
    if getattr(args, "mode", None) and args.mode != spec.mode:
        spec = MapSpec(spec.arities, spec.blocks, spec.rows, args.mode, name=spec.name)
    return spec


def _emit(args, text: str, payload: dict) -> None:
    if args.format == "json":
        sys.stdout.write(json.dumps(payload, indent=2, default=str) + "\n")
    else:
        sys.stdout.write(text)


def _golden_exit(args, basis: list, order: MonomialOrder, payload: dict) -> int:
    if not args.golden:
        return EXIT_OK
    diff = compare_golden(basis, Path(args.golden).read_text(), order, args.canonical)
    payload["golden"] = {"equal": diff.equal, "missing": [str(g) for g in diff.missing],
                         "extra": [str(g) for g in diff.extra], "orientation_flips": diff.orientation_flips}
    if args.format != "json":
        sys.stderr.write(diff.report())
    return EXIT_OK if diff.equal else EXIT_DIFF


def _compute(args) -> EqGB:
    spec = _load_spec(args)
    order = ORDERS[args.order]
    log = None
    if args.verbose:
        log = lambda e: print(json.dumps(e), file=sys.stderr, flush=True)
    return truncated_equivariant_gb(spec, args.max_width, order, args.strategy, log)


def cmd_gb(args) -> int:
    t = time.time()
    R = _compute(args)
    basis = R.generators
    payload = _eqgb_json(R, basis, {"command": "gb", "seconds": round(time.time() - t, 3)})
    code = _golden_exit(args, basis, R.order, payload)
    _emit(args, render_basis(basis, R.order), payload)
    return code


def cmd_markov(args) -> int:
    t = time.time()
    R = _compute(args)
    basis = markov_minimize(R)
    payload = _eqgb_json(R, basis, {"command": "markov", "seconds": round(time.time() - t, 3)})
    code = _golden_exit(args, basis, R.order, payload)
    _emit(args, render_basis(basis, R.order), payload)
    return code


def cmd_verify(args) -> int:
    order = ORDERS[args.order]
    if args.basis:
        G = parse_basis(Path(args.basis).read_text(), order)
    else:
        G = _compute(args).generators
    m = max((g.window for g in G), default=0)
    n = args.width if args.width is not None else max(2 * m - 1, 0)
    v = verify_equivariant_criterion(G, n, order)
    payload = {"command": "verify", "passed": v.passed, "width": n, "elements": len(G), "expanded": v.expanded,
               "candidates": v.candidates, "chain_skipped": v.chain_skipped, "reduced": v.reduced,
               "seconds": round(v.seconds, 3)}
    text = f"{'pass' if v.passed else 'fail'}: {len(G)} elements, width {n}, {v.reduced} S-pairs reduced\n"
    if v.counterexample:
        f, g, r = v.counterexample
        payload["counterexample"] = {"f": str(f), "g": str(g), "remainder": str(r)}
        text += f"counterexample: S({f}, {g}) -> {r}\n"
    _emit(args, text, payload)
    return EXIT_OK if v.passed else EXIT_DIFF


def cmd_kernel_phi(args) -> int:
    spec = _load_spec(args)
    phi, _ = factor_map(spec)
    K = phi_kernel_bounded(phi, args.width)
    reps = sorted({compress(g) for g in K}, key=lambda g: (g.degree, LEX.key(g.lead), LEX.key(g.tail)))
    shown = reps if args.orbits else K
    payload = {"command": "kernel-phi", "width": args.width, "size": len(K), "orbits": len(reps),
               "basis": [str(g) for g in render_basis(shown).splitlines()]}
    _emit(args, render_basis(shown), payload)
    return EXIT_OK


def _parse_block(text: str) -> list:
    return [[int(x) for x in r.split()] for r in text.split(";")]


def cmd_decompose(args) -> int:
    mats = [_parse_block(b) for b in args.block]
    A = GoodTuple.of(mats)
    out = decompose_matchings(A)
    by_p = {}
    for p, M in out:
        by_p.setdefault(p, []).append(list(M.cols))
    text = "".join(f"{p}: " + " ".join(f"{l}->{c}" for l, c in enumerate(cols)) + "\n" for p, cols in
                   ((p, M.cols) for p, M in out))
    _emit(args, text, {"command": "decompose", "degree": list(A.degree), "matchings": by_p})
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="inctoric", description="Equivariant Groebner and Markov bases of toric kernels.")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, spec=True):
        if spec:
            sp.add_argument("spec", help="map specification file")
        sp.add_argument("--format", choices=("text", "json"), default="text")

    def engine(sp):
        sp.add_argument("--max-width", type=int, default=12)
        sp.add_argument("--order", choices=tuple(ORDERS), default="lex-elim-z")
        sp.add_argument("--mode", choices=MODES)
        sp.add_argument("--strategy", choices=("criterion", "direct"), default="criterion")
        sp.add_argument("--golden", help="golden basis file to compare against")
        sp.add_argument("--canonical", choices=("none", "inc", "sym"), default="none",
                        help="compare orbit representatives instead of elements")
        sp.add_argument("-v", "--verbose", action="store_true", help="log stop-test transcript to stderr")

    for name, helptext in (("gb", "Inc-orbit representatives of the stabilised Groebner basis"),
                           ("markov", "minimal orbit representatives of a Markov basis")):
        sp = sub.add_parser(name, help=helptext)
        common(sp)
        engine(sp)
    sp = sub.add_parser("verify", help="check the equivariant Buchberger criterion")
    common(sp)
    engine(sp)
    sp.add_argument("--basis", help="binomial file to verify instead of the computed basis")
    sp.add_argument("--width", type=int, help="verification width (default 2m - 1)")
    sp = sub.add_parser("kernel-phi", help="bounded-degree kernel of the matching map")
    common(sp)
    sp.add_argument("--mode", choices=MODES)
    sp.add_argument("--width", type=int, required=True)
    sp.add_argument("--orbits", action="store_true", help="print compressed orbit representatives only")
    sp = sub.add_parser("decompose", help="split a good matrix tuple into matchings")
    common(sp, spec=False)
    sp.add_argument("--block", action="append", required=True, help="matrix rows separated by ';'")
    return p


COMMANDS = {"gb": cmd_gb, "markov": cmd_markov, "verify": cmd_verify, "kernel-phi": cmd_kernel_phi,
            "decompose": cmd_decompose}


def main(argv: Optional[list] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_USAGE if e.code else EXIT_OK
    try:
        return COMMANDS[args.command](args)
    except WidthCapExceeded as e:
        print(f"error: {e}", file=sys.stderr)
        if args.format == "json":
            sys.stdout.write(json.dumps({"error": str(e), "transcript": e.transcript}, default=str) + "\n")
        return EXIT_CAP
    except (InctoricError, ValueError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
