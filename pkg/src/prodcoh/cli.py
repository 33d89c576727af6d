"""Command-line front end.

    prodcoh ring --group C2xC2 --field 2 --cap 5
    prodcoh productive --group C2xC2 --field 2 --expr "x^2+x*y+y^2"
    prodcoh semiproductive --group Q8 --field 2^2:1,1,1 --expr "a*x+y" --cap 4 --json

Exit status: 0 on success, 2 on input errors, 3 when a size budget is exceeded.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from dataclasses import dataclass, field as dc_field

from .cohomology import CohClass, Cohomology
from .errors import BudgetExceeded, ProdcohError
from .field import parse_field
from .group import load_group_file, preset_group
from .resolutions import ResolutionConfig, make_resolution

COMMANDS = ("ring", "cup", "sq", "massey", "productive", "semiproductive", "oracle", "obstruction", "selftest")


@dataclass
class RunConfig:
    command: str
    group: str | None = None
    group_file: str | None = None
    field: str = "2"
    resolution: str = "minimal"
    cap: int | None = None
    exprs: list = dc_field(default_factory=list)
    coords: list = dc_field(default_factory=list)
    json: bool = False
    seed: int | None = None
    target: str = "productive"
    quick: bool = False
    degree_cap: int | None = None  # minimum resolution degree

    def __post_init__(self):
        if self.command == "selftest":
            return
        if (self.group is None) == (self.group_file is None):
            raise ValueError("give exactly one of --group and --group-file")


class _Session:
    """Group, field and a cohomology ring that grows on demand."""

    def __init__(self, cfg: RunConfig):
        self.cfg = cfg
        self.G = preset_group(cfg.group) if cfg.group else load_group_file(cfg.group_file)
        self.F = parse_field(cfg.field)
        self.ring = None

    def ring_through(self, degree) -> Cohomology:
        degree = max(degree, self.cfg.degree_cap or 0)
        if self.ring is None or self.ring.top < degree:
            rc = ResolutionConfig(kind=self.cfg.resolution, degree=degree, seed=self.cfg.seed)
            self.ring = Cohomology(make_resolution(self.G, self.F, rc))
        return self.ring

    def classes(self, need=None, base=4):
        """Parse the input classes; `need(degrees)` gives the resolution degree required."""
        texts = [("expr", e) for e in self.cfg.exprs] + [("coords", c) for c in self.cfg.coords]
        if not texts:
            raise ValueError("this command needs --expr or --coords")
        ring = self.ring_through(base)
        out = [ring.parse(t) if kind == "expr" else ring.parse_coords(t) for kind, t in texts]
        want = need([x.degree for x in out]) if need else base
        if want > ring.top:
            ring = self.ring_through(want)
            out = [ring.parse(t) if kind == "expr" else ring.parse_coords(t) for kind, t in texts]
        return out


def _cls(x):
    if x is None:
        return None
    if isinstance(x, CohClass):
        return {"expr": str(x), "coords": x.key()}
    if isinstance(x, (list, tuple)):
        return [_cls(v) for v in x]
    if isinstance(x, dict):
        return {k: _cls(v) for k, v in x.items()}
    return x


def _verdict_report(cfg, x, v):
    return _report(cfg, x, v.status, v.witness, v.degree)


def _report(cfg, x, status, witness, degree=None, **extra):
    out = {"command": cfg.command, "group": cfg.group or cfg.group_file, "field": cfg.field,
           "class": _cls(x), "status": status, "certified_degree": degree, "witness": _cls(witness)}
    out.update({k: _cls(v) for k, v in extra.items()})
    return out


def run_command(cfg: RunConfig) -> dict:
    from . import oracle, postnikov, steenrod

    s = _Session(cfg)
    c = cfg.command
    if c == "ring":
        cap = 6 if cfg.cap is None else cfg.cap
        ring = s.ring_through(cap + 1)
        dims = ring.dims(cap)
        return _report(cfg, None, "ok", {"dims": dims, "generators": ring.generator_names()})
    if c == "cup":
        x, y = s.classes(lambda d: sum(d) + 1)[:2]
        return _report(cfg, [x, y], "ok", x.ring.cup(x, y))
    if c == "sq":
        (x,) = s.classes(lambda d: 2 * d[0] + 1)[:1]
        return _report(cfg, x, "ok", steenrod.sq_top_minus_one(x))
    if c == "massey":
        u, v, w = s.classes(lambda d: sum(d) + 1)[:3]
        rep, J = steenrod.massey_triple(u, v, w)
        return _report(cfg, [u, v, w], "ok", rep, indeterminacy=[[int(c) for c in row] for row in J])
    if c == "productive":
        (x,) = s.classes(lambda d: max(2 * d[0] + 1, (cfg.cap or 0) + 1))[:1]
        cap = cfg.cap if cfg.cap is not None else oracle.default_cap(s.G, s.F)
        v = steenrod.is_productive(x, cap if s.F.p != 2 else None)
        return _verdict_report(cfg, x, v)
    if c == "semiproductive":
        cap = 4 if cfg.cap is None else cfg.cap
        (x,) = s.classes(lambda d: cap + 2 * d[0] + 1)[:1]
        return _verdict_report(cfg, x, steenrod.is_semiproductive(x, cap))
    if c == "oracle":
        cap = cfg.cap if cfg.cap is not None else oracle.default_cap(s.G, s.F)
        (x,) = s.classes(lambda d: cap + 1)[:1]
        fn = oracle.oracle_productive if cfg.target == "productive" else oracle.oracle_semiproductive
        v = fn(x, cap)
        return _verdict_report(cfg, x, v)
    if c == "obstruction":
        (x,) = s.classes(lambda d: 2 * d[0] + 3)[:1]
        r = postnikov.obstruction(x)
        wit = r.witness if r.vanishes else r.residue
        return _report(cfg, x, "Yes" if r.vanishes else "No", wit, vanishes=r.vanishes,
                       residue_coords=r.residue.key() if r.residue is not None else None)
    raise ValueError(f"unknown command {c!r}")


def _text(rep: dict) -> str:
    c = rep["command"]
    w = rep["witness"]
    if c == "ring":
        return "dims: " + ",".join(str(d) for d in w["dims"]) + "\ngenerators: " + " ".join(w["generators"])
    cls = rep["class"]
    name = ", ".join(v["expr"] for v in cls) if isinstance(cls, list) else cls["expr"]
    if rep["status"] == "ok":
        line = f"{c}({name}) = {w['expr']}  [{w['coords']}]"
        if c == "massey":
            line += f"\nindeterminacy rows: {rep['indeterminacy']}"
        return line
    status = rep["status"] if rep["certified_degree"] is None else f"{rep['status']}({rep['certified_degree']})"
    line = f"{c} {name}: {status}"
    if isinstance(w, dict) and "expr" in w:
        line += f"\nwitness: {w['expr']}  [{w['coords']}]"
    elif w:
        line += f"\nwitness: {json.dumps(w, sort_keys=True)}"
    return line


def selftest(quick=False, out=None) -> int:
    from .acceptance import CHECKS

    out = sys.stdout if out is None else out
    failed = 0
    for check in CHECKS:
        if quick and check.slow:
            out.write(f"SKIP  {check.name}\n")
            continue
        t = time.perf_counter()
        try:
            ok, detail = check.run()
        except Exception as exc:  # report and continue
            ok, detail = False, f"{type(exc).__name__}: {exc}"
        dt = time.perf_counter() - t
        if check.expected_failure and not ok:
            tag = "XFAIL"
        else:
            tag = "PASS " if ok else "FAIL "
            failed += not ok
        out.write(f"{tag} {check.name} ({dt:.1f}s) {detail}\n")
    return 1 if failed else 0


def build_parser():
    ap = argparse.ArgumentParser(prog="prodcoh", description="Productive elements in group cohomology.")
    sub = ap.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        p = sub.add_parser(name)
        if name == "selftest":
            p.add_argument("--quick", action="store_true", help="skip the slow checks")
            continue
        g = p.add_mutually_exclusive_group(required=True)
        g.add_argument("--group", help="preset name such as C2xC2, Q8, C4, D8")
        g.add_argument("--group-file", help='JSON file {"order": n, "table": [[...]]}')
        p.add_argument("--field", default="2", help='"p" or "p^m:c0,...,cm"')
        p.add_argument("--resolution", choices=("minimal", "bar"), default="minimal")
        p.add_argument("--cap", type=int)
        p.add_argument("--expr", action="append", default=[])
        p.add_argument("--coords", action="append", default=[])
        p.add_argument("--json", action="store_true")
        p.add_argument("--seed", type=int)
        p.add_argument("--degree-cap", type=int, help="resolve at least through this degree")
        if name == "oracle":
            p.add_argument("--target", choices=("productive", "semiproductive"), default="productive")
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "selftest":
        return selftest(args.quick)
    try:
        cfg = RunConfig(args.command, args.group, args.group_file, args.field, args.resolution, args.cap,
                        args.expr, args.coords, args.json, args.seed, getattr(args, "target", "productive"),
                        degree_cap=args.degree_cap)
        rep = run_command(cfg)
    except BudgetExceeded as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 3
    except (ProdcohError, ValueError, OSError, KeyError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2
    print(json.dumps(rep, sort_keys=True, default=int) if cfg.json else _text(rep))
    return 0


if __name__ == "__main__":
    sys.exit(main())
