"""Command-line entry point: ``ectorsion {census,constants,regions,families,verify}``."""

from __future__ import annotations

import argparse
import datetime
import json
import re
import sys
from typing import Any, Optional, Sequence

_SAFE = 2**53


def parse_height(text: str) -> int:
    """Exact integer from ``"1000000"``, ``"1e6"``, ``"10^6"`` or ``"10**6"``."""
    s = text.strip().replace("_", "")
    if re.fullmatch(r"\d+", s):
        n = int(s)
    elif m := re.fullmatch(r"(\d+)[eE]\+?(\d+)", s):
        n = int(m.group(1)) * 10 ** int(m.group(2))
    elif m := re.fullmatch(r"(\d+)(?:\^|\*\*)(\d+)", s):
        n = int(m.group(1)) ** int(m.group(2))
    else:
        raise argparse.ArgumentTypeError(f"not an integer height: {text!r}")
    if n < 1:
        raise argparse.ArgumentTypeError("height must be at least 1")
    return n


def parse_checkpoints(text: str) -> list[int]:
    return sorted(parse_height(p) for p in text.split(",") if p.strip())


def _positive(text: str) -> int:
    n = int(text)
    if n < 1:
        raise argparse.ArgumentTypeError("must be a positive integer")
    return n


def jsonable(obj: Any) -> Any:
    """Recursively convert to JSON types; integers beyond 2^53 become strings."""
    if isinstance(obj, bool) or obj is None:
        return obj
    if isinstance(obj, int):
        return obj if -_SAFE < obj < _SAFE else str(obj)
    if isinstance(obj, float):
        return obj
    if isinstance(obj, dict):
        return {str(k): jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [jsonable(v) for v in obj]
    if hasattr(obj, "item"):  # numpy scalars
        return jsonable(obj.item())
    return str(obj)


def _dump(obj: Any, path: Optional[str]) -> None:
    text = json.dumps(jsonable(obj), indent=1, sort_keys=True) + "\n"
    if path and path != "-":
        with open(path, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


# ---------------------------------------------------------------------------


def cmd_census(args) -> int:
    from . import census

    cps = args.checkpoints or census.default_checkpoints(args.max_height)
    table = census.run_census(args.max_height, cps, threads=args.threads)
    if args.json:
        _dump(table.to_json(), args.json)
    else:
        text = table.to_csv()
        if args.csv and args.csv != "-":
            with open(args.csv, "w") as fh:
                fh.write(text)
        else:
            sys.stdout.write(text)
    return 0


def cmd_constants(args) -> int:
    from . import regions

    rep = regions.constants_report(with_families=not args.no_families)
    if args.json:
        _dump(rep.to_json(), "-")
        return 0
    d = rep.to_json()
    for k, v in d.items():
        if isinstance(v, list):
            v = "[" + ", ".join(f"{x:.10f}" for x in v) + "]"
        elif isinstance(v, float):
            v = f"{v:.10f}"
        print(f"{k:36} {v}")
    return 0


def cmd_regions(args) -> int:
    from . import regions

    r = regions.sieved_count(args.i, args.max_height)
    out = {
        "lattice": r.lattice,
        "distinct": r.distinct,
        "sieved": r.mobius,
        "empirical_constant": r.mobius / float(args.max_height) ** (1 / regions.d_value(args.i)),
        "c_formula": regions.c_constant(args.i),
    }
    if args.json:
        _dump(out, "-")
    else:
        for k, v in out.items():
            print(f"{k:20} {v}")
    return 0


def cmd_families(args) -> int:
    from . import families

    fams = families.all_families(args.family_file)
    if args.group not in fams:
        print(f"no family for {args.group}; available: {', '.join(sorted(fams))}", file=sys.stderr)
        return 2
    spec = fams[args.group]
    X = args.max_height
    hs = args.checkpoints or sorted({max(1, round(X ** (k / 4))) for k in (1, 2, 3)} | {X})
    if hs[-1] > X:
        print("checkpoints must not exceed --max-height", file=sys.stderr)
        return 2
    counts = [(h, len(families.enumerate_family(spec, h))) for h in hs]
    usable = [(h, n) for h, n in counts if n > 0]
    slope = families.fit_exponent(usable) if len(usable) >= 3 else None
    out = {
        "group": spec.group.label,
        "max_height": X,
        "count": counts[-1][1],
        "counts": [{"X": h, "count": n} for h, n in counts],
        "fitted_exponent": slope,
        "expected_exponent": float(spec.expected_exponent),
    }
    if args.json:
        _dump(out, "-")
    else:
        for h, n in counts:
            print(f"X={h}  count={n}")
        print(f"fitted exponent {slope if slope is not None else 'insufficient data'}, expected {float(spec.expected_exponent):.6f}")
    return 0


def cmd_verify(args) -> int:
    from . import verify

    results = verify.run_suite(args.max_height, args.threads, args.family_file, log=lambda s: print(s, flush=True))
    code = verify.exit_code(results)
    if args.report:
        _dump(
            {
                "generated": datetime.datetime.now(datetime.timezone.utc).isoformat(),
                "max_height": args.max_height,
                "criteria": [r.to_json() for r in results],
                "findings": [r.to_json() for r in results if r.status == "finding"],
                "exit_code": code,
            },
            args.report,
        )
    return code


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="ectorsion", description="Count elliptic curves over Q by height and torsion.")
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("census", help="exhaustive torsion census")
    c.add_argument("--max-height", type=parse_height, required=True)
    c.add_argument("--checkpoints", type=parse_checkpoints)
    c.add_argument("--threads", type=_positive, default=1)
    out = c.add_mutually_exclusive_group()
    out.add_argument("--csv", metavar="PATH")
    out.add_argument("--json", metavar="PATH")
    c.set_defaults(func=cmd_census)

    k = sub.add_parser("constants", help="alpha, beta, I, areas and c_i")
    k.add_argument("--json", action="store_true")
    k.add_argument("--no-families", action="store_true", help="skip the Z/3 sign adjudication")
    k.set_defaults(func=cmd_constants)

    r = sub.add_parser("regions", help="lattice, distinct and sieved counts for R_i(X)")
    r.add_argument("--i", type=int, choices=(1, 2, 3), required=True)
    r.add_argument("--max-height", type=parse_height, required=True)
    r.add_argument("--json", action="store_true")
    r.set_defaults(func=cmd_regions)

    f = sub.add_parser("families", help="enumerate a universal family")
    f.add_argument("--group", required=True)
    f.add_argument("--max-height", type=parse_height, required=True)
    f.add_argument("--checkpoints", type=parse_checkpoints)
    f.add_argument("--family-file")
    f.add_argument("--json", action="store_true")
    f.set_defaults(func=cmd_families)

    v = sub.add_parser("verify", help="run the acceptance suite")
    v.add_argument("--max-height", type=parse_height, help="cap the scale (quick mode below 1e8)")
    v.add_argument("--threads", type=_positive, default=1)
    v.add_argument("--family-file")
    v.add_argument("--report", metavar="PATH")
    v.set_defaults(func=cmd_verify)
    return p


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    if getattr(args, "checkpoints", None) and args.checkpoints[-1] > args.max_height:
        build_parser().error("checkpoints must not exceed --max-height")
    from .families import FamilyFileError, FamilyValidationError

    try:
        return args.func(args)
    except (FamilyFileError, FamilyValidationError) as exc:
        print(f"family file error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
