"""Command-line front end.

Exit codes: 0 every requested invariant verified, 2 precision exhausted,
3 an invariant was falsified (witness in the output), 64 usage error.
All output is deterministic: identical invocations produce identical bytes.
"""

from __future__ import annotations

import argparse
import json
import sys
from concurrent.futures import ProcessPoolExecutor

from .classgroup import characters_of, narrow_class_group
from .doubling import ExperimentConfig, run_experiment
from .eigenforms import CONSTANT_MODES, constant_form, eisenstein
from .errors import FalsificationError, NeedsExtension, PrecisionError
from .gf import gf_make
from .ideals import IdealHNF, factor_ideal
from .operators import apply_T, apply_VP_direct, apply_diamond, hasse_lift
from .quadfield import make_field

EXIT_OK = 0
EXIT_PRECISION = 2
EXIT_FALSIFIED = 3
EXIT_USAGE = 64


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(
        prog="hmfmodp",
        description=(
            "Exact mod-p q-expansion calculus for Hilbert modular forms over "
            "real quadratic fields"
        ),
    )
    parser.add_argument("--seed", type=int, default=0,
                        help="seed recorded for reproducibility (no command draws randomness)")
    sub = parser.add_subparsers(dest="command", required=True)

    fi = sub.add_parser("field-info", help="field, class group and character data")
    fi.add_argument("--D", type=int, required=True, help="squarefree integer > 1")
    fi.add_argument("--p", type=int, help="characteristic for the character table")
    fi.add_argument("--m", type=int, help="extension degree (least sufficient if omitted)")
    fi.add_argument("--out", help="write JSON here instead of stdout")

    ap = sub.add_parser("apply", help="apply an operator to an eigenform")
    ap.add_argument("--D", type=int, required=True)
    ap.add_argument("--p", type=int, required=True)
    ap.add_argument("--m", type=int)
    ap.add_argument("--B", type=int, default=200, help="coefficient precision")
    ap.add_argument("--form", choices=["eisenstein", "constant"], default="eisenstein")
    ap.add_argument("--phi1", type=int, default=0, help="character index")
    ap.add_argument("--phi2", type=int, default=0,
                    help="character index (nebentypus index for constant forms)")
    ap.add_argument("--constant-mode", choices=list(CONSTANT_MODES), default="zero")
    ap.add_argument("--op", choices=["T", "diamond", "VP", "hasse"], required=True)
    ap.add_argument("--ideal", help='ideal as JSON triple "[a,b,c]" (for T, diamond, VP)')
    ap.add_argument("--k-override", type=int, dest="k_override",
                    help="apply T at this weight instead of the form's weight")
    ap.add_argument("--out")

    db = sub.add_parser("doubling", help="run doubling experiments")
    db.add_argument("--D", type=int)
    db.add_argument("--p", type=int)
    db.add_argument("--m", type=int)
    db.add_argument("--B", type=int)
    db.add_argument("--phi1", type=int, default=0)
    db.add_argument("--phi2", type=int, default=0)
    db.add_argument("--constant-mode", choices=list(CONSTANT_MODES), default="zero")
    db.add_argument("--roots", choices=["first", "second", "both"], default="first")
    db.add_argument("--config", help="JSON file with one experiment config")
    db.add_argument("--grid", help="JSON file with a list of configs (or one per line)")
    db.add_argument("--jobs", type=int, default=1, help="parallel grid workers")
    db.add_argument("--out")
    return parser


def _parse_ideal(field, text: str) -> IdealHNF:
    try:
        triple = json.loads(text)
    except json.JSONDecodeError as e:
        raise ValueError(f"ideal is not valid JSON at position {e.pos}: {e.msg}")
    if not (isinstance(triple, list) and len(triple) == 3
            and all(isinstance(t, int) for t in triple)):
        raise ValueError(f"ideal must be a JSON triple [a, b, c], got {text!r}")
    return IdealHNF(field, *triple)


def _field_and_characters(D: int, p: int | None, m: int | None):
    field = make_field(D)
    G = narrow_class_group(field)
    if p is None:
        return field, G, None, None
    if m is None:
        m = 1
        while (p**m - 1) % G.exponent:
            m += 1
    gf = gf_make(p, m)
    chars = characters_of(G, gf)
    return field, G, gf, chars


def cmd_field_info(args) -> dict:
    field, G, gf, chars = _field_and_characters(args.D, args.p, args.m)
    u = field.fundamental_unit
    out = {
        "D": field.D,
        "disc": field.disc,
        "omega": "half" if field.omega_is_half else "sqrt",
        "fundamental_unit": {"x": u.x, "y": u.y},
        "unit_norm": field.unit_norm,
        "narrow_class_number": G.order,
        "class_reps": [r.triple() for r in G.reps],
        "composition_table": G.table,
        "exponent": G.exponent,
    }
    if chars is not None:
        out["p"] = gf.p
        out["m"] = gf.m
        out["modulus"] = list(gf.modulus)
        out["characters"] = [ch.serialize() for ch in chars]
    return out


def cmd_apply(args) -> dict:
    field, G, gf, chars = _field_and_characters(args.D, args.p, args.m)
    if not (0 <= args.phi1 < len(chars) and 0 <= args.phi2 < len(chars)):
        raise ValueError(
            f"character indices must be in [0, {len(chars)}), got "
            f"({args.phi1}, {args.phi2})"
        )
    if args.form == "eisenstein":
        f = eisenstein(chars[args.phi1], chars[args.phi2], args.B, args.constant_mode)
    else:
        f = constant_form(chars[args.phi1], chars[args.phi2], args.B)

    if args.op == "hasse":
        result = hasse_lift(f)
    else:
        if args.ideal is None:
            raise ValueError(f"--op {args.op} requires --ideal")
        ideal = _parse_ideal(field, args.ideal)
        if args.op == "diamond":
            result = apply_diamond(f, ideal)
        elif args.op == "VP":
            result = apply_VP_direct(f, ideal)
        else:
            fac = factor_ideal(ideal)
            if len(fac) != 1 or fac[0][1] != 1:
                raise ValueError(f"--op T requires a prime ideal, got {args.ideal}")
            result = apply_T(f, fac[0][0], args.k_override)
    return {
        "meta": {
            "D": args.D,
            "p": args.p,
            "m": gf.m,
            "form": args.form,
            "phi1": args.phi1,
            "phi2": args.phi2,
            "constant_mode": args.constant_mode,
            "op": args.op,
            "ideal": json.loads(args.ideal) if args.ideal else None,
            "input_precision": f.precision,
        },
        "result": result.serialize(),
    }


def _load_grid(path: str) -> list[dict]:
    with open(path) as fh:
        text = fh.read()
    stripped = text.lstrip()
    if stripped.startswith("["):
        data = json.loads(text)
        if not isinstance(data, list):
            raise ValueError("grid file must hold a JSON list or JSON lines")
        return data
    return [json.loads(line) for line in text.splitlines() if line.strip()]


def _expand_roots(raw: dict) -> list[dict]:
    choice = raw.get("root_choice", "first")
    if choice == "both":
        return [
            {**raw, "root_choice": "first"},
            {**raw, "root_choice": "second"},
        ]
    return [raw]


def _run_one(raw: dict) -> dict:
    try:
        report = run_experiment(ExperimentConfig.from_dict(raw))
        return {"status": "ok", "report": report.to_jsonable()}
    except FalsificationError as e:
        return {
            "status": "falsified",
            "config": raw,
            "stage": e.stage,
            "witness": str(e.witness),
        }
    except PrecisionError as e:
        return {"status": "precision_exhausted", "config": raw, "detail": str(e)}


def cmd_doubling(args) -> tuple[str, int]:
    if args.config and args.grid:
        raise ValueError("use --config or --grid, not both")
    if args.config or args.grid:
        raws = _load_grid(args.config or args.grid) if args.grid else [
            json.load(open(args.config))
        ]
    else:
        if args.D is None or args.p is None:
            raise ValueError("doubling needs --D and --p (or --config/--grid)")
        raws = [
            {
                "D": args.D,
                "p": args.p,
                **({"m": args.m} if args.m is not None else {}),
                **({"B": args.B} if args.B is not None else {}),
                "phi1": args.phi1,
                "phi2": args.phi2,
                "constant_mode": args.constant_mode,
                "root_choice": args.roots,
            }
        ]

    jobs: list[tuple[int, dict]] = []
    for idx, raw in enumerate(raws):
        for expanded in _expand_roots(raw):
            jobs.append((idx, expanded))

    if args.jobs > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            results = list(pool.map(_run_one, [cfg for _, cfg in jobs]))
    else:
        results = [_run_one(cfg) for _, cfg in jobs]

    # collapse the two root-choice runs when the reports coincide (double roots)
    lines: list[str] = []
    seen_per_source: dict[int, set[str]] = {}
    for (src, _), res in zip(jobs, results):
        body = json.dumps(res, sort_keys=True)
        bucket = seen_per_source.setdefault(src, set())
        key = json.dumps(
            {k: v for k, v in res.items() if k != "config"}, sort_keys=True
        )
        if key in bucket:
            continue
        bucket.add(key)
        lines.append(json.dumps(res))
    statuses = {json.loads(line)["status"] for line in lines}
    if "falsified" in statuses:
        code = EXIT_FALSIFIED
    elif "precision_exhausted" in statuses:
        code = EXIT_PRECISION
    else:
        code = EXIT_OK
    return "\n".join(lines) + "\n", code


def _emit(text: str, out_path: str | None):
    if out_path:
        with open(out_path, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return e.code if e.code is not None else EXIT_USAGE
    try:
        if args.command == "field-info":
            _emit(json.dumps(cmd_field_info(args), indent=2) + "\n", args.out)
            return EXIT_OK
        if args.command == "apply":
            _emit(json.dumps(cmd_apply(args), indent=2) + "\n", args.out)
            return EXIT_OK
        text, code = cmd_doubling(args)
        _emit(text, args.out)
        return code
    except (ValueError, FileNotFoundError, json.JSONDecodeError) as e:
        print(f"hmfmodp: error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except PrecisionError as e:
        print(f"hmfmodp: precision exhausted: {e}", file=sys.stderr)
        return EXIT_PRECISION
    except (FalsificationError, NeedsExtension) as e:
        print(f"hmfmodp: invariant falsified: {e}", file=sys.stderr)
        return EXIT_FALSIFIED


if __name__ == "__main__":
    sys.exit(main())
