"""Command-line front end.

Exit codes: 0 on success, 2 for invalid input, 3 when a work budget is
exceeded.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from fractions import Fraction
from pathlib import Path
from typing import Sequence

from . import codes, formations, repeater
from .codes import CodeError, CssCode
from .engine import CRITERIA, DEFAULT_BUDGET, BudgetExceededError, efficiency_with_loss
from .measurement import BmAssignment, Formation, StateIndependent

EXIT_INPUT = 2
EXIT_BUDGET = 3


class InputError(ValueError):
    pass


# ---------------------------------------------------------------------------
# argument grammar


def _int_params(text: str, count: int, spec: str) -> tuple[int, ...]:
    try:
        values = tuple(int(t) for t in text.split(","))
    except ValueError:
        raise InputError(f"bad parameters in code spec {spec!r}") from None
    if len(values) != count:
        raise InputError(f"code spec {spec!r} needs {count} comma-separated integers")
    return values


def parse_code(spec: str) -> CssCode:
    """Build a code from ``qpc:n,m``, ``surface:n,m``, ``color:d``, ``steane``, ``golay`` or ``file:PATH``."""
    family, _, rest = spec.partition(":")
    if family == "steane" and not rest:
        return codes.steane()
    if family == "golay" and not rest:
        return codes.golay()
    if family == "qpc":
        return codes.qpc(*_int_params(rest, 2, spec))
    if family == "surface":
        return codes.planar_surface(*_int_params(rest, 2, spec))
    if family == "color":
        return codes.color_488(*_int_params(rest, 1, spec))
    if family == "file":
        path = Path(rest)
        try:
            text = path.read_text()
        except OSError as exc:
            raise InputError(f"cannot read {path}: {exc.strerror}") from None
        return codes.load_code(text, name=path.stem)
    raise InputError(f"unknown code spec {spec!r}")


def parse_formation(spec: str, code: CssCode, p_adv: Fraction = Fraction(0), p_bm: Fraction | None = None) -> Formation:
    """Catalog name, ``file:PATH`` or an inline token string."""
    if spec.startswith("file:"):
        path = Path(spec[5:])
        try:
            spec = path.read_text()
        except OSError as exc:
            raise InputError(f"cannot read {path}: {exc.strerror}") from None
    if spec in formations.CATALOG:
        formation = formations.catalog_formation(spec, code)
    else:
        formation = Formation.parse(spec)
    formation.check_length(code.n_qubits)
    formation = formation.with_p_adv(p_adv)
    if p_bm is not None:
        formation = Formation(
            tuple(
                BmAssignment(StateIndependent(p_bm), a.p_adv) if isinstance(a.variant, StateIndependent) else a
                for a in formation
            ),
            formation.name,
        )
    return formation


def parse_probability(text: str) -> Fraction:
    try:
        value = Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if not 0 <= value <= 1:
        raise argparse.ArgumentTypeError(f"probability out of range: {text}")
    return value


def parse_eta(text: str) -> list[Fraction]:
    """``0.9``, ``0.5,0.9,1`` or ``start:stop:count`` (inclusive, evenly spaced)."""
    if ":" in text:
        parts = text.split(":")
        if len(parts) != 3:
            raise argparse.ArgumentTypeError("eta range must be start:stop:count")
        start, stop = parse_probability(parts[0]), parse_probability(parts[1])
        try:
            count = int(parts[2])
        except ValueError:
            raise argparse.ArgumentTypeError(f"bad count {parts[2]!r}") from None
        if count < 1:
            raise argparse.ArgumentTypeError("count must be positive")
        if count == 1:
            return [start]
        return [start + (stop - start) * i / (count - 1) for i in range(count)]
    return [parse_probability(t) for t in text.split(",")]


def parse_levels(text: str) -> list[int]:
    """``5``, ``1,3,5`` or ``1..7``."""
    try:
        if ".." in text:
            lo, hi = text.split("..")
            levels = list(range(int(lo), int(hi) + 1))
        else:
            levels = [int(t) for t in text.split(",")]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad level list {text!r}") from None
    if not levels or min(levels) < 0:
        raise argparse.ArgumentTypeError("levels must be nonnegative")
    return levels


# ---------------------------------------------------------------------------
# output


def _fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, Fraction):
        return repr(float(value))
    if isinstance(value, float):
        return repr(value)
    return str(value)


def _json_value(value):
    if isinstance(value, Fraction):
        return float(value)
    return value


def emit(rows: list[dict], fmt: str, out) -> None:
    if fmt == "json":
        json.dump([{k: _json_value(v) for k, v in r.items()} for r in rows], out, indent=2)
        out.write("\n")
        return
    if not rows:
        return
    fields = list(rows[0])
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(fields)
    for r in rows:
        writer.writerow([_fmt(r[k]) for k in fields])


# ---------------------------------------------------------------------------
# commands


def cmd_code_info(args, out) -> None:
    code = parse_code(args.code)
    spaces = codes.codeword_spaces(code)
    info = {
        "name": code.name,
        "N": code.n_qubits,
        "k": code.n_logical,
        "d": code.distance,
        "d_x": code.distance_x,
        "d_z": code.distance_z,
        "rank_hx": code.rank_x,
        "rank_hz": code.rank_z,
        "dim_c_x": spaces.dim_x,
        "dim_c_z": spaces.dim_z,
        "h_x": [str(r) for r in code.h_x.rows()],
        "h_z": [str(r) for r in code.h_z.rows()],
        "logical_x": [str(v) for v in code.logical_x],
        "logical_z": [str(v) for v in code.logical_z],
    }
    if args.format == "json":
        json.dump(info, out, indent=2)
        out.write("\n")
        return
    out.write(f"{code.name}: N={info['N']} k={info['k']} d={info['d']} (d_x={info['d_x']}, d_z={info['d_z']})\n")
    out.write(f"dim C_X = {info['dim_c_x']}, dim C_Z = {info['dim_c_z']}\n")
    for label in ("h_x", "h_z", "logical_x", "logical_z"):
        out.write(f"{label}:\n")
        for row in info[label]:
            out.write(f"  {row}\n")


def cmd_efficiency(args, out) -> None:
    code = parse_code(args.code)
    formation = parse_formation(args.formation, code, args.p_adv, args.p_bm)
    rows = []
    for eta in args.eta:
        res = efficiency_with_loss(
            code,
            formation,
            eta,
            args.eta2,
            sigma=args.sigma,
            criterion=args.criterion,
            budget=args.budget,
            workers=args.workers,
        )
        row = {"eta": eta, "eta_tilde": eta * args.eta2, "efficiency": res.value}
        rows.append(row)
    if any(r["eta_tilde"] == 1 for r in rows):
        for r in rows:
            exact = r["eta_tilde"] == 1 and isinstance(r["efficiency"], Fraction)
            r["num"] = r["efficiency"].numerator if exact else None
            r["den"] = r["efficiency"].denominator if exact else None
    emit(rows, args.format, out)


def cmd_search(args, out) -> None:
    code = parse_code(args.code)
    candidates = [t for t in args.candidates.replace(",", " ").split()]
    objective = "lossless" if args.eta == 1 else args.eta
    result = formations.exhaustive_search(
        code,
        candidates,
        objective,
        max_results=args.max_results,
        sigma=args.sigma,
        criterion=args.criterion,
        budget=args.budget,
    )
    value = result.value
    rows = [
        {
            "rank": i + 1,
            "formation": f.tokens,
            "efficiency": value,
            "num": value.numerator if isinstance(value, Fraction) else None,
            "den": value.denominator if isinstance(value, Fraction) else None,
        }
        for i, f in enumerate(result.formations)
    ]
    emit(rows, args.format, out)
    if args.format == "csv":
        out.write(f"# search outcome: {result.n_optimal} optimal of {result.n_searched} formations\n")


def cmd_repeater(args, out) -> None:
    code = parse_code(args.code)
    formation = parse_formation(args.formation, code)
    channel = repeater.ChannelModel(args.attenuation_length, float(args.eta2))
    cost = repeater.CostModel.named(args.cost)
    if args.p_adv is not None:
        targets = [args.p_adv]
    else:
        targets = [repeater.grice_p_adv(v) if v else Fraction(0) for v in args.v]
    rows = []
    for p_adv in targets:
        try:
            repeater.grice_level(p_adv)
        except ValueError as exc:
            raise InputError(str(exc)) from None
        r = repeater.repeater_row(
            code, formation, p_adv, channel=channel, cost=cost, sigma=args.sigma, criterion=args.criterion
        )
        row = {
            "v": r.v,
            "p_adv": r.p_adv,
            "l0_star_km": None if r.spacing is None else round(r.spacing, 6),
            "gain": round(r.gain, 9),
        }
        never = "never" if r.spacing is None else "unreachable"
        if args.benchmark in ("both", "direct-with-cost"):
            row["stations_cost"] = r.stations_cost if r.stations_cost is not None else never
        if args.benchmark in ("both", "plob"):
            row["stations_plob"] = r.stations_plob if r.stations_plob is not None else never
        rows.append(row)
    emit(rows, args.format, out)


# ---------------------------------------------------------------------------
# parser


def _engine_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--sigma", type=int, choices=(0, 1), default=0, help="YY sign convention")
    p.add_argument("--criterion", choices=CRITERIA, default="full", help="decodability rule")
    p.add_argument("--budget", type=int, default=DEFAULT_BUDGET, help="work limit for enumerations")
    p.add_argument("--workers", type=int, default=1, help="worker processes for large tables")
    p.add_argument("--format", choices=("csv", "json"), default="csv")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cssbell", description="Logical Bell-measurement efficiencies of CSS codes under linear optics."
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_code = sub.add_parser("code", help="inspect codes")
    code_sub = p_code.add_subparsers(dest="code_command", required=True)
    p_info = code_sub.add_parser("info", help="parameters, generators and logicals")
    p_info.add_argument("--code", required=True)
    p_info.add_argument("--format", choices=("text", "json"), default="text")
    p_info.set_defaults(func=cmd_code_info)

    p_eff = sub.add_parser("efficiency", help="logical BM efficiency over a range of eta")
    p_eff.add_argument("--code", required=True)
    p_eff.add_argument("--formation", required=True, help="catalog name, token string or file:PATH")
    p_eff.add_argument("--eta", type=parse_eta, default=[Fraction(1)], help="value, list or start:stop:count")
    p_eff.add_argument("--eta2", type=parse_probability, default=Fraction(1))
    p_eff.add_argument("--p-adv", type=parse_probability, default=Fraction(0))
    p_eff.add_argument("--p-bm", type=parse_probability, default=None, help="override p of every S(p) pair")
    _engine_flags(p_eff)
    p_eff.set_defaults(func=cmd_efficiency)

    p_search = sub.add_parser("search", help="exhaustive formation search")
    p_search.add_argument("--code", required=True)
    p_search.add_argument("--candidates", default=" ".join(formations.ALL_GUARANTEED))
    p_search.add_argument("--eta", type=parse_probability, default=Fraction(1), help="pair survival for the objective")
    p_search.add_argument("--max-results", type=int, default=10)
    _engine_flags(p_search)
    p_search.set_defaults(func=cmd_search)

    p_rep = sub.add_parser("repeater", help="spacing, gain and station counts per ancilla level")
    p_rep.add_argument("--code", required=True)
    p_rep.add_argument("--formation", default="fig3d")
    p_rep.add_argument("--v", type=parse_levels, default=list(range(1, 8)), help="levels such as 1..7")
    p_rep.add_argument("--p-adv", type=parse_probability, default=None, help="single rescue probability")
    p_rep.add_argument("--benchmark", choices=("both", "direct-with-cost", "plob"), default="both")
    p_rep.add_argument("--cost", choices=tuple(repeater.COST_CONVENTIONS), default="calibrated")
    p_rep.add_argument("--attenuation-length", type=float, default=22.0)
    p_rep.add_argument("--eta2", type=parse_probability, default=Fraction(1))
    _engine_flags(p_rep)
    p_rep.set_defaults(func=cmd_repeater)
    return parser


def main(argv: Sequence[str] | None = None, out=None) -> int:
    out = out if out is not None else sys.stdout
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        args.func(args, out)
    except BudgetExceededError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except (CodeError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    return 0


def run(argv: Sequence[str]) -> tuple[int, str]:
    """Invoke the CLI in-process and capture stdout."""
    buf = io.StringIO()
    code = main(argv, buf)
    return code, buf.getvalue()


if __name__ == "__main__":
    sys.exit(main())
