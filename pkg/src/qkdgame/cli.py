"""Command-line interface.

    qkdgame stats --protocol pp --encoding A2 --attack E3
    qkdgame payoff-table --game pp --scenario equal-weights
    qkdgame nash --game pp --scenario equal-weights --weights w.json
    qkdgame regions --game pp --profile A2,E4 --scenario no-dos
    qkdgame verify-paper --seed 7

Exit codes: 0 success, 1 verification failure, 2 usage or input error,
3 unsupported query (a table attack lacking the requested statistics).
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from pathlib import Path
from typing import Sequence

from . import attacks, game, protocols, verification
from .published import CONDITION_TABLES

EXIT_OK = 0
EXIT_VERIFY = 1
EXIT_USAGE = 2
EXIT_UNSUPPORTED = 3

FORMATS = ("markdown", "json", "csv")


class UsageError(Exception):
    pass


# -- input -----------------------------------------------------------------------

def read_weights(arg: str) -> dict[str, float]:
    """Weights from a JSON file path, or inline JSON when ``arg`` starts with '{'."""
    text = arg if arg.lstrip().startswith("{") else _read(arg)
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise UsageError(f"weights are not valid JSON: {exc}") from exc
    if not isinstance(raw, dict):
        raise UsageError("weights must be a flat JSON object like {\"w_a\": 1.0}")
    out = {}
    for k, v in raw.items():
        if isinstance(v, bool) or not isinstance(v, (int, float)):
            raise UsageError(f"weight {k!r} must be a number, got {v!r}")
        out[str(k)] = float(v)
    return out


def _read(path: str) -> str:
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror or exc}") from exc


def build_registry(args) -> attacks.AttackRegistry:
    registry = attacks.AttackRegistry()
    for path in args.replace_attack or ():
        registry.replace_builtin(attacks.load_attack(_read(path)))
    for path in args.attack_file or ():
        registry.load(_read(path))
    return registry


# -- output helpers --------------------------------------------------------------

def _csv(rows: Sequence[Sequence]) -> str:
    buf = io.StringIO()
    csv.writer(buf, lineterminator="\n").writerows(rows)
    return buf.getvalue().rstrip("\n")


def _md_table(header: Sequence[str], rows: Sequence[Sequence]) -> str:
    lines = ["| " + " | ".join(header) + " |", "|" + "---|" * len(header)]
    lines += ["| " + " | ".join(str(c) for c in row) + " |" for row in rows]
    return "\n".join(lines)


def _json(obj) -> str:
    return json.dumps(obj, indent=2)


def _num(x: float) -> str:
    return f"{x:.6g}"


# -- commands --------------------------------------------------------------------

STAT_FIELDS = ("i_ab", "i_e_sum", "i_ae", "i_be", "p_d", "qber", "detection_cost",
               "inconclusive", "n_entangled")


def cmd_stats(args, registry) -> tuple[str, int]:
    spec = registry.get(args.attack)
    encoding = args.encoding or protocols.ENCODINGS[args.protocol][0]
    s = attacks.stats_for(spec, args.protocol, encoding, registry)
    values = {f: getattr(s, f) for f in STAT_FIELDS}
    n1, n2, n3 = s.gate_costs
    meta = {"protocol": args.protocol, "encoding": encoding, "attack": spec.name,
            "form": spec.form}
    if args.format == "json":
        return _json({**meta, **values, "gate_costs": {"n1": n1, "n2": n2, "n3": n3}}), EXIT_OK
    rows = [(f, "" if v is None else _num(v)) for f, v in values.items()]
    rows += [("n1", _num(n1)), ("n2", _num(n2)), ("n3", _num(n3))]
    if args.format == "csv":
        return _csv([("field", "value"), *((k, v) for k, v in meta.items()), *rows]), EXIT_OK
    title = f"{spec.name} on {args.protocol}/{encoding} ({spec.form})"
    return title + "\n\n" + _md_table(("field", "value"), rows), EXIT_OK


def _game(args, registry) -> game.BimatrixGame:
    if args.scenario and args.game != "pp":
        raise UsageError("scenarios apply to the pp game only")
    return game.build_game(args.game, registry, args.scenario)


def cmd_payoff_table(args, registry) -> tuple[str, int]:
    g = _game(args, registry)
    if args.weights:
        ng = game.evaluate(g, read_weights(args.weights))
        cell = {
            "alice": lambda p: _num(ng.payoff(p)[0]),
            "eve": lambda p: _num(ng.payoff(p)[1]),
        }
    else:
        cell = {
            "alice": lambda p: g.alice[p].render(),
            "eve": lambda p: g.eve[p].render(),
        }
    if args.format == "json":
        out = {"game": args.game, "scenario": args.scenario, "symbols": list(g.symbols),
               "rows": list(g.rows), "cols": list(g.cols)}
        for player in ("alice", "eve"):
            out[player] = {f"{r},{c}": cell[player]((r, c)) for r, c in g.profiles()}
        return _json(out), EXIT_OK
    if args.format == "csv":
        rows = [("player", "alice_strategy", "eve_strategy", "payoff")]
        rows += [(player, r, c, cell[player]((r, c)))
                 for player in ("alice", "eve") for r, c in g.profiles()]
        return _csv(rows), EXIT_OK
    blocks = []
    for player, title in (("alice", "Alice"), ("eve", "Eve")):
        rows = [(r, *(cell[player]((r, c)) for c in g.cols)) for r in g.rows]
        blocks.append(f"{title}'s payoffs ({g.name})\n\n" + _md_table(("", *g.cols), rows))
    return "\n\n".join(blocks), EXIT_OK


def cmd_equilibria(args, registry) -> tuple[str, int]:
    if not args.weights:
        raise UsageError(f"{args.command} needs --weights")
    g = _game(args, registry)
    ng = game.evaluate(g, read_weights(args.weights))
    report = game.equilibrium_report(ng, args.eps)
    if args.format == "json":
        return _json({"game": g.name, "eps": args.eps, **report.to_dict()}), EXIT_OK
    flags = lambda p: (p in report.nash, p in report.pareto, p in report.pareto_nash)
    if args.format == "csv":
        rows = [("alice_strategy", "eve_strategy", "alice", "eve", "nash", "pareto",
                 "pareto_nash")]
        rows += [(r, c, _num(ng.payoff((r, c))[0]), _num(ng.payoff((r, c))[1]),
                  *(int(f) for f in flags((r, c)))) for r, c in ng.profiles()]
        return _csv(rows), EXIT_OK
    fmt = lambda s: ", ".join(f"({r},{c})" for r, c in ng.profiles() if (r, c) in s) or "none"
    mark = lambda b: "yes" if b else ""
    rows = [(f"{r},{c}", _num(ng.payoff((r, c))[0]), _num(ng.payoff((r, c))[1]),
             *(mark(f) for f in flags((r, c)))) for r, c in ng.profiles()]
    text = "\n".join([
        f"game: {g.name}  eps: {args.eps:g}",
        f"nash: {fmt(report.nash)}",
        f"pareto: {fmt(report.pareto)}",
        f"pareto_nash: {fmt(report.pareto_nash)}",
        "",
        _md_table(("profile", "alice", "eve", "nash", "pareto", "pareto_nash"), rows),
    ])
    return text, EXIT_OK


def _provenance(q: game.Inequality) -> str:
    (r, c), (player, other) = q.provenance
    return f"{player}: ({r},{c}) vs " + (f"({other},{c})" if player == "alice" else f"({r},{other})")


def published_conditions(game_name: str, scenario_name: str | None, profile) -> tuple | None:
    for table in CONDITION_TABLES:
        if table.game == game_name and table.scenario == scenario_name:
            return table.rows.get(tuple(profile))
    return None


def cmd_regions(args, registry) -> tuple[str, int]:
    g = _game(args, registry)
    try:
        profile = g.check_profile(game.parse_profile(args.profile))
    except (KeyError, ValueError) as exc:
        raise UsageError(str(exc.args[0] if exc.args else exc)) from exc
    system = game.nash_region(g, profile, implied=args.implied)
    stated = published_conditions(args.game, args.scenario, profile)
    items = [
        {"inequality": q.render(), "binding": q.redundant is None,
         "redundant": q.redundant, "provenance": _provenance(q),
         "coefficients": {s: q.expr.coef(s) for s in g.symbols if q.expr.coef(s)}}
        for q in system
    ]
    if args.format == "json":
        return _json({"game": g.name, "profile": list(profile), "inequalities": items,
                      "published": list(stated) if stated else None}), EXIT_OK
    if args.format == "csv":
        rows = [("inequality", "binding", "redundant", "provenance")]
        rows += [(i["inequality"], int(i["binding"]), i["redundant"] or "", i["provenance"])
                 for i in items]
        return _csv(rows), EXIT_OK
    lines = [f"Nash region of ({profile[0]},{profile[1]}) in {g.name}", ""]
    rows = [(i["inequality"], i["redundant"] or "binding", i["provenance"]) for i in items]
    lines.append(_md_table(("inequality", "tag", "provenance"), rows))
    if stated:
        lines += ["", "Published conditions:"] + [f"- {t}" for t in stated]
    return "\n".join(lines), EXIT_OK


def cmd_verify_paper(args, registry) -> tuple[str, int]:
    report = verification.verify_paper(registry, args.seed, args.samples)
    code = EXIT_OK if report.ok else EXIT_VERIFY
    if args.format == "json":
        return _json(report.to_dict()), code
    if args.format == "csv":
        rows = [("section", "check", "status", "detail")]
        rows += [(c.section, c.name, c.status, c.detail) for c in report.checks]
        return _csv(rows), code
    return report.to_text(), code


# -- parser ----------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=FORMATS, default="markdown",
                        help="output format (default: markdown)")
    common.add_argument("--attack-file", action="append", metavar="FILE",
                        help="register an extra attack from a JSON file (repeatable)")
    common.add_argument("--replace-attack", action="append", metavar="FILE",
                        help="replace the built-in attack of the same name (repeatable)")

    games = argparse.ArgumentParser(add_help=False)
    games.add_argument("--game", choices=("pp", "twoway"), default="pp")
    games.add_argument("--scenario", choices=game.SCENARIOS)

    parser = argparse.ArgumentParser(
        prog="qkdgame",
        description="Game-theoretic analysis of two-way QKD under eavesdropping.",
    )
    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")

    p = sub.add_parser("stats", parents=[common], help="protocol statistics under one attack")
    p.add_argument("--protocol", choices=protocols.PROTOCOLS, required=True)
    p.add_argument("--encoding", help="A1 or A2 for pp, Y for lm05 (default: first)")
    p.add_argument("--attack", required=True)
    p.set_defaults(func=cmd_stats)

    p = sub.add_parser("payoff-table", parents=[common, games],
                       help="symbolic payoff tables, or numeric ones with --weights")
    p.add_argument("--weights", metavar="FILE|JSON")
    p.set_defaults(func=cmd_payoff_table)

    for name, help_ in (("nash", "pure Nash equilibria at a weight assignment"),
                        ("pareto", "Pareto optimal profiles at a weight assignment")):
        p = sub.add_parser(name, parents=[common, games], help=help_)
        p.add_argument("--weights", metavar="FILE|JSON", required=True)
        p.add_argument("--eps", type=float, default=game.DEFAULT_EPS)
        p.set_defaults(func=cmd_equilibria)

    p = sub.add_parser("regions", parents=[common, games],
                       help="weight inequalities under which a profile is Nash")
    p.add_argument("--profile", required=True, help="e.g. A2,E4")
    p.add_argument("--no-implied", dest="implied", action="store_false",
                   help="skip the LP that tags inequalities implied by the others")
    p.set_defaults(func=cmd_regions)

    p = sub.add_parser("verify-paper", parents=[common],
                       help="reproduce all published tables and conditions")
    p.add_argument("--seed", type=int, help="sampling seed (default: $QKDGAME_SEED or built-in)")
    p.add_argument("--samples", type=int, default=verification.DEFAULT_SAMPLES,
                   help="samples per region check (min 100)")
    p.set_defaults(func=cmd_verify_paper)
    return parser


def main(argv: Sequence[str] | None = None, registry: attacks.AttackRegistry | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "samples", 100) < 100:
        parser.error("--samples must be at least 100")
    if getattr(args, "eps", 0.0) < 0:
        parser.error("--eps must be nonnegative")
    try:
        if args.command == "verify-paper" and args.seed is None:
            args.seed = verification.default_seed()
        reg = registry if registry is not None else build_registry(args)
        text, code = args.func(args, reg)
    except attacks.UnsupportedQueryError as exc:
        print(f"qkdgame: {exc}", file=sys.stderr)
        return EXIT_UNSUPPORTED
    except (UsageError, attacks.UnknownAttackError, game.MissingWeightError) as exc:
        print(f"qkdgame: {exc.args[0] if exc.args else exc}", file=sys.stderr)
        return EXIT_USAGE
    except ValueError as exc:  # includes AttackError
        print(f"qkdgame: {exc}", file=sys.stderr)
        return EXIT_USAGE
    print(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
