"""Symbolic payoff games over nonnegative weights.

Payoff cells are :class:`LinearExpr` objects over weight symbols such as
``w_a`` or ``w_k``. A :class:`BimatrixGame` is evaluated at a weight
assignment to get numbers, on which pure Nash equilibria and Pareto
optimal profiles are found by enumeration. :func:`nash_region` turns the
same best-response comparisons into a linear inequality system over the
weights.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Mapping, Sequence

import numpy as np
from scipy.optimize import linprog

from . import attacks
from .protocols import ProtocolStats

PP_SYMBOLS = ("w_a", "w_b", "w_c", "w_d", "w_e", "w_f", "w_1", "w_2", "w_3")
PP_EQUAL_SYMBOLS = ("w_I", "w_P", "w_1", "w_2", "w_3")
TWOWAY_SYMBOLS = ("w_g", "w_h", "w_i", "w_j", "w_k", "w_l", "w_m")
_SYMBOL_ORDER = {
    s: i
    for i, s in enumerate(
        ("w_a", "w_b", "w_c", "w_d", "w_e", "w_f", "w_I", "w_P", "w_1", "w_2", "w_3")
        + TWOWAY_SYMBOLS
    )
}

PP_ROWS = ("A1", "A2")
PP_COLS = ("E1", "E2", "E3", "E4")
TWOWAY_ROWS = ("PPP", "LM05")
TWOWAY_COLS = ("IR", "DCNOT", "Wojcik")
TWOWAY_PROTOCOL = {"PPP": ("pp", "A1"), "LM05": ("lm05", "Y")}
TWOWAY_ATTACK = {"IR": "IR", "DCNOT": "DCNOT", "Wojcik": "E1"}

DEFAULT_EPS = 1e-9
ZERO_TOL = 1e-12

Profile = tuple[str, str]


class MissingWeightError(KeyError):
    pass


def _sym_key(s: str):
    return (_SYMBOL_ORDER.get(s, len(_SYMBOL_ORDER)), s)


def format_coef(c: float, places: int = 4) -> str:
    text = f"{abs(c):.{places}f}".rstrip("0").rstrip(".")
    return text or "0"


class LinearExpr:
    """Linear combination of weight symbols plus a constant."""

    __slots__ = ("coeffs", "constant")

    def __init__(self, coeffs: Mapping[str, float] | None = None, constant: float = 0.0):
        clean = {}
        for s, c in (coeffs or {}).items():
            c = float(c)
            if not np.isfinite(c):
                raise ValueError(f"non-finite coefficient for {s}")
            if c != 0.0:
                clean[s] = clean.get(s, 0.0) + c
        self.coeffs = dict(sorted(clean.items(), key=lambda kv: _sym_key(kv[0])))
        self.constant = float(constant)

    @classmethod
    def symbol(cls, name: str, coef: float = 1.0) -> "LinearExpr":
        return cls({name: coef})

    @classmethod
    def parse(cls, text: str) -> "LinearExpr":
        """Parse text such as ``"0.311w_a - 0.385w_b + 0.5w_c"``."""
        s = re.sub(r"w_\{(\w+)\}", r"w_\1", text)
        s = s.replace("−", "-").replace(" ", "").replace("*", "")
        if not s:
            raise ValueError("empty expression")
        tokens = re.findall(r"[+-]?[^+-]+", s)
        if "".join(tokens) != s:
            raise ValueError(f"cannot parse expression {text!r}")
        coeffs: dict[str, float] = {}
        constant = 0.0
        for tok in tokens:
            m = re.fullmatch(r"([+-]?)(\d+(?:\.\d*)?|\.\d+)?(w_[A-Za-z0-9]+)?", tok)
            if not m or (m.group(2) is None and m.group(3) is None):
                raise ValueError(f"bad term {tok!r} in {text!r}")
            sign = -1.0 if m.group(1) == "-" else 1.0
            num = float(m.group(2)) if m.group(2) is not None else 1.0
            if m.group(3):
                coeffs[m.group(3)] = coeffs.get(m.group(3), 0.0) + sign * num
            else:
                constant += sign * num
        return cls(coeffs, constant)

    @property
    def symbols(self) -> set[str]:
        return set(self.coeffs)

    def coef(self, symbol: str) -> float:
        return self.coeffs.get(symbol, 0.0)

    def __add__(self, other: "LinearExpr") -> "LinearExpr":
        coeffs = dict(self.coeffs)
        for s, c in other.coeffs.items():
            coeffs[s] = coeffs.get(s, 0.0) + c
        return LinearExpr(coeffs, self.constant + other.constant)

    def __neg__(self) -> "LinearExpr":
        return self * -1.0

    def __sub__(self, other: "LinearExpr") -> "LinearExpr":
        return self + (-other)

    def __mul__(self, k: float) -> "LinearExpr":
        return LinearExpr({s: c * k for s, c in self.coeffs.items()}, self.constant * k)

    __rmul__ = __mul__

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, LinearExpr)
            and self.coeffs == other.coeffs
            and self.constant == other.constant
        )

    def __hash__(self):
        return hash((tuple(self.coeffs.items()), self.constant))

    def __repr__(self) -> str:
        return f"LinearExpr({self.render()!r})"

    def is_zero(self, tol: float = ZERO_TOL) -> bool:
        return abs(self.constant) <= tol and all(abs(c) <= tol for c in self.coeffs.values())

    def close_to(self, other: "LinearExpr", tol: float) -> bool:
        diff = self - other
        return abs(diff.constant) <= tol and all(abs(c) <= tol for c in diff.coeffs.values())

    def vector(self, symbols: Sequence[str]) -> np.ndarray:
        extra = self.symbols - set(symbols)
        if extra:
            raise ValueError(f"symbols {sorted(extra)} not in {list(symbols)}")
        return np.array([self.coef(s) for s in symbols])

    def evaluate(self, weights: Mapping[str, float]) -> float:
        total = self.constant
        for s, c in self.coeffs.items():
            if s not in weights:
                raise MissingWeightError(s)
            total += c * weights[s]
        return total

    def substitute(self, mapping: Mapping[str, "LinearExpr"]) -> "LinearExpr":
        out = LinearExpr(constant=self.constant)
        for s, c in self.coeffs.items():
            out = out + (mapping[s] * c if s in mapping else LinearExpr({s: c}))
        return out

    def render(self, places: int = 4) -> str:
        parts = []
        terms = list(self.coeffs.items())
        if self.constant != 0.0 or not terms:
            terms.append(("", self.constant))
        for i, (s, c) in enumerate(terms):
            mag = format_coef(c, places)
            body = s if (s and mag == "1") else f"{mag}{s}"
            if i == 0:
                parts.append(f"-{body}" if c < 0 else body)
            else:
                parts.append(f"{'-' if c < 0 else '+'} {body}")
        return " ".join(parts)


# -- games -----------------------------------------------------------------------

@dataclass(frozen=True)
class NumericGame:
    rows: tuple[str, ...]
    cols: tuple[str, ...]
    alice: np.ndarray
    eve: np.ndarray

    def __post_init__(self):
        shape = (len(self.rows), len(self.cols))
        for name in ("alice", "eve"):
            arr = np.asarray(getattr(self, name), dtype=float)
            if arr.shape != shape:
                raise ValueError(f"{name} payoffs have shape {arr.shape}, expected {shape}")
            object.__setattr__(self, name, arr)

    def payoff(self, profile: Profile) -> tuple[float, float]:
        i, j = self.rows.index(profile[0]), self.cols.index(profile[1])
        return float(self.alice[i, j]), float(self.eve[i, j])

    def profiles(self) -> list[Profile]:
        return [(r, c) for r in self.rows for c in self.cols]


@dataclass(frozen=True)
class BimatrixGame:
    """Rows are Alice's (protocol-side) strategies, columns are Eve's."""

    name: str
    rows: tuple[str, ...]
    cols: tuple[str, ...]
    alice: Mapping[Profile, LinearExpr]
    eve: Mapping[Profile, LinearExpr]
    symbols: tuple[str, ...]

    def __post_init__(self):
        for p in self.profiles():
            for side in (self.alice, self.eve):
                if p not in side:
                    raise ValueError(f"{self.name}: missing payoff for {p}")
                extra = side[p].symbols - set(self.symbols)
                if extra:
                    raise ValueError(f"{self.name}: cell {p} uses foreign symbols {sorted(extra)}")

    def profiles(self) -> list[Profile]:
        return [(r, c) for r in self.rows for c in self.cols]

    def check_profile(self, profile: Profile) -> Profile:
        profile = tuple(profile)
        if len(profile) != 2 or profile[0] not in self.rows or profile[1] not in self.cols:
            raise KeyError(f"profile {profile} not in game {self.name}")
        return profile

    def payoff_tensor(self, player: str) -> np.ndarray:
        """Shape (rows, cols, n_symbols + 1); the last slot is the constant."""
        return self._tensors[player]

    @cached_property
    def _tensors(self) -> dict[str, np.ndarray]:
        return {"alice": self._build_tensor(self.alice), "eve": self._build_tensor(self.eve)}

    def _build_tensor(self, side) -> np.ndarray:
        out = np.zeros((len(self.rows), len(self.cols), len(self.symbols) + 1))
        for i, r in enumerate(self.rows):
            for j, c in enumerate(self.cols):
                e = side[(r, c)]
                out[i, j, :-1] = e.vector(self.symbols)
                out[i, j, -1] = e.constant
        return out


def _require(stats: Mapping, key) -> ProtocolStats:
    if key not in stats:
        raise KeyError(f"missing statistics for {key}")
    return stats[key]


def alice_pp_payoff(s: ProtocolStats) -> LinearExpr:
    if s.p_d is None:
        raise ValueError("Ping-Pong payoffs need p_d")
    return LinearExpr({"w_a": s.i_ab, "w_b": -s.i_e_sum, "w_c": s.p_d})


def eve_pp_payoff(s: ProtocolStats) -> LinearExpr:
    if s.p_d is None:
        raise ValueError("Ping-Pong payoffs need p_d")
    n1, n2, n3 = s.gate_costs
    return LinearExpr({
        "w_d": s.i_e_sum, "w_e": -s.i_ab, "w_f": 1.0 - s.p_d,
        "w_1": -n1, "w_2": -n2, "w_3": -n3,
    })


def alice_twoway_payoff(s: ProtocolStats) -> LinearExpr:
    if s.detection_cost is None:
        raise ValueError("two-way payoffs need detection_cost")
    return LinearExpr({
        "w_g": s.i_ab, "w_h": -s.i_e_sum, "w_i": s.detection_cost, "w_j": -s.n_entangled,
    })


def eve_twoway_payoff(s: ProtocolStats) -> LinearExpr:
    if s.detection_cost is None:
        raise ValueError("two-way payoffs need detection_cost")
    return LinearExpr({"w_k": s.i_e_sum, "w_l": -s.i_ab, "w_m": 1.0 - s.detection_cost})


def assemble_pp_game(stats: Mapping[Profile, ProtocolStats]) -> BimatrixGame:
    alice, eve = {}, {}
    for p in ((r, c) for r in PP_ROWS for c in PP_COLS):
        s = _require(stats, p)
        alice[p] = alice_pp_payoff(s)
        eve[p] = eve_pp_payoff(s)
    return BimatrixGame("pp", PP_ROWS, PP_COLS, alice, eve, PP_SYMBOLS)


def assemble_twoway_game(stats: Mapping[Profile, ProtocolStats]) -> BimatrixGame:
    alice, eve = {}, {}
    for p in ((r, c) for r in TWOWAY_ROWS for c in TWOWAY_COLS):
        s = _require(stats, p)
        alice[p] = alice_twoway_payoff(s)
        eve[p] = eve_twoway_payoff(s)
    return BimatrixGame("twoway", TWOWAY_ROWS, TWOWAY_COLS, alice, eve, TWOWAY_SYMBOLS)


def pp_stats(registry: attacks.AttackRegistry | None = None) -> dict[Profile, ProtocolStats]:
    reg = registry or attacks.default_registry()
    return {(r, c): attacks.stats_for(reg.get(c), "pp", r) for r in PP_ROWS for c in PP_COLS}


def twoway_stats(registry: attacks.AttackRegistry | None = None) -> dict[Profile, ProtocolStats]:
    reg = registry or attacks.default_registry()
    return {
        (r, c): attacks.stats_for(reg.get(TWOWAY_ATTACK[c]), *TWOWAY_PROTOCOL[r])
        for r in TWOWAY_ROWS
        for c in TWOWAY_COLS
    }


def build_game(name: str, registry=None, scenario_name: str | None = None) -> BimatrixGame:
    if name == "pp":
        g = assemble_pp_game(pp_stats(registry))
    elif name == "twoway":
        g = assemble_twoway_game(twoway_stats(registry))
    else:
        raise ValueError(f"unknown game {name!r}; expected 'pp' or 'twoway'")
    if scenario_name:
        g = apply_scenario(g, scenario(scenario_name))
    return g


# -- scenarios -------------------------------------------------------------------

@dataclass(frozen=True)
class Scenario:
    name: str
    substitution: Mapping[str, LinearExpr]
    symbols: tuple[str, ...]


def scenario(name: str) -> Scenario:
    """Named weight restrictions of the Ping-Pong game.

    ``equal-weights`` ties the information weights to ``w_I`` and the
    detection weights to ``w_P``; ``no-dos`` drops the penalties on
    reducing Alice-Bob information (``w_b = w_e = 0``); ``unlimited-eve``
    drops Eve's gate costs.
    """
    zero = LinearExpr()
    if name == "equal-weights":
        wi, wp = LinearExpr.symbol("w_I"), LinearExpr.symbol("w_P")
        sub = {"w_a": wi, "w_b": wi, "w_d": wi, "w_e": wi, "w_c": wp, "w_f": wp}
        return Scenario(name, sub, PP_EQUAL_SYMBOLS)
    if name == "no-dos":
        sub = {"w_b": zero, "w_e": zero}
    elif name == "unlimited-eve":
        sub = {"w_1": zero, "w_2": zero, "w_3": zero}
    else:
        raise ValueError(
            f"unknown scenario {name!r}; expected equal-weights, no-dos or unlimited-eve"
        )
    return Scenario(name, sub, tuple(s for s in PP_SYMBOLS if s not in sub))


SCENARIOS = ("equal-weights", "no-dos", "unlimited-eve")


def apply_scenario(game: BimatrixGame, sc: Scenario) -> BimatrixGame:
    if set(sc.substitution) - set(game.symbols):
        raise ValueError(f"scenario {sc.name!r} does not apply to game {game.name!r}")
    sub = lambda side: {p: e.substitute(sc.substitution) for p, e in side.items()}
    return BimatrixGame(
        f"{game.name}[{sc.name}]", game.rows, game.cols,
        sub(game.alice), sub(game.eve), sc.symbols,
    )


# -- evaluation and equilibria ---------------------------------------------------

def check_weights(symbols: Iterable[str], weights: Mapping[str, float]) -> dict[str, float]:
    symbols = tuple(symbols)
    missing = [s for s in symbols if s not in weights]
    if missing:
        raise MissingWeightError(f"missing weights: {', '.join(missing)}")
    unknown = sorted(set(weights) - set(symbols))
    if unknown:
        raise ValueError(f"unknown weight symbols: {', '.join(unknown)}")
    out = {}
    for s in symbols:
        v = float(weights[s])
        if not np.isfinite(v) or v < 0:
            raise ValueError(f"weight {s} must be a finite nonnegative number, got {v}")
        out[s] = v
    return out


def evaluate(game: BimatrixGame, weights: Mapping[str, float]) -> NumericGame:
    w = check_weights(game.symbols, weights)
    vec = np.array([w[s] for s in game.symbols] + [1.0])
    return NumericGame(
        game.rows, game.cols,
        game.payoff_tensor("alice") @ vec, game.payoff_tensor("eve") @ vec,
    )


def pure_nash(ng: NumericGame, eps: float = DEFAULT_EPS) -> set[Profile]:
    """Pure profiles where no unilateral deviation gains more than ``eps``."""
    best_row = ng.alice.max(axis=0)
    best_col = ng.eve.max(axis=1)
    return {
        (r, c)
        for i, r in enumerate(ng.rows)
        for j, c in enumerate(ng.cols)
        if ng.alice[i, j] >= best_row[j] - eps and ng.eve[i, j] >= best_col[i] - eps
    }


def pareto_front(ng: NumericGame, eps: float = DEFAULT_EPS) -> set[Profile]:
    a = ng.alice.ravel()
    e = ng.eve.ravel()
    profiles = ng.profiles()
    front = set()
    for k, p in enumerate(profiles):
        dominated = np.any(
            (a >= a[k] - eps) & (e >= e[k] - eps) & ((a > a[k] + eps) | (e > e[k] + eps))
        )
        if not dominated:
            front.add(p)
    return front


@dataclass(frozen=True)
class EquilibriumReport:
    nash: frozenset
    pareto: frozenset
    pareto_nash: frozenset
    payoffs: NumericGame

    def to_dict(self) -> dict:
        order = self.payoffs.profiles()
        pick = lambda s: [list(p) for p in order if p in s]
        return {
            "nash": pick(self.nash),
            "pareto": pick(self.pareto),
            "pareto_nash": pick(self.pareto_nash),
            "payoffs": {
                f"{r},{c}": list(self.payoffs.payoff((r, c))) for r, c in order
            },
        }


def equilibrium_report(ng: NumericGame, eps: float = DEFAULT_EPS) -> EquilibriumReport:
    nash = frozenset(pure_nash(ng, eps))
    pareto = frozenset(pareto_front(ng, eps))
    return EquilibriumReport(nash, pareto, nash & pareto, ng)


# -- weight regions ----------------------------------------------------------------

@dataclass(frozen=True)
class Inequality:
    """``expr >= 0`` (or ``> 0`` when strict)."""

    expr: LinearExpr
    strict: bool = False
    provenance: tuple = ()
    redundant: str | None = None

    def value(self, weights: Mapping[str, float]) -> float:
        return self.expr.evaluate(weights)

    def holds(self, weights: Mapping[str, float], strict: bool | None = None) -> bool:
        if self.expr.is_zero():
            return True
        v = self.value(weights)
        strict = self.strict if strict is None else strict
        return v > 0 if strict else v >= -ZERO_TOL

    def render(self, places: int = 4) -> str:
        """Readable display: positive terms on one side, negative on the other.

        A lone term on either side is scaled to coefficient 1.
        """
        pos = LinearExpr({s: c for s, c in self.expr.coeffs.items() if c > 0},
                         max(self.expr.constant, 0.0))
        neg = LinearExpr({s: -c for s, c in self.expr.coeffs.items() if c < 0},
                         max(-self.expr.constant, 0.0))
        rel_le, rel_ge = ("<", ">") if self.strict else ("<=", ">=")
        if not neg.coeffs and neg.constant == 0:
            return f"{pos.render(places)} {rel_ge} 0"
        if not pos.coeffs and pos.constant == 0:
            return f"{neg.render(places)} {rel_le} 0"
        single_neg = len(neg.coeffs) == 1 and neg.constant == 0
        single_pos = len(pos.coeffs) == 1 and pos.constant == 0
        if single_neg and single_pos:
            # Equal weights read naturally as "w_x <= w_y" with the earlier symbol first;
            # otherwise solve for the positive side.
            (n_sym, n_c), (p_sym, p_c) = next(iter(neg.coeffs.items())), next(iter(pos.coeffs.items()))
            if abs(n_c - p_c) > 1e-12 or _sym_key(p_sym) < _sym_key(n_sym):
                single_neg = False
        if single_neg:
            k = next(iter(neg.coeffs.values()))
            return f"{(neg * (1 / k)).render(places)} {rel_le} {(pos * (1 / k)).render(places)}"
        if single_pos:
            k = next(iter(pos.coeffs.values()))
            return f"{(pos * (1 / k)).render(places)} {rel_ge} {(neg * (1 / k)).render(places)}"
        return f"{neg.render(places)} {rel_le} {pos.render(places)}"


@dataclass(frozen=True)
class InequalitySystem:
    inequalities: tuple[Inequality, ...]
    symbols: tuple[str, ...]
    provenance: tuple = field(default=())

    def __iter__(self):
        return iter(self.inequalities)

    def __len__(self):
        return len(self.inequalities)

    def binding(self) -> list[Inequality]:
        return [q for q in self.inequalities if q.redundant is None]

    def holds(self, weights: Mapping[str, float], strict: bool = False) -> bool:
        return all(q.holds(weights, strict) for q in self.inequalities)


def _unit(expr: LinearExpr, symbols: Sequence[str]) -> np.ndarray:
    v = np.append(expr.vector(symbols), expr.constant)
    n = np.max(np.abs(v))
    return v / n if n > 0 else v


def _implied(target: LinearExpr, others: Sequence[LinearExpr], symbols: Sequence[str]) -> bool:
    """True when ``target >= 0`` holds on every nonnegative point satisfying ``others``.

    All expressions are homogeneous here, so it suffices to search the box [0, 1]^k.
    """
    c = target.vector(symbols)
    if others:
        a_ub = -np.array([o.vector(symbols) for o in others])
        b_ub = np.zeros(len(others))
    else:
        a_ub = b_ub = None
    res = linprog(c, A_ub=a_ub, b_ub=b_ub, bounds=[(0, 1)] * len(symbols), method="highs")
    return res.status == 0 and res.fun >= -1e-9


def tag_redundant(
    items: Sequence[Inequality], symbols: Sequence[str], implied: bool = False
) -> tuple[Inequality, ...]:
    """Tag identically-true, duplicate and (optionally) LP-implied inequalities."""
    out = list(items)
    seen: list[np.ndarray] = []
    for k, q in enumerate(out):
        if q.expr.is_zero():
            reason = "zero"
        elif q.expr.constant >= 0 and all(c >= 0 for c in q.expr.coeffs.values()):
            reason = "nonnegative"
        else:
            u = _unit(q.expr, symbols)
            reason = "duplicate" if any(np.allclose(u, s, atol=1e-9) for s in seen) else None
            if reason is None:
                seen.append(u)
        out[k] = Inequality(q.expr, q.strict, q.provenance, reason)
    homogeneous = all(q.expr.constant == 0 for q in out)
    if implied and homogeneous:
        for k, q in enumerate(out):
            if q.redundant is not None:
                continue
            others = [o.expr for j, o in enumerate(out) if j != k and o.redundant is None]
            if _implied(q.expr, others, symbols):
                out[k] = Inequality(q.expr, q.strict, q.provenance, "implied")
    return tuple(out)


def best_response_differences(game: BimatrixGame, profile: Profile) -> list[Inequality]:
    r, c = game.check_profile(profile)
    out = []
    for r2 in game.rows:
        if r2 != r:
            out.append(Inequality(game.alice[(r, c)] - game.alice[(r2, c)],
                                  provenance=((r, c), ("alice", r2))))
    for c2 in game.cols:
        if c2 != c:
            out.append(Inequality(game.eve[(r, c)] - game.eve[(r, c2)],
                                  provenance=((r, c), ("eve", c2))))
    return out


def nash_region(game: BimatrixGame, profile: Profile, implied: bool = False) -> InequalitySystem:
    """Weight region in which ``profile`` is a (weak) pure Nash equilibrium."""
    raw = best_response_differences(game, profile)
    return InequalitySystem(tag_redundant(raw, game.symbols, implied), game.symbols,
                            provenance=(tuple(profile),))


def check_region(system: InequalitySystem, weights: Mapping[str, float],
                 strict: bool = False) -> bool:
    w = check_weights(system.symbols, weights)
    return system.holds(w, strict)


def pareto_nash_condition(game: BimatrixGame, column: str = "E4") -> InequalitySystem:
    """Condition for the ``column`` profiles to give both players their top payoff.

    Every profile in ``column`` must pay Alice at least as much as any cell
    of her table and Eve at least as much as any cell of hers. The returned
    system is pruned to its binding inequalities.
    """
    if column not in game.cols:
        raise KeyError(f"column {column!r} not in game {game.name}")
    raw = []
    for r in game.rows:
        target = (r, column)
        for q in game.profiles():
            if q == target:
                continue
            raw.append(Inequality(game.alice[target] - game.alice[q],
                                  provenance=(target, ("alice", q))))
            raw.append(Inequality(game.eve[target] - game.eve[q],
                                  provenance=(target, ("eve", q))))
    tagged = tag_redundant(raw, game.symbols, implied=True)
    return InequalitySystem(tuple(q for q in tagged if q.redundant is None), game.symbols,
                            provenance=tuple((r, column) for r in game.rows))


def parse_profile(text: str) -> Profile:
    parts = [p.strip() for p in text.split(",")]
    if len(parts) != 2 or not all(parts):
        raise ValueError(f"profile must look like 'A1,E4', got {text!r}")
    return parts[0], parts[1]


def parse_inequality(text: str) -> Inequality:
    """Parse ``"lhs <= rhs"`` / ``"lhs >= rhs"`` into ``expr >= 0`` form."""
    s = text.replace("≤", "<=").replace("≥", ">=")
    if "<=" in s:
        lhs, rhs = s.split("<=")
        return Inequality(LinearExpr.parse(rhs) - LinearExpr.parse(lhs))
    if ">=" in s:
        lhs, rhs = s.split(">=")
        return Inequality(LinearExpr.parse(lhs) - LinearExpr.parse(rhs))
    raise ValueError(f"no inequality relation in {text!r}")


def verify_tables(registry=None, seed: int | None = None, samples: int = 200):
    """Check every published condition row by sampling (see :mod:`qkdgame.verification`)."""
    from .verification import verify_tables as _verify
    return _verify(registry, seed, samples)
