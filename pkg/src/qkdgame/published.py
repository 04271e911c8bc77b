"""Reference payoff tables and equilibrium conditions.

These are the values ``qkdgame verify-paper`` reproduces: payoff cells as
printed (three to four decimals), and for selected profiles the weight
conditions stated for them to be a pure Nash equilibrium.
"""
from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class PayoffTable:
    id: str
    game: str
    scenario: str | None
    player: str
    cells: dict


@dataclass(frozen=True)
class ConditionTable:
    id: str
    game: str
    scenario: str | None
    rows: dict


PAYOFF_TABLES = (
    PayoffTable("alice-pp", "pp", None, "alice", {
        ("A1", "E1"): "0.311w_a - 0.385w_b + 0.5w_c",
        ("A1", "E2"): "0.188w_a - 0.377w_b + 0.5w_c",
        ("A1", "E3"): "w_a",
        ("A1", "E4"): "w_a",
        ("A2", "E1"): "0.311w_a - 0.86w_b + 0.5w_c",
        ("A2", "E2"): "0.423w_a - 0.768w_b + 0.5w_c",
        ("A2", "E3"): "w_a - 2w_b",
        ("A2", "E4"): "w_a",
    }),
    PayoffTable("eve-pp", "pp", None, "eve", {
        ("A1", "E1"): "0.385w_d - 0.311w_e + 0.5w_f - 10w_1 - 4w_2 - 2w_3",
        ("A1", "E2"): "0.377w_d - 0.188w_e + 0.5w_f - 10.5w_1 - 5.5w_2 - 2w_3",
        ("A1", "E3"): "-w_e + w_f - 8w_1 - 4w_2 - 2w_3",
        ("A1", "E4"): "-w_e + w_f",
        ("A2", "E1"): "0.86w_d - 0.311w_e + 0.5w_f - 10w_1 - 4w_2 - 2w_3",
        ("A2", "E2"): "0.768w_d - 0.423w_e + 0.5w_f - 10.5w_1 - 5.5w_2 - 2w_3",
        ("A2", "E3"): "2w_d - w_e + w_f - 8w_1 - 4w_2 - 2w_3",
        ("A2", "E4"): "-w_e + w_f",
    }),
    PayoffTable("alice-pp-equal", "pp", "equal-weights", "alice", {
        ("A1", "E1"): "-0.074w_I + 0.5w_P",
        ("A1", "E2"): "-0.189w_I + 0.5w_P",
        ("A1", "E3"): "w_I",
        ("A1", "E4"): "w_I",
        ("A2", "E1"): "-0.549w_I + 0.5w_P",
        ("A2", "E2"): "-0.345w_I + 0.5w_P",
        ("A2", "E3"): "-w_I",
        ("A2", "E4"): "w_I",
    }),
    PayoffTable("eve-pp-equal", "pp", "equal-weights", "eve", {
        ("A1", "E1"): "0.074w_I + 0.5w_P - 10w_1 - 4w_2 - 2w_3",
        ("A1", "E2"): "0.189w_I + 0.5w_P - 10.5w_1 - 5.5w_2 - 2w_3",
        ("A1", "E3"): "-w_I + w_P - 8w_1 - 4w_2 - 2w_3",
        ("A1", "E4"): "-w_I + w_P",
        ("A2", "E1"): "0.549w_I + 0.5w_P - 10w_1 - 4w_2 - 2w_3",
        ("A2", "E2"): "0.345w_I + 0.5w_P - 10.5w_1 - 5.5w_2 - 2w_3",
        ("A2", "E3"): "w_I + w_P - 8w_1 - 4w_2 - 2w_3",
        ("A2", "E4"): "-w_I + w_P",
    }),
    PayoffTable("alice-twoway", "twoway", None, "alice", {
        ("PPP", "IR"): "0.1887w_g - 1.1887w_h + 0.125w_i - w_j",
        ("PPP", "DCNOT"): "w_g - w_j",
        ("PPP", "Wojcik"): "0.311w_g - 0.385w_h + 0.375w_i - w_j",
        ("LM05", "IR"): "0.1887w_g - 1.1887w_h + 0.125w_i",
        ("LM05", "DCNOT"): "w_g - 2w_h + 0.125w_i",
        ("LM05", "Wojcik"): "0.5488w_g - 1.096w_h + 0.375w_i",
    }),
    PayoffTable("eve-twoway", "twoway", None, "eve", {
        ("PPP", "IR"): "1.1887w_k - 0.1887w_l + 0.875w_m",
        ("PPP", "DCNOT"): "-w_l + w_m",
        ("PPP", "Wojcik"): "0.385w_k - 0.311w_l + 0.625w_m",
        ("LM05", "IR"): "1.1887w_k - 0.1887w_l + 0.875w_m",
        ("LM05", "DCNOT"): "2w_k - w_l + 0.875w_m",
        ("LM05", "Wojcik"): "1.096w_k - 0.5488w_l + 0.625w_m",
    }),
)

CONDITION_TABLES = (
    ConditionTable("nash-pp", "pp", None, {
        ("A1", "E1"): (
            "0.123w_e - 0.008w_d <= 0.5w_1 + 1.5w_2",
            "0.385w_d + 0.689w_e >= 0.5w_f + 10w_1 + 4w_2 + 2w_3",
        ),
        ("A1", "E2"): (
            "w_b >= 0.601w_a",
            "0.123w_e - 0.008w_d >= 0.5w_1 + 1.5w_2",
            "0.377w_d + 0.812w_e >= 0.5w_f + 10.5w_1 + 5.5w_2 + 2w_3",
        ),
        ("A1", "E4"): (
            "0.123w_e - 0.008w_d <= 0.5w_1 + 1.5w_2",
            "0.385w_d + 0.689w_e <= 0.5w_f + 10w_1 + 4w_2 + 2w_3",
        ),
        ("A2", "E4"): (
            "w_d <= 4w_1 + 2w_2 + w_3",
            "0.86w_d + 0.689w_e <= 0.5w_f + 10w_1 + 4w_2 + 2w_3",
        ),
    }),
    ConditionTable("nash-pp-no-dos", "pp", "no-dos", {
        ("A1", "E1"): ("w_d >= 1.2987w_f + 25.974w_1 + 10.3896w_2 + 5.1948w_3",),
        ("A1", "E4"): ("w_d <= 1.2987w_f + 25.974w_1 + 10.3896w_2 + 5.1948w_3",),
        ("A2", "E3"): ("w_d >= 4w_1 + 2w_2 + w_3",),
        ("A2", "E4"): ("w_d <= 4w_1 + 2w_2 + w_3",),
    }),
    ConditionTable("nash-pp-unlimited-eve", "pp", "unlimited-eve", {
        ("A1", "E1"): ("w_d >= 15.375w_e", "0.385w_d + 0.689w_e >= 0.5w_f"),
        ("A1", "E2"): (
            "w_d <= 15.375w_e",
            "0.377w_d + 0.812w_e >= 0.5w_f",
            "w_b >= 0.601w_a",
        ),
        ("A1", "E3"): ("0.385w_d + 0.689w_e <= 0.5w_f", "0.377w_d + 0.812w_e <= 0.5w_f"),
        ("A1", "E4"): ("0.385w_d + 0.689w_e <= 0.5w_f", "0.377w_d + 0.812w_e <= 0.5w_f"),
    }),
    ConditionTable("nash-twoway", "twoway", None, {
        ("LM05", "IR"): ("w_k <= w_l",),
        ("PPP", "DCNOT"): ("2w_h - w_j >= 0.125w_i", "w_m >= 9.5096w_k + 6.4904w_l"),
        ("LM05", "DCNOT"): (
            "2w_h - w_j <= 0.125w_i",
            "w_k >= w_l",
            "w_m >= 1.8048w_l - 3.616w_k",
        ),
    }),
)

# Two-sided weight condition under which (A1,E4) and (A2,E4) are stated to
# be Pareto optimal Nash equilibria of the equal-weights game.
PARETO_BOUNDS = ("0.4655w_P <= w_I", "w_I <= 4w_1 + 2w_2 + w_3")

# Constants that appear after solving best-response comparisons for one weight.
DERIVED_CONSTANTS = {
    "alice-e2-threshold": 0.601,
    "eve-e1-vs-e2-unlimited": 15.375,
    "no-dos-e1-w_f": 1.2987,
    "no-dos-e1-w_1": 25.974,
    "no-dos-e1-w_2": 10.3896,
    "no-dos-e1-w_3": 5.1948,
    "lm05-ir-vs-dcnot": 0.8113,
    "ir-i_ab": 0.1887,
}
