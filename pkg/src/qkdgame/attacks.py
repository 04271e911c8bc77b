"""Eve's strategies: built-in attacks, the attack file format, and a registry.

Attacks come in two forms. Circuit attacks are simulated through
:mod:`qkdgame.protocols`. Table attacks carry published statistics for
attacks whose unitaries are not reproduced here (Wojcik's attack and its
symmetrized variant, intercept-resend); a circuit file with the same name
can replace a table once the construction is available.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field, replace
from importlib import resources
from typing import Mapping

import numpy as np

from . import protocols, qsim
from .protocols import Circuit, ProtocolStats
from .qsim import Ket, Operator

BUILTIN_NAMES = ("E1", "E2", "E3", "E4", "IR", "DCNOT")

_TABLE_FIELDS = {"i_ab", "i_e_sum", "i_ae", "i_be", "p_d", "qber", "detection_cost"}


class AttackError(ValueError):
    """Malformed or invalid attack definition."""


class UnknownAttackError(KeyError):
    pass


class UnsupportedQueryError(LookupError):
    """A table attack has no statistics for the requested protocol/encoding."""


@dataclass(frozen=True)
class GateCosts:
    n1: float = 0.0
    n2: float = 0.0
    n3: float = 0.0
    notes: str = ""

    def __post_init__(self):
        for v in (self.n1, self.n2, self.n3):
            if not math.isfinite(v) or v < 0:
                raise AttackError(f"gate costs must be finite and nonnegative, got {v}")

    def as_tuple(self) -> tuple[float, float, float]:
        return (self.n1, self.n2, self.n3)


@dataclass(frozen=True)
class AttackSpec:
    name: str
    form: str
    circuit: Circuit | None = None
    table: Mapping[str, ProtocolStats] = field(default_factory=dict)
    costs: GateCosts = GateCosts()

    def __post_init__(self):
        if self.form not in ("circuit", "table"):
            raise AttackError(f"form must be 'circuit' or 'table', got {self.form!r}")
        if self.form == "circuit" and self.circuit is None:
            raise AttackError(f"circuit attack {self.name!r} has no circuit")
        if self.form == "table" and not self.table:
            raise AttackError(f"table attack {self.name!r} has no entries")


def table_key(protocol: str, encoding: str | None = None) -> str:
    protocol = protocol.lower()
    if protocol not in protocols.PROTOCOLS:
        raise AttackError(f"unknown protocol {protocol!r}")
    if encoding is None:
        encoding = protocols.ENCODINGS[protocol][0]
    if encoding not in protocols.ENCODINGS[protocol]:
        raise AttackError(f"encoding {encoding!r} is not defined for {protocol}")
    return f"{protocol}/{encoding}"


# -- file format ---------------------------------------------------------------

def _complex_vector(raw, what: str) -> np.ndarray:
    try:
        arr = np.asarray(raw, dtype=float)
    except (TypeError, ValueError) as exc:
        raise AttackError(f"{what}: expected [re, im] pairs") from exc
    if arr.ndim < 1 or arr.shape[-1] != 2:
        raise AttackError(f"{what}: expected [re, im] pairs, got shape {arr.shape}")
    return arr[..., 0] + 1j * arr[..., 1]


def _parse_circuit(raw: Mapping) -> Circuit:
    try:
        anc_dims = tuple(int(d) for d in raw["ancilla_dims"])
        init = _complex_vector(raw["ancilla_init"], "ancilla_init")
        leg1 = _complex_vector(raw["leg1"], "leg1")
        leg2 = _complex_vector(raw["leg2"], "leg2")
        basis = [_complex_vector(b, "eve_basis") for b in raw["eve_basis"]]
    except KeyError as exc:
        raise AttackError(f"circuit is missing field {exc.args[0]!r}") from exc
    anc_total = math.prod(anc_dims)
    travel_dim = int(raw.get("travel_dim", leg1.shape[0] // max(anc_total, 1)))
    dims = (travel_dim,) + anc_dims
    try:
        init_ket = Ket(anc_dims, init)
        basis_kets = tuple(Ket(anc_dims, b) for b in basis)
        op1 = Operator(dims, leg1, unitary=True)
        op2 = Operator(dims, leg2, unitary=True)
        return Circuit(travel_dim, init_ket, op1, op2, basis_kets,
                       tuple(raw.get("eve_labels", ())))
    except ValueError as exc:
        raise AttackError(str(exc)) from exc


def _parse_table(raw: Mapping, costs: GateCosts) -> dict[str, ProtocolStats]:
    table = {}
    for key, entry in raw.items():
        protocol, _, encoding = key.partition("/")
        k = table_key(protocol, encoding or None)
        unknown = set(entry) - _TABLE_FIELDS
        if unknown:
            raise AttackError(f"{key}: unknown fields {sorted(unknown)}")
        try:
            table[k] = ProtocolStats(
                **{f: float(v) for f, v in entry.items()},
                n_entangled=protocols.N_ENTANGLED[k.split("/")[0]],
                gate_costs=costs.as_tuple(),
            )
        except (TypeError, ValueError) as exc:
            raise AttackError(f"{key}: {exc}") from exc
    return table


def load_attack(source: str | bytes | Mapping) -> AttackSpec:
    """Parse and validate an attack definition (JSON text or decoded object)."""
    if isinstance(source, (str, bytes)):
        try:
            raw = json.loads(source)
        except json.JSONDecodeError as exc:
            raise AttackError(f"attack file is not valid JSON: {exc}") from exc
    else:
        raw = source
    if not isinstance(raw, Mapping):
        raise AttackError("attack file must hold a JSON object")
    name = raw.get("name")
    if not isinstance(name, str) or not name:
        raise AttackError("attack needs a non-empty string 'name'")
    c = raw.get("costs", {})
    costs = GateCosts(
        float(c.get("n1", 0)), float(c.get("n2", 0)), float(c.get("n3", 0)),
        str(c.get("notes", "")),
    )
    form = raw.get("form")
    if form == "circuit":
        if "circuit" not in raw:
            raise AttackError("circuit attack needs a 'circuit' object")
        return AttackSpec(name, "circuit", circuit=_parse_circuit(raw["circuit"]), costs=costs)
    if form == "table":
        if "table" not in raw:
            raise AttackError("table attack needs a 'table' object")
        return AttackSpec(name, "table", table=_parse_table(raw["table"], costs), costs=costs)
    raise AttackError(f"form must be 'circuit' or 'table', got {form!r}")


def _pairs(arr) -> list:
    a = np.asarray(arr, dtype=complex)
    return np.stack([a.real, a.imag], axis=-1).tolist()


def dump_attack(spec: AttackSpec) -> str:
    """Serialize an attack back to the file format."""
    out: dict = {
        "name": spec.name,
        "form": spec.form,
        "costs": {"n1": spec.costs.n1, "n2": spec.costs.n2, "n3": spec.costs.n3},
    }
    if spec.costs.notes:
        out["costs"]["notes"] = spec.costs.notes
    if spec.form == "circuit":
        c = spec.circuit
        out["circuit"] = {
            "travel_dim": c.travel_dim,
            "ancilla_dims": list(c.ancilla_dims),
            "ancilla_init": _pairs(c.ancilla_init.amplitudes),
            "leg1": _pairs(c.leg1.matrix),
            "leg2": _pairs(c.leg2.matrix),
            "eve_basis": [_pairs(k.amplitudes) for k in c.eve_basis],
            "eve_labels": list(c.eve_labels),
        }
    else:
        out["table"] = {
            key: {
                f: v for f, v in s.to_dict().items()
                if f in _TABLE_FIELDS and v is not None
            }
            for key, s in spec.table.items()
        }
    return json.dumps(out, indent=2)


# -- built-ins -----------------------------------------------------------------

def identity_circuit() -> Circuit:
    """No attack: trivial one-level ancilla, identity on both legs."""
    return Circuit(
        travel_dim=2,
        ancilla_init=Ket((1,), [1]),
        leg1=Operator.identity((2, 1)),
        leg2=Operator.identity((2, 1)),
        eve_basis=(Ket((1,), [1]),),
    )


def cnot_circuit() -> Circuit:
    """Double CNOT: copy the travel Z value onto a |0> ancilla on both legs."""
    cnot = qsim.gate(qsim.CNOT, (2, 2))
    return Circuit(
        travel_dim=2,
        ancilla_init=Ket.basis(0, (2,)),
        leg1=cnot,
        leg2=cnot,
        eve_basis=tuple(qsim.computational_basis((2,))),
    )


def _packaged_table(name: str) -> AttackSpec:
    text = resources.files("qkdgame.data.attacks").joinpath(f"{name}.json").read_text()
    return load_attack(text)


def _builtins() -> dict[str, AttackSpec]:
    return {
        "E4": AttackSpec("E4", "circuit", circuit=identity_circuit(),
                         costs=GateCosts(notes="no attack")),
        "E3": AttackSpec("E3", "circuit", circuit=cnot_circuit(),
                         costs=GateCosts(8, 4, 2, "Pavicic's attack; costs of the original construction")),
        "DCNOT": AttackSpec("DCNOT", "circuit", circuit=cnot_circuit(),
                            costs=GateCosts(notes="two-way game carries no gate cost term")),
        "E1": _packaged_table("E1"),
        "E2": _packaged_table("E2"),
        "IR": _packaged_table("IR"),
    }


class AttackRegistry:
    """Built-in attacks plus user-loaded ones; names are unique."""

    def __init__(self, include_builtins: bool = True):
        self._builtin: dict[str, AttackSpec] = _builtins() if include_builtins else {}
        self._user: dict[str, AttackSpec] = {}

    def names(self) -> list[str]:
        return list(self._builtin) + list(self._user)

    def get(self, name: str) -> AttackSpec:
        try:
            return self._user.get(name) or self._builtin[name]
        except KeyError:
            raise UnknownAttackError(
                f"unknown attack {name!r}; known: {', '.join(self.names())}"
            ) from None

    def __contains__(self, name: str) -> bool:
        return name in self._builtin or name in self._user

    def register(self, spec: AttackSpec) -> AttackSpec:
        if spec.name in self:
            raise AttackError(f"an attack named {spec.name!r} is already registered")
        self._user[spec.name] = spec
        return spec

    def load(self, source) -> AttackSpec:
        return self.register(load_attack(source))

    def replace_builtin(self, spec: AttackSpec) -> None:
        """Swap a built-in definition (e.g. a table for its sourced circuit)."""
        if spec.name not in self._builtin:
            raise UnknownAttackError(spec.name)
        self._builtin[spec.name] = spec


_DEFAULT: AttackRegistry | None = None


def default_registry() -> AttackRegistry:
    global _DEFAULT
    if _DEFAULT is None:
        _DEFAULT = AttackRegistry()
    return _DEFAULT


def builtin(name: str) -> AttackSpec:
    if name not in BUILTIN_NAMES:
        raise UnknownAttackError(f"{name!r} is not a built-in attack")
    return default_registry().get(name)


def stats_for(
    attack: AttackSpec | str,
    protocol: str,
    encoding: str | None = None,
    registry: AttackRegistry | None = None,
) -> ProtocolStats:
    """Statistics of ``attack`` against one protocol/encoding.

    Circuit attacks are simulated on every call; table attacks are looked up.
    """
    if isinstance(attack, str):
        attack = (registry or default_registry()).get(attack)
    key = table_key(protocol, encoding)
    protocol, encoding = key.split("/")
    if attack.form == "circuit":
        try:
            return protocols.simulate(attack.circuit, protocol, encoding, attack.costs.as_tuple())
        except ValueError as exc:
            raise AttackError(f"{attack.name}: {exc}") from exc
    if key not in attack.table:
        raise UnsupportedQueryError(
            f"attack {attack.name!r} has no statistics for {key}; "
            f"available: {', '.join(sorted(attack.table))}"
        )
    return replace(attack.table[key], gate_costs=attack.costs.as_tuple())
