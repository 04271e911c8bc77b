"""Ping-Pong and LM05 pipelines: exact branch enumeration to joint records.

Every pipeline enumerates the classical randomness (Alice's bit, Bob's
preparation) as pure branches and weights outcomes by branch probability.
Eve is attached through a :class:`Circuit`: an ancilla, one unitary per
channel leg acting on travel photon and ancilla, and a measurement basis.
"""
from __future__ import annotations

import math
from collections import defaultdict
from dataclasses import dataclass, field
from typing import Mapping, Sequence

import numpy as np

from . import qsim
from .qsim import Ket, Operator

PROTOCOLS = ("pp", "lm05")
ENCODINGS = {"pp": ("A1", "A2"), "lm05": ("Y",)}
N_ENTANGLED = {"pp": 1, "lm05": 0}

ERR = "err"
LOSS = "loss"

TOL = 1e-10


class TableFormError(TypeError):
    """A statistics-table attack was handed to a simulation pipeline."""


@dataclass(frozen=True)
class Circuit:
    """Eve's two-leg attack on the travel photon.

    ``leg1`` acts on the outbound leg (towards Alice), ``leg2`` on the
    return leg. Both act on travel (dimension ``travel_dim``) tensored with
    the ancilla, in that order.
    """

    travel_dim: int
    ancilla_init: Ket
    leg1: Operator
    leg2: Operator
    eve_basis: tuple[Ket, ...]
    eve_labels: tuple[str, ...] = ()

    def __post_init__(self):
        if self.travel_dim not in (2, 3):
            raise ValueError(f"travel photon dimension must be 2 or 3, got {self.travel_dim}")
        dims = (self.travel_dim,) + self.ancilla_init.dims
        for name in ("leg1", "leg2"):
            op = getattr(self, name)
            if op.dims != dims:
                raise ValueError(f"{name} acts on {op.dims}, expected {dims}")
            if not op.unitary:
                raise ValueError(f"{name} must be unitary")
        basis = tuple(self.eve_basis)
        qsim._validate_basis(basis, self.ancilla_init.dims)
        labels = tuple(self.eve_labels) or tuple(str(i) for i in range(len(basis)))
        if len(labels) != len(basis):
            raise ValueError("one label per Eve basis ket required")
        object.__setattr__(self, "eve_basis", basis)
        object.__setattr__(self, "eve_labels", labels)

    @property
    def ancilla_dims(self) -> tuple[int, ...]:
        return self.ancilla_init.dims


def circuit_of(attack) -> Circuit:
    if isinstance(attack, Circuit):
        return attack
    circuit = getattr(attack, "circuit", None)
    if circuit is None:
        name = getattr(attack, "name", attack)
        raise TableFormError(f"attack {name!r} has no circuit to simulate")
    return circuit


def lift_travel(op: np.ndarray, travel_dim: int) -> np.ndarray:
    """Extend a qubit operator to the travel space; the vacuum level is left alone."""
    if travel_dim == 2:
        return np.asarray(op, dtype=complex)
    out = np.eye(travel_dim, dtype=complex)
    out[:2, :2] = op
    return out


def _qubit_ket(amps, travel_dim: int) -> Ket:
    v = np.zeros(travel_dim, dtype=complex)
    v[:2] = amps
    return Ket((travel_dim,), v)


@dataclass(frozen=True)
class Encoding:
    id: str
    op_for_bit: tuple[np.ndarray, np.ndarray] = field(repr=False)
    decode: Mapping[str, int] = field(default_factory=dict)

    def op(self, bit: int, travel_dim: int = 2) -> Operator:
        return qsim.gate(lift_travel(self.op_for_bit[bit], travel_dim))


A1 = Encoding("A1", (qsim.I2, qsim.Z), {"psi+": 0, "psi-": 1})
A2 = Encoding("A2", (qsim.I2, qsim.X), {"psi+": 0, "phi+": 1})
# i*sigma_y = sigma_z sigma_x flips every preparation in both bases.
LM05_ENCODING = Encoding("Y", (qsim.I2, qsim.Z @ qsim.X))

ENCODING_BY_ID = {"A1": A1, "A2": A2, "Y": LM05_ENCODING}


@dataclass(frozen=True)
class JointRecordDistribution:
    """Joint law of (Alice's bit, Bob's decoded symbol, Eve's record)."""

    entries: tuple[tuple[int, object, str, float], ...]

    def __post_init__(self):
        if not self.entries:
            raise ValueError("empty distribution")
        probs = np.array([p for *_, p in self.entries])
        if np.any(probs < -TOL):
            raise ValueError("negative probability in joint record distribution")
        if abs(probs.sum() - 1.0) > TOL:
            raise ValueError(f"joint probabilities sum to {probs.sum():.12f}")
        pa = self.marginal("a")
        if any(abs(pa.get(a, 0.0) - 0.5) > TOL for a in (0, 1)):
            raise ValueError(f"Alice's bit is not uniform: {pa}")

    @classmethod
    def from_mass(cls, mass: Mapping[tuple, float]) -> "JointRecordDistribution":
        items = sorted(mass.items(), key=lambda kv: tuple(map(str, kv[0])))
        return cls(tuple((a, b, e, p) for (a, b, e), p in items if p > 0))

    def marginal(self, *names: str) -> dict:
        idx = {"a": 0, "b": 1, "e": 2}
        out: dict = defaultdict(float)
        for entry in self.entries:
            key = tuple(entry[idx[n]] for n in names)
            out[key[0] if len(key) == 1 else key] += entry[3]
        return dict(out)

    def probability(self, predicate) -> float:
        return sum(p for a, b, e, p in self.entries if predicate(a, b, e))


def binary_entropy(p: float) -> float:
    if p < 0 or p > 1:
        raise ValueError(f"probability out of range: {p}")
    if p in (0.0, 1.0):
        return 0.0
    return float(-p * math.log2(p) - (1 - p) * math.log2(1 - p))


def mutual_information(joint) -> float:
    """I(X;Y) in bits for a 2-D joint probability table."""
    pxy = np.asarray(joint, dtype=float)
    if pxy.ndim != 2:
        raise ValueError("joint table must be 2-D")
    if np.any(pxy < 0):
        raise ValueError("negative probability in joint table")
    if abs(pxy.sum() - 1.0) > TOL:
        raise ValueError(f"joint table sums to {pxy.sum():.12f}")
    px = pxy.sum(axis=1, keepdims=True)
    py = pxy.sum(axis=0, keepdims=True)
    mask = pxy > 0
    mi = np.sum(pxy[mask] * np.log2(pxy[mask] / (px @ py)[mask]))
    return max(float(mi), 0.0)


def _pair_table(dist: JointRecordDistribution, x: str, y: str) -> np.ndarray:
    pairs = dist.marginal(x, y)
    xs = sorted({k[0] for k in pairs}, key=str)
    ys = sorted({k[1] for k in pairs}, key=str)
    table = np.zeros((len(xs), len(ys)))
    for (kx, ky), p in pairs.items():
        table[xs.index(kx), ys.index(ky)] += p
    return table / table.sum()


def _check_unit(name: str, value: float | None):
    if value is not None and not (0.0 <= value <= 1.0):
        raise ValueError(f"{name} must lie in [0, 1], got {value}")


@dataclass(frozen=True)
class ProtocolStats:
    """Information-theoretic summary consumed by the payoff functions.

    ``i_ae``/``i_be`` may be absent when only their sum is known, and
    ``detection_cost`` may be given directly when the split between
    ``p_d`` and ``qber`` is unknown.
    """

    i_ab: float
    i_e_sum: float | None = None
    i_ae: float | None = None
    i_be: float | None = None
    p_d: float | None = None
    qber: float | None = None
    detection_cost: float | None = None
    n_entangled: int = 0
    gate_costs: tuple[float, float, float] = (0.0, 0.0, 0.0)
    inconclusive: float | None = None

    def __post_init__(self):
        if self.i_ae is not None and self.i_be is not None:
            total = self.i_ae + self.i_be
            if self.i_e_sum is None:
                object.__setattr__(self, "i_e_sum", total)
            elif abs(self.i_e_sum - total) > TOL:
                raise ValueError(
                    f"i_e_sum={self.i_e_sum} disagrees with i_ae + i_be = {total}"
                )
        if self.i_e_sum is None:
            raise ValueError("i_e_sum (or both i_ae and i_be) is required")
        # Alice's bit is binary; Bob's symbol has at most four values.
        bounds = {"i_ab": 1.0, "i_ae": 1.0, "i_be": 2.0, "i_e_sum": 3.0}
        for name, hi in bounds.items():
            v = getattr(self, name)
            if v is not None and not (-TOL <= v <= hi + TOL):
                raise ValueError(f"{name}={v} outside [0, {hi}]")
        for name in ("p_d", "qber", "detection_cost", "inconclusive"):
            _check_unit(name, getattr(self, name))
        if self.p_d is not None and self.qber is not None:
            cost = (self.p_d + self.qber) / 2
            if self.detection_cost is None:
                object.__setattr__(self, "detection_cost", cost)
            elif abs(self.detection_cost - cost) > TOL:
                raise ValueError(
                    f"detection_cost={self.detection_cost} != (p_d + qber)/2 = {cost}"
                )
        if self.n_entangled < 0:
            raise ValueError("n_entangled must be nonnegative")
        costs = tuple(float(c) for c in self.gate_costs)
        if len(costs) != 3 or any(c < 0 for c in costs):
            raise ValueError(f"gate costs must be three nonnegative numbers, got {costs}")
        object.__setattr__(self, "gate_costs", costs)

    def to_dict(self) -> dict:
        return {
            "i_ab": self.i_ab,
            "i_ae": self.i_ae,
            "i_be": self.i_be,
            "i_e_sum": self.i_e_sum,
            "p_d": self.p_d,
            "qber": self.qber,
            "detection_cost": self.detection_cost,
            "inconclusive": self.inconclusive,
            "n_entangled": self.n_entangled,
            "gate_costs": list(self.gate_costs),
        }

    @classmethod
    def from_dict(cls, d: Mapping) -> "ProtocolStats":
        kwargs = {k: d[k] for k in d if k != "gate_costs"}
        if "gate_costs" in d:
            kwargs["gate_costs"] = tuple(d["gate_costs"])
        return cls(**kwargs)


def stats_from(
    dist: JointRecordDistribution,
    p_d: float | None,
    gate_costs: Sequence[float] = (0.0, 0.0, 0.0),
    n_entangled: int = 0,
) -> ProtocolStats:
    """Mutual informations and error rates of a joint record distribution.

    QBER is taken over conclusive events only (Bob decoded a bit); the
    remaining mass is reported as ``inconclusive``.
    """
    i_ab = mutual_information(_pair_table(dist, "a", "b"))
    i_ae = mutual_information(_pair_table(dist, "a", "e"))
    i_be = mutual_information(_pair_table(dist, "b", "e"))
    conclusive = dist.probability(lambda a, b, e: b in (0, 1))
    errors = dist.probability(lambda a, b, e: b in (0, 1) and b != a)
    qber = errors / conclusive if conclusive > qsim.NEGLIGIBLE else None
    return ProtocolStats(
        i_ab=i_ab,
        i_ae=i_ae,
        i_be=i_be,
        p_d=p_d,
        qber=qber,
        n_entangled=n_entangled,
        gate_costs=tuple(gate_costs),
        inconclusive=0.0 if 1.0 - conclusive < qsim.NEGLIGIBLE else 1.0 - conclusive,
    )


# -- Ping-Pong ---------------------------------------------------------------

def _psi_plus(travel_dim: int) -> Ket:
    amps = np.zeros((travel_dim, 2), dtype=complex)
    amps[0, 1] = amps[1, 0] = 1 / math.sqrt(2)
    return Ket((travel_dim, 2), amps)


def _pp_start(c: Circuit) -> tuple[Ket, tuple[int, ...]]:
    state = qsim.tensor([_psi_plus(c.travel_dim), c.ancilla_init])
    legs = (0,) + tuple(range(2, 2 + len(c.ancilla_dims)))
    return state, legs


def _bob_bell_basis(travel_dim: int) -> tuple[list[Ket], list[str]]:
    basis, labels = [], list(qsim.BELL_LABELS)
    for k in qsim.bell_basis():
        amps = np.zeros((travel_dim, 2), dtype=complex)
        amps[:2, :] = k.amplitudes.reshape(2, 2)
        basis.append(Ket((travel_dim, 2), amps))
    if travel_dim == 3:
        basis += [Ket.basis((2, h), (3, 2)) for h in (0, 1)]
        labels += [LOSS, LOSS]
    return basis, labels


def _eve_records(c: Circuit, state: Ket, targets) -> list[tuple[str, float]]:
    dist = qsim.measure(state, targets, c.eve_basis, c.eve_labels)
    return [(o.label, o.probability) for o in dist if o.probability > 0]


def run_pp_message(encoding: Encoding, attack) -> JointRecordDistribution:
    c = circuit_of(attack)
    start, legs = _pp_start(c)
    anc = legs[1:]
    leg1 = qsim.embed(c.leg1, legs, start.dims)
    leg2 = qsim.embed(c.leg2, legs, start.dims)
    basis, labels = _bob_bell_basis(c.travel_dim)
    mass: dict = defaultdict(float)
    for a in (0, 1):
        enc = qsim.embed(encoding.op(a, c.travel_dim), [0], start.dims)
        state = leg2.apply(enc.apply(leg1.apply(start)))
        for bob in qsim.measure(state, [0, 1], basis, labels):
            if bob.post_state is None:
                continue
            b = LOSS if bob.label == LOSS else encoding.decode.get(bob.label, ERR)
            for e, pe in _eve_records(c, bob.post_state, anc):
                mass[(a, b, e)] += 0.5 * bob.probability * pe
    return JointRecordDistribution.from_mass(mass)


def run_pp_control(attack) -> float:
    """Probability that a control round exposes Eve.

    Alice measures the travel photon in {|0>,|1>,|v>}, Bob his photon in
    {|0>,|1>}; vacuum or correlated (not anti-correlated) results abort.
    """
    c = circuit_of(attack)
    start, legs = _pp_start(c)
    state = qsim.embed(c.leg1, legs, start.dims).apply(start)
    basis = qsim.computational_basis((c.travel_dim, 2))
    labels = [f"{t}{h}" for t in range(c.travel_dim) for h in (0, 1)]
    p_d = 0.0
    for o in qsim.measure(state, [0, 1], basis, labels):
        t, h = int(o.label[0]), int(o.label[1])
        if t == 2 or t == h:
            p_d += o.probability
    return min(p_d, 1.0)


# -- LM05 --------------------------------------------------------------------

_S = 1 / math.sqrt(2)
LM05_PREPARATIONS = {
    "0": ("Z", 0),
    "1": ("Z", 1),
    "+": ("X", 0),
    "-": ("X", 1),
}
_BASIS_AMPS = {
    "Z": ([1, 0], [0, 1]),
    "X": ([_S, _S], [_S, -_S]),
}


def _prep_basis(basis: str, travel_dim: int) -> tuple[list[Ket], list[str]]:
    kets = [_qubit_ket(v, travel_dim) for v in _BASIS_AMPS[basis]]
    labels = ["0", "1"]
    if travel_dim == 3:
        kets.append(Ket.basis(2, (3,)))
        labels.append(LOSS)
    return kets, labels


def _lm05_start(c: Circuit, prep: str) -> tuple[Ket, list[Ket], list[str]]:
    basis, idx = LM05_PREPARATIONS[prep]
    kets, labels = _prep_basis(basis, c.travel_dim)
    return qsim.tensor([kets[idx], c.ancilla_init]), kets, labels


def run_lm05_message(attack) -> JointRecordDistribution:
    c = circuit_of(attack)
    mass: dict = defaultdict(float)
    for prep, (_, idx) in LM05_PREPARATIONS.items():
        start, kets, labels = _lm05_start(c, prep)
        dims = start.dims
        anc = tuple(range(1, len(dims)))
        legs = (0,) + anc
        leg1 = qsim.embed(c.leg1, legs, dims)
        leg2 = qsim.embed(c.leg2, legs, dims)
        for a in (0, 1):
            enc = qsim.embed(LM05_ENCODING.op(a, c.travel_dim), [0], dims)
            state = leg2.apply(enc.apply(leg1.apply(start)))
            for bob in qsim.measure(state, [0], kets, labels):
                if bob.post_state is None:
                    continue
                b = LOSS if bob.label == LOSS else int(int(bob.label) != idx)
                for e, pe in _eve_records(c, bob.post_state, anc):
                    mass[(a, b, e)] += 0.125 * bob.probability * pe
    return JointRecordDistribution.from_mass(mass)


def run_lm05_control(attack) -> float:
    """Detection probability on sifted control rounds (Alice measures in Bob's basis)."""
    c = circuit_of(attack)
    p_d = 0.0
    for prep, (_, idx) in LM05_PREPARATIONS.items():
        start, kets, labels = _lm05_start(c, prep)
        legs = tuple(range(len(start.dims)))
        state = qsim.embed(c.leg1, legs, start.dims).apply(start)
        for o in qsim.measure(state, [0], kets, labels):
            if o.label != str(idx):
                p_d += 0.25 * o.probability
    return min(p_d, 1.0)


def simulate(
    attack,
    protocol: str,
    encoding: str | None = None,
    gate_costs: Sequence[float] = (0.0, 0.0, 0.0),
) -> ProtocolStats:
    """Run message and control pipelines for one (protocol, encoding)."""
    if protocol == "pp":
        enc = ENCODING_BY_ID[encoding or "A1"]
        if enc.id not in ENCODINGS["pp"]:
            raise ValueError(f"encoding {enc.id} is not a Ping-Pong encoding")
        dist = run_pp_message(enc, attack)
        p_d = run_pp_control(attack)
    elif protocol == "lm05":
        if encoding not in (None, "Y"):
            raise ValueError(f"LM05 has a single encoding 'Y', got {encoding!r}")
        dist = run_lm05_message(attack)
        p_d = run_lm05_control(attack)
    else:
        raise ValueError(f"unknown protocol {protocol!r}")
    return stats_from(dist, p_d, gate_costs, N_ENTANGLED[protocol])
