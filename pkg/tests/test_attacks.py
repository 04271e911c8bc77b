import json

import numpy as np
import pytest

from qkdgame import attacks, protocols, qsim
from qkdgame.attacks import AttackError, UnknownAttackError, UnsupportedQueryError


def cnot_file(name="MyCNOT", **extra) -> dict:
    """The double-CNOT attack written out in the attack file format."""
    cnot = [[[float(v), 0.0] for v in row] for row in np.real(qsim.CNOT)]
    return {
        "name": name,
        "form": "circuit",
        "costs": {"n1": 1, "n2": 2, "n3": 3},
        "circuit": {
            "ancilla_dims": [2],
            "ancilla_init": [[1, 0], [0, 0]],
            "leg1": cnot,
            "leg2": cnot,
            "eve_basis": [[[1, 0], [0, 0]], [[0, 0], [1, 0]]],
            **extra,
        },
    }


class TestBuiltins:
    def test_names(self):
        assert set(attacks.default_registry().names()) == set(attacks.BUILTIN_NAMES)

    @pytest.mark.parametrize("name, form", [("E1", "table"), ("E2", "table"), ("IR", "table"),
                                            ("E3", "circuit"), ("E4", "circuit"),
                                            ("DCNOT", "circuit")])
    def test_forms(self, name, form):
        assert attacks.builtin(name).form == form

    def test_unknown_builtin(self):
        with pytest.raises(UnknownAttackError):
            attacks.builtin("E9")

    def test_costs(self):
        assert attacks.builtin("E1").costs.as_tuple() == (10, 4, 2)
        assert attacks.builtin("E2").costs.as_tuple() == (10.5, 5.5, 2)
        assert attacks.builtin("E3").costs.as_tuple() == (8, 4, 2)
        assert attacks.builtin("E4").costs.as_tuple() == (0, 0, 0)

    def test_table_lookup_carries_costs(self):
        s = attacks.stats_for("E2", "pp", "A2")
        assert (s.i_ab, s.i_e_sum, s.p_d) == (0.423, 0.768, 0.5)
        assert s.gate_costs == (10.5, 5.5, 2)
        assert s.n_entangled == 1

    def test_unsupported_query(self):
        with pytest.raises(UnsupportedQueryError):
            attacks.stats_for("E2", "lm05")

    @pytest.mark.parametrize("name", ["E1", "E2", "IR"])
    def test_table_entries_are_internally_consistent(self, name):
        # Tier-B entries cannot be simulated; they must at least respect the entropy bounds.
        for key, s in attacks.builtin(name).table.items():
            assert 0 <= s.i_ab <= 1
            assert 0 <= s.i_e_sum <= 3
            for f in ("p_d", "qber", "detection_cost"):
                v = getattr(s, f)
                assert v is None or 0 <= v <= 1
            assert s.p_d is not None or s.detection_cost is not None

    def test_ir_information_is_one_minus_h_quarter(self):
        s = attacks.stats_for("IR", "lm05")
        assert s.i_ab == pytest.approx(1 - protocols.binary_entropy(0.25), abs=1e-4)
        assert s.i_e_sum == pytest.approx(1 + s.i_ab, abs=1e-12)


class TestFileFormat:
    def test_circuit_file_matches_builtin_dcnot(self):
        spec = attacks.load_attack(json.dumps(cnot_file()))
        for protocol, enc in [("pp", "A1"), ("pp", "A2"), ("lm05", "Y")]:
            got = attacks.stats_for(spec, protocol, enc)
            ref = attacks.stats_for("DCNOT", protocol, enc)
            for f in ("i_ab", "i_e_sum", "p_d", "qber"):
                assert getattr(got, f) == pytest.approx(getattr(ref, f), abs=1e-12)
        assert got.gate_costs == (1, 2, 3)

    def test_roundtrip(self):
        for name in attacks.BUILTIN_NAMES:
            spec = attacks.builtin(name)
            again = attacks.load_attack(attacks.dump_attack(spec))
            assert again.name == spec.name and again.form == spec.form
            assert again.costs.as_tuple() == spec.costs.as_tuple()
            if spec.form == "table":
                assert again.table == spec.table
            else:
                np.testing.assert_allclose(again.circuit.leg1.matrix, spec.circuit.leg1.matrix)

    def test_table_file(self):
        spec = attacks.load_attack({
            "name": "T", "form": "table",
            "table": {"pp/A1": {"i_ab": 0.5, "i_e_sum": 0.2, "p_d": 0.1, "qber": 0.1}},
        })
        assert attacks.stats_for(spec, "pp", "A1").detection_cost == pytest.approx(0.1)

    @pytest.mark.parametrize("mutate, message", [
        (lambda d: d.pop("name"), "name"),
        (lambda d: d.update(form="quantum"), "form"),
        (lambda d: d["circuit"].pop("leg2"), "leg2"),
        (lambda d: d["circuit"].update(leg1=[[[1, 0], [1, 0], [0, 0], [0, 0]]] * 4), "unitary"),
        (lambda d: d["circuit"].update(ancilla_init=[[1, 0], [1, 0]]), "norm"),
        (lambda d: d["circuit"].update(eve_basis=[[[1, 0], [0, 0]], [[1, 0], [0, 0]]]), "orthonormal"),
        (lambda d: d["costs"].update(n1=-1), "nonnegative"),
    ])
    def test_rejects_malformed(self, mutate, message):
        d = cnot_file()
        mutate(d)
        with pytest.raises(AttackError, match=message):
            attacks.load_attack(d)

    def test_rejects_bad_table_fields(self):
        with pytest.raises(AttackError, match="unknown fields"):
            attacks.load_attack({"name": "T", "form": "table",
                                 "table": {"pp/A1": {"i_ab": 0.5, "i_e_sum": 0, "bogus": 1}}})
        with pytest.raises(AttackError):
            attacks.load_attack({"name": "T", "form": "table",
                                 "table": {"pp/A3": {"i_ab": 0.5, "i_e_sum": 0}}})

    def test_rejects_invalid_json(self):
        with pytest.raises(AttackError, match="JSON"):
            attacks.load_attack("{not json")

    def test_vacuum_travel(self):
        spec = attacks.load_attack(cnot_file() | {"circuit": {
            "travel_dim": 3, "ancilla_dims": [1], "ancilla_init": [[1, 0]],
            "leg1": np.stack([np.eye(3), np.zeros((3, 3))], -1).tolist(),
            "leg2": np.stack([np.eye(3), np.zeros((3, 3))], -1).tolist(),
            "eve_basis": [[[1, 0]]],
        }})
        assert spec.circuit.travel_dim == 3
        assert attacks.stats_for(spec, "pp", "A1").i_ab == pytest.approx(1.0)


class TestRegistry:
    def test_register_and_lookup(self, registry):
        registry.load(json.dumps(cnot_file("Mine")))
        assert "Mine" in registry
        assert attacks.stats_for("Mine", "pp", "A2", registry).i_e_sum == pytest.approx(2)

    def test_duplicate_names_rejected(self, registry):
        with pytest.raises(AttackError, match="already registered"):
            registry.load(json.dumps(cnot_file("E3")))

    def test_replace_table_with_circuit(self, registry):
        registry.replace_builtin(attacks.load_attack(cnot_file("E2")))
        assert registry.get("E2").form == "circuit"
        assert attacks.stats_for("E2", "lm05", registry=registry).i_ab == pytest.approx(1)

    def test_unknown(self, registry):
        with pytest.raises(UnknownAttackError):
            registry.get("nope")
