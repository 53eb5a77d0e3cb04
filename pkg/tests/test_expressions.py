"""Expression AST: parsing, printing, evaluation, jets, derivatives."""

import numpy as np
import pytest

from dualcr.errors import ExpressionSyntaxError, NearZeroDenominator
from dualcr.expressions import (
    Conj,
    Const,
    Var,
    admissible_mask,
    eval_derivatives,
    eval_jet,
    eval_values,
    monomial,
    parse,
    polynomial,
    to_string,
)
from dualcr.jets import Jet


class TestParse:
    @pytest.mark.parametrize("text", [
        "z1*w1 + z2*w2",
        "z1/w2",
        "conj(z1)^2",
        "-z1 + 2.5*w2",
        "(z1 + i*z2)^3 / (1 + w1)",
    ])
    def test_round_trip(self, text):
        e = parse(text)
        again = parse(to_string(e))
        assert again == e

    def test_imaginary_unit(self):
        assert eval_values(parse("i^2"), {}) == pytest.approx(-1)

    def test_precedence(self):
        e = parse("z1 + z2*w1")
        env = {"z1": 1.0, "z2": 2.0, "w1": 3.0, "w2": 0.0}
        assert eval_values(e, env) == pytest.approx(7.0)

    @pytest.mark.parametrize("text,pos_hint", [
        ("z1 +", None),
        ("z3", 0),
        ("z1 ^ w1", None),
        ("conj z1", None),
        ("(z1", None),
    ])
    def test_syntax_errors(self, text, pos_hint):
        with pytest.raises(ExpressionSyntaxError) as ei:
            parse(text)
        assert hasattr(ei.value, "position")

    def test_builders(self):
        e = polynomial(("z1", "z2"), {(2, 0): 1.0, (0, 1): -2.0})
        env = {"z1": 3.0, "z2": 1.0, "w1": 0, "w2": 0}
        assert eval_values(e, env) == pytest.approx(9.0 - 2.0)
        m = monomial(("w1", "w2"), (1, 1), 2.0)
        env = {"z1": 0, "z2": 0, "w1": 2.0, "w2": 5.0}
        assert eval_values(m, env) == pytest.approx(20.0)


class TestEval:
    def test_vectorized(self):
        e = parse("z1*conj(z2) + 1")
        env = {"z1": np.array([1.0, 2.0]), "z2": np.array([1j, 2j]),
               "w1": 0, "w2": 0}
        got = eval_values(e, env)
        assert np.allclose(got, [1 - 1j, 1 - 4j])

    def test_admissible_mask(self):
        e = parse("z1 / w2")
        env = {"z1": np.ones(3), "z2": np.ones(3), "w1": np.ones(3),
               "w2": np.array([1.0, 0.01, 0.5])}
        mask = admissible_mask(e, env, 0.1)
        assert list(mask) == [True, False, True]

    def test_mask_all_true_without_denominators(self):
        e = parse("z1^3 + conj(w1)")
        env = {"z1": np.zeros(2), "z2": np.zeros(2), "w1": np.zeros(2),
               "w2": np.zeros(2)}
        assert admissible_mask(e, env, 0.1).all()


class TestJetHomomorphism:
    def _leaves(self, z1, z2, w1, w2, order=3):
        return {
            "z1": Jet.variable(1, z1, order),
            "z2": Jet.variable(2, z2, order),
            "w1": Jet.variable(1, w1, order),  # stand-in leaf jets
            "w2": Jet.variable(2, w2, order),
        }

    def test_value_agreement(self):
        # the constant term of the expression-jet equals plain evaluation
        e = parse("(z1 + 2*w2)^2 * conj(z2) - z1/w1")
        vals = dict(z1=0.3 + 0.1j, z2=-0.2 + 0.4j, w1=1.1 - 0.2j, w2=0.7j)
        leaves = self._leaves(**vals)
        j = eval_jet(e, leaves)
        assert j.const == pytest.approx(eval_values(e, vals))

    def test_product_of_jets_is_jet_of_product(self):
        a, b = parse("z1 + w1"), parse("z2^2 - conj(w2)")
        vals = dict(z1=0.3, z2=0.5 - 0.1j, w1=0.2j, w2=1.0 + 1.0j)
        leaves = self._leaves(**vals)
        lhs = eval_jet(a, leaves) * eval_jet(b, leaves)
        rhs = eval_jet(parse(f"({to_string(a)}) * ({to_string(b)})"), leaves)
        assert np.allclose(lhs.coeffs, rhs.coeffs, atol=1e-12)

    def test_division_by_small_leaf(self):
        e = parse("1 / w2")
        leaves = self._leaves(0, 0, 1.0, 1e-14)
        with pytest.raises(NearZeroDenominator):
            eval_jet(e, leaves)


class TestDerivatives:
    def test_chain_rule_against_jets(self):
        e = parse("z1^2 * conj(z2) + z2 / (2 + z1)")
        z1, z2 = 0.4 + 0.2j, -0.3 + 0.5j
        order = 2
        leaves = {
            "z1": Jet.variable(1, z1, order),
            "z2": Jet.variable(2, z2, order),
            "w1": Jet.constant(0.0, order),
            "w2": Jet.constant(0.0, order),
        }
        j = eval_jet(e, leaves)

        env = {"z1": np.array([z1]), "z2": np.array([z2]),
               "w1": np.array([0j]), "w2": np.array([0j])}
        denv = {
            "z1": np.array([[1], [0], [0], [0]], dtype=complex),
            "z2": np.array([[0], [1], [0], [0]], dtype=complex),
            "w1": np.zeros((4, 1), dtype=complex),
            "w2": np.zeros((4, 1), dtype=complex),
        }
        val, der = eval_derivatives(e, env, denv)
        assert val[0] == pytest.approx(j.const)
        for a, m in enumerate([(1, 0, 0, 0), (0, 1, 0, 0),
                               (0, 0, 1, 0), (0, 0, 0, 1)]):
            assert der[a][0] == pytest.approx(j.coefficient(m), abs=1e-12)

    def test_conj_rule(self):
        e = Conj(Var("z1"))
        env = {"z1": np.array([1.0 + 2.0j]), "z2": np.array([0j]),
               "w1": np.array([0j]), "w2": np.array([0j])}
        denv = {k: np.zeros((4, 1), dtype=complex) for k in env}
        denv["z1"][0] = 1.0
        val, der = eval_derivatives(e, env, denv)
        assert val[0] == pytest.approx(1.0 - 2.0j)
        assert der[2][0] == pytest.approx(1.0)  # conj moves d/dz1 to d/dzb1
        assert der[0][0] == pytest.approx(0.0)
