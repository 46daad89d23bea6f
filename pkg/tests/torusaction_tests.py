from fractions import Fraction
from unittest import TestCase

from mock import patch

from app.orbifold_ht.cli import load_scenario
from app.orbifold_ht.exceptions import (
    BadComplexStructure, InfiniteClosure, NonCommuting, NonUnimodular, NotComplexLinear, ScenarioError,
    UnknownElement,
)
from app.orbifold_ht.torusaction import (
    GeneratorSpec, ScenarioFile, ScenarioOptions, TorusAction, validate_scenario,
)


MODULE_BASE = "app.orbifold_ht"

J_CURVE = ((0, -1), (1, 0))
J_SURFACE = ((0, -1, 0, 0), (1, 0, 0, 0), (0, 0, 0, -1), (0, 0, 1, 0))


def curve(*generators, **options):
    return ScenarioFile(name="test", n=1, complex_structure=J_CURVE, generators=tuple(generators),
                        options=ScenarioOptions(**options))


def surface(*generators, **options):
    return ScenarioFile(name="test", n=2, complex_structure=J_SURFACE, generators=tuple(generators),
                        options=ScenarioOptions(**options))


class ValidateScenarioTest(TestCase):

    def test_kummer_has_two_elements(self):
        scenario = load_scenario("kummer")
        self.assertEqual(scenario.labels, ("e", "t"))
        self.assertEqual(scenario.order, 2)
        self.assertEqual(scenario.conductor, 4)
        self.assertTrue(scenario.identity.is_identity)

    def test_words_are_ordered_by_length(self):
        scenario = load_scenario("e-i-z4")
        self.assertEqual(scenario.labels, ("e", "g", "g^2", "g^3"))
        self.assertEqual(scenario.multiply("g", "g^3"), "e")
        self.assertEqual(scenario.multiply("g^2", "g^3"), "g")
        self.assertEqual(scenario.inverse("g"), "g^3")

    def test_cyclotomic_complex_structure(self):
        scenario = load_scenario("e-z3")
        self.assertEqual(scenario.labels, ("e", "g", "g^2"))
        self.assertEqual(scenario.conductor, 12)

    def test_trivial_group(self):
        scenario = load_scenario("abelian-surface")
        self.assertEqual(scenario.labels, ("e",))

    def test_unknown_element(self):
        with self.assertRaises(UnknownElement):
            load_scenario("kummer").element("s")

    def test_bad_complex_structure(self):
        raw = ScenarioFile(name="test", n=1, complex_structure=((1, 0), (0, 1)))
        with self.assertRaises(BadComplexStructure):
            validate_scenario(raw)

    def test_non_unimodular(self):
        with self.assertRaises(NonUnimodular):
            validate_scenario(curve(GeneratorSpec("a", ((2, 0), (0, 2)))))

    def test_not_complex_linear(self):
        with self.assertRaises(NotComplexLinear):
            validate_scenario(curve(GeneratorSpec("a", ((1, 1), (0, 1)))))

    def test_non_commuting(self):
        rotate_first = GeneratorSpec("a", ((0, -1, 0, 0), (1, 0, 0, 0), (0, 0, 1, 0), (0, 0, 0, 1)))
        swap = GeneratorSpec("b", ((0, 0, 1, 0), (0, 0, 0, 1), (1, 0, 0, 0), (0, 1, 0, 0)))
        with self.assertRaises(NonCommuting):
            validate_scenario(surface(rotate_first, swap))

    def test_infinite_order(self):
        shear = GeneratorSpec("a", ((1, 0, 1, 0), (0, 1, 0, 1), (0, 0, 1, 0), (0, 0, 0, 1)))
        with self.assertRaises(InfiniteClosure):
            validate_scenario(surface(shear, closure_bound=16))

    def test_declared_order_must_match(self):
        with self.assertRaises(ScenarioError):
            validate_scenario(curve(GeneratorSpec("a", ((-1, 0), (0, -1)), order=4)))

    def test_bad_options(self):
        with self.assertRaises(ScenarioError):
            ScenarioOptions(omega_sign=2)
        with self.assertRaises(ScenarioError):
            ScenarioOptions(sign_profile="lexicographic")

    @patch(f"{MODULE_BASE}.torusaction.get_logger")
    def test_logs_the_group(self, mock_logger):
        validate_scenario(curve(GeneratorSpec("a", ((-1, 0), (0, -1)))))
        message = mock_logger.return_value.info.call_args[0][0]
        self.assertIn("|G|=2", message)


class TorusActionTest(TestCase):

    def test_kummer_ages(self):
        torus = TorusAction(load_scenario("kummer"))
        self.assertEqual(torus.age("e"), 0)
        self.assertEqual(torus.age("t"), 1)
        self.assertEqual(torus.eigen_data("t").exponents, (Fraction(1, 2), Fraction(1, 2)))
        self.assertTrue(torus.is_holomorphic_symplectic())

    def test_minus_one_on_curve_is_not_symplectic(self):
        torus = TorusAction(load_scenario("e-minus-one"))
        self.assertEqual(torus.age("t"), Fraction(1, 2))
        self.assertFalse(torus.is_holomorphic_symplectic())

    def test_order_three_ages(self):
        torus = TorusAction(load_scenario("e-z3"))
        self.assertEqual({torus.age("g"), torus.age("g^2")}, {Fraction(1, 3), Fraction(2, 3)})

    def test_order_four_ages(self):
        torus = TorusAction(load_scenario("e-i-z4"))
        self.assertEqual(torus.age("g^2"), Fraction(1, 2))
        self.assertEqual(torus.age("g") + torus.age("g^3"), 1)

    def test_holomorphic_basis_is_the_plus_i_eigenspace(self):
        scenario = load_scenario("e-z3")
        torus = TorusAction(scenario)
        w = torus.holomorphic_basis()
        i = torus.imaginary_unit()
        for column in w.columns():
            self.assertEqual(scenario.complex_structure.apply(column), tuple(i * e for e in column))

    def test_restricted_action_has_finite_order(self):
        scenario = load_scenario("e-z3")
        action = TorusAction(scenario).restricted_action("g")
        self.assertEqual(action ** 3, action ** 0)
        self.assertNotEqual(action, action ** 0)

    def test_characters_multiply(self):
        scenario = load_scenario("e-i-z4")
        basis = TorusAction(scenario).joint_eigenbasis
        self.assertEqual(basis.character("g", 0) ** 2, basis.character("g^2", 0))
        self.assertEqual(basis.character("g^2", 0), -1)

    def test_joint_eigenbasis_of_trivial_group(self):
        basis = TorusAction(load_scenario("abelian-surface")).joint_eigenbasis
        self.assertEqual(basis.fixed_indices("e"), (0, 1))
        self.assertEqual(basis.normal_indices("e"), ())
