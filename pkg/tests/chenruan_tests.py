from fractions import Fraction
from unittest import TestCase

from app.orbifold_ht.chenruan import (
    CRBasisLabel, CRProduct, CRSpace, compare_sides, cr_degree_table, identify_label, orbifold_hodge_table,
    verify_fg_axioms,
)
from app.orbifold_ht.cli import bundled_scenarios, load_scenario
from app.orbifold_ht.constants import EXHAUSTIVE_DEG2, ORDERED, SAMPLED
from app.orbifold_ht.exceptions import NotHolomorphicSymplectic
from app.orbifold_ht.htspace import HTBasisLabel, HTSpace
from app.orbifold_ht.product import HTProduct, verify_ring_axioms


def sides(name):
    scenario = load_scenario(name)
    ht_space = HTSpace(scenario)
    cr_space = CRSpace(scenario, ht_space.loci)
    return HTProduct(ht_space), CRProduct(cr_space)


class CRSpaceTest(TestCase):

    def test_kummer_basis(self):
        space = CRSpace(load_scenario("kummer"))
        self.assertEqual(len(space.sector_basis("e")), 16)
        self.assertEqual(len(space.sector_basis("t")), 16)
        self.assertEqual(space.bidegree(space.label("t", 3)), (1, 1))

    def test_kummer_hodge_numbers(self):
        table = orbifold_hodge_table(CRSpace(load_scenario("kummer")))
        self.assertEqual(table.title, "orbifold Hodge numbers")
        self.assertEqual(table[(1, 1)], 20)
        self.assertEqual(table.degree_vector(), (1, 0, 22, 0, 1))

    def test_half_age_points_are_invariant(self):
        space = CRSpace(load_scenario("e-minus-one"))
        table = orbifold_hodge_table(space)
        self.assertEqual(table.entries, {(0, 0): 1, (1, 1): 1, (Fraction(1, 2), Fraction(1, 2)): 4})
        self.assertEqual(cr_degree_table(space), {0: 1, 1: 4, 2: 1})

    def test_action_on_forms(self):
        space = CRSpace(load_scenario("e-i-z4"))
        u = space.element(space.label("e", 0, (0,), ()))
        v = space.element(space.label("e", 0, (), (0,)))
        self.assertEqual(space.act("g", u).coefficient(u.labels()[0]) * space.act("g", v).coefficient(v.labels()[0]),
                         1)
        self.assertFalse(space.is_invariant(u))
        self.assertTrue(space.is_invariant(space.element(space.label("e", 0, (0,), (0,)))))

    def test_format(self):
        space = CRSpace(load_scenario("kummer"))
        self.assertEqual(space.format_label(CRBasisLabel("e", 0, (0,), (0, 1))), "e:1:1|1,2")


class FGProductTest(TestCase):

    @classmethod
    def setUpClass(cls):
        _, cls.product = sides("kummer")
        cls.space = cls.product.space

    def test_twisted_point_squares_to_the_volume(self):
        x = self.space.parse_class("t:1:|")
        self.assertEqual(self.space.format_class(self.product.fg_product(x, x)), "e:1:1,2|1,2")

    def test_distinct_points_multiply_to_zero(self):
        x, y = self.space.parse_class("t:1:|"), self.space.parse_class("t:16:|")
        self.assertTrue(self.product.multiply(x, y).is_zero())

    def test_cup_product_on_the_untwisted_sector(self):
        a, b = self.space.parse_class("e:1:1|"), self.space.parse_class("e:1:|1")
        self.assertEqual(self.space.format_class(self.product.multiply(a, b)), "e:1:1|1")
        self.assertEqual(self.space.format_class(self.product.multiply(b, a)), "-1*e:1:1|1")

    def test_fg_axioms(self):
        report = verify_fg_axioms(self.product, mode=EXHAUSTIVE_DEG2)
        self.assertTrue(report.passed, report.render())
        self.assertEqual(report.suite, "fg-axioms")
        self.assertEqual(report.check("graded-commutativity").detail["domain"], "basis")

    def test_positive_k_vanishes(self):
        # exactly one of the two squares has age defect k = 1
        _, product = sides("e-z3")
        squares = [product.multiply(x, x) for x in map(product.space.parse_class, ("g:1:|", "g^2:1:|"))]
        self.assertEqual(sorted(s.is_zero() for s in squares), [False, True])


class SmallGroupFGTest(TestCase):

    def test_fg_axioms_exhaustively(self):
        for name in ("e-minus-one", "e-z3", "e-i-z4", "abelian-surface"):
            _, product = sides(name)
            report = verify_fg_axioms(product)
            self.assertTrue(report.passed, report.render())


class CompareSidesTest(TestCase):

    def test_identification(self):
        space = CRSpace(load_scenario("kummer"))
        label = identify_label(space, HTBasisLabel("e", 0, (1,), (0,)))
        self.assertEqual(label, CRBasisLabel("e", 0, (1,), (0,)))

    def test_kummer(self):
        report = compare_sides(*sides("kummer"))
        self.assertTrue(report.passed, report.render())
        self.assertEqual([c.id for c in report.checks], ["dimensions", "cr-hodge-symmetry", "structure-constants"])
        self.assertEqual(report.check("structure-constants").detail["globalScalar"], "1")

    def test_abelian_surface(self):
        report = compare_sides(*sides("abelian-surface"))
        self.assertTrue(report.passed, report.render())
        self.assertEqual(report.check("structure-constants").detail["globalScalar"], "1")

    def test_symplectic_cyclic_quotients(self):
        for name in ("e-i-squared-z4", "e-z3-squared"):
            report = compare_sides(*sides(name))
            self.assertTrue(report.passed, report.render())
            self.assertTrue(report.options["structure"])
            self.assertEqual(report.check("structure-constants").failures, 0)

    def test_ordered_profile_breaks_the_global_scalar(self):
        ht, cr = sides("e-i-squared-z4")
        ordered = HTProduct(ht.space, sign_profile=ORDERED)
        self.assertFalse(compare_sides(ordered, cr).check("structure-constants").passed)

    def test_non_symplectic_compares_dimensions_only(self):
        report = compare_sides(*sides("e-minus-one"))
        self.assertEqual([c.id for c in report.checks], ["dimensions", "cr-hodge-symmetry"])
        self.assertFalse(report.check("dimensions").passed)
        self.assertTrue(report.check("cr-hodge-symmetry").passed)
        self.assertFalse(report.options["structure"])

    def test_structure_needs_symplectic(self):
        with self.assertRaises(NotHolomorphicSymplectic):
            compare_sides(*sides("e-minus-one"), structure=True)

    def test_structure_can_be_skipped(self):
        report = compare_sides(*sides("kummer"), structure=False)
        self.assertEqual([c.id for c in report.checks], ["dimensions", "cr-hodge-symmetry"])
        self.assertTrue(report.passed)


class SymplecticQuotientTest(TestCase):

    def test_ht_ring_axioms(self):
        for name in ("e-i-squared-z4", "e-z3-squared"):
            ht, _ = sides(name)
            report = verify_ring_axioms(ht, mode=EXHAUSTIVE_DEG2)
            self.assertTrue(report.passed, report.render())

    def test_fg_ring_axioms(self):
        for name in ("e-i-squared-z4", "e-z3-squared"):
            _, cr = sides(name)
            report = verify_fg_axioms(cr, mode=SAMPLED, seed=3, count=400)
            self.assertTrue(report.passed, report.render())

    def test_fixed_point_counts(self):
        for name, g, points in (("e-i-squared-z4", "g", 4), ("e-i-squared-z4", "g^2", 16),
                                ("e-z3-squared", "g", 9), ("e-z3-squared", "g^2", 9)):
            space = CRSpace(load_scenario(name))
            self.assertEqual(len(space.sector_basis(g)), points, (name, g))
            self.assertEqual(space.torus.age(g), 1, (name, g))


class OrbifoldHodgeTableTest(TestCase):

    def test_symplectic_quotients_have_k3_numbers(self):
        for name in ("kummer", "e-i-squared-z4", "e-z3-squared"):
            space = CRSpace(load_scenario(name))
            table = orbifold_hodge_table(space)
            self.assertEqual(table.degree_vector(), (1, 0, 22, 0, 1), name)
            self.assertEqual(table[(1, 1)], 20, name)
            self.assertEqual(table[(2, 0)], 1, name)
            self.assertEqual(cr_degree_table(space), {0: 1, 2: 22, 4: 1}, name)

    def test_hodge_symmetry(self):
        for name in bundled_scenarios():
            table = orbifold_hodge_table(CRSpace(load_scenario(name)))
            for p, q in table.bidegrees():
                self.assertEqual(table[(p, q)], table[(q, p)], (name, p, q))

    def test_row_sums_match_degree_table(self):
        for name in bundled_scenarios():
            space = CRSpace(load_scenario(name))
            self.assertEqual(orbifold_hodge_table(space).totals_by_degree(), cr_degree_table(space), name)
