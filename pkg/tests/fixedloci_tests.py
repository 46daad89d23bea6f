from fractions import Fraction
from unittest import TestCase

from hypothesis import given, settings, strategies as st
from sympy import Matrix, eye

from app.orbifold_ht.cli import load_scenario
from app.orbifold_ht.exactfield import RatMatrix, inverse
from app.orbifold_ht.exceptions import NonCommuting, NotASubgroupRelation
from app.orbifold_ht.fixedloci import (
    FixedLoci, averaging_map, averaging_split_check, brute_force_fixed_points, operator_order,
    quotient_decomposition, tangent_complex_cohomology,
)


BUNDLED = ("kummer", "e-minus-one", "e-z3", "e-i-z4", "elliptic-curve", "abelian-surface", "e-i-squared-z4",
           "e-z3-squared")

# finite-order blocks: trivial, sign, rotation by i, rotation by a cube root of unity
BLOCKS = (((1,),), ((-1,),), ((0, -1), (1, 0)), ((0, -1), (1, -1)))
BLOCK_ORDERS = (1, 2, 4, 3)


def _block_diagonal(blocks):
    size = sum(len(b) for b in blocks)
    rows = [[0] * size for _ in range(size)]
    offset = 0
    for block in blocks:
        for i, row in enumerate(block):
            for j, e in enumerate(row):
                rows[offset + i][offset + j] = e
        offset += len(block)
    return rows


def _power(block, exponent):
    m = Matrix(block) ** exponent
    return tuple(tuple(int(e) for e in m.row(i)) for i in range(m.rows))


@st.composite
def commuting_pairs(draw):
    """Commuting finite-order rational operators g, h of dimension <= 6, conjugated by a unipotent matrix."""
    chosen, size = [], 0
    while size < 6:
        index = draw(st.integers(min_value=0, max_value=len(BLOCKS) - 1))
        if size + len(BLOCKS[index]) > 6:
            break
        chosen.append(index)
        size += len(BLOCKS[index])
        if not draw(st.booleans()):
            break
    g_blocks, h_blocks = [], []
    for index in chosen:
        order = BLOCK_ORDERS[index]
        g_blocks.append(_power(BLOCKS[index], draw(st.integers(min_value=0, max_value=order - 1))))
        h_blocks.append(_power(BLOCKS[index], draw(st.integers(min_value=0, max_value=order - 1))))
    conjugator = [[1 if i == j else (draw(st.integers(min_value=-2, max_value=2)) if j > i else 0)
                   for j in range(size)] for i in range(size)]
    return _block_diagonal(g_blocks), _block_diagonal(h_blocks), conjugator


def _oracle(g_rows, h_rows):
    """(dim V^g, dim V^h, dim V^g cap V^h, r) by sympy ranks."""
    g, h = Matrix(g_rows), Matrix(h_rows)
    d = g.rows
    fixed_g, fixed_h = (g - eye(d)).nullspace(), (h - eye(d)).nullspace()
    both = Matrix.vstack(g - eye(d), h - eye(d)).nullspace()
    spanning = fixed_g + fixed_h
    sum_dim = Matrix.hstack(*spanning).rank() if spanning else 0
    return len(fixed_g), len(fixed_h), len(both), d - sum_dim


def _conjugate(rows, conjugator):
    p = RatMatrix(conjugator)
    return p * RatMatrix(rows) * inverse(p)


class ComponentGroupTest(TestCase):

    def test_fixed_point_counts(self):
        cases = (("kummer", "t", 16), ("e-minus-one", "t", 4), ("e-z3", "g", 3), ("e-i-z4", "g", 2))
        for name, g, expected in cases:
            loci = FixedLoci(load_scenario(name))
            self.assertEqual(loci.component_group([g]).order, expected, name)

    def test_fixed_point_counts_match_enumeration(self):
        cases = (("kummer", "t", 2), ("e-minus-one", "t", 2), ("e-z3", "g", 3), ("e-i-z4", "g", 2),
                 ("e-i-z4", "g^2", 2))
        for name, g, denominator in cases:
            scenario = load_scenario(name)
            loci = FixedLoci(scenario)
            self.assertEqual(len(brute_force_fixed_points(scenario, [g], denominator)),
                             loci.component_group([g]).order, name)

    def test_kummer_invariant_factors(self):
        group = FixedLoci(load_scenario("kummer")).component_group(["t"])
        self.assertEqual(group.invariant_factors, (2, 2, 2, 2))

    def test_positive_dimensional_locus_is_connected(self):
        loci = FixedLoci(load_scenario("abelian-surface"))
        self.assertEqual(loci.component_group(["e"]).order, 1)

    def test_representatives_are_distinct_components(self):
        group = FixedLoci(load_scenario("e-i-z4")).component_group(["g^2"])
        indices = [group.index_of(x) for x in group.representatives]
        self.assertEqual(indices, list(range(group.order)))

    def test_component_action_on_own_fixed_points_is_trivial(self):
        loci = FixedLoci(load_scenario("kummer"))
        self.assertEqual(loci.component_action("t", ["t"]), tuple(range(16)))

    def test_component_action_permutes(self):
        loci = FixedLoci(load_scenario("e-i-z4"))
        permutation = loci.component_action("g", ["g^2"])
        self.assertEqual(sorted(permutation), [0, 1, 2, 3])
        self.assertEqual(sum(1 for i, j in enumerate(permutation) if i == j), 2)

    def test_component_map_needs_subgroup(self):
        loci = FixedLoci(load_scenario("e-i-z4"))
        with self.assertRaises(NotASubgroupRelation):
            loci.component_map(["g^2"], ["g"])
        self.assertEqual(len(loci.component_map(["g"], ["g^2"])), 2)


class SectorDataTest(TestCase):

    def test_kummer_twisted_sector(self):
        data = FixedLoci(load_scenario("kummer")).sector_data("t")
        self.assertEqual(data.codimension, 2)
        self.assertEqual(data.age, 1)
        self.assertEqual(data.fixed_indices, ())
        self.assertEqual(data.omega_character["t"], 1)

    def test_omega_character_of_half_age(self):
        data = FixedLoci(load_scenario("e-minus-one")).sector_data("t")
        self.assertEqual(data.omega_character["t"], -1)
        self.assertEqual(data.omega_character["e"], 1)

    def test_kummer_pair(self):
        pair = FixedLoci(load_scenario("kummer")).pair_data("t", "t")
        self.assertEqual(pair.target, "e")
        self.assertEqual(pair.excess.indices, (0, 1))
        self.assertEqual(pair.target_normal_indices, (0, 1))
        self.assertEqual(pair.k_number, 0)
        self.assertEqual(pair.component_group.order, 16)

    def test_inverse_pair_on_curve(self):
        pair = FixedLoci(load_scenario("e-i-z4")).pair_data("g", "g^3")
        self.assertEqual(pair.target, "e")
        self.assertEqual(pair.r, 1)
        self.assertEqual(pair.codimension_in_target, 1)
        self.assertEqual(pair.k_number, 0)

    def test_fixed_subspace(self):
        loci = FixedLoci(load_scenario("abelian-surface"))
        self.assertEqual(len(loci.fixed_subspace(["e"])), 2)
        self.assertEqual(FixedLoci(load_scenario("kummer")).fixed_subspace(["t"]), ())

    def test_excess_bundle_of_kummer_square(self):
        loci = FixedLoci(load_scenario("kummer"))
        excess = loci.excess_bundle("t", "t")
        self.assertEqual(excess.indices, (0, 1))
        self.assertEqual(excess.basis, loci.basis.vectors[:2])
        self.assertEqual(loci.excess_bundle("e", "t").indices, ())

    def test_untwisted_pair_has_no_excess(self):
        pair = FixedLoci(load_scenario("abelian-surface")).pair_data("e", "e")
        self.assertEqual(pair.r, 0)
        self.assertEqual(pair.fixed_indices, (0, 1))


class LemmaTest(TestCase):

    def test_lemma_suite_on_bundled_scenarios(self):
        for name in BUNDLED:
            report = FixedLoci(load_scenario(name)).verify_lemmas()
            self.assertTrue(report.passed, name)
            self.assertEqual([c.id for c in report.checks],
                             ["quotient-decomposition", "averaging-split", "tangent-complex"])

    def test_averaging_map_is_a_projection(self):
        g = RatMatrix([[0, -1], [1, -1]])
        avg = averaging_map(g)
        self.assertEqual(avg * avg, avg)
        self.assertTrue(avg.is_zero())
        self.assertEqual(operator_order(g), 3)

    def test_non_commuting_operators_are_rejected(self):
        g = RatMatrix([[0, 1], [1, 0]])
        h = RatMatrix([[-1, 0], [0, 1]])
        with self.assertRaises(NonCommuting):
            quotient_decomposition(g, h)

    def test_quotient_of_kummer_involution(self):
        minus = RatMatrix([[-1, 0], [0, -1]])
        outcome = quotient_decomposition(minus, minus)
        self.assertTrue(outcome.passed)
        self.assertEqual(outcome.dim_quotient, 2)
        self.assertEqual(outcome.excess_rank, 2)

    @given(commuting_pairs())
    @settings(max_examples=100, deadline=None)
    def test_random_commuting_representations(self, pair):
        g_rows, h_rows, conjugator = pair
        dim_g, dim_h, dim_both, r = _oracle(g_rows, h_rows)
        g, h = _conjugate(g_rows, conjugator), _conjugate(h_rows, conjugator)

        quotient = quotient_decomposition(g, h)
        self.assertTrue(quotient.passed, quotient.witness())
        self.assertEqual(quotient.dim_quotient, dim_g + dim_h + r)

        split = averaging_split_check(g, h)
        self.assertTrue(split.passed, split.witness())

        tangent = tangent_complex_cohomology(g, h)
        self.assertEqual((tangent.h0, tangent.h1, tangent.h2), (dim_both, dim_g + dim_h + r, 0))

    def test_fractional_entries(self):
        g = RatMatrix([[Fraction(1, 2), Fraction(-5, 4)], [1, Fraction(-1, 2)]])
        self.assertEqual(operator_order(g), 4)
        self.assertTrue(tangent_complex_cohomology(g, g).passed)
