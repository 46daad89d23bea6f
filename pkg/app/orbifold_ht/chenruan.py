"""
Chen-Ruan orbifold cohomology of the same scenarios, with the
Fantechi-Goettsche product, and the comparison against the polyvector side.

A label (g, k, H, B) is the class u_H v_B on component k of X^g, with u
holomorphic and v antiholomorphic covectors of the joint eigenbasis. The
G-action carries no twist character on twisted sectors.
"""
from dataclasses import dataclass

from app.orbifold_ht.constants import DEFAULT_SAMPLE_COUNT, EXHAUSTIVE, NEW
from app.orbifold_ht.exactfield import CycScalar
from app.orbifold_ht.exceptions import NotHolomorphicSymplectic
from app.orbifold_ht.lazy import LazyCache
from app.orbifold_ht.product import RingAxiomSuite
from app.orbifold_ht.report import Check, VerificationReport
from app.orbifold_ht.sectors import LinearCombination, SectorSpace
from app.orbifold_ht.utils import get_logger, permutation_sign

_HOLOMORPHIC, _ANTIHOLOMORPHIC = 0, 1


@dataclass(frozen=True, order=True)
class CRBasisLabel:
    """u_H v_B on component k of X^g, in H^(|H|+|B|)(X^g) shifted by 2 age(g)."""
    sector: str
    component: int
    holomorphic: tuple = ()
    antiholomorphic: tuple = ()


class CRClass(LinearCombination):
    __slots__ = ()


class CRSpace(SectorSpace):

    class_type = CRClass
    label_type = CRBasisLabel
    name = "CR"

    def sector_basis_for(self, g):
        indices, components = self._fixed_subsets(g)
        return tuple(CRBasisLabel(g, k, holomorphic, antiholomorphic)
                     for k in range(components) for holomorphic in indices for antiholomorphic in indices)

    def label_parts(self, label):
        return label.sector, label.component, label.holomorphic, label.antiholomorphic

    def label(self, sector, component, holomorphic=(), antiholomorphic=()):
        return self.make_label(self.scenario.element(sector).label, component, holomorphic, antiholomorphic)

    def bidegree(self, label, convention=NEW):
        # the orbifold Hodge bidegree; both conventions coincide on this side
        age = self.loci.sector_data(label.sector).age
        return len(label.holomorphic) + age, len(label.antiholomorphic) + age

    def degree(self, label):
        p, q = self.bidegree(label)
        return p + q

    def scalar_exponent(self, h, label):
        basis = self.loci.basis
        weight = lambda j: int(basis.exponent(h, j) * self.conductor)
        return sum(weight(j) for j in label.antiholomorphic) - sum(weight(j) for j in label.holomorphic)

    def group_action(self, h, x):
        return self.act(h, x)


class CRProduct:
    """The Fantechi-Goettsche product: restrict, cup, multiply by gamma, push forward."""

    def __init__(self, space):
        self.space = space
        self.scenario = space.scenario
        self.loci = space.loci
        self.conductor = space.conductor
        self.logger = get_logger('CRProduct')
        self._products = LazyCache(self._multiply_labels)
        self._fibers = LazyCache(self._component_fibers)

    def _component_fibers(self, key):
        pair = self.loci.pair_data(*key)
        fibers = {}
        for component in range(pair.component_group.order):
            image = (pair.component_maps["g"][component], pair.component_maps["h"][component])
            fibers.setdefault(image, []).append(component)
        return fibers

    def _multiply_labels(self, key):
        la, lb = key
        pair = self.loci.pair_data(la.sector, lb.sector)
        if pair.k_number:
            # gamma is the top Chern class of a flat bundle of positive rank
            return self.space.zero()
        fixed = set(pair.fixed_indices)
        if any(j not in fixed for j in la.holomorphic + la.antiholomorphic + lb.holomorphic + lb.antiholomorphic):
            return self.space.zero()
        word = ([(_HOLOMORPHIC, j) for j in la.holomorphic] + [(_ANTIHOLOMORPHIC, j) for j in la.antiholomorphic]
                + [(_HOLOMORPHIC, j) for j in lb.holomorphic] + [(_ANTIHOLOMORPHIC, j) for j in lb.antiholomorphic])
        if len(set(word)) != len(word):
            return self.space.zero()
        # Poincare dual of X^{g,h} inside X^{gh}
        normal = pair.target_normal_indices
        word += [(_HOLOMORPHIC, j) for j in normal] + [(_ANTIHOLOMORPHIC, j) for j in normal]
        sign = permutation_sign(word)
        holomorphic = sorted(j for kind, j in word if kind == _HOLOMORPHIC)
        antiholomorphic = sorted(j for kind, j in word if kind == _ANTIHOLOMORPHIC)
        terms = []
        to_target = pair.component_maps["gh"]
        for component in self._fibers.get((la.sector, lb.sector)).get((la.component, lb.component), ()):
            label = self.space.make_label(pair.target, to_target[component], holomorphic, antiholomorphic)
            terms.append((label, sign))
        return self.space.combination(terms)

    def multiply_labels(self, la, lb):
        return self._products.get((la, lb))

    def multiply(self, a, b):
        terms = []
        for la, ca in a:
            for lb, cb in b:
                for label, c in self.multiply_labels(la, lb):
                    terms.append((label, ca * cb * c))
        return self.space.combination(terms)

    fg_product = multiply

    def commutativity_degree(self, label):
        return len(label.holomorphic) + len(label.antiholomorphic)


def orbifold_hodge_table(space, invariant=True):
    return space.dimension_table(NEW, invariant=invariant, title="orbifold Hodge numbers")


def cr_degree_table(space):
    return space.degree_table()


def verify_fg_axioms(product, mode=EXHAUSTIVE, seed=1, count=DEFAULT_SAMPLE_COUNT):
    return RingAxiomSuite(product, mode=mode, seed=seed, count=count, suite="fg-axioms",
                          commutativity_on_invariants=False).verify()


def identify_label(cr_space, label):
    """HT (g, k, B, Q) -> CR (g, k, H = B, B = Q), through Omega = T from the symplectic form."""
    return cr_space.make_label(label.sector, label.component, label.forms, label.polys)


def _transport(cr_space, x):
    return cr_space.combination([(identify_label(cr_space, label), c) for label, c in x])


def _ratio(ht_side, cr_side):
    """The scalar s with ht_side == s * cr_side, or None."""
    if ht_side.is_zero() or cr_side.is_zero():
        return CycScalar.one(cr_side.conductor) if ht_side.is_zero() and cr_side.is_zero() else None
    label, value = cr_side.terms[0]
    scalar = ht_side.coefficient(label) / value
    return scalar if ht_side == cr_side.scale(scalar) else None


def compare_sides(ht_product, cr_product, structure=None):
    """Compare bigraded dimensions and, for holomorphic symplectic scenarios, structure constants.

    Products with an untwisted factor must agree exactly; twisted by twisted
    products must agree up to one global scalar, reported in the detail.
    """
    logger = get_logger('CompareSides')
    ht_space, cr_space = ht_product.space, cr_product.space
    scenario = ht_space.scenario
    torus = ht_space.torus
    symplectic = torus.is_holomorphic_symplectic()
    if structure is None:
        structure = symplectic
    elif structure and not symplectic:
        offending = next(g for g in scenario.labels if torus.age(g).denominator != 1)
        raise NotHolomorphicSymplectic(offending)

    report = VerificationReport(scenario=scenario.name, suite="compare",
                                options=dict(scenario.options.as_dict(), structure=bool(structure)))
    ht_table = ht_space.dimension_table(NEW)
    cr_table = orbifold_hodge_table(cr_space)

    dimensions = Check("dimensions")
    for bidegree in sorted(set(ht_table.bidegrees()) | set(cr_table.bidegrees())):
        dimensions.expect(ht_table[bidegree] == cr_table[bidegree], lambda: {
            "p": str(bidegree[0]), "q": str(bidegree[1]),
            "ht": ht_table[bidegree], "cr": cr_table[bidegree]})
    report.add(dimensions.result())

    symmetry = Check("cr-hodge-symmetry")
    for p, q in cr_table.bidegrees():
        symmetry.expect(cr_table[(p, q)] == cr_table[(q, p)], lambda: {
            "p": str(p), "q": str(q), "pq": cr_table[(p, q)], "qp": cr_table[(q, p)]})
    report.add(symmetry.result())

    if not structure:
        logger.info("{NAME}: dimensions only".format(NAME=scenario.name))
        return report

    constants = Check("structure-constants")
    global_scalar = None
    basis = ht_space.basis()
    for la in basis:
        for lb in basis:
            ht_side = _transport(cr_space, ht_product.multiply_labels(la, lb))
            cr_side = cr_product.multiply_labels(identify_label(cr_space, la), identify_label(cr_space, lb))
            witness = lambda: {"a": ht_space.format_label(la), "b": ht_space.format_label(lb),
                               "ht": cr_space.format_class(ht_side), "cr": cr_space.format_class(cr_side)}
            scalar = _ratio(ht_side, cr_side)
            if scalar is None or ht_side.is_zero():
                constants.expect(scalar is not None, witness)
                continue
            twisted = not (scenario.element(la.sector).is_identity or scenario.element(lb.sector).is_identity)
            if not twisted:
                constants.expect(scalar == 1, witness)
                continue
            if global_scalar is None:
                global_scalar = scalar
            constants.expect(scalar == global_scalar, witness)
    constants.detail["globalScalar"] = str(global_scalar if global_scalar is not None else 1)
    report.add(constants.result())
    logger.info("{NAME}: structure constants compared, global scalar {S}".format(
        NAME=scenario.name, S=constants.detail["globalScalar"]))
    return report
