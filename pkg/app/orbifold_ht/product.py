"""
The simplified bigraded product on HT*(X;G), computed as

    pushforward_to_target . gamma_action . det_line_iso . restrict_to_double

on basis labels and extended bilinearly.

Signs come from one model: every symbol in a label word is odd. A label
(g, k, B, Q) is the word [x_B][y_Q][theta_(N_g)] with x forms, y
polyvectors and theta the directions spanning omega_g. Each step rewrites
symbols and reorders the word into its normal form; the sign of a step is
the parity of that reordering.
"""
import random
from dataclasses import dataclass
from math import comb

from app.orbifold_ht.constants import (
    DEFAULT_SAMPLE_COUNT, EXHAUSTIVE, EXHAUSTIVE_DEG2, NEW, PARENTHESIZED, SAMPLED, SYMMETRIC,
)
from app.orbifold_ht.exceptions import SectorMismatch
from app.orbifold_ht.htspace import HTBasisLabel
from app.orbifold_ht.lazy import LazyCache
from app.orbifold_ht.report import Check, VerificationReport
from app.orbifold_ht.sectors import LinearCombination
from app.orbifold_ht.utils import get_logger, permutation_sign

PAIR_TWIST = "omega_g*omega_h"
DET_TWIST = "det(E)*omega_gh"

# symbol classes, in normal-form order
_FORM, _POLY_G, _POLY_H, _TWIST = 0, 1, 2, 3


@dataclass(frozen=True, order=True)
class MiddleTermLabel:
    component: int
    forms: tuple
    polys_g: tuple
    polys_h: tuple
    excess: tuple
    marker: str = PAIR_TWIST


@dataclass(frozen=True)
class MiddleTermElement:
    """An element of the middle space on X^{g,h}."""
    g: str
    h: str
    terms: LinearCombination

    def __iter__(self):
        return iter(self.terms)

    def is_zero(self):
        return self.terms.is_zero()

    def replace(self, terms):
        return MiddleTermElement(self.g, self.h, LinearCombination(self.terms.conductor, terms))


@dataclass(frozen=True)
class GammaClass:
    """A (k,k)-class on X^{g,h}: sum of c * (antiholomorphic U) wedge (holomorphic W), |U| = |W| = k."""
    k: int
    terms: tuple = ()

    @classmethod
    def on_torus(cls, k):
        # top Chern class of a flat bundle of positive rank vanishes
        return cls(k, ((1, (), ()),) if k == 0 else ())


def _single_sector(x):
    sectors = x.sectors()
    if len(sectors) != 1:
        raise SectorMismatch(sectors)
    return sectors[0]


def _merge(first, second):
    merged = tuple(sorted(first + second))
    return merged if len(set(merged)) == len(merged) else None


class HTProduct:

    def __init__(self, space, sign_profile=None):
        self.space = space
        self.scenario = space.scenario
        self.loci = space.loci
        self.conductor = space.conductor
        self.sign_profile = sign_profile or self.scenario.options.sign_profile
        self.logger = get_logger('HTProduct')
        self._products = LazyCache(self._multiply_labels)
        self._fibers = LazyCache(self._component_fibers)

    def _component_fibers(self, key):
        pair = self.loci.pair_data(*key)
        fibers = {}
        for component in range(pair.component_group.order):
            image = (pair.component_maps["g"][component], pair.component_maps["h"][component])
            fibers.setdefault(image, []).append(component)
        return fibers

    def _normal(self, g):
        return self.loci.sector_data(g).normal_indices

    # -- the four arrows

    def restrict_to_double(self, a, b):
        """Restrict a (on X^g) and b (on X^h) to X^{g,h}; forms outside V^{g,h} restrict to zero."""
        g, h = _single_sector(a), _single_sector(b)
        pair = self.loci.pair_data(g, h)
        fixed = set(pair.fixed_indices)
        fibers = self._fibers.get((g, h))
        normal_g, normal_h = self._normal(g), self._normal(h)
        terms = []
        for la, ca in a:
            for lb, cb in b:
                if any(j not in fixed for j in la.forms + lb.forms):
                    continue
                forms = _merge(la.forms, lb.forms)
                if forms is None:
                    continue
                word = ([(_FORM, j) for j in la.forms] + [(_POLY_G, j) for j in la.polys]
                        + [(_TWIST, j, 0) for j in normal_g]
                        + [(_FORM, j) for j in lb.forms] + [(_POLY_H, j) for j in lb.polys]
                        + [(_TWIST, j, 1) for j in normal_h])
                sign = permutation_sign(word)
                for component in fibers.get((la.component, lb.component), ()):
                    label = MiddleTermLabel(component, forms, la.polys, lb.polys, pair.excess.indices, PAIR_TWIST)
                    terms.append((label, ca * cb * sign))
        return MiddleTermElement(g, h, LinearCombination(self.conductor, terms))

    def excess_sign(self, g, h, j):
        """Sign of theta^g_j theta^h_j -> e_j theta_j; +1 under the default profile."""
        if self.sign_profile == SYMMETRIC:
            return 1
        basis = self.loci.basis
        return -1 if basis.exponent(g, j) > basis.exponent(h, j) else 1

    def det_line_iso(self, m):
        """omega_g|[-c_g] (x) omega_h|[-c_h] -> wedge^r E[r] (x) omega_{g,h}[-c_{g,h}].

        Each excess pair theta^g_j theta^h_j becomes eps_j e_j theta_j in place,
        so the scalar is the product of the eps_j.
        """
        scalar = 1
        for j in self.loci.pair_data(m.g, m.h).excess.indices:
            scalar *= self.excess_sign(m.g, m.h, j)
        terms = []
        for label, coefficient in m:
            if label.marker == DET_TWIST:
                terms.append((label, coefficient))
            else:
                terms.append((MiddleTermLabel(label.component, label.forms, label.polys_g, label.polys_h,
                                              label.excess, DET_TWIST), coefficient * scalar))
        return m.replace(terms)

    def gamma_action(self, m, gamma=None):
        """Act by gamma_{g,h}; on tori this is the indicator of k = 0."""
        pair = self.loci.pair_data(m.g, m.h)
        if gamma is None:
            gamma = GammaClass.on_torus(pair.k_number)
        return self.contract(m, gamma)

    def contract(self, m, gamma):
        """Wedge the forms of gamma and contract its holomorphic part into the polyvectors.

        Each holomorphic index is contracted either against y^g or against y^h,
        which is the sum over i + j = k.
        """
        fixed = set(self.loci.pair_data(m.g, m.h).fixed_indices)
        terms = []
        for label, coefficient in m:
            for weight, antiholomorphic, holomorphic in gamma.terms:
                if any(j not in fixed for j in antiholomorphic):
                    continue
                forms = _merge(tuple(antiholomorphic), label.forms)
                if forms is None:
                    continue
                sign = permutation_sign(list(antiholomorphic) + list(label.forms))
                splits = [(1, label.polys_g, label.polys_h)]
                for w in holomorphic:
                    following = []
                    for s, polys_g, polys_h in splits:
                        if w in polys_g:
                            position = polys_g.index(w)
                            following.append((s * (-1) ** position, tuple(p for p in polys_g if p != w), polys_h))
                        if w in polys_h:
                            position = len(polys_g) + polys_h.index(w)
                            following.append((s * (-1) ** position, polys_g, tuple(p for p in polys_h if p != w)))
                    splits = following
                for s, polys_g, polys_h in splits:
                    contracted = MiddleTermLabel(label.component, forms, polys_g, polys_h, label.excess, label.marker)
                    terms.append((contracted, coefficient * weight * sign * s))
        return m.replace(terms)

    def pushforward_to_target(self, m):
        """Push along X^{g,h} in X^{gh}: theta_j normal to it become x_j, e_j and polyvectors land in V^{gh}."""
        pair = self.loci.pair_data(m.g, m.h)
        target = pair.target
        target_fixed = set(self.loci.sector_data(target).fixed_indices)
        into_target = set(pair.target_normal_indices)
        twisted = sorted(set(self._normal(m.g)) | set(self._normal(m.h)))
        to_target = pair.component_maps["gh"]
        terms = []
        for label, coefficient in m:
            if label.marker != DET_TWIST:
                raise ValueError("pushforward needs the det(E) twist, got %s" % label.marker)
            if any(j not in target_fixed for j in label.excess + label.polys_g + label.polys_h):
                continue
            polys = _merge(label.polys_g, label.polys_h)
            if polys is None:
                continue
            polys = _merge(polys, label.excess)
            if polys is None:
                continue
            excess = set(label.excess)
            word = ([(0, j) for j in label.forms] + [(1, j) for j in label.polys_g] + [(1, j) for j in label.polys_h])
            for j in twisted:
                if j in excess:
                    word.append((1, j))
                word.append((0, j) if j in into_target else (2, j))
            forms = tuple(sorted(label.forms + tuple(into_target)))
            result = HTBasisLabel(target, to_target[label.component], forms, polys)
            terms.append((result, coefficient * permutation_sign(word)))
        return self.space.combination(terms)

    # -- products

    def _multiply_labels(self, key):
        la, lb = key
        a, b = self.space.element(la), self.space.element(lb)
        return self.pushforward_to_target(self.gamma_action(self.det_line_iso(self.restrict_to_double(a, b))))

    def multiply_labels(self, la, lb):
        return self._products.get((la, lb))

    def multiply(self, a, b):
        terms = []
        for la, ca in a:
            for lb, cb in b:
                for label, c in self.multiply_labels(la, lb):
                    terms.append((label, ca * cb * c))
        return self.space.combination(terms)

    def commutativity_degree(self, label):
        return self.space.degree(label)

    # -- middle term bookkeeping

    def middle_term_table(self, g, h, p, q, p2, q2):
        """dim H^(p+p'-c_{g,h}-i)(X^{g,h}, wedge^q T_g| (x) wedge^q' T_h| (x) wedge^i E (x) omega_{g,h}), i = 0..r.

        Degrees use the parenthesized indexing.
        """
        g, h = self.scenario.element(g).label, self.scenario.element(h).label
        pair = self.loci.pair_data(g, h)
        m_pair = len(pair.fixed_indices)
        c_pair = self.scenario.n - m_pair
        m_g = self.loci.sector_data(g).fixed_dimension
        m_h = self.loci.sector_data(h).fixed_dimension
        table = {}
        for i in range(pair.r + 1):
            form_degree = p + p2 - c_pair - i
            if form_degree < 0 or q < 0 or q2 < 0:
                table[i] = 0
                continue
            table[i] = (pair.component_group.order * comb(m_pair, form_degree) * comb(m_g, q) * comb(m_h, q2)
                        * comb(pair.r, i))
        return table

    def middle_term_index(self, la, lb, result):
        """The i with result in bidegree (p+p'-i, q+q'+i), parenthesized."""
        p, q = self.space.bidegree(la, PARENTHESIZED)
        p2, q2 = self.space.bidegree(lb, PARENTHESIZED)
        p_out, q_out = self.space.bidegree(result, PARENTHESIZED)
        i = p + p2 - p_out
        return i if q_out == q + q2 + i else None

    def middle_term_consistent(self, la, lb, result):
        i = self.middle_term_index(la, lb, result)
        if i is None or i != self.loci.pair_data(la.sector, lb.sector).r:
            return False
        p, q = self.space.bidegree(la, PARENTHESIZED)
        p2, q2 = self.space.bidegree(lb, PARENTHESIZED)
        return self.middle_term_table(la.sector, lb.sector, p, q, p2, q2).get(i, 0) > 0


class RingAxiomSuite:
    """Exact ring-axiom checks over basis labels.

    Works with any product exposing ``space``, ``multiply``, ``multiply_labels``
    and ``commutativity_degree``; the middle-term check runs when the product
    has ``middle_term_consistent``.
    """

    def __init__(self, product, mode=EXHAUSTIVE, seed=1, count=DEFAULT_SAMPLE_COUNT, suite="ring-axioms",
                 commutativity_on_invariants=True):
        self.product = product
        self.space = product.space
        self.mode = mode
        self.seed = seed
        self.count = count
        self.suite = suite
        self.commutativity_on_invariants = commutativity_on_invariants
        self.logger = get_logger('RingAxiomSuite')

    def _basis(self):
        basis = self.space.basis()
        if self.mode == EXHAUSTIVE_DEG2:
            return tuple(l for l in basis if self.space.degree(l) <= 2)
        return basis

    def _invariants(self):
        invariants = self.space.invariant_basis()
        if self.mode == EXHAUSTIVE_DEG2:
            invariants = [x for x in invariants if self.space.total_degree(x) <= 2]
        return invariants

    def _triples(self, basis):
        if self.mode == SAMPLED:
            rng = random.Random(self.seed)
            return [tuple(rng.choice(basis) for _ in range(3)) for _ in range(self.count)]
        return [(a, b, c) for a in basis for b in basis for c in basis]

    def _pairs(self, basis, triples):
        if self.mode == SAMPLED:
            pairs = {(a, b) for a, b, _ in triples} | {(b, c) for _, b, c in triples}
            return sorted(pairs)
        return [(a, b) for a in basis for b in basis]

    def _fmt(self, x):
        if isinstance(x, LinearCombination):
            return self.space.format_class(x)
        return self.space.format_label(x)

    def verify(self):
        space, product = self.space, self.product
        basis = self._basis()
        triples = self._triples(basis)
        pairs = self._pairs(basis, triples)
        self.logger.info("verifying {SUITE} on {NAME}: {MODE}, {BASIS} labels, {TRIPLES} triples".format(
            SUITE=self.suite, NAME=space.scenario.name, MODE=self.mode, BASIS=len(basis), TRIPLES=len(triples)))

        associativity = Check("associativity")
        for a, b, c in triples:
            left = product.multiply(product.multiply_labels(a, b), space.element(c))
            right = product.multiply(space.element(a), product.multiply_labels(b, c))
            associativity.expect(left == right, lambda: {
                "a": self._fmt(a), "b": self._fmt(b), "c": self._fmt(c),
                "left": self._fmt(left), "right": self._fmt(right)})

        commutativity = Check("graded-commutativity")
        if self.commutativity_on_invariants:
            elements = self._invariants()
            candidates = [(x, y) for x in elements for y in elements]
            commutativity.detail["domain"] = "invariants"
        else:
            candidates = [(space.element(a), space.element(b)) for a, b in pairs]
            commutativity.detail["domain"] = "basis"
        for x, y in candidates:
            sign = (-1) ** (self._degree(x) * self._degree(y))
            xy, yx = product.multiply(x, y), product.multiply(y, x)
            commutativity.expect(xy == yx.scale(sign), lambda: {
                "a": self._fmt(x), "b": self._fmt(y), "ab": self._fmt(xy), "ba": self._fmt(yx)})

        unit = Check("unit")
        one = space.unit()
        for a in basis:
            x = space.element(a)
            unit.expect(product.multiply(one, x) == x and product.multiply(x, one) == x, lambda: {"a": self._fmt(a)})

        additivity = Check("bidegree-additivity")
        middle = Check("middle-term-consistency")
        has_middle = hasattr(product, "middle_term_consistent")
        for a, b in pairs:
            result = product.multiply_labels(a, b)
            expected = tuple(x + y for x, y in zip(space.bidegree(a, NEW), space.bidegree(b, NEW)))
            for label, _ in result:
                additivity.expect(space.bidegree(label, NEW) == expected, lambda: {
                    "a": self._fmt(a), "b": self._fmt(b), "term": self._fmt(label)})
                if has_middle:
                    middle.expect(product.middle_term_consistent(a, b, label), lambda: {
                        "a": self._fmt(a), "b": self._fmt(b), "term": self._fmt(label)})

        closure = Check("invariance-closure")
        invariants = self._invariants()
        for x in invariants:
            for y in invariants:
                xy = product.multiply(x, y)
                closure.expect(space.is_invariant(xy), lambda: {
                    "a": self._fmt(x), "b": self._fmt(y), "ab": self._fmt(xy)})

        options = dict(space.scenario.options.as_dict(), mode=self.mode)
        if getattr(product, "sign_profile", None):
            options["signConvention"] = product.sign_profile
        if hasattr(space, "omega_sign"):
            options["omegaCharacterSign"] = space.omega_sign
        if self.mode == SAMPLED:
            options.update(seed=self.seed, count=self.count)
        report = VerificationReport(scenario=space.scenario.name, suite=self.suite, options=options)
        for check in (associativity, commutativity, unit, additivity, closure):
            report.add(check.result())
        if has_middle:
            report.add(middle.result())
        return report

    def _degree(self, x):
        degrees = {self.product.commutativity_degree(l) for l, _ in x}
        if len(degrees) != 1:
            return 0
        return degrees.pop()


def verify_ring_axioms(product, mode=EXHAUSTIVE, seed=1, count=DEFAULT_SAMPLE_COUNT):
    return RingAxiomSuite(product, mode=mode, seed=seed, count=count).verify()
