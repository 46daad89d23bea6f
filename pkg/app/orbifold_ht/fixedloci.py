"""
Fixed loci of a torus orbifold and the linear algebra behind them.

Fixed subspaces, excess directions and characters are read off the joint
eigenbasis. Component groups are lattice computations: for a set S of
elements, L_S = {x : (s - 1) x in Lambda for all s in S} and
pi_0(X^S) = L_S / (Lambda + L_S cap (Lambda (x) Q)^S).
"""
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product as cartesian

from app.orbifold_ht.constants import DEFAULT_CLOSURE_BOUND, FAIL, PASS
from app.orbifold_ht.exactfield import (
    CycScalar, IntMatrix, RatMatrix, hermite_solve_congruence, kernel_basis, left_kernel_basis, one_like, rank,
    solve,
)
from app.orbifold_ht.exceptions import InfiniteClosure, NegativeK, NonCommuting, NotASubgroupRelation
from app.orbifold_ht.lazy import LazyCache, LazyTable
from app.orbifold_ht.report import Check, VerificationReport
from app.orbifold_ht.torusaction import TorusAction
from app.orbifold_ht.utils import get_logger


@dataclass(frozen=True)
class ComponentGroup:
    """pi_0(X^S) with its Smith-form coset representatives.

    Components are numbered by the lexicographic order of their coordinates
    (c_1, ..., c_rho) with 0 <= c_i < d_i.
    """
    elements: tuple
    lattice: object
    factors: tuple
    representatives: tuple

    @property
    def invariant_factors(self):
        return tuple(d for d in self.factors if d > 1)

    @property
    def order(self):
        return len(self.representatives)

    def index_of(self, vector):
        coordinates = self.lattice.coordinates(vector)
        index = 0
        for y, d in zip(coordinates, self.factors):
            scaled = Fraction(y) * d
            if scaled.denominator != 1:
                raise ValueError("%s does not lie in the congruence lattice" % (vector,))
            index = index * d + int(scaled) % d
        return index


@dataclass(frozen=True)
class ExcessBundle:
    indices: tuple
    basis: tuple

    @property
    def rank(self):
        return len(self.indices)


@dataclass(frozen=True)
class SectorData:
    element: str
    fixed_indices: tuple
    normal_indices: tuple
    fixed_basis: tuple
    codimension: int
    age: Fraction
    component_group: ComponentGroup
    omega_character: dict = field(repr=False)

    @property
    def fixed_dimension(self):
        return len(self.fixed_indices)


@dataclass(frozen=True)
class PairData:
    g: str
    h: str
    target: str
    fixed_indices: tuple
    fixed_basis: tuple
    excess: ExcessBundle
    target_normal_indices: tuple
    k_number: int
    component_group: ComponentGroup
    component_maps: dict = field(repr=False)
    averaging: dict = field(repr=False)

    @property
    def r(self):
        return self.excess.rank

    @property
    def codimension_in_target(self):
        return len(self.target_normal_indices)


class FixedLoci:

    def __init__(self, scenario, torus=None):
        self.scenario = scenario
        self.torus = torus or TorusAction(scenario)
        self.logger = get_logger('FixedLoci')
        self._groups = LazyCache(self._component_group)
        self._sectors = LazyTable(scenario.labels, self._sector_data)
        self._pairs = LazyCache(self._pair_data)

    def _key(self, elements):
        labels = {self.scenario.element(g).label for g in elements}
        return tuple(l for l in self.scenario.labels if l in labels)

    @property
    def basis(self):
        return self.torus.joint_eigenbasis

    def fixed_indices(self, elements):
        return self.basis.fixed_indices(*self._key(elements))

    def fixed_subspace(self, elements):
        """Basis of V^S, in lattice coordinates."""
        return tuple(self.basis.vectors[j] for j in self.fixed_indices(elements))

    def component_group(self, elements):
        return self._groups.get(self._key(elements))

    def _component_group(self, key):
        size = self.scenario.lattice_rank
        identity = IntMatrix.identity(size)
        stacked = IntMatrix.vstack([self.scenario.element(s).matrix - identity for s in key] or [IntMatrix.zeros(1, size)])
        lattice = hermite_solve_congruence(IntMatrix.from_rat(stacked))
        factors = lattice.diagonal
        columns = [lattice.transform.column(i) for i in range(len(factors))]
        representatives = []
        for coordinates in cartesian(*[range(d) for d in factors]):
            point = [Fraction(0)] * size
            for c, d, column in zip(coordinates, factors, columns):
                if c:
                    point = [p + Fraction(c, d) * e for p, e in zip(point, column)]
            representatives.append(tuple(point))
        group = ComponentGroup(elements=key, lattice=lattice, factors=factors, representatives=tuple(representatives))
        self.logger.info("pi_0 of X^{{{KEY}}}: order {ORDER}, invariant factors {FACTORS}".format(
            KEY=",".join(key), ORDER=group.order, FACTORS=list(group.invariant_factors)))
        return group

    def component_map(self, source, target):
        """pi_0(X^source) -> pi_0(X^target), induced by L_source inside L_target."""
        source, target = self._key(source), self._key(target)
        generated = self.scenario.subgroup(source)
        if any(t not in generated for t in target):
            raise NotASubgroupRelation(source, target)
        image = self.component_group(target)
        return tuple(image.index_of(x) for x in self.component_group(source).representatives)

    def component_action(self, h, elements):
        """Permutation of pi_0(X^S) induced by x -> h x."""
        group = self.component_group(elements)
        matrix = self.scenario.element(h).matrix
        return tuple(group.index_of(matrix.apply(x)) for x in group.representatives)

    def excess_bundle(self, g, h):
        """Lift of a basis of V / (V^g + V^h): the eigenvectors moved by both g and h."""
        g, h = self.scenario.element(g).label, self.scenario.element(h).label
        moved_by_h = set(self.basis.normal_indices(h))
        indices = tuple(j for j in self.basis.normal_indices(g) if j in moved_by_h)
        return ExcessBundle(indices=indices, basis=tuple(self.basis.vectors[j] for j in indices))

    def averaging_projection(self, g):
        return averaging_map(self.torus.restricted_action(g))

    def sector_data(self, g):
        return self._sectors[self.scenario.element(g).label]

    def _sector_data(self, label):
        fixed = self.basis.fixed_indices(label)
        normal = self.basis.normal_indices(label)
        # det(h on V/V^g)
        characters = {}
        for h in self.scenario.labels:
            value = CycScalar.one(self.scenario.conductor)
            for j in normal:
                value = value * self.basis.character(h, j)
            characters[h] = value
        return SectorData(element=label, fixed_indices=fixed, normal_indices=normal,
                          fixed_basis=tuple(self.basis.vectors[j] for j in fixed),
                          codimension=len(normal), age=self.torus.age(label),
                          component_group=self.component_group([label]), omega_character=characters)

    def pair_data(self, g, h):
        return self._pairs.get((self.scenario.element(g).label, self.scenario.element(h).label))

    def _pair_data(self, key):
        g, h = key
        target = self.scenario.multiply(g, h)
        fixed = self.basis.fixed_indices(g, h)
        target_fixed = self.basis.fixed_indices(target)
        normal_in_target = tuple(j for j in target_fixed if j not in fixed)
        k = self.torus.age(g) + self.torus.age(h) - self.torus.age(target) - len(normal_in_target)
        if k < 0 or k.denominator != 1:
            raise NegativeK(g, h, k)
        if k:
            self.logger.info("pair ({G}, {H}) has k = {K}".format(G=g, H=h, K=k))
        pair = [g, h]
        maps = {
            "g": self.component_map(pair, [g]),
            "h": self.component_map(pair, [h]),
            "gh": self.component_map(pair, [target]),
        }
        return PairData(g=g, h=h, target=target, fixed_indices=fixed,
                        fixed_basis=tuple(self.basis.vectors[j] for j in fixed),
                        excess=self.excess_bundle(g, h), target_normal_indices=normal_in_target,
                        k_number=int(k), component_group=self.component_group(pair), component_maps=maps,
                        averaging={"g": self.averaging_projection(g), "h": self.averaging_projection(h),
                                   "gh": self.averaging_projection(target)})

    def verify_lemmas(self):
        """Quotient, splitting and tangent-complex statements on every pair of elements."""
        report = VerificationReport(scenario=self.scenario.name, suite="lemmas",
                                    options=self.scenario.options.as_dict())
        checks = [Check("quotient-decomposition"), Check("averaging-split"), Check("tangent-complex")]
        for g in self.scenario.labels:
            for h in self.scenario.labels:
                a, b = self.torus.restricted_action(g), self.torus.restricted_action(h)
                outcomes = (quotient_decomposition(a, b), averaging_split_check(a, b),
                            tangent_complex_cohomology(a, b))
                for check, outcome in zip(checks, outcomes):
                    check.count()
                    if not outcome.passed:
                        check.fail(dict(outcome.witness(), g=g, h=h))
        for check in checks:
            report.add(check.result())
        self.logger.info("lemma suite on {NAME}: {STATUS}".format(
            NAME=self.scenario.name, STATUS=PASS if report.passed else FAIL))
        return report


def brute_force_fixed_points(scenario, elements, denominator):
    """Points of (1/D)Lambda / Lambda fixed by every element; the oracle for 0-dimensional loci."""
    size = scenario.lattice_rank
    identity = IntMatrix.identity(size)
    maps = [scenario.element(s).matrix - identity for s in elements]
    points = []
    for numerators in cartesian(range(denominator), repeat=size):
        x = tuple(Fraction(a, denominator) for a in numerators)
        if all(Fraction(e).denominator == 1 for m in maps for e in m.apply(x)):
            points.append(x)
    return points


# ---------------------------------------------------------------------------
# linear statements on a pair of commuting finite-order operators

def _require_commuting(g, h):
    if g * h != h * g:
        raise NonCommuting("g", "h")


def operator_order(g, bound=DEFAULT_CLOSURE_BOUND):
    identity = RatMatrix.identity(g.nrows, one_like(g))
    power = g
    for order in range(1, bound + 1):
        if power == identity:
            return order
        power = power * g
    raise InfiniteClosure(bound, generator="g")


def averaging_map(g):
    """v -> (1/ord g) sum g^i v, the projection onto V^g."""
    order = operator_order(g)
    total = RatMatrix.identity(g.nrows, one_like(g))
    power = total
    for _ in range(order - 1):
        power = power * g
        total = total + power
    return total * Fraction(1, order)


def _weighted_average(g):
    order = operator_order(g)
    total = RatMatrix.zeros(g.nrows, g.ncols)
    power = RatMatrix.identity(g.nrows, one_like(g))
    for i in range(1, order):
        power = power * g
        total = total + power * i
    return total * Fraction(1, order)


def _quotient_map(columns, size):
    """Rows of a surjection V -> V / span(columns)."""
    spanning = RatMatrix.from_columns(columns, nrows=size)
    rows = left_kernel_basis(spanning)
    return RatMatrix(rows, ncols=size)


def _fixed_basis(g):
    return kernel_basis(g - RatMatrix.identity(g.nrows, one_like(g)))


@dataclass(frozen=True)
class QuotientDecomposition:
    dim_quotient: int
    dim_fixed_g: int
    dim_fixed_h: int
    excess_rank: int
    isomorphism: RatMatrix
    kills_relations: bool

    @property
    def expected(self):
        return self.dim_fixed_g + self.dim_fixed_h + self.excess_rank

    @property
    def passed(self):
        return (self.kills_relations and self.dim_quotient == self.expected
                and rank(self.isomorphism) == self.expected)

    def witness(self):
        return {"dimQuotient": self.dim_quotient, "expected": self.expected,
                "killsRelations": self.kills_relations}


def quotient_decomposition(g, h):
    """V^4 modulo (v,v,v,v), (v,gv,0,0), (0,0,v,hv), mapped onto V^g + V^h + V/(V^g + V^h)."""
    _require_commuting(g, h)
    d = g.nrows
    one = one_like(g)
    identity = RatMatrix.identity(d, one)
    zero = RatMatrix.zeros(d, d)
    relations = RatMatrix.vstack([
        RatMatrix.hstack([identity, identity, zero]),
        RatMatrix.hstack([identity, g, zero]),
        RatMatrix.hstack([identity, zero, identity]),
        RatMatrix.hstack([identity, zero, h]),
    ])
    dim_quotient = 4 * d - rank(relations)

    fixed_g, fixed_h = _fixed_basis(g), _fixed_basis(h)
    quotient = _quotient_map(list(fixed_g) + list(fixed_h), d)
    avg_g, avg_h = averaging_map(g), averaging_map(h)
    t_g, t_h = _weighted_average(g), _weighted_average(h)
    blocks = [
        RatMatrix.hstack([avg_g, -avg_g, zero, zero]),
        RatMatrix.hstack([zero, zero, avg_h, -avg_h]),
    ]
    if quotient.nrows:
        blocks.append(RatMatrix.hstack([quotient * t_g * g, -(quotient * t_g), -(quotient * t_h * h), quotient * t_h]))
    isomorphism = RatMatrix.vstack(blocks)
    return QuotientDecomposition(dim_quotient=dim_quotient, dim_fixed_g=len(fixed_g), dim_fixed_h=len(fixed_h),
                                 excess_rank=quotient.nrows, isomorphism=isomorphism,
                                 kills_relations=(isomorphism * relations).is_zero())


@dataclass(frozen=True)
class AveragingSplit:
    splitting: RatMatrix
    well_defined: bool
    idempotent: bool
    identity_on_sub: bool
    expected_rank: int

    @property
    def passed(self):
        return (self.well_defined and self.idempotent and self.identity_on_sub
                and rank(self.splitting) == self.expected_rank)

    def witness(self):
        return {"wellDefined": self.well_defined, "idempotent": self.idempotent,
                "identityOnSub": self.identity_on_sub, "expectedRank": self.expected_rank}


def averaging_split_check(g, h):
    """avg_h splits 0 -> V^h/(V^g cap V^h) -> V/V^g -> V/(V^g + V^h) -> 0.

    The returned matrix is avg_h acting on V/V^g; it is an idempotent
    whose image is the sub-term, on which it is the identity.
    """
    _require_commuting(g, h)
    d = g.nrows
    fixed_g, fixed_h = _fixed_basis(g), _fixed_basis(h)
    quotient = _quotient_map(fixed_g, d)
    avg_h = averaging_map(h)
    one = one_like(g)
    section_columns = []
    for i in range(quotient.nrows):
        section_columns.append(solve(quotient, [one if k == i else one * 0 for k in range(quotient.nrows)]))
    section = RatMatrix.from_columns(section_columns, nrows=d)
    splitting = quotient * avg_h * section if quotient.nrows else RatMatrix.zeros(0, 0)

    if fixed_g and quotient.nrows:
        well_defined = (quotient * avg_h * RatMatrix.from_columns(fixed_g, nrows=d)).is_zero()
    else:
        well_defined = True
    idempotent = splitting * splitting == splitting
    if fixed_h and quotient.nrows:
        images = quotient * RatMatrix.from_columns(fixed_h, nrows=d)
        identity_on_sub = splitting * images == images
    else:
        identity_on_sub = True
    both = kernel_basis(RatMatrix.vstack([g - RatMatrix.identity(d, one_like(g)), h - RatMatrix.identity(d, one_like(g))]))
    return AveragingSplit(splitting=splitting, well_defined=well_defined, idempotent=idempotent,
                          identity_on_sub=identity_on_sub, expected_rank=len(fixed_h) - len(both))


@dataclass(frozen=True)
class TangentCohomology:
    h0: int
    h1: int
    h2: int
    dim_fixed_pair: int
    expected_h1: int

    @property
    def passed(self):
        return self.h0 == self.dim_fixed_pair and self.h1 == self.expected_h1 and self.h2 == 0

    def witness(self):
        return {"h0": self.h0, "h1": self.h1, "h2": self.h2,
                "expectedH0": self.dim_fixed_pair, "expectedH1": self.expected_h1}


def tangent_complex_cohomology(g, h):
    """Cohomology of T_Delta + T_Delta^g + T_Delta^h -> (V + V)^3 -> V + V."""
    _require_commuting(g, h)
    d = g.nrows
    one = one_like(g)
    identity = RatMatrix.identity(d, one)
    graphs = [RatMatrix.vstack([identity, identity]), RatMatrix.vstack([identity, g]), RatMatrix.vstack([identity, h])]
    zero = RatMatrix.zeros(2 * d, d)
    # (x1, x2, x3) -> (x1 - x2, x2 - x3, x3 - x1)
    d0 = RatMatrix.vstack([
        RatMatrix.hstack([graphs[0], -graphs[1], zero]),
        RatMatrix.hstack([zero, graphs[1], -graphs[2]]),
        RatMatrix.hstack([-graphs[0], zero, graphs[2]]),
    ])
    pair = RatMatrix.identity(2 * d, one)
    d1 = RatMatrix.hstack([pair, pair, pair])
    rank0, rank1 = rank(d0), rank(d1)

    fixed_g, fixed_h = _fixed_basis(g), _fixed_basis(h)
    both = kernel_basis(RatMatrix.vstack([g - identity, h - identity]))
    spanning = list(fixed_g) + list(fixed_h)
    sum_rank = rank(RatMatrix.from_columns(spanning, nrows=d)) if spanning else 0
    excess = d - sum_rank
    return TangentCohomology(h0=3 * d - rank0, h1=6 * d - rank1 - rank0, h2=2 * d - rank1,
                             dim_fixed_pair=len(both), expected_h1=len(fixed_g) + len(fixed_h) + excess)
