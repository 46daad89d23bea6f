from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product as cartesian

from app.orbifold_ht.constants import (
    DEFAULT_CLOSURE_BOUND, DEFAULT_OMEGA_SIGN, DEFAULT_SIGN_PROFILE, IDENTITY_LABEL, SIGN_PROFILES,
)
from app.orbifold_ht.exactfield import (
    CycScalar, IntMatrix, RatMatrix, as_scalar, determinant, kernel_basis, lcm, scalar_conductor, solve,
)
from app.orbifold_ht.exceptions import (
    BadComplexStructure, InfiniteClosure, NonCommuting, NonUnimodular, NotComplexLinear, ScenarioError,
    UnknownElement,
)
from app.orbifold_ht.lazy import LazyTable
from app.orbifold_ht.utils import get_logger


@dataclass(frozen=True)
class ScenarioOptions:
    omega_sign: int = DEFAULT_OMEGA_SIGN
    sign_profile: str = DEFAULT_SIGN_PROFILE
    closure_bound: int = DEFAULT_CLOSURE_BOUND

    def __post_init__(self):
        if self.omega_sign not in (1, -1):
            raise ScenarioError("omegaCharacterSign must be +1 or -1, got %r" % (self.omega_sign,))
        if self.sign_profile not in SIGN_PROFILES:
            raise ScenarioError("unknown sign profile %r, expected one of %s"
                                % (self.sign_profile, ", ".join(SIGN_PROFILES)))
        if self.closure_bound < 1:
            raise ScenarioError("closureBound must be positive, got %r" % (self.closure_bound,))

    def as_dict(self):
        return {
            "omegaCharacterSign": self.omega_sign,
            "signConvention": self.sign_profile,
            "closureBound": self.closure_bound,
        }


@dataclass(frozen=True)
class GeneratorSpec:
    name: str
    matrix: tuple
    order: int = None


@dataclass(frozen=True)
class ScenarioFile:
    """A scenario as written by hand, before any validation."""
    name: str
    n: int
    complex_structure: tuple
    generators: tuple = ()
    options: ScenarioOptions = field(default_factory=ScenarioOptions)


@dataclass(frozen=True)
class GroupElement:
    label: str
    matrix: IntMatrix
    order: int
    word: tuple

    @property
    def is_identity(self):
        return self.label == IDENTITY_LABEL


@dataclass(frozen=True, eq=False)
class OrbifoldScenario:
    """[X/G] for X = V/Lambda a complex torus and G a finite abelian group of linear automorphisms."""
    name: str
    n: int
    complex_structure: RatMatrix
    generators: tuple
    elements: tuple
    conductor: int
    options: ScenarioOptions
    table: dict = field(repr=False)

    @property
    def lattice_rank(self):
        return 2 * self.n

    @property
    def labels(self):
        return tuple(g.label for g in self.elements)

    @property
    def identity(self):
        return self.elements[0]

    @property
    def order(self):
        return len(self.elements)

    def element(self, label):
        if isinstance(label, GroupElement):
            return label
        for g in self.elements:
            if g.label == label:
                return g
        raise UnknownElement(label)

    def index(self, label):
        return self.labels.index(self.element(label).label)

    def multiply(self, g, h):
        return self.table[(self.element(g).label, self.element(h).label)]

    def inverse(self, g):
        g = self.element(g)
        for h in self.elements:
            if self.table[(g.label, h.label)] == IDENTITY_LABEL:
                return h.label
        raise UnknownElement(g.label)

    def subgroup(self, labels):
        """Labels of the subgroup generated by ``labels``, in element order."""
        found = {IDENTITY_LABEL}
        frontier = [self.element(l).label for l in labels]
        while frontier:
            g = frontier.pop()
            if g in found:
                continue
            found.add(g)
            frontier.extend(self.table[(g, h)] for h in list(found))
        return tuple(l for l in self.labels if l in found)

    def with_options(self, options):
        return OrbifoldScenario(name=self.name, n=self.n, complex_structure=self.complex_structure,
                                generators=self.generators, elements=self.elements, conductor=self.conductor,
                                options=options, table=self.table)


def _word_label(names, word):
    parts = []
    for name, exponent in zip(names, word):
        if exponent == 1:
            parts.append(name)
        elif exponent > 1:
            parts.append("{}^{}".format(name, exponent))
    return "*".join(parts) or IDENTITY_LABEL


def _element_order(matrix, bound, name):
    identity = IntMatrix.identity(matrix.nrows)
    power = matrix
    for order in range(1, bound + 1):
        if power == identity:
            return order
        power = power * matrix
    raise InfiniteClosure(bound, generator=name)


def validate_scenario(raw, logger=None):
    """Check every invariant of ``raw`` and enumerate the group it generates."""
    logger = logger or get_logger('TorusAction')
    options = raw.options or ScenarioOptions()
    size = 2 * raw.n
    if raw.n < 1:
        raise ScenarioError("complex dimension must be positive, got %r" % raw.n)

    j = RatMatrix(raw.complex_structure)
    if j.shape != (size, size):
        raise ScenarioError("complex structure must be %dx%d, got %dx%d" % (size, size, j.nrows, j.ncols))
    if j * j != -RatMatrix.identity(size):
        raise BadComplexStructure("J^2 != -I")

    generators = []
    for spec in raw.generators:
        g = IntMatrix(spec.matrix)
        if g.shape != (size, size):
            raise ScenarioError("generator %s must be %dx%d" % (spec.name, size, size))
        det = determinant(g)
        if det not in (1, -1):
            raise NonUnimodular(spec.name, det)
        if g * j != j * g:
            raise NotComplexLinear(spec.name)
        generators.append((spec.name, g, spec.order))

    for i, (name, g, _) in enumerate(generators):
        for other, h, _ in generators[i + 1:]:
            if g * h != h * g:
                raise NonCommuting(name, other)

    orders = []
    for name, g, declared in generators:
        order = _element_order(g, options.closure_bound, name)
        if declared is not None and declared != order:
            raise ScenarioError("generator %s declares order %s but has order %d" % (name, declared, order))
        orders.append(order)

    names = [name for name, _, _ in generators]
    powers = []
    for (_, g, _), order in zip(generators, orders):
        chain = [IntMatrix.identity(size)]
        for _ in range(order - 1):
            chain.append(chain[-1] * g)
        powers.append(chain)

    seen = {}
    elements = []
    words = sorted(cartesian(*[range(o) for o in orders]), key=lambda w: (sum(w), w))
    for word in words:
        matrix = IntMatrix.identity(size)
        for chain, exponent in zip(powers, word):
            matrix = matrix * chain[exponent]
        if matrix.key() in seen:
            continue
        if len(elements) >= options.closure_bound:
            raise InfiniteClosure(options.closure_bound)
        label = _word_label(names, word)
        seen[matrix.key()] = label
        elements.append(GroupElement(label=label, matrix=matrix, order=_element_order(matrix, options.closure_bound, label),
                                     word=tuple(word)))

    table = {}
    for g in elements:
        for h in elements:
            table[(g.label, h.label)] = seen[(g.matrix * h.matrix).key()]

    exponent = 1
    for g in elements:
        exponent = lcm(exponent, g.order)
    conductor = lcm(4, exponent)
    for row in j.rows:
        for entry in row:
            conductor = lcm(conductor, scalar_conductor(entry))

    logger.info("scenario {NAME}: n={N}, |G|={ORDER}, conductor {CONDUCTOR}"
                .format(NAME=raw.name, N=raw.n, ORDER=len(elements), CONDUCTOR=conductor))
    return OrbifoldScenario(name=raw.name, n=raw.n, complex_structure=j,
                            generators=tuple(GroupElement(label=name, matrix=g, order=order, word=())
                                             for (name, g, _), order in zip(generators, orders)),
                            elements=tuple(elements), conductor=conductor, options=options, table=table)


@dataclass(frozen=True)
class EigenData:
    element: str
    exponents: tuple
    eigenvectors: tuple
    positions: tuple


@dataclass(frozen=True)
class JointEigenbasis:
    """Common eigenvectors e_1..e_n of every element of G on V.

    ``exponents[g][j]`` is a_j(g) in [0, 1), so that g e_j = zeta_N^(N a_j(g)) e_j.
    ``vectors`` are in lattice coordinates of Lambda (x) Q(zeta_N); ``coordinates``
    are the same vectors in the basis of V the restricted actions use.
    """
    conductor: int
    vectors: tuple
    coordinates: tuple
    exponents: dict

    @property
    def size(self):
        return len(self.vectors)

    def exponent(self, g, j):
        return self.exponents[g][j]

    def character(self, g, j):
        return CycScalar.zeta(self.conductor, int(self.exponents[g][j] * self.conductor))

    def fixed_indices(self, *elements):
        return tuple(j for j in range(self.size) if all(self.exponents[g][j] == 0 for g in elements))

    def normal_indices(self, *elements):
        return tuple(j for j in range(self.size) if any(self.exponents[g][j] != 0 for g in elements))


class TorusAction:
    """Eigen-data and ages of a validated scenario; everything is computed once, lazily."""

    def __init__(self, scenario):
        self.scenario = scenario
        self.logger = get_logger('TorusAction')
        self.conductor = scenario.conductor
        self._basis = None
        self._holomorphic = None
        self.actions = LazyTable(scenario.labels, self._restricted_action)
        self._eigen = LazyTable(scenario.labels, self._eigen_data)

    def imaginary_unit(self):
        return CycScalar.zeta(self.conductor, self.conductor // 4)

    def holomorphic_basis(self):
        """Basis of V, the +i eigenspace of J inside Lambda (x) Q(zeta_N)."""
        if self._holomorphic is None:
            size = self.scenario.lattice_rank
            j = self.scenario.complex_structure.map(lambda e: as_scalar(e, self.conductor))
            shifted = j - RatMatrix.identity(size, self.imaginary_unit())
            basis = kernel_basis(shifted)
            if len(basis) != self.scenario.n:
                raise BadComplexStructure("the +i eigenspace has dimension %d, expected %d"
                                          % (len(basis), self.scenario.n))
            self._holomorphic = RatMatrix.from_columns(basis, nrows=size)
        return self._holomorphic

    def _restricted_action(self, label):
        w = self.holomorphic_basis()
        g = self.scenario.element(label).matrix
        columns = []
        for column in w.columns():
            image = g.apply(column)
            coordinates = solve(w, image)
            if coordinates is None:
                raise NotComplexLinear(label)
            columns.append(coordinates)
        return RatMatrix.from_columns(columns, nrows=self.scenario.n)

    def restricted_action(self, g):
        """Matrix of g on V in the kernel basis of J - i."""
        return self.actions[self.scenario.element(g).label]

    @property
    def joint_eigenbasis(self):
        if self._basis is None:
            self._basis = self._diagonalize()
        return self._basis

    def _diagonalize(self):
        n = self.scenario.n
        one = CycScalar.one(self.conductor)
        blocks = [([tuple(one if i == k else one * 0 for i in range(n)) for k in range(n)], ())]
        for generator in self.scenario.generators:
            action = self.restricted_action(generator.label)
            step = self.conductor // generator.order
            refined = []
            for vectors, characters in blocks:
                span = RatMatrix.from_columns(vectors, nrows=n)
                for k in range(generator.order):
                    shifted = action - RatMatrix.identity(n, CycScalar.zeta(self.conductor, k * step))
                    kernel = kernel_basis(shifted * span)
                    if kernel:
                        refined.append(([span.apply(c) for c in kernel], characters + (Fraction(k, generator.order),)))
            blocks = refined
        coordinates = tuple(v for vectors, _ in blocks for v in vectors)
        characters = [c for vectors, c in blocks for _ in vectors]
        if len(coordinates) != n:
            raise BadComplexStructure("generators are not simultaneously diagonalizable on V")

        exponents = {}
        for g in self.scenario.elements:
            exponents[g.label] = tuple(
                sum((e * c for e, c in zip(g.word, chars)), Fraction(0)) % 1 for chars in characters)
        w = self.holomorphic_basis()
        vectors = tuple(w.apply(c) for c in coordinates)
        self.logger.info("joint eigenbasis of {NAME}: {EXPONENTS}".format(
            NAME=self.scenario.name,
            EXPONENTS=", ".join("{}: {}".format(l, [str(a) for a in exponents[l]]) for l in self.scenario.labels)))
        return JointEigenbasis(conductor=self.conductor, vectors=vectors, coordinates=coordinates,
                               exponents=exponents)

    def _eigen_data(self, label):
        basis = self.joint_eigenbasis
        order = sorted(range(basis.size), key=lambda j: (basis.exponents[label][j], j))
        return EigenData(element=label,
                         exponents=tuple(basis.exponents[label][j] for j in order),
                         eigenvectors=tuple(basis.vectors[j] for j in order),
                         positions=tuple(order))

    def eigen_data(self, g):
        return self._eigen[self.scenario.element(g).label]

    def age(self, g):
        return sum(self.eigen_data(g).exponents, Fraction(0))

    def determinant_on_v(self, g):
        return determinant(self.restricted_action(g))

    def is_holomorphic_symplectic(self):
        """True when every element preserves the holomorphic volume form, i.e. all ages are integral."""
        return all(self.age(g).denominator == 1 for g in self.scenario.labels)
