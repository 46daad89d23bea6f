"""
Machinery shared by the polyvector (B-side) and orbifold cohomology (A-side)
spaces: formal combinations of sector labels, the group action on them,
invariants, bigraded tables and the class-expression syntax

    [c*]g:k:L|R [+ [c*]g:k:L|R ...]

where g is an element word, k a 1-based component index and L, R are
comma lists of 1-based joint eigenbasis indices. c is a rational "a/b" or
a parenthesized cyclotomic expression such as "(z4)".
"""
import re
from fractions import Fraction

from app.orbifold_ht.constants import NEW
from app.orbifold_ht.exactfield import CycScalar, as_scalar, parse_scalar
from app.orbifold_ht.exceptions import ClassParseError, NotHomogeneous, UnknownElement
from app.orbifold_ht.fixedloci import FixedLoci
from app.orbifold_ht.lazy import LazyCache, LazyTable
from app.orbifold_ht.report import BigradedTable
from app.orbifold_ht.utils import format_index_set, format_rational, get_logger, subsets


class LinearCombination(object):
    """Finite combination of basis labels with Q(zeta_N) coefficients; zero terms pruned."""

    __slots__ = ("conductor", "terms")

    def __init__(self, conductor, terms=()):
        collected = {}
        for label, coefficient in terms:
            coefficient = as_scalar(coefficient, conductor)
            if label in collected:
                collected[label] = collected[label] + coefficient
            else:
                collected[label] = coefficient
        object.__setattr__(self, "conductor", conductor)
        object.__setattr__(self, "terms", tuple(sorted(((l, c) for l, c in collected.items() if not c.is_zero()),
                                                        key=lambda t: t[0])))

    def __setattr__(self, name, value):
        raise AttributeError("classes are immutable")

    @classmethod
    def zero(cls, conductor):
        return cls(conductor)

    @classmethod
    def from_label(cls, conductor, label, coefficient=1):
        return cls(conductor, [(label, coefficient)])

    def __iter__(self):
        return iter(self.terms)

    def __len__(self):
        return len(self.terms)

    def __bool__(self):
        return bool(self.terms)

    def is_zero(self):
        return not self.terms

    def labels(self):
        return tuple(l for l, _ in self.terms)

    def coefficient(self, label):
        for l, c in self.terms:
            if l == label:
                return c
        return CycScalar.zero(self.conductor)

    def sectors(self):
        return tuple(sorted({l.sector for l, _ in self.terms}))

    def __add__(self, other):
        if not isinstance(other, type(self)):
            return NotImplemented
        return type(self)(self.conductor, self.terms + other.terms)

    def __neg__(self):
        return type(self)(self.conductor, [(l, -c) for l, c in self.terms])

    def __sub__(self, other):
        return self + (-other)

    def scale(self, factor):
        factor = as_scalar(factor, self.conductor)
        return type(self)(self.conductor, [(l, c * factor) for l, c in self.terms])

    def __eq__(self, other):
        if not isinstance(other, LinearCombination):
            return NotImplemented
        return self.terms == other.terms

    def __ne__(self, other):
        result = self.__eq__(other)
        if result is NotImplemented:
            return result
        return not result

    def __hash__(self):
        return hash(self.terms)

    def __repr__(self):
        return "%s(%s)" % (type(self).__name__, ", ".join("%s*%r" % (c, l) for l, c in self.terms) or "0")


def format_coefficient(coefficient):
    if coefficient.is_rational():
        return format_rational(coefficient.rational_value())
    return "({})".format(coefficient)


def split_terms(expression):
    """Split on top-level " + " (outside parentheses)."""
    parts, depth, start, i = [], 0, 0, 0
    while i < len(expression):
        ch = expression[i]
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        elif depth == 0 and expression.startswith(" + ", i):
            parts.append(expression[start:i])
            start = i + 3
            i += 3
            continue
        i += 1
    parts.append(expression[start:])
    return [p.strip() for p in parts]


_LABEL = re.compile(r"^(?P<sector>[^:\s]+):(?P<component>\d+):(?P<left>[\d,]*)\|(?P<right>[\d,]*)$")
_PREFIX = re.compile(r"^(?P<sign>[+-]?)\((?P<cyc>[^()]*)\)\*(?P<label>.+)$|^(?P<rat>-?\d+(?:/\d+)?)\*(?P<label2>.+)$")


class SectorSpace(object):
    """Direct sum over group elements g of a per-sector basis, with the G-action.

    Subclasses provide ``sector_basis_for``, ``bidegree``, ``degree``,
    ``scalar_exponent`` and the label constructor.
    """

    class_type = LinearCombination
    label_type = None
    name = "sector space"

    def __init__(self, scenario, loci=None):
        self.scenario = scenario
        self.loci = loci or FixedLoci(scenario)
        self.torus = self.loci.torus
        self.conductor = scenario.conductor
        self.logger = get_logger(type(self).__name__)
        self._bases = LazyTable(scenario.labels, self.sector_basis_for)
        self._component_actions = LazyCache(lambda key: self.loci.component_action(key[0], [key[1]]))
        self._orbits = None

    # -- labels

    def sector_basis_for(self, g):
        raise NotImplementedError

    def make_label(self, sector, component, left, right):
        return self.label_type(sector, component, tuple(sorted(left)), tuple(sorted(right)))

    def label_parts(self, label):
        raise NotImplementedError

    def sector_basis(self, g):
        return self._bases[self.scenario.element(g).label]

    def basis(self):
        return tuple(l for g in self.scenario.labels for l in self.sector_basis(g))

    def element(self, label, coefficient=1):
        return self.class_type.from_label(self.conductor, label, coefficient)

    def combination(self, terms):
        return self.class_type(self.conductor, terms)

    def zero(self):
        return self.class_type.zero(self.conductor)

    def unit(self):
        return self.element(self.make_label(self.scenario.identity.label, 0, (), ()))

    def _fixed_subsets(self, g):
        data = self.loci.sector_data(g)
        return list(subsets(data.fixed_indices)), data.component_group.order

    # -- gradings

    def bidegree(self, label, convention=NEW):
        raise NotImplementedError

    def degree(self, label):
        raise NotImplementedError

    def bigrade(self, x, convention=NEW):
        """Bidegree of a homogeneous class; None for zero, which lies in every bidegree."""
        if x.is_zero():
            return None
        degrees = {self.bidegree(l, convention) for l, _ in x}
        if len(degrees) != 1:
            raise NotHomogeneous(degrees)
        return degrees.pop()

    def total_degree(self, x):
        if x.is_zero():
            return None
        degrees = {self.degree(l) for l, _ in x}
        if len(degrees) != 1:
            raise NotHomogeneous(degrees)
        return degrees.pop()

    # -- group action

    def scalar_exponent(self, h, label):
        raise NotImplementedError

    def act_on_label(self, h, label):
        h = self.scenario.element(h).label
        sector, component, left, right = self.label_parts(label)
        moved = self._component_actions.get((h, sector))[component]
        exponent = self.scalar_exponent(h, label) % self.conductor
        return CycScalar.zeta(self.conductor, exponent), self.make_label(sector, moved, left, right)

    def act(self, h, x):
        terms = []
        for label, coefficient in x:
            scalar, image = self.act_on_label(h, label)
            terms.append((image, coefficient * scalar))
        return self.combination(terms)

    def average(self, x):
        total = self.zero()
        for h in self.scenario.labels:
            total = total + self.act(h, x)
        return total.scale(Fraction(1, self.scenario.order))

    def is_invariant(self, x):
        return all(self.act(g.label, x) == x for g in self.scenario.generators)

    def orbits(self):
        if self._orbits is None:
            seen = set()
            orbits = []
            for label in self.basis():
                if label in seen:
                    continue
                orbit = {self.act_on_label(h, label)[1] for h in self.scenario.labels}
                seen.update(orbit)
                orbits.append(tuple(sorted(orbit)))
            self._orbits = orbits
        return self._orbits

    def invariant_basis(self):
        """One averaged vector per orbit whose stabilizer acts trivially."""
        basis = []
        for orbit in self.orbits():
            averaged = self.average(self.element(orbit[0]))
            if averaged:
                basis.append(averaged)
        return basis

    def dimension_table(self, convention=NEW, invariant=True, title=None):
        table = BigradedTable(scenario=self.scenario.name, title=title or self.name, convention=convention)
        if invariant:
            for x in self.invariant_basis():
                table.add(self.bigrade(x, convention))
        else:
            for label in self.basis():
                table.add(self.bidegree(label, convention))
        return table

    def degree_table(self):
        totals = {}
        for x in self.invariant_basis():
            degree = self.total_degree(x)
            totals[degree] = totals.get(degree, 0) + 1
        return dict(sorted(totals.items()))

    # -- class expressions

    def format_label(self, label):
        sector, component, left, right = self.label_parts(label)
        return "{}:{}:{}|{}".format(sector, component + 1, format_index_set(left), format_index_set(right))

    def format_class(self, x):
        if x.is_zero():
            return "0"
        parts = []
        for label, coefficient in x:
            if coefficient == 1:
                parts.append(self.format_label(label))
            else:
                parts.append("{}*{}".format(format_coefficient(coefficient), self.format_label(label)))
        return " + ".join(parts)

    def parse_label(self, text, expression=None):
        expression = expression or text
        match = _LABEL.match(text.strip())
        if not match:
            raise ClassParseError(expression, "expected g:k:L|R, got %r" % text)
        try:
            sector = self.scenario.element(match.group("sector")).label
        except UnknownElement:
            raise ClassParseError(expression, "unknown group element %r" % match.group("sector"))
        data = self.loci.sector_data(sector)
        component = int(match.group("component")) - 1
        if not 0 <= component < data.component_group.order:
            raise ClassParseError(expression, "component %d out of range 1..%d"
                                  % (component + 1, data.component_group.order))
        sets = []
        for group in ("left", "right"):
            raw = match.group(group)
            indices = [int(i) - 1 for i in raw.split(",")] if raw else []
            if len(set(indices)) != len(indices):
                raise ClassParseError(expression, "repeated index in %r" % raw)
            for i in indices:
                if i not in data.fixed_indices:
                    raise ClassParseError(expression, "index %d is not a fixed direction of %s" % (i + 1, sector))
            sets.append(indices)
        return self.make_label(sector, component, sets[0], sets[1])

    def parse_class(self, expression):
        terms = []
        for part in split_terms(expression):
            if not part:
                raise ClassParseError(expression, "empty term")
            coefficient = Fraction(1)
            prefixed = _PREFIX.match(part)
            if prefixed:
                try:
                    coefficient = parse_scalar(prefixed.group("cyc") or prefixed.group("rat"))
                    if prefixed.group("sign") == "-":
                        coefficient = -coefficient
                except (ValueError, ZeroDivisionError):
                    raise ClassParseError(expression, "bad coefficient in %r" % part)
                part = prefixed.group("label") or prefixed.group("label2")
            terms.append((self.parse_label(part, expression), coefficient))
        return self.combination(terms)
