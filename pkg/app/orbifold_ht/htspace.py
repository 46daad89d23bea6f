from dataclasses import dataclass

from app.orbifold_ht.constants import NEW, PARENTHESIZED
from app.orbifold_ht.sectors import LinearCombination, SectorSpace


@dataclass(frozen=True, order=True)
class HTBasisLabel:
    """x_B y_Q on component k of X^g, twisted by omega_g.

    Lives in H^|B|(X^g_k, wedge^|Q| T tensor omega_g), contributing to
    cohomological degree |B| + |Q| + c_g.
    """
    sector: str
    component: int
    forms: tuple = ()
    polys: tuple = ()


class HTClass(LinearCombination):
    __slots__ = ()


class HTSpace(SectorSpace):
    """HT*(X;G): sector g contributes H^(p - c_g)(X^g, wedge^q T_(X^g) tensor omega_g)."""

    class_type = HTClass
    label_type = HTBasisLabel
    name = "HT"

    def __init__(self, scenario, loci=None, omega_sign=None):
        super().__init__(scenario, loci)
        self.omega_sign = scenario.options.omega_sign if omega_sign is None else omega_sign

    def sector_basis_for(self, g):
        indices, components = self._fixed_subsets(g)
        labels = tuple(HTBasisLabel(g, k, forms, polys)
                       for k in range(components) for forms in indices for polys in indices)
        self.logger.info("sector {G}: {COUNT} labels".format(G=g, COUNT=len(labels)))
        return labels

    def label_parts(self, label):
        return label.sector, label.component, label.forms, label.polys

    def label(self, sector, component, forms=(), polys=()):
        return self.make_label(self.scenario.element(sector).label, component, forms, polys)

    def degree(self, label):
        return len(label.forms) + len(label.polys) + self.loci.sector_data(label.sector).codimension

    def bidegree(self, label, convention=NEW):
        data = self.loci.sector_data(label.sector)
        if convention == PARENTHESIZED:
            return len(label.forms) + data.codimension, len(label.polys)
        return len(label.forms) + data.age, len(label.polys) + data.codimension - data.age

    def scalar_exponent(self, h, label):
        # forms and polyvectors pick up chi_j(h); the omega twist det(h on V/V^g)^sigma
        basis = self.loci.basis
        weight = lambda j: int(basis.exponent(h, j) * self.conductor)
        exponent = sum(weight(j) for j in label.forms) + sum(weight(j) for j in label.polys)
        twist = sum(weight(j) for j in self.loci.sector_data(label.sector).normal_indices)
        return exponent + self.omega_sign * twist

    def omega_character(self, h, g):
        return self.loci.sector_data(g).omega_character[self.scenario.element(h).label] ** self.omega_sign

    def group_action(self, h, x):
        return self.act(h, x)
