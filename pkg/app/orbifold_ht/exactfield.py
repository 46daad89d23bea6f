"""
Exact arithmetic over Q, the cyclotomic fields Q(zeta_N) and Z, plus the
matrix algorithms the rest of the package consumes.

No floating point anywhere: rationals are ``fractions.Fraction``, cyclotomic
elements are residues of Q[x] modulo the N-th cyclotomic polynomial.
"""
import re
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import gcd

from sympy import Poly, QQ, Rational, Symbol, cyclotomic_poly, factorint, invert, totient

from app.orbifold_ht.exceptions import ConductorMismatch, ConductorNotDivisible, DivisionByZero

_x = Symbol("x")


def lcm(a, b):
    return a * b // gcd(a, b)


@lru_cache(maxsize=None)
def cyclotomic_coefficients(conductor):
    """Integer coefficients of Phi_N, lowest degree first (monic)."""
    return tuple(int(c) for c in reversed(cyclotomic_poly(conductor, _x, polys=True).all_coeffs()))


@lru_cache(maxsize=None)
def field_degree(conductor):
    return int(totient(conductor))


@lru_cache(maxsize=None)
def _normalized_power_trace(conductor, exponent):
    # Tr(zeta_N^i) / phi(N) = mu(d) / phi(d) with d = N / gcd(N, i)
    d = conductor // gcd(conductor, exponent)
    factors = factorint(d)
    if any(e > 1 for e in factors.values()):
        return Fraction(0)
    mu = -1 if len(factors) % 2 else 1
    return Fraction(mu, int(totient(d)))


def _reduce(coefficients, conductor):
    modulus = cyclotomic_coefficients(conductor)
    degree = len(modulus) - 1
    work = [Fraction(c) for c in coefficients]
    while len(work) > degree:
        top = work.pop()
        if top:
            shift = len(work) - degree
            for i in range(degree):
                work[shift + i] -= top * modulus[i]
    work.extend([Fraction(0)] * (degree - len(work)))
    return tuple(work)


class CycScalar(object):
    """Exact element of Q(zeta_N), stored in canonical power-basis form."""

    __slots__ = ("conductor", "coefficients")

    def __init__(self, conductor, coefficients=()):
        conductor = int(conductor)
        if conductor < 1:
            raise ValueError("conductor must be positive, got %d" % conductor)
        object.__setattr__(self, "conductor", conductor)
        object.__setattr__(self, "coefficients", _reduce(coefficients, conductor))

    def __setattr__(self, name, value):
        raise AttributeError("CycScalar is immutable")

    @classmethod
    def from_rational(cls, conductor, value):
        return cls(conductor, (Fraction(value),))

    @classmethod
    def zero(cls, conductor):
        return cls(conductor, ())

    @classmethod
    def one(cls, conductor):
        return cls(conductor, (1,))

    @classmethod
    def zeta(cls, conductor, exponent=1):
        return _zeta_powers(conductor)[exponent % conductor]

    def _coerce(self, other):
        if isinstance(other, CycScalar):
            if other.conductor != self.conductor:
                raise ConductorMismatch(self.conductor, other.conductor)
            return other
        if isinstance(other, (int, Fraction)):
            return CycScalar.from_rational(self.conductor, other)
        return None

    def __add__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return CycScalar(self.conductor, [a + b for a, b in zip(self.coefficients, other.coefficients)])

    __radd__ = __add__

    def __neg__(self):
        return CycScalar(self.conductor, [-a for a in self.coefficients])

    def __sub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return CycScalar(self.conductor, [a - b for a, b in zip(self.coefficients, other.coefficients)])

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other - self

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return CycScalar(self.conductor, [a * other for a in self.coefficients])
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        product = [Fraction(0)] * (2 * len(self.coefficients))
        for i, a in enumerate(self.coefficients):
            if not a:
                continue
            for j, b in enumerate(other.coefficients):
                if b:
                    product[i + j] += a * b
        return CycScalar(self.conductor, product)

    __rmul__ = __mul__

    def inverse(self):
        if self.is_zero():
            raise DivisionByZero("inverse of zero in Q(zeta_%d)" % self.conductor)
        if self.is_rational():
            return CycScalar.from_rational(self.conductor, 1 / self.coefficients[0])
        numerator = Poly([Rational(c.numerator, c.denominator) for c in reversed(self.coefficients)], _x, domain=QQ)
        modulus = Poly(cyclotomic_poly(self.conductor, _x), _x, domain=QQ)
        inverse = invert(numerator, modulus)
        return CycScalar(self.conductor, [Fraction(int(c.p), int(c.q)) for c in reversed(inverse.all_coeffs())])

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            if other == 0:
                raise DivisionByZero("division by zero")
            return CycScalar(self.conductor, [a / other for a in self.coefficients])
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other * self.inverse()

    def __pow__(self, exponent):
        exponent = int(exponent)
        if exponent < 0:
            return self.inverse() ** (-exponent)
        result = CycScalar.one(self.conductor)
        base = self
        while exponent:
            if exponent & 1:
                result = result * base
            base = base * base
            exponent >>= 1
        return result

    def is_zero(self):
        return not any(self.coefficients)

    def is_rational(self):
        return not any(self.coefficients[1:])

    def __bool__(self):
        return not self.is_zero()

    def rational_value(self):
        if not self.is_rational():
            raise ValueError("%r is not rational" % self)
        return self.coefficients[0]

    def normalized_trace(self):
        """Tr(a) / [Q(a-field):Q]; independent of the conductor a is written in."""
        return sum((c * _normalized_power_trace(self.conductor, i)
                    for i, c in enumerate(self.coefficients) if c), Fraction(0))

    def root_of_unity_exponent(self):
        """k with self == zeta_N^k, or None."""
        for k, power in enumerate(_zeta_powers(self.conductor)):
            if power.coefficients == self.coefficients:
                return k
        return None

    def __eq__(self, other):
        if isinstance(other, CycScalar):
            if other.conductor == self.conductor:
                return self.coefficients == other.coefficients
            common = lcm(self.conductor, other.conductor)
            return lift_conductor(self, common).coefficients == lift_conductor(other, common).coefficients
        if isinstance(other, (int, Fraction)):
            return self.is_rational() and self.coefficients[0] == other
        return NotImplemented

    def __ne__(self, other):
        result = self.__eq__(other)
        if result is NotImplemented:
            return result
        return not result

    def __hash__(self):
        if self.is_rational():
            return hash(self.coefficients[0])
        return hash(("cyc", self.normalized_trace()))

    def __repr__(self):
        return "CycScalar(%d, %s)" % (self.conductor, self)

    def __str__(self):
        terms = []
        for i, c in enumerate(self.coefficients):
            if not c:
                continue
            if i == 0:
                terms.append(_format_fraction(c))
            else:
                power = "z%d" % self.conductor if i == 1 else "z%d^%d" % (self.conductor, i)
                if c == 1:
                    terms.append(power)
                elif c == -1:
                    terms.append("-" + power)
                else:
                    terms.append("%s*%s" % (_format_fraction(c), power))
        if not terms:
            return "0"
        return " + ".join(terms).replace("+ -", "- ")


def _format_fraction(value):
    if value.denominator == 1:
        return str(value.numerator)
    return "%d/%d" % (value.numerator, value.denominator)


@lru_cache(maxsize=None)
def _zeta_powers(conductor):
    powers = []
    for k in range(conductor):
        coefficients = [0] * (k + 1)
        coefficients[k] = 1
        powers.append(CycScalar(conductor, coefficients))
    return tuple(powers)


def cyc_arith(a, b, op):
    """Field operation by name; both operands must share the conductor."""
    if a.conductor != b.conductor:
        raise ConductorMismatch(a.conductor, b.conductor)
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "div":
        return a / b
    raise ValueError("unknown operation %r" % op)


def lift_conductor(a, target):
    """Rewrite ``a`` in Q(zeta_M) via zeta_N = zeta_M^(M/N)."""
    target = int(target)
    if target % a.conductor:
        raise ConductorNotDivisible(a.conductor, target)
    if target == a.conductor:
        return a
    step = target // a.conductor
    spread = [Fraction(0)] * (step * (len(a.coefficients) - 1) + 1)
    for i, c in enumerate(a.coefficients):
        spread[i * step] = c
    return CycScalar(target, spread)


def as_scalar(value, conductor):
    if isinstance(value, CycScalar):
        return lift_conductor(value, conductor)
    return CycScalar.from_rational(conductor, value)


# ---------------------------------------------------------------------------
# matrices

class RatMatrix(object):
    """Immutable rectangular matrix over an exact scalar domain.

    Entries may be ints, Fractions or CycScalars; the domain is whatever the
    entries are, mixing rationals with one cyclotomic conductor is fine.
    """

    __slots__ = ("rows", "nrows", "ncols")

    def __init__(self, rows, ncols=None):
        rows = tuple(tuple(self._normalize(e) for e in row) for row in rows)
        if ncols is None:
            ncols = len(rows[0]) if rows else 0
        for row in rows:
            if len(row) != ncols:
                raise ValueError("matrix is not rectangular")
        object.__setattr__(self, "rows", rows)
        object.__setattr__(self, "nrows", len(rows))
        object.__setattr__(self, "ncols", ncols)

    def __setattr__(self, name, value):
        raise AttributeError("matrices are immutable")

    @staticmethod
    def _normalize(entry):
        if isinstance(entry, int) and not isinstance(entry, bool):
            return Fraction(entry)
        if isinstance(entry, (Fraction, CycScalar)):
            return entry
        return Fraction(entry)

    @classmethod
    def identity(cls, size, one=1):
        return cls([[one if i == j else 0 * one for j in range(size)] for i in range(size)], ncols=size)

    @classmethod
    def zeros(cls, nrows, ncols):
        return cls([[0] * ncols for _ in range(nrows)], ncols=ncols)

    @classmethod
    def from_columns(cls, columns, nrows=None):
        columns = [tuple(c) for c in columns]
        if nrows is None:
            nrows = len(columns[0]) if columns else 0
        return cls([[columns[j][i] for j in range(len(columns))] for i in range(nrows)], ncols=len(columns))

    @classmethod
    def vstack(cls, blocks):
        blocks = list(blocks)
        ncols = blocks[0].ncols if blocks else 0
        return cls([row for block in blocks for row in block.rows], ncols=ncols)

    @classmethod
    def hstack(cls, blocks):
        blocks = list(blocks)
        nrows = blocks[0].nrows
        return cls([[e for block in blocks for e in block.rows[i]] for i in range(nrows)],
                   ncols=sum(b.ncols for b in blocks))

    @classmethod
    def block_diagonal(cls, blocks):
        blocks = list(blocks)
        ncols = sum(b.ncols for b in blocks)
        rows = []
        offset = 0
        for block in blocks:
            for row in block.rows:
                rows.append([0] * offset + list(row) + [0] * (ncols - offset - block.ncols))
            offset += block.ncols
        return cls(rows, ncols=ncols)

    @property
    def shape(self):
        return self.nrows, self.ncols

    def __getitem__(self, index):
        i, j = index
        return self.rows[i][j]

    def column(self, j):
        return tuple(row[j] for row in self.rows)

    def columns(self):
        return [self.column(j) for j in range(self.ncols)]

    def transpose(self):
        return RatMatrix([[self.rows[i][j] for i in range(self.nrows)] for j in range(self.ncols)], ncols=self.nrows)

    def map(self, function):
        return RatMatrix([[function(e) for e in row] for row in self.rows], ncols=self.ncols)

    def apply(self, vector):
        vector = tuple(vector)
        if len(vector) != self.ncols:
            raise ValueError("vector length %d does not match %d columns" % (len(vector), self.ncols))
        return tuple(_dot(row, vector) for row in self.rows)

    def __mul__(self, other):
        if isinstance(other, RatMatrix):
            if self.ncols != other.nrows:
                raise ValueError("cannot multiply %s by %s" % (self.shape, other.shape))
            columns = other.columns()
            return RatMatrix([[_dot(row, col) for col in columns] for row in self.rows], ncols=other.ncols)
        return self.map(lambda e: e * other)

    def __rmul__(self, other):
        return self.map(lambda e: other * e)

    def __add__(self, other):
        if self.shape != other.shape:
            raise ValueError("shape mismatch %s vs %s" % (self.shape, other.shape))
        return RatMatrix([[a + b for a, b in zip(r, s)] for r, s in zip(self.rows, other.rows)], ncols=self.ncols)

    def __sub__(self, other):
        if self.shape != other.shape:
            raise ValueError("shape mismatch %s vs %s" % (self.shape, other.shape))
        return RatMatrix([[a - b for a, b in zip(r, s)] for r, s in zip(self.rows, other.rows)], ncols=self.ncols)

    def __neg__(self):
        return self.map(lambda e: -e)

    def __pow__(self, exponent):
        if exponent < 0:
            return inverse(self) ** (-exponent)
        result = RatMatrix.identity(self.nrows, one_like(self))
        for _ in range(exponent):
            result = result * self
        return result

    def __eq__(self, other):
        if not isinstance(other, RatMatrix):
            return NotImplemented
        return self.shape == other.shape and all(
            a == b for r, s in zip(self.rows, other.rows) for a, b in zip(r, s))

    def __ne__(self, other):
        result = self.__eq__(other)
        if result is NotImplemented:
            return result
        return not result

    def __hash__(self):
        return hash((self.shape, self.rows))

    def is_zero(self):
        return all(e == 0 for row in self.rows for e in row)

    def __repr__(self):
        return "%s(%s)" % (type(self).__name__, [[str(e) for e in row] for row in self.rows])


class IntMatrix(RatMatrix):
    """Integer matrix; the lattice maps such as g - 1 on the period lattice."""

    __slots__ = ()

    def __init__(self, rows, ncols=None):
        rows = [list(row) for row in rows]
        for row in rows:
            for e in row:
                if Fraction(e).denominator != 1:
                    raise ValueError("non-integral entry %s in integer matrix" % e)
        super().__init__([[int(Fraction(e)) for e in row] for row in rows], ncols=ncols)

    @staticmethod
    def _normalize(entry):
        return int(entry)

    @classmethod
    def identity(cls, size, one=1):
        return cls([[1 if i == j else 0 for j in range(size)] for i in range(size)], ncols=size)

    @classmethod
    def from_rat(cls, matrix):
        return cls(matrix.rows, ncols=matrix.ncols)

    def __mul__(self, other):
        product = RatMatrix.__mul__(self, other)
        if isinstance(other, IntMatrix):
            return IntMatrix(product.rows, ncols=product.ncols)
        return product

    def __add__(self, other):
        total = RatMatrix.__add__(self, other)
        return IntMatrix(total.rows, ncols=total.ncols) if isinstance(other, IntMatrix) else total

    def __sub__(self, other):
        difference = RatMatrix.__sub__(self, other)
        return IntMatrix(difference.rows, ncols=difference.ncols) if isinstance(other, IntMatrix) else difference

    def __neg__(self):
        return IntMatrix([[-e for e in row] for row in self.rows], ncols=self.ncols)

    def key(self):
        return self.rows


def _dot(row, vector):
    total = 0
    for a, b in zip(row, vector):
        if a and b:
            total = total + a * b
    return total


def one_like(matrix):
    for row in matrix.rows:
        for e in row:
            if isinstance(e, CycScalar):
                return CycScalar.one(e.conductor)
    return Fraction(1)


# ---------------------------------------------------------------------------
# row reduction over a field

def _field_rows(matrix):
    # integer entries would divide to floats
    return [[Fraction(e) if isinstance(e, int) else e for e in row] for row in matrix.rows]


def _row_reduce(matrix):
    """Reduced row echelon form; returns (rows, pivot columns)."""
    rows = _field_rows(matrix)
    pivots = []
    r = 0
    for c in range(matrix.ncols):
        pivot_row = None
        for i in range(r, len(rows)):
            if rows[i][c] != 0:
                pivot_row = i
                break
        if pivot_row is None:
            continue
        rows[r], rows[pivot_row] = rows[pivot_row], rows[r]
        pivot = rows[r][c]
        rows[r] = [e / pivot for e in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c] != 0:
                factor = rows[i][c]
                rows[i] = [a - factor * b for a, b in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
        if r == len(rows):
            break
    return rows, pivots


def rank(matrix):
    return len(_row_reduce(matrix)[1])


def kernel_basis(matrix):
    """Basis of {v : M v = 0}; one vector per free column, 1 at that column."""
    rows, pivots = _row_reduce(matrix)
    one = one_like(matrix)
    zero = one * 0
    pivot_set = set(pivots)
    basis = []
    for free in range(matrix.ncols):
        if free in pivot_set:
            continue
        vector = [zero] * matrix.ncols
        vector[free] = one
        for i, p in enumerate(pivots):
            vector[p] = zero - rows[i][free]
        basis.append(tuple(vector))
    return basis


def left_kernel_basis(matrix):
    return kernel_basis(matrix.transpose())


def column_space_basis(matrix):
    """Pivot columns of ``matrix``: a basis of its image."""
    _, pivots = _row_reduce(matrix)
    return [matrix.column(p) for p in pivots]


def determinant(matrix):
    if matrix.nrows != matrix.ncols:
        raise ValueError("determinant of non-square matrix")
    rows = _field_rows(matrix)
    size = len(rows)
    det = one_like(matrix)
    for c in range(size):
        pivot_row = None
        for i in range(c, size):
            if rows[i][c] != 0:
                pivot_row = i
                break
        if pivot_row is None:
            return det * 0
        if pivot_row != c:
            rows[c], rows[pivot_row] = rows[pivot_row], rows[c]
            det = -det
        pivot = rows[c][c]
        det = det * pivot
        for i in range(c + 1, size):
            if rows[i][c] != 0:
                factor = rows[i][c] / pivot
                rows[i] = [a - factor * b for a, b in zip(rows[i], rows[c])]
    return det


def solve(matrix, vector):
    """One solution x of M x = b, or None when the system is inconsistent."""
    augmented = RatMatrix.hstack([matrix, RatMatrix.from_columns([tuple(vector)], nrows=matrix.nrows)])
    rows, pivots = _row_reduce(augmented)
    if matrix.ncols in pivots:
        return None
    zero = one_like(augmented) * 0
    solution = [zero] * matrix.ncols
    for i, p in enumerate(pivots):
        solution[p] = rows[i][matrix.ncols]
    return tuple(solution)


def inverse(matrix):
    size = matrix.nrows
    if size != matrix.ncols:
        raise ValueError("inverse of non-square matrix")
    augmented = RatMatrix.hstack([matrix, RatMatrix.identity(size, one_like(matrix))])
    rows, pivots = _row_reduce(augmented)
    if pivots[:size] != list(range(size)) or len(pivots) < size:
        raise DivisionByZero("matrix is singular")
    return RatMatrix([row[size:] for row in rows[:size]], ncols=size)


def in_span(vectors, vector):
    vectors = list(vectors)
    if not vectors:
        return all(e == 0 for e in vector)
    return solve(RatMatrix.from_columns(vectors), vector) is not None


# ---------------------------------------------------------------------------
# integer normal forms

def _pick_pivot(a, start):
    """Nonzero entry of minimal absolute value in the trailing block; ties by row then column."""
    best = None
    for i in range(start, len(a)):
        for j in range(start, len(a[i])):
            value = a[i][j]
            if value and (best is None or abs(value) < best[0]):
                best = (abs(value), i, j)
    return best


def smith_normal_form(matrix):
    """(U, D, V) with U, V unimodular and U * M * V = D, d_i | d_(i+1), d_i >= 0."""
    a = [list(row) for row in IntMatrix.from_rat(matrix).rows]
    m, n = matrix.nrows, matrix.ncols
    u = [[1 if i == j else 0 for j in range(m)] for i in range(m)]
    v = [[1 if i == j else 0 for j in range(n)] for i in range(n)]

    def swap_rows(i, k):
        a[i], a[k] = a[k], a[i]
        u[i], u[k] = u[k], u[i]

    def swap_cols(j, k):
        for row in a:
            row[j], row[k] = row[k], row[j]
        for row in v:
            row[j], row[k] = row[k], row[j]

    def add_row(target, source, factor):
        a[target] = [x + factor * y for x, y in zip(a[target], a[source])]
        u[target] = [x + factor * y for x, y in zip(u[target], u[source])]

    def add_col(target, source, factor):
        for row in a:
            row[target] += factor * row[source]
        for row in v:
            row[target] += factor * row[source]

    for t in range(min(m, n)):
        while True:
            pick = _pick_pivot(a, t)
            if pick is None:
                break
            _, i, j = pick
            if i != t:
                swap_rows(t, i)
            if j != t:
                swap_cols(t, j)
            pivot = a[t][t]
            clean = True
            for i in range(t + 1, m):
                if a[i][t]:
                    add_row(i, t, -(a[i][t] // pivot))
                    clean = clean and a[i][t] == 0
            for j in range(t + 1, n):
                if a[t][j]:
                    add_col(j, t, -(a[t][j] // pivot))
                    clean = clean and a[t][j] == 0
            if not clean:
                continue
            offender = None
            for i in range(t + 1, m):
                for j in range(t + 1, n):
                    if a[i][j] % pivot:
                        offender = i
                        break
                if offender is not None:
                    break
            if offender is None:
                break
            add_row(t, offender, 1)
        if a[t][t] < 0:
            a[t] = [-x for x in a[t]]
            u[t] = [-x for x in u[t]]
        if not any(a[i][j] for i in range(t, m) for j in range(t, n)):
            break
    return IntMatrix(u, ncols=m), IntMatrix(a, ncols=n), IntMatrix(v, ncols=n)


def invariant_factors(matrix):
    _, d, _ = smith_normal_form(matrix)
    return tuple(d[i, i] for i in range(min(d.nrows, d.ncols)) if d[i, i])


def hermite_normal_form(matrix):
    """Row-style HNF: same row lattice, upper echelon, positive pivots, reduced above."""
    a = [list(row) for row in IntMatrix.from_rat(matrix).rows]
    m, n = matrix.nrows, matrix.ncols
    r = 0
    for c in range(n):
        if r == m:
            break
        while True:
            candidates = [i for i in range(r, m) if a[i][c]]
            if not candidates:
                break
            p = min(candidates, key=lambda i: (abs(a[i][c]), i))
            a[r], a[p] = a[p], a[r]
            clean = True
            for i in range(r + 1, m):
                if a[i][c]:
                    q = a[i][c] // a[r][c]
                    a[i] = [x - q * y for x, y in zip(a[i], a[r])]
                    clean = clean and a[i][c] == 0
            if clean:
                break
        if not a[r][c]:
            continue
        if a[r][c] < 0:
            a[r] = [-x for x in a[r]]
        for i in range(r):
            q = a[i][c] // a[r][c]
            if q:
                a[i] = [x - q * y for x, y in zip(a[i], a[r])]
        r += 1
    return IntMatrix(a[:r], ncols=n)


@dataclass(frozen=True)
class CongruenceLattice:
    """L = {x in Q^m : A x integral}, presented through the Smith form of A.

    In the coordinates y = V^-1 x the lattice is the product of (1/d_i)Z over
    the nonzero invariant factors and Q over the kernel directions.
    """
    transform: IntMatrix
    transform_inverse: RatMatrix
    diagonal: tuple
    basis: tuple

    @property
    def rank(self):
        return len(self.diagonal)

    @property
    def index(self):
        index = 1
        for d in self.diagonal:
            index *= d
        return index

    def coordinates(self, vector):
        return self.transform_inverse.apply(vector)


def hermite_solve_congruence(stacked):
    """Superlattice of the integer lattice made of all rational x with ``stacked`` * x integral.

    The returned basis spans the finite-index part generated by V e_i / d_i
    together with the integral kernel directions, presented in Hermite form.
    """
    _, d, v = smith_normal_form(stacked)
    diagonal = tuple(d[i, i] for i in range(min(d.nrows, d.ncols)) if d[i, i])
    size = stacked.ncols
    columns = []
    for i in range(size):
        column = v.column(i)
        if i < len(diagonal):
            columns.append(tuple(Fraction(e, diagonal[i]) for e in column))
        else:
            columns.append(tuple(Fraction(e) for e in column))
    denominator = 1
    for column in columns:
        for e in column:
            denominator = lcm(denominator, e.denominator)
    scaled = IntMatrix([[e * denominator for e in column] for column in columns], ncols=size)
    reduced = hermite_normal_form(scaled)
    basis = tuple(tuple(Fraction(e, denominator) for e in row) for row in reduced.rows)
    return CongruenceLattice(transform=v, transform_inverse=inverse(v), diagonal=diagonal, basis=basis)


_TERM = re.compile(r"^(?:(\d+(?:/\d+)?)\*)?z(\d+)(?:\^(\d+))?$")


def parse_scalar(text):
    """Parse "a/b" or a sum of terms "c*zN^k"; returns a Fraction or a CycScalar.

    This is the inverse of ``str(CycScalar)``; terms with different N are
    lifted to their common conductor.
    """
    text = str(text).replace(" ", "")
    if not text:
        raise ValueError("empty scalar")
    if "z" not in text:
        return Fraction(text)
    terms = []
    for sign, body in re.findall(r"([+-]?)([^+-]+)", text):
        factor = -1 if sign == "-" else 1
        match = _TERM.match(body)
        if match:
            coefficient, conductor, exponent = match.groups()
            terms.append((factor * Fraction(coefficient or 1), int(conductor), int(exponent or 1)))
        elif re.match(r"^\d+(?:/\d+)?$", body):
            terms.append((factor * Fraction(body), 1, 0))
        else:
            raise ValueError("cannot parse scalar term %r" % body)
    if "".join(s + b for s, b in re.findall(r"([+-]?)([^+-]+)", text)) != text:
        raise ValueError("cannot parse scalar %r" % text)
    conductor = 1
    for _, n, _ in terms:
        conductor = lcm(conductor, n)
    total = CycScalar.zero(conductor)
    for coefficient, n, exponent in terms:
        total = total + CycScalar.zeta(conductor, exponent * (conductor // n)) * coefficient
    return total


def scalar_conductor(value):
    return value.conductor if isinstance(value, CycScalar) else 1
