'''
Custom exceptions raised by orbifold_ht.
'''

__all__ = [
    'Error', 'FieldError', 'DivisionByZero', 'ConductorMismatch', 'ConductorNotDivisible',
    'ScenarioError', 'NonCommuting', 'NotComplexLinear', 'BadComplexStructure',
    'InfiniteClosure', 'NonUnimodular', 'UnknownElement',
    'ModelingError', 'NegativeK', 'NotASubgroupRelation',
    'ClassError', 'NotHomogeneous', 'SectorMismatch', 'ClassParseError',
    'NotHolomorphicSymplectic',
    'CliError', 'ParseError', 'ValidationError', 'UnknownCommand',
]


class Error(Exception):
    '''Base class for all exceptions raised by the orbifold_ht library'''


class FieldError(ArithmeticError, Error):
    '''Base class for exact arithmetic failures.'''


class DivisionByZero(ZeroDivisionError, FieldError):
    '''Exception raised when dividing by an exact zero.

    >>> isinstance(DivisionByZero(), ZeroDivisionError)
    True
    '''


class ConductorMismatch(FieldError):
    '''Two cyclotomic scalars with different conductors were combined.

    Callers lift both operands to a common conductor first.
    '''

    def __init__(self, left, right):
        super().__init__("conductor mismatch: %d vs %d" % (left, right))
        self.left = left
        self.right = right


class ConductorNotDivisible(FieldError):
    '''A scalar of conductor N was lifted to a conductor M with N not dividing M.'''

    def __init__(self, conductor, target):
        super().__init__("conductor %d does not divide %d" % (conductor, target))
        self.conductor = conductor
        self.target = target


class ScenarioError(ValueError, Error):
    '''Base class for invalid orbifold scenarios.'''


class NonCommuting(ScenarioError):

    def __init__(self, g, h):
        super().__init__("elements %s and %s do not commute" % (g, h))
        self.g = g
        self.h = h


class NotComplexLinear(ScenarioError):

    def __init__(self, g):
        super().__init__("generator %s does not commute with the complex structure" % g)
        self.g = g


class BadComplexStructure(ScenarioError):

    def __init__(self, detail="J^2 != -I"):
        super().__init__("bad complex structure: %s" % detail)


class InfiniteClosure(ScenarioError):

    def __init__(self, bound, generator=None):
        if generator is None:
            message = "group closure exceeds %d elements" % bound
        else:
            message = "generator %s has no finite order within %d steps" % (generator, bound)
        super().__init__(message)
        self.bound = bound
        self.generator = generator


class NonUnimodular(ScenarioError):

    def __init__(self, g, det):
        super().__init__("generator %s has determinant %s, expected +1 or -1" % (g, det))
        self.g = g
        self.det = det


class UnknownElement(KeyError, ScenarioError):
    '''Exception raised when a word label names no group element.

    >>> isinstance(UnknownElement('x'), LookupError)
    True
    '''

    def __str__(self):
        return "unknown group element %r" % (self.args[0] if self.args else None)


class ModelingError(Error):
    '''The linearized torus model produced an inconsistent quantity.'''


class NegativeK(ModelingError):

    def __init__(self, g, h, k):
        super().__init__("k-number of (%s, %s) is %s, expected a non-negative integer" % (g, h, k))
        self.g = g
        self.h = h
        self.k = k


class NotASubgroupRelation(ModelingError):

    def __init__(self, source, target):
        super().__init__("%s does not lie in the subgroup generated by %s" % (list(target), list(source)))
        self.source = source
        self.target = target


class ClassError(ValueError, Error):
    '''Base class for malformed polyvector or cohomology classes.'''


class NotHomogeneous(ClassError):

    def __init__(self, degrees):
        super().__init__("class is not homogeneous: degrees %s" % sorted(str(d) for d in degrees))
        self.degrees = degrees


class SectorMismatch(ClassError):

    def __init__(self, sectors):
        super().__init__("expected a single-sector class, got sectors %s" % sorted(sectors))
        self.sectors = sectors


class ClassParseError(ClassError):

    def __init__(self, expression, reason):
        super().__init__("cannot parse class %r: %s" % (expression, reason))
        self.expression = expression
        self.reason = reason


class NotHolomorphicSymplectic(Error):

    def __init__(self, element):
        super().__init__("element %s does not preserve the holomorphic volume form" % element)
        self.element = element


class CliError(Error):
    '''Base class for command line failures.'''


class ParseError(CliError):

    def __init__(self, path, location, reason):
        super().__init__("%s: %s: %s" % (path, location, reason))
        self.path = path
        self.location = location
        self.reason = reason


class ValidationError(CliError):

    def __init__(self, path, cause):
        super().__init__("%s: %s" % (path, cause))
        self.path = path
        self.cause = cause


class UnknownCommand(CliError):

    def __init__(self, command):
        super().__init__("unknown command %r" % command)
        self.command = command
