"""
Scenario loading and command dispatch behind the orbifold-ht executable.

A scenario file is JSON:

    {
      "name": "kummer",
      "n": 2,
      "complexStructure": [["0", "-1", "0", "0"], ...],
      "generators": [{"name": "t", "order": 2, "matrix": [[-1, 0, 0, 0], ...]}],
      "options": {"omegaCharacterSign": -1, "signConvention": "ordered", "closureBound": 1024}
    }

Complex structure entries are strings "p/q" or cyclotomic expressions such
as "2/3*z12 - 1/3*z12^3"; generator entries are integers.
"""
import json
import re
import time
from dataclasses import replace
from pathlib import Path

import importlib_resources

from app.orbifold_ht.chenruan import CRProduct, CRSpace, compare_sides, orbifold_hodge_table
from app.orbifold_ht.constants import (
    DEFAULT_SAMPLE_COUNT, EXHAUSTIVE, FAIL, IDENTITY_LABEL, NEW, PASS,
)
from app.orbifold_ht.exceptions import ParseError, ScenarioError, UnknownCommand, ValidationError
from app.orbifold_ht.exactfield import parse_scalar
from app.orbifold_ht.fixedloci import FixedLoci
from app.orbifold_ht.htspace import HTSpace
from app.orbifold_ht.product import HTProduct, RingAxiomSuite
from app.orbifold_ht.report import RowsReport
from app.orbifold_ht.sectors import format_coefficient
from app.orbifold_ht.torusaction import GeneratorSpec, ScenarioFile, ScenarioOptions, validate_scenario
from app.orbifold_ht.utils import format_index_set, format_rational, get_logger

SCENARIO_PACKAGE = "app.orbifold_ht.scenarios"
SCENARIO_SUFFIX = ".scenario"

COMMANDS = ("sectors", "ages", "fixed-loci", "ht-table", "cr-table", "product", "middle-term", "verify",
            "compare", "lemmas")

_GENERATOR_NAME = re.compile(r"^[A-Za-z][A-Za-z0-9_]*$")


def bundled_scenarios():
    root = importlib_resources.files(SCENARIO_PACKAGE)
    return sorted(p.name[:-len(SCENARIO_SUFFIX)] for p in root.iterdir() if p.name.endswith(SCENARIO_SUFFIX))


def _read_scenario_text(path):
    candidate = Path(path)
    if candidate.is_file():
        return candidate.read_text(encoding="utf-8")
    name = candidate.name if candidate.name.endswith(SCENARIO_SUFFIX) else candidate.name + SCENARIO_SUFFIX
    bundled = importlib_resources.files(SCENARIO_PACKAGE).joinpath(name)
    if bundled.is_file():
        return bundled.read_text(encoding="utf-8")
    raise ParseError(path, "file", "no such scenario file or bundled scenario")


def _require(condition, path, location, reason):
    if not condition:
        raise ParseError(path, location, reason)


def _is_int(value):
    return isinstance(value, int) and not isinstance(value, bool)


def _square_rows(rows, size, path, location, entry):
    _require(isinstance(rows, list) and len(rows) == size, path, location,
             "expected %d rows, got %s" % (size, len(rows) if isinstance(rows, list) else type(rows).__name__))
    parsed = []
    for i, row in enumerate(rows):
        where = "%s[%d]" % (location, i)
        _require(isinstance(row, list) and len(row) == size, path, where,
                 "expected %d entries, got %s" % (size, len(row) if isinstance(row, list) else type(row).__name__))
        parsed.append(tuple(entry(value, "%s[%d]" % (where, j)) for j, value in enumerate(row)))
    return tuple(parsed)


def parse_scenario_text(text, path="<scenario>"):
    """Turn scenario JSON into a ScenarioFile; every failure names its field path."""
    try:
        body = json.loads(text)
    except json.JSONDecodeError as e:
        raise ParseError(path, "line %d column %d" % (e.lineno, e.colno), e.msg)
    _require(isinstance(body, dict), path, "$", "expected an object")

    name = body.get("name")
    _require(isinstance(name, str) and name, path, "name", "expected a non-empty string")
    n = body.get("n")
    _require(_is_int(n) and n >= 1, path, "n", "expected a positive integer")
    size = 2 * n

    def scalar_entry(value, where):
        if _is_int(value):
            return value
        _require(isinstance(value, str), path, where, "expected a string \"p/q\"")
        try:
            return parse_scalar(value)
        except (ValueError, ZeroDivisionError):
            raise ParseError(path, where, "cannot parse %r" % value)

    def integer_entry(value, where):
        _require(_is_int(value), path, where, "expected an integer, got %r" % (value,))
        return value

    complex_structure = _square_rows(body.get("complexStructure"), size, path, "complexStructure", scalar_entry)

    raw_generators = body.get("generators", [])
    _require(isinstance(raw_generators, list), path, "generators", "expected a list")
    generators, seen = [], set()
    for i, spec in enumerate(raw_generators):
        where = "generators[%d]" % i
        _require(isinstance(spec, dict), path, where, "expected an object")
        gname = spec.get("name")
        _require(isinstance(gname, str) and _GENERATOR_NAME.match(gname) and gname != IDENTITY_LABEL,
                 path, where + ".name", "expected an identifier other than %r" % IDENTITY_LABEL)
        _require(gname not in seen, path, where + ".name", "duplicate generator %r" % gname)
        seen.add(gname)
        order = spec.get("order")
        _require(order is None or (_is_int(order) and order >= 1), path, where + ".order",
                 "expected a positive integer")
        matrix = _square_rows(spec.get("matrix"), size, path, where + ".matrix", integer_entry)
        generators.append(GeneratorSpec(name=gname, matrix=matrix, order=order))

    raw_options = body.get("options", {})
    _require(isinstance(raw_options, dict), path, "options", "expected an object")
    defaults = ScenarioOptions()
    omega_sign = raw_options.get("omegaCharacterSign", defaults.omega_sign)
    _require(_is_int(omega_sign), path, "options.omegaCharacterSign", "expected +1 or -1")
    sign_profile = raw_options.get("signConvention", defaults.sign_profile)
    _require(isinstance(sign_profile, str), path, "options.signConvention", "expected a string")
    closure_bound = raw_options.get("closureBound", defaults.closure_bound)
    _require(_is_int(closure_bound), path, "options.closureBound", "expected an integer")
    try:
        options = ScenarioOptions(omega_sign=omega_sign, sign_profile=sign_profile, closure_bound=closure_bound)
    except ScenarioError as e:
        raise ValidationError(path, e)

    return ScenarioFile(name=name, n=n, complex_structure=complex_structure, generators=tuple(generators),
                        options=options)


def load_scenario(path, omega_sign=None, sign_profile=None):
    """Read, parse and validate a scenario; a path that does not exist is looked up among the bundled ones."""
    raw = parse_scenario_text(_read_scenario_text(path), str(path))
    try:
        scenario = validate_scenario(raw)
        overrides = {}
        if omega_sign is not None:
            overrides["omega_sign"] = omega_sign
        if sign_profile is not None:
            overrides["sign_profile"] = sign_profile
        if overrides:
            scenario = scenario.with_options(replace(scenario.options, **overrides))
    except ScenarioError as e:
        raise ValidationError(path, e)
    return scenario


class CommandRunner(object):
    """Runs one command against a validated scenario and returns a report."""

    def __init__(self, scenario, sector=None, seed=1, count=DEFAULT_SAMPLE_COUNT, mode=EXHAUSTIVE, timing=False,
                 extra=()):
        self.scenario = scenario
        self.sector = sector
        self.seed = seed
        self.count = count
        self.mode = mode
        self.timing = timing
        self.extra = tuple(extra)
        self.logger = get_logger('CommandRunner')
        self.loci = FixedLoci(scenario)
        self._ht = None
        self._cr = None

    @property
    def ht_space(self):
        if self._ht is None:
            self._ht = HTSpace(self.scenario, self.loci)
        return self._ht

    @property
    def cr_space(self):
        if self._cr is None:
            self._cr = CRSpace(self.scenario, self.loci)
        return self._cr

    def run(self, command):
        handler = getattr(self, "run_" + command.replace("-", "_"), None)
        if command not in COMMANDS or handler is None:
            raise UnknownCommand(command)
        self.logger.info("running {COMMAND} on {NAME}".format(COMMAND=command, NAME=self.scenario.name))
        return handler()

    def _elements(self):
        if self.sector is None:
            return self.scenario.labels
        return (self.scenario.element(self.sector).label,)

    def _arguments(self, command, names):
        if len(self.extra) != len(names):
            raise ParseError(command, "arguments", "expected %s, got %d argument(s)"
                             % (" ".join(names), len(self.extra)))
        return self.extra

    def run_sectors(self):
        report = RowsReport(self.scenario.name, "sectors",
                            ("element", "order", "age", "codimension", "fixedDimension", "components"))
        for g in self._elements():
            data = self.loci.sector_data(g)
            report.rows.append({
                "element": g, "order": self.scenario.element(g).order, "age": format_rational(data.age),
                "codimension": data.codimension, "fixedDimension": data.fixed_dimension,
                "components": data.component_group.order,
            })
        return report

    def run_ages(self):
        report = RowsReport(self.scenario.name, "ages", ("element", "age", "exponents"))
        for g in self._elements():
            exponents = self.loci.torus.eigen_data(g).exponents
            report.rows.append({"element": g, "age": format_rational(self.loci.torus.age(g)),
                                "exponents": ",".join(format_rational(a) for a in exponents)})
        return report

    def run_fixed_loci(self):
        report = RowsReport(self.scenario.name, "fixed-loci",
                            ("element", "fixedIndices", "invariantFactors", "components"))
        for g in self._elements():
            data = self.loci.sector_data(g)
            report.rows.append({
                "element": g, "fixedIndices": format_index_set(data.fixed_indices) or "-",
                "invariantFactors": ",".join(str(d) for d in data.component_group.invariant_factors) or "-",
                "components": data.component_group.order,
            })
        return report

    def run_ht_table(self):
        return self.ht_space.dimension_table(NEW, title="HT")

    def run_cr_table(self):
        return orbifold_hodge_table(self.cr_space)

    def run_product(self):
        left, right = self._arguments("product", ("left", "right"))
        space = self.ht_space
        a, b = space.parse_class(left), space.parse_class(right)
        result = HTProduct(space).multiply(a, b)
        report = RowsReport(self.scenario.name, "product", ("term", "coefficient", "p", "q"))
        for label, coefficient in result:
            p, q = space.bidegree(label)
            report.rows.append({"term": space.format_label(label), "coefficient": format_coefficient(coefficient),
                                "p": format_rational(p), "q": format_rational(q)})
        self.logger.info("{A} * {B} = {C}".format(A=left, B=right, C=space.format_class(result)))
        return report

    def run_middle_term(self):
        g, h, p, q, p2, q2 = self._arguments("middle-term", ("g", "h", "p", "q", "p'", "q'"))
        try:
            degrees = [int(v) for v in (p, q, p2, q2)]
        except ValueError:
            raise ParseError("middle-term", "arguments", "bidegrees must be integers")
        product = HTProduct(self.ht_space)
        pair = self.loci.pair_data(g, h)
        table = product.middle_term_table(g, h, *degrees)
        report = RowsReport(self.scenario.name, "middle-term", ("g", "h", "r", "k", "i", "dimension"))
        for i, dimension in sorted(table.items()):
            report.rows.append({"g": pair.g, "h": pair.h, "r": pair.r, "k": pair.k_number, "i": i,
                                "dimension": dimension})
        return report

    def _timed(self, build):
        started = time.perf_counter()
        report = build()
        if self.timing:
            report.timing = time.perf_counter() - started
        self.logger.info("{SUITE}: {STATUS}".format(SUITE=report.suite, STATUS=PASS if report.passed else FAIL))
        return report

    def run_verify(self):
        product = HTProduct(self.ht_space)
        return self._timed(lambda: RingAxiomSuite(product, mode=self.mode, seed=self.seed, count=self.count).verify())

    def run_compare(self):
        return self._timed(lambda: compare_sides(HTProduct(self.ht_space), CRProduct(self.cr_space)))

    def run_lemmas(self):
        return self._timed(self.loci.verify_lemmas)


def run_command(command, scenario, **flags):
    return CommandRunner(scenario, **flags).run(command)