import json
from fractions import Fraction
from unittest import TestCase

from mock import Mock
from testfixtures import compare

from app.orbifold_ht.constants import FAIL, PASS, REPORT_SCHEMA_VERSION, STRUCTURED, TABLE
from app.orbifold_ht.lazy import LazyCache, LazyTable
from app.orbifold_ht.report import BigradedTable, Check, RowsReport, VerificationReport, emit_report


class CheckTest(TestCase):

    def test_witnesses_are_capped(self):
        check = Check("unit", max_witnesses=2)
        for i in range(5):
            check.expect(False, {"a": str(i)})
        result = check.result()
        self.assertEqual(result.status, FAIL)
        self.assertEqual((result.checked, result.failures), (5, 5))
        self.assertEqual(len(result.witnesses), 2)

    def test_witness_is_built_only_on_failure(self):
        check = Check("unit")
        build = Mock(return_value={"a": "x"})
        check.expect(True, build)
        build.assert_not_called()
        check.expect(False, build)
        build.assert_called_once_with()
        self.assertEqual(check.result().witnesses, ({"a": "x"},))

    def test_no_checks_pass(self):
        self.assertEqual(Check("empty").result().status, PASS)


class VerificationReportTest(TestCase):

    def _report(self):
        report = VerificationReport(scenario="kummer", suite="ring-axioms", options={"mode": "exhaustive"})
        passing = Check("unit")
        passing.count(3)
        failing = Check("associativity")
        failing.expect(False, {"b": "t:1:|", "a": "e:1:|"})
        report.add(passing.result())
        report.add(failing.result())
        return report

    def test_status(self):
        report = self._report()
        self.assertFalse(report.passed)
        self.assertTrue(report.check("unit").passed)
        with self.assertRaises(KeyError):
            report.check("closure")

    def test_structured_rendering(self):
        body = json.loads(emit_report(self._report(), STRUCTURED))
        self.assertEqual(body["schemaVersion"], REPORT_SCHEMA_VERSION)
        self.assertEqual(body["status"], FAIL)
        self.assertEqual(list(body["checks"][0]), ["id", "status", "checked", "failures", "detail", "witnesses"])
        compare(expected=[{"a": "e:1:|", "b": "t:1:|"}], actual=body["checks"][1]["witnesses"])

    def test_table_rendering(self):
        text = emit_report(self._report(), TABLE)
        self.assertIn("status: fail", text)
        self.assertIn("  associativity: a=e:1:|, b=t:1:|", text)

    def test_timing_is_opt_in(self):
        report = self._report()
        report.timing = 0.25
        self.assertNotIn("timing", report.as_dict())
        self.assertEqual(report.as_dict(include_timing=True)["timing"], 0.25)
        self.assertNotIn("timing", emit_report(report, TABLE, include_timing=True))

    def test_unknown_format(self):
        with self.assertRaises(ValueError):
            emit_report(self._report(), "yaml")


class BigradedTableTest(TestCase):

    def test_rational_bidegrees(self):
        table = BigradedTable(scenario="e-minus-one", title="CR", convention="new")
        table.add((0, 0))
        table.add((Fraction(1, 2), Fraction(1, 2)), 4)
        self.assertEqual(table[(Fraction(1, 2), Fraction(1, 2))], 4)
        self.assertEqual(table.totals_by_degree(), {0: 1, 1: 4})
        entries = table.as_dict()["entries"]
        self.assertEqual(entries[1], {"p": "1/2", "q": "1/2", "dimension": 4})

    def test_degree_vector_skips_rational_degrees(self):
        table = BigradedTable(scenario="x", title="HT", convention="new")
        table.add((Fraction(1, 3), 0))
        table.add((1, 1))
        self.assertEqual(table.degree_vector(), (0, 0, 1))

    def test_empty(self):
        table = BigradedTable(scenario="x", title="HT", convention="new")
        self.assertEqual(table.degree_vector(), ())
        self.assertEqual(table.as_dict()["entries"], [])


class RowsReportTest(TestCase):

    def test_header_only(self):
        report = RowsReport("kummer", "sectors", ("element", "age"))
        self.assertEqual(report.render(), "scenario: kummer\nsectors\nelement  age\n")
        self.assertEqual(report.as_dict()["rows"], [])

    def test_columns_align(self):
        report = RowsReport("kummer", "ages", ("element", "age"), [{"element": "t", "age": "1"}])
        self.assertEqual(report.render().splitlines()[-1], "t        1")


class LazyTest(TestCase):

    def test_values_are_built_once(self):
        factory = Mock(side_effect=lambda key: key * 2)
        table = LazyTable(("a", "b"), factory)
        self.assertEqual(len(table), 2)
        self.assertEqual(table.filled(), 0)
        self.assertEqual(table["a"], "aa")
        self.assertEqual(table["a"], "aa")
        factory.assert_called_once_with("a")

    def test_keys_outside_the_domain(self):
        table = LazyTable(("a",), Mock())
        with self.assertRaises(KeyError):
            table["z"]
        self.assertNotIn("z", table)
        self.assertEqual(list(table), ["a"])

    def test_cache(self):
        factory = Mock(side_effect=lambda key: len(key))
        cache = LazyCache(factory)
        self.assertEqual(cache.get(("g", "h")), 2)
        self.assertEqual(cache.get(("g", "h")), 2)
        self.assertEqual(len(cache), 1)
        factory.assert_called_once_with(("g", "h"))
