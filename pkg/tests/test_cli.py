import json
from unittest import TestCase

from click.testing import CliRunner

from zerosum import __version__, cli


def invoke(*args):
    return CliRunner().invoke(cli.main, list(args))


class DavenportTestCase(TestCase):
    def setUp(self):
        self.result = invoke("davenport", "--k", "3")

    def test_exit_status(self):
        self.assertEqual(self.result.exit_code, 0)

    def test_output(self):
        self.assertEqual(
            json.loads(self.result.stdout),
            {
                "k": 3,
                "value": 5,
                "witness": "3^2,-2^3",
                "cap": 9,
                "verified_empty": [6, 7, 8, 9],
            },
        )

    def test_output_is_reproducible(self):
        self.assertEqual(invoke("davenport", "--k", "3").stdout, self.result.stdout)


class DetectTestCase(TestCase):
    def setUp(self):
        self.result = invoke(
            "detect", "--k", "3", "--t", "60", "--seq", "3^14,2^3,-1^48"
        )

    def test_exit_status(self):
        self.assertEqual(self.result.exit_code, 0)

    def test_output(self):
        self.assertEqual(
            json.loads(self.result.stdout), {"contains": False, "witness": None}
        )


class DetectWithWitnessTestCase(TestCase):
    def test_output(self):
        result = invoke("detect", "--k", "3", "--t", "4", "--seq", "3^14,2^3,-1^48")
        self.assertEqual(
            json.loads(result.stdout), {"contains": True, "witness": "3,-1^3"}
        )


class SprimeTestCase(TestCase):
    def setUp(self):
        self.result = invoke("sprime", "--k", "2", "--t", "6")

    def test_exit_status(self):
        self.assertEqual(self.result.exit_code, 0)

    def test_output(self):
        output = json.loads(self.result.stdout)
        self.assertEqual(output["kind"], "finite")
        self.assertEqual(output["value"], 8)
        self.assertEqual(output["extremal"], "2,1^2,-1^4")
        self.assertEqual(output["verified_upper"], 8)
        self.assertEqual(output["verified_lengths"], [8])
        self.assertGreater(output["stats"]["nodes"], 0)


class SprimeInfiniteTestCase(TestCase):
    def test_output(self):
        output = json.loads(invoke("sprime", "--k", "3", "--t", "30").stdout)
        self.assertEqual(output["kind"], "infinite")
        self.assertEqual(output["divisor"], 4)
        self.assertEqual(output["family"], "(1^3,-3)^[x]")


class BudgetExhaustedTestCase(TestCase):
    def setUp(self):
        self.result = invoke("sprime", "--k", "3", "--t", "60", "--budget-nodes", "1")

    def test_exit_status(self):
        self.assertEqual(self.result.exit_code, 3)

    def test_partial_output(self):
        output = json.loads(self.result.stdout)
        self.assertEqual(output["kind"], "partial")
        self.assertIsNone(output["value"])
        self.assertEqual(output["verified_lengths"], [])

    def test_error_message(self):
        self.assertIn("budget exhausted", self.result.stderr)


class MissingFlagTestCase(TestCase):
    def setUp(self):
        self.result = invoke("detect", "--k", "3", "--seq", "1,-1")

    def test_exit_status(self):
        self.assertEqual(self.result.exit_code, 2)

    def test_error_message(self):
        self.assertIn("detect requires --t", self.result.stderr)


class MalformedSequenceTestCase(TestCase):
    def setUp(self):
        self.result = invoke("spectrum", "--k", "3", "--seq", "3^x")

    def test_exit_status(self):
        self.assertEqual(self.result.exit_code, 2)

    def test_error_message(self):
        self.assertIn("Malformed term '3^x'", self.result.stderr)


class ValueOutOfRangeTestCase(TestCase):
    def test_exit_status(self):
        result = invoke("spectrum", "--k", "3", "--seq", "4,-4")
        self.assertEqual(result.exit_code, 2)


class WitnessNotInSpectrumTestCase(TestCase):
    def test_exit_status(self):
        result = invoke("witness", "--k", "3", "--t", "60", "--seq", "3^14,2^3,-1^48")
        self.assertEqual(result.exit_code, 2)


class NonExistentLogLevelTestCase(TestCase):
    def setUp(self):
        self.result = invoke("davenport", "--k", "2", "--loglevel", "NONEXISTENT")

    def test_exit_status(self):
        self.assertEqual(self.result.exit_code, 2)

    def test_error_message(self):
        self.assertIn(
            "loglevel must be one of ERROR, WARNING, INFO, DEBUG", self.result.stderr
        )


class LogFileTestCase(TestCase):
    def test_start_and_end_are_logged(self):
        runner = CliRunner()
        with runner.isolated_filesystem():
            result = runner.invoke(
                cli.main,
                ["davenport", "--k", "2", "--loglevel", "info", "--logfile", "log"],
            )
            self.assertEqual(result.exit_code, 0)
            with open("log") as f:
                log = f.read()
        self.assertIn("Starting zerosum davenport", log)
        self.assertIn("Finished zerosum davenport", log)


class TableFormatTestCase(TestCase):
    def test_output(self):
        result = invoke("bounds", "--k", "3", "--t", "60", "--format", "table")
        self.assertEqual(result.exit_code, 0)
        lines = result.stdout.splitlines()
        self.assertEqual(lines[0].split(), ["lower", "66"])
        self.assertEqual(lines[1].split(), ["upper", "72"])

    def test_nested_values_are_flattened(self):
        result = invoke(
            "factorize", "--k", "3", "--seq", "3^14,2^3,-1^48", "--format", "table"
        )
        self.assertIn("profile.alpha", result.stdout)


class ParseCheckTestCase(TestCase):
    def test_round_trip(self):
        result = invoke("parse-check", "--k", "3", "--seq", "3 -2^3 3")
        self.assertEqual(
            json.loads(result.stdout),
            {
                "k": 3,
                "seq": "3^2,-2^3",
                "length": 5,
                "sum": 0,
                "zero_sum": True,
                "canonical": "3^2,-2^3",
            },
        )


class BetaFactorizeTestCase(TestCase):
    def test_output(self):
        result = invoke("beta-factorize", "--beta", "3", "--seq", "5,7,7,-11")
        self.assertEqual(
            json.loads(result.stdout),
            {"beta": 3, "X0": [7, -11], "parts": [[5, 7]]},
        )


class FactorizeTestCase(TestCase):
    def test_profile(self):
        result = invoke("factorize", "--k", "3", "--seq", "3^14,2^3,-1^48")
        output = json.loads(result.stdout)
        self.assertEqual(
            output["profile"], {"L": [3, 4], "alpha": 4, "n": {"3": 3, "4": 14}}
        )


class Predict37TestCase(TestCase):
    def test_strict_rejects_infinite_case(self):
        result = invoke(
            "predict37", "--k", "3", "--t", "7", "--seq", "3^2,-2^3", "--strict"
        )
        self.assertEqual(result.exit_code, 2)

    def test_prediction(self):
        result = invoke("predict37", "--k", "3", "--t", "12", "--seq", "3^14,2^3,-1^48")
        output = json.loads(result.stdout)
        self.assertTrue(output["predicted"])
        self.assertEqual(output["beta"], 3)


class MinimalTestCase(TestCase):
    def test_enumerate(self):
        result = invoke("minimal", "--k", "3", "--length", "5")
        output = json.loads(result.stdout)
        self.assertEqual(output["count"], 2)
        self.assertEqual(output["sequences"], ["3^2,-2^3", "2^3,-3^2"])

    def test_check(self):
        result = invoke("minimal", "--k", "3", "--seq", "3^2,-2^3")
        self.assertTrue(json.loads(result.stdout)["minimal"])

    def test_needs_seq_or_length(self):
        self.assertEqual(invoke("minimal", "--k", "3").exit_code, 2)


class FamilyTestCase(TestCase):
    def test_output(self):
        result = invoke("family", "--k", "1", "--t", "3", "--x", "5")
        self.assertEqual(
            json.loads(result.stdout),
            {"divisor": 2, "block": "1,-1", "sequence": "1^5,-1^5", "length": 10},
        )


class VerifyTestCase(TestCase):
    def test_output(self):
        result = invoke("verify", "--k", "3", "--t", "60", "--seq", "3^14,2^3,-1^48")
        self.assertTrue(json.loads(result.stdout)["avoiding"])


class VersionTestCase(TestCase):
    def test_version(self):
        self.assertIn(__version__, invoke("--version").output)
