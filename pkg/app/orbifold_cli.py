import argparse
import sys

from app.orbifold_ht.cli import COMMANDS, CommandRunner, load_scenario
from app.orbifold_ht.constants import (
    DEFAULT_SAMPLE_COUNT, EXHAUSTIVE, EXHAUSTIVE_DEG2, LOG_LEVEL, SAMPLED, SIGN_PROFILES, STRUCTURED, TABLE,
)
from app.orbifold_ht.exceptions import Error
from app.orbifold_ht.report import VerificationReport, emit_report
from app.orbifold_ht.utils import set_log_level


def _omega_sign(text):
    if text not in ("+1", "1", "-1"):
        raise argparse.ArgumentTypeError("expected +1 or -1, got %r" % text)
    return -1 if text == "-1" else 1


def parse_args(argv=None):
    parser = argparse.ArgumentParser(
        prog="orbifold-ht",
        description="Orbifold polyvector fields and Chen-Ruan cohomology of torus quotients.",
    )
    parser.add_argument("command", choices=COMMANDS)
    parser.add_argument("scenario", help="scenario file, or the name of a bundled scenario")
    parser.add_argument("extra", nargs="*",
                        help="product: two class expressions g:k:B|Q; middle-term: g h p q p' q'")
    parser.add_argument("--output", choices=(TABLE, STRUCTURED), default=TABLE)
    parser.add_argument("--sector", default=None, help="restrict per-element listings to one element")
    parser.add_argument("--seed", type=int, default=1)
    parser.add_argument("--count", type=int, default=DEFAULT_SAMPLE_COUNT)
    parser.add_argument("--omega-sign", type=_omega_sign, default=None)
    parser.add_argument("--sign-profile", choices=SIGN_PROFILES, default=None)
    parser.add_argument("--mode", choices=(EXHAUSTIVE, EXHAUSTIVE_DEG2, SAMPLED), default=EXHAUSTIVE)
    parser.add_argument("--timing", action="store_true", help="add the timing field to structured output")
    parser.add_argument("--log-level", type=str.upper, choices=("DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"),
                        default=LOG_LEVEL.upper())
    return parser.parse_args(argv)


def main(argv=None):
    args = parse_args(argv)
    set_log_level(args.log_level)
    try:
        scenario = load_scenario(args.scenario, omega_sign=args.omega_sign, sign_profile=args.sign_profile)
        runner = CommandRunner(scenario, sector=args.sector, seed=args.seed, count=args.count, mode=args.mode,
                               timing=args.timing, extra=args.extra)
        report = runner.run(args.command)
    except Error as e:
        sys.stderr.write("orbifold-ht: error: %s\n" % e)
        return 1
    sys.stdout.write(emit_report(report, args.output, include_timing=args.timing))
    if isinstance(report, VerificationReport) and not report.passed:
        return 1
    return 0


def run():
    sys.exit(main())


if __name__ == "__main__":
    run()
