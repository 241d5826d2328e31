"""``plab <suite> --config <file> [--seed N] [--jobs K] [--replay <witness>] [--out <path>]``"""

from __future__ import annotations

import argparse
import json
import sys

from plab.errors import ConfigError, SizeCapError
from plab.runner import SUITES, RunConfig, Report, replays_from, run_suite

EXIT_USAGE = 2


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"plab: error: {message}", file=sys.stderr)
        sys.exit(EXIT_USAGE)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="plab", description="Run one verification suite and write a JSON report.")
    p.add_argument("suite", help="one of: " + ", ".join(SUITES))
    p.add_argument("--config", required=True, help="JSON config file")
    p.add_argument("--seed", type=int, default=None, help="overrides the config seed")
    p.add_argument("--jobs", type=int, default=1, help="worker processes")
    p.add_argument("--replay", default=None,
                   help="witness file: a replay record or a report whose failures are rerun")
    p.add_argument("--out", default=None, help="report path (stdout when omitted)")
    p.add_argument("--timing", action="store_true", help="include wall-clock timing in the report")
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.suite not in SUITES:
        print(f"plab: unknown suite {args.suite!r}; choose from {', '.join(SUITES)}",
              file=sys.stderr)
        return EXIT_USAGE
    if args.jobs < 1:
        print("plab: --jobs must be at least 1", file=sys.stderr)
        return EXIT_USAGE
    try:
        with open(args.config) as fh:
            data = json.load(fh)
        cfg = RunConfig.from_dict(args.suite, data, args.seed, args.out)
        if args.replay:
            with open(args.replay) as fh:
                records = replays_from(json.load(fh))
            parts = [run_suite(cfg, 1, r) for r in records]
            report = Report(cfg.suite, parts[0].config if parts else {},
                            [i for r in parts for i in r.instances])
        else:
            report = run_suite(cfg, args.jobs)
    except (OSError, json.JSONDecodeError, ConfigError, SizeCapError) as exc:
        print(f"plab: {exc}", file=sys.stderr)
        return EXIT_USAGE
    text = report.to_json(args.timing)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    t = report.totals
    print(f"{cfg.suite}: {t['passed']}/{t['checks']} checks passed", file=sys.stderr)
    return report.exit_code


if __name__ == "__main__":
    sys.exit(main())
