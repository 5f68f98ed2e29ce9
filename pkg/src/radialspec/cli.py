"""Command line entry point.

    radialspec run --config CONFIG [--strict] [--jobs K] [--out DIR]
    radialspec presets list
    radialspec presets show NAME

Exit codes: 0 all checks passed, 1 a check failed, 2 bad config, 3 I/O error.
"""

import argparse
import json
import logging
import sys

from .errors import ConfigError
from .presets import load_catalog

EXIT_OK, EXIT_FAIL, EXIT_CONFIG, EXIT_IO = 0, 1, 2, 3

log = logging.getLogger("radialspec")


def _parser():
    parser = argparse.ArgumentParser(prog="radialspec", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run the verification suite described by a config file")
    run.add_argument("--config", required=True, help="JSON experiment config (schema 1)")
    run.add_argument("--strict", action="store_true", help="stop after the first cell with a failing check")
    run.add_argument("--jobs", type=int, default=1, help="worker processes (default 1)")
    run.add_argument("--out", help="output directory (overrides the config)")
    run.add_argument("--no-figures", action="store_true", help="skip PNG figures")

    presets = sub.add_parser("presets", help="inspect the built-in preset catalog")
    psub = presets.add_subparsers(dest="action", required=True)
    psub.add_parser("list", help="list preset names")
    show = psub.add_parser("show", help="print one preset entry as JSON")
    show.add_argument("name")
    return parser


def _cmd_presets(args):
    catalog = load_catalog()
    if args.action == "list":
        for name, entry in catalog.items():
            print(f"{name:<16}{entry['kind']:<8}v{entry.get('version', 1)}")
        return EXIT_OK
    if args.name not in catalog:
        print(f"unknown preset {args.name!r}; choose from {', '.join(catalog)}", file=sys.stderr)
        return EXIT_CONFIG
    print(json.dumps(catalog[args.name], indent=2))
    return EXIT_OK


def _cmd_run(args):
    # imported here so `presets` stays fast
    from . import runner

    try:
        config = runner.ExperimentConfig.load(args.config)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as exc:
        print(f"cannot read config: {exc}", file=sys.stderr)
        return EXIT_IO
    if args.jobs < 1:
        print("config error: --jobs must be at least 1", file=sys.stderr)
        return EXIT_CONFIG
    out = args.out or config.out
    try:
        report = runner.run(config, strict=args.strict, jobs=args.jobs)
    except runner.StrictAbort as exc:
        report = exc.report
    try:
        runner.emit(report, out, figures=not args.no_figures)
    except OSError as exc:
        print(f"cannot write results: {exc}", file=sys.stderr)
        return EXIT_IO
    sys.stdout.write(runner.verdict_table(report))
    return EXIT_OK if report.passed else EXIT_FAIL


def main(argv=None):
    args = _parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(asctime)s %(name)s: %(message)s")
    if args.command == "presets":
        return _cmd_presets(args)
    return _cmd_run(args)


if __name__ == "__main__":
    sys.exit(main())
