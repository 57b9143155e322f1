#!/usr/bin/env python3
"""
Main entry point for the hopforce command line
"""

import argparse
import csv
import io
import json
import logging
import os
import sys
from logging.handlers import RotatingFileHandler
from multiprocessing import cpu_count

import networkx as nx

from hopforce.bounds import BoundReport, verify_bounds
from hopforce.config import ConfigManager
from hopforce.errors import (EXIT_MISMATCH, EXIT_OK, EXIT_USAGE, BoundViolation, ForcingError, HopforceError,
                             LimitExceeded)
from hopforce.extremal import atlas_lines, generate_Gk, generate_th_le, throttling_atlas
from hopforce.forcing import Rule, schedule_to_dict
from hopforce.graph import bits, canonical_backend, describe, make_family, parse_graph6, to_mask
from hopforce.sharding import resolve_jobs, run_sharded
from hopforce.solvers import (INF, SearchLimits, certificate_from_dict, format_value, forcing_number,
                              is_forcing_set, min_propagation_time, product_throttling, throttling_number)
from hopforce.suite import run_suite

CONFIG_DIR = os.path.join(os.path.expanduser("~"), ".config", "hopforce")
CONFIG_FILE = os.path.join(CONFIG_DIR, "settings.ini")
LOG_FILE = os.path.join(CONFIG_DIR, "hopforce.log")

DEFAULT_SETTINGS = {
    "rule": "H",
    "jobs": 1,
    "limit_seconds": 0,
    "limit_states": 0,
    "output": "plain",
    "progress": False,
}

OUTPUTS = ("plain", "json", "csv")


_installed_handlers = []


def setup_logging(verbose=False, log_file=None):
    """Set up logging with appropriate level based on verbose flag"""
    log_file = log_file or LOG_FILE
    os.makedirs(os.path.dirname(log_file), exist_ok=True)
    root_logger = logging.getLogger()
    # handlers from an earlier call in the same process are replaced, not stacked
    while _installed_handlers:
        handler = _installed_handlers.pop()
        root_logger.removeHandler(handler)
        handler.close()

    # Set up log rotation: 1MB per file, keep 3 backups
    log_handler = RotatingFileHandler(log_file, maxBytes=1_000_000, backupCount=3)
    log_formatter = logging.Formatter('%(asctime)s %(levelname)s: %(message)s')
    log_handler.setFormatter(log_formatter)

    if verbose:
        root_logger.setLevel(logging.DEBUG)
        console = logging.StreamHandler(sys.stderr)
        console.setFormatter(log_formatter)
        _installed_handlers.append(console)
        print("🔍 Verbose logging enabled - detailed logs will be shown", file=sys.stderr)
    else:
        root_logger.setLevel(logging.WARNING)

    _installed_handlers.append(log_handler)
    for handler in _installed_handlers:
        root_logger.addHandler(handler)
    return root_logger


def startup_summary(jobs, config_file=CONFIG_FILE):
    logging.info(f"hopforce: networkx {nx.__version__}, canonical forms via {canonical_backend()}")
    logging.info(f"workers: {jobs} of {cpu_count()} CPU(s), settings from {config_file}")


# inputs

def read_sources(args):
    """(label, source) pairs; a source is ('g6', text) or ('family', name, params)"""
    if args.family:
        name, *params = args.family
        label = " ".join(args.family)
        return [(label, ("family", name, tuple(params)))]
    if args.g6 is not None:
        return [(args.g6, ("g6", args.g6))]
    stream = sys.stdin if args.file == "-" else open(args.file, encoding="ascii", errors="surrogateescape")
    try:
        lines = [line.strip() for line in stream]
    finally:
        if stream is not sys.stdin:
            stream.close()
    return [(line, ("g6", line)) for line in lines if line and not line.startswith("#")]


def load_graph(source):
    if source[0] == "g6":
        return parse_graph6(source[1])
    try:
        params = [int(p) for p in source[2]]
    except ValueError:
        raise HopforceError(f"family parameters must be integers, got {' '.join(source[2])}") from None
    return make_family(source[1], *params)


# per-graph computations

def _recheck(g, cert):
    try:
        certificate_from_dict(g, json.loads(json.dumps(cert.to_dict())))
    except ForcingError as e:
        raise BoundViolation(f"certificate failed re-validation: {e}") from None


def compute_number(g, options):
    rule = options["rule"]
    size, base = forcing_number(g, rule, options["limits"])
    if options["check"] and not is_forcing_set(g, base, rule, options["limits"])[0]:
        raise BoundViolation("reported witness is not a forcing set")
    return {"rule": rule.value, "value": size, "witness": list(bits(base))}


def compute_throttle(g, options):
    rule = options["rule"]
    if options["product"]:
        cert = product_throttling(g, options["product"], rule, check=options["check"], limits=options["limits"])
        return {"rule": rule.value, "quantity": f"product_{cert.variant}", "value": cert.value,
                "k": cert.k, "pt": cert.pt_k}
    cert = throttling_number(g, rule, options["limits"])
    if options["check"]:
        _recheck(g, cert)
    return {"rule": rule.value, "quantity": "throttle", "value": cert.th, "k": cert.size, "pt": cert.pt,
            "certificate": cert.to_dict()}


def compute_pt(g, options):
    rule = options["rule"]
    base = to_mask(options["base"])
    pt, schedule = min_propagation_time(g, base, rule, limits=options["limits"])
    row = {"rule": rule.value, "value": pt, "k": len(set(options["base"])), "pt": pt}
    if schedule is not None:
        row["certificate"] = schedule_to_dict(schedule, rule)
    return row


def compute_bounds(g, options):
    report = verify_bounds(g, compute=options["exact"], limits=options["limits"])
    return {"report": report, "value": report.exact}


COMPUTATIONS = {
    "number": compute_number,
    "throttle": compute_throttle,
    "pt": compute_pt,
    "bounds": compute_bounds,
}


def run_row(task):
    """One output row; errors become part of the row"""
    command, label, source, options = task
    try:
        g = load_graph(source)
        if logging.getLogger().isEnabledFor(logging.DEBUG):
            logging.debug(f"{command} {label}: {describe(g)}")
        return {"input": label, **COMPUTATIONS[command](g, options)}
    except LimitExceeded as e:
        logging.error(f"{label}: {e}")
        row = {"input": label, "error": str(e), "exit_code": e.exit_code}
        if e.partial is not None:
            row.update(partial=True, value=e.partial.th)
        return row
    except HopforceError as e:
        logging.error(f"{label}: {e}")
        return {"input": label, "error": str(e), "exit_code": e.exit_code}


# output

def _plain(value):
    return format_value(value) if isinstance(value, (int, float)) and not isinstance(value, bool) else str(value)


def _jsonable(value):
    if isinstance(value, BoundReport):
        return {name: _jsonable(getattr(value, name)) for name in BoundReport.CSV_FIELDS}
    if isinstance(value, dict):
        return {k: _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    if isinstance(value, float) and value == INF:
        return "inf"
    return value


def format_rows(command, rows, output, batch):
    buffer = io.StringIO()
    if output == "json":
        for row in rows:
            buffer.write(json.dumps(_jsonable(row), sort_keys=True) + "\n")
    elif output == "csv" or command == "bounds":
        writer = csv.writer(buffer, lineterminator="\n")
        if command == "bounds":
            if output == "csv":
                writer.writerow(BoundReport.CSV_FIELDS + ("error",))
            for row in rows:
                if "error" in row:
                    writer.writerow([row["input"]] + [""] * (len(BoundReport.CSV_FIELDS) - 1) + [row["error"]])
                else:
                    writer.writerow(row["report"].to_csv_row() + [""])
        else:
            fields = ("input", "rule", "value", "k", "pt", "error")
            writer.writerow(fields)
            for row in rows:
                writer.writerow([_plain(row[f]) if f in row and row[f] is not None else "" for f in fields])
    else:
        for row in rows:
            if "error" in row:
                text = f"error: {row['error']}"
                if row.get("partial"):
                    text += f" (partial {_plain(row['value'])})"
            else:
                text = _plain(row["value"])
            buffer.write(f"{row['input']}\t{text}\n" if batch else f"{text}\n")
    return buffer.getvalue()


def exit_code_for(rows):
    for row in rows:
        if "exit_code" in row:
            return row["exit_code"]
    return EXIT_OK


# commands

def _settings(args, config_manager):
    rule = Rule.parse(args.rule or config_manager.load_setting("rule"))
    jobs = resolve_jobs(args.jobs if args.jobs is not None else config_manager.load_int("jobs"))
    seconds = args.limit_seconds if args.limit_seconds is not None else config_manager.load_int("limit_seconds")
    states = args.limit_states if args.limit_states is not None else config_manager.load_int("limit_states")
    if seconds < 0 or states < 0:
        raise HopforceError("limits must be nonnegative")
    output = args.output or config_manager.load_setting("output")
    if output not in OUTPUTS:
        raise HopforceError(f"unknown output format {output!r}")
    progress = args.progress or config_manager.load_bool("progress")
    return rule, jobs, SearchLimits(seconds=seconds, states=states), output, progress


def cmd_graphs(args, config_manager):
    rule, jobs, limits, output, progress = _settings(args, config_manager)
    startup_summary(jobs, config_manager.config_file)
    options = {"rule": rule, "limits": limits, "check": args.check,
               "product": getattr(args, "product", None), "base": getattr(args, "base", None),
               "exact": not getattr(args, "no_exact", False)}
    sources = read_sources(args)
    tasks = [(args.command, label, source, options) for label, source in sources]
    rows = list(run_sharded(run_row, tasks, jobs, progress, desc=args.command))
    sys.stdout.write(format_rows(args.command, rows, output, batch=args.file is not None))
    return exit_code_for(rows)


def cmd_atlas(args, config_manager):
    _, jobs, _, output, progress = _settings(args, config_manager)
    startup_summary(jobs, config_manager.config_file)
    if args.forbidden is not None:
        family = generate_Gk(args.forbidden, jobs=jobs)
        summary = {"k": args.forbidden, "count": len(family), "generator": "minimal kangaroos"}
    elif args.le:
        family = generate_th_le(args.th, jobs, progress)
        summary = {"t": args.th, "count": len(family), "generator": "grid operations, th_H <= t"}
    else:
        family = throttling_atlas(args.th, jobs, progress)
        summary = {"t": args.th, "count": len(family), "generator": "grid operations, th_H = t"}
    lines = atlas_lines(family)
    text = json.dumps({**summary, "graphs": lines}, sort_keys=True) + "\n" if output == "json" \
        else "".join(f"{line}\n" for line in lines)
    if args.out:
        with open(args.out, "w", encoding="ascii") as f:
            f.write(text)
        print(f"✅ {summary['count']} graph(s) written to {args.out}", file=sys.stderr)
    else:
        sys.stdout.write(text)
    logging.info(json.dumps(summary, sort_keys=True))
    return EXIT_OK


def cmd_verify(args, config_manager):
    _, jobs, _, _, _ = _settings(args, config_manager)
    startup_summary(jobs, config_manager.config_file)
    results = run_suite(only=args.only, random_count=args.random, instances=args.instances)
    for result in results:
        print(result.row())
    failed = [r.name for r in results if not r.passed]
    if failed:
        print(f"❌ {len(failed)} claim(s) failed: {', '.join(failed)}")
        return EXIT_MISMATCH
    print(f"✅ all {len(results)} claim(s) passed")
    return EXIT_OK


def _base_list(text):
    try:
        base = [int(v) for v in text.replace(",", " ").split()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"base must be vertex numbers, got {text!r}") from None
    if any(v < 0 for v in base):
        raise argparse.ArgumentTypeError(f"base vertices must be nonnegative, got {text!r}")
    return base


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument('-v', '--verbose', action='store_true',
                        help='Enable verbose logging (show detailed debug information)')
    common.add_argument('--rule', choices=[r.value for r in Rule], help='Color change rule (default from settings: H)')
    common.add_argument('--jobs', type=int, help='Worker processes, 0 for one per CPU')
    common.add_argument('--limit-seconds', type=int, help='Time budget per graph, 0 for none')
    common.add_argument('--limit-states', type=int, help='State budget per graph, 0 for none')
    common.add_argument('--output', choices=OUTPUTS, help='Output format')
    common.add_argument('--progress', action='store_true', help='Show a progress bar on stderr')

    graph_input = argparse.ArgumentParser(add_help=False)
    source = graph_input.add_mutually_exclusive_group(required=True)
    source.add_argument('--family', nargs='+', metavar='NAME', help='Named family and its parameters, e.g. path 8')
    source.add_argument('--g6', help='One graph in graph6')
    source.add_argument('--file', help='File with one graph6 per line, - for stdin')
    graph_input.add_argument('--check', action='store_true', help='Re-validate every certificate before printing')

    parser = argparse.ArgumentParser(prog='hopforce', description='Hopping forcing and throttling toolkit')
    commands = parser.add_subparsers(dest='command', required=True)
    commands.add_parser('number', parents=[common, graph_input], help='Forcing number and a minimum forcing set')
    throttle = commands.add_parser('throttle', parents=[common, graph_input], help='Throttling number')
    throttle.add_argument('--product', choices=('x', 'star'), help='Product throttling variant (hopping rule)')
    pt = commands.add_parser('pt', parents=[common, graph_input], help='Propagation time of a given set')
    pt.add_argument('--base', type=_base_list, required=True, help='Vertices of the set, e.g. 0,1,2')
    bounds = commands.add_parser('bounds', parents=[common, graph_input], help='Connectivity and independence bounds')
    bounds.add_argument('--no-exact', action='store_true', help='Skip the exact search unless kappa + alpha = n')

    atlas = commands.add_parser('atlas', parents=[common], help='Graphs with small or large throttling number')
    which = atlas.add_mutually_exclusive_group(required=True)
    which.add_argument('--th', type=int, help='Graphs with th_H = t (t <= 4)')
    which.add_argument('--forbidden', type=int, help='Minimal forbidden graphs for th_H >= n - k (k <= 1)')
    atlas.add_argument('--le', action='store_true', help='With --th, every graph with th_H <= t')
    atlas.add_argument('--out', help='Write the atlas to this file')

    verify = commands.add_parser('verify', parents=[common], help='Run the regression claims')
    verify.add_argument('--suite', choices=('paper', 'full'), default='paper',
                        help='Claim table to run; full is another name for paper')
    verify.add_argument('--only', nargs='+', help='Run only the named claims')
    verify.add_argument('--random', type=int, default=200, help='Random graphs for the bounds claim')
    verify.add_argument('--instances', type=int, default=500, help='Random force sets for the reversal claim')
    return parser


def main(argv=None):
    """Main entry point for the application"""
    parser = build_parser()
    args = parser.parse_args(argv)
    setup_logging(verbose=args.verbose, log_file=LOG_FILE)
    config_manager = ConfigManager(CONFIG_FILE, DEFAULT_SETTINGS)
    config_manager.initialize_settings()

    try:
        if args.command == "atlas":
            code = cmd_atlas(args, config_manager)
        elif args.command == "verify":
            code = cmd_verify(args, config_manager)
        else:
            code = cmd_graphs(args, config_manager)
    except HopforceError as e:
        logging.error(f"{args.command}: {e}")
        print(f"❌ {e}", file=sys.stderr)
        code = e.exit_code
    except OSError as e:
        logging.error(f"{args.command}: {e}")
        print(f"❌ {e}", file=sys.stderr)
        code = EXIT_USAGE
    sys.exit(code)


if __name__ == "__main__":
    main()
