"""Command-line interface: ``v2vsim {gen,tacf,sccf,validate}``.

Exit status is 0 on success, 1 on a validation or numerical failure and 2 on
a usage error. Output files are written to a temporary sibling and moved into
place only when the command succeeds. CSV rows, one per grid point, carry the
closed-form value, the quadrature value and (with ``--realizations`` > 1) a
Monte Carlo estimate with its standard error.
"""
from __future__ import annotations

import argparse
import contextlib
import io
import json
import logging
import os
import sys
import tempfile
from concurrent.futures import ProcessPoolExecutor
from typing import List, Optional, Sequence

import numpy as np

from .cirio import FORMATS, export_cir
from .config import load_config
from .errors import (BesselRangeError, ConfigError, DegenerateGeometryError, DegeneratePowerError,
                     DomainError, ExportError, QuadratureError)
from .chanmodel import generate_cir
from .presets import PRESETS
from .stats import (SIDES, CorrelationQuery, correlation_closed, correlation_quadrature,
                    draw_ensemble, stcf_mc)
from .validate import run_suite

USAGE, FAILURE = 2, 1
CORR_COLUMNS = ("closed_re", "closed_im", "closed_abs", "quad_re", "quad_im", "quad_abs",
                "mc_re", "mc_im", "mc_se")
NUMERIC_ERRORS = (ConfigError, DomainError, QuadratureError, BesselRangeError,
                  DegeneratePowerError, DegenerateGeometryError, ExportError)


class UsageError(Exception):
    pass


def parse_list(text: str) -> List[float]:
    try:
        values = [float(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise UsageError(f"expected comma-separated numbers, got {text!r}") from None
    if not values:
        raise UsageError("empty list")
    return values


def parse_range(text: str) -> np.ndarray:
    """``start:step:stop`` (stop included), or a comma-separated list."""
    if ":" not in text:
        return np.array(parse_list(text))
    try:
        start, step, stop = (float(x) for x in text.split(":"))
    except ValueError:
        raise UsageError(f"expected start:step:stop, got {text!r}") from None
    if step <= 0 or stop < start:
        raise UsageError(f"range {text!r} needs step > 0 and stop >= start")
    count = (stop - start) / step
    if abs(count - round(count)) > 1e-9 * max(1.0, count):
        raise UsageError(f"range {text!r}: (stop - start) is not a multiple of step")
    return start + step * np.arange(int(round(count)) + 1)


def _parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    src = common.add_argument_group("configuration")
    src.add_argument("--config", metavar="PATH", help="TOML configuration file")
    src.add_argument("--preset", choices=PRESETS, help="named scenario")
    src.add_argument("--seed", type=int, help="override the seed (non-negative integer)")
    src.add_argument("--duration", type=float, metavar="S", help="override the duration")
    src.add_argument("--sample-rate", type=float, metavar="HZ", help="override the sample rate")
    common.add_argument("--output", metavar="PATH", help="output file (default: stdout)")
    common.add_argument("-q", "--quiet", action="store_true", help="suppress the provenance log")

    corr = argparse.ArgumentParser(add_help=False)
    corr.add_argument("--t", default="0", help="absolute times, comma-separated (s)")
    corr.add_argument("--realizations", type=int, default=500,
                      help="Monte Carlo ray sets; < 2 disables the estimate")
    corr.add_argument("--path", type=int, default=0, help="path index")
    corr.add_argument("--side", choices=SIDES, default="both")
    corr.add_argument("--jobs", type=int, default=1, help="worker processes for the grid")

    parser = argparse.ArgumentParser(prog="v2vsim", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    gen = sub.add_parser("gen", parents=[common], help="generate a CIR stream")
    gen.add_argument("--format", choices=FORMATS, default="csv")
    tacf = sub.add_parser("tacf", parents=[common, corr], help="temporal correlation grid")
    tacf.add_argument("--lag", default="0:0.0005:0.02", help="lags start:step:stop or list (s)")
    sccf = sub.add_parser("sccf", parents=[common, corr], help="spatial correlation grid")
    sccf.add_argument("--spacing", default="0:0.1:3",
                      help="spacings start:step:stop or list, in wavelengths")
    sub.add_parser("validate", parents=[common], help="run the invariant suite (JSON report)")
    return parser


def _load(args):
    if args.config and args.preset:
        raise UsageError("give --config or --preset, not both")
    if args.config:
        try:
            with open(args.config, encoding="utf-8") as fh:
                text = fh.read()
        except OSError as exc:
            raise UsageError(f"cannot read config: {exc}") from None
    elif args.preset:
        text = f'preset = "{args.preset}"\n'
    else:
        raise UsageError("one of --config or --preset is required")
    overrides = {}
    if args.seed is not None:
        overrides["seed"] = args.seed
    if args.duration is not None:
        overrides["duration"] = args.duration
    if args.sample_rate is not None:
        overrides["sample_rate"] = args.sample_rate
    return load_config(text, overrides)


@contextlib.contextmanager
def _output(path: Optional[str]):
    """Binary sink that appears at ``path`` only if the block succeeds."""
    if path is None:
        buf = io.BytesIO()
        yield buf
        sys.stdout.buffer.write(buf.getvalue())
        sys.stdout.flush()
        return
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".v2vsim-", suffix=".part")
    try:
        with os.fdopen(fd, "wb") as fh:
            yield fh
        os.replace(tmp, path)
    except BaseException:
        with contextlib.suppress(OSError):
            os.unlink(tmp)
        raise


def _fmt(x: float) -> str:
    return "" if x is None else f"{x:.17g}"


def _corr_row(config, query, realizations, ensemble):
    closed = correlation_closed(config, query)
    quad = correlation_quadrature(config, query)
    vals = [closed.real, closed.imag, abs(closed), quad.real, quad.imag, abs(quad)]
    if realizations >= 2:
        est = stcf_mc(config, query, realizations, ensemble=ensemble)
        vals += [est.value.real, est.value.imag, est.stderr]
    else:
        vals += [None, None, None]
    return vals


def _corr_job(job):
    config, queries, realizations, ensemble = job
    return [_corr_row(config, q, realizations, ensemble) for q in queries]


def _grid(args, config, queries, keys):
    """Evaluate ``queries`` (grouped by absolute time) and format CSV rows."""
    ensemble = None
    if args.realizations >= 2:
        ensemble = draw_ensemble(config, args.path, args.realizations)
    jobs = [(config, group, args.realizations, ensemble) for group in queries]
    if args.jobs > 1:
        with ProcessPoolExecutor(args.jobs) as pool:
            results = list(pool.map(_corr_job, jobs))
    else:
        results = [_corr_job(j) for j in jobs]
    lines = []
    for group_keys, group_rows in zip(keys, results):
        for key, row in zip(group_keys, group_rows):
            lines.append(",".join(list(key) + [_fmt(v) for v in row]) + "\n")
    return lines


def _cmd_gen(args, config):
    with _output(args.output) as fh:
        export_cir(generate_cir(config), args.format, fh)


def _cmd_tacf(args, config):
    times, lags = parse_list(args.t), parse_range(args.lag)
    queries, keys = [], []
    for t in times:
        queries.append([CorrelationQuery(t=t, lag=float(lag), side=args.side, path=args.path)
                        for lag in lags])
        keys.append([(_fmt(t), _fmt(float(lag)), args.side, str(args.path)) for lag in lags])
    lines = _grid(args, config, queries, keys)
    with _output(args.output) as fh:
        fh.write((",".join(("t", "lag", "side", "path") + CORR_COLUMNS) + "\n").encode())
        fh.write("".join(lines).encode())


def _cmd_sccf(args, config):
    times, spacing = parse_list(args.t), parse_range(args.spacing)
    lam = config.wavelength
    queries, keys = [], []
    for t in times:
        group, gkeys = [], []
        for s in spacing:
            dd = float(s) * lam
            group.append(CorrelationQuery(t=t, spacing_mt=dd, spacing_mr=dd, side=args.side,
                                          path=args.path))
            gkeys.append((_fmt(t), _fmt(float(s)), _fmt(dd), args.side, str(args.path)))
        queries.append(group)
        keys.append(gkeys)
    lines = _grid(args, config, queries, keys)
    with _output(args.output) as fh:
        fh.write((",".join(("t", "spacing_wl", "spacing_m", "side", "path") + CORR_COLUMNS)
                  + "\n").encode())
        fh.write("".join(lines).encode())


def _cmd_validate(args, config):
    report = run_suite(config)
    report["seed"] = config.seed
    with _output(args.output) as fh:
        fh.write((json.dumps(report, indent=2) + "\n").encode())
    return 0 if report["passed"] else FAILURE


COMMANDS = {"gen": _cmd_gen, "tacf": _cmd_tacf, "sccf": _cmd_sccf, "validate": _cmd_validate}


def run_command(argv: Optional[Sequence[str]] = None) -> int:
    """Run one subcommand; returns the exit status."""
    parser = _parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    handler = logging.StreamHandler(sys.stderr)
    handler.setFormatter(logging.Formatter("provenance: %(message)s"))
    prov = logging.getLogger("v2vsim.provenance")
    if not args.quiet:
        prov.addHandler(handler)
        prov.setLevel(logging.INFO)
    try:
        if getattr(args, "jobs", 1) < 1:
            raise UsageError("--jobs must be >= 1")
        config = _load(args)
        return COMMANDS[args.command](args, config) or 0
    except UsageError as exc:
        print(f"v2vsim: error: {exc}", file=sys.stderr)
        return USAGE
    except NUMERIC_ERRORS as exc:
        print(f"v2vsim: {type(exc).__name__}: {exc}", file=sys.stderr)
        return FAILURE
    except OSError as exc:
        print(f"v2vsim: I/O error: {exc}", file=sys.stderr)
        return FAILURE
    finally:
        prov.removeHandler(handler)


def main() -> None:
    sys.exit(run_command())


if __name__ == "__main__":
    main()
