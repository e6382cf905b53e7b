"""
Command line front end: ``flatsu2 <command> [options]``.

Exit codes: 0 on success, 1 when a numerical check fails, 2 on input errors.
Results go to stdout, diagnostics to stderr.
"""
import argparse
import json
import sys
from dataclasses import dataclass, field, fields

from .betti import (
    BaseCaseProvider,
    betti_numbers,
    describe,
    dimension,
    hn_poincare,
    poincare,
    strata,
    strata_table,
    u2_poincare,
)
from .errors import IrregularWeights
from .selftest import run_selftest
from .utils import DEFAULT_TOLERANCES
from .verifier import FiberVerifier, nonempty_probe
from .version import __version__
from .weights import WeightConfig, format_subset, is_regular, normalize, parse_weights

SCHEMA = 1
COMMANDS = [
    "betti", "strata", "hn", "regular", "normalize", "dim", "u2",
    "verify-critical", "verify-regular", "probe-empty", "selftest",
]
# commands that need --g
NEEDS_GENUS = {"betti", "strata", "hn", "dim", "u2", "verify-critical", "verify-regular"}


@dataclass
class JobSpec:
    """One command line invocation after flags and config file are merged."""

    command: str
    g: int = None
    weights: str = None
    base: str = "empty"
    seed: int = 0
    format: str = "text"
    tol: list = field(default_factory=list)
    threads: int = 1
    samples: int = 100
    verbose: bool = False


_INT_KEYS = {"g", "seed", "threads", "samples"}


def load_config(filename):
    """
    Read ``key = value`` lines; blank lines and lines starting with '#' are skipped.

    :param filename: path of the config file
    :return: dict of option name to typed value
    """
    allowed = {f.name for f in fields(JobSpec)} - {"command"}
    values = {}
    with open(filename) as f:
        for lineno, line in enumerate(f, 1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            if "=" not in line:
                raise ValueError(f"{filename}:{lineno}: expected 'key = value'")
            key, value = (s.strip() for s in line.split("=", 1))
            key = key.replace("-", "_")
            if key not in allowed:
                raise ValueError(f"{filename}:{lineno}: unknown option '{key}'")
            if key in _INT_KEYS:
                value = int(value)
            elif key == "tol":
                value = [v.strip() for v in value.split(",") if v.strip()]
            elif key == "verbose":
                value = value.lower() in ("1", "true", "yes", "on")
            values[key] = value
    return values


def parse_tolerances(entries):
    """
    Tolerance overrides: a bare number sets every tolerance, NAME=VALUE sets one.

    :param entries: list of str
    :return: Tolerances
    """
    tolerances = DEFAULT_TOLERANCES
    for entry in entries:
        if "=" in entry:
            name, value = (s.strip() for s in entry.split("=", 1))
            tolerances = tolerances.override(**{name: float(value)})
        else:
            tolerances = tolerances.scaled(float(entry))
    return tolerances


def build_parser():
    parser = argparse.ArgumentParser(
        prog="flatsu2",
        description="Betti numbers of moduli spaces of flat SU(2) connections "
        "and numerical checks of their Morse theory.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    subparsers = parser.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--g", type=int, default=None, help="genus")
    common.add_argument("--weights", default=None,
                        help="comma separated exact weights p/q in [0, 1]; omit for Classic")
    common.add_argument("--base", default=None,
                        help="genus-zero base: empty | probe | poly:c0,c1,...")
    common.add_argument("--seed", type=int, default=None)
    common.add_argument("--format", choices=["json", "text"], default=None)
    common.add_argument("--tol", action="append", default=None,
                        help="tolerance override: VALUE for all, or NAME=VALUE; repeatable")
    common.add_argument("--threads", type=int, default=None)
    common.add_argument("--samples", type=int, default=None,
                        help="random points per numerical suite")
    common.add_argument("--config", default=None, help="file of 'key = value' lines")
    common.add_argument("--verbose", action="store_true", default=None)

    for command in COMMANDS:
        subparsers.add_parser(command, parents=[common])
    return parser


def spec_from_args(args):
    """Merge defaults, the config file and explicit flags, in that order."""
    merged = {}
    if args.config is not None:
        merged.update(load_config(args.config))
    for f in fields(JobSpec):
        if f.name == "command":
            continue
        value = getattr(args, f.name)
        if value is not None:
            merged[f.name] = value
    return JobSpec(command=args.command, **merged)


def _config(spec):
    if spec.command in NEEDS_GENUS and spec.g is None:
        raise ValueError(f"'{spec.command}' needs --g")
    g = 0 if spec.g is None else spec.g
    if spec.weights is None:
        return WeightConfig.classic(g), []
    return normalize(WeightConfig.raw(g, parse_weights(spec.weights)))


def _poly_payload(name, poly):
    return {name: poly.to_json(), "text": str(poly)}


def _run_exact(spec):
    # returns (payload, text, exit code)
    if spec.command == "hn":
        if spec.g is None:
            raise ValueError("'hn' needs --g")
        poly = hn_poincare(spec.g)
        return {"g": spec.g, **_poly_payload("poincare", poly)}, str(poly), 0

    cfg, transcript = _config(spec)
    payload = {"config": cfg.to_dict()}
    if transcript:
        payload["normalization"] = transcript

    if spec.command == "normalize":
        return payload, "\n".join(transcript + [describe(cfg)]), 0

    if spec.command == "regular":
        result = is_regular(cfg)
        if not result.regular:
            raise IrregularWeights(result.witness)
        payload["regular"] = True
        return payload, "regular", 0

    if spec.command == "dim":
        d = dimension(cfg)
        payload["dimension"] = d
        return payload, str(d), 0

    base = BaseCaseProvider.parse(spec.base, seed=spec.seed)
    payload["base"] = base.to_dict()
    if spec.command == "betti":
        poly = poincare(cfg, base)
        payload.update(_poly_payload("poincare", poly))
        payload["betti"] = betti_numbers(poly)
        return payload, str(poly), 0
    if spec.command == "u2":
        poly = u2_poincare(cfg, base)
        payload.update(_poly_payload("poincare", poly))
        return payload, str(poly), 0
    if spec.command == "strata":
        payload["strata"] = [s.to_dict() for s in strata(cfg, base)]
        return payload, strata_table(cfg, base).to_string(index=False), 0
    raise ValueError(f"unknown command {spec.command!r}")


def _run_numeric(spec):
    tolerances = parse_tolerances(spec.tol)
    if spec.command == "selftest":
        report = run_selftest(spec.seed, tolerances, spec.samples, spec.threads, spec.verbose)
        return report, 0 if report.passed else 1

    cfg, _ = _config(spec)
    if spec.command == "probe-empty":
        if cfg.g != 0:
            raise ValueError("'probe-empty' works in genus zero; pass --g 0 or omit --g")
        result = nonempty_probe(cfg, seed=spec.seed, threads=spec.threads, tolerances=tolerances)
        payload = {
            "config": cfg.to_dict(), "seed": spec.seed, "tolerances": tolerances.to_dict(),
            **result.to_dict(),
        }
        text = "nonempty" if result.witness is not None else (
            f"probably empty (best residual {result.best_residual:.3e})"
        )
        return (payload, text), 0

    verifier = FiberVerifier(
        verbose=spec.verbose, threads=spec.threads, seed=spec.seed, tolerances=tolerances
    )
    if spec.command == "verify-critical":
        report = verifier.critical_check(cfg)
    elif is_regular(cfg).regular:
        report = verifier.regular_check(cfg, spec.samples)
        verifier.derivative_check(cfg, spec.samples, report=report)
        if cfg.g >= 1:
            verifier.splitting_check(cfg, report=report)
    else:
        report = verifier.irregular_check(cfg)
    return report, 0 if report.passed else 1


def _emit(spec, out, payload=None, text=None, report=None):
    if report is not None:
        if spec.format == "json":
            print(report.to_json(), file=out)
        else:
            print(report.to_frame()[["name", "passed", "measured"]].to_string(index=False),
                  file=out)
            print("PASSED" if report.passed else f"FAILED ({len(report.failures())})", file=out)
        return
    if spec.format == "json":
        body = {"schema": SCHEMA, "command": spec.command, **payload}
        print(json.dumps(body, sort_keys=True, indent=2), file=out)
    else:
        print(text, file=out)


def run(spec, out=None, err=None):
    """
    Execute one JobSpec.

    :param spec: JobSpec
    :param out: stream for results, stdout by default
    :param err: stream for diagnostics, stderr by default
    :return: exit code
    """
    out = out or sys.stdout
    err = err or sys.stderr
    try:
        if spec.format not in ("json", "text"):
            raise ValueError("format must be in ['json', 'text']")
        if spec.command in ("verify-critical", "verify-regular", "probe-empty", "selftest"):
            result, code = _run_numeric(spec)
            if isinstance(result, tuple):
                _emit(spec, out, payload=result[0], text=result[1])
            else:
                _emit(spec, out, report=result)
            return code
        payload, text, code = _run_exact(spec)
        _emit(spec, out, payload=payload, text=text)
        return code
    except IrregularWeights as e:
        print(f"error: {e}", file=err)
        print(f"witness J = {format_subset(sum(1 << (j - 1) for j in e.witness))}", file=err)
        return 2
    except ValueError as e:
        print(f"error: {e}", file=err)
        return 2
    except OSError as e:
        print(f"error: {e}", file=err)
        return 2
    except (RuntimeError, ArithmeticError) as e:
        print(f"check failed: {e}", file=err)
        return 1


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        spec = spec_from_args(args)
    except (OSError, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    return run(spec)


def console():
    sys.exit(main())


if __name__ == "__main__":
    console()
