"""``subseqrand`` command line.

Exit codes: 0 success (every criterion passed), 1 error (bad input, bad
config, I/O), 2 an experiment ran but at least one criterion failed.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import __version__
from .bitseq import BitString, complement, select
from .coder import arith_decode, arith_encode, stream_from_sidecar
from .errors import ConfigError, RejectedInputError, TruncatedCodeError, UndefinedInformationError
from .estimators import analyze
from .experiments import ExperimentConfig, run_experiment
from .generators import KINDS, GeneratorSpec
from .io import build_report, payload_sha256, read_bits, write_bits, write_csv
from .measures import measure_from_descriptor

EXIT_OK, EXIT_ERROR, EXIT_FAILED = 0, 1, 2

ANALYZE_NOTE = (
    "normality_dev, plugin_entropy and lz78 measure finite-state compressibility; "
    "they are not Kolmogorov complexity"
)


class _Parser(argparse.ArgumentParser):
    """Usage errors exit 1; status 2 is reserved for failed criteria."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_ERROR, f"{self.prog}: error: {message}\n")


def _say(args, *parts) -> None:
    if not args.quiet:
        print(*parts)


def _emit_bits(args, bits: BitString) -> None:
    if args.out:
        write_bits(args.out, bits, args.format)
        _say(args, f"{len(bits)} bits sha256={payload_sha256(bits)}")
    else:
        print(str(bits))


def _parse_json(text: str, what: str):
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{what} is not valid JSON: {exc}") from exc


def _int_list(text: str) -> list[int]:
    try:
        return [int(part) for part in text.split(",") if part.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from exc


# --------------------------------------------------------------------------

def cmd_generate(args) -> int:
    params: dict = {}
    if args.kind == "sturmian":
        params["cf"] = args.cf
    elif args.kind == "bernoulli":
        params["q"] = args.q
        params["seed"] = args.seed
    elif args.kind == "periodic":
        params["pattern"] = args.pattern
    spec = GeneratorSpec(args.kind, {k: v for k, v in params.items() if v is not None})
    _emit_bits(args, spec.generate(args.n))
    return EXIT_OK


def cmd_select(args) -> int:
    x, y = read_bits(args.x), read_bits(args.y)
    if len(x) != len(y):
        raise RejectedInputError(f"length mismatch: x has {len(x)} bits, y has {len(y)}")
    _emit_bits(args, select(x, complement(y) if args.complement else y))
    return EXIT_OK


def cmd_analyze(args) -> int:
    x = read_bits(args.x)
    measure = measure_from_descriptor(_parse_json(args.measure, "--measure")) if args.measure else None
    rep = analyze(x, k_max=args.kmax, entropy_k=args.entropy_k, measure=measure, estimate_q=args.estimate_q)
    text = json.dumps(build_report(rep, x, str(args.x), [ANALYZE_NOTE]), indent=2)
    if args.out:
        Path(args.out).write_text(text + "\n")
    else:
        print(text)
    return EXIT_OK


def cmd_encode(args) -> int:
    if not args.out:
        raise ConfigError("encode needs -o/--out (the sidecar goes to <out>.json)")
    M = measure_from_descriptor(_parse_json(args.measure, "--measure"))
    y = read_bits(args.input)
    stream = arith_encode(M, y)
    write_bits(args.out, stream.code, args.format)
    sidecar = {"tool_version": __version__, "measure": M.descriptor, **stream.summary()}
    sidecar["n"] = len(y)
    sidecar["source_sha256"] = payload_sha256(y)
    Path(str(args.out) + ".json").write_text(json.dumps(sidecar, indent=2) + "\n")
    _say(args, f"{len(y)} symbols -> {len(stream.code)} code bits")
    return EXIT_OK


def cmd_decode(args) -> int:
    side_path = Path(args.sidecar) if args.sidecar else Path(str(args.input) + ".json")
    sidecar = _parse_json(side_path.read_text(), str(side_path)) if side_path.exists() else None
    if args.measure:
        M = measure_from_descriptor(_parse_json(args.measure, "--measure"))
        n = args.n
    elif sidecar is not None:
        M, n = stream_from_sidecar(sidecar)
    else:
        raise ConfigError("decode needs --measure or a sidecar file")
    if args.n is not None:
        n = args.n
    if n is None:
        raise ConfigError("decode needs -n (or a sidecar recording it)")
    z = read_bits(args.input)
    _emit_bits(args, arith_decode(M, z, n))
    return EXIT_OK


def cmd_experiment(args) -> int:
    cfg = ExperimentConfig.from_dict(_parse_json(Path(args.config).read_text(), str(args.config)))
    result = run_experiment(cfg)
    out_dir = Path(args.out_dir or args.out or ".")
    out_dir.mkdir(parents=True, exist_ok=True)
    stem = Path(args.config).stem
    (out_dir / f"{stem}.result.json").write_text(json.dumps(result.to_dict(), indent=2) + "\n")
    write_csv(out_dir / f"{stem}.csv", result.csv_rows())
    summary = result.summary()
    (out_dir / f"{stem}.summary.txt").write_text(summary + "\n")
    _say(args, summary)
    return EXIT_OK if result.passed else EXIT_FAILED


# --------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--format", choices=("bits", "text"), default="bits",
                        help="output format for bit strings (default: bits)")
    common.add_argument("-o", "--out", help="output path (stdout as text when omitted)")
    common.add_argument("--quiet", action="store_true", help="suppress informational output")

    parser = _Parser(prog="subseqrand", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("generate", parents=[common], help="write a generated sequence")
    p.add_argument("--kind", choices=KINDS, required=True)
    p.add_argument("-n", type=int, required=True)
    p.add_argument("--pattern", help="periodic: the repeated 0/1 block")
    p.add_argument("--cf", type=_int_list, help="sturmian: continued fraction a1,a2,... (last repeats)")
    p.add_argument("--q", help="bernoulli: P(1) as 'p/q'")
    p.add_argument("--seed", type=int, help="bernoulli: SplitMix64 seed")
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("select", parents=[common], help="keep the bits of x where y is 1")
    p.add_argument("x")
    p.add_argument("y")
    p.add_argument("--complement", action="store_true", help="select where y is 0 instead")
    p.set_defaults(func=cmd_select)

    p = sub.add_parser("analyze", parents=[common], help="run the estimators, print a JSON report")
    p.add_argument("x")
    p.add_argument("--kmax", type=int, default=3, help="largest block length for normality deviations")
    p.add_argument("--entropy-k", type=_int_list, help="block lengths for plug-in entropy, e.g. 1,2,10")
    p.add_argument("--measure", help='measure descriptor JSON, e.g. \'{"bernoulli":{"q":"1/3"}}\'')
    p.add_argument("--estimate-q", action="store_true", help="add the Bernoulli parameter estimate")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("encode", parents=[common], help="arithmetic-code a string under a measure")
    p.add_argument("input")
    p.add_argument("--measure", required=True)
    p.set_defaults(func=cmd_encode)

    p = sub.add_parser("decode", parents=[common], help="decode n symbols from a code")
    p.add_argument("input")
    p.add_argument("--measure")
    p.add_argument("-n", type=int)
    p.add_argument("--sidecar", help="sidecar JSON (default: <input>.json)")
    p.set_defaults(func=cmd_decode)

    p = sub.add_parser("experiment", parents=[common], help="run a scenario from a JSON config")
    p.add_argument("config")
    p.add_argument("out_dir", nargs="?", help="directory for result JSON, CSV and summary")
    p.set_defaults(func=cmd_experiment)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except TruncatedCodeError as exc:
        print(f"error: truncated code, {exc.recovered} symbols recovered: {exc}", file=sys.stderr)
    except UndefinedInformationError as exc:
        print(f"error: zero-probability symbol at position {exc.position}: {exc}", file=sys.stderr)
    except (RejectedInputError, ConfigError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
    return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
