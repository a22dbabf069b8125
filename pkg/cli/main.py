"""Command-line driver.

    python -m cli.main generate --n 2 [--profile 1,0] [--z f] [--format pbm] [--out FILE]
    python -m cli.main verify FILE --window 2,2 --modulo 1,1
    python -m cli.main verify-nested FILE --n 2
    python -m cli.main census --n 2 --exhaustive
    python -m cli.main decode --n 2 --pattern 01/01 --class 0,0 [--check]
    python -m cli.main matrix --n 8 --profile 3,3,2,1,1,1,0,0

Exit status: 0 when the checked property holds, 1 when it fails (a witness
is printed), 2 on usage or parse errors.
"""

import argparse
import logging
import sys
from pathlib import Path
from typing import List, Optional, Sequence, Tuple

import structlog

from cli.array_io import load_array, save_array, write_array
from cli.report_io import format_report
from cli.settings import Settings, load_settings
from enumeration.tile_index import IndexRangeError, matrix_from_index
from gf2.bitmatrix import BitMatrix
from pascal.matrices import RotationProfile, build_variant, exponent_of, lower_border, tau, upper_border
from torus.array import Modulo, WindowSpec
from torus.builder import AffineSpec, build_affine_array
from verifier.census import census_affine
from verifier.decoder import TheoryViolation, global_position, locate_pattern, part_of
from verifier.perfectness import is_nested_perfect, is_perfect, nested_report, occurrence_positions
from verifier.reports import DecodeReport

logger = structlog.get_logger(__name__)

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_USAGE = 2


class UsageError(ValueError):
    """Bad flag values detected after argparse accepted them."""


def configure_logging(level: str = "warning", json_logs: bool = False) -> None:
    """Route structlog to stderr so reports on stdout stay parseable."""
    renderer = structlog.processors.JSONRenderer() if json_logs else structlog.dev.ConsoleRenderer(colors=False)
    structlog.configure(
        processors=[
            structlog.processors.add_log_level,
            structlog.processors.TimeStamper(fmt="iso"),
            renderer,
        ],
        wrapper_class=structlog.make_filtering_bound_logger(getattr(logging, level.upper())),
        logger_factory=structlog.PrintLoggerFactory(file=sys.stderr),
        cache_logger_on_first_use=False,
    )


def parse_pair(text: str, name: str) -> Tuple[int, int]:
    """Parse an "a,b" flag value."""
    try:
        first, second = (int(part) for part in text.split(","))
    except ValueError:
        raise UsageError(f"{name} must look like 'a,b', got {text!r}") from None
    return first, second


def parse_profile(text: str, n: int) -> RotationProfile:
    """Shifts as a comma list, or 'zero'."""
    if text == "zero":
        return RotationProfile.zero(n)
    try:
        shifts = [int(part) for part in text.split(",")]
    except ValueError:
        raise UsageError(f"profile must be a comma list of integers or 'zero', got {text!r}") from None
    profile = RotationProfile.of(shifts)
    if profile.n != n:
        raise UsageError(f"profile has {profile.n} shifts, expected {n}")
    return profile


def parse_z(text: str, n: int) -> BitMatrix:
    """Z as hex, row-major with the most significant nibble first, or 'zero'."""
    if text == "zero":
        return BitMatrix.zeros(n, n)
    try:
        value = int(text, 16)
    except ValueError:
        raise UsageError(f"z must be hexadecimal or 'zero', got {text!r}") from None
    try:
        return matrix_from_index(n, value)
    except IndexRangeError:
        raise UsageError(f"z={text} has more than {n * n} bits") from None


def parse_pattern(text: str) -> BitMatrix:
    """Pattern rows of 0/1 separated by '/'."""
    rows = [row for row in text.replace(",", "/").split("/") if row]
    if not rows or any(set(row) - {"0", "1"} for row in rows):
        raise UsageError(f"pattern must be rows of 0/1 separated by '/', got {text!r}")
    if len({len(row) for row in rows}) != 1:
        raise UsageError("pattern rows must have equal length")
    return BitMatrix.from_strings(rows)


def _spec_from_args(args: argparse.Namespace) -> AffineSpec:
    try:
        d = exponent_of(args.n)
    except ValueError as e:
        raise UsageError(str(e)) from None
    return AffineSpec(d=d, profile=parse_profile(args.profile, args.n), z=parse_z(args.z, args.n))


def _emit(text: str, out: Optional[Path]) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        out.write_text(text, encoding="utf-8")


def cmd_generate(args: argparse.Namespace, settings: Settings) -> int:
    """Build an affine array and write it as text or PBM."""
    spec = _spec_from_args(args)
    array = build_affine_array(spec, max_exponent=settings.max_array_exponent)
    if args.out is None:
        sys.stdout.write(write_array(array, args.format))
    else:
        save_array(array, args.out, args.format)
    return EXIT_OK


def cmd_verify(args: argparse.Namespace, settings: Settings) -> int:
    """Check (s, t, p, q)-perfectness of an array file."""
    array = load_array(args.file)
    s, t = parse_pair(args.window, "--window")
    p, q = parse_pair(args.modulo, "--modulo")
    report = is_perfect(array, WindowSpec(s=s, t=t), Modulo(p=p, q=q), workers=settings.threads)
    _emit(format_report(report, args.report_format), args.out)
    return EXIT_OK if report.perfect else EXIT_FAILED


def cmd_verify_nested(args: argparse.Namespace, settings: Settings) -> int:
    """Check nested perfectness in the square or the general form."""
    array = load_array(args.file)
    if args.n is not None:
        report = is_nested_perfect(array, args.n, workers=settings.threads, max_witnesses=settings.max_witnesses)
    elif args.window and args.modulo:
        s, t = parse_pair(args.window, "--window")
        p, q = parse_pair(args.modulo, "--modulo")
        report = nested_report(
            array,
            WindowSpec(s=s, t=t),
            Modulo(p=p, q=q),
            workers=settings.threads,
            max_witnesses=settings.max_witnesses,
        )
    else:
        raise UsageError("verify-nested needs --n or both --window and --modulo")
    _emit(format_report(report, args.report_format), args.out)
    return EXIT_OK if report.nested else EXIT_FAILED


def cmd_census(args: argparse.Namespace, settings: Settings) -> int:
    """Run the affine family census, exhaustive or sampled."""
    if args.sample is not None:
        report = census_affine(
            args.n, mode="sample", sample_size=args.sample, seed=args.seed, workers=settings.threads, progress=args.progress
        )
    else:
        report = census_affine(args.n, mode="exhaustive", workers=settings.threads, progress=args.progress)
    _emit(format_report(report, args.report_format), args.out)
    return EXIT_OK if report.all_nested and (args.sample is not None or report.distinct == report.generated) else EXIT_FAILED


def cmd_decode(args: argparse.Namespace, settings: Settings) -> int:
    """Locate a pattern without scanning, optionally checked against a scan."""
    spec = _spec_from_args(args)
    pattern = parse_pattern(args.pattern)
    residue_class = parse_pair(args.residue_class, "--class")
    level = args.level if args.level is not None else pattern.rows
    part = parse_pair(args.part, "--part")
    position = locate_pattern(spec, level, part, pattern, residue_class)

    scan_positions: Optional[List[Tuple[int, int]]] = None
    if args.check:
        array = build_affine_array(spec, max_exponent=settings.max_array_exponent)
        block = part_of(array, spec.n, level, part)
        scan_positions = occurrence_positions(block, pattern, Modulo(p=spec.n, q=spec.n), residue_class)
        logger.info("Scan cross-check", scan=scan_positions, decoded=position)

    report = DecodeReport(
        n=spec.n,
        level=level,
        part=part,
        residue_class=residue_class,
        pattern=pattern.to_rows(),
        position=position,
        scan_count=None if scan_positions is None else len(scan_positions),
        scan_positions=scan_positions,
    )
    _emit(format_report(report, args.report_format), args.out)
    if args.global_position:
        sys.stderr.write(f"array position: {global_position(spec.n, level, part, position)}\n")
    return EXIT_OK if report.agrees_with_scan else EXIT_FAILED


def cmd_matrix(args: argparse.Namespace, settings: Settings) -> int:
    """Print a Pascal-like matrix with its border rows marked."""
    try:
        d = exponent_of(args.n)
    except ValueError as e:
        raise UsageError(str(e)) from None
    variant = build_variant(d, parse_profile(args.profile, args.n), max_exponent=settings.max_matrix_exponent)
    n = variant.n
    upper = [upper_border(variant, j) for j in range(n)]
    lower = [lower_border(variant, j) for j in range(n)]
    lines = []
    for r, row in enumerate(variant.matrix.to_rows()):
        marks = "".join(
            "^" if upper[j] == r and lower[j] == r else "u" if upper[j] == r else "l" if lower[j] == r else "."
            for j in range(n)
        )
        lines.append(f"{''.join(str(v) for v in row)}  {marks}")
    lines.append(f"upper: {upper}")
    lines.append(f"lower: {lower}")
    lines.append(f"tau: {tau(variant)}")
    _emit("\n".join(lines) + "\n", args.out)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    """Global flags plus one subparser per command."""
    parser = argparse.ArgumentParser(description="Nested perfect toroidal arrays")
    parser.add_argument("--threads", type=int, default=None, help="Worker threads (default: TORUS_THREADS or all cores)")
    parser.add_argument("--log-level", choices=["debug", "info", "warning", "error"], default=None)
    parser.add_argument("--log-json", action="store_true", default=None, help="Emit JSON log lines on stderr")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_spec_flags(p: argparse.ArgumentParser) -> None:
        p.add_argument("--n", type=int, required=True, help="Tile side, a power of 2")
        p.add_argument("--profile", default="zero", help="Rotation shifts as a comma list, or 'zero'")
        p.add_argument("--z", default="zero", help="Z tile as hex (row-major, high nibble first), or 'zero'")

    def add_report_flags(p: argparse.ArgumentParser) -> None:
        p.add_argument("--format", dest="report_format", choices=["text", "json"], default="text")
        p.add_argument("--out", type=Path, default=None, help="Write output here instead of stdout")

    p = sub.add_parser("generate", help="Write an affine array (Pascal array by default)")
    add_spec_flags(p)
    p.add_argument("--format", choices=["text", "pbm"], default="text")
    p.add_argument("--out", type=Path, default=None)
    p.set_defaults(handler=cmd_generate)

    p = sub.add_parser("verify", help="Check (s,t,p,q)-perfectness")
    p.add_argument("file", type=Path)
    p.add_argument("--window", required=True, help="s,t")
    p.add_argument("--modulo", required=True, help="p,q")
    add_report_flags(p)
    p.set_defaults(handler=cmd_verify)

    p = sub.add_parser("verify-nested", help="Check nested perfectness")
    p.add_argument("file", type=Path)
    p.add_argument("--n", type=int, default=None, help="Square form: window n,n modulo n,n")
    p.add_argument("--window", default=None, help="s,t for the general form")
    p.add_argument("--modulo", default=None, help="p,q for the general form")
    add_report_flags(p)
    p.set_defaults(handler=cmd_verify_nested)

    p = sub.add_parser("census", help="Count and verify the affine family")
    p.add_argument("--n", type=int, required=True)
    mode = p.add_mutually_exclusive_group()
    mode.add_argument("--exhaustive", action="store_true", help="All (profile, Z) pairs (default)")
    mode.add_argument("--sample", type=int, default=None, help="Number of random members")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--progress", action="store_true", help="Show a progress bar")
    add_report_flags(p)
    p.set_defaults(handler=cmd_census)

    p = sub.add_parser("decode", help="Locate a pattern by solving for its tile indices")
    add_spec_flags(p)
    p.add_argument("--pattern", required=True, help="Rows of 0/1 separated by '/', e.g. 01/01")
    p.add_argument("--class", dest="residue_class", default="0,0", help="i,j residue modulo (n,n)")
    p.add_argument("--level", type=int, default=None, help="Subdivision level (default: pattern rows)")
    p.add_argument("--part", default="0,0", help="Aligned part p,q at that level")
    p.add_argument("--check", action="store_true", help="Cross-check against a full scan of the part")
    p.add_argument("--global-position", action="store_true", help="Also print the array coordinates")
    add_report_flags(p)
    p.set_defaults(handler=cmd_decode)

    p = sub.add_parser("matrix", help="Print a Pascal-like matrix with borders and tau")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--profile", default="zero")
    p.add_argument("--out", type=Path, default=None)
    p.set_defaults(handler=cmd_matrix)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    """Run one command and return its exit status."""
    parser = build_parser()
    args = parser.parse_args(argv)
    overrides = {
        key: value
        for key, value in (("threads", args.threads), ("log_level", args.log_level), ("log_json", args.log_json))
        if value is not None
    }
    try:
        settings = Settings.model_validate({**load_settings().model_dump(), **overrides})
    except ValueError as e:
        sys.stderr.write(f"error: {e}\n")
        return EXIT_USAGE
    configure_logging(settings.log_level, settings.log_json)

    try:
        return args.handler(args, settings)
    except TheoryViolation as e:
        logger.error("Decoder contradiction", error=str(e))
        sys.stderr.write(f"theory violation: {e}\n")
        return EXIT_FAILED
    except (ValueError, OSError) as e:
        logger.error("Command failed", command=args.command, error=str(e))
        sys.stderr.write(f"error: {e}\n")
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
