#!/usr/bin/env python3
"""
Command-line interface for the k-positivity oracle

Exit codes: 0 clean, 1 operational error, 2 a violated candidate was reported.
"""
import argparse
import asyncio
import contextlib
import logging
import math
import sys
from pathlib import Path
from typing import IO, Iterator, List, Optional

from dotenv import load_dotenv
from pydantic import ValidationError

from kpos_oracle import RunConfig, ToleranceConfig, VerificationAgent, __version__
from kpos_oracle.config import OutputFormat, env_default, parse_range
from kpos_oracle.errors import OracleError
from kpos_oracle.family_mapper import FamilyMapper
from kpos_oracle.matrix_parser import ParsedMatrix, load_matrices, parse_matrices
from kpos_oracle.result_summarizer import ResultSummarizer, dump_json, has_candidates, write_csv
from kpos_oracle.sampling import Profile, SampleSpec, dump_samples

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_CANDIDATE = 2

logger = logging.getLogger("kpos_oracle.cli")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--n", default=env_default("n", "4"), help="matrix sizes: 4, 3..8 or 3,5,7")
    common.add_argument("--k", default=env_default("k"), help="cone levels (default: every level that fits)")
    common.add_argument("--p", default=env_default("p"), help="wedge grades for the derivation operator")
    common.add_argument("--count", type=int, default=env_default("count", "100"), help="trials per (n, level)")
    common.add_argument("--seed", type=int, default=env_default("seed", "0"), help="64-bit master seed")
    common.add_argument("--profile", choices=[p.value for p in Profile], default=env_default("profile", Profile.GENERIC.value))
    common.add_argument("--family", default=env_default("family", "sk"), help="conjecture family: sk, detminor, product-p, product-<p>")
    common.add_argument("--format", dest="output_format", choices=[f.value for f in OutputFormat],
                        default=env_default("format", OutputFormat.HUMAN.value))
    common.add_argument("--out", "-o", type=Path, default=env_default("out"), help="output file (default: stdout)")
    common.add_argument("--tol-rel", type=float, default=env_default("tol_rel", "1e-9"))
    common.add_argument("--tol-abs", type=float, default=env_default("tol_abs", "1e-12"))
    common.add_argument("--threads", type=int, default=env_default("threads", "1"))
    common.add_argument("--log-level", default=env_default("log_level", "WARNING"))

    parser = argparse.ArgumentParser(
        description="Check Hadamard-type inequalities for k-positive matrices",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
Examples:
  %(prog)s check matrix.txt --k 2..4
  %(prog)s sweep --n 4..8 --count 1000 --seed 7 --format csv
  %(prog)s conjecture --family product-p --p 2 --n 4 --count 500
  %(prog)s sample --n 5 --k 3 --profile strictly-k-not-k+1 --out samples.jsonl
        """,
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    commands = parser.add_subparsers(dest="command", required=True)
    check = commands.add_parser("check", parents=[common], help="run every statement on supplied matrices")
    check.add_argument("inputs", nargs="*", type=Path, help="matrix files, '-' for stdin")
    check.add_argument("--input", dest="extra_inputs", action="append", type=Path, default=[])
    commands.add_parser("sweep", parents=[common], help="randomized sweep over sampled k-positive matrices")
    commands.add_parser("conjecture", parents=[common], help="search for candidates against the hyperbolic conjecture")
    commands.add_parser("sample", parents=[common], help="dump sampled matrices as JSON lines")
    return parser


def build_config(args: argparse.Namespace) -> RunConfig:
    return RunConfig(
        command=args.command,
        n_values=parse_range(args.n),
        k_values=parse_range(args.k) if args.k else None,
        p_values=parse_range(args.p) if args.p else None,
        count=args.count,
        seed=args.seed,
        profile=args.profile,
        family=args.family,
        output_format=args.output_format,
        out=args.out,
        inputs=list(getattr(args, "inputs", [])) + list(getattr(args, "extra_inputs", [])),
        threads=args.threads,
        tol=ToleranceConfig(eps_abs=args.tol_abs, eps_rel=args.tol_rel),
    )


@contextlib.contextmanager
def open_output(path: Optional[Path]) -> Iterator[IO[str]]:
    if path is None:
        yield sys.stdout
    else:
        with open(path, "w") as handle:
            yield handle


def _read_inputs(paths: List[Path]) -> List[ParsedMatrix]:
    matrices: List[ParsedMatrix] = []
    for path in paths:
        if str(path) == "-":
            matrices.extend(parse_matrices(sys.stdin.read(), "<stdin>"))
        else:
            matrices.extend(load_matrices(path))
    return matrices


async def cmd_check(config: RunConfig, agent: VerificationAgent, summarizer: ResultSummarizer) -> int:
    if not config.inputs:
        raise OracleError("check needs at least one matrix file")
    matrices = _read_inputs(config.inputs)
    print(f"🧮 Checking {len(matrices)} matrices", file=sys.stderr)
    found = False
    collected = []
    with open_output(config.out) as out:
        for parsed in matrices:
            reports = await agent.check_matrix(parsed.matrix, config.k_values, config.p_values)
            for report in reports:
                report.provenance = {"source": parsed.label, **parsed.provenance, **report.provenance}
            found = found or has_candidates(reports)
            if config.output_format is OutputFormat.JSON:
                summarizer.write_stream(reports, out)
            elif config.output_format is OutputFormat.HUMAN:
                out.write(summarizer.render_checks(reports, heading=f"📋 {parsed.label} (n={parsed.matrix.n})") + "\n\n")
                out.flush()
            else:
                collected.extend(reports)
        if config.output_format is OutputFormat.CSV:
            write_csv(summarizer.check_frame(collected), out)
    return EXIT_CANDIDATE if found else EXIT_OK


async def cmd_sweep(config: RunConfig, agent: VerificationAgent, summarizer: ResultSummarizer) -> int:
    print(f"🔁 Sweep: n={config.n_values}, count={config.count}, seed={config.seed}, profile={config.profile}", file=sys.stderr)
    result = await agent.sweep(config.n_values, config.k_values, config.count, config.seed,
                               Profile(config.profile), config.p_values)
    with open_output(config.out) as out:
        if config.output_format is OutputFormat.JSON:
            dump_json(summarizer.summary_document(
                result.reports, seed=config.seed, profile=config.profile, n_values=config.n_values,
                count=config.count, trials=result.trials, sampling_failures=result.failures,
            ), out)
        elif config.output_format is OutputFormat.CSV:
            write_csv(summarizer.summary_frame(result.reports), out)
        else:
            out.write(summarizer.render_summary(result.reports, "📊 SWEEP SUMMARY", result.failures) + "\n")
    return EXIT_CANDIDATE if result.candidates else EXIT_OK


async def cmd_conjecture(config: RunConfig, agent: VerificationAgent, summarizer: ResultSummarizer) -> int:
    family, _ = FamilyMapper().resolve(config.family)
    levels = config.p_values if family.level_name == "p" else config.k_values
    print(f"🔎 Conjecture search: family={config.family}, n={config.n_values}, count={config.count}", file=sys.stderr)
    result = await agent.conjecture_search(config.family, config.n_values, levels, config.count, config.seed)
    with open_output(config.out) as out:
        if config.output_format is OutputFormat.JSON:
            dump_json(summarizer.candidates_document(
                result.reports, family=config.family, seed=config.seed, n_values=config.n_values,
                trials=result.trials, failures=result.failures,
                margins=[r.margin for r in result.reports if math.isfinite(r.margin)],
            ), out)
        elif config.output_format is OutputFormat.CSV:
            write_csv(summarizer.check_frame(result.reports), out)
        else:
            out.write(summarizer.render_summary(result.reports, f"🔎 CONJECTURE SEARCH ({config.family})", result.failures) + "\n")
            out.write("Evidence only: the inequality for general hyperbolic polynomials is open.\n")
    if result.candidates:
        print(f"⚠️  {len(result.candidates)} candidates survived escalation", file=sys.stderr)
    return EXIT_OK


async def cmd_sample(config: RunConfig, agent: VerificationAgent, summarizer: ResultSummarizer) -> int:
    profile = Profile(config.profile)
    total = 0
    with open_output(config.out) as out:
        for n in config.n_values:
            levels = config.k_values or range(1, n + 1)
            for k in levels:
                if k > n or (profile is Profile.STRICT and k >= n) or config.count == 0:
                    continue
                total += dump_samples(SampleSpec(n, k, config.count, config.seed, profile), out, config.tol)
    print(f"💾 Wrote {total} samples", file=sys.stderr)
    return EXIT_OK


COMMANDS = {
    "check": cmd_check,
    "sweep": cmd_sweep,
    "conjecture": cmd_conjecture,
    "sample": cmd_sample,
}


async def main(argv: Optional[List[str]] = None) -> int:
    """Main CLI entry point"""
    load_dotenv()
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=getattr(logging, str(args.log_level).upper(), logging.WARNING),
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
    )
    try:
        config = build_config(args)
    except (ValueError, ValidationError) as e:
        print(f"❌ Invalid arguments: {e}", file=sys.stderr)
        return EXIT_ERROR

    agent = VerificationAgent(config.tol, config.threads)
    try:
        return await COMMANDS[config.command](config, agent, ResultSummarizer())
    except KeyboardInterrupt:
        print("\n⚠️  Interrupted by user", file=sys.stderr)
        return EXIT_ERROR
    except (OracleError, OSError, ValueError) as e:
        logger.debug("operational error", exc_info=True)
        print(f"❌ Error: {e}", file=sys.stderr)
        return EXIT_ERROR
    finally:
        await agent.cleanup()


def run(argv: Optional[List[str]] = None) -> int:
    return asyncio.run(main(argv))


if __name__ == "__main__":
    sys.exit(run())
