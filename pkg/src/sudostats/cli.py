"""Command-line interface: ``sudostats {generate,rate,stats,census,oracle}``.

Exit codes: 0 success, 1 usage error, 2 data error.  Every output file
starts with '#' lines recording the command and its flags.
"""

from __future__ import annotations

import argparse
import contextlib
import logging
import sys
import time
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

import numpy as np

from . import __version__
from .bias import (
    BiasModel,
    SampleStats,
    clue_histogram,
    raw_mean,
    raw_sd,
    unbiased_mean,
    unbiased_sd,
    unbiased_total_sd,
)
from .board import Puzzle, board_for_side, format_puzzle, get_board, parse_puzzle
from .census import (
    GRIDS_9X9,
    NONISOMORPHIC_GRIDS_9X9,
    CensusEstimate,
    estimate_counts_per_grid,
    estimate_success_rate,
    estimate_tries,
    totals,
)
from .generators import GeneratorKind, GridCatalog, iter_batch, read_sample, write_records
from .rating import ABOVE_CAP, DEFAULT_CAP, UnsolvablePuzzleError, nrczt_rating
from .solver import count_solutions, enumerate_complete_grids, minimal_masks

log = logging.getLogger("sudostats")

EXIT_USAGE = 1
EXIT_DATA = 2
DEFAULT_ANCHOR = {4: 5, 9: 26}
DEFAULT_GRID_COUNTS = {4: [288], 9: [GRIDS_9X9, NONISOMORPHIC_GRIDS_9X9]}


class UsageError(Exception):
    pass


class DataError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _header(fh, command: str, args: argparse.Namespace, **extra) -> None:
    fh.write(f"# sudostats {__version__} {command}\n")
    for key, value in sorted(vars(args).items()):
        if key in ("func",) or value is None:
            continue
        fh.write(f"# {key}={value}\n")
    for key, value in extra.items():
        fh.write(f"# {key}={value}\n")


@contextlib.contextmanager
def _output(path):
    if path is None or str(path) == "-":
        yield sys.stdout
        sys.stdout.flush()
    else:
        with open(path, "w") as fh:
            yield fh


def _read_lines(path):
    try:
        with open(path) as fh:
            return fh.read().splitlines()
    except OSError as exc:
        raise DataError(f"cannot read {path}: {exc.strerror}") from None


# -- generate -------------------------------------------------------------------


def cmd_generate(args) -> int:
    board = board_for_side(args.board)
    source = None
    if args.grids:
        try:
            source = GridCatalog.from_file(args.grids, board)
        except (OSError, ValueError) as exc:
            raise DataError(f"grid source {args.grids}: {exc}") from None
    kind = GeneratorKind(args.kind)
    if kind is GeneratorKind.BOTTOM_UP and source is not None:
        raise UsageError("--grids has no effect on the bottom-up generator")
    done = grids = 0
    started = last = time.monotonic()
    with _output(args.out) as fh:
        _header(fh, "generate", args, kind_name=kind.value)
        fh.flush()
        try:
            for values, consumed in iter_batch(kind, args.count, args.seed, args.workers, board, source):
                write_records(fh, values, consumed, board)
                fh.flush()
                done += len(values)
                grids += int(consumed.sum())
                now = time.monotonic()
                if now - last > args.progress:
                    log.info("%d/%d puzzles, %d grids, %.0fs", done, args.count, grids, now - started)
                    last = now
        except KeyboardInterrupt:
            fh.write(f"# interrupted=true\n# records={done}\n# total_grids_consumed={grids}\n")
            raise
        fh.write(f"# records={done}\n# total_grids_consumed={grids}\n")
    return 0


# -- rate -----------------------------------------------------------------------


def _rate_chunk(lines, side, cap):
    board = board_for_side(side)
    out = []
    for line in lines:
        p = parse_puzzle(line, board)
        if count_solutions(p, 2) != 1:
            out.append((line, None, 0))
            continue
        r = nrczt_rating(p, cap, check_unique=False)
        out.append((line, r.rating, r.partial_whip_count))
    return out


def _load_sample_lines(path):
    lines, board_side = [], None
    for raw in _read_lines(path):
        raw = raw.strip()
        if not raw:
            continue
        if raw.startswith("#"):
            body = raw[1:].strip()
            if body.startswith("board="):
                board_side = int(body.split("=", 1)[1])
            continue
        lines.append(raw.split("\t", 1)[0])
    if board_side is None and lines:
        board_side = 4 if len(lines[0]) == 16 else 9
    return lines, board_side


def cmd_rate(args) -> int:
    lines, side = _load_sample_lines(args.sample)
    side = side or 9
    chunks = [lines[i : i + 32] for i in range(0, len(lines), 32)]
    try:
        if args.workers > 1 and chunks:
            with ProcessPoolExecutor(args.workers) as pool:
                results = [r for part in pool.map(_rate_chunk, chunks, [side] * len(chunks),
                                                  [args.cap] * len(chunks)) for r in part]
        else:
            results = [r for c in chunks for r in _rate_chunk(c, side, args.cap)]
    except (ValueError, UnsolvablePuzzleError) as exc:
        raise DataError(str(exc)) from None
    hist: Counter = Counter()
    warnings = 0
    with _output(args.out) as fh:
        _header(fh, "rate", args)
        for line, rating, partial in results:
            if rating is None:
                warnings += 1
                log.warning("skipped (not a unique-solution puzzle): %s", line)
                continue
            hist[rating] += 1
            fh.write(f"{line}\t{'A' if rating == ABOVE_CAP else rating}\t{partial}\n")
    total = sum(hist.values())
    for level in sorted(hist, key=lambda v: (v == ABOVE_CAP, v if v != ABOVE_CAP else 0)):
        print(f"level {level}\t{hist[level]}\t{100.0 * hist[level] / total:.2f}%", file=sys.stderr)
    if warnings:
        print(f"warnings\t{warnings}", file=sys.stderr)
    return 0


def read_ratings(path) -> dict[str, tuple[int | str, int]]:
    out = {}
    for raw in _read_lines(path):
        if not raw.strip() or raw.startswith("#"):
            continue
        fields = raw.split("\t")
        if len(fields) < 3:
            raise DataError(f"{path}: malformed rating line {raw!r}")
        rating = ABOVE_CAP if fields[1] == "A" else int(fields[1])
        out[fields[0]] = (rating, int(fields[2]))
    return out


# -- stats ----------------------------------------------------------------------


def _load_batch(path):
    try:
        return read_sample(path)
    except OSError as exc:
        raise DataError(f"cannot read {path}: {exc.strerror}") from None
    except (ValueError, KeyError) as exc:
        raise DataError(f"{path}: {exc}") from None


def sample_variables(batch, ratings=None) -> tuple[np.ndarray, dict[str, np.ndarray]]:
    """Clue counts plus the tracked variables of a sample (rated puzzles only
    when ``ratings`` is given)."""
    clues = batch.clue_counts
    variables = {"clues": clues.astype(float), "grids_consumed": batch.grids_consumed.astype(float)}
    if ratings is None:
        return clues, variables
    keep, nrczt = [], []
    from .board import format_values

    for i, row in enumerate(batch.values):
        rating = ratings.get(format_values(row), (None, 0))[0]
        if rating is None or rating == ABOVE_CAP:
            continue
        keep.append(i)
        nrczt.append(rating)
    keep = np.array(keep, dtype=int)
    variables = {k: v[keep] for k, v in variables.items()}
    variables["nrczt"] = np.array(nrczt, dtype=float)
    return clues[keep], variables


def stats_report(batch, ratings, anchor: int) -> str:
    clues, variables = sample_variables(batch, ratings)
    if clues.size == 0:
        raise DataError("empty sample")
    stats = SampleStats.from_arrays(clues, variables)
    model = BiasModel(batch.board.cells, anchor)
    on, pct = clue_histogram(clues)
    lines = [
        f"kind\t{batch.kind.value if batch.kind else 'unknown'}",
        f"board\t{batch.board.side}",
        f"puzzles\t{clues.size}",
        f"anchor\t{anchor}",
    ]
    if batch.kind is not GeneratorKind.CONTROLLED_BIAS:
        lines.append("note\tcorrection factors are only valid for controlled-bias samples")
    for name in variables:
        lines += [
            f"{name}.raw_mean\t{raw_mean(stats, name):.6g}",
            f"{name}.raw_sd\t{raw_sd(stats, name):.6g}",
            f"{name}.unbiased_mean\t{unbiased_mean(stats, name, model):.6g}",
            f"{name}.unbiased_sd\t{unbiased_sd(stats, name, model):.6g}",
            f"{name}.unbiased_total_sd\t{unbiased_total_sd(stats, name, model):.6g}",
        ]
    cols = ["n", "on", "pct", "cf"]
    for name in variables:
        cols += [f"E({name},n)", f"sd({name},n)"]
    lines.append("")
    lines.append("\t".join(cols))
    for n in on:
        row = [str(n), str(on[n]), f"{pct[n]:.4g}", f"{model.cf_float(n):.6g}"]
        for name in variables:
            row += [f"{stats.E(name, n):.6g}", f"{stats.sd(name, n):.6g}"]
        lines.append("\t".join(row))
    return "\n".join(lines) + "\n"


def cmd_stats(args) -> int:
    batch = _load_batch(args.sample)
    if len(batch) == 0:
        raise DataError("empty sample")
    ratings = read_ratings(args.ratings) if args.ratings else None
    anchor = args.anchor if args.anchor is not None else DEFAULT_ANCHOR[batch.board.side]
    if not 0 <= anchor < batch.board.cells:
        raise UsageError(f"anchor must be in 0..{batch.board.cells - 1}")
    report = stats_report(batch, ratings, anchor)
    with _output(args.out) as fh:
        _header(fh, "stats", args)
        fh.write(report)
    return 0


# -- census ---------------------------------------------------------------------


def census_report(est: CensusEstimate, grid_counts) -> str:
    tries = estimate_tries(est.count, est.cells)
    lines = []
    if est.total_outputs:
        lines += [
            f"outputs\t{est.total_outputs}",
            f"grids_consumed\t{est.grids_consumed:.0f}",
            f"success_rate\t{est.success_rate:.6g}",
            "",
        ]
    lines.append("n\ton\tcount\trel_err\ttries")
    for n in est.count:
        on = est.on.get(n, "")
        rel = est.rel_err.get(n, float("nan"))
        lines.append(f"{n}\t{on}\t{est.count[n]:.5g}\t{rel:.3g}\t{tries[n]:.5g}")
    lines.append("")
    for g in grid_counts:
        t = totals(est, g)
        lines.append(f"per_grid_total\t{t.per_grid:.5g}\trel_err\t{t.rel_err:.3g}")
        lines.append(f"grids\t{g}\ttotal\t{t.total:.5g}")
    return "\n".join(lines) + "\n"


def _read_counts(path):
    counts, errs = {}, {}
    for raw in _read_lines(path):
        if not raw.strip() or raw.startswith("#"):
            continue
        fields = raw.split()
        try:
            n, c = int(fields[0]), float(fields[1])
            counts[n] = c
            if len(fields) > 2:
                errs[n] = float(fields[2].rstrip("%")) / (100 if fields[2].endswith("%") else 1)
        except (ValueError, IndexError):
            raise DataError(f"{path}: malformed count line {raw!r}") from None
    return counts, errs


def cmd_census(args) -> int:
    if (args.sample is None) == (args.counts is None):
        raise UsageError("give either a sample file or --counts")
    if args.counts:
        counts, errs = _read_counts(args.counts)
        side = args.board or 9
        est = CensusEstimate.from_counts(counts, board_for_side(side).cells, errs)
    else:
        batch = _load_batch(args.sample)
        if batch.kind is not GeneratorKind.CONTROLLED_BIAS:
            raise DataError(
                f"census needs a controlled-bias sample, got {batch.kind.value if batch.kind else 'unknown'}"
            )
        if len(batch) == 0:
            raise DataError("empty sample")
        s = estimate_success_rate(len(batch), batch.total_grids)
        est = estimate_counts_per_grid(batch.on, len(batch), s, batch.board.cells)
        side = batch.board.side
    grid_counts = args.grid_count or DEFAULT_GRID_COUNTS[side]
    with _output(args.out) as fh:
        _header(fh, "census", args)
        fh.write(census_report(est, grid_counts))
    return 0


# -- oracle ---------------------------------------------------------------------


def cmd_oracle(args) -> int:
    if args.board != 4:
        raise UsageError(
            "the oracle enumerates every complete grid and is only feasible for --board 4 "
            "(9x9 has 6,670,903,752,021,072,936,960 grids)"
        )
    board = get_board(2)
    outdir = Path(args.outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    grids = enumerate_complete_grids(board)
    with open(outdir / "grids.txt", "w") as fh:
        _header(fh, "oracle", args, content="complete grids", count=len(grids))
        for g in grids:
            fh.write(format_puzzle(g) + "\n")
    bits = 1 << np.arange(board.cells)
    per_n: Counter = Counter()
    total = 0
    with open(outdir / "minimals.txt", "w") as fh:
        _header(fh, "oracle", args, content="minimal puzzles: puzzle<TAB>clues<TAB>grid index")
        for gi, masks in enumerate(minimal_masks(board.k)):
            for m in masks:
                vals = np.where(m & bits, grids[gi].values, 0)
                n = int(np.count_nonzero(vals))
                per_n[n] += 1
                total += 1
                fh.write(f"{format_puzzle(Puzzle(board, vals))}\t{n}\t{gi}\n")
    with open(outdir / "counts.txt", "w") as fh:
        _header(fh, "oracle", args, content="n<TAB>minimal puzzles<TAB>mean per grid", total=total)
        for n in sorted(per_n):
            fh.write(f"{n}\t{per_n[n]}\t{per_n[n] / len(grids):.10g}\n")
    print(f"{len(grids)} grids, {total} minimal puzzles -> {outdir}", file=sys.stderr)
    return 0


# -- entry point ----------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="sudostats", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    g = sub.add_parser("generate", help="generate minimal puzzles")
    g.add_argument("--kind", required=True, choices=[k.value for k in GeneratorKind])
    g.add_argument("--count", type=int, required=True)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--workers", type=int, default=1)
    g.add_argument("--board", type=int, choices=[4, 9], default=9)
    g.add_argument("--grids", metavar="FILE", help="complete-grid catalog, one grid per line")
    g.add_argument("--progress", type=float, default=30.0, help="seconds between progress lines")
    g.add_argument("-o", "--out", help="output file (default stdout)")
    g.set_defaults(func=cmd_generate)

    r = sub.add_parser("rate", help="NRCZT-rate the puzzles of a sample")
    r.add_argument("sample")
    r.add_argument("--cap", type=int, default=DEFAULT_CAP)
    r.add_argument("--workers", type=int, default=1)
    r.add_argument("-o", "--out")
    r.set_defaults(func=cmd_rate)

    s = sub.add_parser("stats", help="raw and bias-corrected statistics")
    s.add_argument("sample")
    s.add_argument("--ratings", metavar="FILE")
    s.add_argument("--anchor", type=int, help="clue count with cf = 1 (default 26, or 5 on 4x4)")
    s.add_argument("-o", "--out")
    s.set_defaults(func=cmd_stats)

    c = sub.add_parser("census", help="estimate the number of minimal puzzles")
    c.add_argument("sample", nargs="?")
    c.add_argument("--counts", metavar="FILE", help="replay known per-grid counts (n count [rel_err])")
    c.add_argument("--board", type=int, choices=[4, 9], help="board for --counts (default 9)")
    c.add_argument("--grid-count", type=int, action="append", help="number of complete grids (repeatable)")
    c.add_argument("-o", "--out")
    c.set_defaults(func=cmd_census)

    o = sub.add_parser("oracle", help="exhaustive 4x4 enumeration")
    o.add_argument("--board", type=int, default=4)
    o.add_argument("--outdir", default="oracle")
    o.set_defaults(func=cmd_oracle)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(
        level=logging.INFO if args.verbose else logging.WARNING,
        format="%(levelname)s %(message)s",
        stream=sys.stderr,
    )
    if getattr(args, "count", None) is not None and args.count < 1:
        parser.error("--count must be >= 1")
    if getattr(args, "workers", 1) < 1:
        parser.error("--workers must be >= 1")
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"sudostats: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except DataError as exc:
        print(f"sudostats: {exc}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
