"""Command-line entry point: align corpora, evaluate recall, compare the
exact solver against its approximations, and generate synthetic corpora.

Exit codes: 0 success, 1 input/config error, 2 internal invariant violation.
Output files are written to a temp file and renamed on success, so a failed
run leaves no partial output.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import tempfile
from pathlib import Path
from typing import Callable

from .corpus import (
    CorpusFormatError,
    load_corpus,
    load_gold,
    save_corpus,
    save_embeddings,
    save_gold,
)
from .evaluation import (
    SynthSpec,
    collect_approx_records,
    generate_synthetic,
    recall,
    summarize_approx,
)
from .matching import (
    Alignment,
    ScorerConfig,
    ScorerKind,
    ScoringError,
    competitive_match,
    read_alignment_tsv,
    score_all_pairs,
    write_alignment_tsv,
)
from .transport import InvariantError, Solver
from .weighting import WeightingScheme


class _Parser(argparse.ArgumentParser):
    # usage errors are input/config errors: exit 1, not argparse's default 2
    def error(self, message: str):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(1)


def _atomic_write(path: str | Path, write_fn: Callable[[str], None]) -> None:
    """Run write_fn against a temp path, then rename over the target."""
    path = Path(path)
    fd, tmp = tempfile.mkstemp(dir=path.parent or Path("."), prefix=f".{path.name}.")
    os.close(fd)
    try:
        write_fn(tmp)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _check_paths(inputs: list[str | Path], outputs: list[str | Path]) -> None:
    """Validate all file paths before any work starts."""
    for path in inputs:
        if not Path(path).is_file():
            raise ValueError(f"input file not found: {path}")
    for path in outputs:
        parent = Path(path).parent
        if not (parent == Path("") or parent.is_dir()):
            raise ValueError(f"output directory does not exist: {parent}")


def _scorer_config(args: argparse.Namespace) -> ScorerConfig:
    kind = ScorerKind(args.scorer)
    if kind is not ScorerKind.SMD and (args.solver is not None or args.scheme is not None):
        raise ValueError("--solver and --scheme are only valid with --scorer smd")
    return ScorerConfig(
        kind=kind,
        solver=Solver(args.solver or "greedy"),
        scheme=WeightingScheme(args.scheme or "uniform"),
        max_vocab=args.max_vocab,
    )


def _cmd_align(args: argparse.Namespace) -> int:
    if args.threads < 1:
        raise ValueError("--threads must be a positive integer")
    config = _scorer_config(args)
    _check_paths([args.corpus, args.embeddings], [args.out])
    domains = load_corpus(args.corpus, args.embeddings)
    alignments = []
    for domain in domains:  # load_corpus returns domains sorted by id
        pairs = score_all_pairs(domain, config, threads=args.threads)
        alignments.append(competitive_match(pairs))
    _atomic_write(args.out, lambda tmp: write_alignment_tsv(alignments, tmp))
    return 0


def _cmd_eval(args: argparse.Namespace) -> int:
    _check_paths([args.alignment, args.gold], [])
    predicted = Alignment(tuple(read_alignment_tsv(args.alignment)))
    gold = load_gold(args.gold)
    report = recall(predicted, gold)
    print(json.dumps(report.to_json()))
    return 0


def _cmd_compare_approx(args: argparse.Namespace) -> int:
    scheme = WeightingScheme(args.scheme or "uniform")
    _check_paths([args.corpus, args.embeddings], [args.out] if args.out else [])
    domains = load_corpus(args.corpus, args.embeddings)
    records = []
    for domain in domains:
        records.extend(
            collect_approx_records(
                domain, scheme, repeats=args.repeats, max_vocab=args.max_vocab
            )
        )
    report = summarize_approx(records)
    payload = json.dumps(report.to_json())
    if args.out:
        _atomic_write(args.out, lambda tmp: Path(tmp).write_text(payload + "\n"))
    print(payload)
    return 0


def _cmd_synth(args: argparse.Namespace) -> int:
    _check_paths([], [args.corpus, args.embeddings, args.gold])
    spec = SynthSpec(
        n_domains=args.domains,
        docs_per_side=args.docs_per_side,
        sentences_lo=args.sentences_lo,
        sentences_hi=args.sentences_hi,
        dim=args.dim,
        noise_sigma=args.noise_sigma,
        seed=args.seed,
        boilerplate_frac=args.boilerplate_frac,
    )
    domains, gold = generate_synthetic(spec)
    _atomic_write(args.corpus, lambda tmp: save_corpus(domains, tmp))
    _atomic_write(args.embeddings, lambda tmp: save_embeddings(domains[0].embeddings, tmp))
    _atomic_write(args.gold, lambda tmp: save_gold(gold, tmp))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="smdalign", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    align = sub.add_parser("align", help="score and match documents per domain")
    align.add_argument("--corpus", required=True)
    align.add_argument("--embeddings", required=True)
    align.add_argument("--out", required=True, help="output alignment TSV")
    align.add_argument("--scorer", choices=["de", "sa", "smd"], default="smd")
    align.add_argument("--solver", choices=["exact", "relaxed", "greedy"], default=None)
    align.add_argument("--scheme", choices=["uniform", "sl", "idf", "slidf"], default=None)
    align.add_argument("--threads", type=int, default=1)
    align.add_argument("--seed", type=int, default=0, help="unused; alignment is deterministic")
    align.add_argument("--max-vocab", type=int, default=2000,
                       help="truncate documents beyond this many sentences")
    align.set_defaults(func=_cmd_align)

    ev = sub.add_parser("eval", help="recall of an alignment against gold pairs")
    ev.add_argument("--alignment", required=True, help="alignment TSV from `align`")
    ev.add_argument("--gold", required=True)
    ev.set_defaults(func=_cmd_eval)

    comp = sub.add_parser("compare-approx",
                          help="exact vs relaxed vs greedy distances on every pair")
    comp.add_argument("--corpus", required=True)
    comp.add_argument("--embeddings", required=True)
    comp.add_argument("--scheme", choices=["uniform", "sl", "idf", "slidf"], default=None)
    comp.add_argument("--max-vocab", type=int, default=2000,
                      help="error if any document vocabulary exceeds this")
    comp.add_argument("--repeats", type=int, default=3, help="timing repetitions per pair")
    comp.add_argument("--out", default=None, help="also write the JSON report here")
    comp.set_defaults(func=_cmd_compare_approx)

    synth = sub.add_parser("synth", help="generate a seeded synthetic corpus")
    synth.add_argument("--corpus", required=True, help="output corpus JSONL")
    synth.add_argument("--embeddings", required=True, help="output XEMB file")
    synth.add_argument("--gold", required=True, help="output gold TSV")
    synth.add_argument("--domains", type=int, default=3)
    synth.add_argument("--docs-per-side", type=int, default=5)
    synth.add_argument("--sentences-lo", type=int, default=4)
    synth.add_argument("--sentences-hi", type=int, default=8)
    synth.add_argument("--dim", type=int, default=8)
    synth.add_argument("--noise-sigma", type=float, default=0.0)
    synth.add_argument("--boilerplate-frac", type=float, default=0.0)
    synth.add_argument("--seed", type=int, default=0)
    synth.set_defaults(func=_cmd_synth)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except InvariantError as exc:
        print(f"smdalign: internal invariant violation: {exc}", file=sys.stderr)
        return 2
    except (CorpusFormatError, ScoringError, ValueError, OSError) as exc:
        print(f"smdalign: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
