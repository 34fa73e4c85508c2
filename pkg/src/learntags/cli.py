"""Command-line front end.

One subcommand per pipeline stage plus the SVG figure exports.  Exit
codes: 0 success, 1 validation problem, 2 I/O problem.  Diagnostics go
to stderr; data goes to --out or stdout.
"""
from __future__ import annotations

import argparse
import json
import sys

from . import ingest
from .pipeline import (
    PipelineConfig,
    match_resources,
    load_store,
    render_report,
    run,
    save_store,
)
from .quantify import quantify_attribute_detail, quantification_report
from .cluster import apply_normalization, fit_normalization, select_k, to_feature_points
from .viz import export_parcoords, export_values  # re-exported CLI operations

_DEFAULTS = PipelineConfig()


def _add_config_flags(sp: argparse.ArgumentParser) -> None:
    sp.add_argument("--delta0", type=int, default=_DEFAULTS.delta0,
                    help="high-rating threshold (default %(default)s)")
    sp.add_argument("--support", type=float, default=_DEFAULTS.support_sl,
                    help="Apriori support level (default %(default)s)")
    sp.add_argument("--features", type=int, default=_DEFAULTS.nmf_k,
                    help="independent features for NMF (default %(default)s)")
    sp.add_argument("--kmax", type=int, default=_DEFAULTS.k_max,
                    help="largest cluster count swept (default %(default)s)")
    sp.add_argument("--gamma", type=float, default=_DEFAULTS.gamma,
                    help="diameter jump factor (default %(default)s)")
    sp.add_argument("--min-subset", type=int, default=_DEFAULTS.min_subset,
                    help="smallest subset worth tagging (default %(default)s)")
    sp.add_argument("--seed", type=int, default=_DEFAULTS.seed,
                    help="RNG seed (default %(default)s)")


def _add_input_flags(sp: argparse.ArgumentParser) -> None:
    sp.add_argument("--ratings", help="ratings CSV path")
    sp.add_argument("--profiles", help="learner profiles CSV path")
    sp.add_argument("--synth-seed", type=int, default=None,
                    help="synthesize profiles for raters missing from --profiles")


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="learntags",
        description="Tag learning resources with the profiles of their high raters.",
    )
    sub = parser.add_subparsers(dest="subcommand", required=True)

    sp = sub.add_parser("ingest-check", help="validate input files, print counts")
    _add_input_flags(sp)

    sp = sub.add_parser("synth-profiles", help="write synthetic profiles for raters")
    _add_input_flags(sp)
    sp.add_argument("--out", help="output CSV path (default stdout)")

    sp = sub.add_parser("quantify", help="dump the nominal-attribute quantification")
    _add_input_flags(sp)
    _add_config_flags(sp)
    sp.add_argument("--out", help="output JSON path (default stdout)")

    sp = sub.add_parser("tag", help="run the full pipeline and write the store")
    _add_input_flags(sp)
    _add_config_flags(sp)
    sp.add_argument("--out", help="store JSON path")
    sp.add_argument("--trace", help="write the per-resource k-sweep trace here")

    sp = sub.add_parser("match", help="rank stored resources against one learner")
    _add_input_flags(sp)
    _add_config_flags(sp)
    sp.add_argument("--store", required=True, help="store JSON from `tag`")
    sp.add_argument("--learner", required=True, help="learner id from --profiles")
    sp.add_argument("--top", type=int, default=5,
                    help="entries to print (default %(default)s)")

    sp = sub.add_parser("export-values", help="strip chart of quantified values")
    _add_input_flags(sp)
    _add_config_flags(sp)
    sp.add_argument("--attribute", choices=sorted(("strategy", "presentation")),
                    default="strategy", help="attribute to plot (default %(default)s)")
    sp.add_argument("--out", required=True, help="SVG path")

    sp = sub.add_parser("export-parcoords", help="parallel coordinates for one subset")
    _add_input_flags(sp)
    _add_config_flags(sp)
    sp.add_argument("--resource", required=True, help="resource id to plot")
    sp.add_argument("--out", required=True, help="SVG path")

    return parser


def _config_from(args: argparse.Namespace) -> PipelineConfig:
    return PipelineConfig(
        delta0=args.delta0,
        support_sl=args.support,
        nmf_k=args.features,
        k_max=args.kmax,
        gamma=args.gamma,
        seed=args.seed,
        min_subset=args.min_subset,
    )


def _read_ratings(path: str) -> ingest.RatingsResult:
    # latin-1 is 8-bit transparent, matching the dataset's encoding
    with open(path, "r", encoding="latin-1", newline="") as fh:
        return ingest.parse_ratings(fh)


def _read_profiles(path: str) -> ingest.ProfilesResult:
    with open(path, "r", encoding="utf-8", newline="") as fh:
        return ingest.parse_profiles(fh)


def _assemble_profiles(args: argparse.Namespace, records) -> dict[str, ingest.LearnerProfile]:
    """Profiles from --profiles, topped up synthetically when asked."""
    by_id: dict[str, ingest.LearnerProfile] = {}
    if args.profiles:
        result = _read_profiles(args.profiles)
        if result.rejected:
            line, reason = result.rejected[0]
            print(f"warning: {len(result.rejected)} profile rows rejected "
                  f"(first at line {line}: {reason})", file=sys.stderr)
        by_id.update({p.learner_id: p for p in result.profiles})
    if args.synth_seed is not None:
        rated = sorted({r.learner_id for r in records})
        missing = [lid for lid in rated if lid not in by_id]
        for p in ingest.generate_profiles(missing, args.synth_seed):
            by_id[p.learner_id] = p
    if not by_id:
        raise ValueError("no profiles: pass --profiles and/or --synth-seed")
    return by_id


def _write_text(text: str, path: str | None) -> None:
    if path is None:
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)


def _cmd_ingest_check(args: argparse.Namespace) -> int:
    problems = 0
    if args.ratings is None and args.profiles is None:
        raise ValueError("nothing to check: pass --ratings and/or --profiles")
    if args.ratings:
        res = _read_ratings(args.ratings)
        print(f"ratings: {len(res.records)} kept, "
              f"{res.dropped_zero} zero-rated dropped, {res.malformed} malformed")
        problems += res.malformed
    if args.profiles:
        res = _read_profiles(args.profiles)
        print(f"profiles: {len(res.profiles)} kept, "
              f"{len(res.rejected)} rejected, {res.duplicates} duplicates")
        problems += len(res.rejected)
    return 1 if problems else 0


def _cmd_synth_profiles(args: argparse.Namespace) -> int:
    if args.ratings is None:
        raise ValueError("synth-profiles needs --ratings to know the learner ids")
    records = _read_ratings(args.ratings).records
    seed = args.synth_seed if args.synth_seed is not None else 0
    known: set[str] = set()
    if args.profiles:
        known = {p.learner_id for p in _read_profiles(args.profiles).profiles}
    ids = sorted({r.learner_id for r in records} - known)
    profiles = ingest.generate_profiles(ids, seed)
    _write_text(ingest.render_profiles(profiles), args.out)
    return 0


def _quantify_details(args: argparse.Namespace, config: PipelineConfig):
    if args.ratings is None:
        raise ValueError("missing --ratings")
    records = _read_ratings(args.ratings).records
    profiles = _assemble_profiles(args, records)
    subsets = ingest.build_all_subsets(records, config.delta0)
    ordered = [subsets[rid] for rid in sorted(subsets)]
    details = {
        attr: quantify_attribute_detail(ordered, profiles, attr, config)
        for attr in ("presentation", "strategy")
    }
    return records, profiles, subsets, details


def _cmd_quantify(args: argparse.Namespace) -> int:
    config = _config_from(args)
    *_, details = _quantify_details(args, config)
    doc = json.dumps(quantification_report(details), indent=2, sort_keys=True) + "\n"
    _write_text(doc, args.out)
    return 0


def _cmd_tag(args: argparse.Namespace) -> int:
    config = _config_from(args)
    if args.ratings is None:
        raise ValueError("missing --ratings")
    records = _read_ratings(args.ratings).records
    profiles = _assemble_profiles(args, records)

    traces: list[str] = []

    def hook(rid, trace):
        for entry in trace:
            traces.append(f"{rid}\t{entry.k}\t{entry.sse!r}\t{entry.avg_diameter!r}")

    store = run(config, records, profiles,
                trace_hook=hook if args.trace else None)
    if args.trace:
        _write_text("\n".join(traces) + ("\n" if traces else ""), args.trace)
    if args.out:
        save_store(store, args.out)
    sys.stdout.write(render_report(store))
    return 0


def _cmd_match(args: argparse.Namespace) -> int:
    config = _config_from(args)
    if args.profiles is None:
        raise ValueError("missing --profiles")
    store = load_store(args.store)
    profiles = {p.learner_id: p for p in _read_profiles(args.profiles).profiles}
    if args.learner not in profiles:
        raise KeyError(f"no profile for learner {args.learner!r}")
    if args.ratings is None:
        raise ValueError("missing --ratings (needed to recover quantified values)")
    *_, details = _quantify_details(args, config)
    ranked = match_resources(
        profiles[args.learner], store,
        details["strategy"].values, details["presentation"].values,
        top_n=args.top,
    )
    for rid, score in ranked:
        print(f"{rid}\t{score:.3f}")
    return 0


def _cmd_export_values(args: argparse.Namespace) -> int:
    config = _config_from(args)
    *_, details = _quantify_details(args, config)
    export_values(details[args.attribute].values, args.attribute, args.out)
    return 0


def _cmd_export_parcoords(args: argparse.Namespace) -> int:
    config = _config_from(args)
    records, profiles, subsets, details = _quantify_details(args, config)
    if args.resource not in subsets:
        raise KeyError(f"resource {args.resource!r} has no high-rating subset")
    points = to_feature_points(
        subsets[args.resource], profiles,
        details["strategy"].values, details["presentation"].values,
    )
    normalized = apply_normalization(points, fit_normalization(points))
    if len(normalized) < 2:
        assignment = {p.learner_id: 0 for p in normalized}
    else:
        selection = select_k(normalized, config.k_max, config.gamma, config.seed)
        assignment = selection.clustering.assignment
    export_parcoords(normalized, assignment, args.out)
    return 0


_COMMANDS = {
    "ingest-check": _cmd_ingest_check,
    "synth-profiles": _cmd_synth_profiles,
    "quantify": _cmd_quantify,
    "tag": _cmd_tag,
    "match": _cmd_match,
    "export-values": _cmd_export_values,
    "export-parcoords": _cmd_export_parcoords,
}


def dispatch(argv: list[str]) -> int:
    """Parse argv and run one subcommand, mapping failures to exit codes."""
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # argparse exits on usage errors and --help
        return 0 if exc.code == 0 else 1
    try:
        return _COMMANDS[args.subcommand](args)
    except OSError as exc:
        name = exc.filename if exc.filename else exc
        print(f"error: cannot access {name}: {exc.strerror or exc}", file=sys.stderr)
        return 2
    except (ValueError, KeyError) as exc:
        message = exc.args[0] if exc.args else exc
        print(f"error: {message}", file=sys.stderr)
        return 1


def main() -> int:
    return dispatch(sys.argv[1:])


if __name__ == "__main__":
    sys.exit(main())
