"""Command-line entry point.

Subcommands mirror the workflow: run a campaign, serve the gateway, replay
recorded traces, train and evaluate the trace classifier, render reports,
and lint the bundled fixtures. Exit codes: 0 success, 1 runtime failure,
2 usage error, 3 configuration error. All randomness hangs off --seed, so
identical argv produces identical output files.
"""

from __future__ import annotations

import argparse
import json
import signal
import sys
from pathlib import Path
from typing import Any, Sequence

from . import __version__
from .alertlog import AlertLog
from .canonical import canonicalize
from .config import TrapConfig, load_config, load_fixture_config
from .classifier import FeatureExtractor, ForestModel
from .classifier.evaluate import (
    evaluate_model,
    split_rows,
    train_on_rows,
    transfer_eval,
)
from .classifier.labels import LabeledTrace, build_dataset
from .engine import inspect
from .errors import ConfigError, SchemaError, TaxonomyMismatch, ToolTrapError
from .gateway.replay import read_traces, write_traces
from .gateway.server import serve
from .sim.corpus import ATTACK_SETS, LANGUAGES, load_bundled_corpus
from .sim.environments import build_environment
from .sim.policies import ATTACK_POLICY_KINDS, PolicyKind
from .sim.suites import SUITE_NAMES, get_suite
from .sim.trials import (
    CampaignPlan,
    adaptive_plan,
    benign_plan,
    classifier_plan,
    read_records,
    run_campaign,
    write_records,
)
from .stats import render_report, summarize
from .types import Trace, TrialRecord

DEFAULT_SEED = 2025


def _csv(text: str) -> tuple[str, ...]:
    return tuple(part.strip() for part in text.split(",") if part.strip())


def _parse_policies(text: str) -> tuple[PolicyKind, ...]:
    if text == "all":
        return ATTACK_POLICY_KINDS
    kinds = []
    for name in _csv(text):
        try:
            kinds.append(PolicyKind(name))
        except ValueError:
            raise ConfigError(f"unknown policy {name!r}") from None
    return tuple(kinds)


def _suite_configs(suites: Sequence[str]) -> dict[str, TrapConfig]:
    return {s: load_fixture_config(s) for s in suites}


def _rebuild_log(traces: Sequence[Trace], configs: dict[str, TrapConfig]) -> AlertLog:
    """Re-inspect recorded calls; equals the live log by determinism."""
    log = AlertLog()
    for trace in traces:
        cfg = configs.get(trace.suite)
        if cfg is None:
            raise ConfigError(f"no config for suite {trace.suite!r}")
        for call in trace.calls:
            log.append(inspect(call, cfg.registry, cfg.vault, cfg.policy))
    return log


def _extractors(configs: dict[str, TrapConfig]) -> dict[str, FeatureExtractor]:
    return {
        suite: FeatureExtractor(cfg.registry, cfg.vault, cfg.policy)
        for suite, cfg in configs.items()
    }


def _load_dataset(
    traces_path: str, records_path: str
) -> tuple[list[LabeledTrace], dict[str, TrapConfig]]:
    traces = read_traces(traces_path)
    records = read_records(records_path)
    configs = _suite_configs(sorted({t.suite for t in traces}))
    log = _rebuild_log(traces, configs)
    result = build_dataset(traces, log, records=records)
    return list(result.labeled), configs


def _filter_rows(
    rows: Sequence[LabeledTrace], policies: tuple[str, ...]
) -> list[LabeledTrace]:
    if not policies or policies == ("all",):
        return list(rows)
    wanted = set(policies)
    return [r for r in rows if r.policy in wanted]


# --- subcommands ----------------------------------------------------------------


# Flags each named plan actually consumes; anything else in this set is a
# user error, not something to ignore.
_MATRIX_FLAGS = {
    "benign": {"--benign-reps"},
    "adaptive": {"--trials", "--compliance"},
    "classifier": {"--compliance"},
}


def _reject_unused_matrix_flags(args: argparse.Namespace) -> None:
    supplied = set()
    if args.suite:
        supplied.add("--suite")
    if args.set:
        supplied.add("--set")
    if args.languages != "en":
        supplied.add("--languages")
    if args.policies != "all":
        supplied.add("--policies")
    if args.trials:
        supplied.add("--trials")
    if args.benign_reps:
        supplied.add("--benign-reps")
    if args.compliance is not None:
        supplied.add("--compliance")
    ignored = sorted(supplied - _MATRIX_FLAGS[args.plan])
    if ignored:
        raise ConfigError(
            f"{', '.join(ignored)} fixed by --plan {args.plan}; use --plan custom"
        )


def _cmd_run(args: argparse.Namespace) -> int:
    if args.plan != "custom":
        _reject_unused_matrix_flags(args)
    if args.plan == "benign":
        plan = benign_plan(repetitions=args.benign_reps or 5, seed=args.seed)
    elif args.plan == "adaptive":
        plan = adaptive_plan(
            trials=args.trials or 3,
            compliance=0.8 if args.compliance is None else args.compliance,
            seed=args.seed,
        )
    elif args.plan == "classifier":
        plan = classifier_plan(
            compliance=0.65 if args.compliance is None else args.compliance,
            seed=args.seed,
        )
    else:
        plan = CampaignPlan(
            name="run",
            suites=_csv(args.suite) if args.suite else SUITE_NAMES,
            attack_sets=_csv(args.set) if args.set else (),
            languages=_csv(args.languages),
            policies=_parse_policies(args.policies),
            trials_per_combo=args.trials or 1,
            benign_repetitions=args.benign_reps,
            compliance=1.0 if args.compliance is None else args.compliance,
            seed=args.seed,
            jobs=args.jobs,
        )
    for s in plan.suites:
        if s not in SUITE_NAMES:
            raise ConfigError(f"unknown suite {s!r}")
    for aset in plan.attack_sets:
        if aset not in ATTACK_SETS:
            raise ConfigError(f"unknown attack set {aset!r}")
    for lang in plan.languages:
        if lang not in LANGUAGES:
            raise ConfigError(f"unknown language {lang!r}")

    corpus = load_bundled_corpus()
    coords = plan.coordinates(corpus)
    n_benign = sum(1 for c in coords if c.attack_id is None)
    n_attack = len(coords) - n_benign

    print(f"campaign {plan.name}: suites={','.join(plan.suites)} seed={plan.seed}")
    if plan.benign_repetitions:
        n_tasks = sum(len(get_suite(s).tasks) for s in plan.suites)
        print(
            f"  benign: {n_tasks} tasks x {plan.benign_repetitions} repetitions"
            f" = {n_benign} trials"
        )
    for aset in plan.attack_sets:
        set_coords = [
            c for c in coords if c.attack_id and corpus.get(c.attack_id).attack_set == aset
        ]
        n_prompts = len({c.attack_id for c in set_coords})
        n_langs = len({c.language for c in set_coords})
        print(
            f"  {aset}: {n_prompts} prompts x {n_langs} languages x "
            f"{plan.trials_per_combo} trials x {len(plan.policies)} policies"
            f" = {len(set_coords)} trials"
        )
    print(f"  total: {len(coords)} trials ({n_attack} attacked, {n_benign} benign)")

    outcome = run_campaign(plan, corpus=corpus, jobs=args.jobs)

    n = write_records(outcome.records, args.out)
    print(f"wrote {n} records to {args.out}")
    if args.traces:
        n = write_traces(outcome.traces, args.traces)
        print(f"wrote {n} traces to {args.traces}")
    if args.alerts:
        n = outcome.alert_log.write_export(args.alerts)
        print(f"wrote {n} alerts to {args.alerts}")
    print(f"alerts: {outcome.alert_log.total_alerts}")
    return 0


def _cmd_proxy(args: argparse.Namespace) -> int:
    config = load_config(args.config) if args.config else load_fixture_config(args.suite)
    suite = args.suite or config.suite
    if suite not in SUITE_NAMES:
        raise ConfigError(f"unknown suite {suite!r}")
    backend = build_environment(suite, config)
    host, _, port = args.listen.rpartition(":")
    if not host or not port.isdigit():
        raise ConfigError(f"--listen wants host:port, got {args.listen!r}")
    log = AlertLog()

    def _terminate(signum: int, frame: Any) -> None:
        # SIGTERM must unwind through the finally below or the export is lost.
        raise SystemExit(0)

    signal.signal(signal.SIGTERM, _terminate)
    print(f"gateway listening on {host}:{port} (suite {suite})")
    try:
        serve((host, int(port)), backend, config, alert_log=log, block=True)
    except KeyboardInterrupt:
        pass
    finally:
        if args.alerts:
            n = log.write_export(args.alerts)
            print(f"wrote {n} alerts to {args.alerts}")
    return 0


def _cmd_replay(args: argparse.Namespace) -> int:
    traces = read_traces(args.infile)
    if args.config:
        cfg = load_config(args.config)
        configs = {t.suite: cfg for t in traces}
    else:
        configs = _suite_configs(sorted({t.suite for t in traces}))
    log = _rebuild_log(traces, configs)
    for layer, count in sorted(log.counts.items()):
        print(f"{layer.value}: {count}")
    print(f"total alerts: {log.total_alerts} over {len(traces)} traces")
    if args.alerts:
        n = log.write_export(args.alerts)
        print(f"wrote {n} alerts to {args.alerts}")
    return 0


def _cmd_train(args: argparse.Namespace) -> int:
    rows, configs = _load_dataset(args.traces, args.records)
    train_rows = _filter_rows(rows, _csv(args.train_policies))
    extractors = _extractors(configs)
    model = train_on_rows(
        train_rows,
        extractors,
        n_trees=args.trees,
        max_depth=args.max_depth,
        seed=args.seed,
    )
    model.save(args.model_out)
    metrics = evaluate_model(model, train_rows, extractors)
    print(f"trained on {len(train_rows)} rows -> {args.model_out}")
    print(json.dumps(metrics, sort_keys=True))
    return 0


def _cmd_eval(args: argparse.Namespace) -> int:
    rows, configs = _load_dataset(args.traces, args.records)
    extractors = _extractors(configs)

    if args.transfer:
        metrics = transfer_eval(
            rows,
            extractors,
            scheme=args.transfer,
            train_values=_csv(args.train_values),
            test_values=_csv(args.test_values),
            seed=args.seed,
        )
        print(json.dumps(metrics, sort_keys=True))
        return 0

    if not args.model:
        raise ConfigError("eval needs --model unless --transfer is used")
    model = ForestModel.load(args.model)
    rows = _filter_rows(rows, _csv(args.policies))
    if args.split > 0:
        _, rows = split_rows(rows, test_fraction=args.split, seed=args.seed)
    metrics = evaluate_model(
        model, rows, extractors, use_ground_truth=args.ground_truth
    )
    print(json.dumps(metrics, sort_keys=True))
    return 0


def _cmd_report(args: argparse.Namespace) -> int:
    records = read_records(args.infile)
    summaries = summarize(
        records, group_by=_csv(args.group_by), confidence=args.confidence
    )
    print(render_report(summaries, fmt=args.format))
    return 0


def _cmd_lint_fixtures(args: argparse.Namespace) -> int:
    corpus = load_bundled_corpus()
    print(f"corpus: {len(corpus.prompts)} prompts validated")

    violations: list[str] = []
    for suite in SUITE_NAMES:
        config = load_fixture_config(suite)
        suite_def = get_suite(suite)
        decoys = config.registry.decoy_names
        baits = [canonicalize(t.value) for t in config.vault.tokens]

        for task in suite_def.tasks:
            for tool, call_args in task.steps:
                if tool in decoys:
                    violations.append(f"{suite}/{task.task_id}: decoy step {tool}")
                blob = canonicalize(json.dumps(call_args, ensure_ascii=False))
                for bait in baits:
                    if bait and bait in blob:
                        violations.append(
                            f"{suite}/{task.task_id}: planted credential in args"
                        )
        read_anywhere = {d for t in suite_def.tasks for d in t.reads_docs}
        for doc_id, text in suite_def.docs.items():
            if "{SLOT:" in text and doc_id not in read_anywhere:
                violations.append(
                    f"{suite}/{doc_id}: injection slot in a document no task reads"
                )
        print(f"{suite}: {len(suite_def.tasks)} tasks linted")

    for line in violations:
        print(f"VIOLATION {line}")
    print(f"{len(violations)} trap references in benign scripts")
    return 0 if not violations else 1


# --- parser ---------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="tooltrap",
        description="Trap-layer gateway, simulation harness, and trace classifier.",
    )
    parser.add_argument("--version", action="version", version=f"tooltrap {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("run", help="run a simulation campaign")
    p.add_argument("--plan", choices=("custom", "benign", "adaptive", "classifier"),
                   default="custom",
                   help="named plans fix the suite/language/policy matrix")
    p.add_argument("--suite", default="", help="comma-separated suites (default all)")
    p.add_argument("--set", default="", help="comma-separated attack sets")
    p.add_argument("--languages", default="en")
    p.add_argument("--trials", type=int, default=0,
                   help="trials per combination (default: plan-specific)")
    p.add_argument("--policies", default="all")
    p.add_argument("--benign-reps", type=int, default=0)
    p.add_argument("--compliance", type=float, default=None,
                   help="attack-step compliance probability (default: plan-specific)")
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--out", default="results.jsonl")
    p.add_argument("--traces", default="")
    p.add_argument("--alerts", default="")
    p.set_defaults(func=_cmd_run)

    p = sub.add_parser("proxy", help="serve the gateway over TCP")
    p.add_argument("--config", default="", help="config path (default: bundled)")
    p.add_argument("--suite", default="banking")
    p.add_argument("--listen", default="127.0.0.1:7033")
    p.add_argument("--alerts", default="", help="alert export written on shutdown")
    p.set_defaults(func=_cmd_proxy)

    p = sub.add_parser("replay", help="re-inspect a recorded trace file")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--config", default="", help="single config for every trace")
    p.add_argument("--alerts", default="")
    p.set_defaults(func=_cmd_replay)

    p = sub.add_parser("train", help="train the trace classifier")
    p.add_argument("--traces", required=True)
    p.add_argument("--records", required=True)
    p.add_argument("--model-out", required=True)
    p.add_argument("--train-policies", default="benign,gullible",
                   help="policies whose trap labels feed training")
    p.add_argument("--trees", type=int, default=100)
    p.add_argument("--max-depth", type=int, default=12)
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.set_defaults(func=_cmd_train)

    p = sub.add_parser("eval", help="evaluate a model or run a transfer split")
    p.add_argument("--traces", required=True)
    p.add_argument("--records", required=True)
    p.add_argument("--model", default="")
    p.add_argument("--policies", default="all")
    p.add_argument("--split", type=float, default=0.0,
                   help="held-out fraction; 0 evaluates every row")
    p.add_argument("--ground-truth", action="store_true",
                   help="score against the harness compromise flag")
    p.add_argument("--transfer", choices=("policy", "language"), default="")
    p.add_argument("--train-values", default="")
    p.add_argument("--test-values", default="")
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.set_defaults(func=_cmd_eval)

    p = sub.add_parser("report", help="summarize a results file")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--group-by", default="")
    p.add_argument("--format", choices=("text", "jsonl"), default="text")
    p.add_argument("--confidence", type=float, default=0.95)
    p.set_defaults(func=_cmd_report)

    p = sub.add_parser("lint-fixtures", help="check bundled fixtures for trap leaks")
    p.set_defaults(func=_cmd_lint_fixtures)

    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # argparse exits on --help/usage errors
        return int(exc.code or 0)
    try:
        return args.func(args)
    except (ConfigError, SchemaError, TaxonomyMismatch) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 3
    except (ToolTrapError, OSError, ValueError, KeyError) as exc:
        print(f"runtime error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
