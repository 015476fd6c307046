"""Command-line entry point.

Subcommands: validate, run, report, datagen, import-qald, seed.
Exit codes: 0 success, 1 validation/data failure, 2 configuration error,
3 backend/transport failure.

Runs with builtin translators are fully deterministic: repeated invocations
with the same configuration produce byte-identical logs and reports, which
is why nothing here ever writes a timestamp into an output file.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .datagen import ChatClient, ChatClientConfig, ChatTransportError, DatagenAborted, PromptBudgetExceeded, run_datagen
from .dataset import Dataset, DatasetError, load_dataset, shuffle_train
from .engine.remote import BackendError, LocalBackend, RemoteBackend
from .evaluator import (
    CheckpointEval,
    EvalOutcome,
    GoldExecutionError,
    GoldStore,
    OutcomeKind,
    RunLogWriter,
    RunRecord,
    classify,
    evaluate_checkpoint,
)
from .qald import import_qald
from .rdf.turtle import TurtleParseError, load_graph
from .seeding import InvalidRunId, default_run_ids, derive_seed
from .stats import emit_reports
from .translators import Translator, build_translator, parse_translator_flag

EXIT_OK = 0
EXIT_DATA = 1
EXIT_CONFIG = 2
EXIT_BACKEND = 3

DEFAULT_EPOCHS = list(range(5, 101, 5))


class ConfigError(Exception):
    pass


def _build_backend(dataset: Dataset, override: str | dict | None):
    """Backend from the dataset manifest, overridable by a config-file dict
    or a flag shorthand ('local:PATH' or an http(s) endpoint URL)."""
    spec = dict(dataset.backend_spec)
    source = dataset.graph_source()
    if isinstance(override, dict):
        spec = dict(override)
        if spec.get("kind") == "local":
            source = Path(spec["graph"])
    elif isinstance(override, str):
        if override.startswith("local:"):
            spec = {"kind": "local", "graph": override.split(":", 1)[1]}
            source = Path(spec["graph"])
        elif override.startswith(("http://", "https://")):
            spec = {"kind": "remote", "endpoint": override}
        else:
            raise ConfigError(f"cannot parse backend spec {override!r}")
    if spec.get("kind") == "local":
        if source is None:
            raise ConfigError("dataset has no local graph source")
        graph = load_graph(source)
        return LocalBackend(graph, description=f"local:{source}")
    if spec.get("kind") != "remote":
        raise ConfigError(f"backend must declare kind local or remote: {spec!r}")
    return RemoteBackend(
        endpoint=spec["endpoint"],
        timeout_s=spec.get("timeout", 30.0),
        retries=spec.get("retries", 2),
        headers=spec.get("headers", {}),
        max_connections=spec.get("max_connections", 4),
    )


def _load_config(args) -> dict:
    config: dict = {}
    if args.config:
        config = json.loads(Path(args.config).read_text(encoding="utf-8"))
    if getattr(args, "dataset", None):
        config["dataset"] = args.dataset
    if getattr(args, "backend", None):
        config["backend"] = args.backend
    if getattr(args, "out", None):
        config["out"] = args.out
    if getattr(args, "jobs", None):
        config["jobs"] = args.jobs
    if getattr(args, "runs", None):
        config["runs"] = args.runs
    if getattr(args, "epochs", None):
        config["epochs"] = [int(e) for e in args.epochs.split(",")]
    if getattr(args, "translator", None):
        config["translators"] = [parse_translator_flag(t) for t in args.translator]
    if getattr(args, "replay", None):
        config.setdefault("translators", []).append({"kind": "transcript", "path": args.replay, "name": "replay"})
    return config


def _run_ids_from(config: dict) -> list[str]:
    runs = config.get("runs")
    if runs is None:
        return default_run_ids()
    if isinstance(runs, int):
        return default_run_ids(runs)
    if isinstance(runs, str):
        if runs.isdigit():
            return default_run_ids(int(runs))
        return [r.strip() for r in runs.split(",") if r.strip()]
    return list(runs)


def _schedule_from(config: dict) -> list[int]:
    schedule = config.get("epochs", DEFAULT_EPOCHS)
    schedule = [int(e) for e in schedule]
    if not schedule or any(e <= 0 for e in schedule) or sorted(set(schedule)) != schedule:
        raise ConfigError(f"epoch schedule must be strictly increasing positive integers: {schedule}")
    return schedule


# --- subcommands -----------------------------------------------------------------


def cmd_seed(args) -> int:
    try:
        print(derive_seed(args.label))
    except InvalidRunId as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    return EXIT_OK


def cmd_validate(args) -> int:
    try:
        dataset = load_dataset(args.dataset)
    except DatasetError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA
    try:
        backend = _build_backend(dataset, args.backend)
    except (ConfigError, TurtleParseError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    try:
        gold = GoldStore(dataset, backend)
    except GoldExecutionError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except BackendError as exc:
        print(f"error: backend unavailable: {exc}", file=sys.stderr)
        return EXIT_BACKEND

    failures: list[str] = []
    for record in dataset.records:
        if record.id in gold.skipped:
            continue
        outcome = classify(record, record.gold_query, dataset, backend, gold)
        if outcome.kind is not OutcomeKind.CORRECT:
            failures.append(f"{record.id}: gold self-test {outcome.kind.value}: {outcome.detail}")
    train = len(dataset.split_records("train"))
    test = len(dataset.split_records("test"))
    print(f"{len(dataset.records)} records, {train} train / {test} test")
    if gold.skipped:
        print(f"{len(gold.skipped)} records carry unsupported gold queries (excluded from local evaluation)")
    if failures:
        for failure in failures:
            print(f"FAIL {failure}", file=sys.stderr)
        return EXIT_DATA
    print("gold self-test: all records Correct")
    return EXIT_OK


def _evaluate_translator(
    translator: Translator,
    dataset: Dataset,
    backend,
    gold: GoldStore,
    run_ids: list[str],
    schedule: list[int],
    out_dir: Path,
    jobs: int,
    strict_projection: bool,
) -> list[RunRecord]:
    safe_name = "".join(c if c.isalnum() or c in "._-" else "_" for c in translator.name)
    logs_dir = out_dir / "logs" / safe_name
    logs_dir.mkdir(parents=True, exist_ok=True)
    shuffles_dir = out_dir / "shuffles"
    shuffles_dir.mkdir(parents=True, exist_ok=True)

    runs: list[RunRecord] = []
    for run_id in run_ids:
        seed = derive_seed(run_id)
        order = [r.id for r in shuffle_train(dataset, seed)]
        shuffle_path = shuffles_dir / f"{run_id}.json"
        shuffle_path.write_text(
            json.dumps({"run": run_id, "seed": seed, "order": order}, indent=2) + "\n", encoding="utf-8"
        )
        run = RunRecord(run_id=run_id, seed=seed)
        with RunLogWriter(logs_dir / f"{run_id}.ndjson") as log_writer:
            for epoch in schedule:
                checkpoint = evaluate_checkpoint(
                    translator,
                    dataset,
                    backend,
                    run_id,
                    epoch,
                    gold=gold,
                    log_writer=log_writer,
                    jobs=jobs,
                    strict_projection=strict_projection,
                )
                run.checkpoints.append(checkpoint)
        runs.append(run)
    return runs


def cmd_run(args) -> int:
    try:
        config = _load_config(args)
        if "dataset" not in config:
            raise ConfigError("no dataset configured (use --dataset or a config file)")
        if not config.get("translators"):
            raise ConfigError("no translators configured (use --translator or a config file)")
        run_ids = _run_ids_from(config)
        schedule = _schedule_from(config)
        if not run_ids:
            raise ConfigError("at least one run id is required")
        for run_id in run_ids:
            derive_seed(run_id)
        out_dir = Path(config.get("out", "out"))
        jobs = int(config.get("jobs", 1))
        strict_projection = bool(config.get("strict_projection", True))
    except (ConfigError, InvalidRunId, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG

    try:
        dataset = load_dataset(
            config["dataset"],
            expand_paraphrases=config.get("expand_paraphrases"),
            strict_projection=strict_projection,
        )
    except DatasetError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA
    try:
        backend = _build_backend(dataset, config.get("backend"))
        gold = GoldStore(dataset, backend)
    except (ConfigError, TurtleParseError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except GoldExecutionError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except BackendError as exc:
        print(f"error: backend unavailable: {exc}", file=sys.stderr)
        return EXIT_BACKEND

    out_dir.mkdir(parents=True, exist_ok=True)
    effective = {
        "dataset": str(config["dataset"]),
        "translators": config["translators"],
        "runs": run_ids,
        "epochs": schedule,
        "jobs": jobs,
        "strict_projection": strict_projection,
        "expand_paraphrases": dataset.expand_paraphrases,
        "out": str(out_dir),
    }
    (out_dir / "config.json").write_text(json.dumps(effective, indent=2) + "\n", encoding="utf-8")

    runs_by_model: dict[str, list[RunRecord]] = {}
    for spec in config["translators"]:
        try:
            translator = build_translator(spec, dataset)
        except (ValueError, OSError) as exc:
            print(f"error: {exc}", file=sys.stderr)
            return EXIT_CONFIG
        with translator:
            print(f"evaluating translator {translator.name} over {len(run_ids)} runs x {len(schedule)} checkpoints")
            try:
                runs = _evaluate_translator(
                    translator, dataset, backend, gold, run_ids, schedule, out_dir, jobs, strict_projection
                )
            except BackendError as exc:
                print(f"error: backend failure while judging gold queries: {exc}", file=sys.stderr)
                return EXIT_BACKEND
        runs_by_model[translator.name] = runs
        for run in runs:
            print(f"  {translator.name} {run.run_id}: best {run.best}")

    manifest = {
        "dataset": {"path": str(config["dataset"]), "sha256": dataset.manifest_sha256, "name": dataset.name},
        "backend": backend.description,
        "translators": [spec.get("name") or spec.get("builtin") or spec["kind"] for spec in config["translators"]],
        "schedule": schedule,
        "runs": [{"run": r, "seed": derive_seed(r)} for r in run_ids],
        "comparison": {
            "rows": "multiset unless gold query uses DISTINCT (then set)",
            "order": "sequence comparison if and only if the gold query carries ORDER BY",
            "numeric_literals": "compared by value across xsd:integer/decimal/float/double",
            "variable_names": "ignored",
        },
        "strict_projection": strict_projection,
        "expand_paraphrases": dataset.expand_paraphrases,
    }
    (out_dir / "manifest.json").write_text(json.dumps(manifest, indent=2) + "\n", encoding="utf-8")

    emit_reports(runs_by_model, out_dir / "reports")
    print(f"reports written to {out_dir / 'reports'}")
    return EXIT_OK


def _runs_from_logs(logs_dir: Path) -> dict[str, list[RunRecord]]:
    runs_by_model: dict[str, list[RunRecord]] = {}
    model_dirs = sorted(p for p in logs_dir.iterdir() if p.is_dir())
    if not model_dirs:
        raise FileNotFoundError(f"no translator log directories under {logs_dir}")
    for model_dir in model_dirs:
        runs: list[RunRecord] = []
        for log_path in sorted(model_dir.glob("*.ndjson")):
            run_id = log_path.stem
            checkpoints: dict[int, dict[str, EvalOutcome]] = {}
            with open(log_path, encoding="utf-8") as handle:
                for line in handle:
                    line = line.strip()
                    if not line:
                        continue
                    obj = json.loads(line)
                    outcome = EvalOutcome(OutcomeKind(obj["outcome"]), obj.get("detail", ""))
                    checkpoints.setdefault(obj["epoch"], {})[obj["question_id"]] = outcome
            run = RunRecord(run_id=run_id, seed=derive_seed(run_id))
            for epoch in sorted(checkpoints):
                run.checkpoints.append(
                    CheckpointEval(
                        run_id=run_id,
                        translator=model_dir.name,
                        dataset="",
                        epoch=epoch,
                        outcomes=checkpoints[epoch],
                    )
                )
            runs.append(run)
        if runs:
            runs_by_model[model_dir.name] = runs
    return runs_by_model


def cmd_report(args) -> int:
    logs_dir = Path(args.logs)
    if not logs_dir.is_dir():
        print(f"error: {logs_dir} is not a directory", file=sys.stderr)
        return EXIT_DATA
    try:
        runs_by_model = _runs_from_logs(logs_dir)
    except (FileNotFoundError, json.JSONDecodeError, KeyError, InvalidRunId) as exc:
        print(f"error: cannot reconstruct runs from logs: {exc}", file=sys.stderr)
        return EXIT_DATA
    out_dir = Path(args.out) if args.out else logs_dir.parent / "reports"
    emit_reports(runs_by_model, out_dir)
    print(f"reports written to {out_dir}")
    return EXIT_OK


def cmd_datagen(args) -> int:
    try:
        graph = load_graph(args.graph)
    except (TurtleParseError, OSError) as exc:
        print(f"error: cannot load graph: {exc}", file=sys.stderr)
        return EXIT_DATA
    chat_config = ChatClientConfig(
        endpoint=args.endpoint,
        model=args.model,
        api_key_env=args.api_key_env,
        replay_path=args.replay,
    )
    client = ChatClient(chat_config)
    templates = {}
    try:
        if args.generate_prompt:
            templates["generate_template"] = Path(args.generate_prompt).read_text(encoding="utf-8")
        if args.paraphrase_prompt:
            templates["paraphrase_template"] = Path(args.paraphrase_prompt).read_text(encoding="utf-8")
    except OSError as exc:
        print(f"error: cannot read prompt template: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    try:
        manifest = run_datagen(
            graph,
            client,
            args.out,
            n=args.count,
            dataset_name=args.name,
            query_mode="ambient-prefixes" if graph.prefixes else "self-contained",
            backend_spec={"kind": "local", "graph": str(Path(args.graph).name)},
            test_count=args.test_count,
            **templates,
        )
    except PromptBudgetExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except DatagenAborted as exc:
        print(f"error: aborted mid-pipeline, partial manifest persisted: {exc}", file=sys.stderr)
        return EXIT_BACKEND
    except ChatTransportError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BACKEND
    kept = len(manifest["records"])
    rejected = len(manifest.get("rejected", []))
    print(f"kept {kept} verified tuples ({rejected} rejected); manifest written to {args.out}")
    return EXIT_OK


def cmd_import_qald(args) -> int:
    try:
        stats = import_qald(args.input, args.out, dataset_name=args.name)
    except (ValueError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA
    print(
        f"imported {stats['records']} records "
        f"({stats['unsupported']} beyond the engine subset, marked unsupported)"
    )
    return EXIT_OK


def build_arg_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="sparqlbench", description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("seed", help="print the derived seed for a run label")
    p.add_argument("label")
    p.set_defaults(func=cmd_seed)

    p = sub.add_parser("validate", help="load a dataset, execute its gold queries, run the gold self-test")
    p.add_argument("--dataset", required=True)
    p.add_argument("--backend", default=None, help="override: local:PATH or an http(s) endpoint URL")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("run", help="evaluate translators over runs and checkpoints")
    p.add_argument("--config", default=None)
    p.add_argument("--dataset", default=None)
    p.add_argument("--translator", action="append", default=None, help="gold | null | retrieval | transcript:PATH | subprocess:NAME:CMD | http:NAME:URL")
    p.add_argument("--backend", default=None)
    p.add_argument("--runs", default=None, help="count or comma-separated run ids")
    p.add_argument("--epochs", default=None, help="comma-separated epoch schedule")
    p.add_argument("--out", default=None)
    p.add_argument("--jobs", type=int, default=None)
    p.add_argument("--replay", default=None, help="shortcut for a transcript translator")
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("report", help="re-derive reports from run logs")
    p.add_argument("--logs", required=True)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_report)

    p = sub.add_parser("datagen", help="generate a dataset manifest from a graph via a chat model")
    p.add_argument("--graph", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--count", type=int, default=20)
    p.add_argument("--name", default="generated")
    p.add_argument("--test-count", type=int, default=0)
    p.add_argument("--endpoint", default=ChatClientConfig.endpoint)
    p.add_argument("--model", default=ChatClientConfig.model)
    p.add_argument("--api-key-env", default=ChatClientConfig.api_key_env)
    p.add_argument("--replay", default=None, help="replay transcript instead of network calls")
    p.add_argument("--generate-prompt", default=None, help="path to a generation prompt template")
    p.add_argument("--paraphrase-prompt", default=None, help="path to a paraphrase prompt template")
    p.set_defaults(func=cmd_datagen)

    p = sub.add_parser("import-qald", help="convert QALD-native JSON into the manifest format")
    p.add_argument("--input", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--name", default=None)
    p.set_defaults(func=cmd_import_qald)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_arg_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
