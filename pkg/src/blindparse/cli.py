"""Command-line driver for full runs.

Three subcommands: `baseline` generates and scores the uninformed
baselines, `llm` queries a chat-completion endpoint (through the replay
cache) and scores the repaired output, and `report` merges finished run
directories into one table.

A run directory holds report.tsv, run.json, predictions/*.conllu,
per_pos/*.tsv, displacement/*.tsv, and (for llm runs) cache.jsonl.
Reports carry no timestamps, so replaying a cached run reproduces them
byte for byte.
"""

from __future__ import annotations

import argparse
import json
import os
import re
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

from .baselines import BaselineKind, LengthIndex, build_length_index, generate
from .conllu import ConlluError, DepTree, Treebank, parse_conllu, write_conllu
from .llmclient import (
    CompletionClient,
    EndpointConfig,
    ResponseCache,
    RetryPolicy,
    TransportError,
    build_prompt,
    pick_example,
)
from .metrics import EvalReport, displacement_tsv, evaluate, fmt_pct, per_pos_tsv
from .repair import RawOutput, RepairLevel, extract_heads, repair_format, repair_tree
from .treealg import make_rng

REPORT_COLUMNS = [
    "treebank", "system", "uas", "um", "pct_w",
    "uas_step1", "um_step1", "uas_boost", "um_boost",
    "np", "p1", "p2", "sentences", "tokens",
]


class CliError(Exception):
    """Configuration or input problem surfaced to the user."""


def atomic_write(path: Path, text: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    tmp = path.with_name(path.name + ".tmp")
    tmp.write_text(text, encoding="utf-8")
    os.replace(tmp, path)


def load_treebank(path: str) -> Treebank:
    p = Path(path)
    if not p.exists():
        raise CliError(f"treebank not found: {path}")
    return parse_conllu(p.read_text(encoding="utf-8"), source_id=p.stem)


def file_name(system: str) -> str:
    # "RD*" and friends become their enum member names; model ids are
    # squeezed to filesystem-safe characters
    try:
        return BaselineKind(system).name
    except ValueError:
        return re.sub(r"[^A-Za-z0-9._-]", "_", system)


def report_row(
    treebank_id: str,
    system: str,
    rep: EvalReport,
    step1: tuple[float, float] | None = None,
) -> dict[str, str]:
    row = {
        "treebank": treebank_id,
        "system": system,
        "uas": fmt_pct(rep.uas),
        "um": fmt_pct(rep.um),
        "pct_w": fmt_pct(rep.pct_w),
        "uas_step1": "-",
        "um_step1": "-",
        "uas_boost": "-",
        "um_boost": "-",
        "np": str(rep.repair_histogram[RepairLevel.NP]),
        "p1": str(rep.repair_histogram[RepairLevel.P1]),
        "p2": str(rep.repair_histogram[RepairLevel.P2]),
        "sentences": str(rep.sentence_count),
        "tokens": str(rep.token_count),
    }
    if step1 is not None:
        uas1, um1 = step1
        row["uas_step1"] = fmt_pct(uas1)
        row["um_step1"] = fmt_pct(um1)
        row["uas_boost"] = fmt_pct(rep.uas - uas1)
        row["um_boost"] = fmt_pct(rep.um - um1)
    return row


def render_report(rows: list[dict[str, str]]) -> str:
    ordered = sorted(rows, key=lambda r: (r["treebank"], r["system"]))
    lines = ["\t".join(REPORT_COLUMNS)]
    lines.extend("\t".join(r[c] for c in REPORT_COLUMNS) for r in ordered)
    return "\n".join(lines) + "\n"


def parse_report(text: str) -> list[dict[str, str]]:
    lines = text.splitlines()
    if not lines or lines[0].split("\t") != REPORT_COLUMNS:
        raise CliError("not a report file (unexpected header)")
    return [dict(zip(REPORT_COLUMNS, ln.split("\t"))) for ln in lines[1:] if ln]


def write_system_outputs(
    out: Path, system: str, gold: Treebank, preds: list[DepTree], rep: EvalReport
) -> None:
    name = file_name(system)
    pred_bank = Treebank(gold.source_id, [
        (sent, tree) for (sent, _), tree in zip(gold.sentences, preds)
    ])
    atomic_write(out / "predictions" / f"{name}.conllu", write_conllu(pred_bank))
    atomic_write(out / "per_pos" / f"{name}.tsv", per_pos_tsv(rep.per_pos))
    atomic_write(out / "displacement" / f"{name}.tsv", displacement_tsv(rep.per_displacement))


def parse_systems(arg: str) -> list[BaselineKind]:
    if arg == "all":
        return list(BaselineKind)
    kinds = []
    for name in arg.split(","):
        name = name.strip()
        try:
            kinds.append(BaselineKind(name))
        except ValueError:
            valid = ", ".join(k.value for k in BaselineKind)
            raise CliError(f"unknown system {name!r} (choose from: {valid})")
    return kinds


def cmd_baseline(args: argparse.Namespace) -> int:
    gold = load_treebank(args.test)
    if len(gold) == 0:
        raise CliError(f"{args.test}: empty test treebank")
    systems = parse_systems(args.systems)
    index: LengthIndex | None = None
    if BaselineKind.S in systems:
        if not args.train:
            raise CliError("the S system needs --train for its reference treebank")
        train = load_treebank(args.train)
        if len(train) == 0:
            raise CliError(f"{args.train}: empty reference treebank")
        index = build_length_index(train)
    out = Path(args.out)
    rows = []
    for kind in systems:
        preds = []
        for ordinal, (sent, _) in enumerate(gold.sentences):
            rng = make_rng(args.seed + ordinal)
            kw = {"index": index} if kind is BaselineKind.S else {}
            preds.append(generate(kind, sent.n, rng, **kw))
        rep = evaluate(gold, preds)
        write_system_outputs(out, kind.value, gold, preds, rep)
        rows.append(report_row(gold.source_id, kind.value, rep))
    atomic_write(out / "report.tsv", render_report(rows))
    meta = {
        "treebank": gold.source_id,
        "ud_version": args.ud_version,
        "seed": args.seed,
        "systems": [k.value for k in systems],
        "sentences": len(gold),
        "tokens": sum(t.n for t in gold.trees()),
        "length_miss": index.miss_count if index is not None else 0,
        "failed": {},
    }
    atomic_write(out / "run.json", json.dumps(meta, indent=2, sort_keys=True) + "\n")
    return 0


def load_llm_config(path: str) -> dict:
    p = Path(path)
    if not p.exists():
        raise CliError(f"config not found: {path}")
    try:
        cfg = json.loads(p.read_text(encoding="utf-8"))
    except json.JSONDecodeError as err:
        raise CliError(f"{path}: invalid JSON ({err})")
    for key in ("endpoint", "models", "seed"):
        if key not in cfg:
            raise CliError(f"{path}: missing required key {key!r}")
    if not isinstance(cfg["models"], list) or not cfg["models"]:
        raise CliError(f"{path}: models must be a non-empty list")
    cfg.setdefault("concurrency", 1)
    cfg.setdefault("temperature", 0.0)
    cfg.setdefault("api_key_env", "LLM_API_KEY")
    cfg.setdefault("ud_version", "unknown")
    cfg.setdefault("retry", {})
    return cfg


def score_step1(gold: Treebank, vectors: list[list[int]]) -> tuple[float, float]:
    """UAS/UM of raw extracted heads, scored positionally as they are."""
    correct = total = full = 0
    for (_, tree), vec in zip(gold.sentences, vectors):
        hits = sum(g == v for g, v in zip(tree.heads, vec))
        correct += hits
        total += tree.n
        full += hits == tree.n
    return 100.0 * correct / total, 100.0 * full / len(vectors)


def cmd_llm(args: argparse.Namespace) -> int:
    cfg = load_llm_config(args.config)
    gold = load_treebank(args.test)
    if len(gold) == 0:
        raise CliError(f"{args.test}: empty test treebank")
    train = load_treebank(args.train)
    seed = int(cfg["seed"])
    try:
        example = pick_example(train, make_rng(seed))
    except ValueError as err:
        raise CliError(str(err))
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    cache = ResponseCache(str(out / "cache.jsonl"))
    run_id = f"{gold.source_id}:{seed}"
    retry = RetryPolicy(**cfg["retry"])
    prompts = [build_prompt(example, sent) for sent, _ in gold.sentences]
    rows = []
    failed: dict[str, list[int]] = {}
    for model in cfg["models"]:
        client = CompletionClient(
            EndpointConfig(
                base_url=cfg["endpoint"],
                model=model,
                api_key_env=cfg["api_key_env"],
                temperature=float(cfg["temperature"]),
                retry=retry,
            ),
            cache,
            run_id,
        )

        def fetch(ordinal: int) -> str | None:
            sent = gold.sentences[ordinal][0]
            try:
                return client.query(prompts[ordinal], ordinal, sent.n)
            except TransportError:
                return None

        with ThreadPoolExecutor(max_workers=int(cfg["concurrency"])) as pool:
            raw_texts = list(pool.map(fetch, range(len(gold))))
        failed[model] = [i for i, t in enumerate(raw_texts) if t is None]

        step1_vectors: list[list[int]] = []
        preds: list[DepTree] = []
        levels: list[RepairLevel] = []
        for ordinal, ((sent, _), raw) in enumerate(zip(gold.sentences, raw_texts)):
            rows_fmt, fmt_touched = repair_format(RawOutput(raw or "", sent))
            heads1 = extract_heads(rows_fmt)
            step1_vectors.append(heads1)
            heads2, tree_touched = repair_tree(heads1, make_rng(seed + ordinal))
            preds.append(DepTree(tuple(heads2)))
            if tree_touched:
                levels.append(RepairLevel.P2)
            elif fmt_touched:
                levels.append(RepairLevel.P1)
            else:
                levels.append(RepairLevel.NP)
        rep = evaluate(gold, preds, levels)
        write_system_outputs(out, model, gold, preds, rep)
        rows.append(report_row(gold.source_id, model, rep, score_step1(gold, step1_vectors)))
    atomic_write(out / "report.tsv", render_report(rows))
    meta = {
        "treebank": gold.source_id,
        "ud_version": cfg["ud_version"],
        "seed": seed,
        "systems": list(cfg["models"]),
        "sentences": len(gold),
        "tokens": sum(t.n for t in gold.trees()),
        "example_sent": " ".join(example[0].forms),
        "endpoint": cfg["endpoint"],
        "temperature": float(cfg["temperature"]),
        "concurrency": int(cfg["concurrency"]),
        "length_miss": 0,
        "failed": failed,
    }
    atomic_write(out / "run.json", json.dumps(meta, indent=2, sort_keys=True) + "\n")
    return 0


def cmd_report(args: argparse.Namespace) -> int:
    merged: list[dict[str, str]] = []
    versions: dict[str, str] = {}
    for run_dir in args.runs:
        run = Path(run_dir)
        report = run / "report.tsv"
        meta_path = run / "run.json"
        if not report.exists() or not meta_path.exists():
            raise CliError(f"{run_dir}: not a finished run directory")
        meta = json.loads(meta_path.read_text(encoding="utf-8"))
        versions[run_dir] = str(meta.get("ud_version", "unknown"))
        merged.extend(parse_report(report.read_text(encoding="utf-8")))
    if len(set(versions.values())) > 1:
        detail = ", ".join(f"{d}={v}" for d, v in sorted(versions.items()))
        raise CliError(f"refusing to merge runs with mixed treebank versions: {detail}")
    out = Path(args.out)
    atomic_write(out / "report.tsv", render_report(merged))
    for run_dir in args.runs:
        run = Path(run_dir)
        tag = run.name
        for sub in ("per_pos", "displacement"):
            src = run / sub
            if not src.is_dir():
                continue
            for f in sorted(src.glob("*.tsv")):
                atomic_write(out / sub / f"{tag}__{f.name}", f.read_text(encoding="utf-8"))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="blindparse",
        description="Uninformed dependency-parsing baselines, LLM output repair, and evaluation.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("baseline", help="generate and score baseline systems")
    p.add_argument("--test", required=True, help="gold CoNLL-U file to evaluate on")
    p.add_argument("--train", help="reference CoNLL-U file (needed by system S)")
    p.add_argument("--systems", default="all",
                   help="comma-separated system names, or 'all' (default)")
    p.add_argument("--seed", type=int, default=0, help="run seed (default 0)")
    p.add_argument("--ud-version", default="unknown",
                   help="treebank version string recorded in the run metadata")
    p.add_argument("--out", required=True, help="run directory to write")
    p.set_defaults(func=cmd_baseline)

    p = sub.add_parser("llm", help="query a chat-completion endpoint and score it")
    p.add_argument("--config", required=True, help="JSON config file")
    p.add_argument("--test", required=True, help="gold CoNLL-U file to evaluate on")
    p.add_argument("--train", required=True,
                   help="reference CoNLL-U file for the prompt example")
    p.add_argument("--out", required=True, help="run directory to write")
    p.set_defaults(func=cmd_llm)

    p = sub.add_parser("report", help="merge finished run directories")
    p.add_argument("runs", nargs="+", help="run directories to merge")
    p.add_argument("--out", required=True, help="output directory")
    p.set_defaults(func=cmd_report)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (CliError, ConlluError) as err:
        print(f"error: {err}", file=sys.stderr)
        return 1
    except OSError as err:
        print(f"error: {err}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
