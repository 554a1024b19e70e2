"""Command-line pipeline: annotate, labels, encode, genqa, eval, serve.

Every command is a thin wrapper over the library; domain failures exit with
status 2 and a diagnostic on stderr. Report-producing commands render a
matplotlib figure next to their delimited output unless told not to.
"""

from __future__ import annotations

import csv
import json
import sys
from pathlib import Path

import click

from .config import EngineConfig, load_config
from .errors import EngineError, NotGeneratableError
from .evaluate import build_report, judge_answers, load_judge_rows, load_score_records
from .motion import load_motion
from .pipeline import (
    annotate_sequence,
    load_activity_vocab,
    write_annotations,
    write_aux_labels,
    write_encodings,
)
from .scene import load_scene
from .textgen import (
    HttpLLMClient,
    TranscriptWriter,
    build_bundle,
    build_qa_prompt,
    parse_llm_qa,
)


def _fail(message: str) -> None:
    click.echo(f"error: {message}", err=True)
    sys.exit(2)


def _load_engine_config(config_path: str | None, **overrides) -> EngineConfig:
    config = load_config(config_path) if config_path else EngineConfig()
    overrides = {k: v for k, v in overrides.items() if v is not None}
    return config.replace(**overrides) if overrides else config


def _guarded(func, *args, **kwargs):
    try:
        return func(*args, **kwargs)
    except FileNotFoundError as exc:
        _fail(f"missing file: {exc.filename or exc}")
    except EngineError as exc:
        _fail(str(exc))


@click.group()
def main():
    """Rule-based annotation and QA evaluation for human motion in 3D scenes."""


config_option = click.option("--config", "config_path", type=click.Path(), default=None,
                             help="JSON engine config; flags override file values.")


@main.command()
@click.argument("scene_path", type=click.Path())
@click.argument("motion_path", type=click.Path())
@click.option("--out", "out_path", required=True, type=click.Path())
@config_option
@click.option("--stride", type=int, default=None, help="Key-frame stride (default 30).")
@click.option("--epsilon", "epsilon_m", type=float, default=None,
              help="Contact threshold in meters (default 0.1).")
@click.option("--contact-changes/--no-contact-changes", default=None,
              help="Add frames where the contact set changes to the key frames.")
@click.option("--figure", "figure_path", type=click.Path(), default=None,
              help="Also render a top-down overview figure to this path.")
def annotate(scene_path, motion_path, out_path, config_path, stride, epsilon_m,
             contact_changes, figure_path):
    """Write frame-level annotations for key frames as JSONL plus metadata."""
    config = _guarded(
        _load_engine_config, config_path,
        stride=stride, epsilon_m=epsilon_m, contact_change_frames=contact_changes,
    )
    scene = _guarded(load_scene, scene_path)
    motion = _guarded(load_motion, motion_path)
    key_frames, annotations = _guarded(annotate_sequence, scene, motion, config)
    _guarded(write_annotations, out_path, scene, motion, key_frames, annotations, config)
    if figure_path:
        from .plots import save_annotation_figure

        _guarded(save_annotation_figure, scene, motion, annotations, figure_path)
    click.echo(f"annotated {len(annotations)} key frames -> {out_path}")


@main.command()
@click.argument("scene_path", type=click.Path())
@click.argument("motion_path", type=click.Path())
@click.option("--activity", required=True, help="Activity name, matched against the vocabulary.")
@click.option("--vocab", "vocab_path", required=True, type=click.Path())
@click.option("--out", "out_path", required=True, type=click.Path())
@config_option
@click.option("--k", "k_nearest", type=int, default=None, help="Nearest objects per frame.")
@click.option("--epsilon", "epsilon_m", type=float, default=None)
def labels(scene_path, motion_path, activity, vocab_path, out_path, config_path,
           k_nearest, epsilon_m):
    """Write the auxiliary supervision targets as a single JSON record."""
    config = _guarded(_load_engine_config, config_path, k_nearest=k_nearest,
                      epsilon_m=epsilon_m)
    scene = _guarded(load_scene, scene_path)
    motion = _guarded(load_motion, motion_path)
    vocab = _guarded(load_activity_vocab, vocab_path)
    _guarded(write_aux_labels, out_path, activity, vocab, scene, motion, config)
    click.echo(f"labels -> {out_path}")


@main.command()
@click.argument("scene_path", type=click.Path())
@click.argument("motion_path", type=click.Path())
@click.option("--out", "out_path", required=True, type=click.Path())
@config_option
@click.option("--seed", type=int, default=None, help="Projection init seed.")
@click.option("--dim", "embed_dim", type=int, default=None, help="Embedding dimension (even).")
@click.option("--dump-weights", "weights_dir", type=click.Path(), default=None,
              help="Also write the Fourier projection weights to this directory.")
def encode(scene_path, motion_path, out_path, config_path, seed, embed_dim, weights_dir):
    """Write layout/trajectory position encodings for all objects and frames."""
    config = _guarded(_load_engine_config, config_path, seed=seed, embed_dim=embed_dim)
    scene = _guarded(load_scene, scene_path)
    motion = _guarded(load_motion, motion_path)
    _guarded(write_encodings, out_path, scene, motion, config, weights_dir)
    click.echo(f"encodings -> {out_path}")


@main.command()
@click.argument("scene_path", type=click.Path())
@click.argument("motion_path", type=click.Path())
@click.option("--subtask", required=True, help="One of the 13 generatable sub-task tags.")
@click.option("--out", "out_path", required=True, type=click.Path(),
              help="QA JSONL (online) or prompt text file (offline).")
@config_option
@click.option("--activity", default=None, help="Motion-level activity line for the prompt.")
@click.option("--offline", is_flag=True, default=False,
              help="Do not call the LLM; write the prompt bytes instead.")
@click.option("--transcript", "transcript_path", type=click.Path(), default=None,
              help="Append prompt/response pairs to this JSONL for audit.")
def genqa(scene_path, motion_path, subtask, out_path, config_path, activity, offline,
          transcript_path):
    """Generate QA pairs for one sub-task via the configured LLM."""
    config = _guarded(_load_engine_config, config_path)
    scene = _guarded(load_scene, scene_path)
    motion = _guarded(load_motion, motion_path)
    bundle = _guarded(build_bundle, scene, motion, config, activity)
    try:
        prompt = build_qa_prompt(bundle, subtask)
    except NotGeneratableError as exc:
        _fail(str(exc))
    except EngineError as exc:
        _fail(str(exc))
    if offline or not config.llm.endpoint:
        Path(out_path).write_text(prompt, encoding="utf-8")
        click.echo(f"offline mode: prompt -> {out_path}")
        return
    client = _guarded(HttpLLMClient, config.llm)
    response = _guarded(client.send, prompt)
    if transcript_path:
        TranscriptWriter(transcript_path).record(prompt, response)
    records = _guarded(
        parse_llm_qa, response,
        subtask=subtask, scene_id=scene.id, motion_id=motion.id,
        start_frame=0, end_frame=len(motion) - 1, num_frames=len(motion),
    )
    with open(out_path, "a", encoding="utf-8") as handle:
        for record in records:
            handle.write(json.dumps(record.to_dict(), ensure_ascii=False) + "\n")
    click.echo(f"{len(records)} QA records -> {out_path}")


@main.command(name="eval")
@click.argument("scores_path", type=click.Path())
@click.option("--out", "out_path", required=True, type=click.Path(),
              help="Report JSON path; CSV and figure are written alongside.")
@config_option
@click.option("--offline", is_flag=True, default=False,
              help="Force offline mode even when an LLM endpoint is configured.")
@click.option("--figure/--no-figure", "with_figure", default=True,
              help="Render the per-task score chart (default on).")
def eval_cmd(scores_path, out_path, config_path, offline, with_figure):
    """Aggregate judge scores into the per-task and average report.

    Offline (default without an endpoint): rows carry "score" or raw
    "judge_text". Online: rows carry question/reference/candidate triples
    and the configured LLM judges them.
    """
    config = _guarded(_load_engine_config, config_path)
    if offline or not config.llm.endpoint:
        records, failures = _guarded(load_score_records, scores_path)
    else:
        rows = _guarded(load_judge_rows, scores_path)
        client = _guarded(HttpLLMClient, config.llm)
        records, failures = _guarded(
            judge_answers, client, rows, max_in_flight=config.llm.max_in_flight
        )
    report = _guarded(build_report, records, failures)

    out_path = Path(out_path)
    out_path.write_text(json.dumps(report.to_dict(), indent=2, sort_keys=True) + "\n",
                        encoding="utf-8")
    csv_path = out_path.with_suffix(".csv")
    with open(csv_path, "w", newline="", encoding="utf-8") as handle:
        writer = csv.writer(handle)
        writer.writerow(["subtask", "score", "records"])
        for tag in sorted(report.per_task):
            writer.writerow([tag, repr(report.per_task[tag]),
                             report.record_counts[tag]])
        writer.writerow(["average", repr(report.average), sum(report.record_counts.values())])
    if with_figure:
        from .plots import save_score_figure

        _guarded(save_score_figure, report, out_path.with_suffix(".png"))
    click.echo(f"report -> {out_path} (average {report.average:.2f}, "
               f"{report.parse_failures} parse failures)")


@main.command()
@click.argument("data_dir", type=click.Path())
@click.option("--port", type=int, default=8000)
@click.option("--host", default="127.0.0.1")
@config_option
@click.option("--ui-dir", type=click.Path(), default=None,
              help="Static UI bundle to serve at / (default: DATA_DIR/ui if present).")
def serve(data_dir, port, host, config_path, ui_dir):
    """Serve the annotation HTTP API plus the static UI bundle."""
    import uvicorn

    from .server import create_app

    config = _guarded(_load_engine_config, config_path)
    app = _guarded(create_app, data_dir, config, ui_dir)
    try:
        uvicorn.run(app, host=host, port=port, log_level="info")
    except (OSError, SystemExit) as exc:
        _fail(f"server failed to start on {host}:{port}: {exc}")


if __name__ == "__main__":
    main()
