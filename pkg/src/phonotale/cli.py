"""Command-line interface.

Every subcommand scores through the same service layer as the HTTP API.
Operation errors exit nonzero with a message on stderr.
"""
from __future__ import annotations

import json
import sys
from pathlib import Path

import click

from .analytics import render_report
from .config import AppConfig, load_config
from .errors import PhonotaleError
from .scoring import batch_score, read_batch_csv, score_word_attempt, ReferencePronunciation
from .service import PracticeService
from .story import GenerationSpec, dump_story, load_story
from .lexicon import to_ipa


def _service(ctx: click.Context) -> PracticeService:
    if ctx.obj.get("service") is None:
        ctx.obj["service"] = PracticeService(ctx.obj["config"])
    return ctx.obj["service"]


@click.group()
@click.option("--config", "config_path", type=click.Path(exists=True), default=None,
              help="JSON config file; environment variables override it.")
@click.option("--data-dir", default=None, help="Data directory (overrides config).")
@click.pass_context
def main(ctx: click.Context, config_path: str | None, data_dir: str | None):
    """Speech-sound practice: scoring, story tooling, service, and reports."""
    config = load_config(config_path)
    if data_dir is not None:
        config.data_dir = data_dir
    ctx.obj = {"config": config, "service": None}


def _fail(exc: Exception) -> None:
    raise click.ClickException(str(exc))


@main.command()
@click.argument("word")
@click.argument("hyp_ipa")
@click.pass_context
def score(ctx: click.Context, word: str, hyp_ipa: str):
    """Score HYP_IPA against WORD's dictionary pronunciation."""
    service = _service(ctx)
    try:
        target = ReferencePronunciation(word.lower(), to_ipa(word, service.lexicon))
        result = score_word_attempt(target, hyp_ipa, service.context)
    except (PhonotaleError, ValueError) as exc:
        _fail(exc)
    click.echo(f"word: {word.lower()}  reference: {' '.join(target.phonemes.symbols())}")
    click.echo(f"hypothesis: {' '.join(result.hypothesis.symbols())}")
    click.echo(f"distance: {result.distance:.6g}")
    click.echo(f"pfer: {result.pfer:.6g}")
    click.echo(f"band: {result.band.display}")


@main.command()
@click.argument("csv_path", type=click.Path(exists=True))
@click.option("--out", type=click.Path(), default=None, help="Write the JSON report here.")
@click.pass_context
def batch(ctx: click.Context, csv_path: str, out: str | None):
    """Batch-score a CSV with columns word, reference_ipa, hypothesis_ipa."""
    service = _service(ctx)
    try:
        pairs = read_batch_csv(csv_path)
        report = batch_score(pairs, service.table, service.config.thresholds())
    except (PhonotaleError, ValueError) as exc:
        _fail(exc)
    for item in report.items:
        if item.error:
            click.echo(f"{item.index:3d} {item.word:<12} ERROR {item.error}")
        else:
            click.echo(
                f"{item.index:3d} {item.word:<12} {item.distance:8.6g}  "
                f"pfer {item.pfer:8.6g}  {item.band.display}"
            )
    click.echo(
        f"scored {report.scored} (failed {report.failed})  "
        f"mean {report.mean:.6g}  std {report.std:.6g}"
    )
    if out:
        Path(out).write_text(
            json.dumps(report.to_document(), ensure_ascii=False, indent=2) + "\n",
            encoding="utf-8",
        )
        click.echo(f"report written to {out}")


@main.command()
@click.argument("phoneme")
@click.argument("position", type=click.Choice(["initial", "final", "any"]))
@click.argument("count", type=int)
@click.pass_context
def recommend(ctx: click.Context, phoneme: str, position: str, count: int):
    """Recommend practice words with PHONEME at POSITION."""
    service = _service(ctx)
    try:
        words = service.recommend(phoneme, position, count)
    except (PhonotaleError, ValueError) as exc:
        _fail(exc)
    for word in words:
        click.echo(word)


@main.command("gen-story")
@click.argument("spec_path", type=click.Path(exists=True))
@click.option("--out", type=click.Path(), default=None, help="Write the story file here.")
@click.option("--save", is_flag=True, help="Save into the data directory's story store.")
@click.pass_context
def gen_story(ctx: click.Context, spec_path: str, out: str | None, save: bool):
    """Generate a story from a spec file {target_phonemes, words, template_id, seed}."""
    service = _service(ctx)
    try:
        doc = json.loads(Path(spec_path).read_text(encoding="utf-8"))
        spec = GenerationSpec(
            tuple(doc["target_phonemes"]),
            tuple(doc["words"]),
            doc["template_id"],
            int(doc.get("seed", 0)),
        )
        story = service.generate_story(spec)
        violations = service.validate(story)
        if violations:
            _fail(PhonotaleError("; ".join(str(v) for v in violations)))
    except (PhonotaleError, ValueError, KeyError) as exc:
        _fail(exc)
    text = dump_story(story)
    if out:
        Path(out).write_text(text, encoding="utf-8")
        click.echo(f"story {story.story_id} written to {out}")
    if save:
        service.save_story(story)
        click.echo(f"story {story.story_id} saved")
    if not out and not save:
        click.echo(text, nl=False)


@main.command()
@click.argument("story_path", type=click.Path(exists=True))
@click.pass_context
def validate(ctx: click.Context, story_path: str):
    """Validate a story file; exit nonzero and list violations if invalid."""
    service = _service(ctx)
    try:
        story = load_story(Path(story_path).read_text(encoding="utf-8"))
    except (ValueError, KeyError) as exc:
        _fail(exc)
    violations = service.validate(story)
    if violations:
        for v in violations:
            click.echo(str(v), err=True)
        sys.exit(1)
    click.echo(f"story {story.story_id}: valid")


@main.command()
@click.pass_context
def serve(ctx: click.Context):
    """Run the HTTP API."""
    import uvicorn

    from .api import create_app

    config: AppConfig = ctx.obj["config"]
    uvicorn.run(create_app(config), host=config.host, port=config.port, log_level="warning")


@main.command()
@click.argument("child_id")
@click.option("--from", "from_ts", default=None, help="Start of the period (ISO-8601).")
@click.option("--to", "to_ts", default=None, help="End of the period (ISO-8601).")
@click.option("--out", type=click.Path(), default=None, help="Write the report here.")
@click.pass_context
def export(ctx: click.Context, child_id: str, from_ts: str | None, to_ts: str | None,
           out: str | None):
    """Export a progress report for CHILD_ID."""
    service = _service(ctx)
    period = (from_ts, to_ts) if (from_ts or to_ts) else None
    try:
        text = render_report(service.report(child_id, period))
    except PhonotaleError as exc:
        _fail(exc)
    if out:
        Path(out).write_text(text, encoding="utf-8")
        click.echo(f"report written to {out}")
    else:
        click.echo(text, nl=False)


if __name__ == "__main__":
    main()
