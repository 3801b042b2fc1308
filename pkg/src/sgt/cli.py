"""Command-line entry points: make-data, train, eval, serve."""
from __future__ import annotations

import json
import sys
from pathlib import Path

import click


def _read_config(path: str | None):
    from .training import TrainConfig

    if path is None:
        return TrainConfig()
    raw = Path(path).read_bytes()
    if path.endswith(".toml"):
        try:
            import tomllib
        except ModuleNotFoundError:
            import tomli as tomllib
        obj = tomllib.loads(raw.decode())
    else:
        obj = json.loads(raw)
    return TrainConfig.from_dict(obj)


@click.group()
def main():
    """Speech gesture toolkit."""


@main.command("make-data")
@click.option("--out", required=True, type=click.Path())
@click.option("--clips", default=200, show_default=True)
@click.option("--seed", default=0, show_default=True)
def make_data(out, clips, seed):
    """Generate the synthetic speech+motion corpus."""
    from .training import make_synthetic_corpus, save_corpus

    corpus = make_synthetic_corpus(clips, seed)
    save_corpus(corpus, out)
    click.echo(f"wrote {len(corpus)} clips to {out}")


@main.command()
@click.option("--config", "config_path", type=click.Path(exists=True), default=None, help="TOML or JSON training config")
@click.option("--data", "data_dir", required=True, type=click.Path(exists=True))
@click.option("--out", "out_ckpt", required=True, type=click.Path())
@click.option("--history", "history_csv", type=click.Path(), default=None, help="metric-history CSV (default: <out>.history.csv)")
def train(config_path, data_dir, out_ckpt, history_csv):
    """Train the gesture generator on a corpus directory."""
    from .training import load_corpus
    from .training import train as run_train

    config = _read_config(config_path)
    corpus = load_corpus(data_dir)
    history_csv = history_csv or f"{out_ckpt}.history.csv"
    run_train(corpus, config, out_ckpt=out_ckpt, history_csv=history_csv, log=click.echo)
    click.echo(f"checkpoint: {out_ckpt}\nhistory:    {history_csv}")


@main.command("eval")
@click.option("--ckpt", required=True, type=click.Path(exists=True))
@click.option("--data", "data_dir", required=True, type=click.Path(exists=True))
@click.option("--report", required=True, type=click.Path())
@click.option("--config", "config_path", type=click.Path(exists=True), default=None)
def eval_cmd(ckpt, data_dir, report, config_path):
    """Evaluate a checkpoint on the held-out test split of a corpus."""
    from .genmodel import load_checkpoint
    from .training import evaluate_model, load_corpus, write_eval_report

    model = load_checkpoint(ckpt)
    corpus = load_corpus(data_dir)
    test_ids = set(model.split_fingerprints.get("test_ids", []))
    if test_ids:
        clips = [c for c in corpus if c.clip_id in test_ids]
        if {c.clip_id for c in clips} != test_ids:
            click.echo("warning: corpus does not contain the checkpoint's held-out clips", err=True)
    else:
        clips = corpus
    config = _read_config(config_path)
    result = evaluate_model(model, clips, config)
    write_eval_report(result, report)
    for name, value in result.rows():
        click.echo(f"{name:22s} {value:.6f}")


@main.command()
@click.option("--ckpt", type=click.Path(exists=True), default=None)
@click.option("--port", default=8000, show_default=True)
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--data-dir", type=click.Path(), default=None)
@click.option("--static", "static_dir", type=click.Path(), default=None, help="web client assets to serve at /")
def serve(ckpt, port, host, data_dir, static_dir):
    """Run the REST service (optionally with the web client)."""
    import uvicorn

    from .genmodel import load_checkpoint
    from .motionlib import MotionLibrary
    from .service import create_app
    from .skeleton import SkeletonSpec

    model = load_checkpoint(ckpt) if ckpt else None
    if model is None:
        click.echo("no checkpoint: generation runs in keyframe mode only", err=True)
    if data_dir:
        Path(data_dir).mkdir(parents=True, exist_ok=True)
    app = create_app(
        model=model,
        data_dir=data_dir,
        library=MotionLibrary.default(model.skeleton if model else SkeletonSpec()),
        static_dir=static_dir,
    )
    uvicorn.run(app, host=host, port=port)


if __name__ == "__main__":
    sys.exit(main())
