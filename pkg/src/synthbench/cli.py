"""Command-line front end: split, evaluate, benchmark, baseline, tradeoff."""

from __future__ import annotations

import sys
from pathlib import Path

import click

from synthbench import __version__
from synthbench.baselines import build_baseline
from synthbench.discretize import DiscretizationConfig
from synthbench.harness import (
    CandidateSpec,
    RunConfig,
    load_manifest,
    run_benchmark,
    save_tradeoff_csv,
    save_tradeoff_json,
    tradeoff_points,
)
from synthbench.ingest import load_schema_override, load_table, save_table, split_train_holdout


def _parse_depths(text: str) -> tuple[int, ...]:
    try:
        depths = tuple(int(part) for part in text.split(",") if part.strip())
    except ValueError as exc:
        raise click.BadParameter(f"depths must be comma-separated integers, got {text!r}") from exc
    if not depths:
        raise click.BadParameter("need at least one depth")
    return depths


def _disc_options(fn):
    for decl, default in (
        ("--c-univariate", 100),
        ("--c-bivariate", 10),
        ("--c-threeway", 5),
        ("--c-privacy", 10),
    ):
        fn = click.option(decl, type=int, default=default, show_default=True)(fn)
    return fn


@click.group()
@click.version_option(version=__version__, prog_name="synthbench")
def main() -> None:
    """Fidelity and privacy benchmarking for synthetic tabular data."""


@main.command()
@click.argument("dataset", type=click.Path(exists=True, dir_okay=False))
@click.option("--seed", type=int, default=0, show_default=True, help="split seed")
@click.option("--train-out", required=True, type=click.Path(dir_okay=False))
@click.option("--holdout-out", required=True, type=click.Path(dir_okay=False))
@click.option("--schema-override", type=click.Path(exists=True, dir_okay=False))
@click.option("--delimiter", default=",", show_default=True)
def split(dataset, seed, train_out, holdout_out, schema_override, delimiter) -> None:
    """Split a dataset into seeded train and holdout halves."""
    override = load_schema_override(schema_override) if schema_override else None
    table = load_table(dataset, override, delimiter=delimiter)
    train, holdout = split_train_holdout(table, seed)
    save_table(train, train_out, delimiter=delimiter)
    save_table(holdout, holdout_out, delimiter=delimiter)
    click.echo(f"train: {train.row_count} rows -> {train_out}")
    click.echo(f"holdout: {holdout.row_count} rows -> {holdout_out}")


@main.command()
@click.argument("dataset", type=click.Path(exists=True, dir_okay=False))
@click.option("--synthetic", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--seed", type=int, default=0, show_default=True, help="split seed")
@click.option("--depths", default="1,2,3", show_default=True)
@click.option("--output-dir", required=True, type=click.Path(file_okay=False))
@click.option("--name", default="candidate", show_default=True)
@click.option("--schema-override", type=click.Path(exists=True, dir_okay=False))
@click.option("--delimiter", default=",", show_default=True)
@_disc_options
def evaluate(
    dataset,
    synthetic,
    seed,
    depths,
    output_dir,
    name,
    schema_override,
    delimiter,
    c_univariate,
    c_bivariate,
    c_threeway,
    c_privacy,
) -> None:
    """Evaluate one synthetic table against a seeded split of a dataset."""
    config = RunConfig(
        dataset=dataset,
        output_dir=output_dir,
        candidates=(CandidateSpec(name=name, kind="external", path=synthetic),),
        split_seed=seed,
        depths=_parse_depths(depths),
        discretization=DiscretizationConfig(c_univariate, c_bivariate, c_threeway, c_privacy),
        schema_override=schema_override,
        delimiter=delimiter,
    )
    manifest = run_benchmark(config)
    result = manifest.results[0]
    if result.status != "ok":
        click.echo(f"{result.name}: FAILED ({result.error})", err=True)
        sys.exit(1)
    click.echo(f"{result.name}: ok -> {Path(output_dir) / result.fidelity_report}")
    click.echo(f"{result.name}: ok -> {Path(output_dir) / result.privacy_report}")


@main.command()
@click.argument("config", type=click.Path(exists=True, dir_okay=False))
@click.option("--workers", type=int, default=None, help="override the configured worker budget")
def benchmark(config, workers) -> None:
    """Run every candidate in a JSON run configuration."""
    run_config = RunConfig.from_file(config)
    if workers is not None:
        run_config = RunConfig(
            dataset=run_config.dataset,
            output_dir=run_config.output_dir,
            candidates=run_config.candidates,
            split_seed=run_config.split_seed,
            depths=run_config.depths,
            discretization=run_config.discretization,
            schema_override=run_config.schema_override,
            delimiter=run_config.delimiter,
            workers=workers,
        )
    manifest = run_benchmark(run_config)
    for result in manifest.results:
        if result.status == "ok":
            click.echo(f"{result.name}: ok ({result.seconds.get('total', 0.0):.1f}s)")
        else:
            click.echo(f"{result.name}: FAILED ({result.error})", err=True)
    if not manifest.succeeded:
        sys.exit(1)


@main.command()
@click.argument("kind", type=click.Choice(sorted(["perturb", "identity", "independent"])))
@click.option("--train", "train_path", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--out", required=True, type=click.Path(dir_okay=False))
@click.option("--rows", type=int, default=50_000, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--noise", type=float, default=None, help="perturbation probability (perturb only)")
@click.option("--schema-override", type=click.Path(exists=True, dir_okay=False))
@click.option("--delimiter", default=",", show_default=True)
def baseline(kind, train_path, out, rows, seed, noise, schema_override, delimiter) -> None:
    """Generate a baseline synthetic table from a training table."""
    override = load_schema_override(schema_override) if schema_override else None
    train = load_table(train_path, override, delimiter=delimiter)
    params = {"rows": rows, "seed": seed}
    if kind == "perturb":
        if noise is None:
            raise click.BadParameter("perturb requires --noise")
        params["noise"] = noise
    elif noise is not None:
        raise click.BadParameter(f"--noise does not apply to {kind}")
    table = build_baseline(kind, train, params)
    save_table(table, out, delimiter=delimiter)
    click.echo(f"{kind}: {table.row_count} rows -> {out}")


@main.command()
@click.argument("manifest", type=click.Path(exists=True, dir_okay=False))
@click.option("--csv-out", type=click.Path(dir_okay=False))
@click.option("--json-out", type=click.Path(dir_okay=False))
def tradeoff(manifest, csv_out, json_out) -> None:
    """Extract fidelity-ratio vs privacy-share points from a run manifest."""
    points = tradeoff_points(load_manifest(manifest))
    if csv_out:
        save_tradeoff_csv(points, csv_out)
        click.echo(f"{len(points)} points -> {csv_out}")
    if json_out:
        save_tradeoff_json(points, json_out)
        click.echo(f"{len(points)} points -> {json_out}")
    if not csv_out and not json_out:
        for point in points:
            ratio = "n/a" if point.fidelity_ratio is None else f"{point.fidelity_ratio:.3f}"
            click.echo(
                f"{point.label} [{point.kind}] ratio={ratio} "
                f"share={point.share_closer_to_train:.3f}"
            )


if __name__ == "__main__":
    main()
