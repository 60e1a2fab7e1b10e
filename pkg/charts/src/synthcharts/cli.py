"""Command-line front end: one report JSON in, one image out."""

from __future__ import annotations

from pathlib import Path

import click

from synthcharts import __version__
from synthcharts.render import load_report, render

_FORMATS = (".svg", ".png", ".pdf")


@click.command()
@click.version_option(version=__version__, prog_name="synthcharts")
@click.argument("report", type=click.Path(exists=True, dir_okay=False))
@click.option(
    "--out", required=True, type=click.Path(dir_okay=False),
    help="image path; format follows the extension (svg, png, pdf)",
)
@click.option("--dpi", type=int, default=150, show_default=True, help="raster resolution")
def main(report, out, dpi) -> None:
    """Draw the chart a synthbench report calls for."""
    suffix = Path(out).suffix.lower()
    if suffix not in _FORMATS:
        raise click.BadParameter(
            f"--out must end in one of {', '.join(_FORMATS)}, got {suffix or '(none)'}"
        )
    try:
        payload = load_report(report)
    except ValueError as exc:
        raise click.ClickException(str(exc)) from exc
    figure = render(payload)
    figure.savefig(out, dpi=dpi)
    click.echo(f"{payload['kind']} chart -> {out}")


if __name__ == "__main__":
    main()
