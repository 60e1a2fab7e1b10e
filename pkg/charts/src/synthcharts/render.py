"""Turn report payloads into matplotlib figures.

Figures are built directly on :class:`matplotlib.figure.Figure`, so no
backend or global pyplot state is involved; callers save them with
``figure.savefig(path)``.
"""

from __future__ import annotations

import json
from pathlib import Path

from matplotlib.figure import Figure

KNOWN_KINDS = ("fidelity", "privacy", "tradeoff")

_BAR_WIDTH = 0.38


def load_report(path: str | Path) -> dict:
    """Read one report JSON file and check it is a payload we can draw."""
    path = Path(path)
    try:
        with open(path, encoding="utf-8") as fh:
            payload = json.load(fh)
    except OSError as exc:
        raise ValueError(f"cannot read report {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ValueError(f"report {path} is not valid JSON: {exc}") from exc
    if not isinstance(payload, dict):
        raise ValueError(f"report {path} must be a JSON object")
    validate_report(payload)
    return payload


def validate_report(payload: dict) -> str:
    """Return the payload kind, or raise if the shape is not drawable."""
    kind = payload.get("kind")
    if kind not in KNOWN_KINDS:
        raise ValueError(
            f"report kind must be one of {', '.join(KNOWN_KINDS)}, got {kind!r}"
        )
    if kind == "fidelity":
        depths = payload.get("depths")
        if not isinstance(depths, dict) or not depths:
            raise ValueError("fidelity report carries no per-depth scores")
        for key, entry in depths.items():
            if "f_synthetic" not in entry or "f_holdout" not in entry:
                raise ValueError(f"fidelity depth {key!r} lacks averaged distances")
    elif kind == "privacy":
        histogram = payload.get("histogram")
        if not isinstance(histogram, dict):
            raise ValueError("privacy report carries no distance histogram")
        for field in ("distance", "count_train", "count_holdout"):
            if field not in histogram:
                raise ValueError(f"privacy histogram lacks {field!r}")
        if "share_closer_to_train" not in payload:
            raise ValueError("privacy report lacks share_closer_to_train")
    else:
        points = payload.get("points")
        if not isinstance(points, list) or not points:
            raise ValueError("tradeoff report carries no points")
        for point in points:
            if "label" not in point or "share_closer_to_train" not in point:
                raise ValueError("tradeoff points need label and share_closer_to_train")
    return kind


def render(payload: dict) -> Figure:
    """Draw whichever chart the payload's kind calls for."""
    kind = validate_report(payload)
    if kind == "fidelity":
        return render_fidelity(payload)
    if kind == "privacy":
        return render_privacy(payload)
    return render_tradeoff(payload)


def render_fidelity(payload: dict) -> Figure:
    """Grouped bars: averaged marginal distance per depth, synthetic vs holdout."""
    depths = sorted(payload["depths"], key=int)
    f_synth = [payload["depths"][d]["f_synthetic"] for d in depths]
    f_hold = [payload["depths"][d]["f_holdout"] for d in depths]

    fig = Figure(figsize=(7, 4.5))
    ax = fig.subplots()
    positions = range(len(depths))
    ax.bar(
        [x - _BAR_WIDTH / 2 for x in positions], f_synth, _BAR_WIDTH,
        label="synthetic vs train", color="#d95f02",
    )
    ax.bar(
        [x + _BAR_WIDTH / 2 for x in positions], f_hold, _BAR_WIDTH,
        label="holdout vs train", color="#7570b3",
    )
    for x, depth in zip(positions, depths):
        ratio = payload["depths"][depth].get("ratio")
        if ratio is not None:
            top = max(f_synth[x], f_hold[x])
            ax.annotate(
                f"ratio {ratio:.2f}", (x, top), xytext=(0, 4),
                textcoords="offset points", ha="center", fontsize=9,
            )
    ax.set_xticks(list(positions))
    ax.set_xticklabels([f"depth {d}" for d in depths])
    ax.set_ylabel("averaged total variation distance")
    rows = payload.get("rows", {})
    ax.set_title(
        "Marginal fidelity by interaction depth"
        + (f" ({rows['synthetic']} synthetic rows)" if "synthetic" in rows else "")
    )
    ax.legend()
    ax.margins(y=0.15)
    fig.tight_layout()
    return fig


def render_privacy(payload: dict) -> Figure:
    """Distance-to-closest-record histogram against both reference halves."""
    histogram = payload["histogram"]
    distance = histogram["distance"]
    count_train = histogram["count_train"]
    count_holdout = histogram["count_holdout"]

    fig = Figure(figsize=(7, 4.5))
    ax = fig.subplots()
    ax.bar(
        [d - _BAR_WIDTH / 2 for d in distance], count_train, _BAR_WIDTH,
        label="distance to train", color="#d95f02",
    )
    ax.bar(
        [d + _BAR_WIDTH / 2 for d in distance], count_holdout, _BAR_WIDTH,
        label="distance to holdout", color="#7570b3",
    )
    ax.set_xlabel("distance to closest record (differing cells)")
    ax.set_ylabel("synthetic rows")
    ax.set_title("Closest-record distances")
    ax.legend()

    share = payload["share_closer_to_train"]
    matches = payload.get("identical_match_count_train")
    lines = [f"share closer to train: {share:.3f}"]
    if matches is not None:
        lines.append(f"identical train matches: {matches}")
    ax.text(
        0.97, 0.97, "\n".join(lines), transform=ax.transAxes,
        ha="right", va="top", fontsize=9,
        bbox={"boxstyle": "round", "facecolor": "white", "alpha": 0.8},
    )
    fig.tight_layout()
    return fig


def render_tradeoff(payload: dict) -> Figure:
    """Fidelity ratio vs privacy share, with the fresh-data anchor marked."""
    candidates = []
    references = []
    unplaced = []
    for point in payload["points"]:
        if point.get("fidelity_ratio") is None:
            unplaced.append(point["label"])
        elif point.get("kind") == "reference":
            references.append(point)
        else:
            candidates.append(point)

    fig = Figure(figsize=(7, 5))
    ax = fig.subplots()
    ax.axhline(
        0.5, color="#666666", linestyle="--", linewidth=1,
        label="share 0.5 (indistinguishable from fresh data)",
    )
    if candidates:
        ax.scatter(
            [p["fidelity_ratio"] for p in candidates],
            [p["share_closer_to_train"] for p in candidates],
            color="#d95f02", zorder=3, label="candidates",
        )
    if references:
        ax.scatter(
            [p["fidelity_ratio"] for p in references],
            [p["share_closer_to_train"] for p in references],
            color="#1b9e77", marker="*", s=180, zorder=4, label="holdout reference",
        )
    for point in candidates + references:
        ax.annotate(
            point["label"],
            (point["fidelity_ratio"], point["share_closer_to_train"]),
            xytext=(6, 4), textcoords="offset points", fontsize=9,
        )
    ax.set_xlabel("depth-3 fidelity ratio (lower is closer to real data)")
    ax.set_ylabel("share of synthetic rows closer to train")
    ax.set_ylim(-0.02, 1.02)
    ax.set_title("Fidelity vs privacy")
    if unplaced:
        ax.text(
            0.03, 0.03,
            "no fidelity ratio: " + ", ".join(sorted(unplaced)),
            transform=ax.transAxes, fontsize=8, color="#666666",
        )
    ax.legend(loc="best", fontsize=9)
    fig.tight_layout()
    return fig
