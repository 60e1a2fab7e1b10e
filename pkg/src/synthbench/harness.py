"""End-to-end benchmark runs: split, evaluate candidates, write reports.

A run takes one dataset, splits it 50/50 by seed, and evaluates every
candidate (external synthetic files or built-in baselines) for fidelity and
privacy against that split.  Each candidate's reports land in its own
directory and a manifest ties the run together; a failing candidate is
recorded as failed without stopping the others.  Report payloads contain no
timestamps, so re-running a configuration reproduces them byte for byte.
"""

from __future__ import annotations

import concurrent.futures
import csv
import hashlib
import json
import re
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Mapping, Sequence

from synthbench.baselines import BASELINE_BUILDERS, build_baseline
from synthbench.discretize import DiscretizationConfig, fit_discretizer
from synthbench.fidelity import fidelity_report
from synthbench.ingest import Table, load_schema_override, load_table, split_train_holdout
from synthbench.privacy import privacy_report

MANIFEST_VERSION = 1

_NAME_PATTERN = re.compile(r"^[A-Za-z0-9][A-Za-z0-9._-]*$")


@dataclass(frozen=True)
class CandidateSpec:
    """One synthetic table to evaluate: an external file or a baseline."""

    name: str
    kind: str
    path: str | None = None
    baseline: str | None = None
    parameters: Mapping = field(default_factory=dict)

    def __post_init__(self) -> None:
        if not _NAME_PATTERN.match(self.name):
            raise ValueError(
                f"candidate name {self.name!r} must be alphanumeric with ._- separators"
            )
        if self.kind == "external":
            if not self.path:
                raise ValueError(f"external candidate {self.name!r} needs a file path")
        elif self.kind == "baseline":
            if self.baseline not in BASELINE_BUILDERS:
                raise ValueError(
                    f"candidate {self.name!r} names unknown baseline {self.baseline!r}"
                )
        else:
            raise ValueError(f"candidate kind must be external or baseline, got {self.kind!r}")

    def to_json_dict(self) -> dict:
        out: dict = {"name": self.name, "kind": self.kind}
        if self.kind == "external":
            out["path"] = self.path
        else:
            out["baseline"] = self.baseline
            out["parameters"] = dict(self.parameters)
        return out


@dataclass(frozen=True)
class RunConfig:
    """Everything one benchmark run needs, loadable from a JSON file."""

    dataset: str
    output_dir: str
    candidates: tuple[CandidateSpec, ...]
    split_seed: int = 0
    depths: tuple[int, ...] = (1, 2, 3)
    discretization: DiscretizationConfig = field(default_factory=DiscretizationConfig)
    schema_override: str | None = None
    delimiter: str = ","
    workers: int = 1

    def __post_init__(self) -> None:
        if not self.candidates:
            raise ValueError("a run needs at least one candidate")
        names = [c.name for c in self.candidates]
        if len(set(names)) != len(names):
            raise ValueError("candidate names must be unique")
        if not self.depths or any(d not in (1, 2, 3) for d in self.depths):
            raise ValueError(f"depths must be a non-empty subset of 1..3, got {self.depths}")
        if self.workers < 1:
            raise ValueError(f"workers must be >= 1, got {self.workers}")

    @classmethod
    def from_json_dict(cls, raw: dict, *, base_dir: str | Path | None = None) -> "RunConfig":
        base = Path(base_dir) if base_dir is not None else None

        def resolve(path_text: str) -> str:
            path = Path(path_text)
            if base is not None and not path.is_absolute():
                path = base / path
            return str(path)

        candidates = []
        for entry in raw.get("candidates", []):
            candidates.append(
                CandidateSpec(
                    name=entry["name"],
                    kind=entry["kind"],
                    path=resolve(entry["path"]) if entry.get("path") else None,
                    baseline=entry.get("baseline"),
                    parameters=entry.get("parameters", {}),
                )
            )
        disc = DiscretizationConfig.from_json_dict(raw.get("discretization", {}))
        return cls(
            dataset=resolve(raw["dataset"]),
            output_dir=resolve(raw["output_dir"]),
            candidates=tuple(candidates),
            split_seed=int(raw.get("split_seed", 0)),
            depths=tuple(raw.get("depths", (1, 2, 3))),
            discretization=disc,
            schema_override=resolve(raw["schema_override"]) if raw.get("schema_override") else None,
            delimiter=raw.get("delimiter", ","),
            workers=int(raw.get("workers", 1)),
        )

    @classmethod
    def from_file(cls, path: str | Path) -> "RunConfig":
        with open(path, encoding="utf-8") as fh:
            raw = json.load(fh)
        return cls.from_json_dict(raw, base_dir=Path(path).resolve().parent)


@dataclass(frozen=True)
class CandidateResult:
    """Outcome of one candidate: status, report paths, stage timings."""

    name: str
    kind: str
    status: str
    error: str | None
    rows_synthetic: int | None
    fidelity_report: str | None
    privacy_report: str | None
    interactions_csv: str | None
    dcr_histogram_csv: str | None
    seconds: Mapping[str, float]

    def to_json_dict(self) -> dict:
        return {
            "name": self.name,
            "kind": self.kind,
            "status": self.status,
            "error": self.error,
            "rows_synthetic": self.rows_synthetic,
            "fidelity_report": self.fidelity_report,
            "privacy_report": self.privacy_report,
            "interactions_csv": self.interactions_csv,
            "dcr_histogram_csv": self.dcr_histogram_csv,
            "seconds": dict(self.seconds),
        }


@dataclass(frozen=True)
class RunManifest:
    """Run-level record tying dataset, configuration and results together."""

    tool_version: str
    dataset: Mapping
    split_seed: int
    depths: tuple[int, ...]
    discretization: DiscretizationConfig
    results: tuple[CandidateResult, ...]
    output_dir: str

    @property
    def succeeded(self) -> bool:
        return all(r.status == "ok" for r in self.results)

    def result(self, name: str) -> CandidateResult:
        for entry in self.results:
            if entry.name == name:
                return entry
        raise KeyError(f"no candidate named {name!r} in this run")

    def to_json_dict(self) -> dict:
        return {
            "manifest_version": MANIFEST_VERSION,
            "kind": "manifest",
            "tool_version": self.tool_version,
            "dataset": dict(self.dataset),
            "split_seed": self.split_seed,
            "depths": list(self.depths),
            "discretization": self.discretization.to_json_dict(),
            "candidates": [r.to_json_dict() for r in self.results],
        }

    def save(self, path: str | Path) -> None:
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(self.to_json_dict(), fh, indent=2, sort_keys=True)
            fh.write("\n")


def _dataset_fingerprint(path: str) -> str:
    digest = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 20), b""):
            digest.update(chunk)
    return digest.hexdigest()[:16]


def _require_candidate_schema(dataset: Table, candidate: Table, name: str) -> Table:
    """Check names and kinds, then align column order to the dataset's."""
    want = {s.name: s.kind for s in dataset.schema}
    have = {s.name: s.kind for s in candidate.schema}
    missing = sorted(set(want) - set(have))
    extra = sorted(set(have) - set(want))
    if missing or extra:
        parts = []
        if missing:
            parts.append(f"missing columns: {', '.join(missing)}")
        if extra:
            parts.append(f"unexpected columns: {', '.join(extra)}")
        raise ValueError(f"candidate {name!r} schema mismatch ({'; '.join(parts)})")
    wrong = sorted(n for n in want if want[n] != have[n])
    if wrong:
        raise ValueError(
            f"candidate {name!r} schema mismatch (kind differs for: {', '.join(wrong)})"
        )
    return candidate.select_columns(dataset.column_names)


def _evaluate_candidate(
    spec: CandidateSpec,
    dataset: Table,
    train: Table,
    holdout: Table,
    config: RunConfig,
    candidate_dir: Path,
) -> CandidateResult:
    seconds: dict[str, float] = {}
    started = time.perf_counter()
    try:
        stage = time.perf_counter()
        if spec.kind == "external":
            # Load under the dataset's kinds (restricted to columns actually
            # present) so the schema comparison below sees kind conflicts as
            # parse errors on the offending column, not silent re-inference.
            header = _header_names(spec.path, config.delimiter)
            override = {s.name: s.kind for s in dataset.schema if s.name in header}
            raw = load_table(spec.path, override, delimiter=config.delimiter)
            synthetic = _require_candidate_schema(dataset, raw, spec.name)
        else:
            synthetic = build_baseline(spec.baseline, train, spec.parameters)
        seconds["materialize"] = time.perf_counter() - stage

        candidate_dir.mkdir(parents=True, exist_ok=True)

        stage = time.perf_counter()
        fid = fidelity_report(
            train,
            holdout,
            synthetic,
            config.discretization,
            config.depths,
            seed=config.split_seed,
        )
        seconds["fidelity"] = time.perf_counter() - stage

        stage = time.perf_counter()
        priv = privacy_report(
            train, holdout, synthetic, config.discretization, seed=config.split_seed
        )
        seconds["privacy"] = time.perf_counter() - stage

        fid.save_json(candidate_dir / "fidelity.json")
        fid.save_interactions_csv(candidate_dir / "interactions.csv")
        priv.save_json(candidate_dir / "privacy.json")
        priv.save_histogram_csv(candidate_dir / "dcr_histogram.csv")
        seconds["total"] = time.perf_counter() - started

        rel = candidate_dir.relative_to(Path(config.output_dir))
        return CandidateResult(
            name=spec.name,
            kind=spec.kind,
            status="ok",
            error=None,
            rows_synthetic=synthetic.row_count,
            fidelity_report=str(rel / "fidelity.json"),
            privacy_report=str(rel / "privacy.json"),
            interactions_csv=str(rel / "interactions.csv"),
            dcr_histogram_csv=str(rel / "dcr_histogram.csv"),
            seconds=seconds,
        )
    except Exception as exc:  # noqa: BLE001 - candidate isolation is the contract
        seconds["total"] = time.perf_counter() - started
        return CandidateResult(
            name=spec.name,
            kind=spec.kind,
            status="failed",
            error=f"{type(exc).__name__}: {exc}",
            rows_synthetic=None,
            fidelity_report=None,
            privacy_report=None,
            interactions_csv=None,
            dcr_histogram_csv=None,
            seconds=seconds,
        )


def _header_names(path: str, delimiter: str) -> set[str]:
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh, delimiter=delimiter)
        try:
            header = next(reader)
        except StopIteration:
            return set()
    return {cell.strip() for cell in header}


def run_benchmark(config: RunConfig) -> RunManifest:
    """Evaluate every candidate in the configuration and write a manifest."""
    from synthbench import __version__

    override = load_schema_override(config.schema_override) if config.schema_override else None
    dataset = load_table(config.dataset, override, delimiter=config.delimiter)
    train, holdout = split_train_holdout(dataset, config.split_seed)

    out = Path(config.output_dir)
    out.mkdir(parents=True, exist_ok=True)

    models_dir = out / "models"
    models_dir.mkdir(exist_ok=True)
    granularities = sorted(
        {config.discretization.c_for_depth(d) for d in config.depths}
        | {config.discretization.c_privacy}
    )
    for granularity in granularities:
        fit_discretizer(train, granularity).save(models_dir / f"c_{granularity}.json")

    def run_one(spec: CandidateSpec) -> CandidateResult:
        return _evaluate_candidate(
            spec, dataset, train, holdout, config, out / "candidates" / spec.name
        )

    if config.workers > 1 and len(config.candidates) > 1:
        with concurrent.futures.ThreadPoolExecutor(max_workers=config.workers) as pool:
            results = tuple(pool.map(run_one, config.candidates))
    else:
        results = tuple(run_one(spec) for spec in config.candidates)

    manifest = RunManifest(
        tool_version=__version__,
        dataset={
            "path": config.dataset,
            "fingerprint": _dataset_fingerprint(config.dataset),
            "rows": dataset.row_count,
            "rows_train": train.row_count,
            "rows_holdout": holdout.row_count,
            "columns": [{"name": s.name, "kind": s.kind} for s in dataset.schema],
        },
        split_seed=config.split_seed,
        depths=tuple(sorted(set(config.depths))),
        discretization=config.discretization,
        results=results,
        output_dir=str(out),
    )
    manifest.save(out / "manifest.json")
    return manifest


def load_manifest(path: str | Path, *, verify: bool = True) -> RunManifest:
    """Read a manifest back; optionally check referenced reports parse."""
    path = Path(path)
    with open(path, encoding="utf-8") as fh:
        raw = json.load(fh)
    if raw.get("manifest_version") != MANIFEST_VERSION:
        raise ValueError(f"unsupported manifest version {raw.get('manifest_version')!r}")
    results = tuple(
        CandidateResult(
            name=entry["name"],
            kind=entry["kind"],
            status=entry["status"],
            error=entry.get("error"),
            rows_synthetic=entry.get("rows_synthetic"),
            fidelity_report=entry.get("fidelity_report"),
            privacy_report=entry.get("privacy_report"),
            interactions_csv=entry.get("interactions_csv"),
            dcr_histogram_csv=entry.get("dcr_histogram_csv"),
            seconds=entry.get("seconds", {}),
        )
        for entry in raw["candidates"]
    )
    manifest = RunManifest(
        tool_version=raw["tool_version"],
        dataset=raw["dataset"],
        split_seed=int(raw["split_seed"]),
        depths=tuple(raw["depths"]),
        discretization=DiscretizationConfig.from_json_dict(raw["discretization"]),
        results=results,
        output_dir=str(path.parent),
    )
    if verify:
        for result in manifest.results:
            if result.status != "ok":
                continue
            for rel in (
                result.fidelity_report,
                result.privacy_report,
                result.interactions_csv,
                result.dcr_histogram_csv,
            ):
                target = path.parent / rel
                if not target.is_file():
                    raise ValueError(f"manifest references missing file {target}")
                if target.suffix == ".json":
                    with open(target, encoding="utf-8") as fh:
                        json.load(fh)
    return manifest


@dataclass(frozen=True)
class TradeoffPoint:
    """One point on the fidelity/privacy plane."""

    label: str
    kind: str
    fidelity_ratio: float | None
    share_closer_to_train: float

    def to_json_dict(self) -> dict:
        return {
            "label": self.label,
            "kind": self.kind,
            "fidelity_ratio": self.fidelity_ratio,
            "share_closer_to_train": self.share_closer_to_train,
        }


def tradeoff_points(manifest: RunManifest) -> list[TradeoffPoint]:
    """Depth-3 fidelity ratio vs privacy share for every successful candidate.

    The ideal spot, fidelity ratio 1.0 at share 0.5, is what a fresh sample
    of real data achieves in expectation; it is included as a reference row
    so downstream plots can anchor against it.
    """
    points = [
        TradeoffPoint(
            label="holdout",
            kind="reference",
            fidelity_ratio=1.0,
            share_closer_to_train=0.5,
        )
    ]
    base = Path(manifest.output_dir)
    seen_depth3 = False
    for result in manifest.results:
        if result.status != "ok":
            continue
        with open(base / result.fidelity_report, encoding="utf-8") as fh:
            fid = json.load(fh)
        with open(base / result.privacy_report, encoding="utf-8") as fh:
            priv = json.load(fh)
        depth3 = fid.get("depths", {}).get("3")
        if depth3 is None:
            continue
        seen_depth3 = True
        points.append(
            TradeoffPoint(
                label=result.name,
                kind="candidate",
                fidelity_ratio=depth3["ratio"],
                share_closer_to_train=priv["share_closer_to_train"],
            )
        )
    if not seen_depth3:
        raise ValueError("no successful candidate carries depth-3 fidelity scores")
    return points


def save_tradeoff_csv(points: Sequence[TradeoffPoint], path: str | Path) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["label", "kind", "fidelity_ratio", "share_closer_to_train"])
        for point in points:
            writer.writerow(
                [
                    point.label,
                    point.kind,
                    "" if point.fidelity_ratio is None else repr(point.fidelity_ratio),
                    repr(point.share_closer_to_train),
                ]
            )


def save_tradeoff_json(points: Sequence[TradeoffPoint], path: str | Path) -> None:
    payload = {"kind": "tradeoff", "points": [p.to_json_dict() for p in points]}
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")
