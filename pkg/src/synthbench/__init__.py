"""Benchmarking toolkit for synthetic tabular data.

Measures how faithfully a synthetic table reproduces the low-order joint
structure of real training data (fidelity) and how close its records sit to
actual training records relative to a holdout (privacy).
"""

from synthbench.baselines import (
    BASELINE_BUILDERS,
    PerturbationConfig,
    build_baseline,
    copy_identity,
    perturb,
    sample_independent,
)
from synthbench.discretize import (
    CategoryMap,
    ColumnRule,
    DiscretizationConfig,
    DiscretizationModel,
    DiscretizedTable,
    QuantileBins,
    apply_discretizer,
    fit_discretizer,
)
from synthbench.fidelity import (
    DepthFidelity,
    FidelityReport,
    MarginalDistribution,
    MarginalSpec,
    enumerate_combinations,
    fidelity_report,
    marginal,
    tvd,
)
from synthbench.harness import (
    CandidateResult,
    CandidateSpec,
    RunConfig,
    RunManifest,
    TradeoffPoint,
    load_manifest,
    run_benchmark,
    tradeoff_points,
)
from synthbench.ingest import (
    CATEGORICAL,
    DATETIME,
    NUMERIC,
    Column,
    ColumnSchema,
    Table,
    load_schema_override,
    load_table,
    save_table,
    split_train_holdout,
)
from synthbench.privacy import (
    DcrRecord,
    PrivacyReport,
    dcr_all,
    identical_match_count,
    privacy_report,
)

__version__ = "0.1.0"

__all__ = [
    "BASELINE_BUILDERS",
    "CATEGORICAL",
    "CandidateResult",
    "CandidateSpec",
    "CategoryMap",
    "Column",
    "ColumnRule",
    "ColumnSchema",
    "DATETIME",
    "DcrRecord",
    "DepthFidelity",
    "DiscretizationConfig",
    "DiscretizationModel",
    "DiscretizedTable",
    "FidelityReport",
    "MarginalDistribution",
    "MarginalSpec",
    "NUMERIC",
    "PerturbationConfig",
    "PrivacyReport",
    "QuantileBins",
    "RunConfig",
    "RunManifest",
    "Table",
    "TradeoffPoint",
    "apply_discretizer",
    "build_baseline",
    "copy_identity",
    "dcr_all",
    "enumerate_combinations",
    "fidelity_report",
    "fit_discretizer",
    "identical_match_count",
    "load_manifest",
    "load_schema_override",
    "load_table",
    "marginal",
    "perturb",
    "privacy_report",
    "run_benchmark",
    "sample_independent",
    "save_table",
    "split_train_holdout",
    "tradeoff_points",
    "tvd",
]
