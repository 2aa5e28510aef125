"""Experiment harness: sweeps, accuracy metrics, reports, CLI."""
from .config import CODE_CHOICES, DEFAULT_GRID, MODE_CHOICES, ConfigError, ExperimentConfig, load_config
from .metrics import (
    AccuracyRecord,
    ImprovementRecord,
    MetricsError,
    NoiseImpactModel,
    OverheadRecord,
    accuracy_records_from_sweep,
    accuracy_under_noise,
    emit_results,
    estimate_noisy_accuracy,
    improvement_report,
    noise_impact_model,
    overhead_report,
    read_result_csv,
)
from .sweep import (
    RESULT_FIELDS,
    ResultRecord,
    SweepError,
    cell_seed,
    clean_success_probability,
    estimate_pst,
    read_sweep_meta,
    run_pst_sweep,
    sweep_cells,
    synthesized_composite,
    trained_model,
    worker_count,
    write_sweep_meta,
)

__all__ = [
    "AccuracyRecord",
    "CODE_CHOICES",
    "ConfigError",
    "DEFAULT_GRID",
    "ExperimentConfig",
    "ImprovementRecord",
    "MODE_CHOICES",
    "MetricsError",
    "NoiseImpactModel",
    "OverheadRecord",
    "RESULT_FIELDS",
    "ResultRecord",
    "SweepError",
    "accuracy_records_from_sweep",
    "accuracy_under_noise",
    "cell_seed",
    "clean_success_probability",
    "emit_results",
    "estimate_noisy_accuracy",
    "estimate_pst",
    "improvement_report",
    "load_config",
    "noise_impact_model",
    "overhead_report",
    "read_result_csv",
    "read_sweep_meta",
    "run_pst_sweep",
    "sweep_cells",
    "synthesized_composite",
    "trained_model",
    "worker_count",
    "write_sweep_meta",
]
