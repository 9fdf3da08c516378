from lab.generators import (
    GENERATORS,
    gen_complete_bipartite,
    gen_cycle,
    gen_dense,
    gen_mixed,
    gen_planted,
    gen_polarity,
    gen_random,
    gen_tree,
    generate,
)
from lab.report import emit_report, load_report
from lab.sweep import ExperimentSpec, ReportRow, fit_exponent, load_spec, run_sweep, summarize

__all__ = [
    "GENERATORS",
    "ExperimentSpec",
    "ReportRow",
    "emit_report",
    "fit_exponent",
    "gen_complete_bipartite",
    "gen_cycle",
    "gen_dense",
    "gen_mixed",
    "gen_planted",
    "gen_polarity",
    "gen_random",
    "gen_tree",
    "generate",
    "load_report",
    "load_spec",
    "run_sweep",
    "summarize",
]
