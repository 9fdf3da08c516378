"""
Experiment sweeps: expand an ExperimentSpec into instances, run the chosen
algorithm on each, cross-check against the brute-force oracle and collect
ReportRows.

Spec parameters may be a scalar, {"range": [lo, hi]} (an integer drawn per
seed), or {"values": [...]} (one instance per value per seed).
"""

import itertools
import json
import logging
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import partial
from pathlib import Path

import numpy as np

from evencycle.config import MAX_ROUNDS, ORACLE_MAX_N, REPORT_FORMAT, WORKERS
from evencycle.density import density_extract, find_violation
from evencycle.detect import c2k_program, c4_program
from evencycle.errors import EvenCycleError, PreconditionError
from evencycle.graph import find_cycle_bruteforce, verify_cycle
from evencycle.sim import ACCEPT, REJECT, global_verdict, run
from lab.generators import GENERATORS, STREAM_PARAMS, generate, make_rng, mixed_family

log = logging.getLogger(__name__)

ALGORITHMS = ("c4", "c2k", "density_extract", "bruteforce")
ORACLE_SKIPPED = "skipped"
NOT_APPLICABLE = "n/a"


@dataclass(frozen=True)
class ExperimentSpec:
    generator: str
    params: dict
    k: int
    algorithm: str
    seeds: tuple
    max_rounds: int = None
    output: str = None
    oracle_max_n: int = None
    workers: int = None
    format: str = None

    def __post_init__(self):
        if not self.seeds:
            raise PreconditionError("seeds must be nonempty")
        if self.k < 2:
            raise PreconditionError(f"k must be >= 2, got {self.k}")
        if self.algorithm not in ALGORITHMS:
            raise PreconditionError(f"unknown algorithm {self.algorithm!r}; choose from {', '.join(ALGORITHMS)}")
        if self.generator not in GENERATORS:
            raise PreconditionError(f"unknown generator {self.generator!r}")
        if self.algorithm == "c4" and self.k != 2:
            raise PreconditionError("the c4 algorithm only detects 4-cycles; use k=2")

    @classmethod
    def from_dict(cls, d):
        seeds = d.get("seeds", [0])
        if isinstance(seeds, dict):
            start = int(seeds.get("start", 0))
            seeds = range(start, start + int(seeds["count"]))
        unknown = set(d) - set(cls.__dataclass_fields__) - {"description"}
        if unknown:
            raise PreconditionError(f"unknown spec keys: {', '.join(sorted(unknown))}")
        return cls(
            generator=d["generator"],
            params=dict(d.get("params", {})),
            k=int(d.get("k", 2)),
            algorithm=d.get("algorithm", "c2k"),
            seeds=tuple(int(s) for s in seeds),
            max_rounds=d.get("max_rounds"),
            output=d.get("output"),
            oracle_max_n=d.get("oracle_max_n"),
            workers=d.get("workers"),
            format=d.get("format"),
        )


def load_spec(path):
    try:
        data = json.loads(Path(path).read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise PreconditionError(f"cannot read spec {path}: {exc}") from exc
    if not isinstance(data, dict):
        raise PreconditionError(f"spec {path} must be a JSON object")
    try:
        return ExperimentSpec.from_dict(data)
    except KeyError as exc:
        raise PreconditionError(f"spec {path} misses key {exc}") from None


@dataclass
class ReportRow:
    instance_id: str
    seed: int
    family: str
    n: int
    m: int
    k: int
    algorithm: str
    verdict: str
    oracle: str
    rounds_used: int = 0
    light_rounds: int = 0
    heavy_rounds: int = 0
    threshold_fired: bool = False
    witness: tuple = None
    fault: str = None
    mismatch: bool = False
    wall_time: float = 0.0


COLUMNS = tuple(ReportRow.__dataclass_fields__)


@dataclass(frozen=True)
class Instance:
    instance_id: str
    seed: int
    params: dict = field(hash=False)


def expand_instances(spec):
    """Grid over {"values": [...]} parameters times seeds; ranges drawn per seed."""
    grid_keys = [key for key, val in spec.params.items() if isinstance(val, dict) and "values" in val]
    grids = [spec.params[key]["values"] for key in grid_keys]
    out = []
    for combo in itertools.product(*grids):
        for seed in spec.seeds:
            rng = make_rng(seed, STREAM_PARAMS)
            params = {}
            for key, val in spec.params.items():
                if key in grid_keys:
                    params[key] = combo[grid_keys.index(key)]
                elif isinstance(val, dict) and "range" in val:
                    lo, hi = val["range"]
                    params[key] = int(rng.integers(int(lo), int(hi) + 1))
                else:
                    params[key] = val
            out.append(Instance(f"{spec.generator}-{len(out):05d}", seed, params))
    return out


def _oracle(g, twok, limit):
    if g.n > limit:
        return ORACLE_SKIPPED
    return REJECT if find_cycle_bruteforce(g, twok, max_n=limit) else ACCEPT


def run_instance(spec, inst):
    """One ReportRow. Faults and timeouts are recorded, never raised."""
    start = time.perf_counter()
    g = generate(spec.generator, inst.params, inst.seed)
    family = mixed_family(inst.seed) if spec.generator == "mixed" else spec.generator
    k = spec.k
    row = ReportRow(inst.instance_id, inst.seed, family, g.n, g.m, k, spec.algorithm, NOT_APPLICABLE, ORACLE_SKIPPED)
    limit = ORACLE_MAX_N if spec.oracle_max_n is None else int(spec.oracle_max_n)
    row.oracle = _oracle(g, 2 * k, limit)
    try:
        if spec.algorithm in ("c2k", "c4"):
            prog = c4_program(g.n) if spec.algorithm == "c4" else c2k_program(g.n, k)
            report = run(g, prog, spec.max_rounds or MAX_ROUNDS)
            row.rounds_used = report.rounds_used
            row.light_rounds = report.phase_rounds("light")
            row.heavy_rounds = report.phase_rounds("heavy")
            row.threshold_fired = report.threshold_fired
            row.witness = report.first_witness()
            row.verdict = global_verdict(report)
        elif spec.algorithm == "density_extract":
            found = find_violation(g, k)
            if found is not None:
                row.witness = density_extract(g, k, found[1], found[0])
                row.verdict = REJECT
        else:
            row.witness = find_cycle_bruteforce(g, 2 * k)
            row.verdict = REJECT if row.witness else ACCEPT
    except EvenCycleError as exc:
        row.fault = f"{type(exc).__name__}: {exc}"
        row.verdict = NOT_APPLICABLE
    if row.witness is not None and not verify_cycle(g, row.witness, 2 * k):
        row.fault = row.fault or f"invalid witness {row.witness}"
        row.mismatch = True
    if row.oracle != ORACLE_SKIPPED and row.verdict in (ACCEPT, REJECT) and row.verdict != row.oracle:
        row.mismatch = True
    row.wall_time = round(time.perf_counter() - start, 6)
    if row.mismatch:
        log.warning("%s: verdict %s but oracle %s (fault=%s)", inst.instance_id, row.verdict, row.oracle, row.fault)
    return row


def run_sweep(spec, workers=None):
    instances = expand_instances(spec)
    workers = workers or spec.workers or WORKERS
    log.info("sweep: %d instances, generator=%s algorithm=%s k=%d workers=%d", len(instances), spec.generator, spec.algorithm, spec.k, workers)
    task = partial(run_instance, spec)
    rows = []
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            for row in pool.map(task, instances, chunksize=8):
                rows.append(row)
    else:
        for idx, inst in enumerate(instances, 1):
            rows.append(task(inst))
            if idx % 100 == 0:
                log.info("sweep: %d/%d done", idx, len(instances))
    return rows


def fit_exponent(rows):
    """Least-squares slope of log rounds_used against log n, or None with fewer than two sizes."""
    pts = [(r.n, r.rounds_used) for r in rows if r.fault is None and r.n > 1 and r.rounds_used > 0]
    if len({n for n, _ in pts}) < 2:
        return None
    xs = np.log([n for n, _ in pts])
    ys = np.log([t for _, t in pts])
    slope, _ = np.polyfit(xs, ys, 1)
    return float(slope)


def summarize(rows):
    return {
        "instances": len(rows),
        "mismatches": sum(r.mismatch for r in rows),
        "faults": sum(r.fault is not None for r in rows),
        "threshold_fired": sum(r.threshold_fired for r in rows),
        "threshold_unsound": sum(r.threshold_fired and r.oracle == ACCEPT for r in rows),
        "rejects": sum(r.verdict == REJECT for r in rows),
        "oracle_skipped": sum(r.oracle == ORACLE_SKIPPED for r in rows),
        "exponent": fit_exponent(rows),
    }


def report_format(spec, override=None):
    return override or spec.format or REPORT_FORMAT
