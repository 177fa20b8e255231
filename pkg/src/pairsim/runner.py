"""Scenario execution: experiments in, CSV time series and a JSON summary out.

Output contract:

* one CSV per dynamical run (columns: time, fidelity, coherence_offdiag,
  dfs_leakage, one top_fock_pop column per mode), or one aggregate CSV for
  table/sweep scenarios;
* a summary JSON with the config echo, headline metrics, pass/fail
  assertions mirroring the acceptance tolerances, and wall-clock time.

Numbers are written in shortest round-trip decimal form and all iteration
orders are fixed, so a config plus seed determines the CSV bytes exactly.
Sweep points may evaluate on a thread pool; files are written by the
collector in configuration order.
"""

from __future__ import annotations

import csv
import json
import math
import shutil
import tempfile
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import tolerances as tol
from .config import CollectivitySpec, ExperimentConfig, load_config, random_logical_state
from .dfs import (
    LogicalState,
    cluster_efficiency,
    coherence_preserving_subspace,
    decode,
    encode,
)
from .evolve import (
    EvolutionResult,
    GateExperimentConfig,
    StorageConfig,
    run_gate_experiment,
    run_storage_experiment,
)
from .gates import controlled_gate, eigen_to_computational, paired_controlled_gate
from .model import BathMode, BathSpec

__all__ = ["ScenarioOutcome", "run_scenario", "check_goldens"]


@dataclass
class ScenarioOutcome:
    exit_code: int
    summary: dict
    artifacts: list[Path]


def _fmt(x) -> str:
    if isinstance(x, (int, np.integer)) and not isinstance(x, bool):
        return str(int(x))
    return repr(float(x))


def _write_csv(path: Path, header: list[str], rows) -> None:
    with open(path, "w", newline="", encoding="utf-8") as f:
        writer = csv.writer(f)  # RFC-4180 line endings
        writer.writerow(header)
        for row in rows:
            writer.writerow([_fmt(x) for x in row])


def _timeseries_rows(result: EvolutionResult):
    m = result.metrics
    for t in range(result.times.size):
        yield (
            result.times[t],
            m["fidelity"][t],
            m["coherence_offdiag"][t],
            m["dfs_leakage"][t],
            *m["top_fock_pop"][t],
        )


def _timeseries_header(mode_ids) -> list[str]:
    return [
        "time",
        "fidelity",
        "coherence_offdiag",
        "dfs_leakage",
        *(f"top_fock_pop_{mid}" for mid in mode_ids),
    ]


def _resolve_logical(cfg: ExperimentConfig, seed: int, qubits: int) -> LogicalState:
    if cfg.logical is not None:
        return cfg.logical
    return random_logical_state(qubits, seed)


def _truncation_flags(
    mode_ids, *results: tuple[str, EvolutionResult]
) -> list[str]:
    flags = []
    for label, result in results:
        pops = result.metrics["top_fock_pop"]
        if pops.size == 0:
            continue
        worst = pops.max(axis=0)
        for k, mid in enumerate(mode_ids):
            if worst[k] > tol.TRUNCATION_GUARD:
                flags.append(
                    f"{label}: top Fock level of mode {mid} reaches "
                    f"{worst[k]:.3e} (> {tol.TRUNCATION_GUARD:.0e}); raise the cutoff"
                )
    return flags


# --- scenario executors ---------------------------------------------------------


def _run_storage(cfg: ExperimentConfig, seed: int, out: Path, workers: int):
    logical = _resolve_logical(cfg, seed, cfg.pairs)
    sc = StorageConfig(
        pairs=cfg.pairs,
        noise=cfg.noise,
        bath=cfg.bath,
        logical=logical,
        times=cfg.times,
        bath_init=cfg.bath_init,
        epsilon=cfg.epsilon[0],
    )
    res = run_storage_experiment(sc)
    artifacts = []
    header = _timeseries_header(cfg.mode_ids)
    for label, r in (("encoded", res.encoded), ("bare", res.bare)):
        path = out / f"{cfg.output_prefix}_{label}.csv"
        _write_csv(path, header, _timeseries_rows(r))
        artifacts.append(path)
    enc_fid = res.encoded.metrics["fidelity"]
    metrics = {
        "encoded_min_fidelity": float(enc_fid.min()),
        "encoded_max_infidelity": float((1.0 - enc_fid).max()),
        "encoded_max_leakage": float(res.encoded.metrics["dfs_leakage"].max()),
        "bare_min_fidelity": float(res.bare.metrics["fidelity"].min()),
        "bare_min_coherence": float(res.bare.metrics["coherence_offdiag"].min()),
        "max_top_fock_pop": float(
            max(
                res.encoded.metrics["top_fock_pop"].max(initial=0.0),
                res.bare.metrics["top_fock_pop"].max(initial=0.0),
            )
        ),
    }
    assertions = {
        "encoded_fidelity_preserved": metrics["encoded_min_fidelity"]
        >= 1.0 - tol.STORAGE_INFIDELITY_TOL,
        "encoded_leakage_bounded": metrics["encoded_max_leakage"]
        <= tol.EVOLUTION_LEAKAGE_TOL,
    }
    flags = _truncation_flags(
        cfg.mode_ids, ("encoded", res.encoded), ("bare", res.bare)
    )
    return metrics, assertions, flags, artifacts


def _run_gate(cfg: ExperimentConfig, seed: int, out: Path, workers: int):
    logical = _resolve_logical(cfg, seed, 2)
    gc = GateExperimentConfig(
        noise=cfg.noise,
        bath=cfg.bath,
        logical=logical,
        gate=cfg.gate,
        times=cfg.times,
        bath_init=cfg.bath_init,
        epsilon=cfg.epsilon[0],
    )
    res = run_gate_experiment(gc)
    path = out / f"{cfg.output_prefix}_gate.csv"
    _write_csv(path, _timeseries_header(cfg.mode_ids), _timeseries_rows(res.evolution))

    # Logical action check (bath-free): the paired gate conjugated into the
    # computational basis must act on encoded states exactly as the two-qubit
    # controlled gate acts on logical amplitudes.
    nv = cfg.noise.nv
    u_comp = eigen_to_computational(paired_controlled_gate(cfg.gate), nv)
    basis = [
        LogicalState(np.eye(4)[i]) for i in range(4)
    ]
    cols = [decode(u_comp @ encode(b, nv, 2), nv, 2).amplitudes for b in basis]
    logical_action = np.column_stack(cols)
    action_dev = float(np.max(np.abs(logical_action - controlled_gate(cfg.gate))))

    metrics = {
        "logical_fidelity": res.logical_fidelity,
        "max_leakage": res.max_leakage,
        "logical_action_deviation": action_dev,
        "max_top_fock_pop": float(
            res.evolution.metrics["top_fock_pop"].max(initial=0.0)
        ),
    }
    assertions = {
        "gate_fidelity_preserved": res.logical_fidelity
        >= 1.0 - tol.GATE_INFIDELITY_TOL,
        "gate_leakage_bounded": res.max_leakage <= tol.EVOLUTION_LEAKAGE_TOL,
        "logical_action_matches": action_dev <= tol.LOGICAL_ACTION_TOL,
    }
    flags = _truncation_flags(cfg.mode_ids, ("gate", res.evolution))
    return metrics, assertions, flags, [path]


def _run_efficiency_table(cfg: ExperimentConfig, seed: int, out: Path, workers: int):
    rows = []
    for m in cfg.m_values:
        exact, approx = cluster_efficiency(m)
        rows.append((m, math.comb(2 * m, m), exact, approx))
    path = out / f"{cfg.output_prefix}_efficiency.csv"
    _write_csv(path, ["m", "eigenspace_dim", "eta_exact", "eta_approx"], rows)
    metrics = {f"eta_exact_m{m}": r[2] for m, r in zip(cfg.m_values, rows)}
    assertions = {}
    if 1 in cfg.m_values:
        assertions["pair_efficiency_is_half"] = rows[cfg.m_values.index(1)][2] == 0.5
    return metrics, assertions, [], [path]


def _run_subspace_dims(cfg: ExperimentConfig, seed: int, out: Path, workers: int):
    nv = cfg.noise.nv
    rows = []
    dims_ok = True
    residual_ok = True
    for m in cfg.m_values:
        sub = coherence_preserving_subspace(nv, m)
        op = _cluster_noise_sum(nv, m)
        residual = float(np.max(np.abs(op @ sub.basis)))
        expected = math.comb(2 * m, m)
        rows.append((m, sub.logical_dim, expected, residual))
        dims_ok &= sub.logical_dim == expected
        residual_ok &= residual <= tol.SUBSPACE_RESIDUAL_TOL
    path = out / f"{cfg.output_prefix}_dims.csv"
    _write_csv(path, ["m", "dim", "expected_dim", "max_zero_residual"], rows)
    metrics = {"dims": [int(r[1]) for r in rows]}
    assertions = {
        "dimensions_match_binomial": bool(dims_ok),
        "zero_eigenvalue_residual_bounded": bool(residual_ok),
    }
    return metrics, assertions, [], [path]


def _cluster_noise_sum(nv, m: int) -> np.ndarray:
    from .qops import HilbertLayout, embed_product, noise_operator

    layout = HilbertLayout(2 * m)
    s = noise_operator(nv)
    total = np.zeros((layout.dim, layout.dim), dtype=complex)
    for q in range(2 * m):
        total += embed_product({q: s}, layout)
    return total


def _run_asymmetry_sweep(cfg: ExperimentConfig, seed: int, out: Path, workers: int):
    logical = _resolve_logical(cfg, seed, cfg.pairs)

    def one(eps: float):
        sc = StorageConfig(
            pairs=cfg.pairs,
            noise=cfg.noise,
            bath=cfg.bath,
            logical=logical,
            times=cfg.times,
            bath_init=cfg.bath_init,
            epsilon=eps,
        )
        return run_storage_experiment(sc)

    results = _parallel_map(one, cfg.epsilon, workers)
    rows = []
    infidelities = []
    flags = []
    for eps, res in zip(cfg.epsilon, results):
        enc = res.encoded.metrics
        infid = float((1.0 - enc["fidelity"]).max())
        infidelities.append(infid)
        rows.append(
            (
                eps,
                infid,
                float(enc["fidelity"][-1]),
                float(enc["dfs_leakage"].max()),
                float(res.bare.metrics["fidelity"].min()),
            )
        )
        flags.extend(
            _truncation_flags(
                cfg.mode_ids,
                (f"encoded eps={eps}", res.encoded),
                (f"bare eps={eps}", res.bare),
            )
        )
    path = out / f"{cfg.output_prefix}_sweep.csv"
    _write_csv(
        path,
        ["epsilon", "max_infidelity", "final_fidelity", "max_leakage", "bare_min_fidelity"],
        rows,
    )
    monotone = all(b > a for a, b in zip(infidelities, infidelities[1:]))
    metrics = {
        "epsilon": list(cfg.epsilon),
        "max_infidelity": infidelities,
    }
    assertions = {"infidelity_strictly_increasing": bool(monotone)}
    return metrics, assertions, flags, [path]


def _collectivity_bath(spec: CollectivitySpec, fraction: float) -> BathSpec:
    """Bath with round(f * k) modes shared between the two pairs, rest private."""
    k = spec.modes_per_pair
    n_shared = round(fraction * k)
    mode = BathMode(frequency=spec.frequency, fock_dim=spec.cutoff)
    modes: list[BathMode] = []
    coupling: dict[tuple[int, int], float] = {}
    for _ in range(n_shared):
        idx = len(modes)
        modes.append(mode)
        coupling[(0, idx)] = spec.g
        coupling[(1, idx)] = spec.g
    for pair in (0, 1):
        for _ in range(k - n_shared):
            idx = len(modes)
            modes.append(mode)
            coupling[(pair, idx)] = spec.g
    return BathSpec(modes=tuple(modes), coupling=coupling)


def _run_collectivity_sweep(cfg: ExperimentConfig, seed: int, out: Path, workers: int):
    logical = _resolve_logical(cfg, seed, 2)
    spec = cfg.collectivity

    def one(fraction: float):
        bath = _collectivity_bath(spec, fraction)
        sc = StorageConfig(
            pairs=2,
            noise=cfg.noise,
            bath=bath,
            logical=logical,
            times=cfg.times,
            bath_init=cfg.bath_init,
            epsilon=cfg.epsilon[0],
        )
        return bath, run_storage_experiment(sc)

    results = _parallel_map(one, spec.shared_fractions, workers)
    rows = []
    all_preserved = True
    for fraction, (bath, res) in zip(spec.shared_fractions, results):
        enc_min = float(res.encoded.metrics["fidelity"].min())
        all_preserved &= enc_min >= 1.0 - tol.STORAGE_INFIDELITY_TOL
        rows.append(
            (
                fraction,
                round(fraction * spec.modes_per_pair),
                len(bath.modes),
                enc_min,
                float(res.bare.metrics["fidelity"].min()),
                float(res.encoded.metrics["dfs_leakage"].max()),
            )
        )
    path = out / f"{cfg.output_prefix}_collectivity.csv"
    _write_csv(
        path,
        [
            "shared_fraction",
            "n_shared_modes",
            "n_modes_total",
            "encoded_min_fidelity",
            "bare_min_fidelity",
            "max_leakage",
        ],
        rows,
    )
    metrics = {
        "shared_fractions": list(spec.shared_fractions),
        "encoded_min_fidelity": [r[3] for r in rows],
    }
    assertions = {"encoded_fidelity_preserved_at_all_fractions": bool(all_preserved)}
    return metrics, assertions, [], [path]


def _parallel_map(fn, items, workers: int) -> list:
    items = list(items)
    if workers <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))


_EXECUTORS = {
    "storage": _run_storage,
    "gate": _run_gate,
    "efficiency_table": _run_efficiency_table,
    "subspace_dims": _run_subspace_dims,
    "asymmetry_sweep": _run_asymmetry_sweep,
    "collectivity_sweep": _run_collectivity_sweep,
}


def run_scenario(
    cfg: ExperimentConfig,
    out_dir: str | Path | None = None,
    workers: int = 1,
    seed: int | None = None,
) -> ScenarioOutcome:
    """Execute a validated config; write CSV artifacts plus a summary JSON.

    ``out_dir`` and ``seed`` override the config's values.  Exit code 0 means
    every built-in assertion passed; 1 means some failed.
    """
    t0 = time.perf_counter()
    out = Path(out_dir) if out_dir is not None else Path(cfg.output_dir)
    out.mkdir(parents=True, exist_ok=True)
    effective_seed = cfg.seed if seed is None else int(seed)

    metrics, assertions, flags, artifacts = _EXECUTORS[cfg.scenario](
        cfg, effective_seed, out, max(1, int(workers))
    )
    passed = all(assertions.values()) if assertions else True
    summary = {
        "scenario": cfg.scenario,
        "seed": effective_seed,
        "config": cfg.normalized,
        "metrics": metrics,
        "assertions": assertions,
        "passed": passed,
        "flags": flags,
        "artifacts": [p.name for p in artifacts],
        "wall_clock_s": round(time.perf_counter() - t0, 6),
    }
    summary_path = out / f"{cfg.output_prefix}_summary.json"
    with open(summary_path, "w", encoding="utf-8") as f:
        json.dump(summary, f, indent=2, sort_keys=True)
        f.write("\n")
    artifacts.append(summary_path)
    return ScenarioOutcome(
        exit_code=0 if passed else 1, summary=summary, artifacts=artifacts
    )


# --- golden regression files -----------------------------------------------------


def check_goldens(
    goldens_dir: str | Path, update: bool = False, workers: int = 1
) -> tuple[bool, list[str]]:
    """Re-run every golden config and compare CSV bytes against the stored ones.

    With ``update`` the stored files are rewritten instead.  Returns overall
    success plus one report line per file.  Byte comparison assumes the
    goldens were generated on the same BLAS build; regenerate with
    ``pairsim goldens --update`` after changing platforms.
    """
    goldens_dir = Path(goldens_dir)
    config_dir = goldens_dir / "configs"
    expected_root = goldens_dir / "expected"
    report: list[str] = []
    ok = True
    config_paths = sorted(config_dir.glob("*.yaml"))
    if not config_paths:
        return False, [f"no golden configs found under {config_dir}"]
    for cfg_path in config_paths:
        cfg = load_config(cfg_path)
        expected_dir = expected_root / cfg_path.stem
        with tempfile.TemporaryDirectory() as tmp:
            outcome = run_scenario(cfg, out_dir=tmp, workers=workers)
            csvs = [p for p in outcome.artifacts if p.suffix == ".csv"]
            if update:
                expected_dir.mkdir(parents=True, exist_ok=True)
                for p in csvs:
                    shutil.copy2(p, expected_dir / p.name)
                    report.append(f"updated {cfg_path.stem}/{p.name}")
                continue
            for p in csvs:
                ref = expected_dir / p.name
                if not ref.exists():
                    ok = False
                    report.append(f"MISSING {cfg_path.stem}/{p.name} (run --update)")
                    continue
                if ref.read_bytes() == p.read_bytes():
                    report.append(f"ok {cfg_path.stem}/{p.name}")
                else:
                    ok = False
                    report.append(f"MISMATCH {cfg_path.stem}/{p.name}")
    return ok, report
