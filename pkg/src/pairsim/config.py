"""Declarative experiment configuration (YAML) with a strict schema.

Every unknown key is an error and all violations are collected before
reporting, so a config never runs with a silently misspelled physics
parameter.  The schema is documented key by key in the README.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
import yaml

from .dfs import LogicalState
from .errors import ConfigError
from .gates import GateParams
from .model import (
    BathInit,
    BathMode,
    BathSpec,
    CoherentInit,
    NoiseModel,
    ThermalInit,
    VacuumInit,
)
from .qops import NoiseVector

__all__ = [
    "SCENARIOS",
    "CollectivitySpec",
    "ExperimentConfig",
    "parse_config",
    "load_config",
    "validate_config",
    "random_logical_state",
]

SCENARIOS = (
    "storage",
    "gate",
    "efficiency_table",
    "subspace_dims",
    "collectivity_sweep",
    "asymmetry_sweep",
)

DYNAMIC_SCENARIOS = ("storage", "gate", "collectivity_sweep", "asymmetry_sweep")

# Encoded-register dimension above which a config is rejected as beyond desk
# scale (exact dense eigendecomposition would dominate the runtime).
MAX_TOTAL_DIM = 4096

_TOP_KEYS = {
    "scenario",
    "seed",
    "pairs",
    "noise",
    "bath",
    "bath_init",
    "logical",
    "times",
    "epsilon",
    "gate",
    "m_values",
    "collectivity",
    "output",
}


@dataclass(frozen=True)
class CollectivitySpec:
    """Mode pool for the collectivity sweep: identical modes per pair, with a
    fraction of them shared between the two pairs."""

    frequency: float
    cutoff: int
    g: float
    modes_per_pair: int
    shared_fractions: tuple[float, ...]


@dataclass(frozen=True)
class ExperimentConfig:
    """Validated scenario description (everything the runner needs)."""

    scenario: str
    seed: int
    pairs: int
    noise: NoiseModel | None
    bath: BathSpec
    mode_ids: tuple[str, ...]
    bath_init: BathInit
    logical: LogicalState | None  # None means: draw from the seed
    times: tuple[float, ...]
    epsilon: tuple[float, ...]
    gate: GateParams | None
    m_values: tuple[int, ...]
    collectivity: CollectivitySpec | None
    output_dir: str
    output_prefix: str
    normalized: dict = field(default_factory=dict, compare=False)

    @property
    def logical_is_random(self) -> bool:
        return self.logical is None


def parse_config(text: str) -> ExperimentConfig:
    """Parse and validate a YAML config; raises ConfigError with every violation."""
    cfg, violations = validate_config(yaml.safe_load(text))
    if violations:
        raise ConfigError(violations)
    assert cfg is not None
    return cfg


def load_config(path) -> ExperimentConfig:
    with open(path, "r", encoding="utf-8") as f:
        return parse_config(f.read())


def random_logical_state(qubit_count: int, seed: int) -> LogicalState:
    """Deterministic Haar-like random logical state for a given seed."""
    rng = np.random.default_rng(seed)
    amps = rng.normal(size=2**qubit_count) + 1j * rng.normal(size=2**qubit_count)
    return LogicalState(amps / np.linalg.norm(amps))


# --- validation helpers --------------------------------------------------------


def _is_number(x) -> bool:
    return isinstance(x, (int, float)) and not isinstance(x, bool) and math.isfinite(x)


def _is_int(x) -> bool:
    return isinstance(x, int) and not isinstance(x, bool)


class _Check:
    def __init__(self):
        self.violations: list[str] = []

    def add(self, path: str, message: str):
        self.violations.append(f"{path}: {message}")

    def unknown_keys(self, path: str, mapping: dict, allowed: set[str]):
        for key in mapping:
            if key not in allowed:
                self.add(f"{path}.{key}" if path else str(key), "unknown key")


def _parse_amplitude(entry, path: str, check: _Check) -> complex | None:
    if _is_number(entry):
        return complex(entry)
    if (
        isinstance(entry, list)
        and len(entry) == 2
        and all(_is_number(p) for p in entry)
    ):
        return complex(entry[0], entry[1])
    check.add(path, "amplitude must be a number or a [re, im] pair")
    return None


def validate_config(data) -> tuple[ExperimentConfig | None, list[str]]:
    """Validate a parsed YAML mapping; returns (config, violations).

    The config is only returned when the violation list is empty.
    """
    check = _Check()
    if not isinstance(data, dict):
        return None, ["top level: config must be a mapping"]
    check.unknown_keys("", data, _TOP_KEYS)

    scenario = data.get("scenario")
    if scenario not in SCENARIOS:
        check.add("scenario", f"must be one of {', '.join(SCENARIOS)}; got {scenario!r}")
        scenario = None

    seed = data.get("seed", 0)
    if not _is_int(seed) or seed < 0:
        check.add("seed", f"must be a nonnegative integer, got {seed!r}")
        seed = 0

    pairs = data.get("pairs", 2 if scenario in ("gate", "collectivity_sweep") else 1)
    if not _is_int(pairs) or pairs < 1:
        check.add("pairs", f"must be a positive integer, got {pairs!r}")
        pairs = 1
    if scenario in ("gate", "collectivity_sweep") and pairs != 2:
        check.add("pairs", f"{scenario} runs on exactly 2 pairs, got {pairs}")
        pairs = 2

    noise = _validate_noise(data, scenario, check)
    bath, mode_ids = _validate_bath(data, scenario, pairs, check)
    bath_init = _validate_bath_init(data, len(mode_ids), check)
    logical = _validate_logical(data, scenario, pairs, check)
    times = _validate_times(data, scenario, check)
    epsilon = _validate_epsilon(data, scenario, check)
    gate = _validate_gate(data, scenario, check)
    m_values = _validate_m_values(data, scenario, check)
    collectivity = _validate_collectivity(data, scenario, check)

    out = data.get("output", {})
    output_dir, output_prefix = "out", scenario or "run"
    if not isinstance(out, dict):
        check.add("output", "must be a mapping with keys dir, prefix")
    else:
        check.unknown_keys("output", out, {"dir", "prefix"})
        if "dir" in out:
            if isinstance(out["dir"], str) and out["dir"]:
                output_dir = out["dir"]
            else:
                check.add("output.dir", "must be a nonempty string")
        if "prefix" in out:
            if isinstance(out["prefix"], str) and out["prefix"]:
                output_prefix = out["prefix"]
            else:
                check.add("output.prefix", "must be a nonempty string")

    if scenario in DYNAMIC_SCENARIOS and not check.violations:
        _validate_dimensions(scenario, pairs, bath, collectivity, check)

    if check.violations:
        return None, check.violations

    cfg = ExperimentConfig(
        scenario=scenario,
        seed=seed,
        pairs=pairs,
        noise=noise,
        bath=bath,
        mode_ids=mode_ids,
        bath_init=bath_init,
        logical=logical,
        times=times,
        epsilon=epsilon,
        gate=gate,
        m_values=m_values,
        collectivity=collectivity,
        output_dir=output_dir,
        output_prefix=output_prefix,
        normalized=_normalize_echo(data),
    )
    return cfg, []


def _validate_noise(data, scenario, check) -> NoiseModel | None:
    block = data.get("noise")
    if block is None:
        if scenario not in (None, "efficiency_table"):
            check.add("noise", "required for this scenario")
        return None
    if not isinstance(block, dict):
        check.add("noise", "must be a mapping with keys lambda, omega0")
        return None
    check.unknown_keys("noise", block, {"lambda", "omega0"})
    lam = block.get("lambda")
    if (
        not isinstance(lam, list)
        or len(lam) != 3
        or not all(_is_number(x) for x in lam)
    ):
        check.add("noise.lambda", "must be a list of three finite numbers")
        return None
    if all(x == 0 for x in lam):
        check.add("noise.lambda", "must not be all zero")
        return None
    omega0 = block.get("omega0", 0.0)
    if not _is_number(omega0) or omega0 < 0:
        check.add("noise.omega0", f"must be a finite number >= 0, got {omega0!r}")
        return None
    if lam[2] == 0 and omega0 != 0:
        check.add(
            "noise",
            "lambda3 = 0 with omega0 != 0 is undrivable: the ratio condition "
            "g1:g2:omega0 = lambda1:lambda2:lambda3 has no finite solution "
            "(pure amplitude damping needs omega0 = 0 here)",
        )
        return None
    return NoiseModel(NoiseVector(*(float(x) for x in lam)), omega0=float(omega0))


def _validate_bath(data, scenario, pairs, check) -> tuple[BathSpec, tuple[str, ...]]:
    block = data.get("bath")
    empty = BathSpec(), ()
    if block is None:
        return empty
    if scenario == "collectivity_sweep":
        check.add("bath", "collectivity_sweep builds its bath from the collectivity block")
        return empty
    if scenario in ("efficiency_table", "subspace_dims"):
        check.add("bath", f"not used by the {scenario} scenario")
        return empty
    if not isinstance(block, dict):
        check.add("bath", "must be a mapping with keys modes, couplings")
        return empty
    violations_before = len(check.violations)
    check.unknown_keys("bath", block, {"modes", "couplings"})

    modes: list[BathMode] = []
    ids: list[str] = []
    raw_modes = block.get("modes", [])
    if not isinstance(raw_modes, list):
        check.add("bath.modes", "must be a list")
        raw_modes = []
    for i, m in enumerate(raw_modes):
        path = f"bath.modes[{i}]"
        if not isinstance(m, dict):
            check.add(path, "must be a mapping with keys id, frequency, cutoff")
            continue
        check.unknown_keys(path, m, {"id", "frequency", "cutoff"})
        mid = m.get("id", i)
        if not isinstance(mid, (str, int)) or isinstance(mid, bool):
            check.add(f"{path}.id", "must be a string or integer")
            continue
        mid = str(mid)
        freq = m.get("frequency")
        cut = m.get("cutoff")
        if not _is_number(freq) or freq <= 0:
            check.add(f"{path}.frequency", f"must be a finite number > 0, got {freq!r}")
            continue
        if not _is_int(cut) or cut < 2:
            check.add(f"{path}.cutoff", f"must be an integer >= 2, got {cut!r}")
            continue
        if mid in ids:
            check.add(
                f"{path}.id",
                f"duplicate mode id {mid!r}: one physical mode must be declared once",
            )
            continue
        ids.append(mid)
        modes.append(BathMode(frequency=float(freq), fock_dim=int(cut)))

    coupling: dict[tuple[int, int], float] = {}
    raw_coup = block.get("couplings", [])
    if not isinstance(raw_coup, list):
        check.add("bath.couplings", "must be a list")
        raw_coup = []
    for i, c in enumerate(raw_coup):
        path = f"bath.couplings[{i}]"
        if not isinstance(c, dict):
            check.add(path, "must be a mapping with keys pair, mode, g")
            continue
        check.unknown_keys(path, c, {"pair", "mode", "g"})
        pair = c.get("pair")
        mode = c.get("mode")
        g = c.get("g")
        if not _is_int(pair) or not 0 <= pair < pairs:
            check.add(f"{path}.pair", f"must be an integer in [0, {pairs}), got {pair!r}")
            continue
        mode = str(mode) if isinstance(mode, (str, int)) and not isinstance(mode, bool) else None
        if mode is None or mode not in ids:
            check.add(f"{path}.mode", f"must name a declared mode id, got {c.get('mode')!r}")
            continue
        if not _is_number(g):
            check.add(f"{path}.g", f"must be a finite number, got {g!r}")
            continue
        key = (pair, ids.index(mode))
        if key in coupling:
            check.add(path, f"duplicate coupling for pair {pair}, mode {mode!r}")
            continue
        coupling[key] = float(g)

    if len(check.violations) > violations_before:
        return empty
    return BathSpec(modes=tuple(modes), coupling=coupling), tuple(ids)


def _validate_bath_init(data, n_modes, check) -> BathInit:
    block = data.get("bath_init", {"kind": "vacuum"})
    if not isinstance(block, dict):
        check.add("bath_init", "must be a mapping with a kind key")
        return VacuumInit()
    kind = block.get("kind", "vacuum")
    if kind == "vacuum":
        check.unknown_keys("bath_init", block, {"kind"})
        return VacuumInit()
    if kind == "thermal":
        check.unknown_keys("bath_init", block, {"kind", "temperature"})
        temp = block.get("temperature")
        if not _is_number(temp) or temp < 0:
            check.add("bath_init.temperature", f"must be a number >= 0, got {temp!r}")
            return VacuumInit()
        return ThermalInit(temperature=float(temp))
    if kind == "coherent":
        check.unknown_keys("bath_init", block, {"kind", "amplitudes"})
        amps = block.get("amplitudes")
        if (
            not isinstance(amps, list)
            or len(amps) != n_modes
            or not all(_is_number(a) for a in amps)
        ):
            check.add(
                "bath_init.amplitudes",
                f"must be a list of {n_modes} finite numbers (one per mode)",
            )
            return VacuumInit()
        return CoherentInit(amplitudes=tuple(float(a) for a in amps))
    check.add("bath_init.kind", f"must be vacuum, thermal, or coherent; got {kind!r}")
    return VacuumInit()


def _validate_logical(data, scenario, pairs, check) -> LogicalState | None:
    block = data.get("logical", "random")
    if scenario in ("efficiency_table", "subspace_dims"):
        if "logical" in data:
            check.add("logical", f"not used by the {scenario} scenario")
        return None
    if block == "random":
        return None
    if not isinstance(block, dict) or set(block) != {"amplitudes"}:
        check.add("logical", 'must be "random" or a mapping {amplitudes: [...]}')
        return None
    raw = block["amplitudes"]
    expected = 2**pairs
    if not isinstance(raw, list) or len(raw) != expected:
        check.add(
            "logical.amplitudes",
            f"must be a list of {expected} amplitudes for {pairs} logical qubit(s)",
        )
        return None
    amps = []
    for i, entry in enumerate(raw):
        z = _parse_amplitude(entry, f"logical.amplitudes[{i}]", check)
        if z is None:
            return None
        amps.append(z)
    vec = np.array(amps, dtype=complex)
    norm = np.linalg.norm(vec)
    if norm == 0:
        check.add("logical.amplitudes", "must not be all zero")
        return None
    return LogicalState(vec / norm)


def _validate_times(data, scenario, check) -> tuple[float, ...]:
    block = data.get("times")
    if scenario in ("efficiency_table", "subspace_dims"):
        if block is not None:
            check.add("times", f"not used by the {scenario} scenario")
        return ()
    if block is None:
        if scenario == "gate":
            return tuple(np.linspace(0.0, 1.0, 11))
        if scenario is not None:
            check.add("times", "required: mapping {start, stop, count}")
        return ()
    if not isinstance(block, dict):
        check.add("times", "must be a mapping {start, stop, count}")
        return ()
    check.unknown_keys("times", block, {"start", "stop", "count"})
    start = block.get("start", 0.0)
    stop = block.get("stop")
    count = block.get("count")
    ok = True
    if not _is_number(start) or start < 0:
        check.add("times.start", f"must be a number >= 0, got {start!r}")
        ok = False
    if not _is_number(stop):
        check.add("times.stop", f"must be a finite number, got {stop!r}")
        ok = False
    if not _is_int(count) or count < 2:
        check.add("times.count", f"must be an integer >= 2, got {count!r}")
        ok = False
    if ok and stop <= start:
        check.add("times", f"stop ({stop}) must exceed start ({start})")
        ok = False
    if ok and scenario == "gate" and stop != 1.0:
        check.add("times.stop", "the gate scenario runs for unit duration (stop = 1.0)")
        ok = False
    if not ok:
        return ()
    return tuple(float(t) for t in np.linspace(start, stop, count))


def _validate_epsilon(data, scenario, check) -> tuple[float, ...]:
    block = data.get("epsilon", [0.0])
    if _is_number(block):
        block = [block]
    if not isinstance(block, list) or not block or not all(
        _is_number(e) for e in block
    ):
        check.add("epsilon", "must be a number or a list of finite numbers")
        return (0.0,)
    eps = tuple(float(e) for e in block)
    if any(e <= -1.0 for e in eps):
        check.add("epsilon", "each value must exceed -1 (ancilla coupling g(1+eps))")
        return (0.0,)
    if scenario == "asymmetry_sweep":
        if len(eps) < 2 or any(b <= a for a, b in zip(eps, eps[1:])):
            check.add(
                "epsilon",
                "asymmetry_sweep needs at least two strictly increasing values",
            )
            return (0.0,)
    elif len(eps) != 1:
        check.add(
            "epsilon",
            f"{scenario} takes a single value (use asymmetry_sweep for sweeps)",
        )
        return (eps[0],)
    return eps


def _validate_gate(data, scenario, check) -> GateParams | None:
    block = data.get("gate")
    if scenario != "gate":
        if block is not None:
            check.add("gate", "gate parameters are only used by the gate scenario")
        return None
    if block is None:
        check.add("gate", "required: mapping {alpha, theta, phi}")
        return None
    if not isinstance(block, dict):
        check.add("gate", "must be a mapping {alpha, theta, phi}")
        return None
    check.unknown_keys("gate", block, {"alpha", "theta", "phi"})
    vals = {}
    for key in ("alpha", "theta", "phi"):
        v = block.get(key)
        if not _is_number(v):
            check.add(f"gate.{key}", f"must be a finite number, got {v!r}")
            return None
        vals[key] = float(v)
    return GateParams(**vals)


def _validate_m_values(data, scenario, check) -> tuple[int, ...]:
    block = data.get("m_values")
    if scenario not in ("efficiency_table", "subspace_dims"):
        if block is not None:
            check.add("m_values", f"not used by the {scenario} scenario")
        return ()
    if block is None:
        return (1, 2, 3) if scenario == "subspace_dims" else (1, 2, 3, 4, 5, 6)
    if not isinstance(block, list) or not block or not all(
        _is_int(m) and m >= 1 for m in block
    ):
        check.add("m_values", "must be a nonempty list of integers >= 1")
        return ()
    cap = 6 if scenario == "subspace_dims" else 128
    if any(m > cap for m in block):
        check.add("m_values", f"values above {cap} are beyond desk scale here")
        return ()
    return tuple(int(m) for m in block)


def _validate_collectivity(data, scenario, check) -> CollectivitySpec | None:
    block = data.get("collectivity")
    if scenario != "collectivity_sweep":
        if block is not None:
            check.add("collectivity", "only used by the collectivity_sweep scenario")
        return None
    if block is None:
        check.add(
            "collectivity",
            "required: mapping {frequency, cutoff, g, modes_per_pair, shared_fractions}",
        )
        return None
    if not isinstance(block, dict):
        check.add("collectivity", "must be a mapping")
        return None
    allowed = {"frequency", "cutoff", "g", "modes_per_pair", "shared_fractions"}
    check.unknown_keys("collectivity", block, allowed)
    freq = block.get("frequency")
    cutoff = block.get("cutoff")
    g = block.get("g")
    k = block.get("modes_per_pair")
    fracs = block.get("shared_fractions")
    ok = True
    if not _is_number(freq) or freq <= 0:
        check.add("collectivity.frequency", f"must be a number > 0, got {freq!r}")
        ok = False
    if not _is_int(cutoff) or cutoff < 2:
        check.add("collectivity.cutoff", f"must be an integer >= 2, got {cutoff!r}")
        ok = False
    if not _is_number(g):
        check.add("collectivity.g", f"must be a finite number, got {g!r}")
        ok = False
    if not _is_int(k) or k < 1:
        check.add("collectivity.modes_per_pair", f"must be an integer >= 1, got {k!r}")
        ok = False
    if (
        not isinstance(fracs, list)
        or not fracs
        or not all(_is_number(f) and 0.0 <= f <= 1.0 for f in fracs)
    ):
        check.add(
            "collectivity.shared_fractions",
            "must be a nonempty list of numbers in [0, 1]",
        )
        ok = False
    if not ok:
        return None
    return CollectivitySpec(
        frequency=float(freq),
        cutoff=int(cutoff),
        g=float(g),
        modes_per_pair=int(k),
        shared_fractions=tuple(float(f) for f in fracs),
    )


def _validate_dimensions(scenario, pairs, bath, collectivity, check) -> None:
    if scenario == "collectivity_sweep" and collectivity is not None:
        k = collectivity.modes_per_pair
        worst_modes = max(
            2 * k - round(f * k) for f in collectivity.shared_fractions
        )
        dim = 4**2 * collectivity.cutoff**worst_modes
    else:
        dim = 4**pairs
        for m in bath.modes:
            dim *= m.fock_dim
    if dim > MAX_TOTAL_DIM:
        check.add(
            "bath" if scenario != "collectivity_sweep" else "collectivity",
            f"encoded register dimension {dim} exceeds desk scale ({MAX_TOTAL_DIM})",
        )


def _normalize_echo(data) -> dict:
    """Deep-copy of the raw mapping for the summary echo (JSON-safe types only)."""

    def conv(x):
        if isinstance(x, dict):
            return {str(k): conv(v) for k, v in x.items()}
        if isinstance(x, list):
            return [conv(v) for v in x]
        return x

    return conv(data)
