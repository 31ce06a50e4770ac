"""Scenario configuration: one human-readable YAML document per scenario.

A scenario names a sector (quantum | classical | wigner | saturation |
hbar_sweep), a Hamiltonian (explicit matrix or polynomial in q and p), an
initial state from a small tagged union, a time grid, and the discretization
grids the sector needs.  Parsing is strict: unknown sectors, malformed
polynomial keys and missing sections are reported with the offending field.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
import yaml

SECTORS = ("quantum", "classical", "wigner", "saturation", "hbar_sweep")
STATE_TYPES = ("pure_random", "gibbs", "two_level_plus", "gaussian", "coherent")

_TERM_RE = re.compile(r"^(?:q(\d+))?(?:p(\d+))?$")


class ConfigError(ValueError):
    """Malformed or incomplete scenario document."""


def parse_polynomial_terms(terms: dict) -> dict:
    """Map keys like 'q2', 'p2', 'q4', 'q1p1', 'const' to (i, j) power pairs."""
    if not isinstance(terms, dict) or not terms:
        raise ConfigError("system.polynomial must be a non-empty mapping")
    out: dict = {}
    for key, value in terms.items():
        k = str(key).strip().lower().replace(" ", "")
        if k in ("const", "1"):
            powers = (0, 0)
        else:
            m = _TERM_RE.fullmatch(k)
            if m is None or (m.group(1) is None and m.group(2) is None):
                raise ConfigError(
                    f"bad polynomial term {key!r}: use e.g. 'q2', 'p2', 'q1p1', 'const'"
                )
            powers = (int(m.group(1) or 0), int(m.group(2) or 0))
        try:
            out[powers] = out.get(powers, 0.0) + float(value)
        except (TypeError, ValueError) as exc:
            raise ConfigError(f"coefficient for {key!r} is not a number") from exc
    return out


def parse_matrix(rows) -> np.ndarray:
    """Parse a nested-list matrix; entries may be numbers or complex strings."""
    if not isinstance(rows, list) or not rows:
        raise ConfigError("system.matrix must be a non-empty list of rows")
    try:
        data = [[complex(str(v).replace(" ", "")) for v in row] for row in rows]
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"bad matrix entry: {exc}") from exc
    m = np.asarray(data, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ConfigError(f"system.matrix must be square, got shape {m.shape}")
    return m


@dataclass(frozen=True)
class ScenarioConfig:
    """Validated scenario; ``raw`` keeps the untouched document for reference."""

    name: str
    sector: str
    hbar: float
    seed: int
    system_matrix: np.ndarray | None
    polynomial_terms: dict | None
    initial_state: dict
    t_max: float
    samples: int
    alphas: tuple
    omega: float
    phase_grid: dict | None
    position_grid: dict | None
    classical_grid: dict | None
    hbars: tuple
    envelope_sigma_sq: float | None
    steps_per_unit_time: float
    raw: dict = field(repr=False, default_factory=dict)


def _require(doc: dict, key: str, sector: str):
    if key not in doc or doc[key] is None:
        raise ConfigError(f"sector {sector!r} requires the {key!r} section")
    return doc[key]


def _grid_section(doc, keys, label) -> dict:
    if not isinstance(doc, dict):
        raise ConfigError(f"{label} must be a mapping")
    missing = [k for k in keys if k not in doc]
    if missing:
        raise ConfigError(f"{label} is missing {missing}")
    out = {}
    for k in keys:
        out[k] = int(doc[k]) if k in ("nq", "np", "n") else float(doc[k])
    for k in ("periodic_q", "periodic_p"):
        if k in doc:
            out[k] = bool(doc[k])
    return out


def load_scenario(path) -> ScenarioConfig:
    """Parse and validate a scenario YAML file."""
    p = Path(path)
    try:
        doc = yaml.safe_load(p.read_text())
    except yaml.YAMLError as exc:
        raise ConfigError(f"cannot parse {p}: {exc}") from exc
    if not isinstance(doc, dict):
        raise ConfigError(f"{p} does not contain a mapping")
    return scenario_from_dict(doc, name=p.stem)


def scenario_from_dict(doc: dict, name: str = "scenario") -> ScenarioConfig:
    sector = str(doc.get("sector", "")).strip()
    if sector not in SECTORS:
        raise ConfigError(f"unknown sector {sector!r}; expected one of {SECTORS}")

    hbar = float(doc.get("hbar", 1.0))
    if hbar <= 0.0:
        raise ConfigError("hbar must be positive")
    seed = int(doc.get("seed", 0))
    omega = float(doc.get("omega", 1.0))

    system = doc.get("system", {}) or {}
    system_matrix = None
    polynomial_terms = None
    if "matrix" in system:
        system_matrix = parse_matrix(system["matrix"])
    if "polynomial" in system:
        polynomial_terms = parse_polynomial_terms(system["polynomial"])
    if sector in ("classical", "wigner", "hbar_sweep") and polynomial_terms is None:
        raise ConfigError(f"sector {sector!r} requires system.polynomial")
    if sector == "quantum" and system_matrix is None:
        raise ConfigError("sector 'quantum' requires system.matrix")

    state = doc.get("initial_state", None)
    if sector != "hbar_sweep":
        if not isinstance(state, dict) or "type" not in state:
            raise ConfigError("initial_state must be a mapping with a 'type'")
        if state["type"] not in STATE_TYPES:
            raise ConfigError(
                f"unknown initial_state.type {state['type']!r}; "
                f"expected one of {STATE_TYPES}"
            )
        state = dict(state)
    else:
        state = dict(state) if isinstance(state, dict) else {}

    tg = _require(doc, "time_grid", sector)
    try:
        t_max = float(tg["t_max"])
        samples = int(tg["samples"])
    except (KeyError, TypeError, ValueError) as exc:
        raise ConfigError(f"time_grid needs numeric t_max and samples: {exc}") from exc
    if t_max <= 0.0 or samples < 2:
        raise ConfigError("time_grid needs t_max > 0 and samples >= 2")

    alphas = tuple(float(a) for a in (doc.get("alpha") or ()))
    if any(a <= 0.0 for a in alphas):
        raise ConfigError("alpha values must be positive")

    phase_grid = None
    position_grid = None
    classical_grid = None
    if sector == "classical":
        phase_grid = _grid_section(
            _require(doc, "grid", sector),
            ("q_min", "q_max", "p_min", "p_max", "nq", "np"),
            "grid",
        )
    if sector in ("wigner", "hbar_sweep"):
        position_grid = _grid_section(
            _require(doc, "position_grid", sector),
            ("x_min", "x_max", "n"),
            "position_grid",
        )
    if sector == "hbar_sweep":
        classical_grid = _grid_section(
            _require(doc, "classical_grid", sector),
            ("q_min", "q_max", "p_min", "p_max", "nq", "np"),
            "classical_grid",
        )

    hbars = tuple(float(h) for h in (doc.get("hbars") or ()))
    envelope_sigma_sq = doc.get("envelope_sigma_sq")
    if sector == "hbar_sweep":
        if len(hbars) < 2:
            raise ConfigError("sector 'hbar_sweep' requires an hbars list (>= 2)")
        if envelope_sigma_sq is None:
            raise ConfigError("sector 'hbar_sweep' requires envelope_sigma_sq")
        envelope_sigma_sq = float(envelope_sigma_sq)
        if envelope_sigma_sq <= 0.0:
            raise ConfigError("envelope_sigma_sq must be positive")

    steps = float(doc.get("steps_per_unit_time", 16.0))
    if steps <= 0.0:
        raise ConfigError("steps_per_unit_time must be positive")

    return ScenarioConfig(
        name=name,
        sector=sector,
        hbar=hbar,
        seed=seed,
        system_matrix=system_matrix,
        polynomial_terms=polynomial_terms,
        initial_state=state,
        t_max=t_max,
        samples=samples,
        alphas=alphas,
        omega=omega,
        phase_grid=phase_grid,
        position_grid=position_grid,
        classical_grid=classical_grid,
        hbars=hbars,
        envelope_sigma_sq=envelope_sigma_sq,
        steps_per_unit_time=steps,
        raw=doc,
    )
