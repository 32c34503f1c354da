"""Flat ``key = value`` run configuration.

Example::

    # two-step walk with broken parity
    run.command = spectral
    walk.m = 2
    walk.coin1.theta = pi/4
    walk.coin2.theta = pi/6
    walk.coin1.phi2 = pi/5
    run.n_omega = 256

Angles accept arithmetic with ``pi`` (or ``π``), e.g. ``pi - 0.43``.
Blank lines and ``#`` comments are ignored.  Unknown keys are rejected.
A sweep (``sweep.key`` plus comma-separated ``sweep.values``) expands into
one run per value.
"""

from __future__ import annotations

import ast
import math
import operator
import re
from dataclasses import dataclass, field, replace

from .errors import LengthMismatch, MissingRequired, ParseError, UnknownKey
from .walk import CoinParams, WalkSpec

__all__ = ["COMMANDS", "RunConfig", "parse_config", "parse_value", "expand_sweep"]

COMMANDS = ("bands", "magnetize", "spectral", "symmetry", "evolve", "spectroscopy")

# key -> (attribute, type)
_RUN_KEYS = {
    "run.command": ("command", str),
    "run.out": ("out", str),
    "run.format": ("format", str),
    "run.n_k": ("n_k", int),
    "run.n_omega": ("n_omega", int),
    "run.N": ("N", int),
    "run.T_periods": ("T_periods", int),
    "run.tau_max": ("tau_max", int),
    "run.seed": ("seed", int),
    "run.n_scan": ("n_scan", int),
    "run.refine_tol": ("refine_tol", float),
    "run.edge_eps": ("edge_eps", float),
    "run.angle_tol": ("angle_tol", float),
    "run.n_K": ("n_K", int),
    "run.n_G": ("n_G", int),
    "run.n_k_search": ("n_k_search", int),
    "run.residual_cut": ("residual_cut", float),
    "spectroscopy.omega0": ("omega0", float),
    "spectroscopy.alpha_r": ("alpha_r", float),
    "spectroscopy.gamma": ("gamma", float),
    "spectroscopy.chi": ("chi", float),
    "spectroscopy.c_m": ("c_m", float),
    "spectroscopy.n_points": ("n_points", int),
    "spectroscopy.span": ("span", float),
    "spectroscopy.noise": ("noise", float),
    "sweep.key": ("sweep_key", str),
    "sweep.values": ("sweep_values", str),
}
_POSITIVE = {
    "n_k", "n_omega", "N", "T_periods", "n_scan", "refine_tol", "edge_eps", "angle_tol",
    "n_K", "n_G", "n_k_search", "residual_cut", "gamma", "n_points", "span",
}
_COIN_RE = re.compile(r"^walk\.coin(\d+)\.(theta|phi|phi1|phi2)$")


@dataclass(frozen=True)
class RunConfig:
    walk: WalkSpec
    command: str
    out: str | None = None
    format: str = "csv"
    n_k: int = 512
    n_omega: int = 256
    N: int = 64
    T_periods: int = 4096
    tau_max: int | None = None
    seed: int = 0
    n_scan: int = 4096
    refine_tol: float = 1e-12
    edge_eps: float = 1e-8
    angle_tol: float = 1e-9
    n_K: int = 128
    n_G: int = 128
    n_k_search: int = 512
    residual_cut: float = 1e-6
    omega0: float | None = None
    alpha_r: float = 0.8e-4
    gamma: float = 0.01
    chi: float = 0.01
    c_m: float | None = None
    n_points: int = 401
    span: float = 10.0
    noise: float = 0.0
    sweep_key: str | None = None
    sweep_values: str | None = None
    entries: dict = field(default_factory=dict, repr=False, compare=False)

    @property
    def tau_max_periods(self) -> int:
        return self.T_periods if self.tau_max is None else self.tau_max


_BINOPS = {
    ast.Add: operator.add,
    ast.Sub: operator.sub,
    ast.Mult: operator.mul,
    ast.Div: operator.truediv,
    ast.Pow: operator.pow,
}
_UNOPS = {ast.UAdd: operator.pos, ast.USub: operator.neg}


def _eval_node(node):
    if isinstance(node, ast.Expression):
        return _eval_node(node.body)
    if isinstance(node, ast.Constant) and isinstance(node.value, (int, float)):
        return node.value
    if isinstance(node, ast.Name) and node.id in ("pi", "π"):
        return math.pi
    if isinstance(node, ast.BinOp) and type(node.op) in _BINOPS:
        return _BINOPS[type(node.op)](_eval_node(node.left), _eval_node(node.right))
    if isinstance(node, ast.UnaryOp) and type(node.op) in _UNOPS:
        return _UNOPS[type(node.op)](_eval_node(node.operand))
    raise ValueError("unsupported expression")


def parse_value(text: str, kind=float):
    """Parse a literal; numbers may be arithmetic expressions in ``pi``."""
    text = text.strip()
    if kind is str:
        return text
    try:
        val = _eval_node(ast.parse(text, mode="eval"))
    except (SyntaxError, ValueError, ZeroDivisionError, TypeError) as exc:
        raise ValueError(f"cannot parse {text!r} as a number") from exc
    if kind is int:
        if float(val) != int(val):
            raise ValueError(f"{text!r} is not an integer")
        return int(val)
    return float(val)


def _read_entries(text: str) -> dict[str, tuple[str, int | None]]:
    entries: dict[str, tuple[str, int | None]] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ParseError(f"expected 'key = value', got {raw.strip()!r}", lineno)
        key, value = (s.strip() for s in line.split("=", 1))
        if not key:
            raise ParseError("empty key", lineno)
        if key in entries:
            raise ParseError(f"duplicate key {key!r}", lineno)
        entries[key] = (value, lineno)
    return entries


def _apply_overrides(entries, overrides):
    entries = dict(entries)
    for item in overrides or ():
        if "=" not in item:
            raise ParseError(f"override {item!r} is not of the form key=value")
        key, value = (s.strip() for s in item.split("=", 1))
        entries[key] = (value, None)
    return entries


def _build(entries: dict, command: str | None) -> RunConfig:
    def convert(key, kind):
        value, lineno = entries[key]
        try:
            return parse_value(value, kind)
        except ValueError as exc:
            raise ParseError(f"{key}: {exc}", lineno) from None

    coins: dict[int, dict[str, float]] = {}
    knobs: dict = {}
    m = None
    for key in entries:
        match = _COIN_RE.match(key)
        if match:
            coins.setdefault(int(match.group(1)), {})[match.group(2)] = convert(key, float)
        elif key == "walk.m":
            m = convert(key, int)
        elif key in _RUN_KEYS:
            attr, kind = _RUN_KEYS[key]
            knobs[attr] = convert(key, kind)
        else:
            raise UnknownKey(f"unknown configuration key {key!r}")

    if m is None:
        raise MissingRequired("walk.m is required")
    if m < 1:
        raise ParseError(f"walk.m must be >= 1, got {m}", entries["walk.m"][1])
    extra = sorted(i for i in coins if i < 1 or i > m)
    if extra:
        raise LengthMismatch(f"walk.coin{extra[0]} given but walk.m = {m}")
    for i in range(1, m + 1):
        if "theta" not in coins.get(i, {}):
            raise MissingRequired(f"walk.coin{i}.theta is required for walk.m = {m}")
    walk = WalkSpec(m, tuple(CoinParams(**coins[i]) for i in range(1, m + 1)))

    if command is not None:
        knobs["command"] = command
    if "command" not in knobs:
        raise MissingRequired("run.command is required (or pass a subcommand)")
    if knobs["command"] not in COMMANDS:
        raise ParseError(f"unknown command {knobs['command']!r}; expected one of {COMMANDS}")
    if knobs.get("format", "csv") not in ("csv", "json"):
        raise ParseError(f"run.format must be csv or json, got {knobs['format']!r}")
    for attr, val in knobs.items():
        if attr in _POSITIVE and not val > 0:
            raise ParseError(f"{attr} must be positive, got {val}")
    if knobs.get("tau_max", 0) < 0 or knobs.get("seed", 0) < 0:
        raise ParseError("run.tau_max and run.seed must be non-negative")
    return RunConfig(walk=walk, entries=entries, **knobs)


def parse_config(text: str, overrides=(), command: str | None = None) -> RunConfig:
    """Parse a configuration document; ``overrides`` are ``key=value`` strings
    applied on top (command-line ``--set``), ``command`` overrides ``run.command``."""
    entries = _apply_overrides(_read_entries(text), overrides)
    return _build(entries, command)


def expand_sweep(cfg: RunConfig) -> list[RunConfig]:
    """One config per ``sweep.values`` entry, or ``[cfg]`` without a sweep."""
    if not cfg.sweep_key:
        return [cfg]
    if not cfg.sweep_values:
        raise MissingRequired("sweep.values is required with sweep.key")
    if cfg.sweep_key.startswith("sweep."):
        raise ParseError("sweep.key cannot refer to the sweep itself")
    out = []
    for value in cfg.sweep_values.split(","):
        entries = {k: v for k, v in cfg.entries.items() if not k.startswith("sweep.")}
        entries[cfg.sweep_key] = (value.strip(), None)
        out.append(_build(entries, cfg.command))
    return [replace(c, out=cfg.out) for c in out]
