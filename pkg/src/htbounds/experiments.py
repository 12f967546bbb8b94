"""Grid experiments: evaluate bounds over a sweep of sample sizes.

A grid pairs one distribution pair and one Type I error regime with a
set of sample sizes and a selection of bounds; running it produces a
table that can be serialized to CSV (byte-deterministic) or rendered to
a standalone SVG plot.  Rows are computed in a thread pool sized by the
HYPOTEST_THREADS environment variable (default: CPU count); results are
ordered by n regardless of scheduling.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

from .bounds import (
    ErrorRegime,
    Exponential,
    Linear,
    berry_esseen_bound,
    eps_at,
    fano_bound,
    hellinger_bound,
    phase_transition_achievability,
    phase_transition_converse,
    renyi_achievability_at_threshold,
    renyi_converse,
    smoothing_out_bound,
    threshold_for_rate,
)
from .distributions import (
    BernoulliPair,
    FiniteDiscretePair,
    GaussianPair,
    parse_pair,
)
from .numerics import DomainError
from .oracle import (
    np_exact_bernoulli,
    np_exact_discrete_bruteforce,
    np_exact_gaussian,
)

__all__ = [
    "CANONICAL_BOUNDS",
    "ConfigError",
    "ExperimentGrid",
    "GridCell",
    "GridRow",
    "GridTable",
    "emit_csv",
    "emit_svg",
    "run_grid",
]

# Column order in tables, CSV files, and plot legends.
CANONICAL_BOUNDS = (
    "renyi_converse",
    "achievability",
    "phase_converse",
    "phase_achievability",
    "fano",
    "hellinger",
    "berry_esseen",
    "smoothing_out",
    "np_exact",
)


class ConfigError(ValueError):
    """The experiment grid is malformed or infeasible as configured."""


@dataclass(frozen=True)
class ExperimentGrid:
    """Specification of one sweep: pair, regime, sample sizes, bounds."""

    pair_spec: str
    regime: ErrorRegime
    n_values: tuple = ()
    bounds: tuple = CANONICAL_BOUNDS

    def __post_init__(self) -> None:
        ns = tuple(int(n) for n in self.n_values)
        if not ns:
            raise ConfigError("n_values must be non-empty")
        if any(b <= a for a, b in zip(ns, ns[1:])) or ns[0] < 1:
            raise ConfigError("n_values must be strictly increasing positive integers")
        object.__setattr__(self, "n_values", ns)
        unknown = [b for b in self.bounds if b not in CANONICAL_BOUNDS]
        if unknown:
            raise ConfigError(f"unknown bounds {unknown!r}; choose from {CANONICAL_BOUNDS}")
        ordered = tuple(b for b in CANONICAL_BOUNDS if b in self.bounds)
        object.__setattr__(self, "bounds", ordered)


@dataclass(frozen=True)
class GridCell:
    """One bound at one n: value, optimizing parameter, validity.

    value is None when the bound is undefined at this point (out of its
    regime, unsupported family); such cells are empty in CSV and break
    the curve in plots.
    """

    value: float | None
    optimizer: float | None
    valid: bool


@dataclass(frozen=True)
class GridRow:
    n: int
    eps: float
    log_eps: float
    cells: tuple = field(default_factory=tuple)


@dataclass(frozen=True)
class GridTable:
    pair_spec: str
    bounds: tuple
    rows: tuple


def _thread_count() -> int:
    raw = os.environ.get("HYPOTEST_THREADS")
    if raw is None:
        return os.cpu_count() or 1
    try:
        count = int(raw)
    except ValueError:
        raise ConfigError(f"HYPOTEST_THREADS must be an integer, got {raw!r}") from None
    if count < 1:
        raise ConfigError(f"HYPOTEST_THREADS must be >= 1, got {count}")
    return count


def _rate(regime: ErrorRegime, n: int, log_eps: float) -> float:
    # Effective exponential rate at this row; exact in the exponential
    # regime, -log(eps)/n otherwise so the phase columns stay defined.
    if isinstance(regime, Exponential):
        return regime.c
    return -log_eps / n


def _np_exact_cell(pair, n, eps, log_eps) -> GridCell:
    if isinstance(pair, GaussianPair):
        r = np_exact_gaussian(pair, n, log_eps)
    elif isinstance(pair, BernoulliPair):
        r = np_exact_bernoulli(pair, n, log_eps)
    else:
        r = np_exact_discrete_bruteforce(pair, n, eps)
    return GridCell(r.beta, r.threshold, True)


def _cell(name, pair, regime, n, eps, log_eps) -> GridCell:
    try:
        if name == "renyi_converse":
            b = renyi_converse(pair, n, log_eps)
        elif name == "achievability":
            c = _rate(regime, n, log_eps)
            pa = phase_transition_achievability(pair, n, c)
            tau = threshold_for_rate(pair, n, c, pa.optimizer)
            b = renyi_achievability_at_threshold(pair, n, tau, -math.inf)
        elif name == "phase_converse":
            b = phase_transition_converse(pair, n, _rate(regime, n, log_eps))
        elif name == "phase_achievability":
            b = phase_transition_achievability(pair, n, _rate(regime, n, log_eps))
        elif name == "fano":
            b = fano_bound(pair, n, log_eps)
        elif name == "hellinger":
            b = hellinger_bound(pair, n, log_eps)
        elif name == "berry_esseen":
            b = berry_esseen_bound(pair, n, log_eps)
        elif name == "smoothing_out":
            b = smoothing_out_bound(pair, n, log_eps)
        else:
            return _np_exact_cell(pair, n, eps, log_eps)
    except DomainError:
        return GridCell(None, None, False)
    return GridCell(b.value, b.optimizer, b.valid)


def run_grid(grid: ExperimentGrid) -> GridTable:
    """Evaluate every configured bound at every n; rows come back in n order."""
    pair = parse_pair(grid.pair_spec)
    if "smoothing_out" in grid.bounds and not isinstance(pair, GaussianPair):
        raise ConfigError("smoothing_out applies to Gaussian pairs only")
    if isinstance(regime := grid.regime, Linear) and grid.n_values[0] < 2:
        raise ConfigError("linear regime requires every n >= 2")
    if "np_exact" in grid.bounds and isinstance(pair, FiniteDiscretePair):
        n_max = grid.n_values[-1]
        support = sum(1 for m in pair.p0 if m > 0.0)
        if n_max > 14 or support**n_max > 10_000_000:
            raise ConfigError(
                f"np_exact by brute force cannot enumerate {support}^{n_max} samples"
            )

    def row(n: int) -> GridRow:
        eps, log_eps = eps_at(regime, n)
        cells = tuple(_cell(b, pair, regime, n, eps, log_eps) for b in grid.bounds)
        return GridRow(n, eps, log_eps, cells)

    with ThreadPoolExecutor(max_workers=_thread_count()) as ex:
        rows = tuple(ex.map(row, grid.n_values))
    return GridTable(grid.pair_spec, grid.bounds, rows)


def _fmt(x: float) -> str:
    return format(x, ".17g")


def emit_csv(table: GridTable, path: str) -> None:
    """Write the table as CSV; identical tables produce identical bytes.

    Columns: n, eps, log_eps, then value/optimizer/valid per bound.
    Floats use repr-roundtrip precision; empty cells stay empty.
    """
    if not table.rows:
        raise ConfigError("cannot serialize an empty table")
    header = ["n", "eps", "log_eps"]
    for b in table.bounds:
        header += [f"{b}_value", f"{b}_optimizer", f"{b}_valid"]
    lines = [",".join(header)]
    for row in table.rows:
        rec = [str(row.n), _fmt(row.eps), _fmt(row.log_eps)]
        for cell in row.cells:
            rec.append("" if cell.value is None else _fmt(cell.value))
            rec.append("" if cell.optimizer is None else _fmt(cell.optimizer))
            rec.append("true" if cell.valid else "false")
        lines.append(",".join(rec))
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write("\n".join(lines) + "\n")


_PALETTE = {
    "renyi_converse": "#d62728",
    "achievability": "#9467bd",
    "phase_converse": "#e377c2",
    "phase_achievability": "#8c564b",
    "fano": "#1f77b4",
    "hellinger": "#2ca02c",
    "berry_esseen": "#ff7f0e",
    "smoothing_out": "#17becf",
    "np_exact": "#000000",
}

_W, _H = 880, 540
_ML, _MR, _MT, _MB = 70, 230, 40, 50


def _ticks(lo: float, hi: float, count: int = 6) -> list[float]:
    if hi <= lo:
        return [lo]
    raw = (hi - lo) / count
    mag = 10.0 ** math.floor(math.log10(raw))
    step = min(s for s in (mag, 2 * mag, 5 * mag, 10 * mag) if s >= raw)
    first = math.ceil(lo / step) * step
    return [first + i * step for i in range(int((hi - first) / step) + 1)]


def emit_svg(table: GridTable, path: str, log_y: bool = False, title: str = "") -> None:
    """Render the table as a standalone SVG line plot, one polyline per bound.

    Each curve carries a data-bound attribute with the bound name.  With
    log_y, zero and negative values are dropped (gaps in the curve) and
    the legend says so.  A bound with no plottable point is listed in the
    legend as having none.  Needs at least two rows.
    """
    if len(table.rows) < 2:
        raise ConfigError("plot needs at least two rows")
    ns = [row.n for row in table.rows]
    x_lo, x_hi = float(ns[0]), float(ns[-1])

    def y_of(v: float | None) -> float | None:
        if v is None:
            return None
        if log_y:
            return math.log10(v) if v > 0.0 else None
        return v

    series: dict[str, list[list[tuple[float, float]]]] = {}
    y_all: list[float] = []
    for j, b in enumerate(table.bounds):
        segs: list[list[tuple[float, float]]] = [[]]
        for row in table.rows:
            y = y_of(row.cells[j].value)
            if y is None:
                if segs[-1]:
                    segs.append([])
                continue
            segs[-1].append((float(row.n), y))
            y_all.append(y)
        series[b] = [s for s in segs if len(s) >= 1]
    if y_all:
        y_lo, y_hi = min(y_all), max(y_all)
    else:
        y_lo, y_hi = 0.0, 1.0
    if y_hi - y_lo < 1.0e-12:
        y_lo, y_hi = y_lo - 0.5, y_hi + 0.5
    pad = 0.04 * (y_hi - y_lo)
    y_lo, y_hi = y_lo - pad, y_hi + pad

    def sx(x: float) -> float:
        return _ML + (x - x_lo) / (x_hi - x_lo) * (_W - _ML - _MR)

    def sy(y: float) -> float:
        return _H - _MB - (y - y_lo) / (y_hi - y_lo) * (_H - _MT - _MB)

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_W}" height="{_H}" '
        f'viewBox="0 0 {_W} {_H}" version="1.1">',
        f'<rect width="{_W}" height="{_H}" fill="#ffffff"/>',
    ]
    if title:
        parts.append(
            f'<text x="{_ML}" y="24" font-family="sans-serif" font-size="15">{title}</text>'
        )
    ax = 'stroke="#444444" stroke-width="1"'
    parts.append(f'<line x1="{_ML}" y1="{_H - _MB}" x2="{_W - _MR}" y2="{_H - _MB}" {ax}/>')
    parts.append(f'<line x1="{_ML}" y1="{_MT}" x2="{_ML}" y2="{_H - _MB}" {ax}/>')
    for t in _ticks(x_lo, x_hi):
        x = sx(t)
        parts.append(f'<line x1="{x:.2f}" y1="{_H - _MB}" x2="{x:.2f}" y2="{_H - _MB + 5}" {ax}/>')
        parts.append(
            f'<text x="{x:.2f}" y="{_H - _MB + 18}" font-family="sans-serif" font-size="11" '
            f'text-anchor="middle">{t:g}</text>'
        )
    for t in _ticks(y_lo, y_hi):
        y = sy(t)
        parts.append(f'<line x1="{_ML - 5}" y1="{y:.2f}" x2="{_ML}" y2="{y:.2f}" {ax}/>')
        label = f"1e{t:g}" if log_y else f"{t:g}"
        parts.append(
            f'<text x="{_ML - 8}" y="{y + 4:.2f}" font-family="sans-serif" font-size="11" '
            f'text-anchor="end">{label}</text>'
        )
    parts.append(
        f'<text x="{(_ML + _W - _MR) / 2:.2f}" y="{_H - 12}" font-family="sans-serif" '
        f'font-size="12" text-anchor="middle">n</text>'
    )
    legend_y = _MT + 10
    for b in table.bounds:
        color = _PALETTE[b]
        drew = False
        for seg in series.get(b, []):
            if len(seg) == 1:
                x, y = seg[0]
                parts.append(
                    f'<circle data-bound="{b}" cx="{sx(x):.2f}" cy="{sy(y):.2f}" r="2.5" '
                    f'fill="{color}"/>'
                )
                drew = True
                continue
            pts = " ".join(f"{sx(x):.2f},{sy(y):.2f}" for x, y in seg)
            parts.append(
                f'<polyline data-bound="{b}" fill="none" stroke="{color}" '
                f'stroke-width="1.5" points="{pts}"/>'
            )
            drew = True
        note = "" if drew else " (no valid points)"
        parts.append(
            f'<line x1="{_W - _MR + 12}" y1="{legend_y - 4}" x2="{_W - _MR + 34}" '
            f'y2="{legend_y - 4}" stroke="{color}" stroke-width="2"/>'
        )
        parts.append(
            f'<text x="{_W - _MR + 40}" y="{legend_y}" font-family="sans-serif" '
            f'font-size="12">{b}{note}</text>'
        )
        legend_y += 18
    if log_y:
        parts.append(
            f'<text x="{_W - _MR + 12}" y="{legend_y + 4}" font-family="sans-serif" '
            f'font-size="10" fill="#666666">log scale; zeros omitted</text>'
        )
    parts.append("</svg>")
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write("\n".join(parts) + "\n")
