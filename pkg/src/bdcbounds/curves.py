"""Bound curves over a grid of deletion probabilities and their CSV form."""

from __future__ import annotations

import io
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

from bdcbounds import baa, bounds
from bdcbounds.exceptions import DomainError

UPPER, LOWER, REFERENCE = "upper", "lower", "reference"

# name -> (kind, description written into the CSV header)
CURVES = {
    "c1": (UPPER, "half the 2-bit block capacity"),
    "c2": (UPPER, "first-bit Markov bound, gamma=0.51"),
    "c3": (UPPER, "first-bit Markov bound, gamma=0.99"),
    "c4": (UPPER, "first-bit Markov bound, gamma=(1+d)/2"),
    "theorem2": (UPPER, "first-bit Markov bound at user gamma"),
    "tl": (UPPER, "normalized deletion-weighted f-value sum, block length L"),
    "lemma2": (UPPER, "block-length recursion extended from the largest computed L"),
    "erasure": (UPPER, "erasure channel capacity 1-d"),
    "rahmati_duman": (UPPER, "0.4143(1-d), stated for d>=0.65"),
    "one_minus_h": (REFERENCE, "1-h(d), stated for d<0.5"),
    "dg_lower": (LOWER, "Markov-input lower bound, mixture form"),
    "dm_lower": (LOWER, "Markov-input lower bound, geometric block lengths"),
}
# quoted curves that are only stated on part of [0, 1]
PARTIAL_CURVES = frozenset({"rahmati_duman", "one_minus_h"})
C2_GAMMA = 0.51
C3_GAMMA = 0.99


@dataclass(frozen=True)
class BoundCurve:
    """A bound evaluated on a d-grid.

    Quoted curves with a stated range hold ``None`` outside it; every other
    curve holds finite floats.
    """

    name: str
    kind: str
    d_grid: tuple[float, ...]
    values: tuple[float | None, ...]
    description: str = ""

    def __post_init__(self):
        if len(self.values) != len(self.d_grid):
            raise DomainError(f"curve {self.name}: {len(self.values)} values for {len(self.d_grid)} grid points")
        if any(b <= a for a, b in zip(self.d_grid, self.d_grid[1:])):
            raise DomainError(f"curve {self.name}: d grid must be strictly increasing")
        for v in self.values:
            if v is None:
                if self.name not in PARTIAL_CURVES:
                    raise DomainError(f"curve {self.name}: undefined value")
            elif not math.isfinite(v):
                raise DomainError(f"curve {self.name}: non-finite value {v!r}")


def d_grid(d_min: float, d_max: float, d_step: float) -> list[float]:
    """Points ``d_min + i * d_step`` not exceeding ``d_max``, rounded to 12 decimals."""
    if not 0.0 <= d_min < d_max <= 1.0:
        raise DomainError(f"need 0 <= d_min < d_max <= 1, got {d_min}, {d_max}")
    if not d_step > 0:
        raise DomainError(f"d_step must be positive, got {d_step}")
    count = int(math.floor((d_max - d_min) / d_step + 1e-9)) + 1
    return [min(round(d_min + i * d_step, 12), d_max) for i in range(count)]


def _map(func, items, jobs):
    if jobs > 1 and len(items) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(func, items))
    return [func(x) for x in items]


def expand_names(names, L_max: int, lemma2_steps: int = 1) -> list[str]:
    """Column names produced by a list of curve identifiers, in output order."""
    unknown = [n for n in names if n not in CURVES]
    if unknown:
        raise DomainError(f"unknown bound identifier(s): {', '.join(unknown)}")
    cols = []
    for name in names:
        if name == "tl":
            cols += [f"t{L}" for L in range(1, L_max + 1)]
        elif name == "lemma2":
            cols += [f"u{L_max + k}" for k in range(1, lemma2_steps + 1)]
        else:
            cols.append(name)
    return cols


def compute_curves(names, grid, *, gamma: float | None = None, L_max: int = 6,
                   tol: float = baa.DEFAULT_TOL, lemma2_steps: int = 1,
                   jobs: int = 1) -> list[BoundCurve]:
    """Evaluate the requested curves; output order follows ``names``."""
    expand_names(names, L_max, lemma2_steps)
    if "theorem2" in names and gamma is None:
        raise DomainError("the theorem2 curve needs a gamma value")
    grid = list(grid)
    fvals = None
    if "tl" in names or "lemma2" in names:
        fvals = baa.f_values(baa.f_table(L_max, tol=tol, jobs=jobs))

    simple = {
        "c1": bounds.theorem1_bound,
        "c2": lambda d: bounds.theorem2_bound(d, C2_GAMMA),
        "c3": lambda d: bounds.theorem2_bound(d, C3_GAMMA),
        "c4": bounds.c4_bound,
        "theorem2": lambda d: bounds.theorem2_bound(d, gamma),
        "erasure": lambda d: bounds.reference_bounds(d)["erasure"],
        "rahmati_duman": lambda d: bounds.reference_bounds(d)["rahmati_duman"],
        "one_minus_h": lambda d: bounds.reference_bounds(d)["one_minus_h"],
    }
    out = []
    for name in names:
        kind, desc = CURVES[name]
        if name in simple:
            out.append(BoundCurve(name, kind, tuple(grid), tuple(simple[name](d) for d in grid), desc))
        elif name == "dg_lower":
            out.append(BoundCurve(name, kind, tuple(grid), tuple(_map(bounds.dg_lower_bound, grid, jobs)), desc))
        elif name == "dm_lower":
            out.append(BoundCurve(name, kind, tuple(grid), tuple(_map(bounds.dm_lower_bound, grid, jobs)), desc))
        elif name == "tl":
            for L in range(1, L_max + 1):
                vals = tuple(bounds.t_L(L, d, fvals) for d in grid)
                out.append(BoundCurve(f"t{L}", kind, tuple(grid), vals, f"{desc}={L}"))
        elif name == "lemma2":
            ext = [bounds.lemma2_extend(bounds.t_L(L_max, d, fvals), L_max, d, lemma2_steps) for d in grid]
            for k in range(lemma2_steps):
                out.append(BoundCurve(f"u{L_max + k + 1}", kind, tuple(grid), tuple(e[k] for e in ext),
                                      f"{desc} (L={L_max}) to L={L_max + k + 1}"))
    return out


def _fmt(v: float | None) -> str:
    if v is None:
        return ""
    return format(v + 0.0, ".12g")


def curves_to_csv(curves: list[BoundCurve], provenance: dict[str, object] | None = None) -> str:
    """CSV with a ``d`` column and one column per curve, plus ``#`` comment lines."""
    if not curves:
        raise DomainError("nothing to export")
    grid = curves[0].d_grid
    if any(c.d_grid != grid for c in curves):
        raise DomainError("all curves must share one d grid")
    buf = io.StringIO()
    buf.write("# bdcbounds capacity-bound curves\n")
    if provenance:
        buf.write("# config: " + " ".join(f"{k}={v}" for k, v in provenance.items()) + "\n")
    buf.write("# kind: " + " ".join(f"{c.name}={c.kind}" for c in curves) + "\n")
    for c in curves:
        buf.write(f"# {c.name}: {c.description}\n")
    buf.write(",".join(["d", *(c.name for c in curves)]) + "\n")
    for i, d in enumerate(grid):
        buf.write(",".join([_fmt(d), *(_fmt(c.values[i]) for c in curves)]) + "\n")
    return buf.getvalue()


def read_curves_csv(text: str) -> tuple[dict[str, str], dict[str, list[float | None]]]:
    """Parse an exported CSV back into ``(kinds, columns)``."""
    kinds: dict[str, str] = {}
    rows = []
    for line in text.splitlines():
        if line.startswith("# kind: "):
            kinds = dict(item.split("=", 1) for item in line[len("# kind: "):].split())
        elif line and not line.startswith("#"):
            rows.append(line.split(","))
    header, body = rows[0], rows[1:]
    columns = {h: [float(r[i]) if r[i] else None for r in body] for i, h in enumerate(header)}
    return kinds, columns
