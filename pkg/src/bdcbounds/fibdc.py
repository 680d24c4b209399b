"""Exact transition matrices of the finite-length deletion channels.

``build_fifo_matrix(L, R)`` conditions on exactly ``R`` received bits, so its
entries are occurrence counts divided by ``C(L, R)`` and do not depend on ``d``.
``build_fi_matrix(L, d)`` keeps every output length ``0..L``.

Inputs are the ``2**L`` strings in lexicographic order. Outputs are ordered by
length (longest first), then lexicographically.
"""

from __future__ import annotations

import csv
import io
import math
import os
from dataclasses import dataclass, field

import numpy as np

from bdcbounds import _kernels
from bdcbounds.bitseq import all_strings, check_prob
from bdcbounds.exceptions import DomainError

MAX_FIFO_L = 12
MAX_FI_L = 11
ROW_SUM_TOL = 1e-12


@dataclass(frozen=True, eq=False)
class ChannelMatrix:
    input_labels: tuple[str, ...]
    output_labels: tuple[str, ...]
    entries: np.ndarray = field(repr=False)

    def __post_init__(self):
        w = np.array(self.entries, dtype=np.float64)
        if w.shape != (len(self.input_labels), len(self.output_labels)):
            raise DomainError(
                f"entries have shape {w.shape}, labels give "
                f"{(len(self.input_labels), len(self.output_labels))}"
            )
        if np.any(w < 0) or np.any(w > 1):
            raise DomainError("transition probabilities must lie in [0, 1]")
        worst = np.max(np.abs(w.sum(axis=1) - 1.0)) if w.size else 0.0
        if worst > ROW_SUM_TOL:
            raise DomainError(f"rows must sum to 1 (worst deviation {worst:.3g})")
        w.flags.writeable = False
        object.__setattr__(self, "input_labels", tuple(self.input_labels))
        object.__setattr__(self, "output_labels", tuple(self.output_labels))
        object.__setattr__(self, "entries", w)

    @property
    def shape(self) -> tuple[int, int]:
        return self.entries.shape

    def prob(self, x: str, y: str) -> float:
        return float(
            self.entries[self.input_labels.index(x), self.output_labels.index(y)]
        )

    def to_csv(self, dest=None) -> str | None:
        """Write the matrix as CSV (17 significant digits).

        With ``dest=None`` the CSV text is returned instead of written.
        """
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["input", *self.output_labels])
        for label, row in zip(self.input_labels, self.entries):
            writer.writerow([label, *(format(v, ".17g") for v in row)])
        text = buf.getvalue()
        if dest is None:
            return text
        if isinstance(dest, (str, os.PathLike)):
            with open(dest, "w", newline="") as fh:
                fh.write(text)
        else:
            dest.write(text)
        return None


def output_alphabet(L: int) -> list[str]:
    """Every output string of an ``L``-bit block, longest first."""
    labels = []
    for r in range(L, -1, -1):
        labels.extend(all_strings(r))
    return labels


def _check_L(L: int, cap: int) -> int:
    if int(L) != L or L < 1:
        raise DomainError(f"L must be a positive integer, got {L!r}")
    if L > cap:
        raise DomainError(f"L={L} exceeds the configured cap {cap}")
    return int(L)


def build_fifo_matrix(L: int, R: int, max_L: int = MAX_FIFO_L) -> ChannelMatrix:
    L = _check_L(L, max_L)
    if int(R) != R or not 0 <= R <= L:
        raise DomainError(f"need 0 <= R <= L, got L={L}, R={R!r}")
    counts = _kernels.subsequence_table(L, int(R))
    return ChannelMatrix(all_strings(L), all_strings(R), counts / math.comb(L, R))


def build_fi_matrix(L: int, d: float, max_L: int = MAX_FI_L) -> ChannelMatrix:
    L = _check_L(L, max_L)
    d = check_prob(d, "d")
    blocks = []
    for r in range(L, -1, -1):
        counts = _kernels.subsequence_table(L, r)
        blocks.append(counts * ((1.0 - d) ** r * d ** (L - r)))
    return ChannelMatrix(all_strings(L), output_alphabet(L), np.hstack(blocks))


def length_block(ch: ChannelMatrix, R: int) -> np.ndarray:
    """Columns of an FI matrix whose output label has length ``R``."""
    cols = [j for j, y in enumerate(ch.output_labels) if len(y) == R]
    return ch.entries[:, cols]
