"""Generated unitarity checker for any number of tapes.

The full condition set for a k-tape table is indexed by head-displacement
vectors D in {0,+-1,+-2}^k whose first nonzero component is positive:

* D = 0 stands for the normalization/orthogonality pair over reads
  (every read has unit outgoing mass; distinct reads have orthogonal
  outgoing amplitude vectors).
* D != 0 demands, for every pair of reads and every independent choice of
  write symbols on the displaced tapes, that the sum over the written state,
  over shared write symbols on non-displaced tapes, and over all move-vector
  pairs (d, d') with d - d' = D vanishes.

That yields 1 + (5^k - 1)/2 condition ids expanding to 1 + (5^k + 1)/2
evaluated conditions: 4 for one tape, 14 for two, 64 for three, 314 for four.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .conditions import (
    DEFAULT_TOLERANCE,
    ConditionId,
    ConditionResidual,
    ValidationReport,
)
from .frame import MOVES, TuringFrame
from .table import TransitionTable

# Classic labels for the zero-displacement pair and, where a classic numbering
# exists, for the displacement conditions: letters a-d for one tape, numbers
# 1-14 for two tapes (displacement (D1, D2) carries number 5*D1 + D2 + 2).
_SINGLE_TAPE_LABELS = {(1,): "c", (2,): "d"}
_TWO_TAPE_LABELS = {
    (0, 1): "3", (0, 2): "4",
    (1, -2): "5", (1, -1): "6", (1, 0): "7", (1, 1): "8", (1, 2): "9",
    (2, -2): "10", (2, -1): "11", (2, 0): "12", (2, 1): "13", (2, 2): "14",
}


def displacement_label(displacement: tuple[int, ...], part: str | None = None) -> str:
    """Report label for a condition: classic letter/number when one exists."""
    k = len(displacement)
    if all(d == 0 for d in displacement):
        if part == "norm":
            return "a" if k == 1 else "1"
        if part == "orth":
            return "b" if k == 1 else "2"
        return ("a" if k == 1 else "1") + "+" + ("b" if k == 1 else "2")
    if k == 1:
        return _SINGLE_TAPE_LABELS[displacement]
    if k == 2:
        return _TWO_TAPE_LABELS[displacement]
    return "D=(" + ",".join(str(d) for d in displacement) + ")"


def _valid_displacements(k: int) -> list[tuple[int, ...]]:
    out = []
    for vec in itertools.product((-2, -1, 0, 1, 2), repeat=k):
        first = next((d for d in vec if d != 0), 0)
        if first in (1, 2):
            out.append(vec)
    return out


def generate_ktape_conditions(frame: TuringFrame) -> list[ConditionId]:
    """All condition ids for the frame: the zero vector first (it expands to
    the normalization/orthogonality pair), then every valid displacement in
    lexicographic order."""
    k = frame.tape_count
    zero = (0,) * k
    ids = [ConditionId("ktape", displacement_label(zero), zero)]
    for vec in _valid_displacements(k):
        ids.append(ConditionId("ktape", displacement_label(vec), vec))
    return ids


def expand_condition_ids(ids: list[ConditionId]) -> list[ConditionId]:
    """Expand the zero id into its normalization and orthogonality halves."""
    out = []
    for cid in ids:
        if cid.displacement is not None and all(d == 0 for d in cid.displacement) and cid.part is None:
            out.append(ConditionId("ktape", displacement_label(cid.displacement, "norm"),
                                   cid.displacement, "norm"))
            out.append(ConditionId("ktape", displacement_label(cid.displacement, "orth"),
                                   cid.displacement, "orth"))
        else:
            out.append(cid)
    return out


def condition_count(k: int) -> int:
    """Evaluated conditions for k tapes: 1 + (5^k + 1)/2."""
    return 1 + (5 ** k + 1) // 2


def _move_pairs(delta: int) -> list[tuple[int, int]]:
    return [(d, d2) for d in MOVES for d2 in MOVES if d - d2 == delta]


def _split_amplitudes(table: TransitionTable) -> np.ndarray:
    """View with the write vector and move vector split into per-tape axes:
    (Q, S, Q, T1..Tk, 3..3)."""
    frame = table.frame
    shape = (frame.state_count, frame.symbol_block, frame.state_count)
    shape += frame.symbol_counts + (3,) * frame.tape_count
    return table.amplitudes.reshape(shape)


def _read_witness(frame: TuringFrame, q: int, sflat: int, primed: bool = False):
    mark = "'" if primed else ""
    vec = frame.symbol_vector(sflat)
    names = tuple(frame.symbol_name(i, s) for i, s in enumerate(vec))
    sigma = names[0] if frame.tape_count == 1 else "(" + ",".join(names) + ")"
    return (("q" + mark, frame.states[q]), ("sigma" + mark, sigma))


def _zero_displacement_grams(table: TransitionTable) -> np.ndarray:
    """G[(q,s),(q',s')] = sum over rules of delta(q,s,.) * conj(delta(q',s',.))."""
    frame = table.frame
    rows = frame.state_count * frame.symbol_block
    m = table.amplitudes.reshape(rows, -1)
    return m @ m.conj().T


def _eval_zero(table: TransitionTable, part: str) -> tuple[float, tuple | None]:
    frame = table.frame
    gram = _zero_displacement_grams(table)
    rows = gram.shape[0]
    S = frame.symbol_block
    if part == "norm":
        resid = np.abs(np.diagonal(gram) - 1.0)
        i = int(np.argmax(resid))
        return float(resid[i]), _read_witness(frame, i // S, i % S)
    offdiag = np.abs(gram)
    np.fill_diagonal(offdiag, -1.0)
    if rows < 2:
        return 0.0, None
    flat = int(np.argmax(offdiag))
    i, j = divmod(flat, rows)
    witness = _read_witness(frame, i // S, i % S) + _read_witness(frame, j // S, j % S, primed=True)
    return float(offdiag[i, j]), witness


def _eval_displacement(table: TransitionTable, displacement: tuple[int, ...]) -> tuple[float, tuple | None]:
    frame = table.frame
    k = frame.tape_count
    split = _split_amplitudes(table)
    independent = [i for i in range(k) if displacement[i] != 0]
    shared = [i for i in range(k) if displacement[i] == 0]

    # einsum labels (integer form): q=0, s=1, p=2, q'=3, s'=4,
    # write axes 10+i (unprimed / shared), 30+i (primed independent).
    x_sub = [0, 1, 2] + [10 + i for i in range(k)]
    y_sub = [3, 4, 2] + [(10 + i) if i in shared else (30 + i) for i in range(k)]
    out_sub = [0, 1] + [10 + i for i in independent] + [3, 4] + [30 + i for i in independent]

    gram = None
    combos = [_move_pairs(displacement[i]) for i in range(k)]
    for choice in itertools.product(*combos):
        d_vec = tuple(pair[0] + 1 for pair in choice)
        d2_vec = tuple(pair[1] + 1 for pair in choice)
        x = split[(slice(None),) * (3 + k) + d_vec]
        y = split[(slice(None),) * (3 + k) + d2_vec]
        term = np.einsum(x, x_sub, y.conj(), y_sub, out_sub)
        gram = term if gram is None else gram + term

    mags = np.abs(gram)
    if mags.size == 0:
        return 0.0, None
    flat = int(np.argmax(mags))
    idx = np.unravel_index(flat, mags.shape)
    half = 2 + len(independent)
    q, s = int(idx[0]), int(idx[1])
    q2, s2 = int(idx[half]), int(idx[half + 1])
    witness = _read_witness(frame, q, s)
    for pos, i in enumerate(independent):
        witness += ((f"tau_{i + 1}", frame.symbol_name(i, int(idx[2 + pos]))),)
    witness += _read_witness(frame, q2, s2, primed=True)
    for pos, i in enumerate(independent):
        witness += ((f"tau_{i + 1}'", frame.symbol_name(i, int(idx[half + 2 + pos]))),)
    return float(mags[idx]), witness


def evaluate_ktape_condition(table: TransitionTable, cid: ConditionId) -> ConditionResidual:
    """Residual of one generated condition on the table.

    For the unexpanded zero id the residual is the larger of its
    normalization and orthogonality halves.
    """
    if cid.displacement is None or len(cid.displacement) != table.frame.tape_count:
        raise ValueError("condition id does not match the table's tape count")
    if all(d == 0 for d in cid.displacement):
        if cid.part in ("norm", "orth"):
            value, witness = _eval_zero(table, cid.part)
            return ConditionResidual(cid, value, witness)
        nv, nw = _eval_zero(table, "norm")
        ov, ow = _eval_zero(table, "orth")
        if ov > nv:
            return ConditionResidual(cid, ov, ow)
        return ConditionResidual(cid, nv, nw)
    value, witness = _eval_displacement(table, cid.displacement)
    return ConditionResidual(cid, value, witness)


def check_ktape(table: TransitionTable, tolerance: float = DEFAULT_TOLERANCE) -> ValidationReport:
    """Evaluate the full generated condition set for the table's frame."""
    ids = expand_condition_ids(generate_ktape_conditions(table.frame))
    residuals = tuple(evaluate_ktape_condition(table, cid) for cid in ids)
    return ValidationReport("ktape", tolerance, residuals)


def check_auto(table: TransitionTable, tolerance: float = DEFAULT_TOLERANCE) -> ValidationReport:
    """Pick the checker by tape count: column for one tape, the fourteen
    two-tape conditions for two, the generated set otherwise."""
    from .conditions import check_column, check_two_tape

    k = table.frame.tape_count
    if k == 1:
        return check_column(table, tolerance)
    if k == 2:
        return check_two_tape(table, tolerance)
    return check_ktape(table, tolerance)
