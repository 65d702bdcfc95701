"""Brute-force verification against the condition checkers.

The oracle never looks at the condition sums: it expands basis
configurations through the evolution operator (or its adjoint) and takes
sparse inner products, so a checker bug and an oracle bug would have to
coincide to hide a wrong verdict.  Off-diagonal Gram entries can only be
nonzero for structurally close pairs (heads at distance <= 2 per tape,
tapes agreeing off the two head cells for columns; a single differing cell
next to both heads for rows), so pair enumeration is restricted to that
pattern.

This module also generates the test corpus: provably valid tables built
from unitary matrices with per-state directions, and invalid tables made
by perturbing single entries.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np
from scipy import sparse

from .conditions import DEFAULT_TOLERANCE, check_column
from .evolution import Superposition, apply, apply_adjoint
from .frame import Configuration, TuringFrame, _as_vector
from .table import TransitionTable
from .windows import ConfigurationWindow, radius_window

__all__ = [
    "ConfigurationWindow",
    "radius_window",
    "column_pairs",
    "row_pairs",
    "gram_columns",
    "gram_rows",
    "GramCheck",
    "column_gram_check",
    "row_gram_check",
    "pair_unitary_machine",
    "random_unitary",
    "perturb",
    "CorpusEntry",
    "build_corpus",
    "simple_frame",
]


def simple_frame(states: int, *symbol_counts: int) -> TuringFrame:
    """A frame with generated names: states q0.., symbols B, s1, s2.. per tape."""
    if not symbol_counts:
        symbol_counts = (1,)
    alphabets = tuple(
        tuple(["B"] + [f"s{i}" for i in range(1, n)]) for n in symbol_counts
    )
    return TuringFrame(tuple(f"q{i}" for i in range(states)), alphabets)


# ---------------------------------------------------------------------------
# Structurally-possible Gram pairs
# ---------------------------------------------------------------------------

def column_pairs(
    frame: TuringFrame, window: tuple[Configuration, ...]
) -> list[tuple[Configuration, Configuration]]:
    """Ordered pairs (C, C') inside the window whose column Gram entry can be
    nonzero: per tape, |head shift| <= 2 and contents equal off the two head
    cells.  The diagonal is excluded."""
    members = set(window)
    pairs = []
    for c in window:
        produced = set()
        per_tape = []
        for t, h, size in zip(c.tapes, c.heads, frame.symbol_counts):
            options = []
            for shift in (-2, -1, 0, 1, 2):
                h2 = h + shift
                for a in range(size):
                    for b in range(size):
                        options.append((t.write(h, a).write(h2, b), h2))
            per_tape.append(options)
        for q2 in range(frame.state_count):
            for combo in itertools.product(*per_tape):
                c2 = Configuration(q2, tuple(x for x, _ in combo), tuple(h for _, h in combo))
                if c2 != c and c2 in members and c2 not in produced:
                    produced.add(c2)
                    pairs.append((c, c2))
    return pairs


def row_pairs(
    frame: TuringFrame, window: tuple[Configuration, ...]
) -> list[tuple[Configuration, Configuration]]:
    """Ordered pairs (C, C') inside the window whose row Gram entry can be
    nonzero (single tape): |head shift| <= 2 and either equal tapes or a
    single differing cell adjacent to both heads."""
    if frame.tape_count != 1:
        raise ValueError("row pairs cover single-tape frames")
    members = set(window)
    size = frame.symbol_counts[0]
    pairs = []
    for c in window:
        produced = set()
        t, h = c.tapes[0], c.heads[0]
        candidates = []
        for shift in (-2, -1, 0, 1, 2):
            h2 = h + shift
            candidates.append((t, h2))
            for m in (h - 1, h, h + 1):
                if abs(h2 - m) > 1:
                    continue
                current = t.read(m)
                for b in range(size):
                    if b != current:
                        candidates.append((t.write(m, b), h2))
        for q2 in range(frame.state_count):
            for tape2, h2 in candidates:
                c2 = Configuration(q2, (tape2,), (h2,))
                if c2 != c and c2 in members and c2 not in produced:
                    produced.add(c2)
                    pairs.append((c, c2))
    return pairs


def _image_cache(expander):
    cache: dict[Configuration, dict[Configuration, complex]] = {}

    def image(config: Configuration) -> dict[Configuration, complex]:
        hit = cache.get(config)
        if hit is None:
            hit = {c: a for c, a in expander(Superposition.basis(config)).items()}
            cache[config] = hit
        return hit

    return image


def _sparse_inner(a: dict, b: dict) -> complex:
    """<a|b> over sparse maps, conjugating a."""
    if len(a) > len(b):
        return _sparse_inner(b, a).conjugate()
    total = 0j
    for config, amp in a.items():
        hit = b.get(config)
        if hit is not None:
            total += amp.conjugate() * hit
    return total


def gram_columns(
    table: TransitionTable, pairs: list[tuple[Configuration, Configuration]]
) -> np.ndarray:
    """For each pair (C, C'): <M C', M C>, by full expansion of both images."""
    image = _image_cache(lambda psi: apply(table, psi))
    return np.array([_sparse_inner(image(c2), image(c)) for c, c2 in pairs], dtype=np.complex128)


def gram_rows(
    table: TransitionTable, pairs: list[tuple[Configuration, Configuration]]
) -> np.ndarray:
    """For each pair (C, C'): <M† C, M† C'>, by full adjoint expansion."""
    image = _image_cache(lambda psi: apply_adjoint(table, psi))
    return np.array([_sparse_inner(image(c), image(c2)) for c, c2 in pairs], dtype=np.complex128)


@dataclass(frozen=True)
class GramCheck:
    side: str  # "columns" | "rows"
    radius: int
    tolerance: float
    diagonal_residual: float
    offdiagonal_residual: float
    witness: tuple[Configuration, Configuration] | None
    config_count: int
    pair_count: int

    @property
    def residual(self) -> float:
        return max(self.diagonal_residual, self.offdiagonal_residual)

    @property
    def passed(self) -> bool:
        return self.residual <= self.tolerance

    @property
    def verdict(self) -> str:
        return "pass" if self.passed else "fail"


def _gram_check(table, radius, tolerance, side) -> GramCheck:
    # The full Gram matrix over the window comes from one sparse A^H A
    # product, where the columns of A are the expansions of the window basis
    # states; every structurally-possible pair is covered by construction and
    # every other entry is a structural zero.
    frame = table.frame
    window = radius_window(frame, radius)
    if side == "columns":
        expander = lambda psi: apply(table, psi)
    else:
        expander = lambda psi: apply_adjoint(table, psi)

    image_ids: dict = {}
    rows, cols, vals = [], [], []
    for i, config in enumerate(window):
        for image, amp in expander(Superposition.basis(config)).items():
            rows.append(image_ids.setdefault(image, len(image_ids)))
            cols.append(i)
            vals.append(amp)
    n = len(window)
    a = sparse.csc_matrix(
        (np.asarray(vals, dtype=np.complex128), (rows, cols)),
        shape=(max(len(image_ids), 1), n),
    )
    gram = (a.conj().T @ a).tocoo()
    gram.sum_duplicates()
    # Count structurally overlapping pairs from the pattern product; exact
    # numeric cancellations would otherwise hide them.
    support = a.copy()
    support.data = np.abs(support.data)
    pattern = (support.T @ support).tocoo()
    pair_count = int((pattern.row != pattern.col).sum())

    diag_resid = np.abs(gram.tocsr().diagonal() - 1.0)
    diag = float(diag_resid.max())
    offdiag = gram.row != gram.col
    off_abs = np.abs(gram.data[offdiag])
    off = float(off_abs.max()) if off_abs.size else 0.0

    if diag >= off:
        i = int(np.argmax(diag_resid))
        witness = (window[i], window[i])
    else:
        r, c = gram.row[offdiag], gram.col[offdiag]
        ties = np.flatnonzero(off_abs == off)
        first = ties[np.lexsort((c[ties], r[ties]))[0]]
        witness = (window[r[first]], window[c[first]])

    return GramCheck(
        side=side,
        radius=radius,
        tolerance=tolerance,
        diagonal_residual=diag,
        offdiagonal_residual=off,
        witness=witness,
        config_count=n,
        pair_count=pair_count,
    )


def column_gram_check(
    table: TransitionTable, radius: int = 3, tolerance: float = DEFAULT_TOLERANCE
) -> GramCheck:
    """Isometry verdict by brute force: the column Gram matrix over the
    radius window must be the identity within tolerance."""
    return _gram_check(table, radius, tolerance, "columns")


def row_gram_check(
    table: TransitionTable, radius: int = 3, tolerance: float = DEFAULT_TOLERANCE
) -> GramCheck:
    """Co-isometry verdict by brute force over adjoint expansions (single tape)."""
    if table.frame.tape_count != 1:
        raise ValueError("row gram check covers single-tape frames")
    return _gram_check(table, radius, tolerance, "rows")


# ---------------------------------------------------------------------------
# Known-valid and known-invalid table generators
# ---------------------------------------------------------------------------

def random_unitary(dim: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-ish unitary via QR of a complex Gaussian, with fixed column phases."""
    z = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    q, r = np.linalg.qr(z)
    d = np.diagonal(r)
    return q * (d / np.abs(d))


def pair_unitary_machine(
    frame: TuringFrame, unitary: np.ndarray, directions
) -> TransitionTable:
    """Build a table from a unitary on the (state, symbol) pairs plus a
    per-state move: rule (q,s) -> (p,t) carries unitary[(p,t),(q,s)] on the
    move assigned to p, and 0 on the other moves.  The result always passes
    the column conditions, with the cross-shift conditions structurally zero.
    """
    if frame.tape_count != 1:
        raise ValueError("pair_unitary_machine covers single-tape frames")
    Q = frame.state_count
    S = frame.symbol_counts[0]
    dim = Q * S
    unitary = np.asarray(unitary, dtype=np.complex128)
    if unitary.shape != (dim, dim):
        raise ValueError(f"unitary must be {dim}x{dim} for this frame")
    defect = np.abs(unitary.conj().T @ unitary - np.eye(dim)).max()
    if defect > 1e-12:
        raise ValueError(f"matrix columns are not orthonormal (defect {defect:.3e})")
    if not isinstance(directions, dict):
        directions = {p: d for p, d in enumerate(directions)}
    moves = []
    for p in range(Q):
        if p not in directions:
            raise ValueError(f"directions must be total: state {frame.states[p]!r} has no move")
        d = directions[p]
        if d not in (-1, 0, 1):
            raise ValueError("directions must map every state to a move in {-1,0,1}")
        moves.append(d)

    amps = np.zeros((Q, S, Q, S, 3), dtype=np.complex128)
    for p in range(Q):
        block = unitary[p * S:(p + 1) * S, :].reshape(S, Q, S)
        amps[:, :, p, :, moves[p] + 1] = np.transpose(block, (1, 2, 0))
    return TransitionTable(frame, amps)


def perturb(table: TransitionTable, entry: tuple, epsilon: float) -> TransitionTable:
    """Shift one amplitude by a real epsilon; epsilon must be nonzero."""
    if epsilon == 0:
        raise ValueError("epsilon must be nonzero")
    q, sigma, p, tau, moves = entry
    old = table.amplitudes[
        q,
        table.frame.symbol_flat(_as_vector(sigma, table.frame.tape_count, "sigma")),
        p,
        table.frame.symbol_flat(_as_vector(tau, table.frame.tape_count, "tau")),
        table.frame.move_flat(_as_vector(moves, table.frame.tape_count, "moves")),
    ]
    return table.with_entry(q, sigma, p, tau, moves, complex(old) + epsilon)


# ---------------------------------------------------------------------------
# Corpus
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CorpusEntry:
    table: TransitionTable
    expect_valid: bool
    label: str


_CORPUS_FRAMES = [(1, 1), (2, 1), (3, 1), (4, 1), (5, 1), (6, 1), (1, 2), (2, 2)]


def _corpus_directions(kind: int, states: int, symbols: int, rng: np.random.Generator):
    # Mixed directions spread superpositions like a quantum walk; allow them
    # only on single-symbol alphabets where the tape stays blank and the
    # support is bounded by the head range.  Multi-symbol machines grow their
    # support exponentially while moving, so only every other one moves.
    if symbols == 1:
        if kind % 2 == 1:
            return [int(d) for d in rng.integers(-1, 2, size=states)]
        return [(-1, 0, 1)[kind % 3]] * states
    return [(0, 1, 0, -1)[kind % 4]] * states


def build_corpus(n_valid: int = 50, n_invalid: int = 50, seed: int = 7) -> list[CorpusEntry]:
    """Deterministic corpus: unitary-pair machines plus single-entry
    perturbations of them, each perturbation verified to break validity."""
    rng = np.random.default_rng(seed)
    entries: list[CorpusEntry] = []
    valid_tables: list[TransitionTable] = []
    kind_by_shape: dict[tuple[int, int], int] = {}
    for i in range(n_valid):
        states, symbols = _CORPUS_FRAMES[i % len(_CORPUS_FRAMES)]
        frame = simple_frame(states, symbols)
        unitary = random_unitary(states * symbols, rng)
        kind = kind_by_shape.get((states, symbols), 0)
        kind_by_shape[(states, symbols)] = kind + 1
        directions = _corpus_directions(kind, states, symbols, rng)
        table = pair_unitary_machine(frame, unitary, directions)
        valid_tables.append(table)
        entries.append(CorpusEntry(table, True, f"valid-{i} Q={states} S={symbols}"))

    for i in range(n_invalid):
        base = valid_tables[i % len(valid_tables)]
        frame = base.frame
        for _ in range(16):
            entry = (
                int(rng.integers(frame.state_count)),
                int(rng.integers(frame.symbol_counts[0])),
                int(rng.integers(frame.state_count)),
                int(rng.integers(frame.symbol_counts[0])),
                int(rng.integers(-1, 2)),
            )
            epsilon = float(rng.uniform(0.05, 0.5)) * (1 if rng.integers(2) else -1)
            table = perturb(base, entry, epsilon)
            if not check_column(table).passed:
                entries.append(
                    CorpusEntry(table, False,
                                f"invalid-{i} Q={frame.state_count} S={frame.symbol_counts[0]}")
                )
                break
        else:  # pragma: no cover - the epsilon range makes this unreachable
            raise RuntimeError("could not produce an invalid perturbation")
    return entries
