"""Sparse superpositions and the action of the evolution operator on them.

A superposition is a finite map from configurations to complex amplitudes;
amplitudes below the pruning threshold are dropped after every accumulation.
Application expands each basis term through the nonzero rules of the table
in canonical index order, so repeated runs are bit-reproducible.
"""
from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass
from typing import Iterable

import numpy as np

from .conditions import DEFAULT_TOLERANCE
from .frame import Configuration, _config_unchecked, precedes
from .ktape import check_auto
from .table import TransitionTable
from .windows import radius_window

PRUNE_THRESHOLD = 1e-15


class Superposition:
    """Finite map Configuration -> complex amplitude, pruned and immutable."""

    __slots__ = ("_terms",)

    def __init__(self, terms: dict[Configuration, complex] | Iterable | None = None):
        acc: dict[Configuration, complex] = {}
        if terms:
            items = terms.items() if isinstance(terms, dict) else terms
            for config, amp in items:
                amp = complex(amp)
                if config in acc:
                    acc[config] += amp
                else:
                    acc[config] = amp
        self._terms = {c: a for c, a in acc.items() if abs(a) >= PRUNE_THRESHOLD}

    @classmethod
    def basis(cls, config: Configuration, amplitude: complex = 1.0) -> "Superposition":
        return cls({config: amplitude})

    def amplitude(self, config: Configuration) -> complex:
        return self._terms.get(config, 0j)

    def items(self) -> list[tuple[Configuration, complex]]:
        return sorted(self._terms.items(), key=lambda kv: kv[0].sort_key())

    def configurations(self) -> list[Configuration]:
        return [c for c, _ in self.items()]

    def __len__(self) -> int:
        return len(self._terms)

    def __contains__(self, config: Configuration) -> bool:
        return config in self._terms

    def __eq__(self, other) -> bool:
        return isinstance(other, Superposition) and self._terms == other._terms

    def __repr__(self) -> str:
        return f"Superposition({len(self._terms)} terms, norm={self.norm():.6g})"

    def norm(self) -> float:
        return float(np.sqrt(sum((a * a.conjugate()).real for a in self._terms.values())))

    def inner(self, other: "Superposition") -> complex:
        """<self|other>, conjugating self's amplitudes."""
        small, big, conj_small = (
            (self._terms, other._terms, True)
            if len(self._terms) <= len(other._terms)
            else (other._terms, self._terms, False)
        )
        total = 0j
        for config, amp in small.items():
            hit = big.get(config)
            if hit is None:
                continue
            total += amp.conjugate() * hit if conj_small else hit.conjugate() * amp
        return total

    def scaled(self, factor: complex) -> "Superposition":
        return Superposition({c: a * factor for c, a in self._terms.items()})

    def plus(self, other: "Superposition") -> "Superposition":
        acc = dict(self._terms)
        for c, a in other._terms.items():
            acc[c] = acc.get(c, 0j) + a
        return Superposition(acc)

    def distance(self, other: "Superposition") -> float:
        """Max termwise amplitude difference."""
        keys = set(self._terms) | set(other._terms)
        return max((abs(self.amplitude(c) - other.amplitude(c)) for c in keys), default=0.0)


def matrix_element(table: TransitionTable, c: Configuration, c_prime: Configuration) -> complex:
    """<c'|M|c>: the rule amplitude read off the two configurations when c
    can reach c' in one step, else 0."""
    frame = table.frame
    if c.tape_count != frame.tape_count or c_prime.tape_count != frame.tape_count:
        raise ValueError("configurations do not match the table's frame")
    if not precedes(c, c_prime):
        return 0j
    sigma = c.read()
    tau = tuple(t.read(h) for t, h in zip(c_prime.tapes, c.heads))
    moves = tuple(h2 - h for h, h2 in zip(c.heads, c_prime.heads))
    s = frame.symbol_flat(sigma)
    t = frame.symbol_flat(tau)
    m = frame.move_flat(moves)
    return complex(table.amplitudes[c.state, s, c_prime.state, t, m])


def _decoded_rules(table: TransitionTable, cache: dict, q: int, sflat: int):
    key = (q, sflat)
    rules = cache.get(key)
    if rules is None:
        frame = table.frame
        rules = [
            (p, frame.symbol_vector(t), frame.move_vector(m), amp)
            for p, t, m, amp in table.rules_for(q, sflat)
        ]
        cache[key] = rules
    return rules


def _grouped_rules(table: TransitionTable, cache: dict, q: int, sflat: int):
    """Rules for one read grouped by written symbol vector, preserving the
    canonical (p, tau, d) order inside each group."""
    key = (q, sflat)
    groups = cache.get(key)
    if groups is None:
        frame = table.frame
        by_tau: dict[tuple[int, ...], list] = {}
        for p, t, m, amp in table.rules_for(q, sflat):
            by_tau.setdefault(frame.symbol_vector(t), []).append(
                (p, frame.move_vector(m), amp)
            )
        groups = list(by_tau.items())
        cache[key] = groups
    return groups


def apply(table: TransitionTable, psi: Superposition) -> Superposition:
    """One application of the evolution operator, linearly extended."""
    frame = table.frame
    cache: dict = {}
    acc: dict[Configuration, complex] = defaultdict(complex)
    single = frame.tape_count == 1
    for config, amp in psi.items():
        if config.tape_count != frame.tape_count:
            raise ValueError("superposition does not match the table's frame")
        if single:
            tape = config.tapes[0]
            head = config.heads[0]
            for tau, group in _grouped_rules(table, cache, config.state, tape.read(head)):
                written = (tape.write(head, tau[0]),)
                for p, moves, coef in group:
                    image = _config_unchecked(p, written, (head + moves[0],))
                    acc[image] += amp * coef
        else:
            sflat = frame.symbol_flat(config.read())
            for tau, group in _grouped_rules(table, cache, config.state, sflat):
                written = tuple(t.write(h, w) for t, h, w in zip(config.tapes, config.heads, tau))
                for p, moves, coef in group:
                    heads = tuple(h + d for h, d in zip(config.heads, moves))
                    image = _config_unchecked(p, written, heads)
                    acc[image] += amp * coef
    return Superposition(acc)


def apply_adjoint(table: TransitionTable, psi: Superposition, *, allow_multitape: bool = False) -> Superposition:
    """One application of the adjoint: each term |p,T,xi> pulls back to the
    configurations |q, T with sigma written at xi-d, xi-d> weighted by the
    conjugated rule amplitude delta(q, sigma, p, T(xi-d), d)*."""
    frame = table.frame
    if frame.tape_count != 1 and not allow_multitape:
        raise ValueError("adjoint application covers single-tape frames; "
                         "pass allow_multitape=True for the componentwise extension")
    amps = table.amplitudes
    acc: dict[Configuration, complex] = {}
    for config, amp in psi.items():
        if config.tape_count != frame.tape_count:
            raise ValueError("superposition does not match the table's frame")
        p = config.state
        for moves in frame.move_vectors():
            cells = tuple(h - d for h, d in zip(config.heads, moves))
            written = tuple(t.read(c) for t, c in zip(config.tapes, cells))
            wflat = frame.symbol_flat(written)
            mflat = frame.move_flat(moves)
            block = amps[:, :, p, wflat, mflat]
            for q, sflat in zip(*np.nonzero(block)):
                sigma = frame.symbol_vector(int(sflat))
                tapes = tuple(t.write(c, s) for t, c, s in zip(config.tapes, cells, sigma))
                image = _config_unchecked(int(q), tapes, cells)
                acc[image] = acc.get(image, 0j) + amp * complex(block[q, sflat]).conjugate()
    return Superposition(acc)


@dataclass(frozen=True)
class RunResult:
    final: Superposition
    norms: tuple[float, ...]  # norms[t] = norm after t steps; norms[0] is the input


def run(
    table: TransitionTable,
    initial: Superposition,
    steps: int,
    *,
    unchecked: bool = False,
    tolerance: float = DEFAULT_TOLERANCE,
) -> RunResult:
    """Apply the evolution operator `steps` times, logging per-step norms.

    The table is validated first unless `unchecked`; norm drift is reported,
    never corrected.
    """
    if steps < 0:
        raise ValueError("steps must be nonnegative")
    if not unchecked:
        report = check_auto(table, tolerance)
        if not report.passed:
            raise ValueError(
                f"table fails the {report.checker} conditions "
                f"(max residual {report.max_residual:.3e}); pass unchecked=True to run anyway"
            )
    psi = initial
    norms = [initial.norm()]
    for _ in range(steps):
        psi = apply(table, psi)
        norms.append(psi.norm())
    return RunResult(final=psi, norms=tuple(norms))


def estimate_norm(table: TransitionTable, window_radius: int, iterations: int, seed: int = 0) -> float:
    """Power-iteration lower bound on the operator norm, computed on the
    window of configurations with support and head inside [-w, w].

    The estimate is a Rayleigh quotient of the compressed operator, hence
    never exceeds the true norm; it is exact (=1) for tables that pass the
    unitarity conditions, because interior window states are fixed points of
    the compressed normal operator.
    """
    frame = table.frame
    if frame.tape_count != 1:
        raise ValueError("norm estimation covers single-tape frames")
    if window_radius < 1 or iterations < 1:
        raise ValueError("window_radius and iterations must be positive")
    window = radius_window(frame, window_radius)
    index = {c: i for i, c in enumerate(window)}
    n = len(window)

    cache: dict = {}
    rows, cols, vals = [], [], []
    for i, config in enumerate(window):
        sflat = frame.symbol_flat(config.read())
        for p, tau, moves, coef in _decoded_rules(table, cache, config.state, sflat):
            tapes = tuple(t.write(h, w) for t, h, w in zip(config.tapes, config.heads, tau))
            heads = tuple(h + d for h, d in zip(config.heads, moves))
            j = index.get(_config_unchecked(p, tapes, heads))
            if j is not None:
                rows.append(j)
                cols.append(i)
                vals.append(coef)
    rows = np.asarray(rows, dtype=np.intp)
    cols = np.asarray(cols, dtype=np.intp)
    vals = np.asarray(vals, dtype=np.complex128)

    def matvec(v):
        prod = vals * v[cols]
        return (
            np.bincount(rows, weights=prod.real, minlength=n)
            + 1j * np.bincount(rows, weights=prod.imag, minlength=n)
        )

    def rmatvec(w):
        prod = vals.conj() * w[rows]
        return (
            np.bincount(cols, weights=prod.real, minlength=n)
            + 1j * np.bincount(cols, weights=prod.imag, minlength=n)
        )

    interior = np.array(
        [
            i
            for i, c in enumerate(window)
            if abs(c.heads[0]) <= window_radius - 1
            and all(abs(m) <= window_radius - 1 for m in c.tapes[0].support)
        ],
        dtype=np.intp,
    )
    v = np.zeros(n, dtype=np.complex128)
    v[interior] = 1.0
    norm_v = np.linalg.norm(v)
    if norm_v > 0:
        v /= norm_v
    rng = np.random.default_rng(seed)
    noise = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    v += 0.01 * noise / np.linalg.norm(noise)
    v /= np.linalg.norm(v)

    estimate = 0.0
    for _ in range(iterations):
        w = matvec(v)
        norm_w = float(np.linalg.norm(w))
        if norm_w == 0.0:
            return 0.0
        estimate = norm_w
        u = rmatvec(w)
        v = u / np.linalg.norm(u)
    return estimate
