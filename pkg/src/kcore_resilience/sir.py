"""Discrete-time SIR spreading used to score seed sets."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .cores import degree_moments
from .errors import ParameterError
from .graph import Graph

SUSCEPTIBLE, INFECTED, RECOVERED = 0, 1, 2


@dataclass(frozen=True)
class SirConfig:
    infect_prob: float
    recover_prob: float = 0.01
    steps: int = 15
    runs: int = 50
    seed: int = 0

    def __post_init__(self):
        for name in ("infect_prob", "recover_prob"):
            p = getattr(self, name)
            if not 0.0 <= p <= 1.0:
                raise ParameterError(f"{name} must be in [0, 1], got {p}")
        if self.steps < 1:
            raise ParameterError("steps must be >= 1")
        if self.runs < 1:
            raise ParameterError("runs must be >= 1")


@dataclass
class SirTrace:
    """Fraction of affected (infected or recovered) nodes per step.

    ``S_t`` has ``steps + 1`` entries, ``S_t[0]`` being the seed fraction.
    ``counts[r, t]`` holds the (S, I, R) sizes of run ``r`` after step ``t``.
    """

    S_t: np.ndarray
    S_t_std: np.ndarray
    per_run: np.ndarray
    counts: np.ndarray

    @property
    def final(self) -> float:
        return float(self.S_t[-1])


def _csr(g: Graph):
    deg = np.array(g.degrees(), dtype=np.int64)
    indptr = np.zeros(g.n + 1, dtype=np.int64)
    np.cumsum(deg, out=indptr[1:])
    indices = np.fromiter((v for u in g.nodes() for v in sorted(g.adj[u])), dtype=np.int64, count=int(indptr[-1]))
    return indptr, indices


def _gather(indptr, indices, rows):
    starts = indptr[rows]
    lengths = indptr[rows + 1] - starts
    total = int(lengths.sum())
    if total == 0:
        return indices[:0]
    offsets = np.repeat(starts - np.cumsum(lengths) + lengths, lengths) + np.arange(total)
    return indices[offsets]


def run_sir(g: Graph, seeds, cfg: SirConfig) -> SirTrace:
    """Synchronous SIR.

    Each step, every infected node tries each neighbor independently with
    ``infect_prob`` (only susceptible targets change), then the nodes that
    were infected at the start of the step recover with ``recover_prob``.
    Runs use independent streams spawned from ``cfg.seed``.
    """
    seeds = [int(s) for s in seeds]
    if not seeds:
        raise ParameterError("seed set is empty")
    if len(set(seeds)) != len(seeds):
        raise ParameterError("seed set has duplicates")
    if any(not 0 <= s < g.n for s in seeds):
        raise ParameterError("seed node outside graph")
    n = g.n
    indptr, indices = _csr(g)
    beta, gamma = cfg.infect_prob, cfg.recover_prob
    rngs = [np.random.default_rng(s) for s in np.random.SeedSequence(cfg.seed).spawn(cfg.runs)]
    counts = np.zeros((cfg.runs, cfg.steps + 1, 3), dtype=np.int64)
    seed_arr = np.array(seeds)
    for r, rng in enumerate(rngs):
        state = np.zeros(n, dtype=np.int8)
        state[seed_arr] = INFECTED
        counts[r, 0] = np.bincount(state, minlength=3)
        for t in range(1, cfg.steps + 1):
            infected = np.flatnonzero(state == INFECTED)
            if infected.size:
                targets = _gather(indptr, indices, infected)
                hit = targets[rng.random(targets.size) < beta]
                hit = hit[state[hit] == SUSCEPTIBLE]
                recovering = infected[rng.random(infected.size) < gamma]
                state[hit] = INFECTED
                state[recovering] = RECOVERED
            counts[r, t] = np.bincount(state, minlength=3)
    per_run = (counts[:, :, INFECTED] + counts[:, :, RECOVERED]) / n
    return SirTrace(per_run.mean(axis=0), per_run.std(axis=0), per_run, counts)


def default_beta(g: Graph, margin: float | None = None) -> float:
    """Infection probability just above the threshold <k>/<k^2>.

    With ``margin=None`` the threshold is moved to the next multiple of 0.01
    strictly above it, with a floor of 0.02 (0.011 -> 0.02, 0.258 -> 0.26).
    Otherwise ``threshold * (1 + margin)``.  Capped at 1.
    """
    bmin = degree_moments(g)[2]
    if margin is not None:
        return min(1.0, bmin * (1.0 + margin))
    step = math.floor(round(bmin * 100, 9)) + 1
    return min(1.0, max(0.02, step / 100))
