"""Instantaneous eigenstructure of the driven ladder, tracked through the sweep."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .model import LEVEL_LABELS, DriveSpec, HamiltonianTerms, SystemSpec

# plot colours per basis state: g blue, e red, f yellow, h grey
BASIS_COLOURS = np.array([
    [0.0, 0.0, 1.0],
    [1.0, 0.0, 0.0],
    [1.0, 1.0, 0.0],
    [0.5, 0.5, 0.5],
])


@dataclass
class EigenBranch:
    times: np.ndarray
    energies: np.ndarray
    vectors: np.ndarray
    label: int
    flagged: list = field(default_factory=list)

    @property
    def compositions(self) -> np.ndarray:
        return np.abs(self.vectors) ** 2

    @property
    def colours(self) -> np.ndarray:
        return composition_colours(self.compositions)


def composition_colours(compositions) -> np.ndarray:
    """RGB per sample, mixing the basis colours by population weight."""
    comp = np.asarray(compositions, dtype=float)
    return comp @ BASIS_COLOURS[: comp.shape[-1]]


def _fix_phase(vecs):
    # largest-magnitude component of each column made real and positive
    idx = np.argmax(np.abs(vecs), axis=0)
    lead = vecs[idx, np.arange(vecs.shape[1])]
    return vecs * (np.abs(lead) / lead)


def _greedy_match(prev, new):
    """Column permutation of ``new`` that follows the columns of ``prev``."""
    overlap = np.abs(prev.conj().T @ new)
    n = overlap.shape[0]
    order = np.empty(n, dtype=int)
    for _ in range(n):
        i, j = np.unravel_index(np.argmax(overlap), overlap.shape)
        order[i] = j
        overlap[i, :] = -1.0
        overlap[:, j] = -1.0
    return order


def instantaneous_spectrum(system: SystemSpec, drive: DriveSpec, n_samples: int = 1001,
                           degeneracy_tol: float = 1e-12) -> list[EigenBranch]:
    """Eigenpairs of ``H(t)`` on a uniform grid, joined into continuous branches.

    Branches are labelled by their energy order at the start of the pulse.
    Samples where two eigenvalues are closer than ``degeneracy_tol`` times
    the matrix norm are matched by energy order and recorded in
    ``EigenBranch.flagged``.
    """
    terms = HamiltonianTerms(system, drive)
    times = drive.sample_times(n_samples)
    n = system.n_levels
    energies = np.empty((n_samples, n))
    vectors = np.empty((n_samples, n, n), dtype=complex)
    flagged = []
    prev = None
    for k, t in enumerate(times):
        h = terms(t)
        w, v = np.linalg.eigh(h)
        v = _fix_phase(v)
        degenerate = np.min(np.diff(w)) < degeneracy_tol * max(1.0, np.linalg.norm(h, 2))
        if prev is None:
            order = np.arange(n)
        elif degenerate:
            # overlaps are meaningless inside a degenerate subspace; keep
            # each branch's energy rank from the previous sample instead
            order = np.empty(n, dtype=int)
            order[np.argsort(energies[k - 1], kind="stable")] = np.arange(n)
            flagged.append(k)
        else:
            order = _greedy_match(prev, v)
        energies[k] = w[order]
        vectors[k] = v[:, order]
        if not degenerate:
            # matching resumes from the last well-resolved sample
            prev = vectors[k]
    return [EigenBranch(times, energies[:, b].copy(), vectors[:, :, b].copy(), b, list(flagged))
            for b in range(n)]


def branch_endpoint_characters(branches) -> list[dict]:
    out = []
    for br in branches:
        comp = br.compositions
        out.append({
            "label": br.label,
            "start": LEVEL_LABELS[int(np.argmax(comp[0]))],
            "end": LEVEL_LABELS[int(np.argmax(comp[-1]))],
        })
    return out


def find_branch(branches, start: str, end: str | None = None) -> EigenBranch:
    for br, ch in zip(branches, branch_endpoint_characters(branches)):
        if ch["start"] == start and (end is None or ch["end"] == end):
            return br
    raise LookupError(f"no branch starting in {start!r}" + (f" and ending in {end!r}" if end else ""))


def minimum_gap(a: EigenBranch, b: EigenBranch):
    """Smallest ``|E_a - E_b|`` over the grid and the time where it occurs."""
    gaps = np.abs(a.energies - b.energies)
    k = int(np.argmin(gaps))
    return float(gaps[k]), float(a.times[k])
