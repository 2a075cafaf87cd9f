"""Majorana stellar representation of qutrit states.

A state ``a|g> + b|e> + c|f>`` is the polynomial
``(a/sqrt2) xi^2 - b xi + c/sqrt2``; its two roots, pushed through the
inverse stereographic map ``xi = tan(theta/2) exp(i phi)``, are the stars.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import permutations

import numpy as np

from .errors import DomainError, UnsupportedRepresentation

_SQRT2 = np.sqrt(2.0)
_INF_TOL = 1e-12


@dataclass(frozen=True, eq=False)
class StarPair:
    star1: tuple
    star2: tuple

    def __eq__(self, other):
        if not isinstance(other, StarPair):
            return NotImplemented
        return sorted((self.star1, self.star2)) == sorted((other.star1, other.star2))

    def __hash__(self):
        return hash(tuple(sorted((self.star1, self.star2))))

    def isclose(self, other: "StarPair", atol: float = 1e-9) -> bool:
        """Order-insensitive comparison by great-circle distance."""
        direct = angular_distance(self.star1, other.star1) + angular_distance(self.star2, other.star2)
        swapped = angular_distance(self.star1, other.star2) + angular_distance(self.star2, other.star1)
        return min(direct, swapped) <= 2 * atol

    def as_row(self):
        return (*self.star1, *self.star2)


def majorana_roots(psi):
    """Both roots of the Majorana polynomial, ``inf`` for each missing degree."""
    psi = np.asarray(psi, dtype=complex).reshape(-1)
    if psi.size != 3:
        raise DomainError("Majorana stars are defined here for qutrit states only")
    norm = np.linalg.norm(psi)
    if norm == 0:
        raise DomainError("zero vector has no stars")
    alpha, beta, gamma = psi / norm
    a, b, c = alpha / _SQRT2, -beta, gamma / _SQRT2
    if abs(alpha) < _INF_TOL:
        if abs(beta) < _INF_TOL:
            return complex(np.inf), complex(np.inf)
        return -c / b, complex(np.inf)
    disc = np.sqrt(b * b - 4 * a * c)
    # pick the branch that adds to b, avoiding cancellation
    if (b.conjugate() * disc).real < 0:
        disc = -disc
    q = -0.5 * (b + disc)
    if q == 0:
        return 0j, 0j
    return q / a, c / q


def root_to_angles(xi) -> tuple:
    if not np.isfinite(xi):
        return (float(np.pi), 0.0)
    r = abs(xi)
    theta = 2.0 * np.arctan(r)
    phi = float(np.angle(xi)) if r > 0 else 0.0
    if phi >= np.pi:
        phi -= 2 * np.pi
    if theta < _INF_TOL or np.pi - theta < _INF_TOL:
        phi = 0.0
    return (float(theta), phi)


def majorana_stars(psi) -> StarPair:
    """Sphere coordinates ``(theta, phi)`` of the two stars of ``psi``."""
    r1, r2 = majorana_roots(psi)
    return StarPair(root_to_angles(r1), root_to_angles(r2))


def _unit(star):
    t, p = star
    return np.array([np.sin(t) * np.cos(p), np.sin(t) * np.sin(p), np.cos(t)])


def angular_distance(s1, s2) -> float:
    """Great-circle distance; atan2 form stays accurate for nearby points."""
    u, v = _unit(s1), _unit(s2)
    return float(np.arctan2(np.linalg.norm(np.cross(u, v)), u @ v))


def qutrit_projection(psi):
    """Drop amplitudes beyond |f> and renormalise; returns ``(state, discarded_weight)``."""
    psi = np.asarray(psi, dtype=complex).reshape(-1)
    head = psi[:3]
    kept = np.linalg.norm(head)
    return head / kept, float(max(0.0, 1.0 - kept ** 2))


def stars_trajectory(traj, project: bool = False) -> list[StarPair]:
    """Star pairs along a pure-state trajectory, paired continuously in time.

    With ``project=True`` a four-level trajectory is reduced to its qutrit
    part first (see :func:`qutrit_projection`).
    """
    states = getattr(traj, "states", None)
    if states is None or states.ndim != 2:
        raise UnsupportedRepresentation("stars_trajectory needs a pure-state trajectory")
    if states.shape[1] != 3:
        if not project:
            raise DomainError("trajectory is not a qutrit; pass project=True to truncate")
        states = np.array([qutrit_projection(s)[0] for s in states])
    out = []
    prev = None
    for psi in states:
        pair = majorana_stars(psi)
        if prev is not None:
            cands = list(permutations((pair.star1, pair.star2)))
            cost = [angular_distance(prev.star1, c[0]) + angular_distance(prev.star2, c[1])
                    for c in cands]
            pair = StarPair(*cands[int(np.argmin(cost))])
        out.append(pair)
        prev = pair
    return out
