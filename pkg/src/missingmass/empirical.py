"""Sample profiles and realized missing/observed mass.

A profile stores per-symbol occurrence counts F_x and the frequency of
frequencies phi_l = #{x : F_x = l}.  Only phi is needed by the estimators;
per-symbol counts are needed to evaluate the realized missing mass against a
known distribution.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from typing import Dict, Iterable, Mapping, Optional

import numpy as np

from .distributions import DiscreteDistribution
from .errors import InvalidInputError
from .gfunction import GFunction


@dataclass(frozen=True)
class SampleProfile:
    """n, counts {symbol: F_x > 0}, and phi {l: phi_l, l >= 1}.

    counts is None for profiles built from a frequency-of-frequencies table,
    where symbol identities are unknown; phi alone feeds the estimators.
    phi_0 is never stored: the number of unseen symbols is unknowable without
    the support.
    """

    n: int
    counts: Optional[Dict[int, int]]
    phi: Dict[int, int]

    def __post_init__(self):
        if int(self.n) != self.n or self.n < 0:
            raise InvalidInputError("profile n must be an integer >= 0")
        for l, cnt in self.phi.items():
            if int(l) != l or l < 1 or int(cnt) != cnt or cnt < 0:
                raise InvalidInputError("phi must map integers l >= 1 to counts >= 0")
        if sum(l * c for l, c in self.phi.items()) != self.n:
            raise InvalidInputError(
                f"inconsistent profile: sum of l*phi_l != n = {self.n}"
            )
        if self.counts is not None:
            if any(int(c) != c or c < 1 for c in self.counts.values()):
                raise InvalidInputError("per-symbol counts must be integers >= 1")
            if sum(self.counts.values()) != self.n:
                raise InvalidInputError("per-symbol counts do not sum to n")
            derived = Counter(self.counts.values())
            if dict(derived) != {l: c for l, c in self.phi.items() if c > 0}:
                raise InvalidInputError("phi does not match the per-symbol counts")


def profile_from_samples(seq) -> SampleProfile:
    """Profile of a symbol sequence (any hashable symbols; empty allowed)."""
    if isinstance(seq, np.ndarray):
        symbols, occ = np.unique(seq, return_counts=True)
        counts = {int(s): int(c) for s, c in zip(symbols, occ)}
        n = int(seq.size)
    else:
        counter = Counter(seq)
        counts = dict(counter)
        n = sum(counter.values())
    phi = dict(Counter(counts.values()))
    return SampleProfile(n=n, counts=counts, phi=phi)


def profile_from_counts(counts: Mapping) -> SampleProfile:
    """Profile from a {symbol: count} mapping."""
    clean = {}
    for sym, cnt in counts.items():
        if int(cnt) != cnt or cnt < 1:
            raise InvalidInputError(f"count for symbol {sym!r} must be >= 1")
        clean[sym] = int(cnt)
    phi = dict(Counter(clean.values()))
    return SampleProfile(n=sum(clean.values()), counts=clean, phi=phi)


def profile_from_phi(phi: Mapping[int, int], n: int) -> SampleProfile:
    """Profile from a frequency-of-frequencies table; validates sum l*phi_l = n."""
    return SampleProfile(n=int(n), counts=None, phi={int(l): int(c) for l, c in phi.items()})


def _seen_mask(dist: DiscreteDistribution, profile: SampleProfile) -> np.ndarray:
    if profile.counts is None:
        raise InvalidInputError(
            "profile carries no per-symbol counts (built from phi only)"
        )
    seen = np.zeros(dist.size, dtype=bool)
    if profile.counts:
        syms = np.asarray(list(profile.counts.keys()))
        if not np.issubdtype(syms.dtype, np.integer):
            raise InvalidInputError("symbols must be integer indices into the support")
        if syms.min(initial=0) < 0 or syms.max(initial=0) >= dist.size:
            raise InvalidInputError(
                f"symbol out of support range [0, {dist.size})"
            )
        seen[syms] = True
    return seen


def realized_missing(
    dist: DiscreteDistribution, profile: SampleProfile, g: GFunction
) -> float:
    """G0 = sum of g(p_x) over unseen letters x with p_x > 0."""
    seen = _seen_mask(dist, profile)
    p = dist.probs
    if np.any(seen & (p == 0.0)):
        raise InvalidInputError("profile contains a symbol with zero probability")
    mask = (~seen) & (p > 0.0)
    return float(np.sum(g.eval(p[mask]))) if mask.any() else 0.0


def realized_observed(
    dist: DiscreteDistribution, profile: SampleProfile, g: GFunction
) -> float:
    """G1+ = sum of g(p_x) over seen letters; G0 + G1+ = sum_x g(p_x)."""
    seen = _seen_mask(dist, profile)
    p = dist.probs
    if np.any(seen & (p == 0.0)):
        raise InvalidInputError("profile contains a symbol with zero probability")
    mask = seen & (p > 0.0)
    return float(np.sum(g.eval(p[mask]))) if mask.any() else 0.0
