"""Exact finite-chain reference by full diagonalisation.

The L-site periodic chain Hamiltonian conserves total magnetisation, so it is
assembled and diagonalised block-by-block in the number of up spins (the
largest block at L = 12 is 924-dimensional, far cheaper than one 4096^2
solve, and the block structure doubles as an exactness check).  Thermal
dynamical correlators are then plain spectral sums

    <A B(t)> = (1/Z) sum_{a,b} e^{-E_a/T} e^{it(E_b - E_a)} <a|A|b><b|B|a>,

supported for complex t (the tau = 0 checks use t = i/2T).

Basis convention: bit j of the state integer is 1 when site j+1 carries an
up spin; operators named by 1-based chain sites.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import DomainError, ResourceError
from .hightemp import CorrelatorValue
from .model import PhysicalParams

MAX_SITES = 12


@dataclass(frozen=True)
class SectorData:
    states: np.ndarray       # basis state integers, fixed magnetisation
    energies: np.ndarray
    vectors: np.ndarray      # columns are eigenvectors


@dataclass(frozen=True)
class SpectralData:
    """Eigen-decomposition of the chain, grouped by magnetisation sector."""

    L: int
    J: float
    h: float
    sectors: tuple[SectorData, ...]

    @property
    def ground_energy(self) -> float:
        return min(float(s.energies.min()) for s in self.sectors)

    def partition_function(self, T: float) -> float:
        e0 = self.ground_energy
        return float(sum(np.exp(-(s.energies - e0) / T).sum() for s in self.sectors))


def _sector_states(L: int) -> list[np.ndarray]:
    sectors: list[list[int]] = [[] for _ in range(L + 1)]
    for s in range(1 << L):
        sectors[s.bit_count()].append(s)
    return [np.array(v, dtype=np.int64) for v in sectors]


def _sector_hamiltonian(states: np.ndarray, L: int, J: float, h: float) -> np.ndarray:
    index = {int(s): i for i, s in enumerate(states)}
    n = len(states)
    H = np.zeros((n, n))
    for i, s in enumerate(states):
        s = int(s)
        H[i, i] = -0.5 * h * (2 * s.bit_count() - L)
        for j in range(L):
            j2 = (j + 1) % L
            if ((s >> j) & 1) != ((s >> j2) & 1):
                H[index[s ^ (1 << j) ^ (1 << j2)], i] += 2.0 * J
    return H


@lru_cache(maxsize=4)
def _spectral(L: int, J: float, h: float) -> SpectralData:
    sectors = []
    for states in _sector_states(L):
        H = _sector_hamiltonian(states, L, J, h)
        if not np.allclose(H, H.T, atol=1e-12):
            raise ResourceError("sector Hamiltonian lost Hermiticity")
        w, U = np.linalg.eigh(H)
        sectors.append(SectorData(states=states, energies=w, vectors=U))
    return SpectralData(L=L, J=J, h=h, sectors=tuple(sectors))


def spectral_data(params: PhysicalParams, L: int) -> SpectralData:
    L = int(L)
    if not (2 <= L <= MAX_SITES):
        raise ResourceError(f"L = {L} outside supported range [2, {MAX_SITES}]")
    return _spectral(L, params.J, params.h)


def _lowering_matrix(states_high: np.ndarray, states_low: np.ndarray,
                     site: int) -> np.ndarray:
    """<low| s^-_site |high> in the computational basis (0/1 entries)."""
    index = {int(s): i for i, s in enumerate(states_low)}
    M = np.zeros((len(states_low), len(states_high)))
    for j, s in enumerate(states_high):
        s = int(s)
        if (s >> site) & 1:
            M[index[s ^ (1 << site)], j] = 1.0
    return M


def _transverse_sites(site_minus: int, site_plus: int, t: complex,
                      params: PhysicalParams, data: SpectralData) -> complex:
    """<s^-_{site_minus} s^+_{site_plus}(t)> on the finite chain (1-based sites)."""
    e0 = data.ground_energy
    Z = data.partition_function(params.T)
    t = complex(t)
    total = 0.0 + 0.0j
    for k in range(data.L):
        lo, hi = data.sectors[k], data.sectors[k + 1]
        S1 = _lowering_matrix(hi.states, lo.states, (site_minus - 1) % data.L)
        S2 = _lowering_matrix(hi.states, lo.states, (site_plus - 1) % data.L)
        M1 = lo.vectors.T @ S1 @ hi.vectors          # <a| s^- |b>
        M2 = hi.vectors.T @ S2.T @ lo.vectors        # <b| s^+ |a>
        fa = np.exp(-(lo.energies - e0) / params.T) * np.exp(-1j * t * lo.energies)
        gb = np.exp(1j * t * hi.energies)
        total += np.einsum("a,ab,ba,b->", fa, M1, M2, gb)
    return total / Z


def ed_transverse(m: int, t: complex, params: PhysicalParams, L: int) -> CorrelatorValue:
    """<s1- s_{m+1}+(t)> on the periodic L-site chain, exact to rounding."""
    m = int(m)
    if not (0 <= m < L / 2):
        raise DomainError(f"m = {m} must satisfy 0 <= m < L/2 = {L / 2}")
    data = spectral_data(params, L)
    value = _transverse_sites(1, m + 1, t, params, data)
    return CorrelatorValue(
        value=value, method="lattice_ed", error_estimate=0.0,
        metadata={"m": m, "t": complex(t), "J": params.J, "h": params.h,
                  "T": params.T, "L": int(L)})


def _longitudinal_sites(site_a: int, site_b: int, t: complex,
                        params: PhysicalParams, data: SpectralData) -> complex:
    e0 = data.ground_energy
    Z = data.partition_function(params.T)
    t = complex(t)
    total = 0.0 + 0.0j
    for sec in data.sectors:
        da = np.where(((sec.states >> ((site_a - 1) % data.L)) & 1) == 1, 1.0, -1.0)
        db = np.where(((sec.states >> ((site_b - 1) % data.L)) & 1) == 1, 1.0, -1.0)
        M1 = sec.vectors.T @ (da[:, None] * sec.vectors)
        M2 = sec.vectors.T @ (db[:, None] * sec.vectors)
        fa = np.exp(-(sec.energies - e0) / params.T) * np.exp(-1j * t * sec.energies)
        gb = np.exp(1j * t * sec.energies)
        total += np.einsum("a,ab,ba,b->", fa, M1, M2, gb)
    return total / Z


def ed_longitudinal(m: int, t: complex, params: PhysicalParams, L: int) -> CorrelatorValue:
    """<sz_1 sz_{m+1}(t)> on the periodic L-site chain."""
    m = int(m)
    if not (0 <= m < L / 2):
        raise DomainError(f"m = {m} must satisfy 0 <= m < L/2 = {L / 2}")
    data = spectral_data(params, L)
    value = _longitudinal_sites(1, m + 1, t, params, data)
    return CorrelatorValue(
        value=value, method="lattice_ed", error_estimate=0.0,
        metadata={"m": m, "t": complex(t), "J": params.J, "h": params.h,
                  "T": params.T, "L": int(L)})
