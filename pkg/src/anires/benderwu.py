r"""Exact ground-state perturbation coefficients of the anisotropic
quartic oscillator via a Bender-Wu style recursion.

For the reduced two-dimensional Schroedinger problem

    [-(1/2)(d_xx + d_yy) + r^2/2 + (g/4)(r^4 - 2 d x^2 y^2)] Psi = E Psi

the ground-state energy has the double expansion

    E = sum_{m} sum_{l>=m} (g/4)^l (2 d)^m E_lm ,     E_00 = 1.

Writing Psi = sum_{k,n} (-g/4)^k (2 d)^n exp(-r^2/2) Phi_kn with polynomial
Phi_kn(x, y) = sum_{i,j} A^{kn}_{ij} x^{2i} y^{2j} turns the eigenvalue problem
into a closed difference equation for the A coefficients,

    2 (i+j) A^{kn}_{ij} = (2i+1)(i+1) A^{kn}_{i+1,j} + (2j+1)(j+1) A^{kn}_{i,j+1}
        + A^{k-1,n}_{i-2,j} + A^{k-1,n}_{i,j-2} + 2 A^{k-1,n}_{i-1,j-1}
        - A^{k-1,n-1}_{i-1,j-1}
        - sum_{l=1}^{k} e_{l0} A^{k-l,n}_{ij}
        - sum_{m=1}^{n} sum_{l=m}^{k} e_{lm} A^{k-l,n-m}_{ij},

with e_{lm} = A^{lm}_{10} + A^{lm}_{01} and the energy extracted as
E_kn = -(-1)^k e_{kn}.  Support: A^{kn}_{ij} = 0 for i or j above 2k-n, for
any negative index, and for k < n; initialization A^{kn}_{00} = delta_{k0}
delta_{n0}.

Each (k, n) block is filled with the total degree s = i+j descending from
2(2k-n) to 1, so every right-hand side reference is either already computed
(larger s in the same block) or belongs to an earlier block; the i=j=0
equation has a vanishing left side and is kept as a consistency identity
whose residual is asserted to be exactly zero.  All arithmetic is exact
rational.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Tuple

from .series import CoefficientTable

__all__ = ["BwState", "build", "energy_series"]

_ZERO = Fraction(0)


@dataclass(frozen=True)
class BwState:
    """Filled recursion state: wave-function coefficients and energies."""

    A: Dict[Tuple[int, int, int, int], Fraction]  # (i, j, k, n) -> value
    energy: CoefficientTable  # (k, n) -> E_kn
    kmax: int


def build(kmax: int) -> BwState:
    """Run the recursion through order kmax; pure exact arithmetic."""
    if kmax < 0:
        raise ValueError("kmax must be >= 0")
    A: Dict[Tuple[int, int, int, int], Fraction] = {(0, 0, 0, 0): Fraction(1)}
    e_sum: Dict[Tuple[int, int], Fraction] = {(0, 0): _ZERO}
    energies: Dict[Tuple[int, int], Fraction] = {(0, 0): Fraction(1)}

    def a(i: int, j: int, k: int, n: int) -> Fraction:
        if i < 0 or j < 0 or k < 0 or n < 0 or k < n:
            return _ZERO
        if i > 2 * k - n or j > 2 * k - n:
            return _ZERO
        return A.get((i, j, k, n), _ZERO)

    for k in range(kmax + 1):
        for n in range(k + 1):
            if (k, n) == (0, 0):
                continue
            lim = 2 * k - n
            for s in range(2 * lim, 0, -1):
                for i in range(min(lim, s), max(0, s - lim) - 1, -1):
                    j = s - i
                    value = (
                        (2 * i + 1) * (i + 1) * a(i + 1, j, k, n)
                        + (2 * j + 1) * (j + 1) * a(i, j + 1, k, n)
                        + a(i - 2, j, k - 1, n)
                        + a(i, j - 2, k - 1, n)
                        + 2 * a(i - 1, j - 1, k - 1, n)
                        - a(i - 1, j - 1, k - 1, n - 1)
                    )
                    # The l = k (and l = k, m = n) terms multiply A^{00}_{ij},
                    # which vanishes for i+j >= 1, so e_sum of the current
                    # block is never needed here; factors are checked first.
                    for l in range(1, k + 1):
                        f0 = a(i, j, k - l, n)
                        if f0:
                            value -= e_sum[(l, 0)] * f0
                        for m in range(1, n + 1):
                            if l < m:
                                continue
                            fm = a(i, j, k - l, n - m)
                            if fm:
                                value -= e_sum[(l, m)] * fm
                    if value:
                        assert i <= lim and j <= lim  # support bound on write
                        A[(i, j, k, n)] = value / (2 * s)
            a10 = a(1, 0, k, n)
            a01 = a(0, 1, k, n)
            # x <-> y symmetry of the potential; asserted, not assumed
            assert a10 == a01, f"A10 != A01 at (k,n)=({k},{n})"
            e_kn = a10 + a01
            e_sum[(k, n)] = e_kn

            # i = j = 0: the left side 2(i+j) A_00 vanishes; the equation is a
            # consistency identity whose residual must be exactly zero.
            residual = a(1, 0, k, n) + a(0, 1, k, n)
            for l in range(1, k + 1):
                f0 = a(0, 0, k - l, n)
                if f0:
                    residual -= e_sum[(l, 0)] * f0
                for m in range(1, n + 1):
                    if l < m:
                        continue
                    fm = a(0, 0, k - l, n - m)
                    if fm:
                        residual -= e_sum[(l, m)] * fm
            assert residual == 0, f"i=j=0 identity violated at (k,n)=({k},{n})"

            energies[(k, n)] = -((-1) ** k) * e_kn

    table = CoefficientTable(energies, kmax)
    return BwState(A=A, energy=table, kmax=kmax)


def energy_series(state: BwState) -> CoefficientTable:
    """The energy table; entry (l, m) multiplies (g/4)^l (2 d)^m."""
    return state.energy
