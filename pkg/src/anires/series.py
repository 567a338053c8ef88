r"""Exact coefficient tables, double power series, and large-order diagnostics.

A :class:`CoefficientTable` stores the exact rational coefficients c_{kn} of a
double series ``sum_{k} sum_{n<=k} c_{kn} g^k d^n`` (k: order in the coupling,
n: order in the anisotropy).  Entries with k < n are identically zero and are
not stored.

The crossover diagnostic :func:`local_exponent` works on one column of such a
table in log space: for coefficients behaving like
``c_k ~ gamma (-sigma)^k k! k^beta`` it tracks

    f(k) = ln |c_k / ((-sigma)^k k!)|  =  beta ln k + const + ...

and estimates beta locally from two-point differences on the given k grid.
The crossover order is reported where the local slope first drops through the
midpoint between the two asymptotic regimes (beta = -1/2 and beta = -1), i.e.
through -3/4 by default.  The midpoint definition is this package's own
convention; the qualitative statement it implements is only that the switch
happens near k ~ 1/|d|.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple, Union

from .specfun import ScaledValue, log_gamma

__all__ = [
    "BigRational",
    "CoefficientTable",
    "AffineInN",
    "LargeOrderParams",
    "CrossoverReport",
    "local_exponent",
    "truncated_double_sum",
    "log_abs_fraction",
]

# Exact rationals are plain stdlib Fractions: always reduced, denominator > 0.
BigRational = Fraction

Coefficient = Union[Fraction, int, float, ScaledValue]


class CoefficientTable:
    """Triangular table (k, n) -> exact rational, 0 <= n <= k <= kmax.

    Immutable after construction; concurrent reads are safe.
    """

    def __init__(self, entries: Mapping[Tuple[int, int], Fraction], kmax: int):
        if kmax < 0:
            raise ValueError("kmax must be >= 0")
        table: Dict[Tuple[int, int], Fraction] = {}
        for (k, n), value in entries.items():
            if not (0 <= n <= k <= kmax):
                raise ValueError(f"entry ({k},{n}) outside triangular range kmax={kmax}")
            table[(k, n)] = Fraction(value)
        if (0, 0) not in table:
            raise ValueError("entry (0,0) is required")
        self._entries = table
        self._kmax = kmax

    @property
    def kmax(self) -> int:
        return self._kmax

    def entry(self, k: int, n: int) -> Fraction:
        if k < 0 or n < 0:
            raise ValueError(f"negative index ({k},{n})")
        if k > self._kmax:
            raise ValueError(f"k={k} exceeds kmax={self._kmax}")
        if k < n:
            return Fraction(0)
        return self._entries.get((k, n), Fraction(0))

    def column(self, n: int, kmax: Optional[int] = None) -> List[Fraction]:
        """Coefficients of d^n for k = n .. kmax."""
        top = self._kmax if kmax is None else kmax
        return [self.entry(k, n) for k in range(n, top + 1)]

    def items(self) -> Iterable[Tuple[Tuple[int, int], Fraction]]:
        return sorted(self._entries.items())

    def __len__(self) -> int:
        return len(self._entries)

    def __eq__(self, other) -> bool:
        if not isinstance(other, CoefficientTable):
            return NotImplemented
        return self._kmax == other._kmax and self._entries == other._entries

    def write_csv(self, fileobj) -> None:
        """CSV export: header row, then k,n,numerator,denominator per entry."""
        writer = csv.writer(fileobj, lineterminator="\n")
        writer.writerow(["k", "n", "numerator", "denominator"])
        for (k, n), value in self.items():
            writer.writerow([k, n, str(value.numerator), str(value.denominator)])

    @classmethod
    def read_csv(cls, fileobj) -> "CoefficientTable":
        reader = csv.reader(fileobj)
        header = next(reader)
        if header[:4] != ["k", "n", "numerator", "denominator"]:
            raise ValueError(f"unexpected CSV header {header}")
        entries = {}
        kmax = 0
        for row in reader:
            if not row:
                continue
            k, n = int(row[0]), int(row[1])
            entries[(k, n)] = Fraction(int(row[2]), int(row[3]))
            kmax = max(kmax, k)
        return cls(entries, kmax)


@dataclass(frozen=True)
class AffineInN:
    """Affine map n -> slope*n + offset with exact rational coefficients."""

    slope: Fraction
    offset: Fraction

    def __call__(self, n: int) -> Fraction:
        return Fraction(self.slope) * n + Fraction(self.offset)


@dataclass(frozen=True)
class LargeOrderParams:
    """Large-order growth data c_{kn} ~ gamma_n (-1)^k sigma^k k! k^{beta(n)}.

    ``b0_of_n`` is the Borel parameter map tied to the subleading exponent by
    b0 = beta + 3/2; ``alpha`` is the strong-coupling exponent.  ``sigma``,
    ``alpha`` and the affine maps are kept rational so that downstream
    coefficient algebra stays exact.
    """

    gamma: Sequence[float]
    sigma: Fraction
    beta_of_n: AffineInN
    b0_of_n: AffineInN
    alpha: Fraction

    def __post_init__(self) -> None:
        if self.sigma <= 0:
            raise ValueError("sigma must be positive")
        for n in range(4):
            if self.b0_of_n(n) - self.beta_of_n(n) != Fraction(3, 2):
                raise ValueError("b0(n) must equal beta(n) + 3/2")


@dataclass(frozen=True)
class CrossoverReport:
    """Result of a local-exponent scan over a coefficient column."""

    k_grid: Tuple[int, ...]
    f_values: Tuple[float, ...]
    beta_local: Tuple[float, ...]  # slope on (k_i, k_{i+1}), one fewer entry
    k_cross: Optional[int]
    threshold: float = -0.75  # package convention, midpoint of -1/2 and -1


def log_abs_fraction(value: Fraction) -> float:
    """ln |p/q| without overflowing, for arbitrarily large integers."""
    if value == 0:
        raise ValueError("log of zero")
    return math.log(abs(value.numerator)) - math.log(value.denominator)


def _ln_abs(value: Coefficient) -> float:
    if isinstance(value, ScaledValue):
        return value.ln()
    if isinstance(value, Fraction):
        return log_abs_fraction(value)
    if isinstance(value, int):
        return math.log(abs(value))
    return math.log(abs(value))


def _sign(value: Coefficient) -> int:
    if isinstance(value, ScaledValue):
        return value.sign
    if value > 0:
        return 1
    if value < 0:
        return -1
    return 0


def local_exponent(
    column: Sequence[Coefficient],
    sigma: float,
    k_grid: Sequence[int],
    threshold: float = -0.75,
) -> CrossoverReport:
    """Local growth exponent of a sign-alternating coefficient column.

    ``column[i]`` is the coefficient c_k at k = ``k_grid[i]``; entries may be
    exact rationals, floats, or :class:`ScaledValue`.  The column must
    alternate in sign as (-1)^k across the grid.  Returns f(k), the two-point
    slopes, and the first grid point whose incoming slope has crossed
    ``threshold`` (None if no crossing inside the grid).
    """
    if len(k_grid) < 2:
        raise ValueError("k_grid needs at least 2 points")
    if len(column) != len(k_grid):
        raise ValueError("column and k_grid must have equal length")
    ks = list(k_grid)
    if any(k2 <= k1 for k1, k2 in zip(ks, ks[1:])) or ks[0] < 1:
        raise ValueError("k_grid must be strictly increasing and >= 1")

    base = None
    for k, value in zip(ks, column):
        s = _sign(value)
        if s == 0:
            raise ValueError(f"zero coefficient at k={k}")
        parity = s * (-1) ** k
        if base is None:
            base = parity
        elif parity != base:
            raise ValueError(f"sign pattern violated at k={k}")

    ln_sigma = math.log(sigma)
    fs = [_ln_abs(c) - k * ln_sigma - log_gamma(k + 1) for k, c in zip(ks, column)]
    betas = [
        (fs[i + 1] - fs[i]) / (math.log(ks[i + 1]) - math.log(ks[i]))
        for i in range(len(ks) - 1)
    ]
    k_cross: Optional[int] = None
    for i, beta in enumerate(betas):
        if beta < threshold:
            k_cross = ks[i + 1]
            break
    return CrossoverReport(tuple(ks), tuple(fs), tuple(betas), k_cross, threshold)


def truncated_double_sum(
    table: CoefficientTable,
    g: Union[Fraction, int, float],
    delta: Union[Fraction, int, float],
    K: int,
) -> Union[Fraction, float]:
    """Partial sum  sum_{k<=K} sum_{n<=k} c_{kn} g^k d^n.

    Exact rational when both g and delta are exact (int or Fraction), float
    otherwise.
    """
    if K > table.kmax:
        raise ValueError(f"K={K} exceeds table kmax={table.kmax}")
    exact = isinstance(g, (int, Fraction)) and isinstance(delta, (int, Fraction))
    if exact:
        gq, dq = Fraction(g), Fraction(delta)
        total = Fraction(0)
        for k in range(K + 1):
            inner = Fraction(0)
            for n in range(k + 1):
                inner += table.entry(k, n) * dq**n
            total += inner * gq**k
        return total
    gf, df = float(g), float(delta)
    total_f = 0.0
    for k in range(K + 1):
        inner_f = 0.0
        for n in range(k, -1, -1):  # Horner in delta
            inner_f = inner_f * df + float(table.entry(k, n))
        total_f += inner_f * gf**k
    return total_f
