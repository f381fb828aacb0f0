"""Generalized hypergeometric series pFq with repeated-parameter blocks."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Iterator, Union

from .core import EvalResult, is_nonpositive_integer
from .errors import NoConvergence, ParameterError

__all__ = [
    "ParamList",
    "SeriesControl",
    "pfq",
    "pfq_zderiv",
    "kummer_m",
]

EPS = 2.220446049250313e-16

Entry = Union[complex, float, int, tuple]


@dataclass(frozen=True)
class SeriesControl:
    rel_tol: float = 1e-12
    max_terms: int = 100_000
    stagnation_window: int = 3

    def __post_init__(self):
        if not self.rel_tol > 0:
            raise ValueError("rel_tol must be positive")
        if self.stagnation_window < 1:
            raise ValueError("stagnation_window must be >= 1")
        if self.max_terms < 1:
            raise ValueError("max_terms must be >= 1")


DEFAULT_CONTROL = SeriesControl()


class ParamList:
    """Ordered multiset of complex parameters.

    Entries are ``(value, multiplicity)`` pairs so that blocks such as
    ``[beta + 2]`` repeated ``r + 1`` times stay compact. Plain numbers in the
    constructor count once; multiplicity zero entries are dropped.

    >>> ParamList([1.5, (2, 3)]).expanded()
    ((1.5+0j), (2+0j), (2+0j), (2+0j))
    """

    __slots__ = ("entries",)

    def __init__(self, entries: Iterable[Entry] = ()):
        merged: list[tuple[complex, int]] = []
        for entry in entries:
            if isinstance(entry, tuple):
                value, mult = entry
            else:
                value, mult = entry, 1
            mult = int(mult)
            if mult < 0:
                raise ValueError("multiplicity must be nonnegative")
            if mult == 0:
                continue
            value = complex(value)
            if merged and merged[-1][0] == value:
                merged[-1] = (value, merged[-1][1] + mult)
            else:
                merged.append((value, mult))
        self.entries: tuple[tuple[complex, int], ...] = tuple(merged)

    @classmethod
    def repeated(cls, value: complex, n: int) -> "ParamList":
        """The block ``[value]_n``; empty when ``n == 0``."""
        return cls([(value, n)])

    def __add__(self, other: "ParamList") -> "ParamList":
        return ParamList(self.entries + other.entries)

    def __len__(self) -> int:
        return sum(m for _, m in self.entries)

    def __iter__(self) -> Iterator[complex]:
        return iter(self.expanded())

    def __eq__(self, other) -> bool:
        return isinstance(other, ParamList) and self.entries == other.entries

    def __hash__(self) -> int:
        return hash(self.entries)

    def __repr__(self) -> str:
        parts = [f"{v}" if m == 1 else f"[{v}]_{m}" for v, m in self.entries]
        return f"ParamList({', '.join(parts)})"

    def expanded(self) -> tuple[complex, ...]:
        out: list[complex] = []
        for value, mult in self.entries:
            out.extend([value] * mult)
        return tuple(out)

    def counts(self) -> dict[complex, int]:
        table: dict[complex, int] = {}
        for value, mult in self.entries:
            table[value] = table.get(value, 0) + mult
        return table


def as_paramlist(params) -> ParamList:
    if isinstance(params, ParamList):
        return params
    if isinstance(params, (int, float, complex)):
        return ParamList([params])
    return ParamList(params)


def cancel_common(upper: ParamList, lower: ParamList) -> tuple[ParamList, ParamList]:
    """Strike parameters that appear in both lists (matching multiplicities)."""
    up = upper.counts()
    low = lower.counts()
    for value in up:
        if value in low:
            k = min(up[value], low[value])
            up[value] -= k
            low[value] -= k
    return (
        ParamList([(v, m) for v, m in up.items() if m]),
        ParamList([(v, m) for v, m in low.items() if m]),
    )


def _pair_groups(upper: ParamList, lower: ParamList) -> list[tuple[complex | None, complex | None, int]]:
    """Zip the expanded lists into runs of identical (upper, lower) pairs.

    Dividing each upper factor by a lower partner keeps the per-term ratio
    close to its final size, so long repeated blocks do not overflow.
    """
    ups = upper.expanded()
    lows = lower.expanded()
    n = max(len(ups), len(lows))
    groups: list[list] = []
    for i in range(n):
        u = ups[i] if i < len(ups) else None
        lo = lows[i] if i < len(lows) else None
        if groups and groups[-1][0] == u and groups[-1][1] == lo:
            groups[-1][2] += 1
        else:
            groups.append([u, lo, 1])
    return [tuple(g) for g in groups]


def _check_lower(lower: ParamList) -> None:
    for value, _ in lower.entries:
        if is_nonpositive_integer(value):
            raise ParameterError(f"lower parameter {value} is a nonpositive integer")


def _terms(upper: ParamList, lower: ParamList, x: complex) -> Iterator[tuple[complex, complex]]:
    """Yield ``(t_k, t_{k+1}/t_k)`` for the pFq series."""
    groups = _pair_groups(upper, lower)
    term = 1 + 0j
    k = 0
    while True:
        ratio = x / (k + 1)
        for u, lo, mult in groups:
            if u is None:
                factor = 1.0 / (lo + k)
            elif lo is None:
                factor = u + k
            else:
                factor = (u + k) / (lo + k)
            ratio *= factor if mult == 1 else factor**mult
        yield term, ratio
        term = term * ratio
        k += 1


def _sum_series(
    upper: ParamList,
    lower: ParamList,
    x: complex,
    ctl: SeriesControl,
    weighted: bool = False,
) -> EvalResult:
    x = complex(x)
    # no stopping before every parameter with negative real part has been passed
    k_min = max([0.0] + [-v.real for v, _ in upper.entries + lower.entries])
    # rounding in t_k grows like sqrt(k * m) ulps, m counting the factors per ratio
    m = len(upper) + len(lower) + 1
    total = 0j
    abs_total = 0.0
    round_total = 0.0
    quiet = 0
    count = 0
    for k, (term, ratio) in enumerate(_terms(upper, lower, x)):
        if count >= ctl.max_terms:
            raise NoConvergence(
                f"pFq did not converge in {ctl.max_terms} terms (x={x!r}, |partial|={abs(total):.3g})"
            )
        contrib = k * term if weighted else term
        total += contrib
        abs_total += abs(contrib)
        round_total += abs(contrib) * (1.0 + math.sqrt(k * m))
        count += 1
        if not math.isfinite(abs_total):
            raise NoConvergence(f"pFq terms overflowed at k={k} (x={x!r})")
        small = abs(contrib) <= ctl.rel_tol * abs(total) or term == 0
        quiet = quiet + 1 if small else 0
        # a terminated series (zero ratio) or a run of small terms past the peak
        settled = quiet >= ctl.stagnation_window and abs(ratio) < 1.0 and k > k_min
        if term == 0 or settled:
            r = abs(ratio)
            nxt = abs(term * ratio) * ((k + 1) if weighted else 1)
            tail = nxt / (1.0 - r) if r < 1.0 else nxt
            err = tail + EPS * round_total
            converged = err <= ctl.rel_tol * max(1.0, abs(total))
            return EvalResult(total, err, count, converged)
    raise AssertionError("unreachable")


def pfq(upper, lower, x: complex, ctl: SeriesControl = DEFAULT_CONTROL) -> EvalResult:
    """Sum pFq(upper; lower; x) for p <= q by the term recurrence.

    Parameters common to both lists are cancelled before summing.
    """
    upper = as_paramlist(upper)
    lower = as_paramlist(lower)
    if len(upper) > len(lower):
        raise ParameterError(f"pfq needs p <= q, got p={len(upper)}, q={len(lower)}")
    _check_lower(lower)
    upper, lower = cancel_common(upper, lower)
    return _sum_series(upper, lower, x, ctl)


def pfq_zderiv(upper, lower, x: complex, ctl: SeriesControl = DEFAULT_CONTROL) -> EvalResult:
    """x d/dx pFq(upper; lower; x), summed term by term as sum k t_k."""
    upper = as_paramlist(upper)
    lower = as_paramlist(lower)
    if len(upper) > len(lower):
        raise ParameterError(f"pfq needs p <= q, got p={len(upper)}, q={len(lower)}")
    _check_lower(lower)
    upper, lower = cancel_common(upper, lower)
    return _sum_series(upper, lower, x, ctl, weighted=True)


def kummer_m(a: complex, b: complex, x: complex, ctl: SeriesControl = DEFAULT_CONTROL) -> EvalResult:
    """Kummer's confluent function M(a; b; x) = 1F1(a; b; x)."""
    return pfq(ParamList([a]), ParamList([b]), x, ctl)

