"""Asymptotic bound formulas for cycle counts, plus the historical record.

Every formula here is asymptotic: it describes growth as the dimension goes
to infinity and makes no claim at any finite dimension (with the o-term set
to zero the upper formula already falls below the true count at n = 5).
Each evaluated bound therefore carries an asymptotic-only flag, and nothing
in this package asserts a formula value against an exact count.

Values routinely overflow floating point (the general lower bound at
n = 100 has a decimal exponent above 10^30), so evaluation works in
log-space and converts to a mantissa/decimal-exponent pair only for
display.  The exponent split is done with exact rational arithmetic on the
log so the fractional part survives even astronomically large exponents.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

# The published upper bounds of the 6-dimensional cycle count, oldest
# first, ending with the exact value; stored verbatim as reference data.
HISTORICAL_BOUNDS_H6: tuple[tuple[str, float], ...] = (
    ("Dixon and Goodman, 1975", 1.5e40),
    ("Douglas, 1977", 1.1e35),
    ("Silvermann et al., 1983", 3.7e29),
    ("Clark, 2000", 1.3e30),
    ("Perezhojin and Potapov, 2001", 4.1e24),
    ("Feder and Subi, 2009", 2.7e26),
    ("obtained value of H_6", 1.4e22),
)


@dataclass(frozen=True)
class BoundValue:
    """One evaluated bound, held in log-space.

    log10 is an exact rational multiple of the (floating point) per-step
    logarithm, or None when the value is exactly zero.  The vacuous flag
    marks a lower bound whose base went non-positive, which carries no
    information.
    """

    name: str
    formula: str
    o_term: float
    log10: Optional[Fraction]
    asymptotic_only: bool = True
    vacuous: bool = False

    @property
    def value(self) -> float:
        """Floating point value; 0.0 or inf when out of float range."""
        if self.log10 is None:
            return 0.0
        x = float(self.log10)
        if x > 308.2:
            return math.inf
        if x < -323.6:
            return 0.0
        return 10.0 ** float(self.log10)

    def mantissa_exponent(self) -> tuple[float, int]:
        """(m, k) with value = m * 10^k and 1 <= m < 10; (0, 0) for zero."""
        if self.log10 is None:
            return 0.0, 0
        k = math.floor(self.log10)
        m = 10.0 ** float(self.log10 - k)
        if m >= 10.0:  # boundary rounding
            m /= 10.0
            k += 1
        return m, k

    def display(self) -> str:
        if self.log10 is None:
            return "0 (vacuous)" if self.vacuous else "0"
        m, k = self.mantissa_exponent()
        text = f"{m:.4f}e{k:+d}"
        return f"{text} (vacuous)" if self.vacuous else text

    def csv_row(self) -> str:
        log10 = "" if self.log10 is None else repr(float(self.log10))
        return (
            f"{self.name},{self.o_term!r},{log10},"
            f"{self.display()},{self.asymptotic_only}"
        )


def _exp_bound(name: str, formula: str, o_term: float, ln_value: float) -> BoundValue:
    # Natural-log input; the decimal log is an exact rational quotient of
    # the two floats, so floor/fraction splits stay meaningful.
    log10 = Fraction(ln_value) / Fraction(math.log(10.0))
    return BoundValue(name=name, formula=formula, o_term=o_term, log10=log10)


def perezhogin_potapov_bounds(n: int, o_term: float) -> tuple[BoundValue, BoundValue]:
    """The asymptotic sandwich exp(2^(n-1) u) <= H_n <= exp(2^n u) with
    u = ln(n) - 1 + o(1), evaluated at a chosen o-term substitution."""
    if n < 2:
        raise ValueError(f"dimension {n} out of range (n >= 2)")
    u = math.log(n) - 1.0 + o_term
    a = _exp_bound("a_n", "exp(2^(n-1) * (ln n - 1 + o))", o_term, (1 << (n - 1)) * u)
    b = _exp_bound("b_n", "exp(2^n * (ln n - 1 + o))", o_term, (1 << n) * u)
    return a, b


def knuth_lower_bound(n: int, big_o_term: float) -> BoundValue:
    """The general lower bound (n/(4e) - O(log^2 n))^(2^n) at a chosen
    O-term substitution; a non-positive base yields 0 flagged vacuous."""
    if n < 2:
        raise ValueError(f"dimension {n} out of range (n >= 2)")
    base = n / (4.0 * math.e) - big_o_term
    formula = "(n/(4e) - O)^(2^n)"
    if base <= 0.0:
        return BoundValue(
            name="knuth",
            formula=formula,
            o_term=big_o_term,
            log10=None,
            vacuous=True,
        )
    log10 = Fraction(math.log10(base)) * (1 << n)
    # The bound is informative only once the base clears 1; below that the
    # "lower bound" is a vanishing quantity.
    return BoundValue(
        name="knuth",
        formula=formula,
        o_term=big_o_term,
        log10=log10,
        vacuous=base <= 1.0,
    )


def feder_subi_upper(m: int) -> int:
    """Exact square of a perfect-matching count: the finite-n form of the
    matching-based upper bound."""
    if m < 1:
        raise ValueError(f"matching count must be positive, got {m}")
    return m * m


def historical_bounds_table() -> list[tuple[str, float]]:
    """The published upper bounds of the 6-cube cycle count, verbatim."""
    return list(HISTORICAL_BOUNDS_H6)


def bounds_csv(rows: list[BoundValue]) -> str:
    header = "name,o_term,log10_value,display,asymptotic_flag"
    return "\n".join([header] + [r.csv_row() for r in rows])
