"""Counting bounds for biased graphs, evaluated rigorously.

Factorials, binomials and powers are exact integers; anything involving
sqrt(log n / n) is an mpmath interval at 128 bits, so a check reported as
holding compares the conservative ends. Logarithms are binary.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import comb, factorial

import mpmath

PRECISION_BITS = 128


def _iv():
    ctx = mpmath.iv
    ctx.prec = max(ctx.prec, PRECISION_BITS)
    return ctx


def _log2(ctx, x):
    return ctx.log(x) / ctx.log(2)


def _frac(ctx, q: Fraction):
    return ctx.mpf(q.numerator) / q.denominator


def _interval_json(v) -> dict:
    return {"lo": mpmath.nstr(mpmath.mpf(v.a), 25), "hi": mpmath.nstr(mpmath.mpf(v.b), 25)}


def _to_iv(ctx, x):
    if isinstance(x, Fraction):
        return _frac(ctx, x)
    if isinstance(x, int):
        return ctx.mpf(x)
    return x


def _le(x, y) -> bool:
    """x <= y for certain; Fractions, ints or intervals."""
    iv = _iv()
    return bool(_to_iv(iv, x).b <= _to_iv(iv, y).a)


@dataclass
class BoundsReport:
    n: int
    lower_exponent: Fraction
    main_upper_exponent: object
    scarce_exponent: object
    clique_exponent: object
    compression_term: Fraction
    compression_ratio: Fraction  # n^2 / (6 floor(n/3)!)
    abelian_base: int  # 2 n! + 1
    abelian_power: int  # C(n,2)^2
    abelian_log2: object
    abelian_exponent_simple: object
    checks: dict[str, bool | None] = field(default_factory=dict)

    @property
    def abelian_bound(self) -> int | None:
        """(2n!+1)^(C(n,2)^2), only while it stays printable."""
        if self.abelian_power * self.abelian_base.bit_length() > 1 << 13:
            return None
        return self.abelian_base**self.abelian_power

    def to_json(self) -> dict:
        ab = self.abelian_bound
        return {
            "n": self.n,
            "lower_exponent": str(self.lower_exponent),
            "main_upper_exponent": _interval_json(self.main_upper_exponent),
            "scarce_exponent": _interval_json(self.scarce_exponent),
            "clique_exponent": _interval_json(self.clique_exponent),
            "compression_term": str(self.compression_term),
            "compression_ratio": str(self.compression_ratio),
            "abelian_bound": None if ab is None else str(ab),
            "abelian_bound_expr": f"({self.abelian_base})^{self.abelian_power}",
            "abelian_log2": _interval_json(self.abelian_log2),
            "abelian_exponent_simple": _interval_json(self.abelian_exponent_simple),
            "checks": self.checks,
        }


def bounds_report(n: int) -> BoundsReport:
    if n < 3:
        raise ValueError("bounds are stated for n >= 3")
    iv = _iv()
    f = factorial(n - 1)
    lower = Fraction(f, 2)
    root = iv.sqrt(_log2(iv, n) / n)
    half_f = _frac(iv, lower)
    main = half_f * (1 + 12 * root)
    scarce = half_f * (1 + 10 * root)
    clique = half_f * (1 + 11 * root)
    ratio = Fraction(n * n, 6 * factorial(n // 3))
    m2 = comb(n, 2)
    base = 2 * factorial(n) + 1
    ab_log2 = m2 * m2 * _log2(iv, base)
    simple = iv.mpf(n) ** 5 * _log2(iv, n) / 4
    checks: dict[str, bool | None] = {
        "lower_le_main_upper": _le(lower, main),
        "two_n_factorial_plus_one_le_n_to_n": base <= n**n,
        "abelian_precise_le_simple": _le(ab_log2, simple),
        # applicable from n = 18 on
        "compression_ratio_le_half_root": _le(ratio, root / 2) if n >= 18 else None,
        "edges_lt_half_factorial_root": bool(m2 < (half_f * root).a) if n >= 18 else None,
    }
    if n == 3:
        checks["nine_lt_main_bound"] = bool(_log2(iv, 9).b < main.a)
    return BoundsReport(
        n, lower, main, scarce, clique, Fraction(f) * ratio, ratio, base, m2 * m2, ab_log2, simple, checks
    )


def abelian_crossover(limit: int = 100) -> int | None:
    """Smallest n >= 3 with (n-1)!/2 > n^5 log n / 4, certified by intervals."""
    iv = _iv()
    for n in range(3, limit + 1):
        simple = iv.mpf(n) ** 5 * _log2(iv, n) / 4
        if _frac(iv, Fraction(factorial(n - 1), 2)).a > simple.b:
            return n
    return None
