"""
Special-function kernel for the quadrature error bounds.

Every bound in the toolkit reduces to the family of integrals

    T_m(y) = int_y^inf (1 + s^2)^(-m/2) ds,        m even, m >= 2,

and to the Gauss function 2F1(1/2, m/2; 3/2; -y^2) through the identity
y * 2F1(1/2, m/2; 3/2; -y^2) + T_m(y) = G(m), with G(m) = T_m(0).
For even m the primitive of (1 + s^2)^(-m/2) terminates after m/2 steps of
a recurrence seeded by arctan, so no hypergeometric series is summed.
"""

import math
from fractions import Fraction
from functools import lru_cache

from scipy.special import betainc

from utils.errors import DomainError


def check_order(m) -> int:
    """Validate an even regularizer order m >= 2 and return it as int"""
    if isinstance(m, bool) or not float(m).is_integer():
        raise DomainError(f"order m must be an even integer, got {m!r}")
    m = int(m)
    if m < 2 or m % 2:
        raise DomainError(f"order m must be even and >= 2, got {m}")
    return m


def _check_argument(y, strict: bool = False) -> float:
    """Validate a finite non-negative (or positive) argument"""
    y = float(y)
    if not math.isfinite(y):
        raise DomainError(f"argument must be finite, got {y}")
    if y < 0 or (strict and y == 0):
        bound = "positive" if strict else "non-negative"
        raise DomainError(f"argument must be {bound}, got {y}")
    return y


@lru_cache(maxsize=None)
def _wallis_fraction(n: int) -> Fraction:
    """Exact rational (2n-3)!!/(2n-2)!!"""
    ratio = Fraction(1)
    for j in range(1, n):
        ratio *= Fraction(2 * j - 1, 2 * j)
    return ratio


def gamma_ratio(m) -> float:
    """G(m) = Gamma(3/2) Gamma((m-1)/2) / Gamma(m/2) for even m"""
    n = check_order(m) // 2
    return math.pi / 2 * float(_wallis_fraction(n))


def _primitive(n: int, y: float) -> float:
    """I_n(y) = int_0^y (1 + s^2)^(-n) ds by the arctan-seeded recurrence"""
    value = math.atan(y)
    base = 1.0 + y * y
    for k in range(2, n + 1):
        value = y / (2 * (k - 1)) * base ** (-(k - 1)) + (2 * k - 3) / (2 * (k - 1)) * value
    return value


def hyp_tail(m, y) -> float:
    """Tail integral T_m(y) = int_y^inf (1 + s^2)^(-m/2) ds"""
    n = check_order(m) // 2
    y = _check_argument(y)
    total = gamma_ratio(m)
    head = _primitive(n, y)
    if head <= total / 2:
        return total - head
    # Complementary incomplete beta: no cancellation once the tail is small
    return total * float(betainc(n - 0.5, 0.5, 1.0 / (1.0 + y * y)))


def hyp2f1_half(m, y) -> float:
    """2F1(1/2, m/2; 3/2; -y^2) for even m and y >= 0"""
    n = check_order(m) // 2
    y = _check_argument(y)
    if y == 0:
        return 1.0
    return _primitive(n, y) / y


def tail_leading_order(m, y) -> float:
    """Leading term y^-(m-1)/(m-1) of T_m(y) as y -> inf"""
    m = check_order(m)
    y = _check_argument(y, strict=True)
    try:
        return y ** (-(m - 1)) / (m - 1)
    except OverflowError:
        return math.inf
