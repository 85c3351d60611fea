"""Exact arithmetic in the cyclotomic field K = Q(zeta_n), default n = 24.

Elements are written on the power basis 1, z, ..., z^(phi(n)-1) where z is a
fixed primitive n-th root of unity and phi is Euler's totient; coordinates are
`fractions.Fraction`s and every operation is exact.  Products are reduced with
the minimal polynomial Phi_n(t), computed here from the recursive definition
Phi_n = (t^n - 1) / prod_{d | n, d < n} Phi_d.  For the default n = 24 this is
t^8 - t^4 + 1, so the basis has length 8 and z^12 = -1.

The field is large enough to host i = z^6, sqrt(2) = z^3 + z^21,
sqrt(3) = z^2 + z^22 and their products, which is all the irrationality the
catalog computations ever need.  Square/cube/fourth roots are searched only
among elements of "monomial shape" q * z^m with q rational; that restriction
is what makes the search exact and terminating (no floating point, no lattice
reduction).
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Sequence

ORDER = 24


def _totient(n: int) -> int:
    count = 0
    for k in range(1, n + 1):
        a, b = n, k
        while b:
            a, b = b, a % b
        if a == 1:
            count += 1
    return count


def _poly_divmod(num: list[int], den: list[int]) -> tuple[list[int], list[int]]:
    """Exact division of integer coefficient lists (low to high degree)."""
    num = list(num)
    quot = [0] * (len(num) - len(den) + 1)
    for shift in range(len(num) - len(den), -1, -1):
        coeff, rem = divmod(num[shift + len(den) - 1], den[-1])
        if rem:
            raise ArithmeticError("non-exact polynomial division")
        quot[shift] = coeff
        for i, d in enumerate(den):
            num[shift + i] -= coeff * d
    while len(num) > 1 and num[-1] == 0:
        num.pop()
    return quot, num


def _cyclotomic(n: int) -> list[int]:
    """Integer coefficients of Phi_n, low to high degree."""
    poly = [-1] + [0] * (n - 1) + [1]  # t^n - 1
    for d in range(1, n):
        if n % d == 0:
            poly, rem = _poly_divmod(poly, _cyclotomic(d))
            if rem != [0]:
                raise ArithmeticError(f"cyclotomic division left remainder for n={n}")
    return poly


_PHI = _cyclotomic(ORDER)
DEGREE = len(_PHI) - 1
assert DEGREE == _totient(ORDER)
assert _PHI[-1] == 1
if ORDER == 24:
    assert _PHI == [1, 0, 0, 0, -1, 0, 0, 0, 1]  # t^8 - t^4 + 1

_ZERO = Fraction(0)
_ONE = Fraction(1)


def _reduce(coeffs: list[Fraction]) -> list[Fraction]:
    """Reduce a coefficient list modulo Phi_n, in place, and trim to DEGREE."""
    for k in range(len(coeffs) - 1, DEGREE - 1, -1):
        top = coeffs[k]
        if top:
            coeffs[k] = _ZERO
            for i in range(DEGREE):
                if _PHI[i]:
                    coeffs[k - DEGREE + i] -= top * _PHI[i]
    del coeffs[DEGREE:]
    while len(coeffs) < DEGREE:
        coeffs.append(_ZERO)
    return coeffs


class CycScalar:
    """An element of Q(zeta_ORDER) on the power basis.

    >>> (CycScalar.zeta(3) + CycScalar.zeta(21)) ** 2 == CycScalar.from_rational(2)
    True
    >>> CycScalar.zeta(6) ** 2
    CycScalar(-1)
    """

    __slots__ = ("c",)

    def __init__(self, coeffs: Iterable[Fraction | int]):
        c = tuple(Fraction(x) for x in coeffs)
        if len(c) != DEGREE:
            raise ValueError(f"expected {DEGREE} coordinates, got {len(c)}")
        self.c = c

    # --- constructors -------------------------------------------------

    @classmethod
    def from_rational(cls, q) -> "CycScalar":
        return cls((Fraction(q),) + (_ZERO,) * (DEGREE - 1))

    @classmethod
    def zero(cls) -> "CycScalar":
        return _ZERO_ELT

    @classmethod
    def one(cls) -> "CycScalar":
        return _ONE_ELT

    @classmethod
    def zeta(cls, k: int = 1) -> "CycScalar":
        """The power z^k (k may be any integer)."""
        k %= ORDER
        coeffs = [_ZERO] * (k + 1)
        coeffs[k] = _ONE
        return cls(_reduce(coeffs))

    @classmethod
    def root_of_unity(cls, a: int, r: int) -> "CycScalar":
        """e[a/r] = exp(2 pi i a / r), requiring r | ORDER."""
        if r <= 0 or ORDER % r != 0:
            raise ValueError(f"root of unity of order {r} is not in Q(zeta_{ORDER})")
        return cls.zeta(a * (ORDER // r))

    # --- arithmetic ---------------------------------------------------

    def __add__(self, other: "CycScalar") -> "CycScalar":
        return CycScalar(a + b for a, b in zip(self.c, other.c))

    def __sub__(self, other: "CycScalar") -> "CycScalar":
        return CycScalar(a - b for a, b in zip(self.c, other.c))

    def __neg__(self) -> "CycScalar":
        return CycScalar(-a for a in self.c)

    def __mul__(self, other: "CycScalar") -> "CycScalar":
        prod = [_ZERO] * (2 * DEGREE - 1)
        for i, a in enumerate(self.c):
            if a:
                for j, b in enumerate(other.c):
                    if b:
                        prod[i + j] += a * b
        return CycScalar(_reduce(prod))

    def inverse(self) -> "CycScalar":
        """Multiplicative inverse via the extended Euclidean algorithm in Q[t]."""
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero")
        # Run xgcd(self, Phi); Phi is irreducible so the gcd is a constant.
        r0 = [Fraction(p) for p in _PHI]
        r1 = list(self.c)
        while len(r1) > 1 and r1[-1] == 0:
            r1.pop()
        s0: list[Fraction] = [_ZERO]
        s1: list[Fraction] = [_ONE]
        while len(r1) > 1 or r1[0] != 0:
            # divide r0 by r1
            quot = [_ZERO] * max(len(r0) - len(r1) + 1, 1)
            rem = list(r0)
            for shift in range(len(rem) - len(r1), -1, -1):
                coeff = rem[shift + len(r1) - 1] / r1[-1]
                quot[shift] = coeff
                if coeff:
                    for i, d in enumerate(r1):
                        rem[shift + i] -= coeff * d
            while len(rem) > 1 and rem[-1] == 0:
                rem.pop()
            # s_{k+1} = s_{k-1} - q s_k
            qs = [_ZERO] * (len(quot) + len(s1) - 1)
            for i, a in enumerate(quot):
                if a:
                    for j, b in enumerate(s1):
                        if b:
                            qs[i + j] += a * b
            s2 = [(s0[i] if i < len(s0) else _ZERO) - (qs[i] if i < len(qs) else _ZERO)
                  for i in range(max(len(s0), len(qs)))]
            r0, r1, s0, s1 = r1, rem, s1, s2
        unit = r0[0]  # nonzero constant gcd
        inv = [x / unit for x in s0]
        return CycScalar(_reduce(inv))

    def __truediv__(self, other: "CycScalar") -> "CycScalar":
        return self * other.inverse()

    def __pow__(self, n: int) -> "CycScalar":
        if n < 0:
            return self.inverse() ** (-n)
        result = _ONE_ELT
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __eq__(self, other: object) -> bool:
        return isinstance(other, CycScalar) and self.c == other.c

    def __hash__(self) -> int:
        return hash(self.c)

    def __bool__(self) -> bool:
        return any(self.c)

    def is_zero(self) -> bool:
        return not any(self.c)

    def is_rational(self) -> bool:
        return not any(self.c[1:])

    def rational_value(self) -> Fraction:
        if not self.is_rational():
            raise ValueError(f"{self} is not rational")
        return self.c[0]

    # --- presentation -------------------------------------------------

    def __str__(self) -> str:
        parts = []
        for k, a in enumerate(self.c):
            if not a:
                continue
            mag = str(abs(a)) if k == 0 else (f"{abs(a)}*z^{k}" if abs(a) != 1 else f"z^{k}")
            if not parts:
                parts.append(mag if a > 0 else f"-{mag}")
            else:
                parts.append(f"+ {mag}" if a > 0 else f"- {mag}")
        return " ".join(parts) if parts else "0"

    def __repr__(self) -> str:
        return f"CycScalar({self})"

    def to_json(self) -> list[str]:
        return [str(a) for a in self.c]

    @classmethod
    def from_json(cls, data: Sequence[str]) -> "CycScalar":
        return cls(Fraction(s) for s in data)


_ZERO_ELT = CycScalar([0] * DEGREE)
_ONE_ELT = CycScalar.from_rational(1)

# Named constants used throughout the catalog computations.  The surd
# expressions are standard Gauss-sum identities in Q(zeta_24).
I_UNIT = CycScalar.zeta(6)
SQRT2 = CycScalar.zeta(3) + CycScalar.zeta(21)
SQRT3 = CycScalar.zeta(2) + CycScalar.zeta(22)
SQRT6 = SQRT2 * SQRT3
SQRT_MINUS6 = I_UNIT * SQRT6
HALF_I = I_UNIT * CycScalar.from_rational(Fraction(1, 2))

NAMED_CONSTANTS = {
    "i": I_UNIT,
    "sqrt2": SQRT2,
    "sqrt3": SQRT3,
    "sqrt6": SQRT6,
    "sqrt_minus6": SQRT_MINUS6,
    "half_i": HALF_I,
}

assert (SQRT2 * SQRT2).rational_value() == 2
assert (SQRT3 * SQRT3).rational_value() == 3
assert (SQRT_MINUS6 * SQRT_MINUS6).rational_value() == -6


# --- exact k-th roots -------------------------------------------------

def monomial_shape(x: CycScalar) -> tuple[Fraction, int] | None:
    """Write x as q * z^m with q rational, if possible.

    Returns (q, m) with 0 <= m < ORDER, preferring the smallest m; None if x
    has no such shape.  Zero is reported as (0, 0).
    """
    if x.is_zero():
        return Fraction(0), 0
    for m in range(ORDER):
        y = x * CycScalar.zeta(-m)
        if y.is_rational():
            return y.rational_value(), m
    return None


def _int_nth_root(n: int, k: int) -> int | None:
    """Exact k-th root of a nonnegative integer, or None."""
    if n < 0:
        raise ValueError("negative radicand")
    if n in (0, 1):
        return n
    lo, hi = 1, 1
    while hi**k < n:
        hi *= 2
    while lo < hi:
        mid = (lo + hi) // 2
        if mid**k < n:
            lo = mid + 1
        else:
            hi = mid
    return lo if lo**k == n else None


def _rational_nth_root(q: Fraction, k: int) -> Fraction | None:
    if q < 0:
        if k % 2 == 0:
            return None
        root = _rational_nth_root(-q, k)
        return None if root is None else -root
    num = _int_nth_root(q.numerator, k)
    den = _int_nth_root(q.denominator, k)
    if num is None or den is None:
        return None
    return Fraction(num, den)


def _squarefree_decomposition(n: int) -> tuple[int, int]:
    """n = s*s * r with r squarefree, for n > 0."""
    s, r = 1, 1
    d = 2
    while d * d <= n:
        e = 0
        while n % d == 0:
            n //= d
            e += 1
        s *= d ** (e // 2)
        if e % 2:
            r *= d
        d += 1
    return s, r * n


_SURDS = {1: _ONE_ELT, 2: SQRT2, 3: SQRT3, 6: SQRT6}


def square_roots(x: CycScalar) -> list[CycScalar]:
    """All square roots of x lying in the field, for monomial-shaped x.

    Inputs that are not of the shape q * z^m yield [] — such roots are never
    needed here and finding them exactly would require genuine lattice work.
    """
    if x.is_zero():
        return [x]
    shape = monomial_shape(x)
    if shape is None:
        return []
    q, m = shape
    if q < 0:
        q, m = -q, (m + ORDER // 2) % ORDER
    if m % 2:
        return []
    # sqrt(num/den) = sqrt(num*den)/den, pulled apart into s * sqrt(r).
    s, r = _squarefree_decomposition(q.numerator * q.denominator)
    if r not in _SURDS:
        return []
    root = (CycScalar.from_rational(Fraction(s, q.denominator))
            * _SURDS[r] * CycScalar.zeta(m // 2))
    return [root, -root]


def _odd_roots(x: CycScalar, k: int) -> list[CycScalar]:
    shape = monomial_shape(x)
    if shape is None:
        return []
    q, m = shape
    if q < 0:
        # fold -1 = z^(ORDER/2) into the root-of-unity part (k is odd, so
        # the rational part keeps a k-th root only if |q| has one)
        q, m = -q, (m + ORDER // 2) % ORDER
    s = _rational_nth_root(q, k)
    if s is None:
        return []
    g = 1
    a, b = k, ORDER
    while b:
        a, b = b, a % b
    g = a  # gcd(k, ORDER)
    if m % g:
        return []
    step = ORDER // g
    t0 = (m // g) * pow(k // g, -1, step) % step
    return [CycScalar.from_rational(s) * CycScalar.zeta(t0 + j * step) for j in range(g)]


def kth_roots(x: CycScalar, k: int) -> list[CycScalar]:
    """All solutions c in the field of c**k = x that the shape search finds.

    k factors as 2^a * m; odd parts go through the rational-root path and
    each factor of two through `square_roots`, which is how surd-valued
    roots like (1+i)**4 = -4 are reached.
    """
    if k < 1:
        raise ValueError("k must be positive")
    if k == 1:
        return [x]
    if x.is_zero():
        return [x]
    if k % 2 == 0:
        found: list[CycScalar] = []
        for u in kth_roots(x, k // 2):
            for r in square_roots(u):
                if r not in found:
                    found.append(r)
        return found
    return _odd_roots(x, k)
