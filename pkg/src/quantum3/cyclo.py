"""Exact arithmetic in the coefficient ring of the level-r quantum theories.

The abstract root of unity zeta stands for q^(1/2).  For even r every
evaluation zeta -> e^(i pi s/r) with gcd(s, r) = 1 lands on a primitive
2r-th root of unity, so the ring of coefficients is Q[x]/Phi_2r(x).  For
odd r the even-s evaluations land on primitive r-th roots instead, so the
ring tracks both relations at once: elements are reduced modulo
M_r = Phi_r * Phi_2r, which is CRT-isomorphic to the pair of cyclotomic
fields.  Every evaluation allowed by gcd(s, r) = 1 is then a genuine ring
homomorphism to the complex numbers, and equalities certified here hold
simultaneously at every admissible s.
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache


def _poly_mul(a: list[int], b: list[int]) -> list[int]:
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] += ai * bj
    return out


def _poly_divmod_monic(num: list[int], den: list[int]) -> tuple[list[int], list[int]]:
    # den must be monic; exact division over the integers.
    num = list(num)
    dd = len(den) - 1
    quot = [0] * max(1, len(num) - dd)
    for k in range(len(num) - 1, dd - 1, -1):
        c = num[k]
        if c:
            quot[k - dd] = c
            for j in range(dd + 1):
                num[k - dd + j] -= c * den[j]
    while len(num) > 1 and num[-1] == 0:
        num.pop()
    return quot, num


@lru_cache(maxsize=None)
def cyclotomic_poly(n: int) -> tuple[int, ...]:
    """Integer coefficients of the n-th cyclotomic polynomial, low degree first."""
    if n < 1:
        raise ValueError(f"cyclotomic order must be positive, got {n}")
    if n == 1:
        return (-1, 1)
    num = [-1] + [0] * (n - 1) + [1]
    for d in range(1, n):
        if n % d == 0:
            num, rem = _poly_divmod_monic(num, list(cyclotomic_poly(d)))
            if any(rem[1:]) or rem[0] != 0:
                raise AssertionError(f"cyclotomic recursion left a remainder at n={n}")
    return tuple(num)


@lru_cache(maxsize=None)
def _ring_modulus(r: int) -> tuple[int, ...]:
    # Odd r keeps both the order-2r and order-r relations alive; see module docstring.
    if r < 3:
        raise ValueError(f"level must satisfy r >= 3, got {r}")
    if r % 2:
        return tuple(_poly_mul(list(cyclotomic_poly(r)), list(cyclotomic_poly(2 * r))))
    return cyclotomic_poly(2 * r)


def _reduce_mod(coeffs: list[int], modulus: tuple[int, ...]) -> list[int]:
    deg = len(modulus) - 1
    coeffs = list(coeffs)
    for k in range(len(coeffs) - 1, deg - 1, -1):
        c = coeffs[k]
        if c:
            coeffs[k] = 0
            for j in range(deg):
                coeffs[k - deg + j] -= c * modulus[j]
    del coeffs[deg:]
    while len(coeffs) < deg:
        coeffs.append(0)
    return coeffs


class CycloNum:
    """An exact element of the coefficient ring for level r.

    Stored as an integer coefficient vector over the canonical power basis
    together with one positive common denominator, fully reduced.  Values
    are immutable and hashable; equality is equality of canonical forms,
    hence equality under every evaluation ev(., s) with gcd(s, r) = 1.
    """

    __slots__ = ("_r", "_num", "_den")

    def __init__(self, r: int, coeffs, den: int = 1):
        """Build the element sum coeffs[k] * zeta^k / den; exponents fold mod 2r."""
        if r < 3:
            raise ValueError(f"level must satisfy r >= 3, got {r}")
        modulus = _ring_modulus(r)
        folded = [0] * (2 * r)
        common = den
        items = list(coeffs)
        fracs = [Fraction(c) for c in items]
        for f in fracs:
            common = common * f.denominator // math.gcd(common, f.denominator)
        if common == 0:
            raise ZeroDivisionError("zero denominator")
        for k, f in enumerate(fracs):
            folded[k % (2 * r)] += int(f * common)
        num = _reduce_mod(folded, modulus)
        self._r = r
        self._num, self._den = _normalize(num, common)

    @classmethod
    def _raw(cls, r: int, num: list[int], den: int) -> CycloNum:
        self = object.__new__(cls)
        self._r = r
        self._num, self._den = _normalize(num, den)
        return self

    @classmethod
    def zero(cls, r: int) -> CycloNum:
        return cls(r, ())

    @classmethod
    def one(cls, r: int) -> CycloNum:
        return cls(r, (1,))

    @classmethod
    def from_rational(cls, r: int, value) -> CycloNum:
        return cls(r, (value,))

    @classmethod
    def zeta_pow(cls, r: int, k: int) -> CycloNum:
        """The basis monomial zeta^k, any integer k (folded mod 2r)."""
        e = k % (2 * r)
        return cls(r, [0] * e + [1])

    @property
    def r(self) -> int:
        return self._r

    @property
    def order(self) -> int:
        return 2 * self._r

    @property
    def coeffs(self) -> tuple[Fraction, ...]:
        """Canonical coefficient vector, padded to length 2r."""
        out = [Fraction(c, self._den) for c in self._num]
        out += [Fraction(0)] * (2 * self._r - len(out))
        return tuple(out)

    def is_zero(self) -> bool:
        return not any(self._num)

    def is_rational(self) -> bool:
        return not any(self._num[1:])

    def as_rational(self) -> Fraction:
        if not self.is_rational():
            raise ValueError(f"{self!r} is not rational")
        return Fraction(self._num[0], self._den)

    def _check_compatible(self, other: CycloNum) -> None:
        if self._r != other._r:
            raise ValueError(f"mixed levels {self._r} and {other._r}")

    def __add__(self, other):
        other = _coerce(other, self._r)
        if other is NotImplemented:
            return NotImplemented
        self._check_compatible(other)
        g = math.gcd(self._den, other._den)
        la, lb = other._den // g, self._den // g
        num = [a * la + b * lb for a, b in zip(self._num, other._num)]
        return CycloNum._raw(self._r, num, self._den * la)

    __radd__ = __add__

    def __neg__(self) -> CycloNum:
        return CycloNum._raw(self._r, [-a for a in self._num], self._den)

    def __sub__(self, other):
        other = _coerce(other, self._r)
        if other is NotImplemented:
            return NotImplemented
        return self.__add__(-other)

    def __rsub__(self, other):
        other = _coerce(other, self._r)
        if other is NotImplemented:
            return NotImplemented
        return other.__sub__(self)

    def __mul__(self, other):
        other = _coerce(other, self._r)
        if other is NotImplemented:
            return NotImplemented
        self._check_compatible(other)
        num = _reduce_mod(_poly_mul(self._num, other._num), _ring_modulus(self._r))
        return CycloNum._raw(self._r, num, self._den * other._den)

    __rmul__ = __mul__

    def inverse(self) -> CycloNum:
        """Multiplicative inverse; raises ZeroDivisionError if none exists."""
        if self.is_zero():
            raise ZeroDivisionError("division by zero CycloNum")
        modulus = [Fraction(c) for c in _ring_modulus(self._r)]
        a = [Fraction(c, self._den) for c in self._num]
        g, u = _poly_ext_gcd(a, modulus)
        if len(g) != 1:
            raise ZeroDivisionError(f"{self!r} is a zero divisor")
        scale = g[0]
        inv = [c / scale for c in u]
        common = 1
        for c in inv:
            common = common * c.denominator // math.gcd(common, c.denominator)
        num = _reduce_mod([int(c * common) for c in inv], _ring_modulus(self._r))
        return CycloNum._raw(self._r, num, common)

    def __truediv__(self, other):
        other = _coerce(other, self._r)
        if other is NotImplemented:
            return NotImplemented
        self._check_compatible(other)
        return self * other.inverse()

    def __rtruediv__(self, other):
        other = _coerce(other, self._r)
        if other is NotImplemented:
            return NotImplemented
        return other * self.inverse()

    def __pow__(self, exponent: int) -> CycloNum:
        if not isinstance(exponent, int):
            return NotImplemented
        base = self
        if exponent < 0:
            base = self.inverse()
            exponent = -exponent
        out = CycloNum.one(self._r)
        while exponent:
            if exponent & 1:
                out = out * base
            base = base * base
            exponent >>= 1
        return out

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = CycloNum.from_rational(self._r, other)
        if not isinstance(other, CycloNum):
            return NotImplemented
        return (self._r, self._num, self._den) == (other._r, other._num, other._den)

    def __hash__(self) -> int:
        return hash((self._r, self._num, self._den))

    def evaluate(self, s: int) -> complex:
        """Numerical value with zeta = e^(i pi s/r); requires gcd(s, r) = 1."""
        if math.gcd(s, self._r) != 1:
            raise ValueError(f"s={s} is not coprime to r={self._r}")
        total = 0j
        for k, c in enumerate(self._num):
            if c:
                angle = math.pi * ((s * k) % (2 * self._r)) / self._r
                total += c * complex(math.cos(angle), math.sin(angle))
        return total / self._den

    def __repr__(self) -> str:
        terms = [f"{Fraction(c, self._den)}*z^{k}" for k, c in enumerate(self._num) if c]
        body = " + ".join(terms) if terms else "0"
        return f"CycloNum(r={self._r}: {body})"


def _normalize(num: list[int], den: int) -> tuple[tuple[int, ...], int]:
    if den < 0:
        num = [-a for a in num]
        den = -den
    g = den
    for a in num:
        g = math.gcd(g, a)
        if g == 1:
            break
    if g > 1:
        num = [a // g for a in num]
        den //= g
    if not any(num):
        den = 1
    return tuple(num), den


def _coerce(value, r: int):
    if isinstance(value, CycloNum):
        return value
    if isinstance(value, (int, Fraction)):
        return CycloNum.from_rational(r, value)
    return NotImplemented


def _poly_ext_gcd(a: list[Fraction], b: list[Fraction]) -> tuple[list[Fraction], list[Fraction]]:
    """Return (g, u) with u*a = g (mod b), g the monic-free gcd of a and b."""
    r0, r1 = list(a), list(b)
    u0, u1 = [Fraction(1)], [Fraction(0)]
    while any(r1):
        q, rem = _frac_poly_divmod(r0, r1)
        r0, r1 = r1, rem
        u0, u1 = u1, _frac_poly_sub(u0, _frac_poly_mul(q, u1))
    while len(r0) > 1 and r0[-1] == 0:
        r0.pop()
    return r0, u0


def _frac_poly_divmod(num: list[Fraction], den: list[Fraction]) -> tuple[list[Fraction], list[Fraction]]:
    num = list(num)
    while len(den) > 1 and den[-1] == 0:
        den = den[:-1]
    dd = len(den) - 1
    lead = den[-1]
    if len(num) < len(den):
        return [Fraction(0)], num
    quot = [Fraction(0)] * (len(num) - dd)
    for k in range(len(num) - 1, dd - 1, -1):
        c = num[k] / lead
        if c:
            quot[k - dd] = c
            for j in range(dd + 1):
                num[k - dd + j] -= c * den[j]
    while len(num) > 1 and num[-1] == 0:
        num.pop()
    return quot, num


def _frac_poly_mul(a: list[Fraction], b: list[Fraction]) -> list[Fraction]:
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] += ai * bj
    return out


def _frac_poly_sub(a: list[Fraction], b: list[Fraction]) -> list[Fraction]:
    n = max(len(a), len(b))
    a = a + [Fraction(0)] * (n - len(a))
    b = b + [Fraction(0)] * (n - len(b))
    return [x - y for x, y in zip(a, b)]


@lru_cache(maxsize=None)
def quantum_int(n: int, r: int) -> CycloNum:
    """The quantum integer [n] = zeta^(n-1) + zeta^(n-3) + ... + zeta^(1-n)."""
    if not 0 <= n <= r - 1:
        raise ValueError(f"quantum_int requires 0 <= n <= r-1, got n={n}, r={r}")
    coeffs = [0] * (2 * r)
    for t in range(n):
        coeffs[(n - 1 - 2 * t) % (2 * r)] += 1
    return CycloNum(r, coeffs)


@lru_cache(maxsize=None)
def quantum_factorial(n: int, r: int) -> CycloNum:
    """[n]! = [1][2]...[n], with [0]! = 1."""
    if not 0 <= n <= r - 1:
        raise ValueError(f"quantum_factorial requires 0 <= n <= r-1, got n={n}, r={r}")
    if n == 0:
        return CycloNum.one(r)
    return quantum_factorial(n - 1, r) * quantum_int(n, r)


@lru_cache(maxsize=None)
def _inv_quantum_factorial(n: int, r: int) -> CycloNum:
    return quantum_factorial(n, r).inverse()


def ev(x: CycloNum, s: int) -> complex:
    """Evaluate x at zeta = e^(i pi s/r); a ring homomorphism for gcd(s, r) = 1."""
    return x.evaluate(s)


def is_near_integer(z: complex, tol: float) -> int | None:
    """The nearest integer when z sits within tol of one, else None."""
    z = complex(z)
    if abs(z.imag) >= tol:
        return None
    n = round(z.real)
    if abs(z - n) < tol:
        return int(n)
    return None
