"""Finite fields GF(p^f) backed by Zech-logarithm tables.

Elements are plain integers in ``range(q)``: index 0 is zero and index
``e >= 1`` is ``omega**(e - 1)`` for the chosen primitive element omega.
Multiplication is exponent arithmetic; addition goes through the Zech
table ``1 + omega**d``.  Every arithmetic method accepts Python ints or
numpy integer arrays (broadcast together).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

MAX_ORDER = 1 << 16


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


def prime_power(q: int) -> tuple[int, int] | None:
    """Return ``(p, f)`` with ``q == p**f`` or None if q is not a prime power."""
    if q < 2:
        return None
    p = next(d for d in range(2, q + 1) if q % d == 0)
    if not is_prime(p):
        return None
    f, n = 0, q
    while n % p == 0:
        n //= p
        f += 1
    return (p, f) if n == 1 else None


def _prime_factors(n: int) -> list[int]:
    out, d = [], 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


def _powers_of_x(p: int, modulus: list[int]) -> list[int] | None:
    """Integer encodings of x^0, x^1, ... modulo ``modulus`` until the cycle closes.

    Returns None if x is not a unit or has order < p^f - 1.
    """
    f = len(modulus) - 1
    q = p**f
    low = [(-c) % p for c in modulus[:f]]  # x^f == sum low[i] x^i
    if modulus[0] % p == 0:
        return None
    coeffs = [0] * f
    coeffs[0] = 1
    out = []
    for _ in range(q - 1):
        out.append(sum(c * p**i for i, c in enumerate(coeffs)))
        top = coeffs[-1]
        coeffs = [0] + coeffs[:-1]
        if top:
            coeffs = [(c + top * l) % p for c, l in zip(coeffs, low)]
        if coeffs == [1] + [0] * (f - 1) and len(out) < q - 1:
            return None
    if coeffs != [1] + [0] * (f - 1):
        return None
    return out


def _encode_poly(p: int, coeffs: list[int]) -> int:
    return sum(c * p**i for i, c in enumerate(coeffs))


class FieldCtx:
    """A fully tabulated GF(p^f).  Immutable after construction."""

    def __init__(self, p: int, f: int, modulus: list[int], powers: list[int]):
        self.p = p
        self.f = f
        self.q = q = p**f
        self.modulus = tuple(modulus)
        self.n = q - 1  # order of the multiplicative group
        self.omega = 2 if q > 2 else 1
        self.elements = np.arange(q)
        self.exp_table = np.arange(1, q)  # exponent -> element index
        self.log_table = np.full(q, -1)
        self.log_table[1:] = np.arange(q - 1)

        # int encoding (base-p coefficients, low degree first) <-> index
        self.int_of = np.zeros(q, dtype=np.int64)
        self.int_of[1:] = powers
        self.index_of = np.zeros(q, dtype=np.int64)
        self.index_of[self.int_of] = np.arange(q)

        # zech[d] = index of 1 + omega^d
        ints = np.asarray(powers, dtype=np.int64)
        const = ints % p
        plus_one = ints - const + (const + 1) % p
        self.zech = self.index_of[plus_one]

        self.char_table = np.zeros(q, dtype=np.int8)
        if p == 2:
            self.char_table[1:] = 1
        else:
            self.char_table[1:] = np.where(np.arange(q - 1) % 2 == 0, 1, -1)

    def __repr__(self):
        return f"FieldCtx(GF({self.p}^{self.f}))"

    def __reduce__(self):
        return (build_field, (self.p, self.f, list(self.modulus)))

    # conversions

    def elt(self, n: int) -> int:
        """Element index of the field element with integer encoding ``n``."""
        if not 0 <= n < self.q:
            raise ValueError(f"{n} is not an element encoding of GF({self.q})")
        return int(self.index_of[n])

    def const(self, n: int) -> int:
        """Element index of the integer n reduced into the prime field."""
        return int(self.index_of[n % self.p])

    def to_int(self, a):
        if isinstance(a, (int, np.integer)):
            return int(self.int_of[a])
        return self.int_of[np.asarray(a)]

    # arithmetic

    def mul(self, a, b):
        n = self.n
        if isinstance(a, (int, np.integer)) and isinstance(b, (int, np.integer)):
            if a == 0 or b == 0:
                return 0
            return (int(a) + int(b) - 2) % n + 1
        a, b = np.asarray(a), np.asarray(b)
        return np.where((a == 0) | (b == 0), 0, (a + b - 2) % n + 1)

    def add(self, a, b):
        n = self.n
        if isinstance(a, (int, np.integer)) and isinstance(b, (int, np.integer)):
            a, b = int(a), int(b)
            if a == 0:
                return b
            if b == 0:
                return a
            z = int(self.zech[(b - a) % n])
            return 0 if z == 0 else (a + z - 2) % n + 1
        a, b = np.broadcast_arrays(np.asarray(a), np.asarray(b))
        z = self.zech[(b - a) % n]
        out = np.where(z == 0, 0, (a + z - 2) % n + 1)
        out = np.where(a == 0, b, out)
        return np.where(b == 0, a, out)

    def neg(self, a):
        if self.p == 2:
            return a
        n, half = self.n, self.n // 2
        if isinstance(a, (int, np.integer)):
            return 0 if a == 0 else (int(a) - 1 + half) % n + 1
        a = np.asarray(a)
        return np.where(a == 0, 0, (a - 1 + half) % n + 1)

    def sub(self, a, b):
        return self.add(a, self.neg(b))

    def inv(self, a):
        n = self.n
        if isinstance(a, (int, np.integer)):
            if a == 0:
                raise ZeroDivisionError("inverse of zero")
            return (-(int(a) - 1)) % n + 1
        a = np.asarray(a)
        if np.any(a == 0):
            raise ZeroDivisionError("inverse of zero")
        return (-(a - 1)) % n + 1

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def pow(self, a, k: int):
        n = self.n
        if isinstance(a, (int, np.integer)):
            if a == 0:
                if k < 0:
                    raise ZeroDivisionError("negative power of zero")
                return 1 if k == 0 else 0
            return ((int(a) - 1) * k) % n + 1
        a = np.asarray(a)
        if k < 0 and np.any(a == 0):
            raise ZeroDivisionError("negative power of zero")
        out = ((a - 1) * k) % n + 1
        return np.where(a == 0, 1 if k == 0 else 0, out)

    def frobenius(self, a, m: int = 1):
        return self.pow(a, self.p**m)

    def chi(self, a):
        if isinstance(a, (int, np.integer)):
            return int(self.char_table[a])
        return self.char_table[np.asarray(a)]

    def is_square(self, a) -> bool:
        return self.chi(a) >= 0

    def sqrt(self, a) -> int:
        """One square root of ``a`` (the one with the smaller exponent)."""
        if a == 0:
            return 0
        e = int(a) - 1
        if self.p == 2:
            e = (e * pow(2, -1, self.n)) % self.n if self.n > 1 else 0
            return e + 1
        if e % 2:
            raise ValueError("not a square")
        return e // 2 + 1

    def sum(self, terms):
        out = 0
        for t in terms:
            out = self.add(out, t)
        return out

    def in_subfield(self, a, d: int) -> bool:
        """True iff ``a`` lies in GF(p^d)."""
        return self.pow(a, self.p**d) == a

    def nonzero(self):
        return np.arange(1, self.q)


def _validate_modulus(p: int, f: int, modulus: list[int]) -> list[int] | None:
    if len(modulus) != f + 1 or modulus[-1] % p != 1:
        raise ValueError("modulus must be monic of degree f")
    return _powers_of_x(p, [c % p for c in modulus])


def build_field(p: int, f: int = 1, modulus_override: list[int] | None = None) -> FieldCtx:
    """Tabulate GF(p^f).

    Without an override the modulus is the primitive monic polynomial of
    degree f whose base-p integer encoding (coefficients low degree first)
    is smallest, so x^3 + x + 1 is picked for GF(8).
    """
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    if f < 1:
        raise ValueError("exponent must be positive")
    if p**f > MAX_ORDER:
        raise ValueError(f"GF({p}^{f}) exceeds the table size limit {MAX_ORDER}")
    if modulus_override is not None:
        modulus = [c % p for c in modulus_override]
        powers = _validate_modulus(p, f, modulus)
        if powers is None:
            raise ValueError(f"modulus {modulus_override} is not primitive over GF({p})")
        return FieldCtx(p, f, modulus, powers)
    for code in range(p**f, 2 * p**f):
        modulus = [(code // p**i) % p for i in range(f + 1)]
        if modulus[0] == 0:
            continue
        powers = _powers_of_x(p, modulus)
        if powers is not None:
            return FieldCtx(p, f, modulus, powers)
    raise RuntimeError("no primitive polynomial found")  # unreachable for prime p


def field_of_order(q: int) -> FieldCtx:
    pf = prime_power(q)
    if pf is None:
        raise ValueError(f"{q} is not a prime power")
    return build_field(*pf)


def chi(ctx: FieldCtx, z) -> int:
    """Quadratic character: 0 at zero, +1 on nonzero squares, -1 otherwise."""
    return ctx.chi(z)


@dataclass(frozen=True)
class SquareClasses:
    q_plus: frozenset
    q_minus: frozenset

    def of(self, sign: int) -> frozenset:
        return self.q_plus if sign == 1 else self.q_minus


def square_classes(ctx: FieldCtx) -> SquareClasses:
    if ctx.p == 2:
        raise ValueError("square classes are only defined here for odd q")
    nz = ctx.nonzero()
    ch = ctx.chi(nz)
    return SquareClasses(frozenset(nz[ch == 1].tolist()), frozenset(nz[ch == -1].tolist()))


def shifted_class_count(ctx: FieldCtx, shift_class: int, target_class: int) -> int:
    """|(1 + Q_shift) ∩ Q_target| by direct enumeration."""
    sc = square_classes(ctx)
    shifted = ctx.add(1, np.array(sorted(sc.of(shift_class))))
    return int(np.sum(ctx.chi(shifted) == target_class))
