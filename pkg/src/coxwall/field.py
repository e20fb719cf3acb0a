"""Exact arithmetic in the real cyclotomic field Q(c), c = 2*cos(pi/N).

Every quantity the reflection representation needs (the doubled Gram values
2*B(s,t) = -2*cos(pi/m_st) and all matrix entries derived from them) lies in
the ring Z[c], because c is an algebraic integer and 2*cos(pi/m) = D_{N/m}(c)
for the Dickson polynomials D_0 = 2, D_1 = x, D_{k+1} = x*D_k - D_{k-1}.
Elements are stored as integer coordinate vectors over the power basis
1, c, ..., c^(d-1), where d is the degree of the minimal polynomial of c.

Sign determination refines a rational isolating bracket of c by bisection
until the interval image of the element excludes zero.  A nonzero element of
a number field is bounded away from zero, so this terminates.
"""

from __future__ import annotations

from fractions import Fraction
import math

_minpoly_cache: dict[int, tuple[int, ...]] = {}


def dickson(k: int) -> list[int]:
    """Coefficients (low to high) of D_k, where D_k(2*cos t) = 2*cos(k*t)."""
    if k == 0:
        return [2]
    a, b = [2], [0, 1]
    for _ in range(k - 1):
        nxt = [0] + b
        for i, c in enumerate(a):
            nxt[i] -= c
        a, b = b, nxt
    return b


def _minpoly_two_cos(N: int) -> tuple[int, ...]:
    """Monic integer minimal polynomial of 2*cos(pi/N), low-to-high coeffs."""
    if N in _minpoly_cache:
        return _minpoly_cache[N]
    from sympy import Poly, Symbol, cos, minimal_polynomial, pi

    x = Symbol("x")
    poly = Poly(minimal_polynomial(2 * cos(pi / N), x), x)
    coeffs = tuple(int(c) for c in reversed(poly.all_coeffs()))
    assert coeffs[-1] == 1, "minimal polynomial must be monic"
    _minpoly_cache[N] = coeffs
    return coeffs


def _poly_eval_fraction(coeffs, x: Fraction) -> Fraction:
    acc = Fraction(0)
    for c in reversed(coeffs):
        acc = acc * x + c
    return acc


class NumberField:
    """The ring Z[c] with exact multiplication and sign determination.

    Raw elements are tuples of `degree` integers (power-basis coordinates).
    The class is deliberately dumb about rationals: matrix arithmetic never
    produces denominators.  The FieldElement wrapper adds a denominator for
    the public API.
    """

    def __init__(self, N: int):
        if N < 1:
            raise ValueError("N must be a positive integer")
        self.N = N
        self.minpoly = _minpoly_two_cos(N)
        self.degree = len(self.minpoly) - 1
        d = self.degree
        # reduction table: x^k mod minpoly for 0 <= k <= 2d-2
        xpow: list[tuple[int, ...]] = []
        for k in range(max(2 * d - 1, d)):
            if k < d:
                row = [0] * d
                row[k] = 1
            else:
                prev = xpow[k - 1]
                shifted = [0] + list(prev)
                lead = shifted[d] if len(shifted) > d else 0
                row = shifted[:d] + [0] * (d - len(shifted[:d]))
                if lead:
                    row = [row[i] - lead * self.minpoly[i] for i in range(d)]
            xpow.append(tuple(row))
        self.xpow = tuple(xpow)
        self.zero = tuple([0] * d)
        self.one = tuple([1] + [0] * (d - 1))
        self._sign_cache: dict[tuple[int, ...], int] = {}
        self._init_bracket()
        self.c_float = float((self._lo + self._hi) / 2)

    # -- construction of the isolating bracket ---------------------------

    def _init_bracket(self) -> None:
        d = self.degree
        if d == 1:
            # c is rational: minpoly x - c0
            c0 = Fraction(-self.minpoly[0])
            self._lo = c0
            self._hi = c0
            return
        # c = 2cos(pi/N) is the largest real root of its minimal polynomial;
        # every other root is below 2cos(3pi/N) < 2cos(pi/(N-1)) < c < 2.
        lo_f = 2.0 * math.cos(math.pi / (self.N - 1))
        c_f = 2.0 * math.cos(math.pi / self.N)
        lo = Fraction(lo_f).limit_denominator(10**9)
        lo = (lo + Fraction(c_f).limit_denominator(10**9)) / 2
        hi = Fraction(2)
        p_lo = _poly_eval_fraction(self.minpoly, lo)
        p_hi = _poly_eval_fraction(self.minpoly, hi)
        assert p_lo < 0 < p_hi, "isolating bracket failed sign check"
        # pre-refine so later sign queries converge quickly
        for _ in range(40):
            mid = (lo + hi) / 2
            if _poly_eval_fraction(self.minpoly, mid) < 0:
                lo = mid
            else:
                hi = mid
        self._lo, self._hi = lo, hi

    def _refine_bracket(self) -> None:
        for _ in range(16):
            mid = (self._lo + self._hi) / 2
            if _poly_eval_fraction(self.minpoly, mid) < 0:
                self._lo = mid
            else:
                self._hi = mid

    # -- ring operations on raw tuples ------------------------------------

    def reduce(self, coeffs) -> tuple[int, ...]:
        """Reduce an arbitrary-degree integer coefficient list into Z[c]."""
        d = self.degree
        out = [0] * d
        for k, c in enumerate(coeffs):
            if c:
                row = self._xq(k)
                for i in range(d):
                    out[i] += c * row[i]
        return tuple(out)

    def _xq(self, k: int) -> tuple[int, ...]:
        xpow = self.xpow
        if k < len(xpow):
            return xpow[k]
        # extend lazily (rare: only reduce() of high-degree inputs)
        rows = list(xpow)
        d = self.degree
        while k >= len(rows):
            prev = rows[-1]
            shifted = [0] + list(prev)
            lead = shifted[d] if len(shifted) > d else 0
            row = shifted[:d] + [0] * (d - len(shifted[:d]))
            if lead:
                row = [row[i] - lead * self.minpoly[i] for i in range(d)]
            rows.append(tuple(row))
        self.xpow = tuple(rows)
        return self.xpow[k]

    def add(self, a, b) -> tuple[int, ...]:
        return tuple(x + y for x, y in zip(a, b))

    def sub(self, a, b) -> tuple[int, ...]:
        return tuple(x - y for x, y in zip(a, b))

    def neg(self, a) -> tuple[int, ...]:
        return tuple(-x for x in a)

    def smul(self, k: int, a) -> tuple[int, ...]:
        return tuple(k * x for x in a)

    def mul(self, a, b) -> tuple[int, ...]:
        d = self.degree
        if d == 1:
            return (a[0] * b[0],)
        tmp = [0] * (2 * d - 1)
        for i, ai in enumerate(a):
            if ai:
                for j, bj in enumerate(b):
                    if bj:
                        tmp[i + j] += ai * bj
        out = [0] * d
        xpow = self.xpow
        for k, c in enumerate(tmp):
            if c:
                row = xpow[k]
                for i in range(d):
                    out[i] += c * row[i]
        return tuple(out)

    def two_cos_pi_over(self, m: int) -> tuple[int, ...]:
        """The element 2*cos(pi/m) as a vector in Z[c]; m must divide N."""
        if self.N % m:
            raise ValueError(f"label {m} does not divide the field period {self.N}")
        return self.reduce(dickson(self.N // m))

    # -- signs -------------------------------------------------------------

    def sign(self, a) -> int:
        """Exact sign (-1, 0, +1) of the real number a(c)."""
        if not any(a):
            return 0
        key = tuple(a)
        cached = self._sign_cache.get(key)
        if cached is not None:
            return cached
        if self.degree == 1:
            s = 1 if a[0] > 0 else -1
            self._sign_cache[key] = s
            return s
        while True:
            lo_v, hi_v = self._interval_eval(a)
            if lo_v > 0:
                s = 1
                break
            if hi_v < 0:
                s = -1
                break
            self._refine_bracket()
        if len(self._sign_cache) < 1_000_000:
            self._sign_cache[key] = s
        return s

    def _interval_eval(self, a) -> tuple[Fraction, Fraction]:
        """Interval image of a(x) over [lo, hi] by interval Horner."""
        lo_x, hi_x = self._lo, self._hi
        lo_v = hi_v = Fraction(0)
        for c in reversed(a):
            # multiply interval [lo_v, hi_v] by [lo_x, hi_x], add c
            cands = (lo_v * lo_x, lo_v * hi_x, hi_v * lo_x, hi_v * hi_x)
            lo_v, hi_v = min(cands) + c, max(cands) + c
        return lo_v, hi_v

    def float_value(self, a) -> float:
        return sum(coef * self.c_float**k for k, coef in enumerate(a))

    def __repr__(self) -> str:  # pragma: no cover
        return f"NumberField(N={self.N}, degree={self.degree})"


class FieldElement:
    """A rational multiple of a Z[c] vector: coeffs/denom in Q(c).

    Supports ==, +, -, *, unary -, sign(), is_zero(), float().  Instances
    are immutable and hashable on the normalized representation.
    """

    __slots__ = ("field", "coeffs", "denom")

    def __init__(self, field: NumberField, coeffs, denom: int = 1):
        if denom == 0:
            raise ZeroDivisionError("zero denominator")
        coeffs = tuple(int(c) for c in coeffs)
        if len(coeffs) != field.degree:
            coeffs = field.reduce(coeffs)
        if denom < 0:
            denom, coeffs = -denom, tuple(-c for c in coeffs)
        g = math.gcd(denom, *(abs(c) for c in coeffs)) if any(coeffs) else denom
        if g > 1:
            denom //= g
            coeffs = tuple(c // g for c in coeffs)
        self.field = field
        self.coeffs = coeffs
        self.denom = denom

    def _check(self, other: "FieldElement") -> None:
        if self.field is not other.field:
            raise ValueError("elements of different fields")

    def __eq__(self, other) -> bool:
        if isinstance(other, int):
            other = FieldElement(self.field, [other] + [0] * (self.field.degree - 1))
        if not isinstance(other, FieldElement):
            return NotImplemented
        return (
            self.field is other.field
            and self.coeffs == other.coeffs
            and self.denom == other.denom
        )

    def __hash__(self) -> int:
        return hash((id(self.field), self.coeffs, self.denom))

    def __add__(self, other: "FieldElement") -> "FieldElement":
        self._check(other)
        a = self.field.smul(other.denom, self.coeffs)
        b = self.field.smul(self.denom, other.coeffs)
        return FieldElement(self.field, self.field.add(a, b), self.denom * other.denom)

    def __sub__(self, other: "FieldElement") -> "FieldElement":
        self._check(other)
        a = self.field.smul(other.denom, self.coeffs)
        b = self.field.smul(self.denom, other.coeffs)
        return FieldElement(self.field, self.field.sub(a, b), self.denom * other.denom)

    def __mul__(self, other: "FieldElement") -> "FieldElement":
        self._check(other)
        return FieldElement(
            self.field,
            self.field.mul(self.coeffs, other.coeffs),
            self.denom * other.denom,
        )

    def __neg__(self) -> "FieldElement":
        return FieldElement(self.field, self.field.neg(self.coeffs), self.denom)

    def sign(self) -> int:
        return self.field.sign(self.coeffs)

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def __float__(self) -> float:
        return self.field.float_value(self.coeffs) / self.denom

    def __repr__(self) -> str:  # pragma: no cover
        body = " + ".join(
            f"{c}*c^{k}" if k else str(c) for k, c in enumerate(self.coeffs) if c
        )
        if not body:
            body = "0"
        return body if self.denom == 1 else f"({body})/{self.denom}"
