"""Exact characteristic-class arithmetic in one degree-2 generator.

Cohomology rings here are truncated polynomial rings Q[x]/(x^{d+1}), with
``x`` the hyperplane class on CP^n (so the top class integrates to 1). On a
product of 2-spheres the classes ``eta_j`` square to zero, which is handled
with square-free monomials.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import factorial
from typing import Iterable, Sequence

from ._exact import fraction_str, to_fraction
from .errors import UnsupportedError, ValidationError


@dataclass(frozen=True)
class TruncatedSeries:
    """``sum coeffs[i] x^i`` modulo ``x^(trunc+1)`` with rational coefficients."""

    coeffs: tuple[Fraction, ...]
    trunc: int

    def __post_init__(self) -> None:
        if self.trunc < 0:
            raise ValidationError("truncation degree must be >= 0")
        c = [to_fraction(v) for v in self.coeffs][: self.trunc + 1]
        c += [Fraction(0)] * (self.trunc + 1 - len(c))
        object.__setattr__(self, "coeffs", tuple(c))

    @classmethod
    def constant(cls, c, trunc: int) -> "TruncatedSeries":
        return cls((to_fraction(c),), trunc)

    @classmethod
    def monomial(cls, degree: int, trunc: int, c=1) -> "TruncatedSeries":
        coeffs = [Fraction(0)] * (trunc + 1)
        if degree <= trunc:
            coeffs[degree] = to_fraction(c)
        return cls(tuple(coeffs), trunc)

    def __getitem__(self, i: int) -> Fraction:
        return self.coeffs[i] if 0 <= i <= self.trunc else Fraction(0)

    def truncate(self, trunc: int) -> "TruncatedSeries":
        return TruncatedSeries(self.coeffs, trunc)

    def _lift(self, other) -> "TruncatedSeries":
        if isinstance(other, TruncatedSeries):
            return other
        return TruncatedSeries.constant(other, self.trunc)

    def __add__(self, other) -> "TruncatedSeries":
        other = self._lift(other)
        d = min(self.trunc, other.trunc)
        return TruncatedSeries(tuple(self[i] + other[i] for i in range(d + 1)), d)

    __radd__ = __add__

    def __neg__(self) -> "TruncatedSeries":
        return TruncatedSeries(tuple(-c for c in self.coeffs), self.trunc)

    def __sub__(self, other) -> "TruncatedSeries":
        return self + (-self._lift(other))

    def __rsub__(self, other) -> "TruncatedSeries":
        return self._lift(other) - self

    def __mul__(self, other) -> "TruncatedSeries":
        if not isinstance(other, TruncatedSeries):
            c = to_fraction(other)
            return TruncatedSeries(tuple(c * v for v in self.coeffs), self.trunc)
        d = min(self.trunc, other.trunc)
        out = [Fraction(0)] * (d + 1)
        for i, a in enumerate(self.coeffs[: d + 1]):
            if a:
                for j in range(d + 1 - i):
                    out[i + j] += a * other.coeffs[j]
        return TruncatedSeries(tuple(out), d)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "TruncatedSeries":
        if k < 0:
            return self.inverse() ** (-k)
        result = TruncatedSeries.constant(1, self.trunc)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def inverse(self) -> "TruncatedSeries":
        """Multiplicative inverse; needs a nonzero constant term."""
        if self[0] == 0:
            raise ValidationError("series with zero constant term is not invertible")
        inv = [Fraction(0)] * (self.trunc + 1)
        inv[0] = 1 / self[0]
        for k in range(1, self.trunc + 1):
            s = sum((self[j] * inv[k - j] for j in range(1, k + 1)), Fraction(0))
            inv[k] = -s / self[0]
        return TruncatedSeries(tuple(inv), self.trunc)

    def exp(self) -> "TruncatedSeries":
        """``exp`` of a series without constant term (nilpotent in the truncated ring)."""
        if self[0] != 0:
            raise ValidationError("exp is only defined here for zero constant term")
        result = TruncatedSeries.constant(1, self.trunc)
        term = TruncatedSeries.constant(1, self.trunc)
        for k in range(1, self.trunc + 1):
            term = term * self * Fraction(1, k)
            result = result + term
        return result

    def substitute_scale(self, c) -> "TruncatedSeries":
        """``f(c x)``."""
        c = to_fraction(c)
        return TruncatedSeries(tuple(v * c**i for i, v in enumerate(self.coeffs)), self.trunc)

    def top(self) -> Fraction:
        return self.coeffs[self.trunc]

    def __eq__(self, other) -> bool:
        if not isinstance(other, TruncatedSeries):
            return NotImplemented
        return self.trunc == other.trunc and self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash((self.coeffs, self.trunc))

    def to_json(self) -> dict:
        return {"trunc": self.trunc, "coeffs": [fraction_str(c) for c in self.coeffs]}

    def __str__(self) -> str:
        parts = []
        for i, c in enumerate(self.coeffs):
            if c == 0:
                continue
            mono = "" if i == 0 else ("x" if i == 1 else f"x^{i}")
            if i and abs(c) == 1:
                coef = "-" if c < 0 else ""
            else:
                coef = str(c) + ("*" if mono else "")
            parts.append(coef + mono)
        body = " + ".join(parts).replace("+ -", "- ") if parts else "0"
        return f"{body} + O(x^{self.trunc + 1})"


def sinhc_series(trunc: int) -> TruncatedSeries:
    """``sinh(u)/u = sum u^(2k) / (2k+1)!``."""
    return TruncatedSeries(tuple(Fraction(1, factorial(i + 1)) if i % 2 == 0 else 0
                                 for i in range(trunc + 1)), trunc)


def u_over_sinh(trunc: int) -> TruncatedSeries:
    """``u/sinh(u)`` by exact inversion of ``sinh(u)/u``."""
    return sinhc_series(trunc).inverse()


def ahat_cp(n: int) -> TruncatedSeries:
    """A-hat class of CP^n: ``((x/2)/sinh(x/2))^(n+1)`` truncated at degree n."""
    if n < 1:
        raise ValidationError(f"n must be >= 1, got {n}")
    return u_over_sinh(n).substitute_scale(Fraction(1, 2)) ** (n + 1)


def chern_character_line(k: int, trunc: int) -> TruncatedSeries:
    """``ch(O(k)) = exp(k x)``."""
    if trunc < 0:
        raise ValidationError("truncation degree must be >= 0")
    return TruncatedSeries.monomial(1, trunc, k).exp() if trunc else TruncatedSeries.constant(1, 0)


def line_index_cp(n: int, k: int) -> Fraction:
    """``integral over CP^n of Ahat(CP^n) ch(O(k))``: the x^n coefficient."""
    return (ahat_cp(n) * chern_character_line(k, n)).top()


def minimal_admissible_twist(n: int, max_twist: int | None = None) -> int:
    """Smallest ``k >= 1`` with a nonzero twisted index on CP^n (n odd, i.e. spin)."""
    if n < 1:
        raise ValidationError(f"n must be >= 1, got {n}")
    if n % 2 == 0:
        raise UnsupportedError(f"CP^{n} is not spin; only odd n are supported")
    # the index is a degree-n polynomial in k, so it has at most n integer roots
    limit = max_twist if max_twist is not None else n + 1
    ahat = ahat_cp(n)
    for k in range(1, limit + 1):
        if (ahat * chern_character_line(k, n)).top() != 0:
            return k
    raise AssertionError("index polynomial vanished at more points than its degree")  # pragma: no cover


class SquareFreeAlgebra:
    """Q[eta_1..eta_m]/(eta_j^2): elements are ``{frozenset(indices): coeff}``."""

    def __init__(self, m: int):
        if m < 1:
            raise ValidationError("need at least one factor")
        self.m = m

    @staticmethod
    def mul(a: dict, b: dict) -> dict:
        out: dict[frozenset, Fraction] = {}
        for sa, ca in a.items():
            for sb, cb in b.items():
                if sa & sb:
                    continue
                key = sa | sb
                out[key] = out.get(key, Fraction(0)) + ca * cb
        return {s: c for s, c in out.items() if c != 0}

    def linear(self, coeffs: Sequence) -> dict:
        return {frozenset([j]): to_fraction(c) for j, c in enumerate(coeffs) if c != 0}

    def exp(self, a: dict) -> dict:
        if frozenset() in a:
            raise ValidationError("exp needs a nilpotent argument")
        result: dict[frozenset, Fraction] = {frozenset(): Fraction(1)}
        term: dict[frozenset, Fraction] = {frozenset(): Fraction(1)}
        for k in range(1, self.m + 1):
            term = {s: c / k for s, c in self.mul(term, a).items()}
            for s, c in term.items():
                result[s] = result.get(s, Fraction(0)) + c
        return result

    def top(self, a: dict) -> Fraction:
        return a.get(frozenset(range(self.m)), Fraction(0))


def sphere_product_admissible(b: Iterable[int]) -> tuple[bool, Fraction]:
    """Top coefficient of ``ch(L)`` with ``c_1(L) = sum b_j eta_j`` on (S^2)^m.

    ``Ahat((S^2)^m) = 1``, so the twisted index is this coefficient and the
    line bundle is admissible iff it is nonzero.
    """
    b = list(b)
    alg = SquareFreeAlgebra(len(b))
    top = alg.top(alg.exp(alg.linear(b)))
    return top != 0, top
