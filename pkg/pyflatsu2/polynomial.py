"""
Dense integer polynomials in one variable t, lowest degree first.
"""
import numbers
from fractions import Fraction

from .errors import InexactDivision


class IntPolynomial:
    """
    Polynomial with arbitrary-precision integer coefficients.

    ``coeffs[k]`` is the coefficient of t^k. Trailing zeros are stripped, so the
    zero polynomial has no coefficients and degree -1.
    """

    ZERO_DEGREE = -1

    def __init__(self, coeffs=()):
        coeffs = list(coeffs)
        for c in coeffs:
            if isinstance(c, bool) or not isinstance(c, numbers.Integral):
                raise ValueError("coefficients must be integers")
        coeffs = [int(c) for c in coeffs]
        while coeffs and coeffs[-1] == 0:
            coeffs.pop()
        self._coeffs = tuple(coeffs)

    @classmethod
    def monomial(cls, degree, coeff=1):
        if degree < 0:
            raise ValueError("monomials need a nonnegative degree")
        return cls([0] * degree + [coeff])

    @classmethod
    def constant(cls, c):
        return cls([c])

    @classmethod
    def parse(cls, text):
        """
        Parse comma separated coefficients, lowest degree first, e.g. "1,0,1".
        """
        parts = [p.strip() for p in text.split(",") if p.strip() != ""]
        try:
            return cls(int(p) for p in parts)
        except ValueError:
            raise ValueError(f"cannot parse polynomial coefficients {text!r}")

    @classmethod
    def from_json(cls, values):
        return cls(int(v) for v in values)

    @property
    def coeffs(self):
        return self._coeffs

    def degree(self):
        return len(self._coeffs) - 1 if self._coeffs else self.ZERO_DEGREE

    def is_zero(self):
        return not self._coeffs

    def __getitem__(self, k):
        if k < 0:
            raise IndexError("no negative exponents")
        return self._coeffs[k] if k < len(self._coeffs) else 0

    def __len__(self):
        return len(self._coeffs)

    def __iter__(self):
        return iter(self._coeffs)

    def __eq__(self, other):
        if isinstance(other, numbers.Integral):
            other = IntPolynomial.constant(other)
        if not isinstance(other, IntPolynomial):
            return NotImplemented
        return self._coeffs == other._coeffs

    def __hash__(self):
        return hash(self._coeffs)

    @staticmethod
    def _coerce(other):
        if isinstance(other, IntPolynomial):
            return other
        if isinstance(other, numbers.Integral):
            return IntPolynomial.constant(other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        n = max(len(self), len(other))
        return IntPolynomial(self[k] + other[k] for k in range(n))

    __radd__ = __add__

    def __neg__(self):
        return IntPolynomial(-c for c in self._coeffs)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if self.is_zero() or other.is_zero():
            return IntPolynomial()
        out = [0] * (len(self) + len(other) - 1)
        for i, a in enumerate(self._coeffs):
            if a == 0:
                continue
            for j, b in enumerate(other._coeffs):
                out[i + j] += a * b
        return IntPolynomial(out)

    __rmul__ = __mul__

    def __pow__(self, exponent):
        if type(exponent) is not int or exponent < 0:
            raise ValueError("exponent must be a nonnegative integer")
        result = IntPolynomial.constant(1)
        base = self
        while exponent:
            if exponent & 1:
                result = result * base
            base = base * base
            exponent >>= 1
        return result

    def shift(self, k):
        """Multiply by t^k, k >= 0."""
        if k < 0:
            raise ValueError("shift must be nonnegative")
        if self.is_zero():
            return self
        return IntPolynomial([0] * k + list(self._coeffs))

    def divmod(self, divisor):
        """
        Long division over the integers.

        :param divisor: nonzero IntPolynomial whose leading coefficient divides every step
        :return: (quotient, remainder)
        """
        if divisor.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self._coeffs)
        lead = divisor._coeffs[-1]
        dd = divisor.degree()
        quot = [0] * max(len(rem) - dd, 0)
        for k in range(len(rem) - 1, dd - 1, -1):
            c = rem[k]
            if c == 0:
                continue
            if c % lead:
                break
            q = c // lead
            quot[k - dd] = q
            for i, d in enumerate(divisor._coeffs):
                rem[k - dd + i] -= q * d
        return IntPolynomial(quot), IntPolynomial(rem)

    def exact_div(self, divisor):
        """Quotient of an exact division; raises InexactDivision otherwise."""
        quot, rem = self.divmod(divisor)
        if not rem.is_zero():
            raise InexactDivision(rem)
        return quot

    def __call__(self, x):
        """Evaluate at an int or Fraction by Horner's rule (exact)."""
        if not isinstance(x, numbers.Rational):
            raise ValueError("evaluate at exact rationals only")
        acc = 0
        for c in reversed(self._coeffs):
            acc = acc * x + c
        return Fraction(acc) if isinstance(x, Fraction) else acc

    def reversed_to(self, d):
        """t^d P(1/t); requires d >= degree."""
        if d < self.degree():
            raise ValueError(f"cannot reverse a degree {self.degree()} polynomial to degree {d}")
        padded = list(self._coeffs) + [0] * (d + 1 - len(self._coeffs))
        return IntPolynomial(reversed(padded))

    def is_palindromic(self, d):
        """True when t^d P(1/t) = P(t)."""
        if d < self.degree():
            return False
        return self.reversed_to(d) == self

    def is_nonnegative(self):
        return all(c >= 0 for c in self._coeffs)

    def to_json(self):
        return [str(c) for c in self._coeffs]

    def __str__(self):
        if self.is_zero():
            return "0"
        terms = []
        for k, c in enumerate(self._coeffs):
            if c == 0:
                continue
            mag = abs(c)
            if k == 0:
                body = str(mag)
            else:
                power = "t" if k == 1 else f"t^{k}"
                body = power if mag == 1 else f"{mag}{power}"
            terms.append((c < 0, body))
        negative, body = terms[0]
        out = f"-{body}" if negative else body
        for negative, body in terms[1:]:
            out += f" - {body}" if negative else f" + {body}"
        return out

    def __repr__(self):
        return f"IntPolynomial({list(self._coeffs)})"


T = IntPolynomial([0, 1])
ONE = IntPolynomial([1])
