"""
Truncated Taylor series with complex-ball coefficients.

A Jet of order K stands for f(s + h) = c_0 + c_1 h + ... + c_K h^K + O(h^{K+1}),
so c_j = f^{(j)}(s)/j!. Products and quotients are truncated at the smaller
order of the two operands.
"""

from math import comb

from .balls import BallComplex, BallReal, coerce_real
from .exceptions import UndecidedError


class Jet:
    """Taylor coefficients c_0..c_K of a function around a point"""

    __slots__ = ('coeffs',)

    def __init__(self, coeffs):
        self.coeffs = tuple(coeffs)

    @property
    def order(self):
        return len(self.coeffs) - 1

    @property
    def prec(self):
        return self.coeffs[0].prec

    def __getitem__(self, j):
        return self.coeffs[j]

    def __len__(self):
        return len(self.coeffs)

    @classmethod
    def constant(cls, value, order, prec):
        value = BallComplex.coerce(value, prec)
        zero = BallComplex.from_real(0, prec)
        return cls([value] + [zero] * order)

    @classmethod
    def linear(cls, value, order, prec):
        """Jet of h -> value + h"""
        value = BallComplex.coerce(value, prec)
        one = BallComplex.from_real(1, prec)
        zero = BallComplex.from_real(0, prec)
        return cls(([value, one] + [zero] * order)[:order + 1])

    @classmethod
    def exp_linear(cls, rate, order, prec):
        """Jet of h -> exp(rate·h) for a real ball rate"""
        rate = coerce_real(rate, prec)
        coeffs = [BallComplex.from_real(1, prec)]
        term = coerce_real(1, prec)
        for j in range(1, order + 1):
            term = term * rate / j
            coeffs.append(BallComplex.from_real(term))
        return cls(coeffs)

    @classmethod
    def reciprocal_linear(cls, value, order, prec):
        """Jet of h -> 1/(value + h)"""
        value = BallComplex.coerce(value, prec)
        inverse = BallComplex.from_real(1, prec) / value
        coeffs = [inverse]
        for _ in range(order):
            coeffs.append(-coeffs[-1] * inverse)
        return cls(coeffs)

    def __add__(self, other):
        order = min(self.order, other.order)
        return Jet(a + b for a, b in zip(self.coeffs[:order + 1], other.coeffs[:order + 1]))

    def __sub__(self, other):
        order = min(self.order, other.order)
        return Jet(a - b for a, b in zip(self.coeffs[:order + 1], other.coeffs[:order + 1]))

    def __neg__(self):
        return Jet(-c for c in self.coeffs)

    def __mul__(self, other):
        if not isinstance(other, Jet):
            return Jet(c * other for c in self.coeffs)
        order = min(self.order, other.order)
        out = []
        for k in range(order + 1):
            total = self.coeffs[0] * other.coeffs[k]
            for i in range(1, k + 1):
                total = total + self.coeffs[i] * other.coeffs[k - i]
            out.append(total)
        return Jet(out)

    __rmul__ = __mul__

    def mul_linear(self, value):
        """Multiply by (value + h), keeping the order"""
        value = BallComplex.coerce(value, self.prec)
        out = [self.coeffs[0] * value]
        for k in range(1, len(self.coeffs)):
            out.append(self.coeffs[k] * value + self.coeffs[k - 1])
        return Jet(out)

    def __truediv__(self, other):
        """Series quotient q with q·other = self"""
        if not isinstance(other, Jet):
            return Jet(c / other for c in self.coeffs)
        head = other.coeffs[0]
        if head.contains_zero():
            raise UndecidedError("series division by a coefficient ball containing 0", head.prec)
        order = min(self.order, other.order)
        quotient = []
        for k in range(order + 1):
            total = self.coeffs[k]
            for i in range(1, k + 1):
                total = total - other.coeffs[i] * quotient[k - i]
            quotient.append(total / head)
        return Jet(quotient)

    def derivative(self):
        """Jet of f' (one order lower)"""
        return Jet(self.coeffs[k] * k for k in range(1, len(self.coeffs)))

    def truncate(self, order):
        return Jet(self.coeffs[:order + 1])

    def add_error(self, bounds):
        """Widen coefficient j by bounds[j]"""
        return Jet(c.add_error(b) for c, b in zip(self.coeffs, bounds))


def shifted_jet(center, u, order, remainder, full_order):
    """
    Taylor model: jet of order `order` at center + u from the center jet.

    `center` holds c_0..c_{K-1} and `remainder` bounds |f^{(K)}/K!| on the
    segment [center, center + u], K = full_order. Coefficient j is
    sum_i C(j+i, j) c_{j+i} u^i widened by C(K, j)·remainder·|u|^(K-j).
    """
    u = coerce_real(u, center.prec)
    powers = [coerce_real(1, center.prec)]
    for _ in range(full_order):
        powers.append(powers[-1] * u)
    magnitude = abs(u).upper()
    out = []
    for j in range(order + 1):
        total = center.coeffs[j]
        for i in range(1, full_order - j):
            total = total + center.coeffs[j + i] * (powers[i] * comb(j + i, j))
        slack = BallReal.exact(remainder, center.prec) * comb(full_order, j) \
            * BallReal.exact(magnitude, center.prec).pow(full_order - j)
        out.append(total.add_error(slack.upper()))
    return Jet(out)
