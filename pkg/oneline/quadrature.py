"""
Gauss-Legendre rules with the classical remainder

    int_a^b f - (h/2) sum_k w_k f(mid + (h/2) x_k) = c_m h^(2m+1) f^(2m)(xi),   h = b - a,

for m = 1, 2, 3 points. Nodes and weights are balls.
"""

from fractions import Fraction

from .balls import ball_from_int, ball_from_rational
from .exceptions import ConfigurationError

ERROR_CONSTANTS = {
    1: Fraction(1, 24),
    2: Fraction(1, 4320),
    3: Fraction(1, 2016000),
}


def gauss_legendre(points, prec):
    """Nodes on [-1, 1] with their weights"""
    if points == 1:
        return [(ball_from_int(0, prec), ball_from_int(2, prec))]
    if points == 2:
        node = ball_from_rational(1, 3, prec + 16).sqrt().with_prec(prec)
        one = ball_from_int(1, prec)
        return [(-node, one), (node, one)]
    if points == 3:
        node = ball_from_rational(3, 5, prec + 16).sqrt().with_prec(prec)
        outer = ball_from_rational(5, 9, prec)
        return [(-node, outer), (ball_from_int(0, prec), ball_from_rational(8, 9, prec)), (node, outer)]
    raise ConfigurationError(f"quadrature supports 1, 2 or 3 points per panel, not {points}")


def remainder_factor(points, width, prec):
    """c_m·h^(2m+1)·(2m)!, to be multiplied by a bound on |f^(2m)/(2m)!|"""
    constant = ERROR_CONSTANTS[points]
    factorial = 1
    for k in range(2, 2 * points + 1):
        factorial *= k
    scale = ball_from_rational(constant.numerator * factorial, constant.denominator, prec)
    return scale * width.pow(2 * points + 1)
