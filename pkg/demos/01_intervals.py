"""Outward-rounded interval arithmetic in a few lines.

Every operation returns an interval guaranteed to contain the exact real
result, even though each endpoint is an ordinary double.
"""

from fractions import Fraction

from certicone.interval import Interval, dot, from_decimal

# 0.1 has no exact binary representation, so it enters as a one-ulp enclosure
tenth = from_decimal("0.1")
print("0.1 ->", tenth)

# squaring keeps the exact 1/100 inside
sq = tenth * tenth
print("0.1^2 ->", sq)
print("contains 1/100:", Fraction(float(sq.lo)) <= Fraction(1, 100) <= Fraction(float(sq.hi)))

# a classic cancellation: the plain float sum is 0, the interval sum knows better
v = Interval([1e16, 1.0, -1e16])
print("float sum:", sum([1e16, 1.0, -1e16]))
print("interval sum:", v.sum())

# dot products accumulate with directed rounding too
x = Interval([1.0, 2.0, 3.0], [1.0, 2.5, 3.0])
print("dot([1, [2, 2.5], 3], [1, 1, 1]) ->", dot(x, [1.0, 1.0, 1.0]))
