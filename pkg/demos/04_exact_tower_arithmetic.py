"""A tour of the exact coefficient field Q(i, sqrt(k1), ..., sqrt(kt)).

Projector coefficients live in multi-quadratic towers; this demo walks the
canonical-form arithmetic, inversion by successive conjugation, the
restricted square root used by the solver, and certified complex enclosures.
"""

from fractions import Fraction

from permsplit import FieldElement, sqrt_if_nice, render_field_element
from permsplit.errors import UNREPRESENTABLE

FE = FieldElement


def main():
    one = FE.one()
    i = FE.i()
    s3 = FE.sqrt_int(3)

    print("products rewrite by gcd extraction:")
    print("  sqrt(2)*sqrt(6) =", FE.sqrt_int(2) * FE.sqrt_int(6))
    print("  (1+sqrt(3))*(1-sqrt(3)) =", (one + s3) * (one - s3))
    print("  (i*sqrt(3))^2 =", FE.term(1, -3) ** 2)

    print("\ninversion by successive conjugation:")
    x = one + FE.term(1, -7)  # 1 + i*sqrt(7)
    print("  1/(1 + I*sqrt(7)) =", render_field_element(x.invert()))
    print("  check:", x * x.invert())

    print("\nrestricted square roots (exact when the root stays in a tower):")
    print("  sqrt(12) =", sqrt_if_nice(FE.from_rational(12)))
    print("  sqrt(-7) =", sqrt_if_nice(FE.from_rational(-7)))
    print("  sqrt(3 + 2*sqrt(2)) =", sqrt_if_nice(FE.from_rational(3) + FE.term(2, 2)))
    print("  sqrt(9 + 6*sqrt(2)) =", sqrt_if_nice(FE.from_rational(9) + FE.term(6, 2)))
    print("  sqrt(3 + 4i) =", sqrt_if_nice(FE.from_rational(3) + FE.term(4, -1)))
    nested = sqrt_if_nice(one + FE.sqrt_int(2))
    assert nested is UNREPRESENTABLE
    print("  sqrt(1 + sqrt(2)) ->", nested, "(degree-4 field; numeric fallback)")

    print("\ncertified enclosures (width <= 2^(1-prec) * |value|):")
    val = FE.from_rational(Fraction(1, 14)) - FE.term(Fraction(3, 98), -7)
    print("  value:", render_field_element(val))
    ball = val.to_complex(100)
    print("  enclosure midpoint:", ball.mid)
    print("  enclosure radius:  ", ball.rad)


if __name__ == "__main__":
    main()
