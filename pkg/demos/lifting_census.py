"""Watch points of the circle lift through powers of a prime.

Under good reduction, Hensel lifting makes every point of X mod p^k lift to
exactly norm(p)^(amb - codim) points of X mod p^(k+1), so each census
histogram has a single bin.  Running the census at a prime of bad reduction
raises BadReduction instead.
"""

from exunits import (
    BadReduction,
    VarietySpec,
    lifting_census,
    make_number_ring,
    parse_poly,
    prime_ideals_above,
)


def main():
    ring = make_number_ring([5, 0, 1])
    circle = VarietySpec(
        amb=2,
        codim=1,
        equations=(parse_poly("x1^2 + x2^2 - 1", ring, 2),),
        declared_degree=2,
    )
    for p in (3, 7):
        pf = prime_ideals_above(ring, p)[0]
        for k in (1, 2):
            hist = lifting_census(ring, circle, pf, k)
            print(f"p = {p}, k = {k}: {hist}  (bin at norm(p) = {pf.norm})")

    p2 = prime_ideals_above(ring, 2)[0]
    try:
        lifting_census(ring, circle, p2, 1)
    except BadReduction as exc:
        print(f"p = 2 refuses as expected: {exc}")


if __name__ == "__main__":
    main()
