"""Super Z/2-torsors: the Koszul sign, coherence, and why forgetting it is not symmetric."""

from bordcalc.abelian import FGAbelianGroup, GroupMorphism, IntMatrix, parse_group
from bordcalc.picard import (
    GradedTorsor,
    coherence_report,
    functor_exists,
    plain_torsor_data,
    ses_check,
    super_torsor_data,
    torsor_symmetry,
)


def main() -> None:
    odd1, odd2 = GradedTorsor(("a", "b"), 1), GradedTorsor(("c", "d"), 1)
    print("symmetry on odd x odd:", torsor_symmetry(odd1, odd2))
    for grades, (inv, hexagon) in coherence_report().items():
        print(f"grades {grades}: involution {inv}, hexagon {hexagon}")

    sup, plain = super_torsor_data(), plain_torsor_data()
    z2 = FGAbelianGroup.cyclic(2)
    ident = GroupMorphism(z2, z2, IntMatrix.identity(1))
    print(f"{sup} -> {plain}: symmetric monoidal = {functor_exists(sup, plain, ident, ident)}")

    for a, b in (("Z/2", "Z/2"), ("Z/2 + Z/2", "Z/4"), ("Z/4", "Z/2 + Z/4")):
        print(f"pi0={a}, pi1={b}: {ses_check(parse_group(a), parse_group(b))}")


if __name__ == "__main__":
    main()
