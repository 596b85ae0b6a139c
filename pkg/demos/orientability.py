"""Which gauge groups give orientable moduli spaces over spin 7- and 8-manifolds."""

from bordcalc.registry import classify_orientability

GROUPS = ["E8", "SU(5) x E8", "U(3)", "Spin(10)", "SO(10)/K", "G2", "F4", "Sp(1)", "Sp(2)", "Spin(7)", "SO(9)"]


def main() -> None:
    for n in (7, 8):
        print(f"n = {n}")
        for g in GROUPS:
            print(f"  {g:<12} {classify_orientability(g, n).line()}")


if __name__ == "__main__":
    main()
