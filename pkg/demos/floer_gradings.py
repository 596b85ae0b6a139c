"""Loop invariants of a few bundles and the divisibility of the Floer grading index."""

from bordcalc.charnum import (
    BundleData,
    ManifoldModel,
    floer_divisibility,
    stabilized_divisibility,
    su_loop_invariants,
    whitney_sum,
    xi_from_abc,
)


def main() -> None:
    s4 = ManifoldModel.of(["S4", "S3", "S1"])
    e = whitney_sum([BundleData.from_strings(s4, "SU", 2, {2: "u1"}),
                     BundleData.from_strings(s4, "SU", 2, {2: "u2*u3"})])
    inv = su_loop_invariants(s4, e)
    print(f"S4 x S3 x S1, rank 4: {inv}, index {xi_from_abc(4, inv)}")

    k3 = ManifoldModel.of(["K3", "S3", "S1"])
    inv = su_loop_invariants(k3, BundleData.from_strings(k3, "SU", 2, {2: "u2*u3"}))
    print(f"K3 x S3 x S1, rank 2: {inv}, index {xi_from_abc(2, inv)}")

    for r in range(2, 13):
        print(f"SU({r}): gradings mod {floer_divisibility(r)}")
    # rank 2 or 3 bundles keep c4 = 0 after stabilizing
    for r2 in (4, 6, 18):
        print(f"stabilized to SU({r2}): mod {stabilized_divisibility(r2)}")


if __name__ == "__main__":
    main()
