"""Spin bordism of SU, K(Z,3) and the loop-space comparison, run from the shipped fixtures."""

from importlib.resources import files

from bordcalc.ahss import compute_from_hints, render_text

FIXTURES = files("bordcalc") / "fixtures"


def main() -> None:
    for name in ("su", "kz3", "bsu2"):
        run = compute_from_hints(FIXTURES / f"{name}.hints", 8)
        print(render_text(run))
        row = ", ".join(run.reports[n].render_total() for n in range(9))
        print(f"{run.name}: {row}\n")


if __name__ == "__main__":
    main()
