"""Command-line front end.

Exit codes: 0 success, 1 input error, 2 parametric or unresolved result,
3 integrality violation.
"""

from __future__ import annotations

import argparse
import re
import sys
from pathlib import Path
from typing import Sequence

import tomlkit
from tomlkit.exceptions import TOMLKitError

from . import charnum, picard, registry
from .abelian import AbelianError, FGAbelianGroup, GroupMorphism, IntMatrix, parse_group
from .ahss import DescriptorError, SSError, compute, load_hints, load_space
from .ahss.render import is_resolved, render_kv, render_text

EXIT_OK, EXIT_INPUT, EXIT_UNRESOLVED, EXIT_INTEGRALITY = 0, 1, 2, 3


class InputError(Exception):
    pass


# -- ss -------------------------------------------------------------------------

def _coefficients(spec: str | None) -> str | None:
    if spec is None or spec == "spin":
        return spec
    if spec.startswith("bordism:"):
        path = Path(spec.split(":", 1)[1])
        if not path.exists():
            raise InputError(f"coefficient hint file {path} not found")
        return "bordism:" + str(path.resolve())
    raise InputError(f"unknown coefficients {spec!r}; use 'spin' or 'bordism:<hints file>'")


def cmd_ss(args: argparse.Namespace) -> int:
    space_path = Path(args.space)
    if not space_path.exists():
        raise InputError(f"space file {space_path} not found")
    hints = None
    if args.hints:
        if not Path(args.hints).exists():
            raise InputError(f"hint file {args.hints} not found")
        hints = load_hints(args.hints)
    space = load_space(space_path)
    coeffs = _coefficients(args.coeff)
    if coeffs is None:
        coeffs = hints.coefficients if hints and hints.coefficients else "spin"
        if coeffs.startswith("bordism:") and hints is not None:
            coeffs = "bordism:" + str(hints.resolve(coeffs.split(":", 1)[1]))
    run = compute(space, coeffs, args.upto, None, hints)
    sys.stdout.write(render_kv(run) if args.format == "kv" else render_text(run))
    return EXIT_OK if is_resolved(run) else EXIT_UNRESOLVED


# -- floer / xi / abc -----------------------------------------------------------

def cmd_floer(args: argparse.Namespace) -> int:
    if args.stabilize is not None:
        if args.stabilize < args.r:
            raise InputError(f"cannot stabilize SU({args.r}) to the smaller SU({args.stabilize})")
        if args.r >= 4:
            # c4 is already present, stabilizing changes nothing
            print(charnum.floer_divisibility(args.stabilize))
        else:
            print(charnum.stabilized_divisibility(args.stabilize))
    else:
        print(charnum.floer_divisibility(args.r))
    return EXIT_OK


def _bundle_spec(args: argparse.Namespace) -> dict:
    if args.spec:
        path = Path(args.spec)
        if not path.exists():
            raise InputError(f"bundle file {path} not found")
        spec = tomlkit.parse(path.read_text()).unwrap()
    else:
        spec = {}
    if args.blocks:
        spec["blocks"] = [b for b in re.split(r"[,\s]+|\bx\b", args.blocks) if b]
    if args.rank is not None:
        spec["rank"] = args.rank
    if args.summand:
        summands = []
        for text in args.summand:
            sm = {}
            for part in text.split(";"):
                key, _, value = part.partition("=")
                if not value:
                    raise InputError(f"bad summand entry {part!r}; expected key=value")
                sm[key.strip()] = value.strip()
            summands.append(sm)
        spec["summand"] = summands
    if "blocks" not in spec or "rank" not in spec:
        raise InputError("give a bundle file or --blocks and --rank")
    return spec


def _abc(args: argparse.Namespace) -> tuple[charnum.SuLoopInvariants, int]:
    model, bundle = charnum.bundle_from_spec(_bundle_spec(args))
    return charnum.su_loop_invariants(model, bundle), bundle.rank


def cmd_abc(args: argparse.Namespace) -> int:
    inv, _ = _abc(args)
    print(inv)
    return EXIT_OK


def cmd_xi(args: argparse.Namespace) -> int:
    inv, rank = _abc(args)
    r = args.r if args.r is not None else rank
    print(f"{inv}  Xi={charnum.xi_from_abc(r, inv)}")
    return EXIT_OK


# -- orientable -----------------------------------------------------------------

def cmd_orientable(args: argparse.Namespace) -> int:
    print(registry.classify_orientability(args.expr, args.n).line())
    return EXIT_OK


# -- picard ---------------------------------------------------------------------

def _group_arg(text: str) -> FGAbelianGroup:
    t = text.strip().replace("×", "+")
    t = re.sub(r"\s*\bx\b\s*", "+", t)
    t = re.sub(r"Z(\d+)", r"Z/\1", t)
    try:
        return parse_group(t)
    except AbelianError as exc:
        raise InputError(f"bad group {text!r}: {exc}") from None


def _matrix_arg(text: str, rows: int, cols: int) -> IntMatrix:
    """Rows separated by ``/``, entries by ``,``; ``id`` and ``0`` are shorthands."""
    if text == "id":
        if rows != cols:
            raise InputError("id needs groups with the same number of generators")
        return IntMatrix.identity(rows)
    if text == "0":
        return IntMatrix.zeros(rows, cols)
    try:
        data = [[int(x) for x in r.split(",")] for r in text.split("/")]
    except ValueError:
        raise InputError(f"bad matrix {text!r}") from None
    if len(data) != rows or any(len(r) != cols for r in data):
        raise InputError(f"matrix {text!r} must be {rows}x{cols}")
    return IntMatrix.from_rows(data, cols)


def _picard_arg(text: str) -> picard.PicardData:
    """``PI0;PI1;Q`` with ``Q`` the generator values of q as ``/``-separated vectors."""
    parts = text.split(";")
    if len(parts) != 3:
        raise InputError(f"bad Picard data {text!r}; expected PI0;PI1;Q")
    pi0, pi1 = _group_arg(parts[0]), _group_arg(parts[1])
    values = _matrix_arg(parts[2], pi0.ngens, pi1.ngens).to_rows() if pi0.ngens else []
    return picard.PicardData.with_symmetry(pi0, pi1, values)


_NAMED_FUNCTORS = {
    "identity": ("Z2;Z2;1", "Z2;Z2;1", "id", "id"),
    "forgetful": ("Z2;Z2;1", "Z2;Z2;0", "id", "id"),
    "zero-pi1": ("Z2;Z2;1", "Z2;Z2;1", "id", "0"),
}


def cmd_picard(args: argparse.Namespace) -> int:
    q = args.query
    if q == "ses_check":
        res = picard.ses_check(_group_arg(args.pi0), _group_arg(args.pi1))
        print(f"|Alt|={res.alt} |Skew|={res.skew} exact={str(res.exact).lower()}")
        print(f"|Hom(pi0/2pi0, pi1)|={res.hom}")
        return EXIT_OK
    if q == "functor":
        if args.name:
            if args.name not in _NAMED_FUNCTORS:
                raise InputError(f"unknown functor {args.name!r}; known: {', '.join(_NAMED_FUNCTORS)}")
            src_t, dst_t, f0_t, f1_t = _NAMED_FUNCTORS[args.name]
        else:
            if not (args.src and args.dst):
                raise InputError("give a named functor or --src and --dst")
            src_t, dst_t, f0_t, f1_t = args.src, args.dst, args.f0, args.f1
        src, dst = _picard_arg(src_t), _picard_arg(dst_t)
        try:
            f0 = GroupMorphism(src.pi0, dst.pi0, _matrix_arg(f0_t, dst.pi0.ngens, src.pi0.ngens))
            f1 = GroupMorphism(src.pi1, dst.pi1, _matrix_arg(f1_t, dst.pi1.ngens, src.pi1.ngens))
        except AbelianError as exc:
            raise InputError(str(exc)) from None
        print(f"source {src}")
        print(f"target {dst}")
        print("OK" if picard.functor_exists(src, dst, f0, f1) else "NOT SYMMETRIC-MONOIDAL")
        return EXIT_OK
    if q == "quadratic":
        pi0, pi1 = _group_arg(args.pi0), _group_arg(args.pi1)
        values = _matrix_arg(args.values, pi0.ngens, pi1.ngens).to_rows() if pi0.ngens else []
        qm = picard.QuadraticMap.linear(pi0, pi1, values)
        quad, lin = picard.check_quadratic(qm), picard.check_quadratic(qm, linear=True)
        print(f"quadratic={str(quad.ok).lower()} linear={str(lin.ok).lower()} "
              f"sampled={str(quad.sampled).lower()}")
        return EXIT_OK
    if q == "torsors":
        report = picard.coherence_report()
        for grades, (inv, hexagon) in report.items():
            g = ",".join(map(str, grades))
            print(f"grades ({g}): involution={str(inv).lower()} hexagon={str(hexagon).lower()}")
        print("OK" if all(a and b for a, b in report.values()) else "INCOHERENT")
        return EXIT_OK
    raise InputError(f"unknown picard query {q!r}")


# -- entry point ----------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="bordcalc", description="Spin bordism and gauge orientation calculator.")
    sub = p.add_subparsers(dest="command", required=True)

    ss = sub.add_parser("ss", help="run a spectral sequence from a space descriptor")
    ss.add_argument("space")
    ss.add_argument("--coeff", help="spin or bordism:<hints file>")
    ss.add_argument("--hints")
    ss.add_argument("--upto", type=int, default=8)
    ss.add_argument("--format", choices=("text", "kv"), default="text")
    ss.set_defaults(func=cmd_ss)

    fl = sub.add_parser("floer", help="Floer grading divisibility for SU(r)")
    fl.add_argument("r", type=int)
    fl.add_argument("--stabilize", type=int, metavar="R2")
    fl.set_defaults(func=cmd_floer)

    for name, func, helptext in (("abc", cmd_abc, "loop invariants (a,b,c)"),
                                 ("xi", cmd_xi, "loop invariants and the index Xi")):
        c = sub.add_parser(name, help=helptext)
        c.add_argument("spec", nargs="?", help="bundle file (TOML)")
        c.add_argument("--blocks", help="factors, e.g. S4,S3,S1")
        c.add_argument("--rank", type=int)
        c.add_argument("--summand", action="append", help='e.g. "rank=2;c2=u1"')
        if name == "xi":
            c.add_argument("--r", type=int, help="rank used in the index formula (default: bundle rank)")
        c.set_defaults(func=func)

    o = sub.add_parser("orientable", help="orientability of gauge moduli for a Lie group")
    o.add_argument("expr")
    o.add_argument("--n", type=int, required=True, choices=(7, 8))
    o.set_defaults(func=cmd_orientable)

    pc = sub.add_parser("picard", help="Picard groupoid algebra")
    psub = pc.add_subparsers(dest="query", required=True)
    s = psub.add_parser("ses_check", aliases=["ses"])
    s.add_argument("pi0")
    s.add_argument("pi1")
    s.set_defaults(query="ses_check")
    f = psub.add_parser("functor")
    f.add_argument("name", nargs="?", help=", ".join(_NAMED_FUNCTORS))
    f.add_argument("--src", help="PI0;PI1;Q")
    f.add_argument("--dst", help="PI0;PI1;Q")
    f.add_argument("--f0", default="id")
    f.add_argument("--f1", default="id")
    qd = psub.add_parser("quadratic")
    qd.add_argument("pi0")
    qd.add_argument("pi1")
    qd.add_argument("--values", required=True, help="generator values, rows separated by /")
    psub.add_parser("torsors")
    pc.set_defaults(func=cmd_picard)
    return p


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except charnum.IntegralityError as exc:
        print(f"integrality violation: {exc}", file=sys.stderr)
        return EXIT_INTEGRALITY
    except (InputError, DescriptorError, SSError, AbelianError, registry.RegistryError,
            picard.PicardError, charnum.CharnumError, TOMLKitError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
