"""Spectral sequence engine: pages, differentials, extensions and rendering."""

import itertools
from math import prod

import pytest
from hypothesis import given
from hypothesis import strategies as st

from bordcalc.abelian import FGAbelianGroup, parse_group
from bordcalc.ahss import (
    DescriptorError,
    SSError,
    compute,
    compute_from_hints,
    extension_candidates,
    load_hints,
    load_space,
    render_kv,
    render_text,
    report_from_groups,
    resolve_extensions_from_total,
    space_from_dict,
)
from bordcalc.ahss.hints import hints_from_dict
from bordcalc.ahss.render import is_resolved
from bordcalc.registry import lookup_point_bordism


def sphere(k, cap=12):
    return space_from_dict({
        "name": f"S{k}", "cap": cap,
        "integral_homology": {str(k): "Z<s>"},
        "integral_cohomology": {str(k): "Z<u>"},
        "mod2_homology": {str(k): "Z/2<sbar>"},
        "mod2_ring": {"generators": [{"label": "u", "degree": k, "kind": "exterior"}]},
    })


def totals(run, upto):
    return [run.reports[n].render_total() for n in range(upto + 1)]


@pytest.mark.parametrize("k", range(1, 9))
def test_sphere_is_a_shift_of_the_point(k):
    run = compute(sphere(k), "spin", 8)
    expected = [str(lookup_point_bordism("Spin", n - k)) if n >= k else "0" for n in range(9)]
    assert totals(run, 8) == expected
    assert not run.differentials or all(d.is_zero() for d in run.differentials)


def test_unreduced_adds_the_point(fixtures):
    space = load_space(fixtures / "kz3.space")
    run = compute(space, "spin", 4, reduced=False)
    assert run.reports[0].render_total() == "Z"
    assert run.reports[1].render_total() == "Z/2"


def test_su_e2_and_d2(fixtures):
    run = compute_from_hints(fixtures / "su.hints", 8)
    e2 = run.e2
    assert str(e2.group(5, 1)) == "Z/2" and str(e2.group(3, 4)) == "Z"
    d = run.differential(2, (5, 0))
    assert d is not None and not d.is_zero()
    # the surviving class in (5,0) is twice the generator
    assert str(run.einf.group(5, 0)) == "Z"
    assert run.einf[(5, 1)].is_zero


EXPECTED = {
    "su": "0,0,0,Z,0,Z,0,Z^2,Z",
    "kz3": "0,0,0,Z,0,0,0,Z,Z/2",
}


@pytest.mark.parametrize("name", sorted(EXPECTED))
def test_abutments(fixtures, name):
    run = compute_from_hints(fixtures / f"{name}.hints", 8)
    assert ",".join(totals(run, 8)) == EXPECTED[name]
    assert is_resolved(run)


def test_loop_space_is_parametric_at_eight(fixtures):
    run = compute_from_hints(fixtures / "bsu2.hints", 8)
    assert ",".join(totals(run, 7)) == "0,0,0,Z,0,Z,0,Z^3"
    assert run.reports[8].render_total() == "(Z)/k"
    assert not is_resolved(run)
    assert "k" in run.reports[8].params


def test_render_is_deterministic(fixtures):
    a = render_text(compute_from_hints(fixtures / "su.hints", 8))
    b = render_text(compute_from_hints(fixtures / "su.hints", 8))
    assert a == b


@pytest.mark.parametrize("name", ["su", "kz3", "bsu2"])
def test_kv_matches_text_line_for_line(fixtures, name):
    run = compute_from_hints(fixtures / f"{name}.hints", 8)
    text, kv = render_text(run).splitlines(), render_kv(run).splitlines()
    assert len(text) == len(kv)
    assert all(line.startswith("section=") for line in kv)


# -- extensions, checked against a brute-force subgroup search ------------------

def _elements(orders):
    return list(itertools.product(*(range(o) for o in orders)))


def _span(gens, orders):
    zero = tuple(0 for _ in orders)
    seen = {zero}
    frontier = [zero]
    while frontier:
        x = frontier.pop()
        for g in gens:
            y = tuple((a + b) % o for a, b, o in zip(x, g, orders))
            if y not in seen:
                seen.add(y)
                frontier.append(y)
    return seen


def _group_of(subset, orders):
    """Isomorphism type of a finite subgroup, from its counts of elements of each order."""
    def order_of(x):
        k = 1
        while any((k * a) % o for a, o in zip(x, orders)):
            k += 1
        return k
    return sorted(order_of(x) for x in subset)


def _signature(g: FGAbelianGroup):
    return _group_of(_elements(g.orders), g.orders) if g.orders else [1]


def _partitions(n, largest=None):
    if n == 1:
        yield []
        return
    for d in range(min(n, largest or n), 1, -1):
        if n % d == 0:
            for rest in _partitions(n // d, d):
                yield [d] + rest


def brute_force_extensions(sub: FGAbelianGroup, quotient: FGAbelianGroup):
    """Every finite abelian G with a subgroup isomorphic to ``sub`` and matching quotient."""
    n = sub.order * quotient.order
    found = set()
    sub_sig, q_sig = _signature(sub), _signature(quotient)
    for orders in _partitions(n):
        g = FGAbelianGroup.from_orders(orders)
        if g in found:
            continue
        elems = _elements(g.orders)
        k = max(len(sub.orders), 1)
        for gens in itertools.combinations_with_replacement(elems, k):
            h = _span(gens, g.orders)
            if len(h) != sub.order or _group_of(h, g.orders) != sub_sig:
                continue
            # the quotient G/H has the same order signature as the coset representatives' orders mod H
            cosets = {}
            for x in elems:
                key = min(tuple((a + b) % o for a, b, o in zip(x, y, g.orders)) for y in h)
                cosets[key] = x
            def coset_order(x):
                m = 1
                while tuple((m * a) % o for a, o in zip(x, g.orders)) not in h:
                    m += 1
                return m
            if sorted(coset_order(x) for x in cosets.values()) == q_sig:
                found.add(g)
                break
    return found


small = st.lists(st.sampled_from([2, 3, 4]), max_size=2).filter(lambda o: prod(o) <= 8)


@given(small, small)
def test_extension_candidates_match_brute_force(a, b):
    sub, quot = FGAbelianGroup.from_orders(a), FGAbelianGroup.from_orders(b)
    assert set(extension_candidates(sub, quot)) == brute_force_extensions(sub, quot)


def test_extension_candidates_with_free_parts():
    z, z2 = parse_group("Z"), parse_group("Z/2")
    assert set(map(str, extension_candidates(z, z2))) == {"Z", "Z + Z/2"}
    assert extension_candidates(z2, z) == [parse_group("Z + Z/2")]


def test_resolve_from_total():
    report = report_from_groups(7, [parse_group("Z"), parse_group("Z/2"), parse_group("Z")])
    assert not report.resolved
    assert resolve_extensions_from_total(report, parse_group("Z^2"), "known")
    assert report.resolved and str(report.total) == "Z^2"
    assert not report.steps[0].split


def test_resolve_from_total_rejects_impossible():
    report = report_from_groups(3, [parse_group("Z/2"), parse_group("Z/2")])
    with pytest.raises(SSError):
        resolve_extensions_from_total(report, parse_group("Z/8"))
    with pytest.raises(SSError):
        resolve_extensions_from_total(report, parse_group("Z"))


# -- descriptor and hints errors ------------------------------------------------

def test_validate_fixtures(fixtures):
    for name in ("su", "bsu", "kz3", "kz4"):
        assert load_space(fixtures / f"{name}.space").validate() == []


def test_inconsistent_descriptor_is_rejected():
    with pytest.raises(DescriptorError, match="UCT"):
        space_from_dict({
            "name": "bad", "cap": 5,
            "integral_homology": {"3": "Z<s>"},
            "integral_cohomology": {"3": "Z/2<u>"},
            "mod2_homology": {"3": "Z/2<sbar>"},
            "mod2_ring": {"generators": [{"label": "u", "degree": 3, "kind": "exterior"}]},
        })


def test_hints_errors():
    with pytest.raises(DescriptorError):
        hints_from_dict({"differential": [{"r": 2, "p": 3, "q": 0, "via": "nope"}]})
    with pytest.raises(DescriptorError):
        hints_from_dict({"extension": [{"n": 3, "p": 3}]})
    with pytest.raises(DescriptorError):
        hints_from_dict({"differential": [{"r": 2, "p": 3}]})


def test_hints_load(fixtures):
    h = load_hints(fixtures / "su.hints")
    assert set(h.morphisms) == {"xi", "lambda"}
    assert h.morphisms["xi"].shift == 1
