"""Acceptance criteria 1-13, one test each.  Every test prints a PASS/FAIL line
and the lines are repeated in the terminal summary."""

import itertools
from importlib import resources

import numpy as np
import pytest

from projlens import tables as T
from projlens.classify import FILTERS, enumerate_types, has_big_cotype_component, n_of, smallest_opposition_kernel
from projlens.diagram import make_diagram
from projlens.fingeo import ProjectiveGeometry, exhaustive_oracle_check, make_geometry, oracle_check
from projlens.levi import LeviError, parabolic_masks, unipotent_transitivity_check
from projlens.projgrp import (
    generate_projectivity_groups,
    induced_stabiliser_group,
    induced_type_map,
    is_absolute_duality,
    residue_domain,
)
from projlens.roots import polar_type

from oracles import pgl_order, pgl_order_by_enumeration, pgo_orders

ADE9 = [("A", r) for r in range(1, 10)] + [("D", r) for r in range(4, 10)] + [("E", r) for r in (6, 7, 8)]


def subsets(nodes, proper=True):
    top = len(nodes) if proper else len(nodes) + 1
    return [frozenset(c) for k in range(1, top) for c in itertools.combinations(nodes, k)]


def test_01_polar_types(criterion):
    with criterion(1, "polar types of A_r, D_r, E_6-8", 1) as c:
        for r in range(2, 10):
            c.check(polar_type(make_diagram("A", r)) == {1, r}, f"A{r}")
        for r in range(4, 10):
            c.check(polar_type(make_diagram("D", r)) == {2}, f"D{r}")
        got = [polar_type(make_diagram("E", r)) for r in (6, 7, 8)]
        c.check(got == [{2}, {1}, {8}], f"E: {got}")
        c.note("23 diagrams")


def test_02_e6_enumeration(criterion):
    with criterion(2, "E6 enumeration", 1) as c:
        d = make_diagram("E", 6)
        counts = {f: enumerate_types(d, f)[0] for f in FILTERS}
        c.check(counts["all-proper-nonempty"] == 62, "62 proper types")
        c.check(counts["self-opposite"] == 14, "14 self-opposite")
        c.check(counts["self-opposite-with-big-component"] == 7, "7 with a big cotype component")
        pc = [J for J in enumerate_types(d, "polar-closed")[1] if has_big_cotype_component(d, J)]
        c.check(pc == [{2}, {1, 2, 6}], f"polar closed {pc}")
        c.note(f"62/14/7, polar closed {{2}} and {{1,2,6}}")


def test_03_e7_e8_enumeration(criterion):
    with criterion(3, "E7/E8 enumeration", 1) as c:
        e7, e8 = make_diagram("E", 7), make_diagram("E", 8)
        c.check(enumerate_types(e7, "self-opposite")[0] == 126, "126 self-opposite in E7")
        n7, pc7 = enumerate_types(e7, "polar-closed")
        n8, pc8 = enumerate_types(e8, "polar-closed")
        c.check(n7 == 18, f"E7 polar closed {n7}")
        c.check(n8 == 19, f"E8 polar closed {n8}")
        big7 = {J for J in pc7 if has_big_cotype_component(e7, J)}
        big8 = {J for J in pc8 if has_big_cotype_component(e8, J)}
        c.check(big7 == {frozenset(s) for s in ({1}, {1, 6}, {1, 6, 7})}, f"E7 list {big7}")
        c.check(big8 == {frozenset(s) for s in ({8}, {1, 8}, {1, 6, 8}, {1, 6, 7, 8})}, f"E8 list {big8}")
        c.note("126, 18, 19; 3 and 4 listed")


def a_closed_form(r, J):
    if J != {r + 1 - j for j in J}:
        return 1
    return 1 if any(J == set(range(1, k + 1)) | set(range(r - k + 1, r + 1)) for k in range(1, r + 1)) else 2


def test_04_type_a_equivalence(criterion):
    with criterion(4, "A_r closed form, 2<=r<=9", 5) as c:
        bad = total = 0
        for r in range(2, 10):
            d = make_diagram("A", r)
            for J in subsets(d.nodes):
                v = n_of(d, J)
                total += 1
                bad += (not v.resolved) or v.n != a_closed_form(r, J)
        c.check(total == sum(2**r - 2 for r in range(2, 10)), "coverage")
        c.check(bad == 0, f"{bad} mismatches")
        c.note(f"{total} types, 0 mismatches")


def test_05_opposition_kernel(criterion):
    with criterion(5, "smallest opposition kernel = polar type", 30) as c:
        for fam, r in ADE9:
            d = make_diagram(fam, r)
            J, unique = smallest_opposition_kernel(d)
            c.check(unique and J == polar_type(d), f"{fam}{r}: {sorted(J)} unique={unique}")
        c.note(f"{len(ADE9)} diagrams")


def test_06_tables(criterion):
    with criterion(6, "table golden files and index/n agreement", 1) as c:
        rows = 0
        for fam, r in [("D", r) for r in range(4, 9)] + [("E", r) for r in (6, 7, 8)]:
            gold = resources.files("projlens").joinpath(f"golden/{fam}{r}.tsv").read_text()
            c.check(T.render_table(fam, r) == gold, f"{fam}{r} differs from golden")
            d = make_diagram(fam, r)
            for row in T.table_rows(fam, r):
                rows += 1
                c.check(row.grey_printed == row.pi_plus.grey, f"grey flag {fam}{r} {row.reference_tag}")
                for J in T.covered_types(fam, r, row):
                    v = n_of(d, J)
                    if v.resolved:
                        c.check(T.index_two(*T.projectivity_groups(fam, r, J)) == (v.n == 2), f"{fam}{r} {sorted(J)}")
        c.note(f"8 tables, {rows} rows")


def test_07_oracle(criterion):
    with criterion(7, "perspectivities = gallery oracle", 300) as c:
        rep = exhaustive_oracle_check(ProjectiveGeometry(2, 2))
        c.check(rep.mismatches == 0, f"PG(2,2): {rep.mismatches} mismatches")
        notes = [f"PG(2,2) exhaustive {rep.checked}"]
        for tag, q in [("A3", 2), ("A3", 3), ("D4", 2)]:
            rep = oracle_check(make_geometry(tag, q), 1000, seed=7)
            c.check(rep.mismatches == 0, f"{rep.geometry}: {rep.mismatches} mismatches")
            notes.append(f"{rep.geometry} {rep.checked}")
        c.note(", ".join(notes) + "; 0 mismatches")


def test_08_panels(criterion):
    with criterion(8, "panel groups are PGL_2(q)", 60) as c:
        rng = np.random.default_rng(8)
        for r, q in [(2, 2), (3, 3)]:
            g = ProjectiveGeometry(r, q)
            target = pgl_order_by_enumeration(2, q)
            for i in g.diagram.nodes:
                F = g.random_flag(set(g.diagram.nodes) - {i}, rng)
                res = generate_projectivity_groups(g, F, budget=60, seed=8)
                ok = res.domain == q + 1 and res.pi_plus.order() == res.pi.order() == target
                c.check(ok, f"{g} cotype {i}: {res.report()}")
        c.note("orders 6 and 24 from matrix enumeration")


def test_09_a3_line(criterion):
    with criterion(9, "A3(F3) line: factor swap and index 2", 120) as c:
        g = make_geometry("A3", 3)
        F = g.random_flag({2}, np.random.default_rng(9))
        dom = residue_domain(g, F)
        res = generate_projectivity_groups(g, F, budget=200, seed=9, dom=dom)

        def swaps(p):
            return induced_type_map(g, dom, p) == {1: 3, 3: 1}

        c.check(any(swaps(p) for p in res.pi.generators), "no factor swap in Pi")
        c.check(not any(swaps(p) for p in res.pi_plus.generators), "factor swap in Pi+")
        c.check(res.index == 2, f"index {res.index}")
        c.note(f"|Pi+| = {res.pi_plus.order()}, |Pi| = {res.pi.order()}")


@pytest.mark.slow
def test_10_d4_generator(criterion):
    with criterion(10, "D4 generator: square-determinant subgroup", 900) as c:
        rng = np.random.default_rng(10)
        notes = []
        for q, target in [(2, pgl_order(4, 2)), (3, pgl_order(4, 3) // 2)]:
            g = make_geometry("D4", q)
            F = g.random_flag({4}, rng)
            dom = residue_domain(g, F)
            res = generate_projectivity_groups(g, F, budget=500, seed=10, dom=dom)
            c.check(res.pi_plus.order() == target, f"q={q}: |Pi+| = {res.pi_plus.order()}, want {target}")
            c.check(res.triangle is not None and is_absolute_duality(dom, res.triangle), f"q={q}: triangle")
            notes.append(f"q={q} |Pi+|={res.pi_plus.order()} on {res.domain}")
        c.note(", ".join(notes) + "; triangles absolute")


@pytest.mark.slow
def test_11_d4_point(criterion):
    with criterion(11, "D4 point: PGO/PGO° with index 2", 900) as c:
        rng = np.random.default_rng(11)
        notes = []
        for q in (2, 3):
            full, even = pgo_orders(3, q)
            g = make_geometry("D4", q)
            F = g.random_flag({1}, rng)
            res = generate_projectivity_groups(g, F, budget=500, seed=11)
            ok = res.pi.order() == full and res.pi_plus.order() == even and res.index == 2
            c.check(ok, f"q={q}: {res.report()} vs oracle {full}/{even}")
            notes.append(f"q={q} {res.pi.order()}/{res.pi_plus.order()}")
        c.note(", ".join(notes))


@pytest.mark.slow
def test_12_stabiliser_is_pi_plus(criterion):
    with criterion(12, "flag stabiliser = Pi+ in PG(2,q), PG(3,q)", 600) as c:
        rng = np.random.default_rng(12)
        count = 0
        for r, q in [(2, 2), (2, 3), (3, 2), (3, 3)]:
            g = ProjectiveGeometry(r, q)
            for J in subsets(g.diagram.nodes, proper=False):
                if g.opposite_type(J) != J:
                    continue
                F = g.random_flag(J, rng)
                dom = residue_domain(g, F)
                S = induced_stabiliser_group(g, F, dom)
                P = generate_projectivity_groups(g, F, budget=300, seed=12, dom=dom).pi_plus
                c.check(S.equals(P), f"{g} {sorted(J)}: {S.order()} vs {P.order()}")
                count += 1
        c.note(f"{count} self-opposite flag types")


def test_13_levi(criterion):
    with criterion(13, "unipotent radical and Levi factorisation", 300) as c:
        rng = np.random.default_rng(13)
        count = 0
        for r, q in [(2, 2), (2, 3), (3, 2)]:
            g = ProjectiveGeometry(r, q)
            for J in subsets(g.diagram.nodes, proper=False):
                try:
                    parabolic_masks(r, J)
                except LeviError:
                    continue
                rep = unipotent_transitivity_check(g, q, g.random_flag(J, rng))
                c.check(rep.ok, f"{g} {sorted(J)}: {rep.to_dict()}")
                count += 1
        c.note(f"{count} flag types")
