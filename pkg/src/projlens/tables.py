"""Symbolic rule engine for the projectivity groups of irreducible residues in
buildings of type A, D and E.

Rows are stored with their printed group names.  :func:`projectivity_groups`
resolves a single type J: it picks the matching row and then lets the
diagram classifier overrule the printed Pi column whenever it proves the index
[Pi : Pi+] is 1 (type not self-opposite, polar closed, or a panel).
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from functools import lru_cache
from typing import Callable, Iterable, Optional

from .classify import n_of
from .diagram import Diagram, DiagramError, TypeSet, classify_shape, components, induced, make_diagram

KINDS = ("PGL", "PSL_a", "PGO", "PGO_circ", "barPGO", "barPGO_circ", "barPOmega", "PGE6", "PGE7")
BYSAME = "------"


class NotCovered(DiagramError):
    pass


@dataclass(frozen=True)
class GroupName:
    kind: str
    degree: int
    a: Optional[int] = None
    duality_ext: bool = False

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown group kind {self.kind!r}")
        if (self.a is not None) != (self.kind == "PSL_a"):
            raise ValueError("exponent a is required exactly for PSL_a")

    def __str__(self) -> str:
        k, n = self.kind, self.degree
        if k == "PGL":
            s = f"PGL_{n}(K)"
        elif k == "PSL_a":
            s = f"PSL_{n}(K,{self.a})"
        elif k in ("PGE6", "PGE7"):
            s = f"{k[:3]}_{k[3]}(K)"
        else:
            bar = "bar" if k.startswith("bar") else ""
            base = "POmega" if k.endswith("POmega") else "PGO"
            circ = "^o" if k.endswith("_circ") else ""
            s = f"{bar}{base}{circ}_{n}(K)"
        return s + (".2" if self.duality_ext else "")

    @property
    def grey(self) -> bool:
        """Not necessarily the full linear type-preserving group."""
        return (self.kind == "PSL_a" and self.a != 1) or self.kind in ("barPOmega", "PGO", "PGO_circ")

    def with_duality(self) -> "GroupName":
        return replace(self, duality_ext=True)


def index_two(pi_plus: GroupName, pi: GroupName) -> bool:
    """Whether pi contains pi_plus with index 2 (as opposed to pi = pi_plus)."""
    if pi == pi_plus:
        return False
    if pi.duality_ext and replace(pi, duality_ext=False) == pi_plus:
        return True
    pairs = {("PGO_circ", "PGO"), ("barPGO_circ", "barPGO")}
    if (pi_plus.kind, pi.kind) in pairs and pi.degree == pi_plus.degree and not pi.duality_ext:
        return True
    raise ValueError(f"{pi} is not a recognised extension of {pi_plus}")


@dataclass(frozen=True)
class TableRow:
    ambient: tuple[str, int]
    residue_shape: tuple[str, int]
    cotype_text: str
    pi_plus: GroupName
    pi: GroupName
    reference_tag: str
    polar_closed_mark: bool = False
    grey_printed: bool = False
    pi_printed_bysame: bool = False
    cotype_condition: Callable[[TypeSet], bool] = field(default=lambda c: True, compare=False, repr=False)
    note: str = field(default="", compare=False)

    def matches(self, shape: tuple[str, int], cotype: TypeSet) -> bool:
        return shape == self.residue_shape and self.cotype_condition(cotype)


def _pgl(n, dual=False):
    return GroupName("PGL", n, duality_ext=dual)


def _fmt(s: Iterable[int]) -> str:
    return "{" + ",".join(str(x) for x in sorted(s)) + "}"


def _d_rows(r: int) -> list[TableRow]:
    amb = ("D", r)
    top = frozenset({r - 2, r - 1, r})
    rows = [
        TableRow(amb, ("A", 1), "", _pgl(2), _pgl(2), "(A1)"),
        TableRow(
            amb, ("A", 3), _fmt(top), GroupName("PGO_circ", 6), GroupName("PGO", 6), "(A3)",
            grey_printed=True, cotype_condition=lambda c, t=top: c == t,
        ),
    ]
    for ell in range(2, r - 1):
        rows.append(
            TableRow(
                amb, ("A", ell), "!=" + _fmt(top), _pgl(ell + 1), _pgl(ell + 1, True), "(A)",
                cotype_condition=lambda c, t=top: c != t,
            )
        )
    if r % 2 == 0:
        g = GroupName("PSL_a", r, a=2)
        rows.append(TableRow(amb, ("A", r - 1), "", g, g.with_duality(), "(A*)", grey_printed=True))
    else:
        rows.append(TableRow(amb, ("A", r - 1), "", _pgl(r), _pgl(r), "(A**)", pi_printed_bysame=True))
    for ell in range(1, r):
        m = r - 2 * ell
        if 4 <= m <= r - 1:
            g = GroupName("PGO_circ", 2 * m)
            rows.append(TableRow(amb, ("D", m), f"l={ell}", g, g, "(D)", grey_printed=True))
    for ell in range(1, r):
        m = r - 2 * ell + 1
        if 4 <= m <= r - 1:
            rows.append(
                TableRow(
                    amb, ("D", m), f"l={ell}", GroupName("PGO_circ", 2 * m), GroupName("PGO", 2 * m),
                    "(D')", grey_printed=True,
                )
            )
    return rows


def _e_rows(m: int) -> list[TableRow]:
    amb = ("E", m)
    rows: list[TableRow] = []

    def add(shape, text, pp, p, tag, check=False, grey=False, bysame=False, cond=lambda c: True):
        rows.append(TableRow(amb, shape, text, pp, p, tag, check, grey, bysame, cond))

    add(("A", 1), "", _pgl(2), _pgl(2), "(A1)")
    if m == 6:
        add(("A", 2), "{2,4}", _pgl(3), _pgl(3, True), "(A2)", cond=lambda c: c == {2, 4})
        add(("A", 2), "!={2,4}", _pgl(3), _pgl(3), "(A2)", bysame=True, cond=lambda c: c != {2, 4})
        add(("A", 3), "{3,4,5}", _pgl(4), _pgl(4), "(A3)", check=True, cond=lambda c: c == {3, 4, 5})
        add(("A", 3), "!={3,4,5}", _pgl(4), _pgl(4), "(A3)", bysame=True, cond=lambda c: c != {3, 4, 5})
        add(("A", 4), "", _pgl(5), _pgl(5), "(A4)", bysame=True)
        g = GroupName("PSL_a", 6, a=3)
        add(("A", 5), "", g, g, "(A5)", check=True, grey=True)
        add(("D", 4), "", GroupName("barPGO_circ", 8), GroupName("barPGO", 8), "(D4)")
        g = GroupName("barPGO_circ", 10)
        add(("D", 5), "", g, g, "(D5)", bysame=True)
        return rows
    add(("A", 2), "", _pgl(3), _pgl(3, True), "(A2)")
    add(("A", 3), "", _pgl(4), _pgl(4, True), "(A3)")
    add(("A", 4), "", _pgl(5), _pgl(5, True), "(A4)")
    if m == 7:
        g = GroupName("PSL_a", 6, a=2)
        add(("A", 5), "{2,4,5,6,7}", g, g.with_duality(), "(A5)", grey=True, cond=lambda c: c == {2, 4, 5, 6, 7})
        add(("A", 5), "2 notin", _pgl(6), _pgl(6, True), "(A5)", cond=lambda c: 2 not in c)
    else:
        add(("A", 5), "", _pgl(6), _pgl(6, True), "(A5)")
    add(("A", 6), "", _pgl(7), _pgl(7, True), "(A6)")
    if m == 8:
        add(("A", 7), "", _pgl(8), _pgl(8, True), "(A7)")
    g = GroupName("barPGO_circ", 8)
    add(("D", 4), "", g, g, "(D4)", check=True)
    add(("D", 5), "", GroupName("barPGO_circ", 10), GroupName("barPGO", 10), "(D5)")
    if m == 7:
        g = GroupName("barPOmega", 12)
        add(("D", 6), "", g, g, "(D6)", check=True, grey=True)
    else:
        g = GroupName("barPGO_circ", 12)
        add(("D", 6), "", g, g, "(D6)", check=True)
        add(("D", 7), "", GroupName("barPGO_circ", 14), GroupName("barPGO", 14), "(D7)")
    add(("E", 6), "", GroupName("PGE6", 27), GroupName("PGE6", 27, duality_ext=True), "(E6)")
    if m == 8:
        g = GroupName("PGE7", 56)
        add(("E", 7), "", g, g, "(E7)", check=True)
    return rows


@lru_cache(maxsize=None)
def _rows(family: str, rank: int) -> tuple[TableRow, ...]:
    if family == "D" and rank >= 4:
        return tuple(_d_rows(rank))
    if family == "E" and rank in (6, 7, 8):
        return tuple(_e_rows(rank))
    raise DiagramError(f"no table for {family}{rank}")


def table_rows(family: str, rank: int) -> tuple[TableRow, ...]:
    return _rows(family.upper(), rank)


def _cotype(d: Diagram, J: Iterable[int]) -> tuple[TypeSet, tuple[str, int]]:
    J = frozenset(J)
    if not J <= set(d.nodes):
        raise DiagramError(f"{sorted(J)} is not a set of types of {d}")
    C = frozenset(d.nodes) - J
    if not J or not C:
        raise DiagramError("J must be nonempty and proper")
    if len(components(induced(d, C))) != 1:
        raise NotCovered("not covered: reducible residue")
    f, k, _ = classify_shape(induced(d, C))
    return C, (f, k)


def lookup_row(family: str, rank: int, J: Iterable[int]) -> TableRow:
    d = make_diagram(family, rank)
    C, shape = _cotype(d, J)
    if family.upper() == "A":
        n = shape[1] + 1
        return TableRow(("A", rank), shape, "", _pgl(n), _pgl(n), "(A)")
    for row in table_rows(family, rank):
        if row.matches(shape, C):
            return row
    raise NotCovered(f"no table row for residue {shape[0]}{shape[1]} with cotype {_fmt(C)}")


def projectivity_groups(family: str, rank: int, J: Iterable[int]) -> tuple[GroupName, GroupName]:
    """(Pi+, Pi) for a simplex of type J with connected nonempty cotype."""
    J = frozenset(J)
    row = lookup_row(family, rank, J)
    if row.pi_printed_bysame:
        return row.pi_plus, row.pi_plus
    if index_two(row.pi_plus, row.pi) and n_of(make_diagram(family, rank), J).n == 1:
        return row.pi_plus, row.pi_plus
    return row.pi_plus, row.pi


def _proper_types(d: Diagram):
    for mask in range(1, (1 << d.rank) - 1):
        yield frozenset(v for k, v in enumerate(d.nodes) if mask >> k & 1)


def covered_types(family: str, rank: int, row: TableRow) -> list[TypeSet]:
    out = []
    for J in _proper_types(make_diagram(family, rank)):
        try:
            if lookup_row(family, rank, J) is row:
                out.append(J)
        except NotCovered:
            pass
    return out


HEADER = "ref\tambient\tresidue\tcotype\tpi_plus\tpi\tgrey\tpolar_closed\tcovered\tn"


def render_table(family: str, rank: int) -> str:
    """Tab-separated rendering, one line per row, ending with a newline.

    The last two columns are computed: how many types J the row covers and the
    set of indices [Pi : Pi+] the classifier assigns to them.
    """
    family = family.upper()
    if family == "A":
        if rank < 2:
            raise DiagramError("A_r tables need r >= 2")
        d = make_diagram("A", rank)
        Js = [J for J in _proper_types(d) if len(components(induced(d, set(d.nodes) - J))) == 1]
        ns = sorted({n_of(d, J).n for J in Js}, key=str)
        return (
            HEADER + "\n"
            + f"(A)\tA{rank}\tA_(n-1)\t|cotype|=n-1\tPGL_n(L)\tPGL_n(L)\tno\t\t{len(Js)}\t"
            + ",".join(map(str, ns)) + "\n"
        )
    rows = table_rows(family, rank)
    d = make_diagram(family, rank)
    covered: dict[int, list[TypeSet]] = {id(r): [] for r in rows}
    for J in _proper_types(d):
        try:
            row = lookup_row(family, rank, J)
        except NotCovered:
            continue
        covered[id(row)].append(J)
    lines = [HEADER]
    for row in rows:
        Js = covered[id(row)]
        ns = sorted({n_of(d, J).n for J in Js}, key=str)
        lines.append(
            "\t".join(
                [
                    row.reference_tag,
                    f"{row.ambient[0]}{row.ambient[1]}",
                    f"{row.residue_shape[0]}{row.residue_shape[1]}",
                    row.cotype_text,
                    str(row.pi_plus),
                    BYSAME if row.pi_printed_bysame else str(row.pi),
                    "grey" if row.grey_printed else "no",
                    "check" if row.polar_closed_mark else "",
                    str(len(Js)),
                    ",".join(str(n) for n in ns),
                ]
            )
        )
    return "\n".join(lines) + "\n"
