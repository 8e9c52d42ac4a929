"""The bundled table of known examples and its exact re-verification."""

from __future__ import annotations

from dataclasses import dataclass
from decimal import Decimal
from importlib import resources

from hallsearch.exact_arith import hall_k, ratio_at_least, ratio_decimal
from hallsearch.families import scale_solution


@dataclass(frozen=True)
class KnownHitRow:
    index: int
    x: int
    r_printed: str
    b: int | None
    C2: int | None
    tags: frozenset[str]


def _opt(v: str) -> int | None:
    return None if v == "-" else int(v)


def parse_table(text: str) -> list[KnownHitRow]:
    rows = []
    for line in text.splitlines():
        if not line.strip() or line.startswith("#"):
            continue
        idx, x, r, b, c2, tags = line.split("\t")
        rows.append(KnownHitRow(int(idx), int(x), r, _opt(b), _opt(c2),
                                frozenset(t for t in tags.split(",") if t != "-")))
    return rows


def load_table() -> list[KnownHitRow]:
    text = resources.files("hallsearch").joinpath("data/table1.tsv").read_text()
    return parse_table(text)


@dataclass
class RowCheck:
    row: KnownHitRow
    k: int
    r_computed: str
    ok: bool
    note: str = ""


def verify_row(row: KnownHitRow, tolerance=Decimal("0.01")) -> RowCheck:
    pt = hall_k(row.x)
    if pt.k == 0:
        return RowCheck(row, 0, "inf", False, "k = 0")
    r = ratio_decimal(row.x, pt.k, 2)
    notes = []
    good = ratio_at_least(row.x, pt.k, 1)
    if not good:
        notes.append("|k| > sqrt(x)")
    close = abs(Decimal(r) - Decimal(row.r_printed)) <= tolerance
    if not close:
        notes.append(f"r {r} != printed {row.r_printed}")
    return RowCheck(row, pt.k, r, good and close, "; ".join(notes))


def verify_table(rows: list[KnownHitRow] | None = None) -> list[RowCheck]:
    rows = load_table() if rows is None else rows
    checks = [verify_row(r) for r in rows]
    by_index = {c.row.index: c for c in checks}
    # the starred row is the record row scaled by 2
    if 20 in by_index and 22 in by_index:
        src = by_index[20]
        scaled = scale_solution(hall_k(src.row.x), 2)
        c22 = by_index[22]
        if scaled.x != c22.row.x:
            c22.ok = False
            c22.note = (c22.note + "; " if c22.note else "") + "not 4 * row 20"
        else:
            c22.note = (c22.note + "; " if c22.note else "") + "= row 20 scaled by 2"
    return checks


def render_report(checks: list[RowCheck]) -> str:
    lines = ["#index\tx\tk\tr\tprinted\tstatus\tnote"]
    for c in checks:
        lines.append(f"{c.row.index}\t{c.row.x}\t{c.k}\t{c.r_computed}\t{c.row.r_printed}\t"
                     f"{'pass' if c.ok else 'FAIL'}\t{c.note}")
    passed = sum(c.ok for c in checks)
    lines.append(f"# {passed}/{len(checks)} rows pass")
    return "\n".join(lines)
