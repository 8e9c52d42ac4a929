"""Exact evaluation of k(x) around candidate x0 values."""

from __future__ import annotations

from dataclasses import asdict, dataclass
from fractions import Fraction

from hallsearch.candidates import Candidate
from hallsearch.exact_arith import HallPoint, hall_k, ratio_at_least, ratio_decimal

SOURCES = ("search", "brute", "family-hall", "family-fp", "scaled", "table")
MIN_X = 10


@dataclass(frozen=True)
class Hit:
    point: HallPoint
    r_display: str
    b: int | None = None
    C2: int | None = None
    a: int | None = None
    source: str = "search"

    def __post_init__(self):
        if self.source not in SOURCES:
            raise ValueError(f"unknown source {self.source!r}")
        if self.point.k == 0:
            raise ValueError("a hit needs k != 0")

    @property
    def x(self) -> int:
        return self.point.x

    def as_record(self) -> dict:
        p = self.point
        return {"x": p.x, "y": p.y, "k": p.k, "r": self.r_display,
                "b": self.b, "C2": self.C2, "a": self.a, "source": self.source}

    @classmethod
    def from_record(cls, rec: dict) -> "Hit":
        def opt(v):
            return None if v in (None, "", "-") else int(v)
        point = HallPoint(int(rec["x"]), int(rec["y"]), int(rec["k"]))
        return cls(point, str(rec["r"]), opt(rec.get("b")), opt(rec.get("C2")),
                   opt(rec.get("a")), rec.get("source", "search"))


def make_hit(point: HallPoint, source: str, b=None, C2=None, a=None) -> Hit:
    # Independent re-check of the equation before anything leaves this module.
    if point.x ** 3 - point.y * point.y != point.k:
        raise AssertionError(f"equation fails for {point}")
    return Hit(point, ratio_decimal(point.x, point.k, 2), b, C2, a, source)


def evaluate_candidate(cand: Candidate, i_window: int = 2, theta=Fraction(1)) -> list[Hit]:
    hits = []
    for i in range(-i_window, i_window + 1):
        x = cand.x0 + i
        if x < MIN_X:
            continue
        pt = hall_k(x)
        if pt.k != 0 and ratio_at_least(x, pt.k, theta):
            hits.append(make_hit(pt, "search", cand.cell.b, cand.cell.C2, cand.a))
    return hits
