"""TSV / JSON-lines serialization of hits."""

from __future__ import annotations

import json

from hallsearch.evaluator import Hit

COLUMNS = ("x", "y", "k", "r", "b", "C2", "a", "source")
HEADER = "#" + "\t".join(COLUMNS)


def format_hit(hit: Hit, fmt: str = "tsv") -> str:
    rec = hit.as_record()
    if fmt == "jsonl":
        # integers as decimal strings: JSON readers often lose precision past 2^53
        out = {c: (str(rec[c]) if isinstance(rec[c], int) else rec[c]) for c in COLUMNS}
        return json.dumps(out)
    if fmt != "tsv":
        raise ValueError(f"unknown format {fmt!r}")
    return "\t".join("-" if rec[c] is None else str(rec[c]) for c in COLUMNS)


def parse_line(line: str, fmt: str = "tsv") -> Hit | None:
    line = line.strip()
    if not line or line.startswith("#"):
        return None
    if fmt == "jsonl":
        return Hit.from_record(json.loads(line))
    fields = line.split("\t")
    if len(fields) != len(COLUMNS):
        raise ValueError(f"expected {len(COLUMNS)} columns, got {len(fields)}: {line!r}")
    return Hit.from_record(dict(zip(COLUMNS, fields)))


def parse_hits(text: str, fmt: str = "tsv") -> list[Hit]:
    return [h for h in (parse_line(l, fmt) for l in text.splitlines()) if h is not None]


def write_hits(hits, stream, fmt: str = "tsv", header: bool = True):
    if header and fmt == "tsv":
        stream.write(HEADER + "\n")
    for h in hits:
        stream.write(format_hit(h, fmt) + "\n")
