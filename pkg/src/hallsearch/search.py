"""The sweep over b and C2: sharded, deduplicated, checkpointed."""

from __future__ import annotations

import hashlib
import json
import logging
import os
from collections import Counter, deque
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

from hallsearch.candidates import admissible_cells, build_candidates
from hallsearch.evaluator import Hit, evaluate_candidate
from hallsearch.exact_arith import ratio_at_least
from hallsearch.modular import factorize
from hallsearch.records import HEADER, format_hit, parse_line

log = logging.getLogger(__name__)

CHUNK = 64

PRESETS = {
    "deep": {"u": Fraction(1, 3), "b_hi": 6 * 10 ** 8},
    "wide": {"u": Fraction(1, 4), "b_hi": 5 * 10 ** 9},
}


class ConfigError(ValueError):
    pass


class CheckpointMismatch(ConfigError):
    pass


@dataclass
class SearchConfig:
    b_lo: int = 2
    b_hi: int = 2000
    u: Fraction = Fraction(1, 3)
    c2_cap_override: int | None = None
    theta: Fraction = Fraction(1)
    log_theta: Fraction | None = None
    wn: int = 1
    wi: int = 2
    shards: int = 1
    chunk: int = CHUNK
    checkpoint_path: Path | None = None
    output_path: Path | None = None
    fmt: str = "tsv"

    def __post_init__(self):
        self.u = Fraction(self.u)
        self.theta = Fraction(self.theta)
        if self.log_theta is not None:
            self.log_theta = Fraction(self.log_theta)
        if self.checkpoint_path is not None:
            self.checkpoint_path = Path(self.checkpoint_path)
        if self.output_path is not None:
            self.output_path = Path(self.output_path)
        self.validate()

    def validate(self):
        if not 2 <= self.b_lo <= self.b_hi:
            raise ConfigError(f"need 2 <= b_lo <= b_hi, got {self.b_lo}:{self.b_hi}")
        if not 0 < self.u <= Fraction(1, 2):
            raise ConfigError(f"u must lie in (0, 1/2], got {self.u}")
        if self.wn < 0 or self.wi < 0:
            raise ConfigError("window sizes must be >= 0")
        if self.shards < 1 or self.chunk < 1:
            raise ConfigError("shards and chunk must be >= 1")
        if self.theta <= 0 or (self.log_theta is not None and self.log_theta <= 0):
            raise ConfigError("thresholds must be positive")
        if self.c2_cap_override is not None and self.c2_cap_override < 1:
            raise ConfigError("c2 cap must be >= 1")
        if self.fmt not in ("tsv", "jsonl"):
            raise ConfigError(f"unknown output format {self.fmt!r}")

    def space(self) -> dict:
        """Everything that determines the result and the chunk-to-shard layout."""
        return {
            "b_lo": self.b_lo, "b_hi": self.b_hi, "u": str(self.u),
            "c2_cap_override": self.c2_cap_override, "theta": str(self.theta),
            "log_theta": None if self.log_theta is None else str(self.log_theta),
            "wn": self.wn, "wi": self.wi, "shards": self.shards, "chunk": self.chunk,
            "fmt": self.fmt,
        }

    def fingerprint(self) -> str:
        blob = json.dumps(self.space(), sort_keys=True).encode()
        return hashlib.sha256(blob).hexdigest()

    def chunks(self) -> list[tuple[int, int]]:
        return [(lo, min(lo + self.chunk - 1, self.b_hi))
                for lo in range(self.b_lo, self.b_hi + 1, self.chunk)]


@dataclass
class Checkpoint:
    fingerprint: str
    shard_done: list[int]
    counts: Counter = field(default_factory=Counter)
    seen: set[int] = field(default_factory=set)

    def to_json(self) -> str:
        return json.dumps({
            "fingerprint": self.fingerprint,
            "shard_completed_b": self.shard_done,
            "counts": dict(sorted(self.counts.items())),
            "seen": [str(x) for x in sorted(self.seen)],
        }, indent=1)

    @classmethod
    def from_json(cls, text: str) -> "Checkpoint":
        raw = json.loads(text)
        return cls(raw["fingerprint"], [int(b) for b in raw["shard_completed_b"]],
                   Counter(raw.get("counts", {})), {int(x) for x in raw.get("seen", [])})


def process_chunk(b_lo, b_hi, u, c2_cap_override, theta, log_theta, wn, wi):
    """Candidates and hits for every cell with b in [b_lo, b_hi].

    Returns (hits, near_misses, counts); runs in worker processes.
    """
    counts = Counter()
    hits, near = [], []
    floor_theta = theta if log_theta is None else min(theta, log_theta)
    for b in range(b_lo, b_hi + 1):
        fb = factorize(b)
        for cell in admissible_cells(b, u, c2_cap_override):
            counts["cells"] += 1
            for cand in build_candidates(cell, wn, fb, counts):
                counts["candidates"] += 1
                for hit in evaluate_candidate(cand, wi, floor_theta):
                    if ratio_at_least(hit.point.x, hit.point.k, theta):
                        hits.append(hit)
                    else:
                        near.append(hit)
    return hits, near, counts


def _atomic_write(path: Path, text: str):
    tmp = path.with_name(path.name + ".tmp")
    with open(tmp, "w") as fh:
        fh.write(text)
        fh.flush()
        os.fsync(fh.fileno())
    os.replace(tmp, path)


def write_checkpoint(path: Path, ckpt: Checkpoint):
    _atomic_write(path, ckpt.to_json())


def load_output(path: Path, fmt: str) -> list[Hit]:
    """Hits already in `path`; a torn trailing line from a crash is cut off."""
    if not path.exists():
        return []
    data = path.read_bytes()
    if data and not data.endswith(b"\n"):
        cut = data.rfind(b"\n") + 1
        log.warning("dropping partial trailing line in %s", path)
        with open(path, "r+b") as fh:
            fh.truncate(cut)
        data = data[:cut]
    hits = []
    for line in data.decode().splitlines():
        h = parse_line(line, fmt)
        if h is not None:
            hits.append(h)
    return hits


@dataclass
class RunResult:
    hits: list[Hit]
    checkpoint: Checkpoint
    complete: bool


def _start(config: SearchConfig) -> tuple[Checkpoint, list[Hit]]:
    fp = config.fingerprint()
    ckpt = None
    if config.checkpoint_path is not None and config.checkpoint_path.exists():
        ckpt = Checkpoint.from_json(config.checkpoint_path.read_text())
        if ckpt.fingerprint != fp:
            raise CheckpointMismatch(
                f"checkpoint {config.checkpoint_path} belongs to a different configuration")
        log.info("resuming from %s", config.checkpoint_path)
    if ckpt is None:
        ckpt = Checkpoint(fp, [config.b_lo - 1] * config.shards)
    previous = []
    if config.output_path is not None:
        previous = load_output(config.output_path, config.fmt)
        ckpt.seen.update(h.x for h in previous)
    return ckpt, previous


def run(config: SearchConfig, max_chunks: int | None = None) -> RunResult:
    """Sweep every admissible cell with b in [b_lo, b_hi].

    Resumes from config.checkpoint_path when it exists. `max_chunks` stops
    after that many chunks (the checkpoint then reflects partial progress).
    Returns the hits written by this invocation.
    """
    ckpt, _ = _start(config)
    chunks = config.chunks()
    pending = [(i, lo, hi) for i, (lo, hi) in enumerate(chunks)
               if hi > ckpt.shard_done[i % config.shards]]
    if max_chunks is not None:
        pending = pending[:max_chunks]
    args = (config.u, config.c2_cap_override, config.theta, config.log_theta, config.wn, config.wi)

    out = None
    if config.output_path is not None:
        fresh = not config.output_path.exists() or config.output_path.stat().st_size == 0
        out = open(config.output_path, "a")
        if fresh and config.fmt == "tsv":
            out.write(HEADER + "\n")
            out.flush()

    emitted: list[Hit] = []

    def commit(idx, hi, result):
        hits, near, counts = result
        ckpt.counts.update(counts)
        for h in near:
            log.info("near miss x=%d k=%d r=%s (b=%d C2=%d)", h.x, h.point.k, h.r_display, h.b, h.C2)
        lines = []
        for h in hits:
            if h.x in ckpt.seen:
                ckpt.counts["duplicates"] += 1
                continue
            ckpt.seen.add(h.x)
            ckpt.counts["hits"] += 1
            emitted.append(h)
            lines.append(format_hit(h, config.fmt) + "\n")
        if out is not None and lines:
            out.write("".join(lines))
            out.flush()
            os.fsync(out.fileno())
        shard = idx % config.shards
        assert hi > ckpt.shard_done[shard]
        ckpt.shard_done[shard] = hi
        ckpt.counts["chunks"] += 1
        if config.checkpoint_path is not None:
            write_checkpoint(config.checkpoint_path, ckpt)

    try:
        if config.shards == 1:
            for idx, lo, hi in pending:
                commit(idx, hi, process_chunk(lo, hi, *args))
        else:
            with ProcessPoolExecutor(config.shards) as pool:
                window = deque()
                queue = iter(pending)
                for item in queue:
                    window.append((item, pool.submit(process_chunk, item[1], item[2], *args)))
                    if len(window) >= 4 * config.shards:
                        (idx, _, hi), fut = window.popleft()
                        commit(idx, hi, fut.result())
                while window:
                    (idx, _, hi), fut = window.popleft()
                    commit(idx, hi, fut.result())
    finally:
        if out is not None:
            out.close()

    complete = all(ckpt.shard_done[i % config.shards] >= hi for i, (_, hi) in enumerate(chunks))
    return RunResult(emitted, ckpt, complete)
