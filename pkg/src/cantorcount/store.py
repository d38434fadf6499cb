"""Persistent JSONL store of per-denominator records.

One record per line, preceded by a header line carrying the schema version
and the digit system tag.  q is strictly increasing within a file; a
directory of files forms a dataset that is deduplicated on load.  Appends
are single os.write calls so a crash never leaves a torn line; writers
hold an advisory flock on the file.
"""

from __future__ import annotations

import fcntl
import json
import os
from pathlib import Path
from typing import Iterable, Iterator, Optional

from .digitsys import TERNARY, DigitSystem
from .enumerator import DenominatorRecord, enumerate_denominator
from .errors import IntegrityError

SCHEMA_VERSION = 1
MAX_STORED_NUMERATORS = 10_000


def _record_to_json(rec: DenominatorRecord) -> dict:
    out = {
        "q": rec.q,
        "ell": rec.ell,
        "phi": rec.phi,
        "n_q": rec.n_q,
        "mlo": rec.mlo,
        "method": rec.method,
    }
    if rec.numerators is not None and rec.n_q <= MAX_STORED_NUMERATORS:
        out["numerators"] = list(rec.numerators)
    return out


def _record_from_json(d: dict) -> DenominatorRecord:
    nums = d.get("numerators")
    return DenominatorRecord(
        q=d["q"],
        ell=d["ell"],
        phi=d["phi"],
        n_q=d["n_q"],
        mlo=d["mlo"],
        method=d["method"],
        numerators=tuple(nums) if nums is not None else None,
    )


class RecordFile:
    """A single append-only JSONL record file."""

    def __init__(self, path: Path, system: DigitSystem = TERNARY):
        self.path = Path(path)
        self.system = system
        self._last_q = 0
        if self.path.exists():
            header = self._read_header()
            if header["schema"] != SCHEMA_VERSION:
                raise IntegrityError(
                    f"{self.path}: schema {header['schema']} != {SCHEMA_VERSION}"
                )
            if header["system"] != system.tag():
                raise IntegrityError(
                    f"{self.path}: system {header['system']!r} != {system.tag()!r}"
                )
            for rec in self.iter_records():
                self._last_q = rec.q
        else:
            self.path.parent.mkdir(parents=True, exist_ok=True)
            line = json.dumps({"schema": SCHEMA_VERSION, "system": system.tag()})
            with open(self.path, "w") as fh:
                fh.write(line + "\n")

    def _read_header(self) -> dict:
        with open(self.path) as fh:
            return json.loads(fh.readline())

    def iter_records(self) -> Iterator[DenominatorRecord]:
        with open(self.path) as fh:
            fh.readline()  # header
            for line in fh:
                line = line.strip()
                if line:
                    yield _record_from_json(json.loads(line))

    def append(self, rec: DenominatorRecord) -> None:
        if rec.q <= self._last_q:
            raise IntegrityError(
                f"{self.path}: q={rec.q} not above last stored q={self._last_q}"
            )
        payload = (json.dumps(_record_to_json(rec)) + "\n").encode()
        fd = os.open(self.path, os.O_WRONLY | os.O_APPEND)
        try:
            fcntl.flock(fd, fcntl.LOCK_EX)
            os.write(fd, payload)
        finally:
            fcntl.flock(fd, fcntl.LOCK_UN)
            os.close(fd)
        self._last_q = rec.q


def merge(path_a: Path, path_b: Path, out: Path, system: DigitSystem = TERNARY) -> "RecordFile":
    """Union of two record files, deduplicated by q; conflicting records error."""
    records: dict[int, DenominatorRecord] = {}
    for path in (path_a, path_b):
        for rec in RecordFile(path, system).iter_records():
            old = records.get(rec.q)
            if old is not None and old.n_q != rec.n_q:
                raise IntegrityError(
                    f"conflicting records for q={rec.q}: n_q {old.n_q} vs {rec.n_q}"
                )
            records.setdefault(rec.q, rec)
    merged = RecordFile(out, system)
    for q in sorted(records):
        merged.append(records[q])
    return merged


class RecordStore:
    """Directory of record files for one digit system."""

    def __init__(self, root: Path | str, system: DigitSystem = TERNARY):
        self.system = system
        self.root = Path(root) / system.tag().replace(",", "_").replace("=", "")
        self.root.mkdir(parents=True, exist_ok=True)

    def _files(self) -> list[Path]:
        return sorted(self.root.glob("records-*.jsonl"))

    def load(self, q_min: int = 1, q_max: Optional[int] = None) -> dict[int, DenominatorRecord]:
        out: dict[int, DenominatorRecord] = {}
        for path in self._files():
            for rec in RecordFile(path, self.system).iter_records():
                if rec.q < q_min or (q_max is not None and rec.q > q_max):
                    continue
                old = out.get(rec.q)
                if old is not None and old.n_q != rec.n_q:
                    raise IntegrityError(
                        f"conflicting records for q={rec.q}: n_q {old.n_q} vs {rec.n_q}"
                    )
                out[rec.q] = rec
        return out

    def ensure_range(
        self,
        q_min: int,
        q_max: int,
        method: str = "auto",
        progress=None,
    ) -> dict[int, DenominatorRecord]:
        """Idempotent scan: enumerate only denominators not already stored."""
        have = self.load(q_min, q_max)
        missing = [q for q in range(max(q_min, 2), q_max + 1) if q not in have]
        if missing:
            path = self.root / f"records-{missing[0]}-{missing[-1]}.jsonl"
            if path.exists():  # avoid clobbering q-order in a partial file
                idx = 1
                while (alt := path.with_suffix(f".{idx}.jsonl")).exists():
                    idx += 1
                path = alt
            rf = RecordFile(path, self.system)
            for i, q in enumerate(missing):
                rec = enumerate_denominator(q, method=method)
                rf.append(rec)
                have[q] = rec
                if progress is not None and i % 500 == 0:
                    progress(q)
        return have

    def export_csv(self, path: Path, q_min: int = 1, q_max: Optional[int] = None) -> None:
        recs = self.load(q_min, q_max)
        with open(path, "w", newline="") as fh:
            fh.write("q,ell,phi,n_q,mlo\r\n")
            for q in sorted(recs):
                r = recs[q]
                fh.write(f"{r.q},{r.ell},{r.phi},{r.n_q},{r.mlo}\r\n")


def records_as_counts(records: Iterable[DenominatorRecord]) -> dict[int, int]:
    return {r.q: r.n_q for r in records}
