import json

import pytest

from cantorcount.digitsys import DigitSystem
from cantorcount.enumerator import enumerate_denominator
from cantorcount.errors import IntegrityError
from cantorcount.store import RecordFile, RecordStore, merge


def _rec(q):
    return enumerate_denominator(q)


class TestRecordFile:
    def test_round_trip(self, tmp_path):
        path = tmp_path / "r.jsonl"
        rf = RecordFile(path)
        for q in (2, 4, 13):
            rf.append(_rec(q))
        back = list(RecordFile(path).iter_records())
        assert [r.q for r in back] == [2, 4, 13]
        assert back[2].numerators == (1, 3, 4, 9, 10, 12)

    def test_q_must_increase(self, tmp_path):
        rf = RecordFile(tmp_path / "r.jsonl")
        rf.append(_rec(4))
        with pytest.raises(IntegrityError):
            rf.append(_rec(4))
        with pytest.raises(IntegrityError):
            rf.append(_rec(2))

    def test_header_schema_checked(self, tmp_path):
        path = tmp_path / "r.jsonl"
        path.write_text(json.dumps({"schema": 999, "system": "b=3,F=0,2"}) + "\n")
        with pytest.raises(IntegrityError):
            RecordFile(path)

    def test_header_system_checked(self, tmp_path):
        path = tmp_path / "r.jsonl"
        RecordFile(path)  # ternary header
        with pytest.raises(IntegrityError):
            RecordFile(path, DigitSystem(5, frozenset({0, 4})))


class TestMerge:
    def test_dedup_union(self, tmp_path):
        a, b = tmp_path / "a.jsonl", tmp_path / "b.jsonl"
        fa, fb = RecordFile(a), RecordFile(b)
        for q in (2, 4):
            fa.append(_rec(q))
        for q in (4, 13):
            fb.append(_rec(q))
        merged = merge(a, b, tmp_path / "out.jsonl")
        assert [r.q for r in merged.iter_records()] == [2, 4, 13]

    def test_conflict_detected(self, tmp_path):
        a, b = tmp_path / "a.jsonl", tmp_path / "b.jsonl"
        RecordFile(a).append(_rec(4))
        bad = _rec(4)
        object.__setattr__(bad, "n_q", 4)
        object.__setattr__(bad, "numerators", (1, 2, 3, 5))
        RecordFile(b).append(bad)
        with pytest.raises(IntegrityError, match="q=4"):
            merge(a, b, tmp_path / "out.jsonl")


class TestRecordStore:
    def test_ensure_range_idempotent(self, tmp_path):
        store = RecordStore(tmp_path)
        first = store.ensure_range(2, 30)
        files_after_first = sorted(store.root.glob("*.jsonl"))
        second = store.ensure_range(2, 30)
        assert sorted(store.root.glob("*.jsonl")) == files_after_first
        assert {q: r.n_q for q, r in first.items()} == {
            q: r.n_q for q, r in second.items()
        }

    def test_fills_gaps_only(self, tmp_path):
        store = RecordStore(tmp_path)
        store.ensure_range(2, 10)
        store.ensure_range(2, 20)
        loaded = store.load()
        assert set(loaded) == set(range(2, 21))

    def test_export_csv_is_crlf(self, tmp_path):
        store = RecordStore(tmp_path)
        store.ensure_range(2, 5)
        out = tmp_path / "out.csv"
        store.export_csv(out)
        data = out.read_bytes()
        assert data.startswith(b"q,ell,phi,n_q,mlo\r\n")
        assert data.count(b"\r\n") == 5  # header + four records
