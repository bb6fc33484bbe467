import numpy as np
import pytest

from bridgebid.dataset import (DealRecord, generate_record, generate_to_file,
                               parse_header, parse_record, read_dataset,
                               record_seed, split, write_dataset)
from conftest import synthetic_records


class TestRecords:
    def test_generate_record_invariants(self):
        rec = generate_record(0, master_seed=11)
        assert rec.x1 & rec.x2 == 0
        assert rec.x1.bit_count() == rec.x2.bit_count() == 13
        assert rec.raw_costs.min() == 0
        assert rec.raw_costs.max() <= 24
        assert len(rec.raw_costs) == 36

    def test_per_record_independence(self):
        a = generate_record(3, master_seed=11)
        b = generate_record(3, master_seed=11)
        assert a.line() == b.line()
        assert record_seed(11, 3) == a.gen_seed

    def test_different_records_differ(self):
        assert generate_record(0, 11).x1 != generate_record(1, 11).x1


class TestFileFormat:
    def test_line_round_trip(self):
        for rec in synthetic_records(5, seed=2):
            parsed = parse_record(rec.line())
            assert parsed.id == rec.id
            assert parsed.x1 == rec.x1
            assert parsed.x2 == rec.x2
            assert parsed.gen_seed == rec.gen_seed
            assert np.array_equal(parsed.raw_costs, rec.raw_costs)

    def test_header(self):
        meta = parse_header("# bridgebid-dataset v1 n_samples=5 master_seed=42")
        assert meta == {"version": "v1", "n_samples": 5, "master_seed": 42}
        with pytest.raises(ValueError):
            parse_header("# something-else v1")

    def test_file_round_trip(self, tmp_path):
        recs = synthetic_records(7, seed=3)
        path = tmp_path / "data.tsv"
        write_dataset(recs, path, n_samples=5, master_seed=3)
        loaded, meta = read_dataset(path)
        assert meta["master_seed"] == 3
        assert [r.line() for r in loaded] == [r.line() for r in recs]

    def test_hex_width_is_13_digits(self):
        rec = synthetic_records(1, seed=4)[0]
        fields = rec.line().split("\t")
        assert len(fields[1]) == 13 and len(fields[2]) == 13


class TestGenerateToFile:
    def test_deterministic_bytes(self, tmp_path):
        a, b = tmp_path / "a.tsv", tmp_path / "b.tsv"
        generate_to_file(a, 3, master_seed=21)
        generate_to_file(b, 3, master_seed=21)
        assert a.read_bytes() == b.read_bytes()

    def test_worker_count_does_not_change_bytes(self, tmp_path):
        a, b = tmp_path / "a.tsv", tmp_path / "b.tsv"
        generate_to_file(a, 4, master_seed=5, workers=1)
        generate_to_file(b, 4, master_seed=5, workers=2)
        assert a.read_bytes() == b.read_bytes()

    def test_resume_completes_partial_file(self, tmp_path):
        full, partial = tmp_path / "full.tsv", tmp_path / "partial.tsv"
        generate_to_file(full, 4, master_seed=5)
        lines = full.read_text().splitlines(keepends=True)
        partial.write_text("".join(lines[:3]))  # header + 2 records
        added = generate_to_file(partial, 4, master_seed=5, resume=True)
        assert added == 2
        assert partial.read_bytes() == full.read_bytes()

    def test_resume_noop_when_complete(self, tmp_path):
        path = tmp_path / "done.tsv"
        generate_to_file(path, 3, master_seed=5)
        before = path.read_bytes()
        assert generate_to_file(path, 3, master_seed=5, resume=True) == 0
        assert path.read_bytes() == before


class TestSplit:
    def test_paper_scale_sizes(self):
        parts = split(list(range(140_000)), (100 / 140, 20 / 140, 20 / 140))
        assert [len(p) for p in parts] == [100_000, 20_000, 20_000]

    def test_desk_scale_sizes(self):
        parts = split(list(range(6000)), (4 / 6, 1 / 6, 1 / 6))
        assert [len(p) for p in parts] == [4000, 1000, 1000]

    def test_contiguous_disjoint_order_preserving(self):
        items = list(range(100))
        a, b, c = split(items, (0.5, 0.25, 0.25))
        assert a + b + c == items

    def test_rejects_bad_fractions(self):
        with pytest.raises(ValueError):
            split(list(range(10)), (0.5, 0.25))
