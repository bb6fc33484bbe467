"""Dataset generation and persistence.

A record is (x1, x2, raw cost vector): North and South's cards plus the
IMP penalty of each of the 36 final contracts, from double-dummy analysis
over seeded East-West samples.  Records are independently regenerable:
record i is fully determined by ``stream_seed(master_seed, i)``.

File format (one record per line, tab-separated)::

    # bridgebid-dataset v1 n_samples=<k> master_seed=<seed>
    <id>\\t<x1 as 13 hex digits>\\t<x2 hex>\\t<36 space-separated ints>\\t<record seed>

Hex fields are the 52-bit hand masks, lowest card = bit 0.
"""

from __future__ import annotations

import multiprocessing
import os
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .cards import deal_random
from .rng import stream_seed
from .scoring import cost_vector

FORMAT_NAME = "bridgebid-dataset"
FORMAT_VERSION = "v1"
CHECKPOINT_EVERY = 1000


@dataclass(frozen=True)
class DealRecord:
    id: int
    x1: int
    x2: int
    raw_costs: np.ndarray  # 36 ints, min entry 0
    gen_seed: int

    def line(self) -> str:
        costs = " ".join(str(int(c)) for c in self.raw_costs)
        return f"{self.id}\t{self.x1:013x}\t{self.x2:013x}\t{costs}\t{self.gen_seed}"


def record_seed(master_seed: int, index: int) -> int:
    """Per-record seed; O(1) and independent of other records."""
    return stream_seed(master_seed, index)


def generate_record(index: int, master_seed: int, n_samples: int = 5) -> DealRecord:
    seed = record_seed(master_seed, index)
    deal = deal_random(seed)
    costs = cost_vector(deal.north, deal.south, seed=seed, n_samples=n_samples)
    return DealRecord(index, deal.north, deal.south, costs, seed)


def generate_dataset(n: int, master_seed: int, n_samples: int = 5,
                     workers: int = 1) -> list[DealRecord]:
    """Generate ``n`` records in memory (see generate_to_file for big runs)."""
    if n < 1:
        raise ValueError("n must be at least 1")
    if workers > 1:
        with multiprocessing.Pool(workers) as pool:
            return pool.starmap(
                generate_record,
                ((i, master_seed, n_samples) for i in range(n)),
                chunksize=4)
    return [generate_record(i, master_seed, n_samples) for i in range(n)]


def header_line(n_samples: int, master_seed: int) -> str:
    return (f"# {FORMAT_NAME} {FORMAT_VERSION} "
            f"n_samples={n_samples} master_seed={master_seed}")


def parse_header(line: str) -> dict:
    parts = line.strip().lstrip("#").split()
    if len(parts) < 4 or parts[0] != FORMAT_NAME:
        raise ValueError("not a bridgebid dataset file")
    meta = {"version": parts[1]}
    for kv in parts[2:]:
        k, _, v = kv.partition("=")
        meta[k] = int(v)
    return meta


def parse_record(line: str) -> DealRecord:
    rid, x1, x2, costs, seed = line.rstrip("\n").split("\t")
    raw = np.array([int(c) for c in costs.split(" ")], dtype=np.int64)
    if len(raw) != 36:
        raise ValueError(f"record {rid}: expected 36 costs, got {len(raw)}")
    return DealRecord(int(rid), int(x1, 16), int(x2, 16), raw, int(seed))


def write_dataset(records: Iterable[DealRecord], path: str | os.PathLike,
                  n_samples: int, master_seed: int) -> None:
    with open(path, "w") as fh:
        fh.write(header_line(n_samples, master_seed) + "\n")
        for rec in records:
            fh.write(rec.line() + "\n")


def read_dataset(path: str | os.PathLike) -> tuple[list[DealRecord], dict]:
    with open(path) as fh:
        meta = parse_header(fh.readline())
        records = [parse_record(line) for line in fh if line.strip()]
    return records, meta


def generate_to_file(path: str | os.PathLike, n: int, master_seed: int,
                     n_samples: int = 5, workers: int = 1,
                     resume: bool = True, progress: bool = False) -> int:
    """Generate records straight to ``path``, flushing every 1000 records.

    An interrupted run leaves a readable prefix; rerunning with the same
    arguments continues from the first missing record.  Returns the number
    of records newly generated.
    """
    if n < 1:
        raise ValueError("n must be at least 1")
    start = 0
    if resume and os.path.exists(path):
        try:
            existing, meta = read_dataset(path)
        except (ValueError, OSError):
            existing, meta = [], None
        if (meta and meta.get("n_samples") == n_samples
                and meta.get("master_seed") == master_seed
                and all(r.id == i for i, r in enumerate(existing))):
            start = len(existing)
            if start >= n:
                return 0
            with open(path, "a") as fh:
                _generate_range(fh, start, n, master_seed, n_samples,
                                workers, progress)
            return n - start
    with open(path, "w") as fh:
        fh.write(header_line(n_samples, master_seed) + "\n")
        _generate_range(fh, 0, n, master_seed, n_samples, workers, progress)
    return n - start


def _generate_range(fh, start: int, n: int, master_seed: int, n_samples: int,
                    workers: int, progress: bool) -> None:
    import time
    t0 = time.time()

    def tick(done: int) -> None:
        if done % CHECKPOINT_EVERY == 0:
            fh.flush()
            os.fsync(fh.fileno())
        if progress and (done % 50 == 0 or done == n):
            rate = (done - start) / max(time.time() - t0, 1e-9)
            print(f"[gen] {done}/{n} records ({rate:.2f}/s)", flush=True)

    if workers > 1:
        with multiprocessing.Pool(workers) as pool:
            done = start
            for rec in pool.imap(
                    _gen_one, ((i, master_seed, n_samples)
                               for i in range(start, n)), chunksize=2):
                fh.write(rec.line() + "\n")
                done += 1
                tick(done)
    else:
        for i in range(start, n):
            rec = generate_record(i, master_seed, n_samples)
            fh.write(rec.line() + "\n")
            tick(i + 1)
    fh.flush()


def _gen_one(args: tuple) -> DealRecord:
    return generate_record(*args)


def split(records: Sequence, fractions: Sequence[float]) -> tuple:
    """Contiguous, order-preserving split by fractions summing to 1.

    Boundaries are cumulative-rounded so sizes always sum to len(records);
    (100/140, 20/140, 20/140) over 140000 gives exactly 100000/20000/20000.
    """
    total = float(sum(fractions))
    if abs(total - 1.0) > 1e-9:
        raise ValueError("fractions must sum to 1")
    n = len(records)
    bounds = [0]
    acc = 0.0
    for f in fractions:
        acc += f
        bounds.append(round(acc * n))
    bounds[-1] = n
    return tuple(records[bounds[i]:bounds[i + 1]]
                 for i in range(len(fractions)))
