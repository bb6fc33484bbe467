"""Inspecting what a stack has learned: opening tables and the auxiliary
partner-estimation head.

The opening table groups random hands by the round-1 action and profiles
each opening's HCP range and modal shape.  With the auxiliary head on,
later-round networks also output the partner's estimated suit lengths and
HCP; the report compares those against the truth.
"""

import numpy as np

from bridgebid.cards import deal_random
from bridgebid.dataset import DealRecord
from bridgebid.evaluate import opening_table, partner_estimation_report
from bridgebid.qlearn import QStack, TrainConfig, train
from bridgebid.rng import SplitMix64


def quick_records(n, seed):
    """Real deals with fabricated cost vectors: fine for a mechanics demo
    (real ones take double-dummy time; see demo 06 for the full pipeline)."""
    out = []
    for i in range(n):
        deal = deal_random(seed * 1_000_003 + i)
        rng = SplitMix64(seed + i)
        raw = np.array([rng.randbelow(25) for _ in range(36)], dtype=np.int64)
        raw[rng.randbelow(36)] = 0
        out.append(DealRecord(i, deal.north, deal.south, raw, seed + i))
    return out


records = quick_records(120, seed=8)
config = TrainConfig(l=3, epochs=5, patience=5, seed=3, aux_head=True)
result = train(records[:100], records[100:], config)
stack = result.stack

print("opening table of the tiny trained stack (first 11 actions):")
for row in opening_table(stack, n_hands=2000, seed=5)[:11]:
    print(" ", row.format())
print()

report = partner_estimation_report(stack, records, at_round=2)
print(report.format())
for rid, actual, est in report.examples[:3]:
    a = " ".join(f"{v:g}" for v in actual)
    e = " ".join(f"{v:.2f}" for v in est)
    print(f"  deal {rid}: actual [{a}]  estimated [{e}]")
print()

forced = QStack(l=3, seed=0, sayc="full")
print("rule-based forced openings (SAYC mode) over the same hands:")
for row in opening_table(forced, n_hands=2000, seed=5)[:11]:
    print(" ", row.format())
