"""A miniature end-to-end training run.

Generates a small dataset (this is the slow part: every record runs 25
double-dummy solves), trains a 3-round stack with penetrative targets and
UCB1 exploration, and compares the result against the reference baselines.
Desk-scale runs use thousands of records; this uses 60 to stay quick.
"""

import numpy as np

from bridgebid.dataset import generate_dataset, split
from bridgebid.evaluate import baseline_policy, bid_deal, evaluate
from bridgebid.contracts import contract_name
from bridgebid.qlearn import TrainConfig, train

print("generating 60 records (a minute or two)...")
records = generate_dataset(n=60, master_seed=6, workers=2)
train_recs, valid_recs, test_recs = split(records, (4 / 6, 1 / 6, 1 / 6))

config = TrainConfig(l=3, algo_p="penetrative", algo_e="ucb1", explore=0.1,
                     epochs=8, patience=4, seed=1)
result = train(train_recs, valid_recs, config)
for line in result.log:
    print(" ", line)

stack = result.stack
print()
print("test-set mean IMP cost:")
print("  trained:    ", f"{evaluate(stack, test_recs).mean_cost:.3f}")
print("  always-pass:",
      f"{evaluate(baseline_policy('always-pass'), test_recs).mean_cost:.3f}")
print("  random-legal:",
      f"{evaluate(baseline_policy('random-legal', 3, 3), test_recs).mean_cost:.3f}")
print()

rec = test_recs[0]
actions, final = bid_deal(stack, rec.x1, rec.x2)
print("one auction:", "-".join(contract_name(a) for a in actions),
      "->", contract_name(final),
      f"(cost {rec.raw_costs[final]} IMPs,",
      f"best was {contract_name(int(np.argmin(rec.raw_costs)))})")
