"""Duplicate scores, the IMP scale, and per-deal cost vectors.

A cost vector prices all 36 final contracts for one North-South pair:
the unseen East-West cards are dealt five times, each sample is solved
double-dummy, scores are averaged per contract, and each contract's cost
is the IMP value of its gap to the best average score.
"""

import numpy as np

from bridgebid.cards import deal_random, hand_to_pbn
from bridgebid.contracts import Strain, contract_name
from bridgebid.scoring import contract_score, cost_vector, imp, normalize

print("Non-vulnerable duplicate scores:")
for level, strain, tricks in [(4, Strain.HEARTS, 10), (3, Strain.NOTRUMP, 9),
                              (2, Strain.SPADES, 7), (7, Strain.SPADES, 13),
                              (6, Strain.NOTRUMP, 12)]:
    score = contract_score(level, strain, tricks)
    print(f"  {level}{strain.symbol} taking {tricks:2d} tricks: {score:+5d}")
print()

print("IMP scale samples:", [(d, imp(d)) for d in (0, 50, 420, 1510, 4100)])
print()

deal = deal_random(seed=77)
print("North:", hand_to_pbn(deal.north))
print("South:", hand_to_pbn(deal.south))
costs = cost_vector(deal.north, deal.south, seed=77)
best = int(np.argmin(costs))
print(f"Best contract: {contract_name(best)} (cost 0)")
print(f"PASS costs {costs[0]} IMPs; worst contract costs {costs.max()}")
interesting = {j: int(costs[j]) for j in (0, 1, 16, 21, 35)}
print("Sample entries:", {contract_name(j): c for j, c in interesting.items()})
print()
norm = normalize(costs)
print(f"Normalized for training: best {norm.min():.2f}, "
      f"worst {norm.max():.2f} (rule-breaking bids train towards 1.2)")
