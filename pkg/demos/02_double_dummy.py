"""Double-dummy analysis: how many tricks each strain is worth.

The solver plays all four hands with open cards and optimal play.  For
each strain the declarer is whichever of North/South takes more tricks.
The exhaustive oracle (plain minimax, no pruning) cross-checks small
endings.
"""

import time

from bridgebid.cards import Deal, SEAT_N, deal_from_pbn, deal_random, deal_to_pbn
from bridgebid.contracts import Strain
from bridgebid.dds import best_declarer_tricks, solve, solve_all, solve_exhaustive

deal = deal_random(seed=31)
print("Deal:", deal_to_pbn(deal))
t0 = time.time()
tricks = solve_all(deal)
print(f"Best-declarer tricks (C D H S NT): {tricks}   "
      f"[{time.time() - t0:.2f}s]")
print()

# A constructed extreme: North holds every spade, South every heart.
construct = deal_from_pbn(
    "N:AKQJT98765432... E:..AKQJT98765432. "
    "S:.AKQJT98765432.. W:...AKQJT98765432")
print("Constructed deal:", deal_to_pbn(construct))
print("  spades as trump, North declares:",
      solve(construct, Strain.SPADES, SEAT_N), "tricks")
print("  notrump, North declares:",
      solve(construct, Strain.NOTRUMP, SEAT_N),
      "tricks (the defense runs its minors)")
print("  all five strains:", solve_all(construct))
print()

# The oracle agrees with the search on reduced deals.
small = Deal(*[sum(1 << (13 * s + r) for r in ranks) for s, ranks in
               enumerate([(12, 11), (10, 0), (9, 1), (8, 2)])])
print("Four seats, two cards each:", deal_to_pbn(small))
for strain in (Strain.NOTRUMP, Strain.CLUBS):
    a = solve(small, strain, SEAT_N)
    b = solve_exhaustive(small, strain, SEAT_N)
    print(f"  {strain.name:8s} search {a} == oracle {b}")
