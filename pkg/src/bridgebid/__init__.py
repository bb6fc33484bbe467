"""Learning contract-bridge bidding from raw deals.

Subpackage map:

- ``cards``     cards, hands (52-bit ints), deals, seeded dealing, text notation
- ``contracts`` the 36-action bid ladder and strain ordering
- ``dds``       double-dummy solver plus the exhaustive test oracle
- ``scoring``   duplicate scores, IMP scale, per-deal cost vectors
- ``dataset``   dataset generation, file format, splits
- ``net``       fully-connected network, masked loss, rmsprop-with-momentum
- ``auction``   bidding states, legality, transitions, state encoding
- ``sayc``      rule-based opening bids used for the forced-opening variants
- ``qlearn``    per-round Q-networks, targets, exploration, training loop
- ``evaluate``  greedy evaluation, baselines, opening tables, reports
- ``cli``       command-line entry points (gen/train/eval/open-table/dds/bid)
"""

from .cards import Deal, deal_random, encode_hand, hcp, suit_lengths
from .contracts import PASS, Strain, contract_index, contract_name
from .dds import best_declarer_tricks, solve, solve_all, solve_exhaustive
from .scoring import contract_score, cost_vector, imp, normalize

__all__ = [
    "Deal", "deal_random", "encode_hand", "hcp", "suit_lengths",
    "PASS", "Strain", "contract_index", "contract_name",
    "best_declarer_tricks", "solve", "solve_all", "solve_exhaustive",
    "contract_score", "cost_vector", "imp", "normalize",
]
