"""Greedy evaluation of trained stacks, reference baselines, opening-table
extraction, and partner-estimation reporting.

Evaluation is always greedy over legal actions (no exploration) and is
scored in raw IMPs: a policy's cost on a record is the record's cost-vector
entry for the contract it bids to.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .auction import Auction, BidState, encode_state, legal_actions
from .cards import hcp, suit_lengths
from .contracts import NUM_ACTIONS, PASS, contract_name
from .qlearn import QStack, aux_targets, greedy_select, AUX_SCALE
from .rng import SplitMix64


@dataclass
class EvalReport:
    model_id: str
    dataset_id: str
    mean_cost: float
    stderr: float
    transcripts: list[tuple] = field(default_factory=list)
    # each transcript: (record id, action tuple, final contract, raw cost)

    def summary(self) -> str:
        return (f"model={self.model_id} dataset={self.dataset_id} "
                f"n={len(self.transcripts)} "
                f"mean_cost={self.mean_cost:.4f} stderr={self.stderr:.4f}")


# ---------------------------------------------------------------------------
# Policies: anything with bid_deal(x1, x2) -> (actions, final_contract)
# ---------------------------------------------------------------------------


def bid_deal(policy, x1: int, x2: int) -> tuple[list[int], int]:
    """Run one auction under a policy (QStack or baseline), greedily."""
    if isinstance(policy, QStack):
        from types import SimpleNamespace
        finals, actions = _bid_batch(policy, [SimpleNamespace(x1=x1, x2=x2)])
        return actions[0], finals[0]
    return policy.bid_deal(x1, x2)


class AlwaysPassPolicy:
    """Passes immediately; the reference floor for `did it learn anything`."""

    def bid_deal(self, x1: int, x2: int) -> tuple[list[int], int]:
        return [PASS], PASS


class RandomLegalPolicy:
    """Uniform random legal action each round; seeded and reproducible."""

    def __init__(self, seed: int, horizon: int = 4):
        self.seed = seed
        self.horizon = horizon

    def bid_deal(self, x1: int, x2: int) -> tuple[list[int], int]:
        rng = SplitMix64((self.seed ^ x1 ^ (x2 << 1)) & ((1 << 64) - 1))
        auction = Auction(x1, x2, self.horizon)
        while not auction.done:
            legal = auction.legal_actions()
            auction.step(legal[rng.randbelow(len(legal))])
        return auction.actions_taken, auction.final_contract


def baseline_policy(kind: str, seed: int = 0, horizon: int = 4):
    if kind == "always-pass":
        return AlwaysPassPolicy()
    if kind == "random-legal":
        return RandomLegalPolicy(seed, horizon)
    raise ValueError(f"unknown baseline {kind!r}")


# ---------------------------------------------------------------------------
# Evaluation
# ---------------------------------------------------------------------------


def evaluate(policy, records, model_id: str = "", dataset_id: str = "",
             keep_transcripts: bool = True) -> EvalReport:
    """Mean raw IMP cost of greedy bidding over the records."""
    if not len(records):
        raise ValueError("no records to evaluate")
    if isinstance(policy, QStack):
        finals, actions = _bid_batch(policy, records)
    else:
        actions = []
        finals = []
        for rec in records:
            acts, final = bid_deal(policy, rec.x1, rec.x2)
            actions.append(acts)
            finals.append(final)
    costs = np.array([rec.raw_costs[f]
                      for rec, f in zip(records, finals)], dtype=np.float64)
    mean = float(costs.mean())
    stderr = float(costs.std(ddof=1) / np.sqrt(len(costs))) if len(costs) > 1 else 0.0
    transcripts = []
    if keep_transcripts:
        transcripts = [
            (rec.id, tuple(acts), int(f), float(rec.raw_costs[f]))
            for rec, acts, f in zip(records, actions, finals)]
    return EvalReport(model_id, dataset_id, mean, stderr, transcripts)


def _bid_batch(stack: QStack, records) -> tuple[list[int], list[list[int]]]:
    """Greedy bidding over many records with batched forward passes.

    All auctions advance round by round in lockstep; exact same results as
    bid_deal one at a time, just faster.
    """
    n = len(records)
    finals: list[int | None] = [None] * n
    actions: list[list[int]] = [[] for _ in range(n)]
    hists = [0] * n
    live = list(range(n))
    forced = stack.sayc != "off"

    for r in range(1, stack.l + 1):
        if not live:
            break
        if r == 1 and forced:
            survivors = []
            for i in live:
                a = stack.opening_action(records[i].x1)
                actions[i].append(a)
                if a == PASS:
                    finals[i] = PASS
                else:
                    hists[i] |= 1 << a
                    survivors.append(i)
            live = survivors
            continue
        encs = np.stack([
            encode_state(BidState(
                records[i].x1 if r % 2 == 1 else records[i].x2,
                hists[i], r))
            for i in live])
        qs = stack.q_values_batch(r, encs)
        survivors = []
        for row, i in enumerate(live):
            legal = legal_actions(hists[i], r)
            a = greedy_select(qs[row], legal)
            actions[i].append(a)
            top = hists[i].bit_length() - 1 if hists[i] else None
            if a == PASS:
                finals[i] = top if top is not None else PASS
            elif top is not None and a == top:
                finals[i] = top
            else:
                hists[i] |= 1 << a
                if r == stack.l:
                    finals[i] = a
                else:
                    survivors.append(i)
        live = survivors
    return finals, actions


# ---------------------------------------------------------------------------
# Opening-table extraction
# ---------------------------------------------------------------------------


@dataclass
class OpeningRow:
    action: int
    count: int
    frequency: float
    hcp_low: float       # 5th percentile
    hcp_high: float      # 95th percentile
    modal_pattern: tuple  # most common (spades, hearts, diamonds, clubs)

    def format(self) -> str:
        name = contract_name(self.action)
        if self.count == 0:
            return f"{name:5s}  Not used"
        pat = "-".join(str(x) for x in self.modal_pattern)
        return (f"{name:5s}  {self.frequency:6.2%}  "
                f"HCP {self.hcp_low:.0f}-{self.hcp_high:.0f}  shape {pat}")


def opening_table(stack: QStack, n_hands: int, seed: int) -> list[OpeningRow]:
    """Group random hands by the stack's greedy round-1 action and profile
    each opening: usage frequency, 5th-95th percentile HCP, modal shape."""
    from .cards import deal_random

    by_action: dict[int, list[int]] = {}
    for i in range(n_hands):
        hand = deal_random(_hand_seed(seed, i)).north
        if stack.sayc != "off":
            a = stack.opening_action(hand)
        else:
            enc = encode_state(BidState(hand, 0, 1))
            a = greedy_select(stack.q_values(1, enc), list(range(NUM_ACTIONS)))
        by_action.setdefault(a, []).append(hand)

    rows = []
    for action in range(NUM_ACTIONS):
        hands = by_action.get(action, [])
        if not hands:
            rows.append(OpeningRow(action, 0, 0.0, 0.0, 0.0, ()))
            continue
        points = np.array([hcp(h) for h in hands], dtype=np.float64)
        patterns: dict[tuple, int] = {}
        for h in hands:
            p = suit_lengths(h)
            patterns[p] = patterns.get(p, 0) + 1
        modal = max(patterns.items(), key=lambda kv: (kv[1], kv[0]))[0]
        rows.append(OpeningRow(
            action, len(hands), len(hands) / n_hands,
            float(np.percentile(points, 5)), float(np.percentile(points, 95)),
            modal))
    return rows


def _hand_seed(seed: int, i: int) -> int:
    from .rng import stream_seed
    return stream_seed(seed, i)


# ---------------------------------------------------------------------------
# Partner-estimation report (auxiliary head)
# ---------------------------------------------------------------------------


@dataclass
class PartnerEstimationReport:
    at_round: int
    n_deals: int
    mae: np.ndarray          # per feature: spades, hearts, diamonds, clubs, hcp
    examples: list[tuple]    # (record id, actual 5-vector, estimate 5-vector)

    def format(self) -> str:
        names = ["spades", "hearts", "diamonds", "clubs", "HCP"]
        lines = [f"partner estimation at round {self.at_round} "
                 f"over {self.n_deals} deals:"]
        for name, err in zip(names, self.mae):
            lines.append(f"  {name:9s} MAE {err:.3f}")
        return "\n".join(lines)


def partner_estimation_report(stack: QStack, records, at_round: int,
                              max_examples: int = 5) -> PartnerEstimationReport:
    """Accuracy of the auxiliary head's partner-hand estimates.

    Replays each record's greedy auction; for deals still alive at
    ``at_round``, the acting player's auxiliary outputs are unscaled and
    compared against the partner's true suit lengths and HCP.
    """
    if not stack.aux_head:
        raise ValueError("stack has no auxiliary head")
    if at_round < 2 or at_round > stack.l:
        raise ValueError("at_round must be in 2..l")
    actuals = []
    estimates = []
    ids = []
    for rec in records:
        auction = Auction(rec.x1, rec.x2, stack.l)
        while not auction.done and auction.round < at_round:
            if auction.round == 1 and stack.sayc != "off":
                auction.step(stack.opening_action(rec.x1))
                continue
            qv = stack.q_values(auction.round, encode_state(auction.state))
            auction.step(greedy_select(qv, auction.legal_actions()))
        if auction.done or auction.round != at_round:
            continue
        enc = encode_state(auction.state)
        est = stack.aux_values(at_round, enc) * AUX_SCALE
        partner = rec.x2 if at_round % 2 == 1 else rec.x1
        actuals.append(aux_targets(partner))
        estimates.append(est)
        ids.append(rec.id)
    if not actuals:
        return PartnerEstimationReport(at_round, 0,
                                       np.full(5, np.nan), [])
    actual_arr = np.stack(actuals)
    est_arr = np.stack(estimates)
    mae = np.abs(actual_arr - est_arr).mean(axis=0)
    examples = [(ids[i], actuals[i], estimates[i])
                for i in range(min(max_examples, len(ids)))]
    return PartnerEstimationReport(at_round, len(ids), mae, examples)


# ---------------------------------------------------------------------------
# Report files
# ---------------------------------------------------------------------------


def write_report(report: EvalReport, path_prefix: str) -> None:
    """Write <prefix>.metrics.tsv and <prefix>.transcripts.tsv."""
    with open(f"{path_prefix}.metrics.tsv", "w") as fh:
        fh.write("model\tdataset\tn\tmean_cost\tstderr\n")
        fh.write(f"{report.model_id}\t{report.dataset_id}\t"
                 f"{len(report.transcripts)}\t{report.mean_cost!r}\t"
                 f"{report.stderr!r}\n")
    with open(f"{path_prefix}.transcripts.tsv", "w") as fh:
        fh.write("id\tbids\tcontract\tcost\n")
        for rid, acts, final, cost in report.transcripts:
            bids = "-".join(contract_name(a) for a in acts)
            fh.write(f"{rid}\t{bids}\t{contract_name(final)}\t{cost:g}\n")
