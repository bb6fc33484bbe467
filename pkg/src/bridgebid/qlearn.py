"""The learning core: per-round Q-networks trained from cost vectors.

One network per bidding round (round 1 sees 52 inputs, later rounds 88);
outputs are predicted rewards
``R(a) = 1 - cost(a)`` over the 36 actions, with illegal actions trained
towards 1 - 1.2 = -0.2 so the bidding rules themselves are learned.
Episodes are rolled out with an exploration policy, every visited state is
stored with a full 36-action target vector (one-step Bellman or
penetrative rollout), and each round's network takes one rmsprop minibatch
step per episode.
"""

from __future__ import annotations

import io
import struct
from dataclasses import dataclass, field, replace

import numpy as np

from . import net as nets_mod
from .auction import Auction, BidState, encode_state, legal_actions, state_width
from .cards import hcp, suit_lengths
from .contracts import NUM_ACTIONS, PASS
from .net import Mlp, RmspropState, backward, net_from_bytes, net_to_bytes, rmsprop_step
from .sayc import sayc_opening
from .scoring import ILLEGAL_COST, normalize

AUX_WIDTH = 5
AUX_SCALE = np.array([13.0, 13.0, 13.0, 13.0, 40.0])
ILLEGAL_REWARD = 1.0 - ILLEGAL_COST  # -0.2

_SAYC_CODES = {"off": 0, "full": 1, "no-weak": 2}
_SAYC_NAMES = {v: k for k, v in _SAYC_CODES.items()}
_STACK_MAGIC = b"BBQ1"


@dataclass
class TrainConfig:
    """Knobs for one training run; defaults follow the experiment setup."""

    l: int = 4
    algo_p: str = "penetrative"       # "bellman" | "penetrative"
    algo_e: str = "ucb1"              # "none" | "eps" | "ucb1"
    explore: float = 0.1              # epsilon, or the UCB1 alpha
    epochs: int = 30
    patience: int = 10
    batch_size: int = nets_mod.BATCH_SIZE
    seed: int = 0
    aux_head: bool = False
    sayc: str = "off"                 # "off" | "full" | "no-weak"
    replay_capacity: int = 50_000
    ucb_scope: str = "per-round"      # "per-round" | "global"
    eta: float = nets_mod.ETA
    step_rate: float = nets_mod.STEP_RATE
    decay: float = nets_mod.RMSPROP_DECAY
    momentum: float = nets_mod.RMSPROP_MOMENTUM
    train_eval_cap: int = 5000        # records scored for the log's train cost

    def validate(self) -> None:
        if not 2 <= self.l <= 5:
            raise ValueError("l must be in 2..5")
        if self.algo_p not in ("bellman", "penetrative"):
            raise ValueError(f"unknown algo_p {self.algo_p!r}")
        if self.algo_e not in ("none", "eps", "ucb1"):
            raise ValueError(f"unknown algo_e {self.algo_e!r}")
        if self.sayc not in _SAYC_CODES:
            raise ValueError(f"unknown sayc mode {self.sayc!r}")
        if self.ucb_scope not in ("per-round", "global"):
            raise ValueError(f"unknown ucb_scope {self.ucb_scope!r}")
        if self.algo_e == "eps" and not 0.0 <= self.explore <= 1.0:
            raise ValueError("epsilon must be in [0, 1]")
        if self.epochs < 1 or self.patience < 1 or self.batch_size < 1:
            raise ValueError("epochs, patience and batch_size must be >= 1")


class QStack:
    """l per-round networks plus the bandit counters for UCB1."""

    def __init__(self, l: int, seed: int, aux_head: bool = False,
                 sayc: str = "off", ucb_scope: str = "per-round"):
        if not 2 <= l <= 5:
            raise ValueError("l must be in 2..5")
        self.l = l
        self.aux_head = aux_head
        self.sayc = sayc
        self.ucb_scope = ucb_scope
        seeds = np.random.SeedSequence(seed).spawn(l)
        self.nets: list[Mlp] = []
        for j in range(1, l + 1):
            out = NUM_ACTIONS + (AUX_WIDTH if aux_head and j >= 2 else 0)
            net_seed = int(seeds[j - 1].generate_state(1)[0])
            self.nets.append(Mlp.new(state_width(j), out, net_seed))
        rows = l if ucb_scope == "per-round" else 1
        self.bandit_total = np.zeros(rows, dtype=np.int64)
        self.bandit_counts = np.zeros((rows, NUM_ACTIONS), dtype=np.int64)

    # -- inference ---------------------------------------------------------

    def net_for_round(self, round: int) -> Mlp:
        return self.nets[round - 1]

    def q_values(self, round: int, enc: np.ndarray) -> np.ndarray:
        return self.net_for_round(round).forward(enc)[:NUM_ACTIONS]

    def q_values_batch(self, round: int, encs: np.ndarray) -> np.ndarray:
        return self.net_for_round(round).forward(encs)[:, :NUM_ACTIONS]

    def aux_values(self, round: int, enc: np.ndarray) -> np.ndarray:
        """Scaled partner-feature estimates from the auxiliary head."""
        if not self.aux_head or round < 2:
            raise ValueError("auxiliary head not present for this round")
        return self.net_for_round(round).forward(enc)[NUM_ACTIONS:]

    def bandit_row(self, round: int) -> int:
        return round - 1 if self.ucb_scope == "per-round" else 0

    def opening_action(self, hand: int) -> int | None:
        """Forced round-1 action under a SAYC mode, else None."""
        if self.sayc == "off":
            return None
        return sayc_opening(hand, weak_twos=(self.sayc == "full"))

    def copy(self) -> "QStack":
        dup = object.__new__(QStack)
        dup.l = self.l
        dup.aux_head = self.aux_head
        dup.sayc = self.sayc
        dup.ucb_scope = self.ucb_scope
        dup.nets = [n.copy() for n in self.nets]
        dup.bandit_total = self.bandit_total.copy()
        dup.bandit_counts = self.bandit_counts.copy()
        return dup

    # -- checkpoint format ---------------------------------------------------
    # magic "BBQ1", u32 l, u8 aux, u8 sayc(0/1/2), u8 scope(0 per-round,
    # 1 global), u8 pad, u32 bandit rows R, R int64 totals, R*36 int64
    # counts, then the l networks in round order (see net_to_bytes).

    def to_bytes(self) -> bytes:
        buf = io.BytesIO()
        buf.write(_STACK_MAGIC)
        buf.write(struct.pack("<IBBBB", self.l, int(self.aux_head),
                              _SAYC_CODES[self.sayc],
                              0 if self.ucb_scope == "per-round" else 1, 0))
        rows = self.bandit_counts.shape[0]
        buf.write(struct.pack("<I", rows))
        buf.write(self.bandit_total.astype("<i8").tobytes())
        buf.write(self.bandit_counts.astype("<i8").tobytes())
        for n in self.nets:
            buf.write(net_to_bytes(n))
        return buf.getvalue()

    @classmethod
    def from_bytes(cls, data: bytes) -> "QStack":
        if data[:4] != _STACK_MAGIC:
            raise ValueError("not a bridgebid checkpoint")
        l, aux, sayc_code, scope, _ = struct.unpack_from("<IBBBB", data, 4)
        (rows,) = struct.unpack_from("<I", data, 12)
        off = 16
        total = np.frombuffer(data, "<i8", rows, off).copy()
        off += 8 * rows
        counts = np.frombuffer(data, "<i8", rows * NUM_ACTIONS, off)
        counts = counts.reshape(rows, NUM_ACTIONS).copy()
        off += 8 * rows * NUM_ACTIONS
        stack = object.__new__(cls)
        stack.l = l
        stack.aux_head = bool(aux)
        stack.sayc = _SAYC_NAMES[sayc_code]
        stack.ucb_scope = "per-round" if scope == 0 else "global"
        stack.bandit_total = total
        stack.bandit_counts = counts
        stack.nets = []
        for _ in range(l):
            n, off = net_from_bytes(data, off)
            stack.nets.append(n)
        return stack

    def save(self, path) -> None:
        with open(path, "wb") as fh:
            fh.write(self.to_bytes())

    @classmethod
    def load(cls, path) -> "QStack":
        with open(path, "rb") as fh:
            return cls.from_bytes(fh.read())


def aux_targets(partner_hand: int) -> np.ndarray:
    """Unscaled partner features: the four suit lengths and the HCP."""
    s, h, d, c = suit_lengths(partner_hand)
    return np.array([s, h, d, c, hcp(partner_hand)], dtype=np.float64)


# ---------------------------------------------------------------------------
# Exploration policies
# ---------------------------------------------------------------------------


def greedy_select(qvals: np.ndarray, legal: list[int]) -> int:
    """Legal argmax; ties break to the lowest action index."""
    arr = np.asarray(legal)
    return int(arr[np.argmax(qvals[arr])])


def eps_greedy_select(qvals: np.ndarray, eps: float, legal: list[int],
                      rng: np.random.Generator) -> int:
    if not legal:
        raise ValueError("no legal actions")
    if eps > 0.0 and rng.random() < eps:
        return int(legal[rng.integers(len(legal))])
    return greedy_select(qvals, legal)


def ucb1_select(qvals: np.ndarray, total: int, counts: np.ndarray,
                alpha: float, legal: list[int],
                rng: np.random.Generator) -> int:
    """argmax over legal of q + alpha*sqrt(2 ln T / T_a); untried actions
    (T_a = 0) come first, tie-broken uniformly at random."""
    if not legal:
        raise ValueError("no legal actions")
    arr = np.asarray(legal)
    c = counts[arr]
    untried = arr[c == 0]
    if len(untried):
        return int(untried[rng.integers(len(untried))])
    scores = qvals[arr] + alpha * np.sqrt(2.0 * np.log(total) / c)
    return int(arr[np.argmax(scores)])


# ---------------------------------------------------------------------------
# Training targets
# ---------------------------------------------------------------------------


def _terminal_contract(history: int, round: int, horizon: int,
                       action: int) -> int | None:
    """Final contract if ``action`` ends the auction here, else None."""
    top = history.bit_length() - 1 if history else None
    if action == PASS:
        return top if top is not None else PASS
    if top is not None and action == top:
        return top
    if round >= horizon:
        return action
    return None


def one_step_target(stack: QStack, x1: int, x2: int, history: int,
                    round: int, action: int, norm_costs: np.ndarray) -> float:
    """Cost target from the plain one-step relation: terminal actions read
    the precomputed cost; otherwise 1 minus the next round's best predicted
    reward over its legal actions (zero instant reward, undiscounted)."""
    final = _terminal_contract(history, round, stack.l, action)
    if final is not None:
        return float(norm_costs[final])
    new_hist = history | (1 << action)
    nxt_hand = x2 if (round + 1) % 2 == 0 else x1
    enc = encode_state(BidState(nxt_hand, new_hist, round + 1))
    q = stack.q_values(round + 1, enc)
    legal = legal_actions(new_hist, round + 1)
    return 1.0 - float(np.max(q[np.asarray(legal)]))


def penetrative_target(stack: QStack, x1: int, x2: int, history: int,
                       round: int, action: int,
                       norm_costs: np.ndarray) -> float:
    """Cost target by greedy rollout: apply the action, then let each later
    round's network pick its best legal action until the auction ends, and
    read the precomputed cost of the final contract."""
    final = _terminal_contract(history, round, stack.l, action)
    hist = history
    r = round
    a = action
    while final is None:
        hist |= 1 << a
        r += 1
        hand = x1 if r % 2 == 1 else x2
        enc = encode_state(BidState(hand, hist, r))
        q = stack.q_values(r, enc)
        a = greedy_select(q, legal_actions(hist, r))
        final = _terminal_contract(hist, r, stack.l, a)
    return float(norm_costs[final])


def _costs_all_actions(stack: QStack, x1: int, x2: int, history: int,
                       round: int, norm_costs: np.ndarray,
                       algo_p: str) -> np.ndarray:
    """Vectorized cost targets for all 36 actions of one state.

    Legal actions get their algo_p cost; illegal actions get the
    rule-breaking cost.  Batches the per-branch rollouts round by round
    (every surviving branch sits at the same round).
    """
    out = np.full(NUM_ACTIONS, ILLEGAL_COST, dtype=np.float64)
    legal = legal_actions(history, round)
    live_actions: list[int] = []
    live_hist: list[int] = []
    for a in legal:
        final = _terminal_contract(history, round, stack.l, a)
        if final is not None:
            out[a] = norm_costs[final]
        else:
            live_actions.append(a)
            live_hist.append(history | (1 << a))
    if not live_actions:
        return out

    r = round + 1
    branch_ids = list(range(len(live_actions)))
    hists = live_hist
    if algo_p == "bellman":
        hand = x1 if r % 2 == 1 else x2
        encs = np.stack([encode_state(BidState(hand, h, r)) for h in hists])
        qs = stack.q_values_batch(r, encs)
        for i, a in enumerate(live_actions):
            la = np.asarray(legal_actions(hists[i], r))
            out[a] = 1.0 - float(np.max(qs[i][la]))
        return out

    # penetrative: greedy rollout of every live branch in lockstep
    while branch_ids:
        hand = x1 if r % 2 == 1 else x2
        encs = np.stack([encode_state(BidState(hand, hists[i], r))
                         for i in branch_ids])
        qs = stack.q_values_batch(r, encs)
        survivors = []
        for row, i in enumerate(branch_ids):
            la = legal_actions(hists[i], r)
            a_star = greedy_select(qs[row], la)
            final = _terminal_contract(hists[i], r, stack.l, a_star)
            if final is not None:
                out[live_actions[i]] = norm_costs[final]
            else:
                hists[i] |= 1 << a_star
                survivors.append(i)
        branch_ids = survivors
        r += 1
    return out


def make_target_vector(stack: QStack, x1: int, x2: int, history: int,
                       round: int, norm_costs: np.ndarray,
                       algo_p: str) -> tuple[np.ndarray, np.ndarray]:
    """Training target in reward form for every action, plus its mask.

    Illegal actions are included (trained towards -0.2) so the mask is all
    ones; with the auxiliary head the partner's scaled features are
    appended for rounds >= 2.
    """
    costs = _costs_all_actions(stack, x1, x2, history, round, norm_costs,
                               algo_p)
    rewards = 1.0 - costs
    if stack.aux_head and round >= 2:
        partner = x2 if round % 2 == 1 else x1
        rewards = np.concatenate([rewards, aux_targets(partner) / AUX_SCALE])
    return rewards, np.ones_like(rewards)


# ---------------------------------------------------------------------------
# Replay database
# ---------------------------------------------------------------------------


class ReplayRing:
    """Fixed-capacity ring of (encoded state, target vector) pairs."""

    def __init__(self, capacity: int, state_width: int, target_width: int):
        self.states = np.zeros((capacity, state_width), dtype=np.uint8)
        self.targets = np.zeros((capacity, target_width), dtype=np.float64)
        self.capacity = capacity
        self.size = 0
        self.cursor = 0

    def add(self, enc: np.ndarray, target: np.ndarray) -> None:
        self.states[self.cursor] = enc.astype(np.uint8)
        self.targets[self.cursor] = target
        self.cursor = (self.cursor + 1) % self.capacity
        self.size = min(self.size + 1, self.capacity)

    def sample(self, rng: np.random.Generator,
               batch: int) -> tuple[np.ndarray, np.ndarray]:
        idx = rng.integers(0, self.size, size=batch)
        return self.states[idx].astype(np.float64), self.targets[idx]


# ---------------------------------------------------------------------------
# The training loop
# ---------------------------------------------------------------------------


@dataclass
class TrainResult:
    stack: QStack              # best-validation checkpoint
    log: list[str] = field(default_factory=list)
    history: list[dict] = field(default_factory=list)


def train(train_records, valid_records, config: TrainConfig) -> TrainResult:
    """Q-learning over the dataset (the full loop; see module docstring).

    Each outer iteration draws one instance, rolls the auction forward
    under the exploration policy while storing per-round target vectors,
    then takes one minibatch gradient step per round.  An epoch is
    len(train_records) iterations; after each epoch the greedy policy is
    scored on the validation split and the best stack is kept, stopping
    when ``patience`` epochs pass without improvement.
    """
    from .evaluate import evaluate  # late import; evaluate builds on us

    config.validate()
    if not train_records:
        raise ValueError("empty training set")
    rng = np.random.default_rng(config.seed)
    stack = QStack(config.l, config.seed, aux_head=config.aux_head,
                   sayc=config.sayc, ucb_scope=config.ucb_scope)
    opt = [RmspropState.for_params(
        n.parameters(), decay=config.decay, momentum=config.momentum,
        lr=config.eta, step_rate=config.step_rate) for n in stack.nets]
    replay = [ReplayRing(config.replay_capacity, state_width(j),
                         stack.nets[j - 1].output_width)
              for j in range(1, config.l + 1)]
    norm_cache = [normalize(rec.raw_costs) for rec in train_records]

    best = None
    best_val = float("inf")
    bad_epochs = 0
    result = TrainResult(stack=stack)

    train_eval = train_records[:min(len(train_records),
                                    config.train_eval_cap)]
    for epoch in range(1, config.epochs + 1):
        for _ in range(len(train_records)):
            i = int(rng.integers(len(train_records)))
            _run_episode(stack, train_records[i], norm_cache[i], replay,
                         config, rng)
            for j in range(1, config.l + 1):
                if config.sayc != "off" and j == 1:
                    continue
                ring = replay[j - 1]
                if ring.size == 0:
                    continue
                x, t = ring.sample(rng, config.batch_size)
                netj = stack.nets[j - 1]
                _, grads = backward(netj, x, t, np.ones_like(t))
                rmsprop_step(netj.parameters(), grads, opt[j - 1])

        train_cost = evaluate(stack, train_eval,
                              keep_transcripts=False).mean_cost
        val_cost = evaluate(stack, valid_records,
                            keep_transcripts=False).mean_cost
        line = (f"epoch {epoch} train_cost {train_cost:.4f} "
                f"val_cost {val_cost:.4f} lr {opt[0].lr:.5f}")
        result.log.append(line)
        result.history.append({"epoch": epoch, "train_cost": train_cost,
                               "val_cost": val_cost})
        for st in opt:
            st.decay_lr()
        if val_cost < best_val - 1e-12:
            best_val = val_cost
            best = stack.copy()
            bad_epochs = 0
        else:
            bad_epochs += 1
            if bad_epochs >= config.patience:
                result.log.append(f"early stop after epoch {epoch} "
                                  f"(best val_cost {best_val:.4f})")
                break

    result.stack = best if best is not None else stack
    return result


def _run_episode(stack: QStack, rec, norm_costs: np.ndarray,
                 replay: list[ReplayRing], config: TrainConfig,
                 rng: np.random.Generator) -> None:
    auction = Auction(rec.x1, rec.x2, config.l)
    while not auction.done:
        t = auction.round
        if t == 1 and config.sayc != "off":
            auction.step(stack.opening_action(rec.x1))
            continue
        enc = encode_state(auction.state)
        targets, _ = make_target_vector(stack, rec.x1, rec.x2,
                                        auction.history, t, norm_costs,
                                        config.algo_p)
        replay[t - 1].add(enc, targets)
        legal = auction.legal_actions()
        qv = stack.q_values(t, enc)
        if config.algo_e == "eps":
            action = eps_greedy_select(qv, config.explore, legal, rng)
        elif config.algo_e == "ucb1":
            row = stack.bandit_row(t)
            action = ucb1_select(qv, int(stack.bandit_total[row]),
                                 stack.bandit_counts[row], config.explore,
                                 legal, rng)
            stack.bandit_total[row] += 1
            stack.bandit_counts[row][action] += 1
        else:
            action = greedy_select(qv, legal)
        auction.step(action)


def train_sayc_variant(train_records, valid_records, config: TrainConfig,
                       weak_bids: bool) -> TrainResult:
    """train() with round 1 forced to the rule-based opening (and net 1
    left untrained); ``weak_bids`` selects the full table or the variant
    without weak two-bids."""
    cfg = replace(config, sayc="full" if weak_bids else "no-weak")
    return train(train_records, valid_records, cfg)
