"""Double-dummy analysis: exact trick counts under perfect information.

``solve`` runs a depth-first minimax over tricks with alpha-beta pruning,
a transposition table keyed on rank-normalized positions, equivalence-class
move collapsing, and a sure-trick bound that lets the side on lead claim
cashable winners without search.  Exact values are extracted with
null-window probes around a binary search, so most of the work is boolean
questions ("do North-South take at least k tricks?") that prune hard.

``solve_exhaustive`` is the test oracle: plain full-width minimax over
every card, no pruning, no caching, usable on reduced deals up to 5 cards
per seat.

Conventions: internal values are tricks won by North-South; the opening
lead is made by the seat to the declarer's left; a trump card beats any
non-trump card, otherwise the highest card of the led suit wins.
"""

from __future__ import annotations

from . import _native
from .cards import Deal
from .contracts import Strain

_NS = (True, False, True, False)  # seat index -> is North-South

# Skip the transposition table for the last tricks: computing the
# normalized key costs more than searching the tiny remaining subtree.
_TT_MIN_TRICKS = 3

# Equivalence-class representatives: one card per maximal run of `mine` not
# interrupted by a live rank someone else holds.  Cards inside a run are
# interchangeable now and in every future trick, so searching one is enough.
_REPS_CACHE: dict[tuple[int, int], tuple[int, ...]] = {}


def _discard_lowest(hand4: list) -> None:
    """Remove the lowest-ranked card from a 4-suit mask list (sim helper)."""
    best_s = -1
    best_r = 99
    for s in range(4):
        m = hand4[s]
        if m:
            r = (m & -m).bit_length() - 1
            if r < best_r:
                best_r, best_s = r, s
    if best_s >= 0:
        hand4[best_s] ^= 1 << best_r


def _reps_of(mine: int, blockers: int) -> tuple[int, ...]:
    key = (mine, blockers)
    reps = _REPS_CACHE.get(key)
    if reps is not None:
        return reps
    out = []
    in_run = False
    scan = mine | blockers
    while scan:
        low = scan & -scan
        if mine & low:
            if not in_run:
                out.append(low.bit_length() - 1)
                in_run = True
        else:
            in_run = False
        scan ^= low
    reps = tuple(out)
    if len(_REPS_CACHE) > 2_000_000:
        _REPS_CACHE.clear()
    _REPS_CACHE[key] = reps
    return reps


class DoubleDummySolver:
    """Search state for one deal and strain; owns its transposition table.

    Hands live in ``self.h`` as 16 thirteen-bit rank masks indexed by
    ``player * 4 + suit`` (bit 0 = deuce, bit 12 = ace).
    """

    def __init__(self, deal: Deal, strain: Strain, use_table: bool = True):
        sizes = {hand.bit_count() for hand in deal.hands}
        if len(sizes) != 1:
            raise ValueError("all four hands must have the same size")
        self.tricks_total = sizes.pop()
        h = []
        for hand in deal.hands:
            for s in range(4):
                h.append((hand >> (13 * s)) & 0x1FFF)
        self.h = h
        trump = strain.trump_suit
        self.trump = -1 if trump is None else trump
        self.use_table = use_table
        self.tt: dict = {}
        # history heuristic: cards that caused cutoffs get ordered earlier
        self.hist = [0] * 52


    # -- public -------------------------------------------------------------

    def ns_tricks(self, leader: int, lo: int = 0, hi: int | None = None,
                  guess: int | None = None) -> int:
        """Exact North-South trick count with ``leader`` on lead.

        Binary search over null-window probes; ``guess`` seeds the first
        probe (a wrong guess costs extra probes, never a wrong answer).
        """
        if hi is None:
            hi = self.tricks_total
        while lo < hi:
            if guess is not None:
                mid = guess if lo < guess <= hi else (lo + hi + 1) // 2
                guess = None
            else:
                mid = (lo + hi + 1) // 2
            hist = self.hist
            for i in range(52):
                hist[i] >>= 1
            v = self._future(leader, mid - 1, mid, self.tricks_total)
            if v >= mid:
                lo = v
            else:
                hi = v
        return lo

    def ns_tricks_at_least(self, leader: int, target: int) -> bool:
        """Null-window probe: do North-South take >= target tricks?"""
        if target <= 0:
            return True
        if target > self.tricks_total:
            return False
        return self._future(leader, target - 1, target, self.tricks_total) >= target

    # -- bounds -------------------------------------------------------------

    def _sure_tricks(self, leader: int, need: int) -> tuple[int, tuple | None]:
        """Sound lower bound: tricks the leading side can simply cash.

        Simulates the side leading top-alive cards (its own or towards the
        partner's).  Only the side's own cards are removed as they are led,
        followed, or discarded; opponents' hands are left untouched, which
        keeps every later "is it the top?" check conservative.  With trumps
        out against the side, only trump cashes are counted (anything else
        could be ruffed).  Stops once ``need`` tricks are banked.

        Returns (count, first cashing card) so the search can try the
        proven winner first.
        """
        h = self.h
        trump = self.trump
        pd = (leader + 2) & 3
        # local copies of the side's suits; opponents stay fixed
        mine = h[leader * 4: leader * 4 + 4]
        his = h[pd * 4: pd * 4 + 4]
        o1 = (leader + 1) & 3
        o2 = (leader + 3) & 3
        opp = [h[o1 * 4 + s] | h[o2 * 4 + s] for s in range(4)]
        q = 0
        first_move = None
        while q < need:
            took = None
            if trump >= 0 and opp[trump]:
                suits = (trump,)
            else:
                suits = (0, 1, 2, 3)
            for s in suits:
                m, p = mine[s], his[s]
                if not m:
                    continue
                alive = m | p | opp[s]
                top = 1 << (alive.bit_length() - 1)
                if m & top:
                    mine[s] = m ^ top
                    if p:
                        his[s] = p ^ (p & -p)  # partner follows low
                    elif trump >= 0 and s != trump and his[trump] and not any(
                            his[t] for t in range(4) if t != trump):
                        # partner holds only trumps: the forced ruff wins
                        # the trick instead, moving the lead across
                        his[trump] ^= his[trump] & -his[trump]
                        mine, his = his, mine
                    else:
                        _discard_lowest(his)
                    took = (s, top.bit_length() - 1)
                    break
                if p & top:
                    mine[s] = m ^ (m & -m)  # lead low towards partner's top
                    his[s] = p ^ top
                    mine, his = his, mine
                    took = (s, (m & -m).bit_length() - 1)
                    break
            if took is None:
                break
            if first_move is None:
                first_move = took
            q += 1
        return q, first_move

    # -- search -------------------------------------------------------------

    def _key(self, leader: int) -> tuple:
        """Rank-normalized position key: per-suit owner sequences + leader.

        Per suit, the owner sequence of live ranks from low to high; dead
        ranks vanish, so positions that differ only in collapsed gaps share
        a key.
        """
        h = self.h
        trump = self.trump
        codes = []
        for s in range(4):
            m0, m1, m2, m3 = h[s], h[4 + s], h[8 + s], h[12 + s]
            alive = m0 | m1 | m2 | m3
            v = 1
            while alive:
                low = alive & -alive
                alive ^= low
                v <<= 2
                if m0 & low:
                    pass
                elif m1 & low:
                    v += 1
                elif m2 & low:
                    v += 2
                else:
                    v += 3
            codes.append(v)
        return (codes[0], codes[1], codes[2], codes[3], leader)

    def _future(self, leader: int, alpha: int, beta: int, tricks_left: int) -> int:
        """Fail-soft alpha-beta value of future NS tricks from a trick start."""
        h = self.h
        if tricks_left == 1:
            trump = self.trump
            win_p = win_s = win_r = -1
            p = leader
            for _ in range(4):
                base = p * 4
                for s in range(4):
                    r = h[base + s]
                    if r:
                        if win_p < 0:
                            win_p, win_s, win_r = p, s, r
                        elif (s == win_s and r > win_r) or (
                                s == trump and win_s != trump):
                            win_p, win_s, win_r = p, s, r
                        break
                p = (p + 1) & 3
            return 1 if _NS[win_p] else 0

        trump = self.trump
        if trump >= 0:
            # A hand's top run of live trumps wins no matter who leads:
            # those cards can always be played to (or ruff into) a trick
            # nothing else beats.  Gives both a floor and a ceiling.
            a0, a1 = h[trump], h[4 + trump]
            a2, a3 = h[8 + trump], h[12 + trump]
            alive = a0 | a1 | a2 | a3
            if alive:
                bit = 1 << (alive.bit_length() - 1)
                own = a0 if bit & a0 else a2 if bit & a2 else -1
                if own >= 0:
                    g = 0
                    while bit & own:
                        g += 1
                        alive ^= bit
                        if not alive:
                            break
                        bit = 1 << (alive.bit_length() - 1)
                    if g >= beta:
                        return g
                    if g > alpha:
                        alpha = g
                else:
                    own = a1 if bit & a1 else a3
                    g = 0
                    while bit & own:
                        g += 1
                        alive ^= bit
                        if not alive:
                            break
                        bit = 1 << (alive.bit_length() - 1)
                    v = tricks_left - g
                    if v <= alpha:
                        return v
                    if v < beta:
                        beta = v

        use_tt = self.use_table and tricks_left >= _TT_MIN_TRICKS
        key = None
        tt_move = None
        lo, hi = 0, tricks_left
        if use_tt:
            key = self._key(leader)
            ent = self.tt.get(key)
            if ent is not None:
                lo, hi, tt_move = ent
                if lo >= beta:
                    return lo
                if hi <= alpha:
                    return hi
                if lo == hi:
                    return lo
                if lo > alpha:
                    alpha = lo
                if hi < beta:
                    beta = hi

        # Sure-trick claims for the side on lead.
        ns_leads = _NS[leader]
        q, sim_move = self._sure_tricks(
            leader, beta if ns_leads else tricks_left - alpha)
        if ns_leads:
            if q >= beta:
                if use_tt and q > lo:
                    self.tt[key] = (q, hi, tt_move)
                return q
            if q >= tricks_left:
                return tricks_left
            if q > lo:
                lo = q
                if q > alpha:
                    alpha = q
        else:
            v = tricks_left - q
            if v <= alpha:
                if use_tt and v < hi:
                    self.tt[key] = (lo, v, tt_move)
                return v
            if q >= tricks_left:
                return 0
            if v < hi:
                hi = v
                if v < beta:
                    beta = v

        alive_ts = [h[s] | h[4 + s] | h[8 + s] | h[12 + s] for s in range(4)]
        v, move = self._lead(leader, alpha, beta, tricks_left, alive_ts,
                             tt_move, sim_move)

        if use_tt:
            ent = self.tt.get(key)
            if ent is not None:
                lo, hi, old_move = ent
            else:
                old_move = None
            if v <= alpha:
                if v < hi:
                    hi = v
            elif v >= beta:
                if v > lo:
                    lo = v
            else:
                lo = hi = v
            self.tt[key] = (lo, hi, old_move if move is None else move)
        return v

    def _lead(self, leader: int, alpha: int, beta: int, tricks_left: int,
              alive_ts: list, tt_move, sim_move) -> tuple[int, tuple | None]:
        """Search the leader's choices for one trick; returns (value, move).

        The returned move is (suit, class-index-from-top), a rank-free form
        that stays valid for every position sharing the node's
        transposition key; None when the node fails low.
        """
        h = self.h
        trump = self.trump
        hist = self.hist
        base = leader * 4
        pd_base = ((leader + 2) & 3) * 4

        reps_by_suit: list = [None, None, None, None]
        moves: list[tuple[int, int, int]] = []
        for s in (0, 1, 2, 3):
            mine = h[base + s]
            if not mine:
                continue
            blockers = alive_ts[s] & ~mine
            reps = _reps_of(mine, blockers)
            reps_by_suit[s] = reps
            top = 1 << ((mine | blockers).bit_length() - 1)
            if mine & top:
                pri = 1 if s != trump else 0
            elif h[pd_base + s] & top:
                pri = 2
            else:
                pri = 3
            sc = s * 13
            for r in reps:
                moves.append(((pri, -hist[sc + r], -r), s, r))
        if len(moves) > 1:
            moves.sort()
            front = None
            if tt_move is not None:
                s = tt_move[0]
                reps = reps_by_suit[s]
                if reps is not None and tt_move[1] < len(reps):
                    front = (s, reps[len(reps) - 1 - tt_move[1]])
            if front is None and sim_move is not None:
                # map the sim's card onto its equivalence class
                reps = reps_by_suit[sim_move[0]]
                if reps is not None:
                    rr = sim_move[1]
                    cls = None
                    for r in reps:
                        if r <= rr:
                            cls = r
                        else:
                            break
                    if cls is not None:
                        front = (sim_move[0], cls)
            if front is not None:
                for i, mv in enumerate(moves):
                    if mv[1] == front[0] and mv[2] == front[1]:
                        if i:
                            moves.insert(0, moves.pop(i))
                        break

        maximizing = _NS[leader]
        best = -1 if maximizing else tricks_left + 1
        best_move = None
        nxt = (leader + 1) & 3
        for _, s, r in moves:
            bit = 1 << r
            h[base + s] ^= bit
            v = self._follow(nxt, leader, s, leader, s, r, alpha, beta,
                             tricks_left, alive_ts)
            h[base + s] ^= bit
            if maximizing:
                if v > best:
                    best = v
                    best_move = (s, r)
                    if v > alpha:
                        if v >= beta:
                            hist[s * 13 + r] += tricks_left * tricks_left
                            return v, _norm_move(best_move, reps_by_suit)
                        alpha = v
            else:
                if v < best:
                    best = v
                    best_move = (s, r)
                    if v < beta:
                        if v <= alpha:
                            hist[s * 13 + r] += tricks_left * tricks_left
                            return v, _norm_move(best_move, reps_by_suit)
                        beta = v
        if maximizing:
            ok = best > alpha
        else:
            ok = best < beta
        return best, (_norm_move(best_move, reps_by_suit) if ok else None)

    def _follow(self, player: int, leader: int, led: int, win_p: int,
                win_s: int, win_r: int, alpha: int, beta: int,
                tricks_left: int, alive_ts: list) -> int:
        """In-trick alpha-beta for the second, third, and fourth players.

        Follower choices are reduced by dominance: a card that cannot beat
        the current winning card can never win the trick, and keeping a
        higher card of the same suit is never worse, so only classes that
        beat the current winner plus the lowest class (per suit, when
        discarding) are searched.  The fourth player additionally needs
        only the cheapest winning class, since the trick resolves at once.
        """
        h = self.h
        trump = self.trump
        base = player * 4
        last = ((player - leader) & 3) == 3

        moves: list[tuple[int, int, int]] = []
        mine = h[base + led]
        if mine:
            reps = _reps_of(mine, alive_ts[led] & ~mine)
            if led == trump and win_s != trump:
                first_win = 0          # every trump beats a plain-suit winner
            elif led == win_s:
                first_win = len(reps)
                for i, r in enumerate(reps):
                    if r > win_r:
                        first_win = i
                        break
            else:
                first_win = len(reps)  # following a plain suit under a ruff
            n = len(reps)
            if first_win < n:
                if last:
                    moves.append((0, led, reps[first_win]))
                else:
                    moves.extend((0, led, r) for r in reps[first_win:])
            if first_win > 0:
                moves.append((1, led, reps[0]))
        else:
            # void in the led suit: ruffs that win, else discards
            if trump >= 0:
                tmine = h[base + trump]
                if tmine:
                    treps = _reps_of(tmine, alive_ts[trump] & ~tmine)
                    if win_s != trump:
                        winners = treps
                    else:
                        winners = [r for r in treps if r > win_r]
                    if winners:
                        if last:
                            moves.append((0, trump, winners[0]))
                        else:
                            moves.extend((0, trump, r) for r in winners)
            for s in (0, 1, 2, 3):
                mine = h[base + s]
                if not mine:
                    continue
                low = _reps_of(mine, alive_ts[s] & ~mine)[0]
                if s == trump and (win_s != trump or low > win_r):
                    continue  # a winning ruff, covered above
                moves.append((2 + low, s, low))

        if len(moves) > 1:
            moves.sort()

        maximizing = _NS[player]
        best = -1 if maximizing else tricks_left + 1
        nxt = (player + 1) & 3

        for _, s, r in moves:
            if (s == win_s and r > win_r) or (s == trump and win_s != trump):
                n_p, n_s, n_r = player, s, r
            else:
                n_p, n_s, n_r = win_p, win_s, win_r
            bit = 1 << r
            h[base + s] ^= bit
            if last:
                inc = 1 if _NS[n_p] else 0
                if tricks_left == 1:
                    v = inc
                else:
                    v = inc + self._future(n_p, alpha - inc, beta - inc,
                                           tricks_left - 1)
            else:
                v = self._follow(nxt, leader, led, n_p, n_s, n_r,
                                 alpha, beta, tricks_left, alive_ts)
            h[base + s] ^= bit

            if maximizing:
                if v > best:
                    best = v
                    if v > alpha:
                        if v >= beta:
                            self.hist[s * 13 + r] += tricks_left
                            return v
                        alpha = v
            else:
                if v < best:
                    best = v
                    if v < beta:
                        if v <= alpha:
                            self.hist[s * 13 + r] += tricks_left
                            return v
                        beta = v
        return best


def _norm_move(move: tuple | None, reps_by_suit: list) -> tuple | None:
    """Translate an actual (suit, rank) into (suit, class-index-from-top)."""
    if move is None:
        return None
    s, r = move
    reps = reps_by_suit[s]
    idx = 0
    for rr in reversed(reps):
        if rr == r:
            return (s, idx)
        idx += 1
    return None


# ---------------------------------------------------------------------------
# Public API
# ---------------------------------------------------------------------------


def _check_deal(deal: Deal) -> None:
    union = 0
    total = 0
    sizes = set()
    for hand in deal.hands:
        union |= hand
        total += hand.bit_count()
        sizes.add(hand.bit_count())
    if len(sizes) != 1:
        raise ValueError("all four hands must have the same size")
    if union.bit_count() != total:
        raise ValueError("hands overlap")


def _trump_of(strain: Strain) -> int:
    t = strain.trump_suit
    return -1 if t is None else t


def _use_native(engine: str) -> bool:
    if engine == "python":
        return False
    if engine == "native":
        if not _native.available():
            raise RuntimeError("native solver core is not available")
        return True
    if engine != "auto":
        raise ValueError(f"unknown engine {engine!r}")
    return _native.available()


def solve(deal: Deal, strain: Strain, declarer: int,
          use_table: bool = True, engine: str = "auto") -> int:
    """Tricks won by the declaring side under optimal play by all seats.

    ``engine`` selects the search core: "python" (reference), "native"
    (the C port, cross-checked against the reference in the tests), or
    "auto" (native when buildable, else python).  Both are exact, so the
    result never depends on the engine.  ``use_table=False`` disables the
    transposition table and implies the python engine.
    """
    _check_deal(deal)
    leader = (declarer + 1) & 3
    total = deal.north.bit_count()
    if use_table and _use_native(engine):
        ns = _native.ns_tricks(deal.hands, _trump_of(strain), leader)
    else:
        solver = DoubleDummySolver(deal, strain, use_table=use_table)
        ns = solver.ns_tricks(leader)
    return ns if _NS[declarer] else total - ns


def best_declarer_tricks(deal: Deal, strain: Strain,
                         solver: DoubleDummySolver | None = None,
                         hint: int | None = None,
                         engine: str = "auto") -> int:
    """Tricks for the better of the North and South declarations.

    The two solves differ only in the opening leader and share one
    transposition table, so the second is nearly free.  ``hint`` seeds the
    binary search (e.g. with the previous sample's count).
    """
    if solver is None:
        _check_deal(deal)
        if _use_native(engine):
            return _native.best_declarer(
                deal.hands, _trump_of(strain),
                -1 if hint is None else hint)
        solver = DoubleDummySolver(deal, strain)
    total = solver.tricks_total
    if hint is not None and 0 <= hint <= total:
        # confirm-or-move: the hint is usually exact, costing two probes
        if solver.ns_tricks_at_least(1, hint):
            if hint == total or not solver.ns_tricks_at_least(1, hint + 1):
                v_east = hint
            else:
                v_east = solver.ns_tricks(1, hint + 1, total)
        else:
            v_east = solver.ns_tricks(1, 0, hint - 1)
    else:
        v_east = solver.ns_tricks(1)  # North declares, East leads
    # South declares, West leads; only the max matters, so probe first.
    if v_east >= total:
        return v_east
    if solver.ns_tricks_at_least(3, v_east + 1):
        return solver.ns_tricks(3, v_east + 1, total)
    return v_east


def solve_all(deal: Deal, hints: list[int] | None = None,
              engine: str = "auto") -> list[int]:
    """Best-declarer trick counts for all five strains (C, D, H, S, NT).

    ``hints`` seeds the per-strain binary searches (e.g. with a previous
    sample's counts); without hints each strain is seeded by the previous
    strain's value, which correlates well.  Hints never change results.
    """
    _check_deal(deal)
    out: list[int] = []
    prev: int | None = None
    for s in range(5):
        hint = hints[s] if hints is not None else prev
        v = best_declarer_tricks(deal, Strain(s), hint=hint, engine=engine)
        out.append(v)
        prev = v
    return out


# ---------------------------------------------------------------------------
# Exhaustive oracle: full-width minimax, no pruning, no caching.
# ---------------------------------------------------------------------------

MAX_ORACLE_CARDS = 5


def _oracle_play(h: list, trump: int, pos: int, player: int, led: int,
                 win_p: int, win_s: int, win_r: int, tricks_left: int) -> int:
    """Full-width minimax over every card; no pruning, no caching."""
    if pos == 4:
        inc = 1 if win_p == 0 or win_p == 2 else 0
        if tricks_left == 1:
            return inc
        return inc + _oracle_play(h, trump, 0, win_p, -1, -1, -1, -1,
                                  tricks_left - 1)
    base = player * 4
    maximizing = player == 0 or player == 2
    best = -1 if maximizing else 99
    nxt = (player + 1) & 3
    if led >= 0 and h[base + led]:
        suits = (led,)
    else:
        suits = (0, 1, 2, 3)
    for s in suits:
        m = h[base + s]
        while m:
            low = m & -m
            m ^= low
            r = low.bit_length() - 1
            if led < 0:
                n_led, n_p, n_s, n_r = s, player, s, r
            elif (s == win_s and r > win_r) or (s == trump and win_s != trump):
                n_led, n_p, n_s, n_r = led, player, s, r
            else:
                n_led, n_p, n_s, n_r = led, win_p, win_s, win_r
            h[base + s] ^= low
            v = _oracle_play(h, trump, pos + 1, nxt, n_led, n_p, n_s, n_r,
                             tricks_left)
            h[base + s] ^= low
            if maximizing:
                if v > best:
                    best = v
            else:
                if v < best:
                    best = v
    return best


def solve_exhaustive(deal: Deal, strain: Strain, declarer: int,
                     _track_sides: list | None = None) -> int:
    """Same contract as solve(), by brute force; hands of <= 5 cards only.

    ``_track_sides`` is a test hook: pass a list to receive the
    (north_south, east_west) trick totals under the computed optimum.
    """
    _check_deal(deal)
    size = deal.north.bit_count()
    if size > MAX_ORACLE_CARDS:
        raise ValueError(f"oracle limited to {MAX_ORACLE_CARDS} cards per seat")
    trumpsuit = strain.trump_suit
    trump = -1 if trumpsuit is None else trumpsuit
    h = []
    for hand in deal.hands:
        for s in range(4):
            h.append((hand >> (13 * s)) & 0x1FFF)
    leader = (declarer + 1) & 3
    ns = _oracle_play(h, trump, 0, leader, -1, -1, -1, -1, size)
    if _track_sides is not None:
        _track_sides.append((ns, size - ns))
    return ns if _NS[declarer] else size - ns
